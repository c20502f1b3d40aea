"""Equilibrium-measure densities from jumps of xi and theta'.

The three measures live on [-c, c] (mu1), the imaginary axis (mu2), and the
real axis (mu3).  Their densities are obtained from the boundary jumps of
the sheet functions; boundary values are taken at a distance ``delta`` off
the axis (default 1e-8).  Densities are reported with respect to arclength
along the carrier, oriented left-to-right on the real axis and upward on
the imaginary axis, so that the total masses come out as (1, 2/3, 1/3).
"""

from __future__ import annotations

import math

import numpy as np

from . import surface as sf
from .errors import OutsideSupport, QuadratureFailure

__all__ = [
    "density_mu1",
    "density_mu2",
    "density_mu3",
    "sigma2_density",
    "mass_mu1",
    "mass_mu2",
    "mass_mu3",
    "xi_integral_check",
]

_DELTA = 1e-8
_IM_TOL = 1e-7


def _real_cast(value: complex, where: str) -> float:
    if abs(value.imag) > _IM_TOL * max(1.0, abs(value.real)):
        raise QuadratureFailure(f"{where}: density has spurious imaginary part {value.imag}")
    return value.real


def density_mu1(x: float, p: sf.SurfaceParams, delta: float = _DELTA) -> float:
    """d mu1/dx = (1/pi) Im xi_{1,+}(x) on (-c, c)."""
    if abs(x) >= p.c:
        raise OutsideSupport(f"x = {x} outside (-c, c) with c = {p.c}")
    xi = sf.xi_branches(complex(x, delta), p).xi
    return xi[0].imag / math.pi


def density_mu2(y: float, p: sf.SurfaceParams, delta: float = _DELTA) -> float:
    """Density of mu2 at the point iy, with respect to dy.

    (1/2 pi)[(xi_{2,+} - xi_{2,-}) - tau (s_{1,+} - s_{1,-})](iy); the + side
    of the upward-oriented imaginary axis is Re z < 0.
    """
    z_plus = complex(-delta, y)
    z_minus = complex(delta, y)
    xi_jump = sf.xi_branches(z_plus, p).xi[1] - sf.xi_branches(z_minus, p).xi[1]
    s_jump = (sf.theta_branches(z_plus, p.alpha, p.tau).s[0]
              - sf.theta_branches(z_minus, p.alpha, p.tau).s[0])
    return _real_cast((xi_jump - p.tau * s_jump) / (2.0 * math.pi), "density_mu2")


def density_mu3(x: float, p: sf.SurfaceParams, delta: float = _DELTA) -> float:
    """Density of mu3 at x: (1/2 pi i)[(xi_{3,+} - xi_{3,-}) - tau (s_{2,+} - s_{2,-})](x)."""
    if x == 0.0:
        raise OutsideSupport("mu3 density undefined at the origin")
    z_plus = complex(x, delta)
    z_minus = complex(x, -delta)
    xi_jump = sf.xi_branches(z_plus, p).xi[2] - sf.xi_branches(z_minus, p).xi[2]
    s_jump = (sf.theta_branches(z_plus, p.alpha, p.tau).s[1]
              - sf.theta_branches(z_minus, p.alpha, p.tau).s[1])
    return _real_cast((xi_jump - p.tau * s_jump) / (2.0j * math.pi), "density_mu3")


def sigma2_density(y: float, alpha: float, tau: float) -> float:
    """Constraint density on the imaginary axis: (tau/pi) Re s(iy), s the
    cubic root of s^3 + alpha s = tau z with largest real part."""
    roots = np.roots([1.0, 0.0, alpha, -tau * complex(0.0, y)])
    return (tau / math.pi) * float(np.max(roots.real))


# ---------------------------------------------------------------------------
# Masses.  The integrands are evaluated on fixed composite Gauss-Legendre
# grids, marched along the integration line (sequential branch continuation
# between neighboring nodes) instead of re-tracking each point separately.

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _graded_mesh(a: float, b: float, grade_a: bool, grade_b: bool,
                 levels: int = 18) -> np.ndarray:
    """Panel edges on [a, b], geometrically refined toward graded ends."""
    ts = {0.0, 0.25, 0.5, 0.75, 1.0}
    for k in range(2, levels):
        if grade_a:
            ts.add(2.0 ** (-k))
        if grade_b:
            ts.add(1.0 - 2.0 ** (-k))
    mesh = np.array(sorted(ts))
    return a + (b - a) * mesh


def _panel_quadrature(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * _GL_NODES)
        weights.append(half * _GL_WEIGHTS)
    return np.concatenate(nodes), np.concatenate(weights)


def mass_mu1(p: sf.SurfaceParams, delta: float = _DELTA) -> float:
    """Total mass of mu1; contract: 1."""
    edges = _graded_mesh(0.0, p.c, grade_a=True, grade_b=True)
    x, w = _panel_quadrature(edges)
    xi1 = sf.xi_sheet_on_path(x + 1j * delta, p, sheet=0)
    # factor 2 from even symmetry of the density
    return 2.0 * float(w @ xi1.imag) / math.pi


def _tail_integral(rho, cutoff: float) -> float:
    """Integral of rho over (cutoff, infinity) from a two-term decay fit.

    The jump densities expand in powers of y^{-2/3} starting at y^{-5/3};
    fit rho(y) ~ C1 y^{-5/3} + C2 y^{-7/3} on [cutoff/4, cutoff] and
    integrate the model."""
    ys = np.geomspace(cutoff / 4.0, cutoff, 8)
    vals = np.array([rho(y) for y in ys])
    basis = np.column_stack([ys ** (-5.0 / 3.0), ys ** (-7.0 / 3.0)])
    (c1, c2), *_ = np.linalg.lstsq(basis, vals, rcond=None)
    return 1.5 * c1 * cutoff ** (-2.0 / 3.0) + 0.75 * c2 * cutoff ** (-4.0 / 3.0)


def _far_mesh(cutoff: float) -> np.ndarray:
    """Edges 1, 2, 4, ... out to the cutoff."""
    far = [1.0]
    while far[-1] < cutoff:
        far.append(min(2.0 * far[-1], cutoff))
    return np.array(far)


def mass_mu2(p: sf.SurfaceParams, cutoff: float = 200.0,
             delta: float = _DELTA) -> tuple[float, float]:
    """Total mass of mu2 and the tail estimate added for |y| > cutoff.

    The jump density decays like C |y|^{-5/3}; C is fitted on
    [cutoff/2, cutoff] and the tail integral (3/2) C cutoff^{-2/3} is added
    for each end of the axis.  Contract: mass = 2/3.
    """
    edges = np.concatenate([
        _graded_mesh(0.0, 1.0, grade_a=True, grade_b=False),
        _far_mesh(cutoff)[1:],
    ])
    y, w = _panel_quadrature(edges)
    xi_jump = (sf.xi_sheet_on_path(-delta + 1j * y, p, sheet=1)
               - sf.xi_sheet_on_path(delta + 1j * y, p, sheet=1))
    s_jump = (sf.cubic_sheet_on_path(-delta + 1j * y, p.alpha, p.tau, sheet=0)
              - sf.cubic_sheet_on_path(delta + 1j * y, p.alpha, p.tau, sheet=0))
    rho_vals = (xi_jump - p.tau * s_jump) / (2.0 * math.pi)
    if np.max(np.abs(rho_vals.imag)) > _IM_TOL:
        raise QuadratureFailure("mass_mu2: density has spurious imaginary part")
    tail = _tail_integral(lambda yy: density_mu2(yy, p), cutoff)
    return 2.0 * float(w @ rho_vals.real) + 2.0 * tail, 2.0 * tail


def mass_mu3(p: sf.SurfaceParams, cutoff: float = 200.0,
             delta: float = _DELTA) -> tuple[float, float]:
    """Total mass of mu3 and the tail estimate; contract: 1/3."""
    xs = sf.x_star(p.alpha, p.tau)
    edges = np.concatenate([
        _graded_mesh(0.0, xs, grade_a=True, grade_b=True),
        _graded_mesh(xs, 1.0, grade_a=True, grade_b=False)[1:],
        _far_mesh(cutoff)[1:],
    ])
    x, w = _panel_quadrature(edges)
    xi_jump = (sf.xi_sheet_on_path(x + 1j * delta, p, sheet=2)
               - sf.xi_sheet_on_path(x - 1j * delta, p, sheet=2))
    s_jump = (sf.cubic_sheet_on_path(x + 1j * delta, p.alpha, p.tau, sheet=1)
              - sf.cubic_sheet_on_path(x - 1j * delta, p.alpha, p.tau, sheet=1))
    rho_vals = (xi_jump - p.tau * s_jump) / (2.0j * math.pi)
    if np.max(np.abs(rho_vals.imag)) > _IM_TOL:
        raise QuadratureFailure("mass_mu3: density has spurious imaginary part")
    tail = _tail_integral(lambda xx: density_mu3(xx, p), cutoff)
    return 2.0 * float(w @ rho_vals.real) + 2.0 * tail, 2.0 * tail


def xi_integral_check(p: sf.SurfaceParams, delta: float = _DELTA) -> tuple[float, float]:
    """(Im int_{-c}^c xi_{1,+}, Im int_{-c}^c xi_{2,+}); contract (pi, -pi)."""
    edges = _graded_mesh(0.0, p.c, grade_a=True, grade_b=True)
    x, w = _panel_quadrature(edges)
    out = []
    for sheet in (0, 1):
        vals_right = sf.xi_sheet_on_path(x + 1j * delta, p, sheet)
        vals_left = sf.xi_sheet_on_path(-x[::-1] + 1j * delta, p, sheet)
        out.append(float(w @ vals_right.imag) + float(w[::-1] @ vals_left.imag))
    return out[0], out[1]
