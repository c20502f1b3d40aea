"""Modified Riemann surface: gamma, the algebraic function w, xi, lambda, theta.

The four-sheeted genus-zero surface attached to the quartic/quadratic
two-matrix model near the multicritical point (alpha, tau) = (-1, 1).
Everything in this module is a pure function of immutable inputs.

Conventions
-----------
* Quadrants I..IV are the open quadrants of the z-plane.  Points that lie
  exactly on an axis are evaluated as one-sided limits: the real axis is
  approached from above (Im z > 0) and the imaginary axis from the left
  (Re z < 0).  Callers that need a specific side pass ``x +/- 1j*delta``.
* Branches are ordered by modulus descending, ``|w1| >= ... >= |w4|``,
  with ties resolved by continuity within the open quadrant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DegenerateRoots, NoRootOnBranch, PathOnCut

__all__ = [
    "SurfaceParams",
    "SheetValues",
    "ThetaValues",
    "PhaseCase",
    "gamma_of",
    "scaled_params",
    "w_branches",
    "xi_branches",
    "lambda_branches",
    "theta_branches",
    "classify_phase",
]

_AXIS_NUDGE = 1e-12


# ---------------------------------------------------------------------------
# Parameter container and gamma


@dataclass(frozen=True)
class SurfaceParams:
    """The tuple (alpha, tau, gamma, c) pinning one modified Riemann surface."""

    alpha: float
    tau: float
    gamma: float
    c: float

    @classmethod
    def from_alpha_tau(cls, alpha: float, tau: float) -> "SurfaceParams":
        g = gamma_of(alpha, tau)
        return cls(alpha=alpha, tau=tau, gamma=g, c=(16.0 / (3.0 * math.sqrt(3.0))) * g**1.5)

    @classmethod
    def critical(cls) -> "SurfaceParams":
        return cls.from_alpha_tau(-1.0, 1.0)


def _gamma_residual(g: float, alpha: float, tau: float) -> float:
    return 3.0 / g - 9.0 * g * g + 5.0 * tau ** (4.0 / 3.0) * g - alpha * tau ** (2.0 / 3.0)


def _gamma_newton(g0: float, alpha: float, tau: float) -> float | None:
    """Newton iteration for the gamma equation; None on failure."""
    g = g0
    for _ in range(60):
        f = _gamma_residual(g, alpha, tau)
        fp = -3.0 / (g * g) - 18.0 * g + 5.0 * tau ** (4.0 / 3.0)
        step = f / fp
        g_new = g - step
        if g_new <= 0.0 or not math.isfinite(g_new):
            return None
        if abs(g_new - g) < 1e-15 * max(1.0, abs(g_new)):
            g = g_new
            break
        g = g_new
    if abs(_gamma_residual(g, alpha, tau)) < 1e-12:
        return g
    return None


def gamma_of(alpha: float, tau: float) -> float:
    """Root of alpha*tau^{2/3} = 3/gamma - 9 gamma^2 + 5 tau^{4/3} gamma.

    Returns the branch continuous to gamma = 1 at (alpha, tau) = (-1, 1),
    followed by straight-line homotopy in the (alpha, tau)-plane.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    g = 1.0
    t = 0.0
    step = 1.0
    a_last, tau_last = -1.0, 1.0
    while t < 1.0:
        t_next = min(1.0, t + step)
        a_cur = -1.0 + t_next * (alpha + 1.0)
        tau_cur = 1.0 + t_next * (tau - 1.0)
        g_new = _gamma_newton(g, a_cur, tau_cur) if tau_cur > 0.0 else None
        if g_new is None:
            step *= 0.5
            if step < 1e-8:
                raise NoRootOnBranch(a_last, tau_last)
            continue
        g, t = g_new, t_next
        a_last, tau_last = a_cur, tau_cur
        step = min(1.0 - t, step * 2.0) if t < 1.0 else 0.0
        step = max(step, 1e-8) if t < 1.0 else 0.0
    return g


def scaled_params(a: float, b: float, n: int) -> tuple[float, float]:
    """(alpha, tau) = (-1, 1) + a n^{-1/3} (2, 1) + b n^{-2/3} (-1, 2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e1 = n ** (-1.0 / 3.0)
    e2 = n ** (-2.0 / 3.0)
    return (-1.0 + 2.0 * a * e1 - b * e2, 1.0 + a * e1 + 2.0 * b * e2)


# ---------------------------------------------------------------------------
# Quadrants and axis handling


def _nudge_off_axis(z: complex) -> complex:
    """One-sided-limit convention for axis points (see module docstring)."""
    x, y = z.real, z.imag
    if x != 0.0 and y != 0.0:
        return z
    scale = _AXIS_NUDGE * max(1.0, abs(z))
    if y == 0.0:
        z = complex(x, scale)
    if z.real == 0.0:
        z = complex(-scale, z.imag)
    return z


def _quadrant(z: complex) -> str:
    if z.real > 0.0:
        return "I" if z.imag > 0.0 else "IV"
    return "II" if z.imag > 0.0 else "III"


_QUADRANT_ANGLE = {"I": 0.25 * math.pi, "II": 0.75 * math.pi,
                   "III": -0.75 * math.pi, "IV": -0.25 * math.pi}


# ---------------------------------------------------------------------------
# Quartic roots and continuity tracking


def _quartic_roots(z: complex, gamma: float) -> np.ndarray:
    """Roots of (w^2 + gamma^3)^2 = z w^3, polished by one Newton step each."""
    g3 = gamma**3
    roots = np.roots([1.0, -z, 2.0 * g3, 0.0, g3 * g3])
    for _ in range(2):
        f = roots**4 - z * roots**3 + 2.0 * g3 * roots**2 + g3 * g3
        fp = 4.0 * roots**3 - 3.0 * z * roots**2 + 4.0 * g3 * roots
        mask = np.abs(fp) > 0.0
        roots[mask] -= f[mask] / fp[mask]
    return roots


_PERMS4 = list(permutations(range(4)))


def _match_roots(prev: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, float]:
    """Permute ``new`` to best match ``prev``; return (matched, max movement)."""
    best, best_cost = None, math.inf
    for perm in _PERMS4:
        cand = new[list(perm)]
        cost = float(np.max(np.abs(cand - prev)))
        if cost < best_cost:
            best, best_cost = cand, cost
    return best, best_cost


def _min_separation(roots: np.ndarray) -> float:
    sep = math.inf
    for i in range(4):
        for j in range(i + 1, 4):
            sep = min(sep, abs(roots[i] - roots[j]))
    return sep


def _continue_roots(prev: np.ndarray, z0: complex, z1: complex, gamma: float,
                    depth: int = 0) -> np.ndarray:
    """Continue labeled roots from z0 to z1 along the straight segment."""
    new = _quartic_roots(z1, gamma)
    matched, movement = _match_roots(prev, new)
    sep = _min_separation(new)
    if movement <= 0.3 * sep or abs(z1 - z0) < 1e-14 * max(1.0, abs(z1)):
        return matched
    if depth > 60:
        raise DegenerateRoots(
            f"root continuation failed to separate branches near z = {z1}")
    mid = 0.5 * (z0 + z1)
    half = _continue_roots(prev, z0, mid, gamma, depth + 1)
    return _continue_roots(half, mid, z1, gamma, depth + 1)


def _reference_point(quadrant: str, p: SurfaceParams) -> complex:
    return 1.5 * p.c * cmath.exp(1j * _QUADRANT_ANGLE[quadrant])


def _reference_roots(quadrant: str, p: SurfaceParams) -> np.ndarray:
    """Modulus-ordered roots at the quadrant's interior reference point."""
    z_ref = _reference_point(quadrant, p)
    roots = _quartic_roots(z_ref, p.gamma)
    order = np.argsort(-np.abs(roots))
    roots = roots[order]
    mods = np.abs(roots)
    if np.min(mods[:-1] - mods[1:]) < 1e-9 * max(1.0, float(mods[0])):
        raise DegenerateRoots(
            f"ambiguous modulus ordering at reference point {z_ref}")
    return roots


def _tracked_roots(z: complex, p: SurfaceParams) -> tuple[np.ndarray, str]:
    z = _nudge_off_axis(z)
    if z == 0.0:
        raise DegenerateRoots("z = 0 is a branch point")
    quad = _quadrant(z)
    ref = _reference_point(quad, p)
    prev = _reference_roots(quad, p)
    return _continue_roots(prev, ref, z, p.gamma), quad


# ---------------------------------------------------------------------------
# Sheet values


@dataclass(frozen=True)
class SheetValues:
    """Ordered four-branch values at one complex point."""

    z: complex
    quadrant: str
    w: np.ndarray
    xi: np.ndarray | None = None
    lam: np.ndarray | None = None


def _xi_from_w(w: np.ndarray, p: SurfaceParams) -> np.ndarray:
    g3 = p.gamma**3
    num = w**4 + (3.0 * g3 - 1.0) * w**2 + p.tau ** (4.0 / 3.0) * p.gamma**5
    den = w * (w**2 + g3)
    return num / den


def w_branches(z: complex, p: SurfaceParams) -> SheetValues:
    """The four quartic roots w_j(z), modulus-ordered and quadrant-continuous."""
    w, quad = _tracked_roots(complex(z), p)
    return SheetValues(z=complex(z), quadrant=quad, w=w)


def xi_branches(z: complex, p: SurfaceParams) -> SheetValues:
    """The modified xi-functions on the four sheets at z."""
    w, quad = _tracked_roots(complex(z), p)
    return SheetValues(z=complex(z), quadrant=quad, w=w, xi=_xi_from_w(w, p))


# ---------------------------------------------------------------------------
# lambda-functions: antiderivatives of xi along the radial ray


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _xi_on_ray(phi: float, radii: np.ndarray, p: SurfaceParams) -> np.ndarray:
    """xi_j at z = r e^{i phi} for each r in ``radii`` (any order).

    Tracks branches once along the ray instead of re-tracking from the
    quadrant reference for every point.  Returns shape (len(radii), 4).
    """
    order = np.argsort(-radii)
    pts = radii[order] * cmath.exp(1j * phi)
    out = np.empty((len(radii), 4), dtype=complex)
    quad = _quadrant(pts[0])
    z_prev = _reference_point(quad, p)
    w_prev = _reference_roots(quad, p)
    for k, z_k in enumerate(pts):
        w_prev = _continue_roots(w_prev, z_prev, z_k, p.gamma)
        z_prev = z_k
        out[order[k]] = _xi_from_w(w_prev, p)
    return out


def _xi_on_arc(radius: float, thetas: np.ndarray, p: SurfaceParams) -> np.ndarray:
    """xi_j at z = radius e^{i theta} for each theta, tracked from thetas[0]."""
    out = np.empty((len(thetas), 4), dtype=complex)
    quad = _quadrant(radius * cmath.exp(1j * thetas[0]))
    z_prev = _reference_point(quad, p)
    w_prev = _reference_roots(quad, p)
    for k, th in enumerate(thetas):
        z_k = radius * cmath.exp(1j * th)
        w_prev = _continue_roots(w_prev, z_prev, z_k, p.gamma)
        z_prev = z_k
        out[k] = _xi_from_w(w_prev, p)
    return out


def _panel_nodes(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * _GL_NODES)
        weights.append(half * _GL_WEIGHTS)
    return np.concatenate(nodes), np.concatenate(weights)


def _lambda_integral(z: complex, p: SurfaceParams, panels: int = 8) -> np.ndarray:
    """int_0^z xi_j(s) ds for j = 1..4, along a path inside the quadrant.

    The path runs radially from 0 at the quadrant's center angle out to
    |z|, then along the circular arc to z.  The radial leg keeps maximal
    distance from the branch points +-c; on it, substituting s = u^2
    e^{i phi0} removes the s^{-1/2} singularity at the origin (the
    transformed integrand is analytic in u).  The arc leg approaches an
    axis only at its endpoint, at distance ~ ||z| - c| from the nearest
    branch point, so panels are refined geometrically toward that end.
    """
    phi = cmath.phase(z)
    phi0 = _QUADRANT_ANGLE[_quadrant(z)]
    radius = abs(z)
    # radial leg at angle phi0
    u, wq = _panel_nodes(np.linspace(0.0, math.sqrt(radius), panels + 1))
    xi_vals = _xi_on_ray(phi0, u * u, p)
    total = wq @ (2.0 * u[:, None] * cmath.exp(1j * phi0) * xi_vals)
    # arc leg from phi0 to phi
    if phi != phi0:
        span = phi - phi0
        edges = [phi0]
        frac = 1.0
        while frac > 1e-3:
            frac *= 0.5
            edges.append(phi - frac * span)
        edges.append(phi)
        th, wq = _panel_nodes(np.array(edges))
        xi_vals = _xi_on_arc(radius, th, p)
        pts = radius * np.exp(1j * th)
        total = total + wq @ (1j * pts[:, None] * xi_vals)
    return total


def lambda_branches(z: complex, p: SurfaceParams) -> SheetValues:
    """lambda_j(z) = int_0^z xi_j + {0 or i pi} per the quadrant/index rule."""
    z = complex(z)
    if z.real == 0.0 or z.imag == 0.0:
        raise PathOnCut(f"lambda requested on an axis: z = {z}")
    quad = _quadrant(z)
    lam = _lambda_integral(z, p)
    shift = 1j * math.pi
    if quad in ("I", "II"):
        lam[1] += shift
        lam[2] += shift
    else:
        lam[0] += shift
        lam[3] += shift
    w, _ = _tracked_roots(z, p)
    return SheetValues(z=z, quadrant=quad, w=w, xi=_xi_from_w(w, p), lam=lam)


def xi_sheet_on_path(points: np.ndarray, p: SurfaceParams, sheet: int) -> np.ndarray:
    """xi_{sheet} at each point of a polyline that stays inside one quadrant.

    Branch labels are fixed at the first point (tracked from the quadrant
    reference) and then marched point-to-point, which is much cheaper than
    re-tracking from the reference for every point.
    """
    points = np.asarray(points, dtype=complex)
    out = np.empty(len(points), dtype=complex)
    quad = _quadrant(points[0])
    z_prev = _reference_point(quad, p)
    w_prev = _reference_roots(quad, p)
    for k, z_k in enumerate(points):
        w_prev = _continue_roots(w_prev, z_prev, z_k, p.gamma)
        z_prev = z_k
        out[k] = _xi_from_w(w_prev, p)[sheet]
    return out


def cubic_sheet_on_path(points: np.ndarray, alpha: float, tau: float,
                        sheet: int) -> np.ndarray:
    """s_{sheet} at each point of a polyline inside one half-plane (Re != 0)."""
    points = np.asarray(points, dtype=complex)
    out = np.empty(len(points), dtype=complex)
    xs = x_star(alpha, tau)
    x_ref = 0.05 * xs if points[0].real > 0.0 else -0.05 * xs
    s_prev = _ordered_real_cubic(x_ref, alpha, tau)
    lift_im = math.copysign(0.5 * xs, points[0].imag if points[0].imag != 0.0 else 1.0)
    lift = complex(x_ref, lift_im)
    s_prev = _continue_roots3(s_prev, complex(x_ref), lift, alpha, tau)
    z_prev = lift
    for k, z_k in enumerate(points):
        s_prev = _continue_roots3(s_prev, z_prev, z_k, alpha, tau)
        z_prev = z_k
        out[k] = s_prev[sheet]
    return out


# ---------------------------------------------------------------------------
# theta-functions (three-sheeted cubic surface)


@dataclass(frozen=True)
class ThetaValues:
    """Cubic roots s_j and theta_j = -W(s_j) + tau z s_j at one point."""

    z: complex
    s: np.ndarray
    theta: np.ndarray


def _w_potential(s: np.ndarray, alpha: float) -> np.ndarray:
    return 0.25 * s**4 + 0.5 * alpha * s**2


def x_star(alpha: float, tau: float) -> float:
    """Edge of the real three-root window: (2/tau) (-alpha/3)^{3/2}."""
    if alpha >= 0.0:
        raise ValueError("x_star requires alpha < 0")
    return (2.0 / tau) * (-alpha / 3.0) ** 1.5


def _cubic_roots(z: complex, alpha: float, tau: float) -> np.ndarray:
    roots = np.roots([1.0, 0.0, alpha, -tau * z])
    for _ in range(2):
        f = roots**3 + alpha * roots - tau * z
        fp = 3.0 * roots**2 + alpha
        mask = np.abs(fp) > 0.0
        roots[mask] -= f[mask] / fp[mask]
    return roots


def _ordered_real_cubic(x: float, alpha: float, tau: float) -> np.ndarray:
    """Real roots on (-x*, x*), ordered by W(s) - tau x s ascending."""
    roots = np.real(_cubic_roots(x, alpha, tau))
    crit = _w_potential(roots, alpha) - tau * x * roots
    return roots[np.argsort(crit)].astype(complex)


def _match_roots3(prev: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, float]:
    best, best_cost = None, math.inf
    for perm in permutations(range(3)):
        cand = new[list(perm)]
        cost = float(np.max(np.abs(cand - prev)))
        if cost < best_cost:
            best, best_cost = cand, cost
    return best, best_cost


def _continue_roots3(prev: np.ndarray, z0: complex, z1: complex,
                     alpha: float, tau: float, depth: int = 0) -> np.ndarray:
    new = _cubic_roots(z1, alpha, tau)
    matched, movement = _match_roots3(prev, new)
    sep = min(abs(new[0] - new[1]), abs(new[0] - new[2]), abs(new[1] - new[2]))
    if movement <= 0.3 * sep or abs(z1 - z0) < 1e-14 * max(1.0, abs(z1)):
        return matched
    if depth > 60:
        raise DegenerateRoots(
            f"cubic continuation failed to separate branches near z = {z1}")
    mid = 0.5 * (z0 + z1)
    half = _continue_roots3(prev, z0, mid, alpha, tau, depth + 1)
    return _continue_roots3(half, mid, z1, alpha, tau, depth + 1)


def theta_branches(z: complex, alpha: float, tau: float) -> ThetaValues:
    """Cubic roots s_j of s^3 + alpha s = tau z and theta_j = -W(s_j) + tau z s_j.

    On the real window (-x*, x*) the three roots are real and ordered so
    that W(s_j) - tau x s_j is ascending; elsewhere the ordering is the
    continuous continuation of that one (axis points are one-sided limits,
    see the module docstring).
    """
    if tau <= 0.0 or alpha >= 0.0:
        raise ValueError("theta requires tau > 0 and alpha < 0")
    z = complex(z)
    xs = x_star(alpha, tau)
    if z.imag == 0.0 and abs(z.real) < xs:
        s = _ordered_real_cubic(z.real, alpha, tau)
    else:
        z_eff = _nudge_off_axis(z) if (z.imag == 0.0 or z.real == 0.0) else z
        x_ref = 0.05 * xs if z_eff.real > 0.0 else -0.05 * xs
        s_ref = _ordered_real_cubic(x_ref, alpha, tau)
        # rise off the real axis before heading to the target, so the path
        # keeps clear of the branch points +-x* when z sits just off the
        # real axis beyond the window
        lift = complex(x_ref, math.copysign(0.5 * xs, z_eff.imag))
        s_mid = _continue_roots3(s_ref, complex(x_ref), lift, alpha, tau)
        s = _continue_roots3(s_mid, lift, z_eff, alpha, tau)
    theta = -_w_potential(s, alpha) + tau * z * s
    return ThetaValues(z=z, s=s, theta=theta)


# ---------------------------------------------------------------------------
# Phase classifier


class PhaseCase:
    """Phase-diagram classification labels."""

    CaseI = "CaseI"
    CaseII = "CaseII"
    CaseIII = "CaseIII"
    CaseIV = "CaseIV"
    BoundaryI_II = "BoundaryI_II"
    BoundaryIII_IV = "BoundaryIII_IV"
    Multicritical = "Multicritical"
    UndeterminedII_III = "UndeterminedII_III"


def classify_phase(alpha: float, tau: float, tol: float = 1e-12) -> str:
    """Classify (alpha, tau) by the curves tau = sqrt(alpha+2), tau = sqrt(-1/alpha)."""
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    if abs(alpha + 1.0) <= tol and abs(tau - 1.0) <= tol:
        return PhaseCase.Multicritical
    parabola = math.sqrt(alpha + 2.0) if alpha >= -2.0 else None
    hyperbola = math.sqrt(-1.0 / alpha) if alpha < 0.0 else None
    if parabola is not None and abs(tau - parabola) <= tol:
        return PhaseCase.BoundaryI_II
    if alpha <= -1.0 and hyperbola is not None and abs(tau - hyperbola) <= tol:
        return PhaseCase.BoundaryIII_IV
    if alpha >= -1.0:
        if parabola is not None and tau < parabola:
            return PhaseCase.CaseI
        if alpha >= 0.0:
            return PhaseCase.CaseII
        return PhaseCase.UndeterminedII_III
    # alpha < -1 below here
    if hyperbola is not None and tau > hyperbola:
        return PhaseCase.CaseIII
    if alpha < -2.0:
        return PhaseCase.CaseIV
    # -2 <= alpha < -1 between the curves, or below the parabola
    if parabola is not None and tau < parabola:
        return PhaseCase.CaseI
    return PhaseCase.CaseIV
