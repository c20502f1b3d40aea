"""Tests for the steepest-descent double-scaling evaluator."""

import cmath
import math

import numpy as np
import pytest

from critkernels import kernels
from critkernels.dscale import DoubleScaling, airy_model, double_scaling_gap
from critkernels.errors import DomainRestriction


@pytest.fixture(scope="module")
def ds3():
    c = 2.0 ** (5.0 / 3.0) / 3.0
    return DoubleScaling(3.0, 0.5, u_points=(c * 0.5, c * 0.7))


def test_airy_model_jumps():
    # [DERIVED] the closed-form Airy parametrix has the exact Stokes jumps
    expected = {
        0.0: np.array([[1.0, 1.0], [0.0, 1.0]]),
        2.0 * math.pi / 3.0: np.array([[1.0, 0.0], [-1.0, 1.0]]),
        -2.0 * math.pi / 3.0: np.array([[1.0, 0.0], [-1.0, 1.0]]),
        math.pi: np.array([[0.0, -1.0], [1.0, 0.0]]),
    }
    for ang, J in expected.items():
        for r in (0.7, 2.0):
            h = 1e-7
            xp = r * cmath.exp(1j * (ang + h))
            xm = r * cmath.exp(1j * (ang - h))
            Pp, Pm = airy_model(xp), airy_model(xm)
            G = np.linalg.solve(Pm, Pp)
            assert np.max(np.abs(G - J)) < 1e-5, ang


def test_airy_model_det():
    # [DERIVED] Wronskian normalization makes det = const = -1/(2 pi) *
    # (2 pi) ... i.e. unimodular after the c-scalings; check constancy
    vals = [np.linalg.det(airy_model(z))
            for z in (1.0, 1j, -2.0 + 0.5j, 3.0 * cmath.exp(0.4j))]
    for v in vals[1:]:
        assert abs(v - vals[0]) < 1e-10
    assert abs(abs(vals[0]) - 1.0) < 1e-10


def test_exponent_identity(ds3):
    # [DERIVED] a^3 (4/3) f1^3 - a nu f1 = a^3 (g2 - g1)/2 exactly
    a = ds3.a
    for z in (0.3 + 0.2j, -0.5j, 0.61 * cmath.exp(2.1j)):
        f1 = ds3.f1(z)
        nu = ds3.nu_of(z)
        lhs = a ** 3 * (4.0 / 3.0) * f1 ** 3 - a * nu * f1
        rhs = a ** 3 * (ds3.g(z, 2) - ds3.g(z, 1)) / 2.0
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_nu_at_origin(ds3):
    # [DERIVED] nu(0) = 2^{5/3} sigma
    assert abs(ds3.nu_of(1e-8) - 2.0 ** (5.0 / 3.0) * 0.5) < 1e-8


def test_r_far_field(ds3):
    # [DERIVED] the residual function tends to I away from the contour
    for z in (6.0 + 4.0j, -8.0j, -5.0 + 1.0j):
        assert np.max(np.abs(ds3.r_eval(z) - np.eye(4))) < 0.01


def test_r_unimodular(ds3):
    # [DERIVED] det R = 1 up to discretization error
    for z in (0.3j, 1.5j, 2.0 + 0.5j):
        assert abs(np.linalg.det(ds3.r_eval(z)) - 1.0) < 0.01


def test_kernel_diag_real(ds3):
    # [DERIVED] the scaled kernel diagonal is real (point-process density)
    for x in (-0.5, 0.4, 0.7):
        k = ds3.kernel(x, x)
        assert abs(k.imag) < 0.01 * max(1.0, abs(k.real))
        assert k.real > 0.0


@pytest.mark.slow
def test_validates_against_direct_solver():
    # [DERIVED] at a = 2 the direct solver is still usable: the
    # steepest-descent kernel must agree with it
    a, sigma = 2.0, 0.5
    scale = 2.0 ** (5.0 / 3.0) * a
    c = scale / a ** 2
    ds = DoubleScaling(a, sigma, u_points=(c * 0.5, c * 0.7))
    s_par, t_par = a * a / 2.0, -a * (1.0 - sigma / a ** 2)
    for x in (-0.5, 0.7):
        ks = ds.kernel(x, x).real
        kd = scale * kernels.kernel_cr_diag(x * scale, s_par, t_par).real
        assert abs(ks - kd) < 0.01 * abs(kd), x
    ps = ds.kernel(-0.5, 0.7) * ds.kernel(0.7, -0.5)
    pd = (scale ** 2
          * kernels.kernel_cr(-0.5 * scale, 0.7 * scale, s_par, t_par)
          * kernels.kernel_cr(0.7 * scale, -0.5 * scale, s_par, t_par))
    assert abs(ps - pd) < 0.05 * abs(pd)


def test_gap_decreasing():
    # [PAPER] the scaled kernel approaches K_PII: the 2x2 determinant gap
    # decreases in a
    g3 = double_scaling_gap(3.0, 0.5, -0.5, 0.7)
    g4 = double_scaling_gap(4.0, 0.5, -0.5, 0.7)
    assert g4 < g3


def test_gap_precondition():
    # [TRIVIAL] a >= 2 is required
    with pytest.raises(DomainRestriction):
        double_scaling_gap(1.5, 0.5, -0.5, 0.7)
