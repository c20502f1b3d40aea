"""Finite-n biorthogonal polynomials and the kernel K_n.

The eigenvalues of the first matrix, averaged over the second, form a
determinantal point process with kernel

    K_n(x1, x2) = sum_{k<n} p_k(x1) Q_k(x2) / h_k^2,
    Q_k(x) = e^{-n V(x)} int q_k(y) e^{-n(W(y) - tau x y)} dy,

where {p_k}, {q_k} are the monic biorthogonal families of the weight
e^{-n(V(x) + W(y) - tau x y)} with V(x) = x^2/2 and
W(y) = y^4/4 + alpha y^2/2.

The polynomials come from an LDU factorization of the bimoment matrix
B[j][k] = iint x^j y^k e^{-n(...)} dx dy.  The x-integral is Gaussian
and done in closed form (complete the square in the coupling term),
reducing every bimoment to one-dimensional moments
m_l = int y^l e^{-n(W(y) - tau^2 y^2/2)} dy, which satisfy the exact
recursion n(m_{l+4} + beta m_{l+2}) = (l+1) m_l with beta = alpha -
tau^2; only m_0 and m_2 need quadrature.  The factorization is
exponentially ill-conditioned in n, so all of this runs in mpmath
arbitrary-precision arithmetic (default 64 * ceil(n/6) bits, with one
doubling retry if the factorization loses positivity).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .errors import DomainRestriction, QuadratureFailure

__all__ = [
    "BimomentMatrix",
    "BiorthogonalFamily",
    "bimoment_matrix",
    "biorthogonal",
    "polynomial_zeros",
    "kernel_n",
    "zero_counting_kolmogorov",
]


def _default_bits(n: int) -> int:
    return 64 * math.ceil(n / 6)


def _tail_cutoff(n: int, beta: float, lmax: int, bits: int) -> float:
    """Y with y^l e^{-n(y^4/4 + beta y^2/2)} below the working epsilon."""
    target = bits * math.log(2.0) + 40.0
    Y = 3.0
    while True:
        expo = n * (Y ** 4 / 4.0 + beta * Y ** 2 / 2.0) - lmax * math.log(Y)
        if expo > target:
            return Y
        Y += 0.5
        if Y > 60.0:
            raise QuadratureFailure("no usable quadrature cutoff found")


def _y_moments(n: int, alpha: float, tau: float, lmax: int):
    """Even moments m_l, l = 0..lmax, of e^{-n(W(y) - tau^2 y^2/2)}."""
    beta = alpha - tau * tau
    bits = mp.mp.prec
    Y = _tail_cutoff(n, beta, lmax, bits)
    nb = mp.mpf(n)
    bb = mp.mpf(beta)

    def weight(y):
        return mp.e ** (-nb * (y ** 4 / 4 + bb * y ** 2 / 2))

    # well of the weight (if beta < 0) guides the quadrature splits
    pts = [mp.mpf(0)]
    if beta < 0.0:
        w = math.sqrt(-beta)
        pts += [mp.mpf(0.5) * w, mp.mpf(w), mp.mpf(1.5) * w]
    pts += [mp.mpf(Y)]
    m = [mp.mpf(0)] * (lmax + 1)
    m[0] = 2 * mp.quad(weight, pts)
    if lmax >= 2:
        m[2] = 2 * mp.quad(lambda y: y ** 2 * weight(y), pts)
    for l in range(0, lmax - 3, 2):
        m[l + 4] = (l + 1) * m[l] / nb - bb * m[l + 2]
    return m


@dataclass
class BimomentMatrix:
    """Bimoments B[j][k], 0 <= j,k <= n (one extra row/column so that
    the degree-n polynomial p_{n,n} is available from the factorization)."""

    n: int
    alpha: float
    tau: float
    precision_bits: int
    entries: mp.matrix = field(repr=False)


@dataclass
class BiorthogonalFamily:
    """Monic biorthogonal polynomials and their norms.

    ``p_coeffs[k]``/``q_coeffs[k]`` hold the coefficients of p_k / q_k in
    increasing degree (mpmath numbers, length k+1); ``h2[k]`` the norms
    h_k^2 for k = 0..n-1.  One extra p-polynomial (degree n) is kept for
    zero studies.
    """

    n: int
    alpha: float
    tau: float
    precision_bits: int
    p_coeffs: list
    q_coeffs: list
    h2: list


def bimoment_matrix(n: int, alpha: float, tau: float,
                    precision_bits: int | None = None) -> BimomentMatrix:
    """Bimoment matrix of the coupled weight at size (n+1) x (n+1)."""
    if n > 36:
        raise DomainRestriction("n is capped at 36 (convergence rate makes "
                                "larger n uninformative)")
    if n % 6 != 0:
        raise DomainRestriction("n must be a multiple of 6")
    bits = _default_bits(n) if precision_bits is None else int(precision_bits)
    if bits < 8 * n:
        raise DomainRestriction("precision_bits must be at least 8 n")
    with mp.workprec(bits):
        size = n + 1
        lmax = 2 * size
        moms = _y_moments(n, alpha, tau, lmax)
        nb = mp.mpf(n)
        tb = mp.mpf(tau)
        # Gaussian moments G_m = int u^m e^{-n u^2/2} du (even m)
        G = [mp.mpf(0)] * (size + 1)
        G[0] = mp.sqrt(2 * mp.pi / nb)
        for mdeg in range(2, size + 1, 2):
            G[mdeg] = G[mdeg - 2] * (mdeg - 1) / nb
        B = mp.matrix(size, size)
        for j in range(size):
            binom = [mp.binomial(j, mdeg) for mdeg in range(j + 1)]
            for k in range(size):
                if (j + k) % 2:
                    continue
                acc = mp.mpf(0)
                for mdeg in range(0, j + 1, 2):
                    acc += binom[mdeg] * tb ** (j - mdeg) * G[mdeg] \
                        * moms[k + j - mdeg]
                B[j, k] = acc
    return BimomentMatrix(n=n, alpha=alpha, tau=tau, precision_bits=bits,
                          entries=B)


def biorthogonal(B: BimomentMatrix) -> BiorthogonalFamily:
    """Monic biorthogonal families by LDU factorization of the bimoments.

    Writing B = L D U with L, U unit-triangular, the coefficient rows of
    p_k are the rows of L^{-1} and those of q_k the columns of U^{-1};
    h_k^2 = D[k, k].  Retries once at doubled precision if positivity of
    the norms is lost.
    """
    for attempt in range(2):
        bits = B.precision_bits * (2 ** attempt)
        if attempt:
            B = bimoment_matrix(B.n, B.alpha, B.tau, precision_bits=bits)
        with mp.workprec(bits):
            size = B.n + 1
            M = B.entries.copy()
            # Doolittle, no pivoting: M is totally positive-like here
            L = mp.eye(size)
            U = mp.eye(size)
            d = [mp.mpf(0)] * size
            ok = True
            for i in range(size):
                piv = M[i, i]
                if piv <= 0:
                    ok = False
                    break
                d[i] = piv
                for r in range(i + 1, size):
                    L[r, i] = M[r, i] / piv
                for c in range(i + 1, size):
                    U[i, c] = M[i, c] / piv
                for r in range(i + 1, size):
                    for c in range(i + 1, size):
                        M[r, c] -= L[r, i] * piv * U[i, c]
            if not ok:
                continue
            Linv = _unit_lower_inverse(L)
            Uinv = _unit_lower_inverse(U.T)    # columns of U^{-1}
            p_coeffs = [[Linv[k, j] for j in range(k + 1)]
                        for k in range(size)]
            q_coeffs = [[Uinv[k, j] for j in range(k + 1)]
                        for k in range(size)]
        return BiorthogonalFamily(n=B.n, alpha=B.alpha, tau=B.tau,
                                  precision_bits=bits, p_coeffs=p_coeffs,
                                  q_coeffs=q_coeffs, h2=d[:B.n])
    raise QuadratureFailure("bimoment factorization lost positivity even "
                            "after doubling the working precision")


def _unit_lower_inverse(L: mp.matrix) -> mp.matrix:
    n = L.rows
    inv = mp.eye(n)
    for i in range(n):
        for j in range(i):
            acc = mp.mpf(0)
            for k in range(j, i):
                acc -= L[i, k] * inv[k, j]
            inv[i, j] = acc
    return inv


def polynomial_zeros(fam: BiorthogonalFamily, k: int | None = None):
    """Zeros of p_{k,n} (default k = n), as a sorted real array."""
    k = fam.n if k is None else k
    with mp.workprec(fam.precision_bits):
        coeffs = list(reversed(fam.p_coeffs[k]))      # highest degree first
        roots = mp.polyroots(coeffs, maxsteps=200, extraprec=fam.precision_bits)
        out = []
        for r in roots:
            out.append(complex(r))
    arr = np.array(out)
    return np.sort(arr.real) + 1j * arr.imag[np.argsort(arr.real)]


def _q_transform(fam: BiorthogonalFamily, k: int, x, bits: int):
    """Q_k(x) = e^{-n V(x)} int q_k(y) e^{-n(W(y) - tau x y)} dy."""
    nb = mp.mpf(fam.n)
    ab = mp.mpf(fam.alpha)
    tb = mp.mpf(fam.tau)
    xb = mp.mpf(x)
    coeffs = fam.q_coeffs[k]
    beta = fam.alpha
    Y = _tail_cutoff(fam.n, min(beta, beta - 0.0), 2 * fam.n, bits) + abs(x) + 2.0

    def integrand(y):
        poly = mp.mpf(0)
        for c in reversed(coeffs):
            poly = poly * y + c
        return poly * mp.e ** (-nb * (y ** 4 / 4 + ab * y ** 2 / 2 - tb * xb * y))

    pts = [mp.mpf(-Y), mp.mpf(-1.5), mp.mpf(0), mp.mpf(1.5), mp.mpf(Y)]
    val = mp.quad(integrand, pts)
    return mp.e ** (-nb * xb ** 2 / 2) * val


def kernel_n(x: float, y: float, fam: BiorthogonalFamily) -> float:
    """K_n(x, y) = sum_{k<n} p_k(x) Q_k(y) / h_k^2."""
    with mp.workprec(fam.precision_bits):
        xb = mp.mpf(x)
        total = mp.mpf(0)
        for k in range(fam.n):
            poly = mp.mpf(0)
            for c in reversed(fam.p_coeffs[k]):
                poly = poly * xb + c
            total += poly * _q_transform(fam, k, y, fam.precision_bits) / fam.h2[k]
        return float(total)


@functools.lru_cache(maxsize=4)
def _mu1_cdf(alpha: float, tau: float):
    from . import measures, surface

    p = surface.SurfaceParams.from_alpha_tau(alpha, tau)
    grid = np.linspace(-p.c + 1e-6, p.c - 1e-6, 801)
    dens = np.array([measures.density_mu1(float(t), p) for t in grid])
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1])
                                           * np.diff(grid))])
    return grid, cdf / cdf[-1]


def zero_counting_kolmogorov(fam: BiorthogonalFamily) -> float:
    """Kolmogorov distance between the zero-counting measure of p_{n,n}
    and the limiting measure mu1 at the family's (alpha, tau)."""
    zeros = polynomial_zeros(fam).real
    grid, cdf = _mu1_cdf(fam.alpha, fam.tau)
    n = len(zeros)
    dist = 0.0
    for i, z in enumerate(zeros):
        F = np.interp(z, grid, cdf, left=0.0, right=1.0)
        dist = max(dist, abs((i + 1) / n - F), abs(i / n - F))
    return dist
