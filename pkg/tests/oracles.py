"""Independent numerical oracles used across the test suite.

These deliberately avoid the code paths they check: matrix products and
exponentials act in the truncated Fourier representation, the Mathieu
continued fraction replaces the recurrence eigensolve, and finite
differences replace spectral synthesis.
"""

import numpy as np
from scipy.linalg import expm

from euclidpt import algebra
from euclidpt.spectral import SpectralProblem, build_matrix, generator_matrices


def element_matrix(element, truncation=32, sector=0.0):
    return build_matrix(SpectralProblem(element, sector=sector, truncation=truncation))


def interior(matrix, margin):
    return matrix[margin:-margin, margin:-margin]


def expm_conjugation(lam, rho, tau, target, truncation=32):
    """exp(lam*J + rho*u + tau*v) M exp(-...) in the truncated representation."""
    mat_u, mat_v, mat_j = generator_matrices(truncation)
    eta = expm(lam * mat_j + rho * mat_u + tau * mat_v)
    return eta @ target @ np.linalg.inv(eta)


def lowest_levels(element, count, truncation=48, sector=0.0):
    from euclidpt.spectral import eigen_spectrum
    spec = eigen_spectrum(SpectralProblem(element, sector=sector, truncation=truncation))
    return spec.eigenvalues[:count]


def mathieu_a0_continued_fraction(q, tol=1e-13, depth=80):
    """a_0(q) for moderate real q, by bisection on the tail continued fraction.

    Cosine-series ratios G_k = A_{2k}/A_{2k-2} obey
    G_k = q/(a - 4k^2 - q G_{k+1}); the k = 0, 1 rows close the system into
    the scalar residual a - 2 q^2/(a - 4 - q G_2(a)).
    """
    def residual(a):
        g = 0.0
        for k in range(depth, 1, -1):
            g = q / (a - 4.0 * k * k - q * g)
        return a - 2.0 * q * q / (a - 4.0 - q * g)

    lo, hi = -(q * q) - 1.0, 0.4
    flo = residual(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (residual(mid) > 0.0) == (flo > 0.0):
            lo, flo = mid, residual(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fd_apply(element, psi, theta):
    """Apply an E2 element as a differential operator with 2nd-order stencils.

    J = -i d/dtheta, u = sin, v = cos; monomials act right to left.  The
    grid must be uniform over [0, 2*pi).
    """
    h = theta[1] - theta[0]

    def deriv(f):
        return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * h)

    def deriv2(f):
        return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / (h * h)

    sin, cos = np.sin(theta), np.cos(theta)
    out = np.zeros_like(psi, dtype=complex)
    for i, (a, b, c) in enumerate(algebra.MONOMIALS):
        coeff = element.coeffs[i]
        if coeff == 0:
            continue
        if c == 0:
            part = psi
        elif c == 1:
            part = -1j * deriv(psi)
        else:
            part = -deriv2(psi)
        part = part * sin ** a * cos ** b
        out = out + coeff * part
    return out
