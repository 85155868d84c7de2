"""Mathieu characteristic values and periodic functions for complex parameter q.

Convention: y''(z) + (a - 2 q cos 2z) y = 0.  Characteristic values are
computed as eigenvalues of the truncated Fourier recurrence matrix of the
relevant parity/periodicity class, which handles real and complex q
uniformly and makes eigenvalue collisions (exceptional points on the
imaginary-q axis) directly observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import E2Element, build_hamiltonian
from .errors import ConvergenceFailure

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MathieuClass:
    parity: str        # "even" | "odd"
    periodicity: str   # "pi" | "2pi"

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.periodicity not in ("pi", "2pi"):
            raise ValueError(f"periodicity must be 'pi' or '2pi', got {self.periodicity!r}")

    @property
    def label(self):
        return f"{self.parity}-{self.periodicity}"


EVEN_PI = MathieuClass("even", "pi")      # a_0, a_2, a_4, ...   cos(2kz)
ODD_PI = MathieuClass("odd", "pi")        # b_2, b_4, ...        sin(2kz)
EVEN_2PI = MathieuClass("even", "2pi")    # a_1, a_3, ...        cos((2k+1)z)
ODD_2PI = MathieuClass("odd", "2pi")      # b_1, b_3, ...        sin((2k+1)z)
CLASSES = {c.label: c for c in (EVEN_PI, ODD_PI, EVEN_2PI, ODD_2PI)}


def recurrence_matrix(q, cls: MathieuClass, size: int) -> np.ndarray:
    """Truncated (symmetrized) Fourier recurrence matrix of one class."""
    q = complex(q)
    m = np.zeros((size, size), dtype=complex)
    if cls == EVEN_PI:
        for k in range(size):
            m[k, k] = (2 * k) ** 2
        m[0, 1] = m[1, 0] = _SQRT2 * q   # symmetrized k=0 coupling
        for k in range(1, size - 1):
            m[k, k + 1] = m[k + 1, k] = q
    elif cls == ODD_PI:
        for k in range(size):
            m[k, k] = (2 * (k + 1)) ** 2
        for k in range(size - 1):
            m[k, k + 1] = m[k + 1, k] = q
    else:
        for k in range(size):
            m[k, k] = (2 * k + 1) ** 2
        m[0, 0] += q if cls == EVEN_2PI else -q
        for k in range(size - 1):
            m[k, k + 1] = m[k + 1, k] = q
    return m


def _canonical(w):
    # conjugate-pair members share real parts only to roundoff; a rounded
    # lexsort keeps their order stable across truncations
    return w[np.lexsort((w.imag, np.round(w.real, 8)))]


def _sorted_eigs(q, cls, size):
    return _canonical(scipy.linalg.eigvals(recurrence_matrix(q, cls, size)))


def characteristic_values(q, cls: MathieuClass, count: int, trunc: int = 60) -> np.ndarray:
    """First `count` characteristic values by real part, convergence-checked.

    Raises ConvergenceFailure if doubling the truncation moves any reported
    value by more than 1e-10.
    """
    if trunc < count + 8:
        raise ValueError("trunc must be at least count + 8")
    w1 = _sorted_eigs(q, cls, trunc)[:count]
    w2 = _sorted_eigs(q, cls, 2 * trunc)[:count]
    drift = float(np.max(np.abs(w1 - w2)))
    if drift > 1e-10:
        raise ConvergenceFailure(
            f"characteristic values moved by {drift:.3e} under truncation doubling")
    return w2


def coefficient_vector(q, cls: MathieuClass, a, trunc: int = 60, tol: float = 1e-6):
    """Fourier coefficients of the periodic solution with characteristic value a.

    The symmetrization scaling on the k=0 cosine mode is undone, so the
    returned vector multiplies cos(2kz), sin(2(k+1)z), cos((2k+1)z) or
    sin((2k+1)z) directly.  Gauge: unit 2-norm with the largest-magnitude
    coefficient rotated to the positive real axis.
    """
    m = recurrence_matrix(q, cls, trunc)
    w, vecs = scipy.linalg.eig(m)
    i = int(np.argmin(np.abs(w - a)))
    if abs(w[i] - a) > tol * max(1.0, abs(a)):
        raise ValueError(f"{a} is not a characteristic value of class {cls.label} "
                         f"(nearest: {w[i]})")
    vec = vecs[:, i].copy()
    if cls == EVEN_PI:
        vec[0] /= _SQRT2
    top = vec[int(np.argmax(np.abs(vec)))]
    vec *= abs(top) / top
    return vec / np.linalg.norm(vec)


def _synthesize(vec, cls, z):
    z = np.asarray(z, dtype=float)
    k = np.arange(len(vec))
    if cls == EVEN_PI:
        basis = np.cos(np.outer(z, 2 * k))
    elif cls == ODD_PI:
        basis = np.sin(np.outer(z, 2 * (k + 1)))
    elif cls == EVEN_2PI:
        basis = np.cos(np.outer(z, 2 * k + 1))
    else:
        basis = np.sin(np.outer(z, 2 * k + 1))
    return basis @ vec


def mathieu_function(q, a, parity: str, z, trunc: int = 60):
    """Periodic Mathieu function of the given parity at characteristic value a.

    The class (pi- or 2pi-periodic) is resolved by locating a among the
    eigenvalues of the two candidate recurrences.
    """
    candidates = (EVEN_PI, EVEN_2PI) if parity == "even" else (ODD_PI, ODD_2PI)
    last_error = None
    for cls in candidates:
        try:
            vec = coefficient_vector(q, cls, a, trunc)
        except ValueError as exc:
            last_error = exc
            continue
        return _synthesize(vec, cls, z)
    raise ValueError(f"no {parity} class has characteristic value {a}: {last_error}")


# ---------------------------------------------------------------------------
# antiperiodic (half-integer order) classes, needed for fermionic sectors of
# the circle representation: 2*pi-antiperiodic solutions in theta of
# y'' + (a - 2 q cos 2theta) y = 0, split by parity in theta
# ---------------------------------------------------------------------------

def antiperiodic_matrix(q, parity: str, size: int) -> np.ndarray:
    """Recurrence over cos((k+1/2) theta) (even) or sin((k+1/2) theta) (odd)."""
    q = complex(q)
    m = np.zeros((size, size), dtype=complex)
    for k in range(size):
        m[k, k] = (k + 0.5) ** 2
    for k in range(size - 2):
        m[k, k + 2] = m[k + 2, k] = q
    # cos(2th) folds the k=0 mode back onto k=1 (sign flip for the sine basis)
    fold = q if parity == "even" else -q
    m[0, 1] += fold
    m[1, 0] += fold
    return m


def antiperiodic_characteristic_values(q, parity: str, count: int, trunc: int = 60):
    if trunc < count + 8:
        raise ValueError("trunc must be at least count + 8")
    w1 = _canonical(scipy.linalg.eigvals(antiperiodic_matrix(q, parity, trunc)))[:count]
    w2 = _canonical(scipy.linalg.eigvals(antiperiodic_matrix(q, parity, 2 * trunc)))[:count]
    if float(np.max(np.abs(w1 - w2))) > 1e-10:
        raise ConvergenceFailure("antiperiodic values moved under truncation doubling")
    return w2


# ---------------------------------------------------------------------------
# exceptional points on the imaginary-q axis
# ---------------------------------------------------------------------------

def complex_mathieu_eps(max_q: float, cls: MathieuClass, count: int = 8,
                        trunc: int = 60, scan_steps: int = 400,
                        param_tol: float = 1e-8, im_tol: float = 1e-8) -> list:
    """Collisions of same-class characteristic values along q = i*t, t in (0, max_q].

    Scans the count lowest values for reality transitions and bisects each
    one; returns [{"q_imag": t, "a_merge": Re a at the collision}, ...].
    """
    if max_q <= 0:
        raise ValueError("max_q must be positive")

    def n_complex(t):
        w = _sorted_eigs(1j * t, cls, trunc)[:count]
        return int(np.sum(w.imag > im_tol))

    ts = np.linspace(max_q / scan_steps, max_q, scan_steps)
    eps = []
    prev_t, prev_n = ts[0], n_complex(ts[0])
    for t in ts[1:]:
        n = n_complex(t)
        if n != prev_n:
            lo, hi, n_lo = prev_t, t, prev_n
            while hi - lo > param_tol:
                mid = 0.5 * (lo + hi)
                if n_complex(mid) != n_lo:
                    hi = mid
                else:
                    lo = mid
            w_lo = _sorted_eigs(1j * lo, cls, trunc)[:count]
            w_hi = _sorted_eigs(1j * hi, cls, trunc)[:count]
            pairs_lo = sorted(z for z in w_lo if z.imag > im_tol)
            pairs_hi = sorted(z for z in w_hi if z.imag > im_tol)
            longer, shorter = (pairs_hi, pairs_lo) if len(pairs_hi) > len(pairs_lo) \
                else (pairs_lo, pairs_hi)
            fresh = [z for z in longer
                     if not any(abs(z.real - y.real) < 1e-2 * max(1, abs(z.real))
                                for y in shorter)]
            for z in fresh:
                eps.append({"q_imag": 0.5 * (lo + hi), "a_merge": float(z.real)})
        prev_t, prev_n = t, n
    return eps


# ---------------------------------------------------------------------------
# the complex-Mathieu PT5 family: exactly solvable but with no real Dyson
# exponent of the exp(lam J + rho u + tau v) form
# ---------------------------------------------------------------------------

def pt5_complex_hamiltonian(mu4: float, mu6: float) -> E2Element:
    """The two-parameter family whose eigenproblem closes on Mathieu functions.

    Couplings: mu1=1, mu3=-mu6/2, mu5=-mu4, mu7=mu4^2/4, mu8=-mu6^2/4,
    mu9=-mu4*mu6/2.  The u^2 coupling must equal mu4^2/4: the cos-theta
    gauge factor then cancels the residual sin^2 term, leaving the Mathieu
    equation in theta/2 with parameter i*mu4 and characteristic value 4E.
    """
    return build_hamiltonian("PT5", (1.0, 0.0, -mu6 / 2.0, mu4, -mu4, mu6,
                                     mu4 ** 2 / 4.0, -mu6 ** 2 / 4.0,
                                     -mu4 * mu6 / 2.0))


def pt5_complex_solution(mu4: float, mu6: float, E: float, theta,
                         c1: complex = 1.0, c2: complex = 0.0,
                         trunc: int = 60) -> np.ndarray:
    """psi(theta) = exp(-i mu4/2 cos + mu6/2 sin) [c1 C(4E, i mu4, theta/2) + c2 S(...)].

    4E must be (within tolerance) a characteristic value of the class the
    requested combination lives in; bosonic states use the pi-periodic
    classes in theta/2, fermionic the 2pi-periodic ones.
    """
    theta = np.asarray(theta, dtype=float)
    z = theta / 2.0
    q = 1j * mu4
    a = 4.0 * E
    parts = np.zeros(len(theta), dtype=complex)
    if c1 != 0:
        parts = parts + c1 * mathieu_function(q, a, "even", z, trunc)
    if c2 != 0:
        parts = parts + c2 * mathieu_function(q, a, "odd", z, trunc)
    prefactor = np.exp(-1j * (mu4 / 2.0) * np.cos(theta) + (mu6 / 2.0) * np.sin(theta))
    return prefactor * parts
