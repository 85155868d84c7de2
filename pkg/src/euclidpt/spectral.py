"""Numerical eigenproblem for E2 elements in the circle representation.

The representation acts on L^2 of the circle with J = -i d/dtheta,
u = sin(theta), v = cos(theta).  With the boundary phase
psi(theta + 2*pi) = exp(i*pi*s) psi(theta), Fourier modes
exp(i(n + s/2) theta) for n = -N..N give a pentadiagonal complex matrix
for any degree-2 element.  s = 0 is bosonic, s = 1 fermionic, other
values anyonic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from . import algebra, dyson
from .algebra import E2Element, build_hamiltonian
from .errors import ConvergenceFailure, TrackingAmbiguity

DEFAULT_TRUNCATION = 64
REALITY_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralProblem:
    element: E2Element
    sector: float = 0.0
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.truncation < 4:
            raise ValueError("truncation must be at least 4")
        if not 0.0 <= self.sector < 2.0:
            raise ValueError("sector must lie in [0, 2)")


def generator_matrices(truncation, sector=0.0):
    """Truncated matrices of u, v, J on modes exp(i(n + s/2) theta)."""
    dim = 2 * truncation + 1
    n = np.arange(-truncation, truncation + 1)
    shift_up = np.eye(dim, k=-1, dtype=complex)   # mode n -> n + 1
    shift_dn = np.eye(dim, k=+1, dtype=complex)
    mat_u = (shift_up - shift_dn) / 2j
    mat_v = (shift_up + shift_dn) / 2.0
    mat_j = np.diag((n + sector / 2.0).astype(complex))
    return mat_u, mat_v, mat_j


@functools.lru_cache(maxsize=16)
def _monomial_matrix_stack(truncation, sector):
    """Matrices of the ten basis monomials, stacked; monomials act right-to-left."""
    mat_u, mat_v, mat_j = generator_matrices(truncation, sector)
    gen = {algebra._U: mat_u, algebra._V: mat_v, algebra._J: mat_j}
    dim = 2 * truncation + 1
    stack = np.empty((algebra.DIM, dim, dim), dtype=complex)
    for i, m in enumerate(algebra.MONOMIALS):
        acc = np.eye(dim, dtype=complex)
        for g in algebra._monomial_word(m):
            acc = acc @ gen[g]
        stack[i] = acc
    stack.flags.writeable = False
    return stack


def build_matrix(p: SpectralProblem) -> np.ndarray:
    """(2N+1)x(2N+1) matrix of the element; bandwidth at most 2."""
    stack = _monomial_matrix_stack(p.truncation, float(p.sector))
    return np.tensordot(p.element.coeffs, stack, axes=1)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray        # sorted by real part
    reality_flags: np.ndarray      # |Im E| <= rtol*max(1, |Re E|)
    truncation: int
    sector: float
    rtol: float = REALITY_RTOL
    trusted_count: int = 0

    def trusted(self, count=None):
        k = self.trusted_count if count is None else count
        return self.eigenvalues[:k]

    def broken(self):
        return bool(np.any(~self.reality_flags[:self.trusted_count]))


def eigen_spectrum(p: SpectralProblem, rtol: float = REALITY_RTOL) -> Spectrum:
    """All eigenvalues of the truncated matrix, sorted by real part.

    Only the interior ~2N+1 - 4*sqrt(N) lowest levels are trusted; edge
    eigenvalues carry truncation artifacts.
    """
    matrix = build_matrix(p)
    try:
        w = scipy.linalg.eigvals(matrix)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(w.real, kind="stable")
    w = w[order]
    flags = np.abs(w.imag) <= rtol * np.maximum(1.0, np.abs(w.real))
    trusted = max(0, 2 * p.truncation + 1 - int(math.ceil(4.0 * math.sqrt(p.truncation))))
    return Spectrum(eigenvalues=w, reality_flags=flags, truncation=p.truncation,
                    sector=p.sector, rtol=rtol, trusted_count=trusted)


def pt1_closed_spectrum(mu1: float, mu3: float, n: int, statistics: str = "bosonic") -> float:
    """Exact levels of the hermitized PT1 family: mu1*(k^2 - mu3^2/mu1^2).

    k = n for bosonic boundary conditions, k = n + 1/2 for fermionic.
    """
    if mu1 == 0:
        raise ValueError("mu1 must be nonzero")
    shift = (mu3 / mu1) ** 2
    if statistics == "bosonic":
        return mu1 * (n * n - shift)
    if statistics == "fermionic":
        return mu1 * (n * n + n + 0.25 - shift)
    raise ValueError(f"statistics must be 'bosonic' or 'fermionic', got {statistics!r}")


# ---------------------------------------------------------------------------
# parameter sweeps with level tracking
# ---------------------------------------------------------------------------

SWEEP_AXES = tuple(f"mu{i}" for i in range(1, 10)) + ("s",)


@dataclass(frozen=True)
class SweepTemplate:
    """What to diagonalize at each sweep point.

    family "raw" sweeps one coupling of build_hamiltonian(symmetry, mu);
    family "pt5-three" sweeps the three-parameter PT5 family
    J^2 - i*mu3{v,J} - mu4{u,J} + mu7 u^2 (axes mu3, mu4, mu7 only), with
    the tied couplings co-varying.
    """

    symmetry: str = "PT5"
    mu: tuple = (1.0,) + (0.0,) * 8
    family: str = "raw"
    sector: float = 0.0
    truncation: int = DEFAULT_TRUNCATION
    track_levels: int = 12

    def __post_init__(self):
        if self.family not in ("raw", "pt5-three"):
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.mu) != 9:
            raise ValueError("mu must have nine entries")

    def problem_at(self, axis: str, value: float) -> SpectralProblem:
        if axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
        sector = self.sector
        mu = list(self.mu)
        if axis == "s":
            sector = float(value) % 2.0
        else:
            mu[int(axis[2]) - 1] = float(value)
        if self.family == "pt5-three":
            if axis not in ("mu3", "mu4", "mu7", "s"):
                raise ValueError("pt5-three family sweeps mu3, mu4, mu7 or s only")
            element = dyson.pt5_three_param_hamiltonian(mu[2], mu[3], mu[6])
        else:
            element = build_hamiltonian(self.symmetry, mu)
        return SpectralProblem(element=element, sector=sector, truncation=self.truncation)


@dataclass(frozen=True)
class SweepResult:
    template: SweepTemplate
    axis: str
    values: np.ndarray
    curves: np.ndarray          # (track_levels, npoints), tracked by continuation
    refined_points: int = 0

    def max_imag(self):
        return np.max(np.abs(self.curves.imag), axis=0)

    def broken_mask(self, im_tol=1e-6):
        return self.max_imag() > im_tol


def _levels_at(template, axis, value):
    spectrum = eigen_spectrum(template.problem_at(axis, value))
    return spectrum.eigenvalues[:template.track_levels]


def _match(prev, new):
    """Order `new` against `prev` by minimal total |dE|; returns (ordered, cost)."""
    cost = np.abs(prev[:, None] - new[None, :])
    rows, cols = linear_sum_assignment(cost)
    ordered = np.empty_like(new)
    ordered[rows] = new[cols]
    return ordered, float(cost[rows, cols].max())


def sweep(template: SweepTemplate, axis: str, lo: float, hi: float, steps: int,
          max_jump: float | None = None, max_halvings: int = 12,
          workers: int = 1) -> SweepResult:
    """Level curves over [lo, hi], matched by nearest-neighbor continuation.

    Labels are assigned by real-part order at the sweep start.  When the
    best assignment between adjacent points jumps by more than max_jump
    (default: half the median level spacing at the start), midpoints are
    inserted internally until the match is unambiguous; TrackingAmbiguity
    is raised at the halving floor.  With workers > 1 the grid-point
    eigensolves run on a thread pool (LAPACK releases the GIL); the
    continuation itself stays an ordered sequential reduction.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    values = np.linspace(lo, hi, steps)
    cache = {}

    def levels(x):
        x = float(x)
        if x not in cache:
            cache[x] = _levels_at(template, axis, x)
        return cache[x]

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for x, lv in zip(values, pool.map(lambda v: _levels_at(template, axis, v),
                                              values)):
                cache[float(x)] = lv

    first = levels(values[0])
    if max_jump is None:
        spacing = np.diff(np.sort(first.real))
        scale = float(np.median(spacing)) if len(spacing) else 1.0
        max_jump = max(0.5 * scale, 1e-6)
    curves = np.empty((template.track_levels, steps), dtype=complex)
    curves[:, 0] = first
    refined = 0

    def continue_to(prev_levels, x_prev, x_next, depth):
        nonlocal refined
        ordered, jump = _match(prev_levels, levels(x_next))
        if jump <= max_jump or depth >= max_halvings:
            if jump > max_jump:
                raise TrackingAmbiguity(
                    f"level matching jump {jump:.3g} > {max_jump:.3g} at {axis}={x_next:.6g} "
                    f"after {depth} refinements")
            return ordered
        refined += 1
        mid = 0.5 * (x_prev + x_next)
        middle = continue_to(prev_levels, x_prev, mid, depth + 1)
        return continue_to(middle, mid, x_next, depth + 1)

    for k in range(1, steps):
        curves[:, k] = continue_to(curves[:, k - 1], values[k - 1], values[k], 0)
    return SweepResult(template=template, axis=axis, values=values, curves=curves,
                       refined_points=refined)


# ---------------------------------------------------------------------------
# exceptional points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalPoint:
    parameter_value: float
    energy: float
    level_pair: tuple
    bracket_width: float
    axis: str = ""

    def as_dict(self):
        return {"axis": self.axis, "parameter_value": self.parameter_value,
                "energy": self.energy, "level_pair": list(self.level_pair),
                "bracket_width": self.bracket_width}


def _complex_pairs(levels, im_tol):
    """Representatives (one per conjugate pair) with |Im| above threshold."""
    ups = [z for z in levels if z.imag > im_tol]
    return sorted(ups, key=lambda z: z.real)


def _pair_sets_differ(a, b, match_tol):
    """Pairs present in `b` but unmatched in `a` (by real part)."""
    fresh = []
    used = [False] * len(a)
    for z in b:
        hit = False
        for i, w in enumerate(a):
            if not used[i] and abs(z.real - w.real) <= match_tol:
                used[i] = True
                hit = True
                break
        if not hit:
            fresh.append(z)
    return fresh


def find_exceptional_points(result: SweepResult, tol: float = 1e-6,
                            im_tol: float = 1e-6) -> list:
    """Bisect every reality transition of the sweep down to bracket <= tol.

    An exceptional point is reported for each conjugate pair that is born
    (or dies) across a transition; its energy is the real part of that pair
    at the broken end of the final bracket.  Each grid interval is processed
    as a worklist so several transitions inside one interval are all
    resolved.  Returns an empty list when the sweep has no transitions.
    """
    template, axis = result.template, result.axis
    values = result.values
    # seed the cache with the sweep's own eigensolves; only bisection points
    # need fresh work
    cache = {float(x): _complex_pairs(result.curves[:, k], im_tol)
             for k, x in enumerate(values)}

    def pairs_at(x):
        x = float(x)
        if x not in cache:
            cache[x] = _complex_pairs(_levels_at(template, axis, x), im_tol)
        return cache[x]

    match_tol = max(1e-3, 100 * tol)
    eps = []
    work = [(float(values[k]), float(values[k + 1]), k)
            for k in range(len(values) - 1)
            if len(pairs_at(values[k])) != len(pairs_at(values[k + 1]))]
    while work:
        lo, hi, k = work.pop()
        n_lo, n_hi = len(pairs_at(lo)), len(pairs_at(hi))
        if n_lo == n_hi:
            continue
        a, b = lo, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if len(pairs_at(mid)) != n_lo:
                b = mid
            else:
                a = mid
        p_lo, p_hi = pairs_at(a), pairs_at(b)
        if len(p_hi) > len(p_lo):
            fresh = _pair_sets_differ(p_lo, p_hi, match_tol)
        else:
            fresh = _pair_sets_differ(p_hi, p_lo, match_tol)
        ref = result.curves[:, k]
        for z in fresh:
            order = np.argsort(np.abs(ref.real - z.real))[:2]
            eps.append(ExceptionalPoint(parameter_value=0.5 * (a + b),
                                        energy=float(z.real),
                                        level_pair=(int(order[0]), int(order[1])),
                                        bracket_width=b - a,
                                        axis=axis))
        if len(pairs_at(b)) != n_hi:
            work.append((b, hi, k))
    return sorted(eps, key=lambda p: (p.parameter_value, p.energy))


# ---------------------------------------------------------------------------
# wavefunctions and intensities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WavefunctionSpec:
    """Either a Fourier coefficient vector or a tagged closed form.

    Fourier: psi(theta) = sum_n coeffs[n] exp(i(n + s/2) theta).
    Closed form "pt1": the gauge-dressed plane-wave pair
    exp(-i(mu4 cos + mu3 sin)/mu1) * [c1 e^{-i k theta} + (i/(2k)) c2 e^{i k theta}].
    """

    sector: float = 0.0
    coeffs: np.ndarray | None = None
    closed_form: str | None = None
    params: dict = field(default_factory=dict)
    c1: complex = 1.0
    c2: complex = 0.0

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.coeffs is not None:
            n = np.arange(len(self.coeffs)) - (len(self.coeffs) - 1) // 2
            k = n + self.sector / 2.0
            return np.exp(1j * np.outer(theta, k)) @ self.coeffs
        if self.closed_form == "pt1":
            mu1 = self.params["mu1"]
            mu3 = self.params.get("mu3", 0.0)
            mu4 = self.params.get("mu4", 0.0)
            kappa = self.params["kappa"]
            gauge = np.exp(-1j * (mu4 * np.cos(theta) + mu3 * np.sin(theta)) / mu1)
            waves = self.c1 * np.exp(-1j * kappa * theta)
            if self.c2 != 0:
                waves = waves + (1j / (2.0 * kappa)) * self.c2 * np.exp(1j * kappa * theta)
            return gauge * waves
        raise ValueError("wavefunction has neither coefficients nor a known closed form")

    def normalized(self, grid_size=2048):
        """Rescale so the L^2 norm over [0, 2*pi) is 1."""
        if self.coeffs is not None:
            norm = math.sqrt(2.0 * math.pi * float(np.sum(np.abs(self.coeffs) ** 2)))
            return replace(self, coeffs=self.coeffs / norm)
        theta = np.linspace(0.0, 2.0 * math.pi, grid_size, endpoint=False)
        values = self.evaluate(theta)
        # uniform periodic grid: the rectangle rule is spectrally accurate
        norm = math.sqrt(float(np.sum(np.abs(values) ** 2)) * 2.0 * math.pi / grid_size)
        return replace(self, c1=self.c1 / norm, c2=self.c2 / norm)


def pt1_closed_wavefunction(mu1, mu3, mu4, n, statistics="bosonic", c1=1.0, c2=0.0):
    kappa = abs(n) if statistics == "bosonic" else abs(n + 0.5)
    sector = 0.0 if statistics == "bosonic" else 1.0
    return WavefunctionSpec(sector=sector, closed_form="pt1",
                            params={"mu1": mu1, "mu3": mu3, "mu4": mu4, "kappa": kappa},
                            c1=c1, c2=c2)


def wavefunction(p: SpectralProblem, level: int) -> WavefunctionSpec:
    """L^2-normalized eigenvector of the given level (real-part order)."""
    matrix = build_matrix(p)
    w, vecs = scipy.linalg.eig(matrix)
    order = np.argsort(w.real, kind="stable")
    if not 0 <= level < len(w):
        raise ValueError(f"level {level} outside 0..{len(w) - 1}")
    vec = vecs[:, order[level]]
    return WavefunctionSpec(sector=p.sector, coeffs=vec).normalized()


def intensity(w: WavefunctionSpec, grid) -> np.ndarray:
    values = w.evaluate(np.asarray(grid, dtype=float))
    return np.abs(values) ** 2


# circle realizations of the antilinear symmetries: psi -> conj(psi(map(theta)))
_CIRCLE_MAPS = {
    "PT1": lambda theta: theta + math.pi,
    "PT2": lambda theta: theta,
    "PT3": lambda theta: math.pi / 2.0 - theta,
    "PT4": lambda theta: -theta,
    "PT5": lambda theta: math.pi - theta,
}


def pt_image(w: WavefunctionSpec, sym, theta):
    """Samples of the antilinear image of the wavefunction on the grid."""
    tag = sym if isinstance(sym, str) else sym.tag
    mapped = _CIRCLE_MAPS[tag](np.asarray(theta, dtype=float))
    return np.conj(w.evaluate(mapped))


def pt_eigenstate_check(w: WavefunctionSpec, sym, grid=None, tol=1e-6):
    """Return +1 or -1 when the PT image is (minus) the state; else "broken".

    The comparison is literal: callers holding eigenvectors with an
    arbitrary overall phase should align it first (an unbroken state
    satisfies image = c*psi with |c| = 1; "broken" here means the image is
    not proportional to +-psi on the grid).
    """
    theta = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False) if grid is None \
        else np.asarray(grid, dtype=float)
    psi = w.evaluate(theta)
    image = pt_image(w, sym, theta)
    scale = float(np.max(np.abs(psi)))
    if scale == 0:
        raise ValueError("zero wavefunction")
    if float(np.max(np.abs(image - psi))) <= tol * scale:
        return 1
    if float(np.max(np.abs(image + psi))) <= tol * scale:
        return -1
    return "broken"
