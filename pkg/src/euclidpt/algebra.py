"""Exact arithmetic in the degree-2 truncation of the E2 enveloping algebra.

Generators u, v (translations) and J (rotation) obey

    [u, J] = i v,      [v, J] = -i u,      [u, v] = 0.

Elements are stored as complex coefficient vectors over the ten
normal-ordered monomials

    B = [1, u, v, J, u^2, v^2, uv, uJ, vJ, J^2]

with translation powers kept to the left of J powers.  Products are
normal-ordered with the rewrite rules Ju = uJ - iv and Jv = vJ + iu.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegreeOverflow

# generator codes; the ordering fixes the normal form (u, v powers before J)
_U, _V, _J = 0, 1, 2

MONOMIALS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
             (2, 0, 0), (0, 2, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))
BASIS_LABELS = ("1", "u", "v", "J", "u2", "v2", "uv", "uJ", "vJ", "J2")
_INDEX = {m: i for i, m in enumerate(MONOMIALS)}
DIM = len(MONOMIALS)


def _word_powers(word):
    return (word.count(_U), word.count(_V), word.count(_J))


def _straighten(word, coeff):
    """Normal-order a generator word, returning {monomial index: coefficient}.

    Bubble-sorts adjacent out-of-order pairs; each J-past-translation swap
    spawns the commutator correction ([J,u] = -iv, [J,v] = iu).
    """
    out = {}
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a <= b:
            continue
        swapped = word[:i] + (b, a) + word[i + 2:]
        for k, c in _straighten(swapped, coeff).items():
            out[k] = out.get(k, 0) + c
        if (a, b) == (_J, _U):
            corr, cc = word[:i] + (_V,) + word[i + 2:], coeff * (-1j)
        elif (a, b) == (_J, _V):
            corr, cc = word[:i] + (_U,) + word[i + 2:], coeff * (1j)
        else:  # (v, u): plain commute
            return out
        for k, c in _straighten(corr, cc).items():
            out[k] = out.get(k, 0) + c
        return out
    powers = _word_powers(word)
    if sum(powers) > 2:
        raise DegreeOverflow(f"monomial of degree {sum(powers)} outside the truncation")
    out[_INDEX[powers]] = out.get(_INDEX[powers], 0) + coeff
    return out


def _monomial_word(m):
    a, b, c = m
    return (_U,) * a + (_V,) * b + (_J,) * c


# all products of basis monomials with total degree <= 2, built once
_PRODUCT = {}
for _i, _m1 in enumerate(MONOMIALS):
    for _j, _m2 in enumerate(MONOMIALS):
        if sum(_m1) + sum(_m2) <= 2:
            _PRODUCT[(_i, _j)] = _straighten(_monomial_word(_m1) + _monomial_word(_m2), 1.0 + 0j)

# hermitian conjugates of the basis monomials: reverse factors, re-order
_CONJUGATE = {}
for _i, _m in enumerate(MONOMIALS):
    _CONJUGATE[_i] = _straighten(tuple(reversed(_monomial_word(_m))), 1.0 + 0j)


@dataclass(frozen=True)
class E2Element:
    """Complex coefficient vector over the ten normal-ordered monomials."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (DIM,):
            raise ValueError(f"expected {DIM} coefficients, got shape {c.shape}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(np.zeros(DIM, dtype=complex))

    @classmethod
    def from_terms(cls, **terms):
        """Build from coefficients keyed by basis label, e.g. from_terms(J2=1, v=1j)."""
        c = np.zeros(DIM, dtype=complex)
        for label, value in terms.items():
            if label == "one":
                label = "1"
            c[BASIS_LABELS.index(label)] += value
        return cls(c)

    # -- algebra -------------------------------------------------------

    def __add__(self, other):
        return E2Element(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return E2Element(self.coeffs - other.coeffs)

    def __neg__(self):
        return E2Element(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, E2Element):
            return multiply(self, other)
        return E2Element(self.coeffs * complex(other))

    __rmul__ = __mul__

    def degree(self):
        degs = [sum(MONOMIALS[i]) for i in range(DIM) if self.coeffs[i] != 0]
        return max(degs, default=0)

    def term(self, label):
        if label == "one":
            label = "1"
        return complex(self.coeffs[BASIS_LABELS.index(label)])

    def conjugate(self):
        return hermitian_conjugate(self)

    def allclose(self, other, tol=1e-12):
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c != 0:
                parts.append(f"({c:.6g})*{BASIS_LABELS[i]}")
        return "E2Element(" + (" + ".join(parts) if parts else "0") + ")"

    # -- serialization ---------------------------------------------------
    # schema: {"basis": "u,v,J-normal", "coeffs": [[re, im] x 10]}; exact round-trip

    def to_dict(self):
        return {"basis": "u,v,J-normal",
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        if data.get("basis") != "u,v,J-normal":
            raise ValueError(f"unknown basis tag {data.get('basis')!r}")
        coeffs = data["coeffs"]
        if len(coeffs) != DIM:
            raise ValueError(f"expected {DIM} coefficient pairs")
        return cls(np.array([complex(re, im) for re, im in coeffs]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# convenience singletons
ONE = E2Element.from_terms(one=1)
U = E2Element.from_terms(u=1)
V = E2Element.from_terms(v=1)
J = E2Element.from_terms(J=1)


def casimir():
    """u^2 + v^2; commutes with the whole algebra."""
    return E2Element.from_terms(u2=1, v2=1)


def multiply(a: E2Element, b: E2Element) -> E2Element:
    """Normal-ordered product; requires degree(a) + degree(b) <= 2."""
    if a.degree() + b.degree() > 2:
        raise DegreeOverflow(
            f"product of degrees {a.degree()} and {b.degree()} outside the truncation")
    out = np.zeros(DIM, dtype=complex)
    ca, cb = a.coeffs, b.coeffs
    for i in range(DIM):
        if ca[i] == 0:
            continue
        for j in range(DIM):
            if cb[j] == 0:
                continue
            table = _PRODUCT.get((i, j))
            if table is None:
                raise DegreeOverflow(
                    f"product {BASIS_LABELS[i]}*{BASIS_LABELS[j]} outside the truncation")
            for k, c in table.items():
                out[k] += ca[i] * cb[j] * c
    return E2Element(out)


def hermitian_conjugate(a: E2Element) -> E2Element:
    """Adjoint under J† = J, u† = u, v† = v: conjugate coefficients, reverse factors."""
    out = np.zeros(DIM, dtype=complex)
    for i in range(DIM):
        if a.coeffs[i] == 0:
            continue
        for k, c in _CONJUGATE[i].items():
            out[k] += np.conj(a.coeffs[i]) * c
    return E2Element(out)


def is_hermitian(a: E2Element, tol: float = 1e-12) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(np.max(np.abs(a.coeffs - hermitian_conjugate(a).coeffs)) <= tol)


def hermiticity_residual(a: E2Element) -> float:
    """max |coeff(a - a†)|, the quantitative version of is_hermitian."""
    return float(np.max(np.abs(a.coeffs - hermitian_conjugate(a).coeffs)))


@dataclass(frozen=True)
class PTSymmetryE2:
    """An antilinear symmetry: signed permutation of (u, v, J) plus conjugation."""

    tag: str
    action: dict  # generator code -> (sign, generator code)

    def image_word(self, word):
        sign = 1.0
        mapped = []
        for g in word:
            s, h = self.action[g]
            sign *= s
            mapped.append(h)
        return sign, tuple(mapped)


# the five antilinear symmetries; each row is (u, v, J) images
PT_SYMMETRIES = {
    "PT1": PTSymmetryE2("PT1", {_U: (-1, _U), _V: (-1, _V), _J: (-1, _J)}),
    "PT2": PTSymmetryE2("PT2", {_U: (+1, _U), _V: (+1, _V), _J: (-1, _J)}),
    "PT3": PTSymmetryE2("PT3", {_U: (+1, _V), _V: (+1, _U), _J: (+1, _J)}),
    "PT4": PTSymmetryE2("PT4", {_U: (-1, _U), _V: (+1, _V), _J: (+1, _J)}),
    "PT5": PTSymmetryE2("PT5", {_U: (+1, _U), _V: (-1, _V), _J: (+1, _J)}),
}


def _resolve(sym) -> PTSymmetryE2:
    if isinstance(sym, PTSymmetryE2):
        return sym
    try:
        return PT_SYMMETRIES[sym]
    except KeyError:
        raise ValueError(f"unknown symmetry tag {sym!r}") from None


def apply_pt(sym, a: E2Element) -> E2Element:
    """Apply the antilinear map: conjugate coefficients, map generators, re-order."""
    pt = _resolve(sym)
    out = np.zeros(DIM, dtype=complex)
    for i, m in enumerate(MONOMIALS):
        if a.coeffs[i] == 0:
            continue
        sign, word = pt.image_word(_monomial_word(m))
        for k, c in _straighten(word, sign * np.conj(a.coeffs[i])).items():
            out[k] += c
    return E2Element(out)


def build_hamiltonian(sym, mu) -> E2Element:
    """Most general PT-invariant bilinear for the given symmetry and nine real couplings.

    The i-placements per symmetry make every term invariant under
    apply_pt(sym, .) for real mu.
    """
    tag = _resolve(sym).tag
    m1, m2, m3, m4, m5, m6, m7, m8, m9 = [float(x) for x in mu]
    if tag == "PT1":
        return E2Element.from_terms(J2=m1, J=1j * m2, u=1j * m3, v=1j * m4,
                                    uJ=m5, vJ=m6, u2=m7, v2=m8, uv=m9)
    if tag == "PT2":
        return E2Element.from_terms(J2=m1, J=1j * m2, u=m3, v=m4,
                                    uJ=1j * m5, vJ=1j * m6, u2=m7, v2=m8, uv=m9)
    if tag == "PT3":
        return (E2Element.from_terms(J2=m1, J=m2)
                + E2Element.from_terms(u=m3 + 1j * m4, v=m3 - 1j * m4)
                + E2Element.from_terms(uJ=m5 + 1j * m6, vJ=m5 - 1j * m6)
                + E2Element.from_terms(v2=1j * m7 + m8, u2=-1j * m7 + m8, uv=m9))
    if tag == "PT4":
        return E2Element.from_terms(J2=m1, J=m2, u=1j * m3, v=m4,
                                    uJ=1j * m5, vJ=m6, u2=m7, v2=m8, uv=1j * m9)
    if tag == "PT5":
        return E2Element.from_terms(J2=m1, J=m2, u=m3, v=1j * m4,
                                    uJ=m5, vJ=1j * m6, u2=m7, v2=m8, uv=1j * m9)
    raise ValueError(f"unknown symmetry tag {tag!r}")


def anticommutator(a: E2Element, b: E2Element) -> E2Element:
    return multiply(a, b) + multiply(b, a)


def commutator(a: E2Element, b: E2Element) -> E2Element:
    return multiply(a, b) - multiply(b, a)
