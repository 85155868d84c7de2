import math

import numpy as np
import pytest

from euclidpt.dyson import pt5_three_param_hamiltonian, reduce_pt5_three_param
from euclidpt.mathieu import (CLASSES, EVEN_2PI, EVEN_PI, ODD_2PI, ODD_PI,
                              antiperiodic_characteristic_values,
                              antiperiodic_matrix, characteristic_values,
                              complex_mathieu_eps, mathieu_function,
                              pt5_complex_hamiltonian, pt5_complex_solution)
from euclidpt.spectral import SpectralProblem, eigen_spectrum

import oracles


# ---------------------------------------------------------------------------
# characteristic values
# ---------------------------------------------------------------------------

def test_free_limit_all_classes():
    assert characteristic_values(0.0, EVEN_PI, 5).real == pytest.approx(
        [0, 4, 16, 36, 64], abs=1e-12)
    assert characteristic_values(0.0, ODD_PI, 4).real == pytest.approx(
        [4, 16, 36, 64], abs=1e-12)
    assert characteristic_values(0.0, EVEN_2PI, 4).real == pytest.approx(
        [1, 9, 25, 49], abs=1e-12)
    assert characteristic_values(0.0, ODD_2PI, 4).real == pytest.approx(
        [1, 9, 25, 49], abs=1e-12)


def test_a0_against_continued_fraction():
    a0 = characteristic_values(1.0, EVEN_PI, 1)[0]
    oracle = oracles.mathieu_a0_continued_fraction(1.0)
    assert a0.real == pytest.approx(oracle, abs=1e-10)
    assert a0.real == pytest.approx(-0.4551, abs=1e-4)
    assert abs(a0.imag) < 1e-12


def test_real_q_reality_and_interlacing():
    # a_0 < b_1 < a_1 < b_2 < a_2 < ... for real q > 0
    for q in (0.5, 2.0, 5.0):
        a = np.sort(np.concatenate([characteristic_values(q, EVEN_PI, 4),
                                    characteristic_values(q, EVEN_2PI, 4)]).real)
        b = np.sort(np.concatenate([characteristic_values(q, ODD_PI, 4),
                                    characteristic_values(q, ODD_2PI, 4)]).real)
        for vals in (a, b):
            assert np.max(np.abs(np.sort_complex(vals).imag)) < 1e-10
        for k in range(6):
            assert a[k] < b[k] < a[k + 1]


def test_imaginary_q_conjugate_closure():
    for t in (0.7, 2.5, 6.0):
        w = characteristic_values(1j * t, EVEN_PI, 8)
        key = lambda z: z[np.lexsort((z.imag, np.round(z.real, 6)))]
        assert np.max(np.abs(key(w) - key(np.conj(w)))) < 1e-8


def test_convergence_guard():
    # ridiculous truncation for the requested count must fail loudly
    with pytest.raises(ValueError):
        characteristic_values(1.0, EVEN_PI, 10, trunc=12)
    # doubling stability at a legitimate truncation
    w40 = characteristic_values(2.0 + 0.5j, EVEN_PI, 6, trunc=40)
    w80 = characteristic_values(2.0 + 0.5j, EVEN_PI, 6, trunc=80)
    assert np.max(np.abs(w40 - w80)) < 1e-10


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------

def test_function_free_limit_is_cosine():
    z = np.linspace(0, 2 * math.pi, 181)
    vals = mathieu_function(0.0, 4.0, "even", z)
    ref = np.cos(2 * z)
    scale = vals[0] / ref[0]
    assert np.max(np.abs(vals - scale * ref)) < 1e-10


def test_function_parity():
    z = np.linspace(0.1, 3.0, 57)
    for q in (0.8, 1j * 1.2):
        a_even = characteristic_values(q, EVEN_PI, 2)[1]
        even = mathieu_function(q, a_even, "even", z)
        even_neg = mathieu_function(q, a_even, "even", -z)
        assert np.max(np.abs(even - even_neg)) < 1e-12
        b = characteristic_values(q, ODD_2PI, 1)[0]
        odd = mathieu_function(q, b, "odd", z)
        odd_neg = mathieu_function(q, b, "odd", -z)
        assert np.max(np.abs(odd + odd_neg)) < 1e-12


def test_function_rejects_non_characteristic():
    with pytest.raises(ValueError):
        mathieu_function(1.0, 2.345, "even", np.array([0.0]))


def test_gauge_dressed_solution_satisfies_reduced_problem():
    # psi = exp(i alpha cos theta) [c1 C + c2 S](a, q, theta) solves
    # (J^2 + alpha{u,J} + beta u^2 + gamma) psi = E psi
    out = reduce_pt5_three_param(0.5, 1.5, 0.2)
    alpha, beta, gamma = out["alpha"], out["beta"], out["gamma"]
    q = (alpha ** 2 - beta) / 4.0
    theta = np.linspace(0, 2 * math.pi, 65536, endpoint=False)
    from euclidpt.algebra import E2Element
    reduced = (E2Element.from_terms(J2=1)
               + alpha * E2Element.from_terms(uJ=2, v=-1j)
               + E2Element.from_terms(u2=beta, one=gamma))
    for cls, parity, c1, c2 in ((EVEN_PI, "even", 1.0, 0.0), (ODD_2PI, "odd", 0.0, 1.0)):
        a = characteristic_values(q, cls, 2)[1 if cls == EVEN_PI else 0].real
        energy = a - (alpha ** 2 - beta) / 2.0 + gamma
        phi = mathieu_function(q, a, parity, theta)
        psi = np.exp(1j * alpha * np.cos(theta)) * (c1 + c2) * phi
        residual = oracles.fd_apply(reduced, psi, theta) - energy * psi
        assert np.max(np.abs(residual)) / np.max(np.abs(psi)) < 1e-6


# ---------------------------------------------------------------------------
# antiperiodic (fermionic) classes
# ---------------------------------------------------------------------------

def test_antiperiodic_split_matches_full_basis():
    # parity-fold matrices reproduce the full exp(i(m+1/2)theta) spectrum
    q = 0.73 - 0.2j
    even = antiperiodic_characteristic_values(q, "even", 6)
    odd = antiperiodic_characteristic_values(q, "odd", 6)
    n = 60
    ms = np.arange(-n, n)
    full = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(2 * n):
        full[i, i] = (ms[i] + 0.5) ** 2
        if i + 2 < 2 * n:
            full[i, i + 2] = full[i + 2, i] = q
    w_full = np.sort_complex(np.linalg.eigvals(full))[:12]
    w_split = np.sort_complex(np.concatenate([even, odd]))[:12]
    assert np.max(np.abs(w_full - w_split)) < 1e-9


def test_antiperiodic_free_limit():
    vals = antiperiodic_characteristic_values(0.0, "even", 4).real
    assert vals == pytest.approx([0.25, 2.25, 6.25, 12.25], abs=1e-12)


# ---------------------------------------------------------------------------
# exceptional points on the imaginary-q axis
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def even_pi_eps():
    return complex_mathieu_eps(17.0, EVEN_PI, count=8)


def test_first_two_even_eps(even_pi_eps):
    assert len(even_pi_eps) >= 2
    t1, a1 = even_pi_eps[0]["q_imag"], even_pi_eps[0]["a_merge"]
    t2, a2 = even_pi_eps[1]["q_imag"], even_pi_eps[1]["a_merge"]
    # frozen from an independent bisection of the recurrence eigenproblem
    assert t1 == pytest.approx(1.4687686, abs=2e-5)
    assert a1 == pytest.approx(2.0886989, abs=1e-4)
    assert t2 == pytest.approx(16.4711660, abs=2e-4)
    assert a2 == pytest.approx(27.3191280, abs=1e-3)


def test_real_below_first_ep(even_pi_eps):
    t1 = even_pi_eps[0]["q_imag"]
    assert abs(t1 - 1.4687) < 1e-3
    for t in np.linspace(0.05, t1 - 1e-3, 40):
        w = characteristic_values(1j * t, EVEN_PI, 8)
        assert np.max(np.abs(w.imag)) < 1e-8


@pytest.mark.slow
def test_third_even_ep():
    eps = complex_mathieu_eps(55.0, EVEN_PI, count=10, trunc=80)
    third = [e for e in eps if e["q_imag"] > 40]
    assert third
    assert third[0]["q_imag"] == pytest.approx(47.805966, abs=1e-3)
    assert third[0]["a_merge"] / 4 == pytest.approx(20.1646, abs=1e-3)


# ---------------------------------------------------------------------------
# complex-Mathieu family
# ---------------------------------------------------------------------------

def test_pt5_complex_free_limit():
    # mu4 = mu6 = 0: plane waves, E = k^2 via a = 4 E = (2k)^2
    theta = np.linspace(0, 2 * math.pi, 360, endpoint=False)
    vals = pt5_complex_solution(0.0, 0.0, 1.0, theta)  # a = 4, C = cos(theta)
    scale = vals[0]
    assert np.max(np.abs(vals - scale * np.cos(theta))) < 1e-10


def test_pt5_complex_solution_residual():
    mu4, mu6 = 0.9, 0.4
    element = pt5_complex_hamiltonian(mu4, mu6)
    theta = np.linspace(0, 2 * math.pi, 65536, endpoint=False)
    a_vals = characteristic_values(1j * mu4, EVEN_PI, 3)
    for a in a_vals[:2]:
        energy = complex(a) / 4.0
        psi = pt5_complex_solution(mu4, mu6, energy, theta)
        residual = oracles.fd_apply(element, psi, theta) - energy * psi
        assert np.max(np.abs(residual)) / np.max(np.abs(psi)) < 1e-6


def test_pt5_complex_matches_direct_spectrum():
    # quantized E = a/4 from the pi-periodic classes in theta/2 equals the
    # direct circle-representation spectrum (bosonic sector)
    for mu4, mu6 in ((0.8, 0.0), (1.2, 0.5)):
        element = pt5_complex_hamiltonian(mu4, mu6)
        direct = eigen_spectrum(SpectralProblem(element, truncation=48))
        a_even = characteristic_values(1j * mu4, EVEN_PI, 4)
        a_odd = characteristic_values(1j * mu4, ODD_PI, 3)
        route = np.sort(np.concatenate([a_even, a_odd]).real) / 4.0
        lows = np.sort(direct.eigenvalues[:7].real)
        assert np.max(np.abs(direct.eigenvalues[:7].imag)) < 1e-8
        assert np.max(np.abs(lows - route[:7])) < 1e-6


def test_cross_module_three_param_routes():
    # Mathieu route (a + shifts) against the direct eigensolve at random
    # well-defined parameter points
    rng = np.random.default_rng(71)
    done = 0
    while done < 5:
        m3 = rng.uniform(0.3, 2.0)
        m4 = rng.uniform(0.3, 2.0)
        m7 = rng.uniform(0.0, 1.0)
        if abs((m3 ** 2 + m4 ** 2 - m7) / (2 * m3 * m4)) < 1.2:
            continue
        out = reduce_pt5_three_param(m3, m4, m7)
        q = (out["alpha"] ** 2 - out["beta"]) / 4.0
        shift = out["gamma"] - (out["alpha"] ** 2 - out["beta"]) / 2.0
        a = np.concatenate([characteristic_values(q, EVEN_PI, 4),
                            characteristic_values(q, EVEN_2PI, 4)])
        b = np.concatenate([characteristic_values(q, ODD_PI, 4),
                            characteristic_values(q, ODD_2PI, 4)])
        route = np.sort(np.concatenate([a, b]).real + shift)[:8]
        direct = eigen_spectrum(SpectralProblem(
            pt5_three_param_hamiltonian(m3, m4, m7), truncation=48))
        lows = np.sort(direct.eigenvalues[:8].real)
        assert np.max(np.abs(lows - route)) < 1e-6
        done += 1


def test_class_labels():
    assert set(CLASSES) == {"even-pi", "odd-pi", "even-2pi", "odd-2pi"}
