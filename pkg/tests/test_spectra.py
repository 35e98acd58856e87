"""Spectrum, classification, genericity, rank bound."""

from fractions import Fraction

import numpy as np
import pytest

from asympl import (AlmostSymplecticChart, Box, FourierFunction,
                    RationalPolynomial, almost_poisson_bracket,
                    genericity_check, is_fully_hamiltonian, spectrum,
                    spectrum_at, verify_rank_bound)
from asympl.spectra import (find_nonzero_point, interval_eval,
                            pointwise_check, primitive_direction)

from conftest import rand_block_chart, rand_chart, rand_fourier


def var(n, i):
    return RationalPolynomial.variable(n, i)


# -- spectrum -------------------------------------------------------------------

def test_pendulum_spectrum(a5):
    _, F = a5
    assert set(spectrum(F).support) == {(1, 0, 0, 0, 0), (1, 1, 0, 0, 0),
                                        (1, -1, 0, 0, 0)}


def test_pendulum_spectrum_matches_fft(a5):
    # numeric cross-check: 2-D FFT over the first two angles at fixed a
    _, F = a5
    m = 32
    grid = 2 * np.pi * np.arange(m) / m
    a = [0.3, -0.7, 0.2, 0.1, -0.4]
    vals = np.empty((m, m))
    for i, al1 in enumerate(grid):
        for j, al2 in enumerate(grid):
            vals[i, j] = F.evaluate(a, [al1, al2, 0.0, 0.0, 0.0])
    coeffs = np.fft.fft2(vals) / m ** 2
    detected = set()
    for i in range(m):
        for j in range(m):
            if abs(coeffs[i, j]) > 1e-9:
                nu1 = i if i <= m // 2 else i - m
                nu2 = j if j <= m // 2 else j - m
                if (nu1, nu2) != (0, 0):
                    detected.add((nu1, nu2))
    expected = set()
    for nu in spectrum(F).support:
        expected.add((nu[0], nu[1]))
        expected.add((-nu[0], -nu[1]))
    assert detected == expected


def test_angle_independent_spectrum_empty():
    F = FourierFunction.from_polynomial(var(3, 0) ** 2)
    assert spectrum(F).is_empty()


def test_pointwise_spectrum_vanishing_coefficient():
    F = FourierFunction.cosine(2, (1, 0), var(2, 1))  # a2 cos(alpha1)
    assert spectrum(F).support == ((1, 0),)
    assert spectrum_at(F, [Fraction(3), Fraction(0)]).is_empty()
    assert spectrum_at(F, [Fraction(3), Fraction(1, 2)]).support == ((1, 0),)


def test_primitive_direction():
    assert primitive_direction((2, -4, 6)) == (1, -2, 3)
    assert primitive_direction((-2, 4)) == (1, -2)


# -- classifier -------------------------------------------------------------------

def test_a5_pendulum_accepted(a5):
    chart, F = a5
    assert is_fully_hamiltonian(chart, F).accepted


def test_a5_rejects_reduced_angles(a5):
    chart, _ = a5
    verdict = is_fully_hamiltonian(chart, FourierFunction.cosine(5, (0, 0, 1, 0, 0)))
    assert not verdict.accepted
    w = verdict.witness
    assert w.nu == (0, 0, 1, 0, 0)
    # the contraction hits the unit C entry on indices {3,4,5}
    assert {w.i, w.j} <= {2, 3, 4}
    assert w.value != 0
    assert (0, 0, 1, 0, 0) in spectrum(FourierFunction.cosine(5, (0, 0, 1, 0, 0))).pairs


def test_symplectic_chart_accepts_everything(symplectic3):
    chart, _ = symplectic3
    rng = np.random.default_rng(1)
    for _ in range(10):
        F = rand_fourier(rng, 3)
        v = is_fully_hamiltonian(chart, F)
        assert v.accepted and "symplectic" in v.certificate


def test_exact_vs_pointwise_agree():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(3, 6))
        if rng.random() < 0.5:
            chart = rand_chart(rng, n)
        else:
            chart = rand_block_chart(rng, n, int(rng.integers(1, n - 1)))
        if rng.random() < 0.4:
            F = rand_fourier(rng, n)
        else:
            m = max(1, n - 3)
            F = rand_fourier(rng, n, index_slots=tuple(range(m)))
        symbolic = is_fully_hamiltonian(chart, F).accepted
        numeric = pointwise_check(chart, F, samples=100, seed=11)
        assert symbolic == numeric, (n, F.support())


def test_accepted_set_closed_under_sum_and_bracket(a5):
    chart, F5 = a5
    rng = np.random.default_rng(3)
    G = rand_fourier(rng, 5, index_slots=(0, 1))
    assert is_fully_hamiltonian(chart, G).accepted
    assert is_fully_hamiltonian(chart, F5 + G).accepted
    assert is_fully_hamiltonian(chart, almost_poisson_bracket(chart, F5, G)).accepted


def test_find_nonzero_point_respects_domain():
    box = Box([(1, 2), (-1, 1)])
    p = var(2, 0) * var(2, 1)  # vanishes on the a2 = 0 slice
    point = find_nonzero_point(p, box)
    assert box.contains(point)
    assert p.evaluate(point) != 0


# -- genericity --------------------------------------------------------------------

def test_pendulum_fg2_constant_certificate(a5):
    chart, F = a5
    fg1 = genericity_check(chart, F, "FG1")
    fg2 = genericity_check(chart, F, "FG2")
    assert fg1.holds() and fg2.holds()
    assert all("constant" in d.certificate for d in fg2.directions)
    # one direction per primitive class: (1,0,..) and the coupled ones
    assert {d.direction for d in fg2.directions} == {
        (1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, -1, 0, 0, 0)}


def test_vanishing_coefficient_fg2_inconclusive():
    chart = AlmostSymplecticChart.canonical(2, Box.cube(2, 2))
    F = FourierFunction.cosine(2, (1, 0), var(2, 1))  # coefficient a2, zero inside
    assert genericity_check(chart, F, "FG1").holds()
    fg2 = genericity_check(chart, F, "FG2")
    assert fg2.status == "inconclusive"
    # soundness: a rational zero of all parallel coefficients exists in the box,
    # so "holds" would be wrong
    assert not fg2.holds()


def test_angle_independent_trivially_generic(symplectic3):
    chart, _ = symplectic3
    F = FourierFunction.from_polynomial(var(3, 0))
    assert genericity_check(chart, F, "FG1").holds()
    assert genericity_check(chart, F, "FG2").holds()


def test_interval_certificate_on_bounded_box():
    chart = AlmostSymplecticChart.canonical(2, Box.cube(2, 2))
    F = FourierFunction.cosine(2, (1, 0), var(2, 1) ** 2 + 1)
    fg2 = genericity_check(chart, F, "FG2")
    assert fg2.holds()
    assert any("range" in d.certificate for d in fg2.directions)


def test_one_dimensional_base_certificate():
    chart = AlmostSymplecticChart.canonical(1, Box.cube(1, 2))
    F = FourierFunction.cosine(1, (1,), var(1, 0))
    fg2 = genericity_check(chart, F, "FG2")
    assert fg2.holds()
    assert any("finite" in d.certificate for d in fg2.directions)


def test_fg2_holds_implies_fg1_holds():
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        chart = rand_chart(rng, n)
        F = rand_fourier(rng, n)
        fg1 = {d.direction: d.status for d in
               genericity_check(chart, F, "FG1").directions}
        for d in genericity_check(chart, F, "FG2").directions:
            if d.status == "holds":
                assert fg1[d.direction] == "holds"


def test_interval_eval_encloses_range():
    rng = np.random.default_rng(5)
    box = Box.cube(3, 2)
    for _ in range(20):
        p = RationalPolynomial(3, {tuple(int(e) for e in rng.integers(0, 3, 3)):
                                   Fraction(int(rng.integers(-4, 5)), 2)
                                   for _ in range(3)})
        lo, hi = interval_eval(p, box)
        for _ in range(30):
            x = box.sample_rational(rng)
            assert lo <= p.evaluate(x) <= hi


# -- rank bound ---------------------------------------------------------------------

def test_rank_bound_a4(a4):
    chart, _ = a4
    report = verify_rank_bound(chart, samples=100, seed=0)
    assert report.ok()
    assert report.kernel_dim_histogram == {1: 100}


def test_rank_bound_a5(a5):
    chart, _ = a5
    report = verify_rank_bound(chart, samples=100, seed=0)
    assert report.ok()
    assert report.kernel_dim_histogram == {2: 100}


def test_rank_bound_symplectic(symplectic3):
    chart, _ = symplectic3
    report = verify_rank_bound(chart, samples=10, seed=0)
    assert report.symplectic and report.kernel_dim_histogram == {}
