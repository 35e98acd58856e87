"""Reduction, reconstruction, symplectization, pipeline."""

from fractions import Fraction

import numpy as np
import pytest

from asympl import (AlmostSymplecticChart, Box, ClassificationError,
                    DomainError, FourierFunction, IntegratorConfig,
                    NormalizedSplit, RationalPolynomial, RegimeError,
                    hamiltonian_vector_field, integrate, pipeline, reconstruct,
                    reduce, symplectize)
from asympl.demos import demo_a5
from asympl.reduction import reconstruction_rates


def var(n, i):
    return RationalPolynomial.variable(n, i)


LEVEL5 = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]


def test_reduce_a4_single_dof(a4):
    chart, F = a4
    split = NormalizedSplit(4, 3)
    system = reduce(chart, F, split, [Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)])
    assert system.r == 1
    assert system.chart.A[0][0].is_zero()
    assert system.is_symplectic()
    # f_c(I, phi) = I^2/2 - cos(phi) + constant
    f = system.hamiltonian
    assert f.pair((1,))[0] == RationalPolynomial.constant(1, -1)
    assert f.zero_harmonic() == RationalPolynomial(
        1, {(2,): Fraction(1, 2), (0,): Fraction(1, 3) + Fraction(1, 5) + Fraction(1, 7)})


def test_reduce_a5_perturbed_pendulum(a5):
    chart, F = a5
    split = NormalizedSplit(5, 3)
    system = reduce(chart, F, split, LEVEL5)
    assert system.r == 2
    # A_II carries the g12 coupling, evaluated at the level
    assert system.chart.A[0][1] == var(2, 1)
    assert system.is_symplectic()  # r = 2: the reduced form is closed
    # reduced Hamiltonian is the perturbed pendulum plus the level constant
    f = system.hamiltonian
    assert f.pair((1, 0))[0] == RationalPolynomial.constant(2, -1)
    assert f.pair((1, 1))[0] == RationalPolynomial.constant(2, Fraction(-1, 2))
    assert f.pair((1, -1))[0] == RationalPolynomial.constant(2, Fraction(-1, 2))
    const = f.zero_harmonic().subs_partial({0: 0, 1: 0}).constant_value()
    assert const == Fraction(13, 12)


def test_reduce_basic_hamiltonian_freezes_actions(a5):
    chart, _ = a5
    F = FourierFunction.from_polynomial(var(5, 0) + 2 * var(5, 1))
    system = reduce(chart, F, NormalizedSplit(5, 3), LEVEL5)
    X = system.vector_field()
    assert all(g.is_zero() for g in X.a_components)


def test_reduce_errors(a5):
    chart, F = a5
    split = NormalizedSplit(5, 3)
    with pytest.raises(DomainError):
        reduce(chart, F, split, [Fraction(100), 0, 0])
    psi_dependent = F + FourierFunction.cosine(5, (0, 0, 1, 0, 0))
    with pytest.raises(RegimeError):
        reduce(chart, psi_dependent, split, LEVEL5)


# -- reconstruction ---------------------------------------------------------------

def test_reconstruction_rates_formula(a5):
    chart, F = a5
    split = NormalizedSplit(5, 3)
    rates = reconstruction_rates(chart, F, split, LEVEL5)
    assert len(rates) == 3
    # dF/dJ_m = 1 and A_JI couples through -g13 = -a1 (row 3, col 1) etc.
    rng = np.random.default_rng(0)
    for _ in range(10):
        I = rng.uniform(-1, 1, 2)
        phi = rng.uniform(0, 2 * np.pi, 2)
        a = [I[0], I[1], 0.5, 1 / 3, 0.25]
        al = [phi[0], phi[1], 0.0, 0.0, 0.0]
        dphi = [F.angle_derivative(l).evaluate(a, al) for l in range(2)]
        for m in range(3):
            expected = 1.0 + sum(
                chart.A[2 + m][l].evaluate_float(a) * dphi[l] for l in range(2))
            assert abs(rates[m].evaluate(I, phi) - expected) < 1e-12


def test_reconstruct_basic_hamiltonian_linear_growth(a5):
    chart, _ = a5
    n = 5
    F = FourierFunction.from_polynomial(RationalPolynomial(
        n, {tuple(int(i == j) for j in range(n)): Fraction(i + 1, 2)
            for i in range(n)}))
    split = NormalizedSplit(5, 3)
    system = reduce(chart, F, split, LEVEL5)
    cfg = IntegratorConfig(n_samples=100)
    traj = integrate(system.vector_field(), ([0.2, -0.1], [0.0, 1.0]), 10.0, cfg)
    psi = reconstruct(chart, F, split, LEVEL5, traj, wrap=False)
    # vertical flow: psi_m grows linearly at rate dF/dJ_m = (m+3)/2
    for m in range(3):
        expected = traj.times * (m + 3) / 2
        assert np.max(np.abs(psi[:, m] - expected)) < 1e-9


def test_reconstruct_zero_hamiltonian_constant(a5):
    chart, _ = a5
    F = FourierFunction.zero(5)
    split = NormalizedSplit(5, 3)
    system = reduce(chart, F, split, LEVEL5)
    traj = integrate(system.vector_field(), ([0.1, 0.2], [0.3, 0.4]), 5.0,
                     IntegratorConfig(n_samples=50))
    psi = reconstruct(chart, F, split, LEVEL5, traj, psi0=[1.0, 2.0, 3.0],
                      wrap=False)
    assert np.allclose(psi, np.array([1.0, 2.0, 3.0]) * np.ones((len(traj.times), 1)))


def test_reconstruct_matches_full_flow(a5):
    chart, F = a5
    split = NormalizedSplit(5, 3)
    cfg = IntegratorConfig(n_samples=200)
    I0, phi0 = [4.0, 0.1], [0.2, 0.5]
    psi0 = [0.3, 0.6, 0.9]
    c = LEVEL5
    full_field = hamiltonian_vector_field(chart, F)
    full = integrate(full_field, (I0 + [float(x) for x in c], phi0 + psi0),
                     50.0, cfg)
    system = reduce(chart, F, split, c)
    red = integrate(system.vector_field(), (I0, phi0), 50.0, cfg)
    psi = reconstruct(chart, F, split, c, red, psi0=psi0, wrap=False)
    assert np.max(np.abs(psi - full.angles[:, 2:])) < 1e-7


# -- symplectization -----------------------------------------------------------------

def test_symplectize_a4_shift_polynomials(a4):
    chart, F = a4
    split = NormalizedSplit(4, 3)
    symp = symplectize(chart, F, split, I0=0)
    # G_m = int_0^I A_{J_m, I}(x, J) dx with A_{J_m, I} = +g_{m+1}
    n = 4
    assert symp.G[0] == RationalPolynomial(n, {(2, 1, 0, 0): Fraction(1, 2)})
    assert symp.G[1] == var(n, 0) * var(n, 2)
    assert symp.G[2] == var(n, 0)
    # the straightened chart has no I-J couplings left
    for m in range(3):
        assert symp.chart.A[0][1 + m].is_zero()


def test_symplectize_toy_example():
    # g2(a1, a2) = a2, I0 = 0: the A entry A_{I,J} = -a2 integrates to the
    # shift a1 a2 on the J angle (the exactness assert inside symplectize is
    # the normative sign check)
    n = 2
    chart = AlmostSymplecticChart.from_upper_triangle(
        n, {(0, 1): -var(n, 1)}, Box.cube(n, 2))
    F = (FourierFunction.from_polynomial(
        RationalPolynomial(n, {(2, 0): Fraction(1, 2), (0, 1): 1}))
        + FourierFunction.cosine(n, (1, 0)))
    symp = symplectize(chart, F, NormalizedSplit(2, 1), I0=0)
    assert symp.G[0] == var(n, 0) * var(n, 1)
    assert symp.chart.A[0][1].is_zero()


def test_symplectize_zero_chart_identity():
    n = 4
    chart = AlmostSymplecticChart.canonical(n, Box.cube(n, 2))
    F = (FourierFunction.from_polynomial(var(n, 1))
         + FourierFunction.cosine(n, (1, 0, 0, 0)))
    symp = symplectize(chart, F, NormalizedSplit(n, 3))
    assert all(g.is_zero() for g in symp.G)
    assert symp.hamiltonian == F


def test_symplectize_regime_error(a5):
    chart, F = a5
    with pytest.raises(RegimeError):
        symplectize(chart, F, NormalizedSplit(5, 3))  # r = 2


# -- pipeline -----------------------------------------------------------------------

def test_pipeline_vertical(a5):
    chart, _ = a5
    F = FourierFunction.from_polynomial(var(5, 0))
    report = pipeline(chart, F)
    assert report.regime == "vertical" and report.r == 0


def test_pipeline_a4_symplectizable(a4):
    chart, F = a4
    report = pipeline(chart, F)
    assert report.regime == "symplectizable"
    assert report.r == 1 and report.k == 3
    assert report.symplectization is not None
    assert report.fg1.holds() and report.fg2.holds()


def test_pipeline_a5_reduced_family(a5):
    chart, F = a5
    report = pipeline(chart, F, levels=[LEVEL5])
    assert report.regime == "reduced-family"
    assert report.r == 2
    assert len(report.levels) == 1
    assert report.levels[0].symplectic
    assert report.levels[0].sub_report is None


def test_pipeline_rejects_with_witness(a5):
    chart, _ = a5
    with pytest.raises(ClassificationError):
        pipeline(chart, FourierFunction.sine(5, (0, 0, 0, 1, 0)))


def test_pipeline_padded_a5_stops_at_symplectic_r3():
    # embed the n=5 coupling block into n=6: one reduction step lands on a
    # 3-degree-of-freedom symplectic system and the iteration stops
    base, _ = demo_a5()
    n = 6
    upper = {}
    for i in range(5):
        for j in range(i + 1, 5):
            p = base.A[i][j]
            upper[(i, j)] = RationalPolynomial(
                n, {e + (0,): c for e, c in p.terms.items()})
    chart = AlmostSymplecticChart.from_upper_triangle(
        n, upper, Box([(None, None)] * 2 + [(-8, 8)] * 3 + [(None, None)]))
    F = (FourierFunction.cosine(n, (1, 0, 0, 0, 0, 0), -1)
         + FourierFunction.cosine(n, (0, 1, 0, 0, 0, 0))
         + FourierFunction.sine(n, (0, 0, 0, 0, 0, 1))
         + FourierFunction.from_polynomial(
             RationalPolynomial(n, {(2, 0, 0, 0, 0, 0): Fraction(1, 2),
                                    (0, 0, 1, 0, 0, 0): 1})))
    report = pipeline(chart, F, levels=[[0, 0, 0]])
    assert report.r == 3 and report.k == 3
    assert report.regime == "reduced-family"
    assert report.levels[0].symplectic
    assert report.levels[0].sub_report is None
