"""Chart machinery: C-tensor, kernels, fields, bracket, transforms."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from asympl import (AATransform, AAVectorField, AlmostSymplecticChart, Box,
                    DimensionMismatchError, DomainError, FourierFunction,
                    RationalPolynomial, TransformError, almost_poisson_bracket,
                    apply_transform, c_tensor, divergence, field_commutator,
                    hamiltonian_vector_field, kernel_at)
from asympl._linalg import nullspace, rank

from conftest import (rand_chart, rand_fourier, rand_poly, rand_unimodular,
                      random_state)


def var(n, i):
    return RationalPolynomial.variable(n, i)


# -- C tensor -----------------------------------------------------------------

def test_a4_c_tensor_sign_pattern(a4):
    chart, _ = a4
    C = chart.c_tensor()
    one = RationalPolynomial.one(4)
    for perm in itertools.permutations((1, 2, 3)):
        sign = 1 if perm in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1
        assert C.entry(*perm) == one * sign
    for i, j in itertools.combinations(range(1, 4), 2):
        assert C.entry(0, i, j).is_zero()


def test_zero_chart_has_zero_tensor():
    chart = AlmostSymplecticChart.canonical(4)
    assert chart.c_tensor().is_zero()
    assert chart.is_symplectic()


def test_a5_c_tensor_and_finite_difference_oracle(a5):
    chart, _ = a5
    C = chart.c_tensor()
    assert C.entry(2, 3, 4) == RationalPolynomial.one(5)
    for (i, j, k) in itertools.combinations(range(5), 3):
        if (i, j, k) != (2, 3, 4):
            assert C.entry(i, j, k).is_zero(), (i, j, k)
    # independent finite-difference oracle for the cyclic derivative sum
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(20):
        a = rng.uniform(-1.5, 1.5, 5)
        for (i, j, k) in itertools.combinations(range(5), 3):
            num = 0.0
            for (x, y, z) in ((i, j, k), (k, i, j), (j, k, i)):
                ap, am = a.copy(), a.copy()
                ap[z] += h
                am[z] -= h
                num += (chart.A[x][y].evaluate_float(ap)
                        - chart.A[x][y].evaluate_float(am)) / (2 * h)
            assert abs(num - C.entry(i, j, k).evaluate_float(a)) < 1e-6


# -- kernels --------------------------------------------------------------------

def brute_kernel(C, a, n):
    rows = C.evaluate_rows(a)
    return nullspace(rows, ncols=n)


def test_kernel_a4(a4):
    chart, _ = a4
    a = [Fraction(1, 3), Fraction(2, 5), Fraction(-1, 2), Fraction(3, 4)]
    basis = kernel_at(chart.c_tensor(), a)
    assert len(basis) == 1 == chart.n - 3
    assert basis[0] == [1, 0, 0, 0]


def test_kernel_a5(a5):
    chart, _ = a5
    a = [Fraction(1, 2)] * 5
    basis = kernel_at(chart.c_tensor(), a)
    assert len(basis) == 2
    span = [[Fraction(x) for x in v] for v in basis]
    assert rank(span + [[1, 0, 0, 0, 0]]) == 2
    assert rank(span + [[0, 1, 0, 0, 0]]) == 2


def test_kernel_zero_tensor_full_space():
    chart = AlmostSymplecticChart.canonical(3)
    basis = kernel_at(chart.c_tensor(), [0, 0, 0])
    assert len(basis) == 3


def test_kernel_matches_brute_oracle():
    rng = np.random.default_rng(4)
    for _ in range(10):
        chart = rand_chart(rng, int(rng.integers(3, 6)))
        C = chart.c_tensor()
        a = chart.domain.sample_rational(rng)
        assert kernel_at(C, a) == brute_kernel(C, a, chart.n)


def test_kernel_domain_error(a4):
    chart, _ = a4
    with pytest.raises(DomainError):
        kernel_at(chart.c_tensor(), [100, 0, 0, 0])


# -- Hamiltonian vector fields -----------------------------------------------------

def test_vertical_field_from_basic_function():
    # F = sum xi_i a_i generates the angle translation with frequencies xi
    n = 3
    chart = rand_chart(np.random.default_rng(5), n)
    xi = [Fraction(2), Fraction(-1, 3), Fraction(5)]
    F = FourierFunction.from_polynomial(
        RationalPolynomial(n, {tuple(int(i == j) for j in range(n)): xi[i]
                               for i in range(n)}))
    X = hamiltonian_vector_field(chart, F)
    assert all(g.is_zero() for g in X.a_components)
    for i in range(n):
        assert X.alpha_components[i] == FourierFunction.constant(n, xi[i])


def test_canonical_pendulum_field():
    chart = AlmostSymplecticChart.canonical(1)
    F = FourierFunction.from_polynomial(
        RationalPolynomial(1, {(2,): Fraction(1, 2)})) \
        + FourierFunction.cosine(1, (1,))
    X = hamiltonian_vector_field(chart, F)
    assert X.a_components[0] == FourierFunction.sine(1, (1,))
    assert X.alpha_components[0] == FourierFunction.action_variable(1, 0)


def test_a4_field_component_formula(a4):
    # alpha_i rate must equal dF/da_i + A_i1 dF/dalpha_1 for F = F(a, alpha1)
    chart, F = a4
    X = hamiltonian_vector_field(chart, F)
    rng = np.random.default_rng(6)
    for _ in range(20):
        a, al = random_state(rng, 4)
        dF1 = F.angle_derivative(0).evaluate(a, al)
        for i in range(4):
            expected = (F.action_derivative(i).evaluate(a, al)
                        + chart.A[i][0].evaluate_float(a) * dF1)
            assert math.isclose(X.alpha_components[i].evaluate(a, al),
                                expected, rel_tol=1e-12, abs_tol=1e-12)
            assert math.isclose(X.a_components[i].evaluate(a, al),
                                -F.angle_derivative(i).evaluate(a, al),
                                rel_tol=1e-12, abs_tol=1e-12)


# -- almost-Poisson bracket ----------------------------------------------------------

def test_bracket_of_action_with_sine():
    chart = AlmostSymplecticChart.canonical(4)
    for i in range(4):
        for j in range(4):
            nu = tuple(int(m == j) for m in range(4))
            br = almost_poisson_bracket(chart, FourierFunction.action_variable(4, i),
                                        FourierFunction.sine(4, nu))
            if i == j:
                assert br == FourierFunction.cosine(4, nu, -1)
            else:
                assert br.is_zero()


def test_bracket_antisymmetry_and_self():
    rng = np.random.default_rng(8)
    chart = rand_chart(rng, 3)
    F = rand_fourier(rng, 3)
    G = rand_fourier(rng, 3)
    assert almost_poisson_bracket(chart, F, G) == -almost_poisson_bracket(chart, G, F)
    assert almost_poisson_bracket(chart, F, F).is_zero()


def test_basic_functions_in_involution():
    chart = rand_chart(np.random.default_rng(10), 3)
    a1 = FourierFunction.action_variable(3, 0)
    a2 = FourierFunction.action_variable(3, 1)
    assert almost_poisson_bracket(chart, a1, a2).is_zero()


def test_bracket_is_minus_lie_derivative():
    # numeric oracle: {F,G}(x) = -X_F[G](x) with dG by finite differences
    rng = np.random.default_rng(12)
    chart = rand_chart(rng, 3)
    F = rand_fourier(rng, 3)
    G = rand_fourier(rng, 3)
    bracket = almost_poisson_bracket(chart, F, G)
    X = hamiltonian_vector_field(chart, F)
    h = 1e-6
    for _ in range(10):
        a, al = random_state(rng, 3)
        flow = X.evaluate(a, al)
        lie = 0.0
        for m in range(3):
            ap, am_ = list(a), list(a)
            ap[m] += h
            am_[m] -= h
            lie += flow[m] * (G.evaluate(ap, al) - G.evaluate(am_, al)) / (2 * h)
            alp, alm = list(al), list(al)
            alp[m] += h
            alm[m] -= h
            lie += flow[3 + m] * (G.evaluate(a, alp) - G.evaluate(a, alm)) / (2 * h)
        assert math.isclose(bracket.evaluate(a, al), -lie, rel_tol=2e-5, abs_tol=2e-5)


def test_jacobi_identity_fails_on_a4(a4):
    chart, _ = a4
    f = FourierFunction.sine(4, (0, 1, 0, 0))
    g = FourierFunction.sine(4, (0, 0, 1, 0))
    h = FourierFunction.sine(4, (0, 0, 0, 1))

    def br(x, y):
        return almost_poisson_bracket(chart, x, y)

    jacobiator = br(br(f, g), h) + br(br(g, h), f) + br(br(h, f), g)
    assert not jacobiator.is_zero()
    # and on a symplectic chart the same triple satisfies Jacobi exactly
    flat = AlmostSymplecticChart.canonical(4)

    def brf(x, y):
        return almost_poisson_bracket(flat, x, y)

    assert (brf(brf(f, g), h) + brf(brf(g, h), f) + brf(brf(h, f), g)).is_zero()


def test_lie_bracket_anti_homomorphism(a5):
    chart, _ = a5
    rng = np.random.default_rng(14)
    F = rand_fourier(rng, 5, index_slots=(0, 1))
    G = rand_fourier(rng, 5, index_slots=(0, 1))
    lie = field_commutator(hamiltonian_vector_field(chart, F),
                           hamiltonian_vector_field(chart, G))
    assert lie == -hamiltonian_vector_field(
        chart, almost_poisson_bracket(chart, F, G))


# -- divergence -----------------------------------------------------------------------

def test_divergence_of_hamiltonian_fields_is_zero():
    rng = np.random.default_rng(16)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        chart = rand_chart(rng, n)
        F = rand_fourier(rng, n)
        X = hamiltonian_vector_field(chart, F)
        assert divergence(chart, X).is_zero()


def test_divergence_nonzero_control():
    n = 2
    chart = AlmostSymplecticChart.canonical(n)
    zero = FourierFunction.zero(n)
    X = AAVectorField([FourierFunction.action_variable(n, 0), zero], [zero, zero])
    assert divergence(chart, X) == FourierFunction.constant(n, 1)


def test_a5_pendulum_divergence(a5):
    chart, F = a5
    assert divergence(chart, hamiltonian_vector_field(chart, F)).is_zero()


# -- transforms --------------------------------------------------------------------------

def test_identity_transform_is_noop(a4):
    chart, F = a4
    chart2, F2 = apply_transform(chart, F, AATransform.identity(4))
    assert F2 == F
    assert chart2.A == chart.A
    assert chart2.domain == chart.domain


def test_unimodular_validation():
    with pytest.raises(TransformError):
        AATransform([[2, 0], [0, 1]])


def test_shear_transform_pointwise_equality():
    n = 2
    chart = AlmostSymplecticChart.from_upper_triangle(
        n, {(0, 1): var(n, 0)}, Box.cube(n, 3))
    F = FourierFunction.cosine(n, (1, 0), var(n, 1))
    T = AATransform([[1, 1], [0, 1]])
    chart2, F2 = apply_transform(chart, F, T)
    assert set(F2.harmonics) == {(1, 0)}  # M nu for nu = (1,0)
    rng = np.random.default_rng(18)
    for _ in range(100):
        a, al = random_state(rng, n)
        na, nal = T.apply_state(a, al)
        assert math.isclose(F2.evaluate(na, nal), F.evaluate(a, al),
                            rel_tol=1e-12, abs_tol=1e-12)


def test_random_transform_pointwise_equality_and_antisymmetry():
    rng = np.random.default_rng(20)
    for _ in range(5):
        n = int(rng.integers(2, 5))
        chart = rand_chart(rng, n)
        F = rand_fourier(rng, n)
        T = AATransform(rand_unimodular(rng, n),
                        z=[Fraction(int(rng.integers(-2, 3)), 2) for _ in range(n)])
        chart2, F2 = apply_transform(chart, F, T)
        for i in range(n):
            for j in range(n):
                assert (chart2.A[i][j] + chart2.A[j][i]).is_zero()
        # exact pointwise equality at rational actions and quarter-turn
        # angles (an integer Z^{-T} maps quarter turns to quarter turns)
        Zi_t = list(zip(*T.Z_inv))
        for _ in range(20):
            a = [Fraction(int(rng.integers(-4, 5)), 2) for _ in range(n)]
            q = [int(rng.integers(0, 8)) for _ in range(n)]
            na = T.apply_point_exact(a)
            nq = [sum(c * qi for c, qi in zip(row, q)) for row in Zi_t]
            assert F2.evaluate_exact(na, nq) == F.evaluate_exact(a, q)
        # and float agreement at generic angles, up to roundoff of the
        # composed (possibly large) coefficients
        for _ in range(10):
            a, al = random_state(rng, n)
            na, nal = T.apply_state(a, al)
            assert math.isclose(F2.evaluate(na, nal), F.evaluate(a, al),
                                rel_tol=5e-8, abs_tol=5e-8)


def test_pure_angle_shift():
    n = 2
    chart = AlmostSymplecticChart.canonical(n, Box.cube(n, 2))
    F = FourierFunction.cosine(n, (1, 0))
    # shift only the second angle: harmonics of F are untouched
    G = [RationalPolynomial.zero(n), var(n, 0) ** 2]
    T = AATransform([[1, 0], [0, 1]], G=G)
    chart2, F2 = apply_transform(chart, F, T)
    assert F2 == F
    a, al = [0.5, -0.25], [1.0, 2.0]
    na, nal = T.apply_state(a, al)
    assert na == a
    assert nal[0] == al[0]
    assert math.isclose(nal[1], al[1] + 0.25, abs_tol=1e-15)
    # the shift curls into the action-action block:
    # sigma = da2 ^ d(alpha2~ - a1^2) picks up +2 a1 da1 ^ da2
    assert chart2.A[0][1] == 2 * var(n, 0)


def test_angle_shift_unrepresentable_raises():
    n = 2
    chart = AlmostSymplecticChart.canonical(n, Box.cube(n, 2))
    F = FourierFunction.cosine(n, (0, 1))  # depends on the shifted angle
    T = AATransform([[1, 0], [0, 1]],
                    G=[RationalPolynomial.zero(n), var(n, 0)])
    with pytest.raises(TransformError):
        apply_transform(chart, F, T)


def test_transform_domain_hull():
    box = Box([(-1, 2), (0, None)])
    T = AATransform([[1, -1], [0, 1]], z=[Fraction(1, 2), 0])
    chart = AlmostSymplecticChart.canonical(2, box)
    chart2, _ = apply_transform(chart, FourierFunction.zero(2), T)
    (lo0, hi0), (lo1, hi1) = chart2.domain.intervals
    assert (lo0, hi0) == (None, Fraction(5, 2))  # [-1,2] - [0,inf) + 1/2
    assert (lo1, hi1) == (Fraction(0), None)
