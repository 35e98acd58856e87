"""Shared fixtures and random generators for the test suite.

Generators take an explicit numpy Generator so every test pins its own seed;
nothing here draws from global randomness.
"""

from fractions import Fraction

import numpy as np
import pytest

from asympl import (AlmostSymplecticChart, Box, FourierFunction,
                    RationalPolynomial)
from asympl.demos import demo_a4, demo_a5, demo_symplectic


@pytest.fixture(scope="session")
def a4():
    return demo_a4()


@pytest.fixture(scope="session")
def a5():
    return demo_a5()


@pytest.fixture(scope="session")
def symplectic3():
    return demo_symplectic()


def rand_fraction(rng, max_num=4, max_den=3, nonzero=False):
    while True:
        num = int(rng.integers(-max_num, max_num + 1))
        if num or not nonzero:
            return Fraction(num, int(rng.integers(1, max_den + 1)))


def rand_poly(rng, nvars, max_terms=3, max_deg=2, nonzero=False):
    terms = {}
    for _ in range(int(rng.integers(0 if not nonzero else 1, max_terms + 1))):
        exps = tuple(int(rng.integers(0, max_deg + 1)) for _ in range(nvars))
        terms[exps] = rand_fraction(rng, nonzero=True)
    p = RationalPolynomial(nvars, terms)
    if nonzero and p.is_zero():
        return RationalPolynomial.constant(nvars, rand_fraction(rng, nonzero=True))
    return p


def rand_index(rng, n, max_entry=2, nonzero=True):
    while True:
        nu = tuple(int(rng.integers(-max_entry, max_entry + 1)) for _ in range(n))
        if any(nu) or not nonzero:
            return nu


def rand_fourier(rng, n, max_harmonics=3, max_deg=2, index_slots=None,
                 max_entry=2):
    """Random Fourier function; ``index_slots`` confines harmonics to those
    angle slots (the remaining index components are forced to zero)."""
    harmonics = {}
    for _ in range(int(rng.integers(1, max_harmonics + 1))):
        if index_slots is None:
            nu = rand_index(rng, n, max_entry=max_entry, nonzero=False)
        else:
            nu = [0] * n
            for s in index_slots:
                nu[s] = int(rng.integers(-max_entry, max_entry + 1))
            nu = tuple(nu)
        harmonics[nu] = (rand_poly(rng, n, nonzero=True),
                         rand_poly(rng, n))
    return FourierFunction(n, harmonics)


def rand_chart(rng, n, max_deg=2, density=0.6, radius=2):
    """Random antisymmetric polynomial chart on a cube."""
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                upper[(i, j)] = rand_poly(rng, n, max_terms=2, max_deg=max_deg)
    return AlmostSymplecticChart.from_upper_triangle(n, upper, Box.cube(n, radius))


def rand_block_chart(rng, n, m, radius=2):
    """Chart whose couplings touch only the last n - m coordinates, so the
    common kernel of C contains span{e_1..e_m}: Hamiltonians with spectrum in
    the first m slots are fully-Hamiltonian by construction."""
    upper = {}
    for i in range(m, n):
        for j in range(i + 1, n):
            if rng.random() < 0.8:
                p = rand_poly(rng, n, max_terms=2, max_deg=2)
                # make the entry depend only on the last block's variables
                terms = {}
                for exps, coeff in p.terms.items():
                    masked = tuple(0 if v < m else e for v, e in enumerate(exps))
                    terms[masked] = terms.get(masked, Fraction(0)) + coeff
                upper[(i, j)] = RationalPolynomial(n, terms)
    return AlmostSymplecticChart.from_upper_triangle(n, upper, Box.cube(n, radius))


def rand_unimodular(rng, n, shears=6):
    """Random unimodular matrix: a product of unit shears and permutations."""
    Z = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(shears):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        c = int(rng.integers(-2, 3))
        for col in range(n):
            Z[int(i)][col] += c * Z[int(j)][col]
    perm = rng.permutation(n)
    Z = [Z[int(p)] for p in perm]
    if int(rng.integers(0, 2)):
        Z[0] = [-x for x in Z[0]]
    return Z


def random_state(rng, n, action_scale=1.5):
    a = rng.uniform(-action_scale, action_scale, size=n)
    alpha = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return list(a), list(alpha)
