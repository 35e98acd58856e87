"""Exact integer linear algebra for spectrum lattices.

Hermite and Smith normal forms with explicit unimodular factors, saturation
of the span of a set of integer vectors, completion of the saturated basis to
a basis of Z^n, and the unimodular angle-normalizing coordinate change built
from it.  All arithmetic is on Python ints, so coefficient growth is a
non-issue.  Matrices are plain lists of lists.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg, spectra
from .chart import AATransform, AlmostSymplecticChart, apply_transform
from .errors import ClassificationError, DimensionMismatchError
from .exactalg import FourierFunction


def _nearest_div(a: int, b: int) -> int:
    """round(a / b) in exact integer arithmetic (ties toward +inf)."""
    if b < 0:
        a, b = -a, -b
    return (2 * a + b) // (2 * b)


def hermite_normal_form(V):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular and U V = H; pivots are positive and the
    entries above each pivot are reduced into [0, pivot).
    """
    H = [[int(x) for x in row] for row in V]
    m = len(H)
    n = len(H[0]) if m else 0
    U = _linalg.int_identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if H[i][c] != 0]
            if not nonzero:
                break
            i0 = min(nonzero, key=lambda i: (abs(H[i][c]), i))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    q = _nearest_div(H[i][c], H[r][c])
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]  # floor: remainder lands in [0, pivot)
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def smith_normal_form(V):
    """Smith normal form with unimodular factors.

    Returns (U, D, W) with U V W = D, D diagonal with non-negative entries in
    a divisibility chain d_1 | d_2 | ...
    """
    D = [[int(x) for x in row] for row in V]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _linalg.int_identity(m)
    W = _linalg.int_identity(n)

    def row_op(i, j, q):  # row_i -= q row_j
        D[i] = [x - q * y for x, y in zip(D[i], D[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(j, i, q):  # col_j -= q col_i
        for row in D:
            row[j] -= q * row[i]
        for row in W:
            row[j] -= q * row[i]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        pivots = [(abs(D[i][j]), i, j)
                  for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
        if not pivots:
            break
        _, pi, pj = min(pivots)
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            # clear column t
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    row_op(i, t, _nearest_div(D[i][t], D[t][t]))
            if any(D[i][t] != 0 for i in range(t + 1, m)):
                # a smaller remainder appeared; make it the pivot
                i0 = min((i for i in range(t, m) if D[i][t] != 0),
                         key=lambda i: (abs(D[i][t]), i))
                if i0 != t:
                    swap_rows(t, i0)
                continue
            # clear row t
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    col_op(j, t, _nearest_div(D[t][j], D[t][t]))
            if any(D[t][j] != 0 for j in range(t + 1, n)):
                j0 = min((j for j in range(t, n) if D[t][j] != 0),
                         key=lambda j: (abs(D[t][j]), j))
                if j0 != t:
                    swap_cols(t, j0)
                continue
            # divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t] != 0), None)
            if bad is None:
                break
            row_op(t, bad[0], -1)  # drag a non-divisible entry into row t
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, W


def diagonal_of(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True)
class LatticeNormalization:
    """Saturation of the span of the spectrum generators.

    ``saturation_basis`` (r primitive vectors) together with ``completion``
    is a Z-basis of Z^n; M is unimodular with M u_i = e_i, so M maps the
    saturated lattice onto Z^r x {0} (spectrum in the first r slots, killed
    angles in the last n - r).
    """

    generators: tuple
    saturation_basis: tuple
    completion: tuple
    M: tuple
    M_inv: tuple
    r: int

    @property
    def n(self):
        return len(self.M)


def saturate_and_complete(generators, n=None) -> LatticeNormalization:
    """Saturate the R-span of ``generators`` inside Z^n and complete to a
    Z^n-basis; empty input gives r = 0 and M = identity."""
    gens = [tuple(int(x) for x in g) for g in generators]
    if gens:
        n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise DimensionMismatchError("generators of unequal length")
    elif n is None:
        raise DimensionMismatchError("empty generator list needs explicit n")

    ident = _linalg.int_identity(n)
    if not gens or all(all(x == 0 for x in g) for g in gens):
        return LatticeNormalization(
            generators=tuple(gens), saturation_basis=(),
            completion=tuple(tuple(r) for r in ident),
            M=tuple(tuple(r) for r in ident), M_inv=tuple(tuple(r) for r in ident),
            r=0)

    V = [list(g) for g in gens]
    _, D, W = smith_normal_form(V)
    r = sum(1 for d in diagonal_of(D) if d != 0)
    W_inv = _linalg.unimodular_inverse(W)
    # rows 1..r of W^{-1} are a basis of the saturated lattice; HNF makes it
    # the canonical one
    Hb, _ = hermite_normal_form(W_inv[:r])
    basis = [row for row in Hb if any(row)]
    assert len(basis) == r

    U2, D2, W2 = smith_normal_form([list(row) for row in basis])
    assert all(d == 1 for d in diagonal_of(D2)[:r]), "basis is not saturated"
    W2_inv = _linalg.unimodular_inverse(W2)
    completion = W2_inv[r:]

    R = [list(row) for row in basis] + [list(row) for row in completion]
    assert abs(_linalg.int_det(R)) == 1
    M = _linalg.unimodular_inverse(_linalg.int_transpose(R))
    M_inv = _linalg.int_transpose(R)
    return LatticeNormalization(
        generators=tuple(gens),
        saturation_basis=tuple(tuple(row) for row in basis),
        completion=tuple(tuple(row) for row in completion),
        M=tuple(tuple(row) for row in M),
        M_inv=tuple(tuple(row) for row in M_inv),
        r=r)


@dataclass(frozen=True)
class NormalizationResult:
    """Outcome of the angle normalization of an accepted Hamiltonian."""

    chart: AlmostSymplecticChart
    hamiltonian: FourierFunction
    k: int
    r: int
    lattice: LatticeNormalization
    transform: AATransform


def normalize_hamiltonian(chart: AlmostSymplecticChart,
                          F: FourierFunction) -> NormalizationResult:
    """Unimodular change of action-angle coordinates confining the spectrum
    of F to the first r index slots; returns k = n - r.

    Rejects (with the classifier's witness) when F is not fully-Hamiltonian.
    """
    verdict = spectra.is_fully_hamiltonian(chart, F)
    if not verdict.accepted:
        raise ClassificationError(
            "Hamiltonian is not fully-Hamiltonian on this chart; "
            f"witness: {verdict.witness}", witness=verdict.witness)
    norm = saturate_and_complete(F.support(), n=chart.n)
    T = AATransform([list(row) for row in norm.M])
    new_chart, new_F = apply_transform(chart, F, T)
    k = chart.n - norm.r
    for nu in new_F.harmonics:
        assert all(v == 0 for v in nu[norm.r:]), "spectrum escaped the first r slots"
    if not chart.c_tensor().is_zero():
        assert k >= 3, "kernel bound violated (implementation bug)"
    return NormalizationResult(chart=new_chart, hamiltonian=new_F, k=k,
                               r=norm.r, lattice=norm, transform=T)
