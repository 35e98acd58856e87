"""Action-angle charts on almost-symplectic manifolds.

A chart covers (a subset of) R^n x T^n where the 2-form has the normal form

    sigma = sum_i da_i ^ dalpha_i  +  1/2 sum_ij A_ij(a) da_i ^ da_j

with A an exactly antisymmetric matrix of RationalPolynomials on an
axis-aligned rational box.  The module implements:

* the non-closedness tensor C_ijk = dA_ij/da_k + dA_ki/da_j + dA_jk/da_i,
* exact kernels of C(a) by rational elimination,
* Hamiltonian-like vector fields  X_a_i = -dF/dalpha_i,
                                  X_alpha_i = dF/da_i + sum_j A_ij dF/dalpha_j,
* the almost-Poisson bracket {F,G} = -L_{X_F} G (expanded exactly),
* divergence, vector field commutators,
* unimodular action-angle coordinate changes
      a~ = Z a + z,   alpha~ = Z^{-T} alpha + G(a),   nu~ = Z nu,
  chosen so that sum da~ ^ dalpha~ and nu.alpha are preserved exactly.

All values are immutable and all operations pure.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import _linalg
from .errors import (DimensionMismatchError, DomainError, IndexRangeError,
                     TransformError)
from .exactalg import (FourierFunction, RationalPolynomial, as_fraction,
                       canonical_index)


class Box:
    """Axis-aligned product of closed rational intervals; a side may be
    unbounded (None endpoint)."""

    __slots__ = ("intervals",)

    def __init__(self, intervals):
        clean = []
        for lo, hi in intervals:
            lo = None if lo is None else as_fraction(lo)
            hi = None if hi is None else as_fraction(hi)
            if lo is not None and hi is not None and lo > hi:
                raise DomainError(f"empty interval [{lo}, {hi}]")
            clean.append((lo, hi))
        self.intervals = tuple(clean)

    @classmethod
    def unbounded(cls, n):
        return cls([(None, None)] * n)

    @classmethod
    def cube(cls, n, radius):
        r = as_fraction(radius)
        return cls([(-r, r)] * n)

    def __len__(self):
        return len(self.intervals)

    def __eq__(self, other):
        return isinstance(other, Box) and self.intervals == other.intervals

    def __repr__(self):
        return "Box(" + ", ".join(
            f"[{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}]"
            for lo, hi in self.intervals) + ")"

    def contains(self, point) -> bool:
        point = [as_fraction(p) for p in point]
        if len(point) != len(self.intervals):
            raise DimensionMismatchError("point has wrong length")
        for p, (lo, hi) in zip(point, self.intervals):
            if lo is not None and p < lo:
                return False
            if hi is not None and p > hi:
                return False
        return True

    def contains_float(self, point) -> bool:
        for p, (lo, hi) in zip(point, self.intervals):
            if lo is not None and p < float(lo):
                return False
            if hi is not None and p > float(hi):
                return False
        return True

    def is_bounded(self) -> bool:
        return all(lo is not None and hi is not None for lo, hi in self.intervals)

    def project(self, indices) -> "Box":
        return Box([self.intervals[i] for i in indices])

    def sampling_interval(self, i, window=2):
        """A bounded rational interval inside side i, used for sampling when
        the side is unbounded."""
        lo, hi = self.intervals[i]
        w = as_fraction(window)
        if lo is None:
            lo = -w if hi is None else min(hi - 2 * w, -w)
        if hi is None:
            hi = max(lo + 2 * w, w) if lo is not None else w
        return lo, hi

    def sample_rational(self, rng, window=2, denominator=64):
        """A uniform-ish rational point of the box (pinned rng for
        reproducibility)."""
        point = []
        for i in range(len(self.intervals)):
            lo, hi = self.sampling_interval(i, window)
            t = Fraction(int(rng.integers(0, denominator + 1)), denominator)
            point.append(lo + t * (hi - lo))
        return point

    def hull_affine(self, matrix, shift=None) -> "Box":
        """Bounding box of the image under x -> matrix@x + shift (interval
        arithmetic; exact on each side, hull across sides)."""
        n = len(self.intervals)
        m = len(matrix)
        shift = [Fraction(0)] * m if shift is None else [as_fraction(s) for s in shift]
        out = []
        for i in range(m):
            lo, hi = shift[i], shift[i]
            for j in range(n):
                c = as_fraction(matrix[i][j])
                if c == 0:
                    continue
                slo, shi = self.intervals[j]
                if c > 0:
                    tlo, thi = slo, shi
                else:
                    tlo, thi = shi, slo
                lo = None if (lo is None or tlo is None) else lo + c * tlo
                hi = None if (hi is None or thi is None) else hi + c * thi
            out.append((lo, hi))
        return Box(out)


class AlmostSymplecticChart:
    """Dimension n, antisymmetric polynomial matrix A(a), rational box domain."""

    __slots__ = ("n", "A", "domain", "_ctensor")

    def __init__(self, n: int, A, domain=None):
        if n < 1:
            raise IndexRangeError("a chart needs n >= 1")
        if len(A) != n or any(len(row) != n for row in A):
            raise DimensionMismatchError("A must be an n x n matrix")
        for i in range(n):
            for j in range(n):
                p = A[i][j]
                if not isinstance(p, RationalPolynomial) or p.nvars != n:
                    raise DimensionMismatchError(
                        f"A[{i}][{j}] must be a RationalPolynomial in {n} variables")
                if not (A[i][j] + A[j][i]).is_zero():
                    raise DimensionMismatchError(
                        f"A is not antisymmetric at ({i}, {j})")
        self.n = n
        self.A = tuple(tuple(row) for row in A)
        self.domain = domain if domain is not None else Box.unbounded(n)
        if len(self.domain) != n:
            raise DimensionMismatchError("domain box has wrong dimension")
        self._ctensor = None

    @classmethod
    def canonical(cls, n: int, domain=None) -> "AlmostSymplecticChart":
        """The symplectic chart A = 0."""
        zero = RationalPolynomial.zero(n)
        return cls(n, [[zero] * n for _ in range(n)], domain)

    @classmethod
    def from_upper_triangle(cls, n: int, entries: dict, domain=None):
        """Build A from {(i, j): poly} with i < j (0-based); the lower triangle
        is the antisymmetric completion."""
        zero = RationalPolynomial.zero(n)
        A = [[zero for _ in range(n)] for _ in range(n)]
        for (i, j), p in entries.items():
            if not 0 <= i < j < n:
                raise IndexRangeError(f"upper-triangle index ({i}, {j}) invalid")
            if not isinstance(p, RationalPolynomial):
                p = RationalPolynomial.constant(n, p)
            A[i][j] = p
            A[j][i] = -p
        return cls(n, A, domain)

    def is_symplectic(self) -> bool:
        """True iff dsigma = 0 on the chart (C identically zero)."""
        return self.c_tensor().is_zero()

    def c_tensor(self) -> "CTensor":
        if self._ctensor is None:
            self._ctensor = c_tensor(self)
        return self._ctensor

    def __repr__(self):
        return f"AlmostSymplecticChart(n={self.n}, domain={self.domain!r})"


class CTensor:
    """Totally antisymmetric 3-tensor C encoding dsigma; stored on i<j<k."""

    __slots__ = ("n", "entries", "domain")

    def __init__(self, n: int, entries: dict, domain=None):
        self.n = n
        self.entries = {key: p for key, p in entries.items() if not p.is_zero()}
        self.domain = domain if domain is not None else Box.unbounded(n)

    def is_zero(self) -> bool:
        return not self.entries

    def entry(self, i, j, k) -> RationalPolynomial:
        """Any index triple, via total antisymmetry."""
        if len({i, j, k}) < 3:
            return RationalPolynomial.zero(self.n)
        order = sorted([i, j, k])
        p = self.entries.get(tuple(order))
        if p is None:
            return RationalPolynomial.zero(self.n)
        # sign of the permutation taking sorted order to (i, j, k)
        perm = [order.index(x) for x in (i, j, k)]
        sign = 1
        for x in range(3):
            for y in range(x + 1, 3):
                if perm[x] > perm[y]:
                    sign = -sign
        return p if sign == 1 else -p

    def contract(self, nu):
        """The matrix of polynomials (sum_k C_ijk nu_k) on pairs i<j."""
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                acc = RationalPolynomial.zero(self.n)
                for k in range(self.n):
                    if nu[k]:
                        acc = acc + self.entry(i, j, k) * int(nu[k])
                out[(i, j)] = acc
        return out

    def evaluate_rows(self, a):
        """Exact stacked n(n-1)/2 x n matrix [C_ijk(a)]_k at a rational point."""
        a = [as_fraction(x) for x in a]
        rows = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                rows.append([self.entry(i, j, k).evaluate(a) for k in range(self.n)])
        return rows

    def is_zero_at(self, a) -> bool:
        return all(all(x == 0 for x in row) for row in self.evaluate_rows(a))

    def __repr__(self):
        if not self.entries:
            return "CTensor(0)"
        body = ", ".join(f"C{i + 1}{j + 1}{k + 1}={p!r}"
                         for (i, j, k), p in sorted(self.entries.items()))
        return f"CTensor({body})"


class AAVectorField:
    """Vector field on the chart with exact Fourier-polynomial components."""

    __slots__ = ("n", "a_components", "alpha_components")

    def __init__(self, a_components, alpha_components):
        a_components = tuple(a_components)
        alpha_components = tuple(alpha_components)
        if not a_components or len(a_components) != len(alpha_components):
            raise DimensionMismatchError("component count mismatch")
        n = a_components[0].n
        for g in itertools.chain(a_components, alpha_components):
            if g.n != n:
                raise DimensionMismatchError("component dimension mismatch")
        if len(a_components) != n:
            raise DimensionMismatchError("need one component per degree of freedom")
        self.n = n
        self.a_components = a_components
        self.alpha_components = alpha_components

    def __eq__(self, other):
        return (isinstance(other, AAVectorField)
                and self.a_components == other.a_components
                and self.alpha_components == other.alpha_components)

    def __sub__(self, other):
        return AAVectorField(
            [x - y for x, y in zip(self.a_components, other.a_components)],
            [x - y for x, y in zip(self.alpha_components, other.alpha_components)])

    def __neg__(self):
        return AAVectorField([-x for x in self.a_components],
                             [-x for x in self.alpha_components])

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.a_components + self.alpha_components)

    def evaluate(self, a, alpha):
        """Float components ordered (da/dt, dalpha/dt)."""
        return ([g.evaluate(a, alpha) for g in self.a_components]
                + [g.evaluate(a, alpha) for g in self.alpha_components])


class AATransform:
    """Action-angle coordinate change a~ = Z a + z, alpha~ = Z^{-T} alpha + G(a)."""

    __slots__ = ("n", "Z", "z", "G", "Z_inv")

    def __init__(self, Z, z=None, G=None):
        n = len(Z)
        Z = tuple(tuple(int(x) for x in row) for row in Z)
        if any(len(row) != n for row in Z):
            raise DimensionMismatchError("Z must be square")
        if abs(_linalg.int_det([list(r) for r in Z])) != 1:
            raise TransformError("Z is not unimodular")
        self.n = n
        self.Z = Z
        self.Z_inv = tuple(tuple(row) for row in
                           _linalg.unimodular_inverse([list(r) for r in Z]))
        self.z = tuple(as_fraction(x) for x in (z if z is not None else [0] * n))
        if len(self.z) != n:
            raise DimensionMismatchError("z has wrong length")
        if G is None:
            G = [RationalPolynomial.zero(n)] * n
        G = tuple(G)
        if len(G) != n or any(g.nvars != n for g in G):
            raise DimensionMismatchError("G must be n polynomials in n variables")
        self.G = G

    @classmethod
    def identity(cls, n):
        return cls(_linalg.int_identity(n))

    def is_identity(self) -> bool:
        return (self.Z == tuple(tuple(r) for r in _linalg.int_identity(self.n))
                and all(x == 0 for x in self.z) and all(g.is_zero() for g in self.G))

    def index_map(self, nu):
        """Fourier index relabelling nu~ = Z nu (not canonicalized)."""
        return tuple(_linalg.int_matvec([list(r) for r in self.Z], list(nu)))

    def apply_point_exact(self, a, alpha_quarter_turns=None):
        """Exact action image (and, with quarter-turn angles, nothing fancy:
        angles are generally irrational after G; use apply_state for floats)."""
        a = [as_fraction(x) for x in a]
        return [sum(Fraction(self.Z[i][j]) * a[j] for j in range(self.n)) + self.z[i]
                for i in range(self.n)]

    def apply_state(self, a, alpha):
        """Float image of a phase-space state."""
        a = [float(x) for x in a]
        alpha = [float(x) for x in alpha]
        new_a = [sum(self.Z[i][j] * a[j] for j in range(self.n)) + float(self.z[i])
                 for i in range(self.n)]
        zinv_t = list(zip(*self.Z_inv))  # rows of Z^{-T}
        new_alpha = [sum(float(c) * al for c, al in zip(row, alpha))
                     + self.G[i].evaluate_float(a)
                     for i, row in enumerate(zinv_t)]
        return new_a, new_alpha


# -----------------------------------------------------------------------------
# operations
# -----------------------------------------------------------------------------

def c_tensor(chart: AlmostSymplecticChart) -> CTensor:
    """C_ijk = dA_ij/da_k + dA_ki/da_j + dA_jk/da_i on i<j<k."""
    n = chart.n
    A = chart.A
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                p = (A[i][j].derivative(k) + A[k][i].derivative(j)
                     + A[j][k].derivative(i))
                if not p.is_zero():
                    entries[(i, j, k)] = p
    return CTensor(n, entries, chart.domain)


def kernel_at(C: CTensor, a):
    """Exact rational basis of ker C(a) = {u : sum_k C_ijk(a) u_k = 0}."""
    a = [as_fraction(x) for x in a]
    if not C.domain.contains(a):
        raise DomainError(f"point {a} outside the chart domain")
    rows = C.evaluate_rows(a)
    return _linalg.nullspace(rows, ncols=C.n)


def hamiltonian_vector_field(chart: AlmostSymplecticChart,
                             F: FourierFunction) -> AAVectorField:
    """X_F with components (-dF/dalpha_i, dF/da_i + sum_j A_ij dF/dalpha_j)."""
    if F.n != chart.n:
        raise DimensionMismatchError("Hamiltonian dimension mismatch")
    n = chart.n
    dalpha = [F.angle_derivative(i) for i in range(n)]
    a_comp = [-dalpha[i] for i in range(n)]
    alpha_comp = []
    for i in range(n):
        comp = F.action_derivative(i)
        for j in range(n):
            if not chart.A[i][j].is_zero() and not dalpha[j].is_zero():
                comp = comp + FourierFunction.from_polynomial(chart.A[i][j]) * dalpha[j]
        alpha_comp.append(comp)
    return AAVectorField(a_comp, alpha_comp)


def almost_poisson_bracket(chart: AlmostSymplecticChart, F: FourierFunction,
                           G: FourierFunction) -> FourierFunction:
    """{F,G} = -sigma(X_F, X_G) = -L_{X_F} G, expanded exactly:

        sum_i (dF/dalpha_i dG/da_i - dF/da_i dG/dalpha_i)
        + sum_ij A_ij dF/dalpha_i dG/dalpha_j.
    """
    if F.n != chart.n or G.n != chart.n:
        raise DimensionMismatchError("bracket dimension mismatch")
    n = chart.n
    Fa = [F.action_derivative(i) for i in range(n)]
    Fal = [F.angle_derivative(i) for i in range(n)]
    Ga = [G.action_derivative(i) for i in range(n)]
    Gal = [G.angle_derivative(i) for i in range(n)]
    out = FourierFunction.zero(n)
    for i in range(n):
        out = out + Fal[i] * Ga[i] - Fa[i] * Gal[i]
    for i in range(n):
        if Fal[i].is_zero():
            continue
        for j in range(n):
            if chart.A[i][j].is_zero() or Gal[j].is_zero():
                continue
            out = out + FourierFunction.from_polynomial(chart.A[i][j]) * Fal[i] * Gal[j]
    return out


def divergence(chart: AlmostSymplecticChart, X: AAVectorField) -> FourierFunction:
    """sum_i dX_a_i/da_i + dX_alpha_i/dalpha_i; zero for every X_F."""
    if X.n != chart.n:
        raise DimensionMismatchError("field dimension mismatch")
    out = FourierFunction.zero(chart.n)
    for i in range(chart.n):
        out = out + X.a_components[i].action_derivative(i)
        out = out + X.alpha_components[i].angle_derivative(i)
    return out


def field_commutator(X: AAVectorField, Y: AAVectorField) -> AAVectorField:
    """Lie bracket [X, Y] with exact Fourier-polynomial components."""
    if X.n != Y.n:
        raise DimensionMismatchError("field dimension mismatch")
    n = X.n

    def directional(Z, comp):
        out = FourierFunction.zero(n)
        for l in range(n):
            da = comp.action_derivative(l)
            if not da.is_zero():
                out = out + Z.a_components[l] * da
            dal = comp.angle_derivative(l)
            if not dal.is_zero():
                out = out + Z.alpha_components[l] * dal
        return out

    a_comp = [directional(X, Y.a_components[m]) - directional(Y, X.a_components[m])
              for m in range(n)]
    al_comp = [directional(X, Y.alpha_components[m]) - directional(Y, X.alpha_components[m])
               for m in range(n)]
    return AAVectorField(a_comp, al_comp)


def apply_transform(chart: AlmostSymplecticChart, F: FourierFunction,
                    T: AATransform):
    """Push (chart, F) through the unimodular change of action-angle
    coordinates T.  Returns (chart', F') with

        A'(a~) = Z^{-T} A(a(a~)) Z^{-1} - (W - W^T),  W = DG(a(a~)) Z^{-1},
        F'(a~, alpha~) = F(a, alpha)  pointwise,

    harmonics relabelled nu~ = Z nu.  Raises TransformError when an angle
    shift G makes a harmonic unrepresentable ((Z nu).G not identically 0).
    """
    n = chart.n
    if T.n != n or F.n != n:
        raise DimensionMismatchError("transform dimension mismatch")
    Zi = [list(row) for row in T.Z_inv]  # a = Zi (a~ - z)
    shift = [-sum(Fraction(Zi[i][j]) * T.z[j] for j in range(n)) for i in range(n)]

    def compose(p):
        return p.compose_affine(Zi, shift)

    # sandwich Z^{-T} A Z^{-1} after substituting a = a(a~)
    Acomp = [[compose(chart.A[i][j]) for j in range(n)] for i in range(n)]
    zero = RationalPolynomial.zero(n)
    newA = [[zero for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for l in range(k + 1, n):
            acc = RationalPolynomial.zero(n)
            for i in range(n):
                if Zi[i][k] == 0:
                    continue
                for j in range(n):
                    if Zi[j][l] == 0 or Acomp[i][j].is_zero():
                        continue
                    acc = acc + Acomp[i][j] * (Fraction(Zi[i][k]) * Fraction(Zi[j][l]))
            newA[k][l] = acc
            newA[l][k] = -acc

    has_shift = any(not g.is_zero() for g in T.G)
    if has_shift:
        # curl correction from dalpha = Z^T dalpha~ - Z^T DG da
        W = [[RationalPolynomial.zero(n) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            if T.G[i].is_zero():
                continue
            dG = [compose(T.G[i].derivative(m)) for m in range(n)]
            for l in range(n):
                acc = RationalPolynomial.zero(n)
                for m in range(n):
                    if Zi[m][l] != 0 and not dG[m].is_zero():
                        acc = acc + dG[m] * Zi[m][l]
                W[i][l] = acc
        for k in range(n):
            for l in range(k + 1, n):
                corr = W[k][l] - W[l][k]
                newA[k][l] = newA[k][l] - corr
                newA[l][k] = -newA[k][l]

    new_domain = chart.domain.hull_affine([list(r) for r in T.Z], list(T.z))
    new_chart = AlmostSymplecticChart(n, newA, new_domain)

    new_harmonics = {}
    for nu, (c, s) in F.harmonics.items():
        nu_t = T.index_map(nu)
        if has_shift:
            phase = RationalPolynomial.zero(n)
            for i, k in enumerate(nu_t):
                if k and not T.G[i].is_zero():
                    phase = phase + T.G[i] * k
            if not phase.is_zero():
                raise TransformError(
                    f"angle shift G is not representable for harmonic {nu}: "
                    "(Z nu).G is not identically zero")
        key, sign = canonical_index(nu_t)
        cc, ss = compose(c), compose(s)
        if sign < 0:
            ss = -ss
        if key in new_harmonics:
            c0, s0 = new_harmonics[key]
            new_harmonics[key] = (c0 + cc, s0 + ss)
        else:
            new_harmonics[key] = (cc, ss)
    new_F = FourierFunction(n, new_harmonics)
    return new_chart, new_F
