"""Exact arithmetic for action polynomials and finite real Fourier series.

Two immutable value types live here:

``RationalPolynomial``
    A sparse multivariate polynomial in the action variables a_1..a_n with
    rational coefficients, stored as a dict mapping exponent tuples to
    ``Fraction``.  Zero coefficients are never stored, so two polynomials are
    equal iff their term dicts are equal.

``FourierFunction``
    A finite real Fourier series on R^n x T^n,

        f(a, alpha) = sum_nu  c_nu(a) cos(nu . alpha) + s_nu(a) sin(nu . alpha),

    keyed by canonical integer indices nu (first nonzero component positive;
    the +-nu redundancy of the real representation is fixed at construction).
    The nu = 0 entry stores only the cosine polynomial.  Coefficients are
    RationalPolynomials, so all arithmetic -- including products, which are
    harmonic convolutions via the product-to-sum identities -- is exact and
    identity testing is decidable.

Everything is pure and hashable; values can be shared freely between
concurrent workers.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DimensionMismatchError, IndexRangeError

Exponents = tuple  # tuple[int, ...]


def as_fraction(x) -> Fraction:
    """Coerce ints, strings like '3' / '-1/2', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class RationalPolynomial:
    """Sparse exact polynomial in ``nvars`` action variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise IndexRangeError("nvars must be >= 0")
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionMismatchError(
                    f"exponent tuple {exps} does not have length {nvars}")
            if any(e < 0 for e in exps):
                raise IndexRangeError(f"negative exponent in {exps}")
            coeff = as_fraction(coeff)
            if coeff != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
                if clean[exps] == 0:
                    del clean[exps]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "RationalPolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "RationalPolynomial":
        return cls(nvars, {(0,) * nvars: as_fraction(value)})

    @classmethod
    def one(cls, nvars: int) -> "RationalPolynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "RationalPolynomial":
        """The polynomial a_{index+1} (0-based index)."""
        if not 0 <= index < nvars:
            raise IndexRangeError(f"variable index {index} out of range for nvars={nvars}")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exps, coeff=1) -> "RationalPolynomial":
        return cls(nvars, {tuple(exps): as_fraction(coeff)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def depends_on(self, var: int) -> bool:
        return any(e[var] > 0 for e in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(self.nvars, other)
        self._check_same(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, Fraction(0)) + coeff
            if acc == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = acc
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.nvars, out.terms, out._hash = self.nvars, terms, None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            if q == 0:
                return RationalPolynomial.zero(self.nvars)
            out = RationalPolynomial.__new__(RationalPolynomial)
            out.nvars = self.nvars
            out.terms = {e: c * q for e, c in self.terms.items()}
            out._hash = None
            return out
        self._check_same(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                acc = terms.get(e, Fraction(0)) + c1 * c2
                if acc == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = acc
        out = RationalPolynomial.__new__(RationalPolynomial)
        out.nvars, out.terms, out._hash = self.nvars, terms, None
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise IndexRangeError("negative power of a polynomial")
        result = RationalPolynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus -----------------------------------------------------------

    def derivative(self, var: int) -> "RationalPolynomial":
        """Exact partial derivative with respect to a_{var+1}."""
        if not 0 <= var < self.nvars:
            raise IndexRangeError(f"variable index {var} out of range")
        terms = {}
        for exps, coeff in self.terms.items():
            e = exps[var]
            if e == 0:
                continue
            new = list(exps)
            new[var] = e - 1
            terms[tuple(new)] = coeff * e
        return RationalPolynomial(self.nvars, terms)

    def antiderivative(self, var: int) -> "RationalPolynomial":
        if not 0 <= var < self.nvars:
            raise IndexRangeError(f"variable index {var} out of range")
        terms = {}
        for exps, coeff in self.terms.items():
            new = list(exps)
            new[var] = exps[var] + 1
            terms[tuple(new)] = coeff / (exps[var] + 1)
        return RationalPolynomial(self.nvars, terms)

    def definite_integral(self, var: int, lower, upper_var: int) -> "RationalPolynomial":
        """Integrate over ``var`` from the rational ``lower`` to the symbolic
        upper limit a_{upper_var+1}; the dummy variable disappears."""
        anti = self.antiderivative(var)
        upper = anti.subs_var_poly(var, RationalPolynomial.variable(self.nvars, upper_var))
        lowval = anti.subs_var_poly(
            var, RationalPolynomial.constant(self.nvars, as_fraction(lower)))
        return upper - lowval

    # -- substitution / composition -----------------------------------------

    def subs_var_poly(self, var: int, value: "RationalPolynomial") -> "RationalPolynomial":
        """Substitute the polynomial ``value`` (same nvars) for variable ``var``."""
        self._check_same(value)
        powers = {0: RationalPolynomial.one(self.nvars)}

        def power(k):
            if k not in powers:
                powers[k] = power(k - 1) * value
            return powers[k]

        out = RationalPolynomial.zero(self.nvars)
        for exps, coeff in self.terms.items():
            rest = list(exps)
            k = rest[var]
            rest[var] = 0
            out = out + RationalPolynomial(self.nvars, {tuple(rest): coeff}) * power(k)
        return out

    def subs_partial(self, assignments: dict) -> "RationalPolynomial":
        """Evaluate some variables at rationals; the result still lives in the
        same variable space (the eliminated variables simply no longer occur)."""
        vals = {int(v): as_fraction(x) for v, x in assignments.items()}
        for v in vals:
            if not 0 <= v < self.nvars:
                raise IndexRangeError(f"variable index {v} out of range")
        terms = {}
        for exps, coeff in self.terms.items():
            factor = Fraction(1)
            new = list(exps)
            for v, x in vals.items():
                factor *= x ** exps[v]
                new[v] = 0
            if factor == 0:
                continue
            e = tuple(new)
            acc = terms.get(e, Fraction(0)) + coeff * factor
            if acc == 0:
                terms.pop(e, None)
            else:
                terms[e] = acc
        return RationalPolynomial(self.nvars, terms)

    def restrict(self, keep) -> "RationalPolynomial":
        """Re-express in the variable subset ``keep`` (a sequence of old
        indices). Raises if the polynomial depends on a dropped variable."""
        keep = list(keep)
        dropped = set(range(self.nvars)) - set(keep)
        for v in dropped:
            if self.depends_on(v):
                raise IndexRangeError(
                    f"polynomial depends on dropped variable index {v}")
        terms = {}
        for exps, coeff in self.terms.items():
            terms[tuple(exps[v] for v in keep)] = coeff
        return RationalPolynomial(len(keep), terms)

    def compose_affine(self, matrix, shift=None) -> "RationalPolynomial":
        """Substitute a_i = sum_j matrix[i][j] x_j + shift[i].

        ``matrix`` is nvars x m with rational entries; the result is a
        polynomial in the m new variables.
        """
        m = len(matrix[0]) if matrix else 0
        if len(matrix) != self.nvars:
            raise DimensionMismatchError("affine matrix has wrong number of rows")
        shift = [Fraction(0)] * self.nvars if shift is None else [as_fraction(s) for s in shift]
        lins = []
        for i in range(self.nvars):
            t = {}
            for j in range(m):
                c = as_fraction(matrix[i][j])
                if c != 0:
                    e = [0] * m
                    e[j] = 1
                    t[tuple(e)] = c
            if shift[i] != 0:
                t[(0,) * m] = shift[i]
            lins.append(RationalPolynomial(m, t))
        powers = [{0: RationalPolynomial.one(m)} for _ in range(self.nvars)]

        def power(i, k):
            if k not in powers[i]:
                powers[i][k] = power(i, k - 1) * lins[i]
            return powers[i][k]

        out = RationalPolynomial.zero(m)
        for exps, coeff in self.terms.items():
            term = RationalPolynomial.constant(m, coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, values) -> Fraction:
        """Exact evaluation at a rational point."""
        values = [as_fraction(v) for v in values]
        if len(values) != self.nvars:
            raise DimensionMismatchError("point has wrong length")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            prod = coeff
            for v, e in zip(values, exps):
                if e:
                    prod *= v ** e
            total += prod
        return total

    def evaluate_float(self, values) -> float:
        total = 0.0
        for exps, coeff in self.terms.items():
            prod = float(coeff)
            for v, e in zip(values, exps):
                if e:
                    prod *= float(v) ** e
            total += prod
        return total

    # -- display -------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            coeff = self.terms[exps]
            factors = [f"a{i + 1}" if e == 1 else f"a{i + 1}^{e}"
                       for i, e in enumerate(exps) if e]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(coeff) + "*" + "*".join(factors))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def canonical_index(nu):
    """Return (canonical nu, sign): flips nu so its first nonzero entry is
    positive; sign = -1 when a flip happened (sin parts change sign)."""
    nu = tuple(int(v) for v in nu)
    for v in nu:
        if v > 0:
            return nu, 1
        if v < 0:
            return tuple(-x for x in nu), -1
    return nu, 1


# cos/sin of m * pi/2 for m mod 4
_COS_QUARTER = (Fraction(1), Fraction(0), Fraction(-1), Fraction(0))
_SIN_QUARTER = (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))


class FourierFunction:
    """Finite real Fourier series with polynomial coefficients."""

    __slots__ = ("n", "harmonics", "_hash")

    def __init__(self, n: int, harmonics=None):
        if n < 0:
            raise IndexRangeError("n must be >= 0")
        acc = {}

        def accumulate(nu, cpoly, spoly):
            nu, sign = canonical_index(nu)
            if len(nu) != n:
                raise DimensionMismatchError(f"harmonic index {nu} has wrong length")
            if sign < 0:
                spoly = -spoly
            if all(v == 0 for v in nu):
                spoly = RationalPolynomial.zero(n)  # sin(0) = 0
            if nu in acc:
                c0, s0 = acc[nu]
                acc[nu] = (c0 + cpoly, s0 + spoly)
            else:
                acc[nu] = (cpoly, spoly)

        for nu, pair in (harmonics or {}).items():
            cpoly, spoly = pair
            if not isinstance(cpoly, RationalPolynomial):
                cpoly = RationalPolynomial.constant(n, cpoly)
            if not isinstance(spoly, RationalPolynomial):
                spoly = RationalPolynomial.constant(n, spoly)
            if cpoly.nvars != n or spoly.nvars != n:
                raise DimensionMismatchError("coefficient polynomial has wrong nvars")
            accumulate(nu, cpoly, spoly)

        self.n = n
        self.harmonics = {nu: pair for nu, pair in acc.items()
                          if not (pair[0].is_zero() and pair[1].is_zero())}
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "FourierFunction":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value) -> "FourierFunction":
        return cls(n, {(0,) * n: (RationalPolynomial.constant(n, value),
                                  RationalPolynomial.zero(n))})

    @classmethod
    def from_polynomial(cls, p: RationalPolynomial) -> "FourierFunction":
        """An angle-independent (basic) function."""
        return cls(p.nvars, {(0,) * p.nvars: (p, RationalPolynomial.zero(p.nvars))})

    @classmethod
    def action_variable(cls, n: int, index: int) -> "FourierFunction":
        return cls.from_polynomial(RationalPolynomial.variable(n, index))

    @classmethod
    def cosine(cls, n: int, nu, coeff=1) -> "FourierFunction":
        c = coeff if isinstance(coeff, RationalPolynomial) else RationalPolynomial.constant(n, coeff)
        return cls(n, {tuple(nu): (c, RationalPolynomial.zero(n))})

    @classmethod
    def sine(cls, n: int, nu, coeff=1) -> "FourierFunction":
        s = coeff if isinstance(coeff, RationalPolynomial) else RationalPolynomial.constant(n, coeff)
        return cls(n, {tuple(nu): (RationalPolynomial.zero(n), s)})

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.harmonics

    def support(self):
        """Canonical nonzero harmonic indices, sorted (the spectrum's support)."""
        zero = (0,) * self.n
        return tuple(sorted(nu for nu in self.harmonics if nu != zero))

    def is_angle_independent(self) -> bool:
        return not self.support()

    def zero_harmonic(self) -> RationalPolynomial:
        pair = self.harmonics.get((0,) * self.n)
        return pair[0] if pair else RationalPolynomial.zero(self.n)

    def pair(self, nu):
        """(cos, sin) coefficient pair of a canonical index (zero pair if absent)."""
        z = RationalPolynomial.zero(self.n)
        return self.harmonics.get(tuple(nu), (z, z))

    def __eq__(self, other):
        if not isinstance(other, FourierFunction):
            return NotImplemented
        return self.n == other.n and self.harmonics == other.harmonics

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.harmonics.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def _check_same(self, other):
        if self.n != other.n:
            raise DimensionMismatchError(
                f"Fourier functions with n={self.n} and n={other.n}")

    def _coerce(self, other):
        if isinstance(other, FourierFunction):
            return other
        if isinstance(other, RationalPolynomial):
            return FourierFunction.from_polynomial(other)
        if isinstance(other, (int, Fraction)):
            return FourierFunction.constant(self.n, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_same(other)
        acc = dict(self.harmonics)
        zero = RationalPolynomial.zero(self.n)
        for nu, (c, s) in other.harmonics.items():
            c0, s0 = acc.get(nu, (zero, zero))
            acc[nu] = (c0 + c, s0 + s)
        out = {nu: p for nu, p in acc.items() if not (p[0].is_zero() and p[1].is_zero())}
        f = FourierFunction.__new__(FourierFunction)
        f.n, f.harmonics, f._hash = self.n, out, None
        return f

    __radd__ = __add__

    def __neg__(self):
        f = FourierFunction.__new__(FourierFunction)
        f.n = self.n
        f.harmonics = {nu: (-c, -s) for nu, (c, s) in self.harmonics.items()}
        f._hash = None
        return f

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_same(other)
        half = Fraction(1, 2)
        acc = {}

        def add(nu, cpoly, spoly):
            nu, sign = canonical_index(nu)
            if sign < 0:
                spoly = -spoly
            if all(v == 0 for v in nu):
                spoly = RationalPolynomial.zero(self.n)
            if nu in acc:
                c0, s0 = acc[nu]
                acc[nu] = (c0 + cpoly, s0 + spoly)
            else:
                acc[nu] = (cpoly, spoly)

        for mu, (c1, s1) in self.harmonics.items():
            for nu, (c2, s2) in other.harmonics.items():
                plus = tuple(x + y for x, y in zip(mu, nu))
                minus = tuple(x - y for x, y in zip(mu, nu))
                # product-to-sum identities on (c1 cos + s1 sin)(c2 cos + s2 sin)
                add(plus, (c1 * c2 - s1 * s2) * half, (c1 * s2 + s1 * c2) * half)
                add(minus, (c1 * c2 + s1 * s2) * half, (s1 * c2 - c1 * s2) * half)

        out = {nu: p for nu, p in acc.items() if not (p[0].is_zero() and p[1].is_zero())}
        f = FourierFunction.__new__(FourierFunction)
        f.n, f.harmonics, f._hash = self.n, out, None
        return f

    __rmul__ = __mul__

    # -- calculus ------------------------------------------------------------

    def action_derivative(self, var: int) -> "FourierFunction":
        """d/da_{var+1}: differentiates the coefficient polynomials."""
        if not 0 <= var < self.n:
            raise IndexRangeError(f"action index {var} out of range")
        return FourierFunction(self.n, {
            nu: (c.derivative(var), s.derivative(var))
            for nu, (c, s) in self.harmonics.items()})

    def angle_derivative(self, var: int) -> "FourierFunction":
        """d/dalpha_{var+1}: c cos + s sin -> (nu_i s) cos - (nu_i c) sin."""
        if not 0 <= var < self.n:
            raise IndexRangeError(f"angle index {var} out of range")
        out = {}
        for nu, (c, s) in self.harmonics.items():
            k = nu[var]
            if k == 0:
                continue
            out[nu] = (s * k, c * (-k))
        return FourierFunction(self.n, out)

    # -- substitution --------------------------------------------------------

    def subs_actions(self, assignments: dict) -> "FourierFunction":
        """Evaluate some action variables at rationals (same n)."""
        return FourierFunction(self.n, {
            nu: (c.subs_partial(assignments), s.subs_partial(assignments))
            for nu, (c, s) in self.harmonics.items()})

    def reduce_to(self, keep, assignments: dict) -> "FourierFunction":
        """Project onto the action/angle subset ``keep`` after substituting
        the remaining actions.  Every harmonic must vanish in the dropped
        angle slots."""
        keep = list(keep)
        dropped = set(range(self.n)) - set(keep)
        out = {}
        for nu, (c, s) in self.harmonics.items():
            for v in dropped:
                if nu[v] != 0:
                    raise IndexRangeError(
                        f"harmonic {nu} depends on dropped angle index {v}")
            mu = tuple(nu[v] for v in keep)
            out[mu] = (c.subs_partial(assignments).restrict(keep),
                       s.subs_partial(assignments).restrict(keep))
        return FourierFunction(len(keep), out)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, a, alpha) -> float:
        """Double-precision value at (a, alpha)."""
        a = [float(v) for v in a]
        alpha = [float(v) for v in alpha]
        if len(a) != self.n or len(alpha) != self.n:
            raise DimensionMismatchError("point has wrong length")
        total = 0.0
        for nu, (c, s) in self.harmonics.items():
            phase = sum(k * al for k, al in zip(nu, alpha))
            if not c.is_zero():
                total += c.evaluate_float(a) * math.cos(phase)
            if not s.is_zero():
                total += s.evaluate_float(a) * math.sin(phase)
        return total

    def evaluate_exact(self, a, quarter_turns) -> Fraction:
        """Exact value when every angle is an integer multiple of pi/2;
        ``quarter_turns[i]`` is alpha_i / (pi/2)."""
        a = [as_fraction(v) for v in a]
        q = [int(v) for v in quarter_turns]
        if len(a) != self.n or len(q) != self.n:
            raise DimensionMismatchError("point has wrong length")
        total = Fraction(0)
        for nu, (c, s) in self.harmonics.items():
            m = sum(k * t for k, t in zip(nu, q)) % 4
            if not c.is_zero():
                total += c.evaluate(a) * _COS_QUARTER[m]
            if not s.is_zero():
                total += s.evaluate(a) * _SIN_QUARTER[m]
        return total

    # -- display -------------------------------------------------------------

    def __repr__(self):
        if not self.harmonics:
            return "0"
        zero = (0,) * self.n
        parts = []

        def angle(nu):
            bits = []
            for i, k in enumerate(nu):
                if k == 0:
                    continue
                name = f"alpha{i + 1}" if abs(k) == 1 else f"{abs(k)}*alpha{i + 1}"
                bits.append(("-" if k < 0 and bits else ("-" if k < 0 else "")) + name
                            if k < 0 else (("+" if bits else "") + name))
            return "".join(bits)

        for nu in sorted(self.harmonics):
            c, s = self.harmonics[nu]
            if nu == zero:
                parts.append(f"({c!r})")
                continue
            if not c.is_zero():
                parts.append(f"({c!r})*cos({angle(nu)})")
            if not s.is_zero():
                parts.append(f"({s!r})*sin({angle(nu)})")
        return " + ".join(parts)
