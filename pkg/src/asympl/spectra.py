"""Spectra, full-Hamiltonianity classification, and Fourier genericity.

The classifier decides, exactly, whether the vector field of F is a symmetry
of the 2-form: F is accepted iff for every harmonic index nu in its support
the contracted tensor (sum_k C_ijk nu_k) annihilates both coefficient
polynomials, i.e. (sum_k C_ijk nu_k) * c_nu and (... ) * s_nu are the zero
polynomial for all i < j.  Q[a] is an integral domain, so this holds iff for
every support index the contraction itself vanishes identically; rejection
therefore always comes with a concrete (nu, i, j) and a rational point where
the product is nonzero.

The genericity checks are deliberately one-sided: FG1 follows from the data
model (a polynomial coefficient that is not identically zero has an open
dense non-vanishing locus), while FG2 ("countable complement") is certified
only by sound sufficient criteria -- a nonzero constant coefficient, an
interval-arithmetic sign certificate on a bounded box, or a one-dimensional
action space -- and is otherwise reported as inconclusive, never as a false
"holds".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg
from .chart import AlmostSymplecticChart, Box, CTensor, kernel_at
from .errors import DimensionMismatchError
from .exactalg import FourierFunction, RationalPolynomial, as_fraction


@dataclass(frozen=True)
class Spectrum:
    """Support of a Fourier function: canonical indices with nonzero pair."""

    n: int
    support: tuple
    pairs: dict

    def __contains__(self, nu):
        return tuple(nu) in self.pairs

    def is_empty(self):
        return not self.support


def spectrum(F: FourierFunction) -> Spectrum:
    """Global spectrum: nu != 0 with (c_nu, s_nu) != (0, 0) as polynomials."""
    support = F.support()
    return Spectrum(F.n, support, {nu: F.harmonics[nu] for nu in support})


def spectrum_at(F: FourierFunction, a) -> Spectrum:
    """Pointwise spectrum: nu != 0 with (c_nu(a), s_nu(a)) != (0, 0)."""
    a = [as_fraction(x) for x in a]
    support = []
    pairs = {}
    for nu in F.support():
        c, s = F.harmonics[nu]
        if c.evaluate(a) != 0 or s.evaluate(a) != 0:
            support.append(nu)
            pairs[nu] = (c, s)
    return Spectrum(F.n, tuple(support), pairs)


def primitive_direction(nu):
    """nu / gcd(nu) with canonical sign (first nonzero component positive)."""
    g = 0
    for v in nu:
        g = math.gcd(g, abs(int(v)))
    if g == 0:
        raise DimensionMismatchError("zero vector has no direction")
    prim = tuple(int(v) // g for v in nu)
    for v in prim:
        if v > 0:
            return prim
        if v < 0:
            return tuple(-x for x in prim)
    return prim


# -----------------------------------------------------------------------------
# deterministic nonzero-point search
# -----------------------------------------------------------------------------

def _candidate_values(box: Box, i: int, count: int):
    """``count`` distinct rationals inside side i of the box (fewer only when
    the side is a single point)."""
    lo, hi = box.sampling_interval(i)
    if lo == hi:
        return [lo]
    return [lo + (hi - lo) * Fraction(j, max(count - 1, 1)) for j in range(count)]


def find_nonzero_point(poly: RationalPolynomial, box: Box):
    """A rational point of the box where the nonzero polynomial ``poly`` does
    not vanish.  Tries cheap samples first, then sweeps a grid large enough
    to guarantee a hit for full-dimensional boxes."""
    if poly.is_zero():
        raise DimensionMismatchError("the zero polynomial is zero everywhere")
    n = poly.nvars
    rng = np.random.default_rng(20250810)
    mid = [
        _candidate_values(box, i, 3)[len(_candidate_values(box, i, 3)) // 2]
        for i in range(n)]
    if poly.evaluate(mid) != 0:
        return mid
    for _ in range(64):
        pt = box.sample_rational(rng)
        if poly.evaluate(pt) != 0:
            return pt
    lists = [_candidate_values(box, i, poly.degree_in(i) + 1) for i in range(n)]
    for pt in itertools.product(*lists):
        if poly.evaluate(list(pt)) != 0:
            return list(pt)
    # degenerate box: fall back to an ambient integer grid (outside the box)
    lists = [[Fraction(j) for j in range(poly.degree_in(i) + 1)] for i in range(n)]
    for pt in itertools.product(*lists):
        if poly.evaluate(list(pt)) != 0:
            return list(pt)
    raise AssertionError("unreachable: nonzero polynomial with no witness")


# -----------------------------------------------------------------------------
# full-Hamiltonianity
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class RejectionWitness:
    """Harmonic nu, tensor slot (i, j), coefficient kind, and a rational
    point where (sum_k C_ijk nu_k) * coefficient is nonzero."""

    nu: tuple
    i: int
    j: int
    kind: str
    point: tuple
    value: Fraction

    def __str__(self):
        pt = "(" + ", ".join(str(x) for x in self.point) + ")"
        return (f"harmonic nu={self.nu}, slot (i,j)=({self.i + 1},{self.j + 1}), "
                f"{self.kind}-coefficient, point a={pt}, product value {self.value}")


@dataclass(frozen=True)
class ClassificationVerdict:
    accepted: bool
    witness: RejectionWitness | None = None
    certificate: str = ""


def is_fully_hamiltonian(chart: AlmostSymplecticChart,
                         F: FourierFunction) -> ClassificationVerdict:
    """Exact symbolic decision of full-Hamiltonianity on the chart."""
    if F.n != chart.n:
        raise DimensionMismatchError("Hamiltonian dimension mismatch")
    C = chart.c_tensor()
    if C.is_zero():
        return ClassificationVerdict(True, certificate="C = 0: chart is symplectic")
    for nu in F.support():
        contracted = C.contract(nu)
        for (i, j), P in contracted.items():
            if P.is_zero():
                continue
            c, s = F.harmonics[nu]
            for kind, coeff in (("cos", c), ("sin", s)):
                if coeff.is_zero():
                    continue
                product = P * coeff
                point = find_nonzero_point(product, chart.domain)
                witness = RejectionWitness(
                    nu=nu, i=i, j=j, kind=kind, point=tuple(point),
                    value=product.evaluate(point))
                return ClassificationVerdict(False, witness=witness)
    if F.support():
        cert = "C(a) nu = 0 identically for every spectrum index nu"
    else:
        cert = "angle-independent Hamiltonian (basic function)"
    return ClassificationVerdict(True, certificate=cert)


def pointwise_check(chart: AlmostSymplecticChart, F: FourierFunction,
                    samples: int = 200, tol: float = 1e-10,
                    seed: int = 0, window: int = 2) -> bool:
    """Independent numeric test of the same condition: samples (a, alpha) and
    checks ||C(a) . dF/dalpha(a, alpha)|| <= tol at every sample."""
    from .dynamics import make_fourier_evaluator

    rng = np.random.default_rng(seed)
    n = chart.n
    C = chart.c_tensor()
    A = np.array([[float(x) for x in chart.domain.sample_rational(rng, window=window)]
                  for _ in range(samples)])
    AL = rng.uniform(0.0, 2.0 * math.pi, size=(samples, n))
    grads = np.column_stack([
        make_fourier_evaluator(F.angle_derivative(k)).batch(A, AL)
        for k in range(n)])
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            contraction = np.zeros(samples)
            for k in range(n):
                p = C.entry(i, j, k)
                if p.is_zero():
                    continue
                ev = make_fourier_evaluator(FourierFunction.from_polynomial(p))
                contraction += ev.batch(A, AL) * grads[:, k]
            worst = max(worst, float(np.max(np.abs(contraction))))
    return worst <= tol


# -----------------------------------------------------------------------------
# genericity
# -----------------------------------------------------------------------------

def _interval_pow(lo: Fraction, hi: Fraction, e: int):
    if e == 0:
        return Fraction(1), Fraction(1)
    if e % 2 == 1 or lo >= 0:
        return lo ** e, hi ** e
    if hi <= 0:
        return hi ** e, lo ** e
    return Fraction(0), max(lo ** e, hi ** e)


def interval_eval(poly: RationalPolynomial, box: Box):
    """Exact interval enclosure of the polynomial's range over a bounded box."""
    if not box.is_bounded():
        raise DimensionMismatchError("interval evaluation needs a bounded box")
    lo_total, hi_total = Fraction(0), Fraction(0)
    for exps, coeff in poly.terms.items():
        lo, hi = Fraction(1), Fraction(1)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            plo, phi = _interval_pow(*box.intervals[i], e)
            cands = (lo * plo, lo * phi, hi * plo, hi * phi)
            lo, hi = min(cands), max(cands)
        if coeff >= 0:
            lo_total += coeff * lo
            hi_total += coeff * hi
        else:
            lo_total += coeff * hi
            hi_total += coeff * lo
    return lo_total, hi_total


@dataclass(frozen=True)
class DirectionVerdict:
    direction: tuple
    status: str  # "holds" | "fails" | "inconclusive"
    certificate: str


@dataclass(frozen=True)
class GenericityVerdict:
    which: str  # "FG1" | "FG2"
    directions: tuple

    @property
    def status(self) -> str:
        if any(d.status == "fails" for d in self.directions):
            return "fails"
        if any(d.status == "inconclusive" for d in self.directions):
            return "inconclusive"
        return "holds"

    def holds(self) -> bool:
        return self.status == "holds"


def genericity_check(chart: AlmostSymplecticChart, F: FourierFunction,
                     which: str = "FG1") -> GenericityVerdict:
    """Per primitive direction of the support, decide whether the locus where
    some parallel harmonic survives is open-dense (FG1) or co-countable (FG2)."""
    if which not in ("FG1", "FG2"):
        raise DimensionMismatchError(f"unknown genericity property {which!r}")
    groups = {}
    for nu in F.support():
        groups.setdefault(primitive_direction(nu), []).append(nu)
    verdicts = []
    for d in sorted(groups):
        coeffs = []
        for nu in groups[d]:
            c, s = F.harmonics[nu]
            coeffs.append((nu, "cos", c))
            coeffs.append((nu, "sin", s))
        nonzero = [(nu, kind, p) for nu, kind, p in coeffs if not p.is_zero()]
        # support harmonics always carry a nonzero coefficient polynomial
        nu0, kind0, p0 = nonzero[0]
        if which == "FG1":
            verdicts.append(DirectionVerdict(
                d, "holds",
                f"{kind0}-coefficient of harmonic {nu0} is not the zero "
                "polynomial; its non-vanishing locus is open and dense"))
            continue
        status, cert = "inconclusive", (
            "no shipped certificate excludes an uncountable zero set of all "
            "parallel coefficients on the domain")
        for nu, kind, p in nonzero:
            if p.is_constant():
                status = "holds"
                cert = (f"{kind}-coefficient of harmonic {nu} is the nonzero "
                        f"constant {p.constant_value()}")
                break
        if status == "inconclusive" and chart.domain.is_bounded():
            for nu, kind, p in nonzero:
                lo, hi = interval_eval(p, chart.domain)
                if lo > 0 or hi < 0:
                    status = "holds"
                    cert = (f"{kind}-coefficient of harmonic {nu} has range "
                            f"inside [{lo}, {hi}], bounded away from zero")
                    break
        if status == "inconclusive" and chart.n == 1:
            status = "holds"
            cert = ("one-dimensional action space: the zero set of a nonzero "
                    "univariate polynomial is finite")
        verdicts.append(DirectionVerdict(d, status, cert))
    return GenericityVerdict(which, tuple(verdicts))


# -----------------------------------------------------------------------------
# rank bound
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class RankBoundReport:
    n: int
    samples: int
    symplectic: bool
    kernel_dim_histogram: dict
    zero_tensor_points: int
    violations: tuple

    def ok(self) -> bool:
        return not self.violations


def verify_rank_bound(chart: AlmostSymplecticChart, samples: int = 100,
                      seed: int = 0, window: int = 2) -> RankBoundReport:
    """Sample rational points; wherever C(a) != 0, check dim ker C(a) <= n-3
    (a theorem: failures indicate an implementation bug)."""
    C = chart.c_tensor()
    if C.is_zero():
        return RankBoundReport(chart.n, 0, True, {}, 0, ())
    rng = np.random.default_rng(seed)
    hist = {}
    zero_points = 0
    violations = []
    for _ in range(samples):
        a = chart.domain.sample_rational(rng, window=window)
        if C.is_zero_at(a):
            zero_points += 1
            continue
        dim = len(kernel_at(C, a))
        hist[dim] = hist.get(dim, 0) + 1
        if dim > chart.n - 3:
            violations.append(tuple(a))
    return RankBoundReport(chart.n, samples, False, hist, zero_points,
                           tuple(violations))
