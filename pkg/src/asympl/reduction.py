"""Torus reduction, symplectization, reconstruction, and the full pipeline.

After normalization the coordinates split as (I, J, phi, psi) with I the
first r actions and J the last k = n - r; a normalized Hamiltonian does not
depend on the psi angles.  Translation of psi is then a torus action with
momentum J, and fixing a level J = c yields the reduced system

    sigma_c = dI ^ dphi + 1/2 A_II(I, c) dI ^ dI,      f_c(I, phi) = F(I, c, phi),

whose equations of motion are again of chart form.  The psi angles are
recovered along a reduced trajectory from the reconstruction rates

    dpsi_m/dt = dF/dJ_m (I, c, phi) + sum_l A_{J_m, I_l}(I, c) dF/dphi_l.

When r = 1 the whole system straightens instead of reducing: the triangular
shift chi = psi + G(I, J) with G_m(I, J) the integral of A_{J_m, I}(x, J)
from I0 to I conjugates the field, exactly, to the canonical Hamiltonian
field of F in (I, J, phi, chi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice, spectra
from .chart import (AATransform, AlmostSymplecticChart, apply_transform,
                    hamiltonian_vector_field)
from .errors import (DimensionMismatchError, DomainError, RegimeError)
from .exactalg import FourierFunction, RationalPolynomial, as_fraction


@dataclass(frozen=True)
class NormalizedSplit:
    """Coordinate split (I, J, phi, psi): first r actions/angles are kept,
    the last k are reduced out."""

    n: int
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise DimensionMismatchError(f"split k={self.k} invalid for n={self.n}")

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def I_indices(self):
        return tuple(range(self.r))

    @property
    def J_indices(self):
        return tuple(range(self.r, self.n))


def _require_psi_independent(F: FourierFunction, split: NormalizedSplit):
    for nu in F.harmonics:
        if any(nu[v] != 0 for v in split.J_indices):
            raise RegimeError(
                f"Hamiltonian depends on the reduced angles (harmonic {nu}); "
                "run the normalization first")


@dataclass(frozen=True)
class ReducedSystem:
    """A symplectic-or-smaller system obtained at momentum level c."""

    r: int
    c: tuple
    chart: AlmostSymplecticChart     # r degrees of freedom, A_II at J = c
    hamiltonian: FourierFunction     # f_c(I, phi)
    A_JI: tuple                      # k x r polynomials in I, for reconstruction
    split: NormalizedSplit

    def vector_field(self):
        return hamiltonian_vector_field(self.chart, self.hamiltonian)

    def is_symplectic(self) -> bool:
        return self.chart.c_tensor().is_zero()


def reduce(chart: AlmostSymplecticChart, F: FourierFunction,
           split: NormalizedSplit, c) -> ReducedSystem:
    """Fix the last k actions at the rational level c and quotient the psi
    translations away."""
    n, r, k = split.n, split.r, split.k
    if chart.n != n or F.n != n:
        raise DimensionMismatchError("split does not match the chart")
    c = tuple(as_fraction(x) for x in c)
    if len(c) != k:
        raise DimensionMismatchError(f"momentum level must have length k={k}")
    _require_psi_independent(F, split)
    if not chart.domain.project(split.J_indices).contains(c):
        raise DomainError(f"momentum level {c} outside the chart domain")

    assignments = {r + m: c[m] for m in range(k)}
    keep = list(range(r))

    def cut(p: RationalPolynomial) -> RationalPolynomial:
        return p.subs_partial(assignments).restrict(keep)

    A_II = [[cut(chart.A[i][j]) for j in range(r)] for i in range(r)]
    f_c = F.reduce_to(keep, assignments)
    A_JI = tuple(tuple(cut(chart.A[r + m][l]) for l in range(r)) for m in range(k))
    reduced_chart = AlmostSymplecticChart(r, A_II, chart.domain.project(keep))
    return ReducedSystem(r=r, c=c, chart=reduced_chart, hamiltonian=f_c,
                         A_JI=A_JI, split=split)


def reconstruction_rates(chart: AlmostSymplecticChart, F: FourierFunction,
                         split: NormalizedSplit, c):
    """The k Fourier functions of (I, phi) giving dpsi_m/dt along the
    reduced flow at level c."""
    n, r, k = split.n, split.r, split.k
    _require_psi_independent(F, split)
    c = tuple(as_fraction(x) for x in c)
    assignments = {r + m: c[m] for m in range(k)}
    keep = list(range(r))
    rates = []
    for m in range(k):
        rate = F.action_derivative(r + m).reduce_to(keep, assignments)
        for l in range(r):
            block = chart.A[r + m][l].subs_partial(assignments).restrict(keep)
            if block.is_zero():
                continue
            dphi = F.angle_derivative(l).reduce_to(keep, assignments)
            if dphi.is_zero():
                continue
            rate = rate + FourierFunction.from_polynomial(block) * dphi
        rates.append(rate)
    return tuple(rates)


def reconstruct(chart: AlmostSymplecticChart, F: FourierFunction,
                split: NormalizedSplit, c, reduced_traj, psi0=None,
                wrap: bool = True):
    """psi(t) on the reduced trajectory's time grid, by quadrature of the
    reconstruction rates along it (the quadrature is the same embedded
    integrator that produced the trajectory, driven by the reduced state)."""
    import numpy as np

    from .dynamics import integrate_rhs, make_fourier_evaluator, make_rhs

    k, r = split.k, split.r
    if reduced_traj.n != r:
        raise DimensionMismatchError("trajectory does not match the split")
    rates = reconstruction_rates(chart, F, split, c)
    reduced = reduce(chart, F, split, c)
    base_rhs = make_rhs(reduced.vector_field())
    rate_evals = [make_fourier_evaluator(g) for g in rates]

    def rhs(t, y):
        core = base_rhs(t, y[:2 * r])
        a, al = y[:r], y[r:2 * r]
        return np.concatenate([core, [ev(a, al) for ev in rate_evals]])

    psi0 = np.zeros(k) if psi0 is None else np.asarray(psi0, dtype=float)
    if psi0.shape != (k,):
        raise DimensionMismatchError(f"psi0 must have length k={k}")
    y0 = np.concatenate([reduced_traj.states[0], psi0])
    times, ys = integrate_rhs(rhs, y0, reduced_traj.times, reduced_traj.config)
    if times.shape != reduced_traj.times.shape or not np.allclose(
            times, reduced_traj.times, rtol=0, atol=1e-12):
        raise DimensionMismatchError("time grid mismatch with the reduced trajectory")
    psi = ys[:, 2 * r:]
    return np.mod(psi, 2.0 * np.pi) if wrap else psi


@dataclass(frozen=True)
class SymplectizedSystem:
    """The r = 1 straightening chi = psi + G(I, J)."""

    split: NormalizedSplit
    I0: Fraction
    G: tuple                          # k polynomials G_m(I, J) in the n actions
    chart: AlmostSymplecticChart      # transformed chart (canonical couplings)
    hamiltonian: FourierFunction
    transform: AATransform
    field: object                     # exact canonical Hamiltonian field


def symplectize(chart: AlmostSymplecticChart, F: FourierFunction,
                split: NormalizedSplit, I0=None) -> SymplectizedSystem:
    """Straighten an r = 1 normalized system into canonical Hamiltonian form.

    The transformed vector field equals the canonical field of F in
    (I, J, phi, chi) as an exact identity, which is asserted.
    """
    n, r, k = split.n, split.r, split.k
    if chart.n != n or F.n != n:
        raise DimensionMismatchError("split does not match the chart")
    if r != 1:
        raise RegimeError(
            f"symplectize applies to the r = 1 regime only (got r = {r}); "
            "use reduce at fixed momentum levels instead")
    _require_psi_independent(F, split)
    if I0 is None:
        lo, hi = chart.domain.sampling_interval(0)
        I0 = (lo + hi) / 2
    I0 = as_fraction(I0)
    lo, hi = chart.domain.intervals[0]
    if (lo is not None and I0 < lo) or (hi is not None and I0 > hi):
        raise DomainError(f"base point I0 = {I0} outside the I interval")

    G = tuple(chart.A[r + m][0].definite_integral(0, I0, 0) for m in range(k))
    shift = [RationalPolynomial.zero(n)] * r + list(G)
    T = AATransform([[int(i == j) for j in range(n)] for i in range(n)], G=shift)
    new_chart, new_F = apply_transform(chart, F, T)

    canonical = AlmostSymplecticChart.canonical(n, new_chart.domain)
    straight = hamiltonian_vector_field(new_chart, new_F)
    reference = hamiltonian_vector_field(canonical, new_F)
    assert straight == reference, \
        "symplectized field is not canonical (sign convention bug)"
    return SymplectizedSystem(split=split, I0=I0, G=G, chart=new_chart,
                              hamiltonian=new_F, transform=T, field=straight)


# -----------------------------------------------------------------------------
# pipeline
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelReport:
    c: tuple
    system: ReducedSystem
    symplectic: bool
    sub_report: "PipelineReport | None"


@dataclass(frozen=True)
class PipelineReport:
    n: int
    chart_symplectic: bool
    classification: spectra.ClassificationVerdict
    fg1: spectra.GenericityVerdict
    fg2: spectra.GenericityVerdict
    normalization: lattice.NormalizationResult
    regime: str
    verdict: str
    symplectization: SymplectizedSystem | None = None
    levels: tuple = field(default_factory=tuple)

    @property
    def r(self):
        return self.normalization.r

    @property
    def k(self):
        return self.normalization.k


def pipeline(chart: AlmostSymplecticChart, F: FourierFunction,
             levels=None, depth: int = 0, max_depth: int = 6) -> PipelineReport:
    """check -> genericity -> normalize -> classify by the reduced dimension r.

    r = 0: the field is vertical (basic Hamiltonian, linear flow on the
    fibers).  r = 1: symplectizable; F and the J actions are first integrals
    in involution.  r >= 2: reduces to a family of r-degree-of-freedom
    symplectic systems at the supplied momentum levels; a level whose reduced
    chart still has a nonzero C-tensor is normalized and reduced again, and
    the iteration stops exactly when every reduced C-tensor vanishes.
    """
    cls = spectra.is_fully_hamiltonian(chart, F)
    norm = lattice.normalize_hamiltonian(chart, F)  # raises with witness if rejected
    fg1 = spectra.genericity_check(chart, F, "FG1")
    fg2 = spectra.genericity_check(chart, F, "FG2")
    r, k = norm.r, norm.k
    split = NormalizedSplit(chart.n, k)
    symp = None
    level_reports = []
    if r == 0:
        regime = "vertical"
        verdict = ("vertical: basic Hamiltonian, flow is linear on the torus "
                   "fibers; integrable")
    elif r == 1:
        regime = "symplectizable"
        symp = symplectize(norm.chart, norm.hamiltonian, split)
        verdict = ("symplectizable: conjugate to a canonical Hamiltonian "
                   "system; completely integrable with F and the last "
                   f"{k} actions as first integrals")
    else:
        regime = "reduced-family"
        verdict = (f"reduces to a family of {r}-degree-of-freedom symplectic "
                   "systems at fixed momentum levels; integrability not implied")
        for c in (levels or []):
            system = reduce(norm.chart, norm.hamiltonian, split, c)
            symplectic = system.is_symplectic()
            sub = None
            if not symplectic and depth < max_depth:
                sub = pipeline(system.chart, system.hamiltonian,
                               levels=None, depth=depth + 1, max_depth=max_depth)
            level_reports.append(LevelReport(
                c=tuple(as_fraction(x) for x in c), system=system,
                symplectic=symplectic, sub_report=sub))
    return PipelineReport(
        n=chart.n, chart_symplectic=chart.c_tensor().is_zero(),
        classification=cls, fg1=fg1, fg2=fg2, normalization=norm,
        regime=regime, verdict=verdict, symplectization=symp,
        levels=tuple(level_reports))
