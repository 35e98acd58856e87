"""JSON config schema and report serialization.

Definitions (charts, Hamiltonians, momentum levels, initial conditions) are
exact: every rational is a string "p/q" (or "p"), never a JSON float, so
classification cannot depend on parse-time rounding.  Floats appear only in
outputs (trajectories, diagnostics).  Matrix/angle indices in documents are
1-based, matching the a_1..a_n / alpha_1..alpha_n naming used everywhere.

Validation errors carry a dotted path to the offending field.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction

from .chart import AlmostSymplecticChart, Box
from .dynamics import IntegratorConfig, Trajectory
from .errors import ValidationError
from .exactalg import FourierFunction, RationalPolynomial
from .reduction import NormalizedSplit


def _rat(value, where) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(
            f"expected an exact rational string, got {value!r} "
            "(floats are not allowed in definitions)", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational {value!r}: {exc}", where) from None
    raise ValidationError(f"expected a rational, got {type(value).__name__}", where)


def rational_to_str(x) -> str:
    return str(Fraction(x))


# -- polynomials ---------------------------------------------------------------

def poly_to_json(p: RationalPolynomial):
    return [{"exponents": list(e), "coeff": rational_to_str(c)}
            for e, c in sorted(p.terms.items())]


def poly_from_json(data, nvars, where="poly") -> RationalPolynomial:
    if not isinstance(data, list):
        raise ValidationError("polynomial must be a list of terms", where)
    terms = {}
    for t, item in enumerate(data):
        loc = f"{where}[{t}]"
        if not isinstance(item, dict) or "exponents" not in item or "coeff" not in item:
            raise ValidationError("term needs 'exponents' and 'coeff'", loc)
        exps = item["exponents"]
        if (not isinstance(exps, list) or len(exps) != nvars
                or not all(isinstance(e, int) and e >= 0 for e in exps)):
            raise ValidationError(
                f"exponents must be {nvars} non-negative ints", f"{loc}.exponents")
        coeff = _rat(item["coeff"], f"{loc}.coeff")
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + coeff
    return RationalPolynomial(nvars, terms)


# -- Fourier functions ---------------------------------------------------------

def fourier_to_json(f: FourierFunction):
    out = []
    for nu in sorted(f.harmonics):
        c, s = f.harmonics[nu]
        out.append({"nu": list(nu), "cos": poly_to_json(c), "sin": poly_to_json(s)})
    return out


def fourier_from_json(data, n, where="hamiltonian") -> FourierFunction:
    if not isinstance(data, list):
        raise ValidationError("Fourier function must be a list of harmonics", where)
    harmonics = {}
    for t, item in enumerate(data):
        loc = f"{where}[{t}]"
        if not isinstance(item, dict) or "nu" not in item:
            raise ValidationError("harmonic needs 'nu'", loc)
        nu = item["nu"]
        if (not isinstance(nu, list) or len(nu) != n
                or not all(isinstance(v, int) for v in nu)):
            raise ValidationError(f"nu must be {n} ints", f"{loc}.nu")
        c = poly_from_json(item.get("cos", []), n, f"{loc}.cos")
        s = poly_from_json(item.get("sin", []), n, f"{loc}.sin")
        key = tuple(nu)
        if key in harmonics:
            c0, s0 = harmonics[key]
            c, s = c0 + c, s0 + s
        harmonics[key] = (c, s)
    return FourierFunction(n, harmonics)


# -- charts --------------------------------------------------------------------

def box_to_json(box: Box):
    return [[None if lo is None else rational_to_str(lo),
             None if hi is None else rational_to_str(hi)]
            for lo, hi in box.intervals]


def box_from_json(data, n, where="domain") -> Box:
    if not isinstance(data, list) or len(data) != n:
        raise ValidationError(f"domain must list {n} intervals", where)
    intervals = []
    for i, pair in enumerate(data):
        loc = f"{where}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError("interval must be [lo, hi]", loc)
        lo = None if pair[0] is None else _rat(pair[0], f"{loc}[0]")
        hi = None if pair[1] is None else _rat(pair[1], f"{loc}[1]")
        if lo is not None and hi is not None and lo > hi:
            raise ValidationError(f"empty interval [{lo}, {hi}]", loc)
        intervals.append((lo, hi))
    return Box(intervals)


def chart_to_json(chart: AlmostSymplecticChart):
    entries = []
    for i in range(chart.n):
        for j in range(i + 1, chart.n):
            if not chart.A[i][j].is_zero():
                entries.append({"i": i + 1, "j": j + 1,
                                "poly": poly_to_json(chart.A[i][j])})
    return {"n": chart.n, "domain": box_to_json(chart.domain), "A": entries}


def chart_from_json(data, where="chart") -> AlmostSymplecticChart:
    if not isinstance(data, dict):
        raise ValidationError("chart must be an object", where)
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("chart.n must be a positive integer", f"{where}.n")
    domain = box_from_json(data.get("domain", [[None, None]] * n), n,
                           f"{where}.domain")
    upper = {}
    for t, item in enumerate(data.get("A", [])):
        loc = f"{where}.A[{t}]"
        if not isinstance(item, dict) or "i" not in item or "j" not in item:
            raise ValidationError("A entry needs 'i' and 'j'", loc)
        i, j = item["i"], item["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
            raise ValidationError(
                f"A entry indices must satisfy 1 <= i < j <= {n}", loc)
        if (i - 1, j - 1) in upper:
            raise ValidationError(f"duplicate A entry ({i}, {j})", loc)
        upper[(i - 1, j - 1)] = poly_from_json(item.get("poly", []), n, f"{loc}.poly")
    return AlmostSymplecticChart.from_upper_triangle(n, upper, domain)


# -- whole configs ---------------------------------------------------------------

@dataclass
class SystemConfig:
    name: str
    chart: AlmostSymplecticChart
    hamiltonian: FourierFunction
    split: NormalizedSplit | None
    integrator: IntegratorConfig
    experiments: dict
    raw: dict

    @property
    def n(self):
        return self.chart.n


def _integrator_from_json(data, where="integrator") -> IntegratorConfig:
    if data is None:
        return IntegratorConfig()
    if not isinstance(data, dict):
        raise ValidationError("integrator must be an object", where)
    known = {"method", "rtol", "atol", "max_step", "n_samples", "rk4_step"}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown integrator fields {sorted(unknown)}", where)
    kwargs = {}
    for key in known & set(data):
        kwargs[key] = data[key]
    try:
        return IntegratorConfig(**kwargs)
    except Exception as exc:
        raise ValidationError(str(exc), where) from None


def _experiments_from_json(data, n, where="experiments") -> dict:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError("experiments must be an object", where)
    out = dict(data)
    ics = []
    for t, item in enumerate(data.get("initial_conditions", [])):
        loc = f"{where}.initial_conditions[{t}]"
        if not isinstance(item, dict) or "a" not in item or "alpha" not in item:
            raise ValidationError("initial condition needs 'a' and 'alpha'", loc)
        a = [_rat(x, f"{loc}.a[{i}]") for i, x in enumerate(item["a"])]
        alpha = [_rat(x, f"{loc}.alpha[{i}]") for i, x in enumerate(item["alpha"])]
        if len(a) != n or len(alpha) != n:
            raise ValidationError(f"initial condition must have {n} actions "
                                  f"and {n} angles", loc)
        ics.append((a, alpha))
    out["initial_conditions"] = ics
    levels = []
    for t, lvl in enumerate(data.get("levels", [])):
        loc = f"{where}.levels[{t}]"
        if not isinstance(lvl, list):
            raise ValidationError("momentum level must be a list", loc)
        levels.append([_rat(x, f"{loc}[{i}]") for i, x in enumerate(lvl)])
    out["levels"] = levels
    sections = []
    for t, sec in enumerate(data.get("sections", [])):
        loc = f"{where}.sections[{t}]"
        if not isinstance(sec, dict) or "angle" not in sec:
            raise ValidationError("section needs 'angle' (1-based) and 'value'", loc)
        idx = sec["angle"]
        if not (isinstance(idx, int) and 1 <= idx <= n):
            raise ValidationError(f"section angle must be in 1..{n}", f"{loc}.angle")
        sections.append({"angle": idx - 1,
                         "value": _rat(sec.get("value", 0), f"{loc}.value")})
    out["sections"] = sections
    if "T" in data and not isinstance(data["T"], (int, float)):
        raise ValidationError("experiments.T must be a number", f"{where}.T")
    if "seed" in data and not isinstance(data["seed"], int):
        raise ValidationError("experiments.seed must be an integer", f"{where}.seed")
    return out


def config_from_json(data, name="config") -> SystemConfig:
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object", name)
    if "chart" not in data:
        raise ValidationError("missing 'chart'", name)
    chart = chart_from_json(data["chart"], "chart")
    if "hamiltonian" not in data:
        raise ValidationError("missing 'hamiltonian'", name)
    F = fourier_from_json(data["hamiltonian"], chart.n, "hamiltonian")
    split = None
    if data.get("split") is not None:
        sp = data["split"]
        if not isinstance(sp, dict) or not isinstance(sp.get("k"), int):
            raise ValidationError("split must be {'k': int}", "split")
        if not 0 <= sp["k"] <= chart.n:
            raise ValidationError(f"split.k must be in 0..{chart.n}", "split.k")
        split = NormalizedSplit(chart.n, sp["k"])
    integrator = _integrator_from_json(data.get("integrator"))
    experiments = _experiments_from_json(data.get("experiments"), chart.n)
    return SystemConfig(name=data.get("name", name), chart=chart, hamiltonian=F,
                        split=split, integrator=integrator,
                        experiments=experiments, raw=data)


def load_config(path) -> SystemConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(str(exc), str(path)) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"invalid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}",
            str(path)) from None
    return config_from_json(data, name=str(path))


def config_to_json(chart, hamiltonian, name=None, split=None, integrator=None,
                   experiments=None) -> dict:
    out = {}
    if name:
        out["name"] = name
    out["chart"] = chart_to_json(chart)
    out["hamiltonian"] = fourier_to_json(hamiltonian)
    if split is not None:
        out["split"] = {"k": split.k}
    if integrator is not None:
        out["integrator"] = {
            "method": integrator.method, "rtol": integrator.rtol,
            "atol": integrator.atol, "n_samples": integrator.n_samples}
    if experiments:
        out["experiments"] = experiments
    return out


# -- reports ---------------------------------------------------------------------

def witness_to_json(witness):
    if witness is None:
        return None
    return {"nu": list(witness.nu), "i": witness.i + 1, "j": witness.j + 1,
            "coefficient": witness.kind,
            "point": [rational_to_str(x) for x in witness.point],
            "value": rational_to_str(witness.value)}


def classification_to_json(verdict):
    return {"accepted": verdict.accepted, "certificate": verdict.certificate,
            "witness": witness_to_json(verdict.witness)}


def genericity_to_json(verdict):
    return {"property": verdict.which, "status": verdict.status,
            "directions": [{"direction": list(d.direction), "status": d.status,
                            "certificate": d.certificate}
                           for d in verdict.directions]}


def rank_bound_to_json(report):
    return {"n": report.n, "samples": report.samples,
            "symplectic": report.symplectic,
            "kernel_dim_histogram": {str(k): v for k, v in
                                     sorted(report.kernel_dim_histogram.items())},
            "zero_tensor_points": report.zero_tensor_points,
            "violations": [[rational_to_str(x) for x in v]
                           for v in report.violations]}


def normalization_to_json(norm):
    return {"M": [list(row) for row in norm.lattice.M],
            "M_inv": [list(row) for row in norm.lattice.M_inv],
            "r": norm.r, "k": norm.k,
            "saturation_basis": [list(v) for v in norm.lattice.saturation_basis]}


def symplectization_to_json(symp):
    return {"I0": rational_to_str(symp.I0),
            "G": [poly_to_json(g) for g in symp.G],
            "k": symp.split.k}


def reduced_system_to_config(system, name=None) -> dict:
    out = config_to_json(system.chart, system.hamiltonian, name=name)
    out["momentum_level"] = [rational_to_str(x) for x in system.c]
    return out


def pipeline_report_to_json(report) -> dict:
    out = {
        "n": report.n,
        "chart_symplectic": report.chart_symplectic,
        "classification": classification_to_json(report.classification),
        "FG1": genericity_to_json(report.fg1),
        "FG2": genericity_to_json(report.fg2),
        "normalization": normalization_to_json(report.normalization),
        "r": report.r, "k": report.k,
        "regime": report.regime,
        "verdict": report.verdict,
    }
    if report.symplectization is not None:
        out["symplectization"] = symplectization_to_json(report.symplectization)
    if report.levels:
        out["levels"] = [{
            "c": [rational_to_str(x) for x in lvl.c],
            "symplectic": lvl.symplectic,
            "reduced_system": reduced_system_to_config(lvl.system),
            "sub_report": (pipeline_report_to_json(lvl.sub_report)
                           if lvl.sub_report else None),
        } for lvl in report.levels]
    return out


# -- trajectory CSV ----------------------------------------------------------------

def write_trajectory_csv(traj: Trajectory, path, wrap: bool = False):
    """Header: t, a_1..a_n, alpha_1..alpha_n, F, J_* (monitors present)."""
    n = traj.n
    monitor_names = [m for m in traj.monitors if m != "F"]
    header = (["t"] + [f"a_{i + 1}" for i in range(n)]
              + [f"alpha_{i + 1}" for i in range(n)]
              + (["F"] if "F" in traj.monitors else [])
              + [f"J_{m}" for m in monitor_names])
    angles = traj.wrapped_angles() if wrap else traj.angles
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row_idx in range(len(traj.times)):
            row = [repr(float(traj.times[row_idx]))]
            row += [repr(float(x)) for x in traj.actions[row_idx]]
            row += [repr(float(x)) for x in angles[row_idx]]
            if "F" in traj.monitors:
                row.append(repr(float(traj.monitors["F"][row_idx])))
            row += [repr(float(traj.monitors[m][row_idx])) for m in monitor_names]
            writer.writerow(row)
