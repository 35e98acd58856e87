"""Command-line surface.

    asympl check        config   classification + genericity + kernel report
    asympl normalize    config   angle-normalizing unimodular change
    asympl reduce       config   reduced-system configs per momentum level
    asympl symplectize  config   straightened (r = 1) system + shift report
    asympl integrate    config   trajectory CSVs with conservation monitors
    asympl analyze      config   rotation numbers, Lyapunov estimate, sections
    asympl demo                  write the bundled demo configs

Exit codes: 0 success, 2 validation error, 3 classification rejection (the
report still carries the witness), 4 regime error, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import replace
from fractions import Fraction

from . import demos, serialization as ser
from .chart import hamiltonian_vector_field
from .dynamics import (MLE_CHAOTIC_MIN, MLE_INTEGRABLE_MAX, IntegratorConfig,
                       curve_fit_residual, integrate, lyapunov_mle,
                       poincare_section, rotation_numbers, section_occupancy)
from .errors import (AsymplError, ClassificationError, NumericalError,
                     RegimeError, ValidationError)
from .lattice import normalize_hamiltonian
from .reduction import NormalizedSplit, reduce as reduce_system, symplectize
from .spectra import genericity_check, is_fully_hamiltonian, verify_rank_bound

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CLASSIFICATION = 3
EXIT_REGIME = 4
EXIT_NUMERICAL = 5


def _write_json(data, outdir, filename):
    path = os.path.join(outdir, filename)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, default=str)
        fh.write("\n")
    return path


def _stem(config_path) -> str:
    base = os.path.basename(str(config_path))
    base = re.sub(r"\.(cfg|json)$", "", base)
    return base or "system"


def _conserved_action_indices(field):
    """Actions whose rate is the exact zero function (symbolic first integrals)."""
    return tuple(i for i, g in enumerate(field.a_components) if g.is_zero())


def _integrator(config, args) -> IntegratorConfig:
    cfg = config.integrator
    if getattr(args, "tol", None):
        cfg = replace(cfg, rtol=float(args.tol), atol=float(args.tol))
    if getattr(args, "method", None):
        cfg = replace(cfg, method=args.method)
    return cfg


def _duration(config, args, default=100.0) -> float:
    if getattr(args, "T", None) is not None:
        return float(args.T)
    return float(config.experiments.get("T", default))


def _seed(config, args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(config.experiments.get("seed", 0))


def _levels(config, args):
    if getattr(args, "levels", None):
        levels = []
        for chunk in args.levels.split(";"):
            chunk = chunk.strip()
            if chunk:
                levels.append([Fraction(x) for x in chunk.split(",")])
        return levels
    return config.experiments.get("levels", [])


def _initial_conditions(config):
    ics = config.experiments.get("initial_conditions", [])
    if not ics:
        raise ValidationError("config has no experiments.initial_conditions")
    return ics


# -----------------------------------------------------------------------------
# subcommands
# -----------------------------------------------------------------------------

def cmd_check(args) -> int:
    config = ser.load_config(args.config)
    chart, F = config.chart, config.hamiltonian
    C = chart.c_tensor()
    verdict = is_fully_hamiltonian(chart, F)
    report = {
        "name": config.name,
        "n": chart.n,
        "c_tensor": {
            "symplectic": C.is_zero(),
            "nonzero_entries": [{"i": i + 1, "j": j + 1, "k": k + 1,
                                 "poly": ser.poly_to_json(p)}
                                for (i, j, k), p in sorted(C.entries.items())],
        },
        "rank_bound": ser.rank_bound_to_json(
            verify_rank_bound(chart, samples=100, seed=_seed(config, args))),
        "classification": ser.classification_to_json(verdict),
        "FG1": ser.genericity_to_json(genericity_check(chart, F, "FG1")),
        "FG2": ser.genericity_to_json(genericity_check(chart, F, "FG2")),
    }
    path = _write_json(report, args.out, f"{_stem(args.config)}-check.json")
    if C.is_zero():
        print("C = 0: chart is symplectic; every Hamiltonian is fully-Hamiltonian")
    else:
        dims = report["rank_bound"]["kernel_dim_histogram"]
        print(f"C has {len(C.entries)} independent nonzero entries; "
              f"kernel dimension histogram {dims}")
    print(f"full-Hamiltonianity: {'accepted' if verdict.accepted else 'REJECTED'}")
    if verdict.witness is not None:
        print(f"witness: {verdict.witness}")
    print(f"FG1: {report['FG1']['status']}   FG2: {report['FG2']['status']}")
    print(f"report written to {path}")
    return EXIT_OK if verdict.accepted else EXIT_CLASSIFICATION


def _transformed_experiments(config, norm):
    """Experiments for the normalized config; initial conditions are mapped
    exactly, levels/sections only survive an identity transform."""
    ex = config.experiments
    out = {}
    if "T" in ex:
        out["T"] = ex["T"]
    if "seed" in ex:
        out["seed"] = ex["seed"]
    identity = norm.transform.is_identity()
    ics = []
    for a, alpha in ex.get("initial_conditions", []):
        if identity:
            na, nal = a, alpha
        else:
            na = norm.transform.apply_point_exact(a)
            Zi_t = list(zip(*norm.transform.Z_inv))
            nal = [sum(Fraction(c) * al for c, al in zip(row, alpha))
                   for row in Zi_t]
        ics.append({"a": [str(x) for x in na], "alpha": [str(x) for x in nal]})
    if ics:
        out["initial_conditions"] = ics
    if identity:
        if ex.get("levels"):
            out["levels"] = [[str(x) for x in lvl] for lvl in ex["levels"]]
        if ex.get("sections"):
            out["sections"] = [{"angle": s["angle"] + 1, "value": str(s["value"])}
                               for s in ex["sections"]]
    return out


def cmd_normalize(args) -> int:
    config = ser.load_config(args.config)
    norm = normalize_hamiltonian(config.chart, config.hamiltonian)
    report = ser.normalization_to_json(norm)
    stem = _stem(args.config)
    report_path = _write_json(report, args.out, f"{stem}-normalize.json")
    new_config = ser.config_to_json(
        norm.chart, norm.hamiltonian, name=f"{stem}-normalized",
        split=NormalizedSplit(config.n, norm.k), integrator=config.integrator,
        experiments=_transformed_experiments(config, norm))
    cfg_path = _write_json(new_config, args.out, f"{stem}-normalized.cfg")
    print(f"r = {norm.r}, k = {norm.k}, |det M| = 1")
    print(f"M = {[list(r) for r in norm.lattice.M]}")
    print(f"report: {report_path}")
    print(f"normalized config: {cfg_path}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    config = ser.load_config(args.config)
    norm = normalize_hamiltonian(config.chart, config.hamiltonian)
    split = NormalizedSplit(config.n, norm.k)
    if split.r == 0:
        raise RegimeError("r = 0: the Hamiltonian is basic and the flow is "
                          "vertical; nothing to reduce")
    levels = _levels(config, args)
    if not levels:
        raise ValidationError("no momentum levels: pass --levels or set "
                              "experiments.levels in the config")
    stem = _stem(args.config)
    paths = []
    for idx, c in enumerate(levels):
        system = reduce_system(norm.chart, norm.hamiltonian, split, c)
        doc = ser.reduced_system_to_config(
            system, name=f"{stem}-reduced-{idx}")
        doc["integrator"] = ser.config_to_json(
            system.chart, system.hamiltonian,
            integrator=config.integrator)["integrator"]
        paths.append(_write_json(doc, args.out, f"{stem}-reduced-{idx}.cfg"))
    report = {
        "normalization": ser.normalization_to_json(norm),
        "levels": [[str(x) for x in c] for c in levels],
        "reduced_configs": paths,
        "reduced_symplectic": all(
            reduce_system(norm.chart, norm.hamiltonian, split, c).is_symplectic()
            for c in levels),
    }
    report_path = _write_json(report, args.out, f"{stem}-reduce.json")
    print(f"reduced {len(levels)} level(s) to r = {split.r} degrees of freedom")
    print(f"report: {report_path}")
    return EXIT_OK


def cmd_symplectize(args) -> int:
    config = ser.load_config(args.config)
    norm = normalize_hamiltonian(config.chart, config.hamiltonian)
    split = NormalizedSplit(config.n, norm.k)
    symp = symplectize(norm.chart, norm.hamiltonian, split)
    stem = _stem(args.config)
    report = ser.symplectization_to_json(symp)
    report["normalization"] = ser.normalization_to_json(norm)
    report_path = _write_json(report, args.out, f"{stem}-symplectize.json")
    new_config = ser.config_to_json(
        symp.chart, symp.hamiltonian, name=f"{stem}-symplectized",
        split=split, integrator=config.integrator,
        experiments=_transformed_experiments(config, norm))
    cfg_path = _write_json(new_config, args.out, f"{stem}-symplectized.cfg")
    print(f"symplectized with base point I0 = {symp.I0}; "
          f"G = {[repr(g) for g in symp.G]}")
    print(f"report: {report_path}")
    print(f"symplectized config: {cfg_path}")
    return EXIT_OK


def cmd_integrate(args) -> int:
    config = ser.load_config(args.config)
    chart, F = config.chart, config.hamiltonian
    field = hamiltonian_vector_field(chart, F)
    cfg = _integrator(config, args)
    T = _duration(config, args)
    integrals = _conserved_action_indices(field)
    stem = _stem(args.config)
    paths = []
    for idx, (a, alpha) in enumerate(_initial_conditions(config)):
        traj = integrate(field, ([float(x) for x in a], [float(x) for x in alpha]),
                         T, cfg, domain=chart.domain, hamiltonian=F,
                         first_integrals=integrals)
        path = os.path.join(args.out, f"{stem}-traj-{idx}.csv")
        ser.write_trajectory_csv(traj, path, wrap=args.wrap)
        paths.append(path)
        drift = max((abs(traj.monitors[m] - traj.monitors[m][0]).max()
                     for m in traj.monitors), default=0.0)
        note = " (truncated at domain exit)" if traj.truncated else ""
        print(f"trajectory {idx}: T = {traj.duration:g}, "
              f"max monitor drift {drift:.3e}{note} -> {path}")
    return EXIT_OK


def _parse_poincare(spec_str, n):
    m = re.fullmatch(r"alpha_(\d+)\s*=\s*([-0-9/.eE+]+)", spec_str.strip())
    if not m:
        raise ValidationError(
            f"--poincare must look like alpha_2=0, got {spec_str!r}")
    idx = int(m.group(1))
    if not 1 <= idx <= n:
        raise ValidationError(f"--poincare angle index out of range 1..{n}")
    try:
        value = float(Fraction(m.group(2)))
    except ValueError:
        value = float(m.group(2))
    return idx - 1, value


def cmd_analyze(args) -> int:
    config = ser.load_config(args.config)
    chart, F = config.chart, config.hamiltonian
    field = hamiltonian_vector_field(chart, F)
    cfg = _integrator(config, args)
    T = _duration(config, args, default=1000.0)
    seed = _seed(config, args)
    sections = config.experiments.get("sections", [])
    if args.poincare:
        idx, value = _parse_poincare(args.poincare, chart.n)
        sections = [{"angle": idx, "value": value}]
    stem = _stem(args.config)
    results = []
    for idx, (a, alpha) in enumerate(_initial_conditions(config)):
        x0 = ([float(x) for x in a], [float(x) for x in alpha])
        traj = integrate(field, x0, T, cfg, domain=chart.domain, hamiltonian=F)
        omega_full = rotation_numbers(traj)
        half = traj.states[:len(traj.times) // 2 + 1]
        omega_half = ((half[-1, chart.n:] - half[0, chart.n:])
                      / (traj.times[len(traj.times) // 2] - traj.times[0]))
        mle = lyapunov_mle(field, x0, min(T, 2500.0), cfg, seed=seed)
        entry = {
            "initial_condition": {"a": [str(x) for x in a],
                                  "alpha": [str(x) for x in alpha]},
            "T": T,
            "rotation_numbers": [float(w) for w in omega_full],
            "rotation_stationarity": float(max(abs(omega_full - omega_half))),
            "mle": {"value": mle.value, "d0": mle.d0,
                    "renorm_dt": mle.renorm_dt, "note": mle.note,
                    "thresholds": {"integrable_max": MLE_INTEGRABLE_MAX,
                                   "chaotic_min": MLE_CHAOTIC_MIN},
                    "verdict": ("integrable-like" if mle.value <= MLE_INTEGRABLE_MAX
                                else "chaotic" if mle.value > MLE_CHAOTIC_MIN
                                else "indeterminate")},
            "sections": [],
        }
        for s_idx, sec_spec in enumerate(sections):
            sec = poincare_section(field, x0, T, sec_spec["angle"],
                                   float(sec_spec["value"]), cfg,
                                   domain=chart.domain)
            sec_path = os.path.join(args.out, f"{stem}-section-{idx}-{s_idx}.csv")
            with open(sec_path, "w") as fh:
                names = ([f"a_{i + 1}" for i in range(chart.n)]
                         + [f"alpha_{i + 1}" for i in range(chart.n)])
                fh.write("t," + ",".join(names) + "\n")
                for t, y in zip(sec.times, sec.states):
                    fh.write(",".join([repr(float(t))] +
                                      [repr(float(v)) for v in y]) + "\n")
            diag = {}
            if len(sec):
                other = next((i for i in range(chart.n)
                              if i != sec_spec["angle"]), sec_spec["angle"])
                plane = sec.plane(0, other)
                diag = {"occupancy": section_occupancy(plane),
                        "curve_residual": curve_fit_residual(plane)}
            entry["sections"].append({
                "angle": sec_spec["angle"] + 1, "value": float(sec_spec["value"]),
                "crossings": len(sec), "csv": sec_path, **diag})
        results.append(entry)
        print(f"seed {idx}: MLE {mle.value:.4g} ({entry['mle']['verdict']}), "
              f"rotation numbers {[round(float(w), 4) for w in omega_full]}")
    path = _write_json({"name": config.name, "results": results},
                       args.out, f"{stem}-analysis.json")
    print(f"analysis written to {path}")
    return EXIT_OK


def cmd_demo(args) -> int:
    paths = demos.write_demo_configs(args.out)
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


# -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asympl",
        description="almost-symplectic action-angle toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("check", help="classification and genericity report")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="angle-normalizing coordinate change")
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("reduce", help="reduce at momentum levels")
    common(p)
    p.add_argument("--levels", help="levels as c1,c2,..;d1,d2,..")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("symplectize", help="straighten an r = 1 system")
    common(p)
    p.set_defaults(func=cmd_symplectize)

    p = sub.add_parser("integrate", help="integrate experiment seeds to CSV")
    common(p)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--method", choices=["dop853", "rk45", "rk4"], default=None)
    p.add_argument("--wrap", action="store_true",
                   help="emit angles mod 2pi instead of unwrapped")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("analyze", help="rotation numbers, MLE, sections")
    common(p)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--method", choices=["dop853", "rk45"], default=None)
    p.add_argument("--poincare", help="section like alpha_2=0")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("demo", help="write bundled demo configs")
    common(p, needs_config=False)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ClassificationError as exc:
        print(f"classification rejected: {exc}", file=sys.stderr)
        return EXIT_CLASSIFICATION
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except AsymplError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
