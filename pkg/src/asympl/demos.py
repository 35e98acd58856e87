"""Built-in demo systems.

Three charts exercise the three dynamical regimes:

* ``demo_a4``     n = 4, coupling matrix with a single unit C-entry on the
                  indices {2,3,4} and free polynomial couplings g2, g3, g4 in
                  the first row/column (here g2 = a1*a2, g3 = a3, g4 = 1).
                  The pendulum-type Hamiltonian depends on one angle only, so
                  the system is symplectizable (r = 1).
* ``demo_a5``     n = 5, unit C-entry on {3,4,5}; Hamiltonian of a
                  periodically perturbed pendulum plus three uncoupled
                  oscillators -- fully-Hamiltonian, reduces to a chaotic
                  2-degree-of-freedom symplectic family (r = 2).
* ``demo_symplectic``  n = 3 control chart with A = 0: every Hamiltonian is
                  fully-Hamiltonian.

Each builder returns (chart, hamiltonian); ``demo_config`` wraps them into a
full config document with integrator defaults and experiment blocks.
"""

from __future__ import annotations

from fractions import Fraction

from .chart import AlmostSymplecticChart, Box
from .exactalg import FourierFunction, RationalPolynomial

DEMO_NAMES = ("a4", "a5", "symplectic")


def _var(n, i):
    return RationalPolynomial.variable(n, i)


def demo_a4():
    """Symplectizable demo: g2 = a1*a2, g3 = a3, g4 = 1."""
    n = 4
    g2 = _var(n, 0) * _var(n, 1)
    g3 = _var(n, 2)
    g4 = RationalPolynomial.one(n)
    chart = AlmostSymplecticChart.from_upper_triangle(
        n,
        {(0, 1): -g2, (0, 2): -g3, (0, 3): -g4, (1, 2): _var(n, 3)},
        Box.cube(n, 4))
    # pendulum in (a1, alpha1) plus linear drift in the other actions
    F = (FourierFunction.from_polynomial(
            RationalPolynomial(n, {(2, 0, 0, 0): Fraction(1, 2),
                                   (0, 1, 0, 0): 1,
                                   (0, 0, 1, 0): 1,
                                   (0, 0, 0, 1): 1}))
         + FourierFunction.cosine(n, (1, 0, 0, 0), -1))
    return chart, F


def demo_a5():
    """Chaotic demo: perturbed pendulum + three oscillators on the n = 5 chart."""
    n = 5
    entries = {
        (0, 1): _var(n, 1),            # g12 = a2
        (0, 2): _var(n, 0),            # g13 = a1
        (0, 3): _var(n, 3),            # g14 = a4
        (0, 4): RationalPolynomial.one(n),   # g15 = 1
        (1, 2): _var(n, 2),            # g23 = a3
        (1, 3): _var(n, 1),            # g24 = a2
        (1, 4): _var(n, 4),            # g25 = a5
        (2, 3): _var(n, 4),            # the a5 entry carrying the non-closedness
    }
    chart = AlmostSymplecticChart.from_upper_triangle(
        n, entries,
        Box([(None, None), (None, None), (-8, 8), (-8, 8), (-8, 8)]))
    # a1^2/2 + a2 - (1 + cos alpha2) cos alpha1 + a3 + a4 + a5
    linear = RationalPolynomial(n, {(2, 0, 0, 0, 0): Fraction(1, 2),
                                    (0, 1, 0, 0, 0): 1,
                                    (0, 0, 1, 0, 0): 1,
                                    (0, 0, 0, 1, 0): 1,
                                    (0, 0, 0, 0, 1): 1})
    F = (FourierFunction.from_polynomial(linear)
         + FourierFunction.cosine(n, (1, 0, 0, 0, 0), -1)
         * (FourierFunction.constant(n, 1) + FourierFunction.cosine(n, (0, 1, 0, 0, 0))))
    return chart, F


def demo_symplectic():
    """A = 0 control chart (n = 3); C vanishes identically."""
    n = 3
    chart = AlmostSymplecticChart.canonical(n, Box.cube(n, 4))
    F = (FourierFunction.from_polynomial(
            RationalPolynomial(n, {(2, 0, 0): Fraction(1, 2),
                                   (0, 2, 0): Fraction(1, 2),
                                   (0, 0, 1): 1}))
         + FourierFunction.cosine(n, (1, 0, 0), -1)
         + FourierFunction.cosine(n, (1, -1, 0), Fraction(1, 2)))
    return chart, F


def _experiments(name):
    if name == "a4":
        return {
            "initial_conditions": [
                {"a": ["1/2", "1/3", "1/5", "1/7"], "alpha": ["1/2", "0", "0", "0"]}],
            "T": 200,
            "levels": [["1/3", "1/5", "1/7"]],
            "sections": [{"angle": 1, "value": "0"}],
            "seed": 20250810,
        }
    if name == "a5":
        return {
            "initial_conditions": [
                # near-separatrix seed (chaotic) and a fast-rotation seed (regular)
                {"a": ["0", "0", "1/2", "1/3", "1/4"],
                 "alpha": ["3", "0", "0", "0", "0"]},
                {"a": ["4", "0", "1/2", "1/3", "1/4"],
                 "alpha": ["0", "0", "0", "0", "0"]}],
            "T": 1000,
            "levels": [["1/2", "1/3", "1/4"]],
            "sections": [{"angle": 2, "value": "0"}],
            "seed": 20250810,
        }
    return {
        "initial_conditions": [
            {"a": ["1/2", "1/4", "1/8"], "alpha": ["0", "1", "2"]}],
        "T": 200,
        "levels": [],
        "sections": [{"angle": 3, "value": "0"}],
        "seed": 20250810,
    }


def demo_system(name):
    builders = {"a4": demo_a4, "a5": demo_a5, "symplectic": demo_symplectic}
    if name not in builders:
        raise KeyError(f"unknown demo {name!r}; choose from {DEMO_NAMES}")
    return builders[name]()


def demo_config(name) -> dict:
    from .serialization import config_to_json

    chart, F = demo_system(name)
    return config_to_json(chart, F, name=f"demo-{name}",
                          experiments=_experiments(name))


def write_demo_configs(outdir):
    """Write demo-a4.cfg, demo-a5.cfg, demo-symplectic.cfg; returns paths."""
    import json
    import os

    paths = []
    for name in DEMO_NAMES:
        path = os.path.join(outdir, f"demo-{name}.cfg")
        with open(path, "w") as fh:
            json.dump(demo_config(name), fh, indent=1)
            fh.write("\n")
        paths.append(path)
    return paths
