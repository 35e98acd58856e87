#!/usr/bin/env python3
"""Classify Hamiltonians on the bundled charts.

Walks through the exact layer: the non-closedness tensor C of each demo
chart, exact kernels of C(a), the full-Hamiltonianity decision (with a
rejection witness), and the FG1/FG2 genericity verdicts.
"""

from fractions import Fraction

from asympl import (FourierFunction, genericity_check, is_fully_hamiltonian,
                    kernel_at, spectrum, verify_rank_bound)
from asympl.demos import demo_a4, demo_a5, demo_symplectic

for name, (chart, F) in [("a4", demo_a4()), ("a5", demo_a5()),
                         ("symplectic", demo_symplectic())]:
    print(f"=== demo {name} (n = {chart.n}) ===")
    C = chart.c_tensor()
    if C.is_zero():
        print("C = 0: the chart is symplectic, every Hamiltonian is "
              "fully-Hamiltonian")
    else:
        print(f"C tensor: {C}")
        a = [Fraction(1, 3)] * chart.n
        basis = kernel_at(C, a)
        print(f"ker C(a) at a = (1/3,...): dimension {len(basis)} "
              f"(bound n - 3 = {chart.n - 3})")
        report = verify_rank_bound(chart, samples=50)
        print(f"kernel-dimension histogram over 50 samples: "
              f"{report.kernel_dim_histogram}")

    print(f"spectrum of F: {spectrum(F).support}")
    verdict = is_fully_hamiltonian(chart, F)
    print(f"fully-Hamiltonian: {verdict.accepted} ({verdict.certificate})")
    for which in ("FG1", "FG2"):
        g = genericity_check(chart, F, which)
        print(f"{which}: {g.status}")
        for d in g.directions:
            print(f"   direction {d.direction}: {d.status} -- {d.certificate}")
    print()

# a Hamiltonian touching a reduced angle is rejected with an exact witness
chart, _ = demo_a5()
bad = FourierFunction.cosine(5, (0, 0, 1, 0, 0))
verdict = is_fully_hamiltonian(chart, bad)
print("cos(alpha3) on the a5 chart is rejected; witness:")
print(f"   {verdict.witness}")
