#!/usr/bin/env python3
# Monotone convergence of neighborhood measures.
#
# Shrink relatively open neighborhoods A_k of a boundary set A (here: arcs
# with 1/k of slack on each side).  Since larger sets have smaller measures,
# omega(z, A_k, D) climbs as the neighborhoods shrink, and it converges to
# omega(z, A, D).  At the disc center everything is explicit: the measure of
# an arc of length L is 1 - L/(2 pi), so the k-th discrepancy is exactly
# 1/(pi k).

import numpy as np

from harmcross import GridConfig, check_monotone_convergence
from harmcross.fixtures import disc_arcs_by_angle, unit_disc

disc = unit_disc()
target = disc_arcs_by_angle(disc, [(0.0, np.pi)])
ks = [1, 2, 4, 8, 16, 32, 64, 128, 320]
family = {k: disc_arcs_by_angle(disc, [(-1.0 / k, np.pi + 1.0 / k)]) for k in ks}

report = check_monotone_convergence(disc, target, family, [0j], cfg=GridConfig(spacing=1 / 128))

print("grid engine at the disc center:")
print(f"{'k':>4} {'measured discrepancy':>21} {'1/(pi k)':>12}")
for k, d in zip(report.ks, report.discrepancy):
    print(f"{k:>4} {d:>21.6f} {1 / (np.pi * k):>12.6f}")
print(f"\nnondecreasing in k: {report.nondecreasing}")
print(f"discrepancy shrinking: {report.discrepancy_decreasing}")
print(f"final gap at k=320: {report.discrepancy[-1]:.2e}")
