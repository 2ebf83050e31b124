#!/usr/bin/env python3
# Three ways to compute the same harmonic measure on the unit disc, and how
# well they agree.
#
# The harmonic measure of a boundary set A at a point z is the harmonic
# function that is 0 on A and 1 on the rest of the boundary -- equivalently,
# the probability that Brownian motion from z leaves the domain away from A.
# On the disc there is a closed form (map z to the origin, read off arc
# angles); everywhere else we have a cut-cell grid solver and a
# walk-on-spheres sampler.

import numpy as np

from harmcross import GridConfig, WosConfig, cross_validate, disc_arc_measure, grid_measure, wos_measure
from harmcross.fixtures import disc_arcs_by_angle, unit_disc

disc = unit_disc()
arc = [(0.0, np.pi / 2)]          # a quarter arc starting at angle 0
aset = disc_arcs_by_angle(disc, arc)

points = np.array([[0.0, 0.0], [0.5, 0.0], [-0.3, 0.4], [0.1, -0.7]])
z = points[:, 0] + 1j * points[:, 1]

exact = disc_arc_measure(z, arc)
grid = grid_measure(disc, aset, GridConfig(spacing=1 / 128), points)
walk = wos_measure(disc, aset, WosConfig(samples=50_000, seed=1), points)

print("measure of the quarter arc (0 on the arc, 1 elsewhere):")
print(f"{'point':>14} {'closed form':>12} {'grid':>10} {'walk':>10} {'walk 3*sigma':>13}")
for i, p in enumerate(z):
    print(
        f"{str(p):>14} {exact[i]:>12.6f} {grid.values[i]:>10.6f} "
        f"{walk.values[i]:>10.6f} {3 * walk.stderr[i]:>13.6f}"
    )

# at the center the mean value property makes the answer pure arithmetic:
# one minus the fraction of the circle covered by the arc
print(f"\ncenter value {exact[0]:.6f} vs 1 - (pi/2)/(2 pi) = "
      f"{1 - (np.pi / 2) / (2 * np.pi):.6f}")

# the cross-validation report runs every applicable engine and flags points
# where they disagree beyond 3 sigma plus the grid budget
report = cross_validate(
    disc, aset, points,
    grid_cfg=GridConfig(spacing=1 / 128),
    wos_cfg=WosConfig(samples=50_000, seed=1),
)
print(f"\ncross-validation over {len(points)} points: "
      f"{'all clear' if report.passed else 'flags raised'}")
print("max discrepancy between engines:", float(report.discrepancy.max()))
