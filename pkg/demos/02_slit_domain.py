#!/usr/bin/env python3
# A square cut along a segment: two-sided boundary pieces and face-aware
# measures.
#
# The slit square is the square with corners (1,1), (-1,1), (-1,-1), (1,-1)
# cut along [-1/2, 1/2] on the real axis.  Points of the outer square are
# one-sided (the domain fills one side); interior slit points are two-sided
# (the domain touches them from above and below), and each side is an
# addressable boundary face.

import numpy as np

from harmcross import (
    BoundaryArc,
    BoundarySet,
    GridConfig,
    WosConfig,
    classify_point,
    find_extendible_points,
    grid_measure,
    nearest_boundary,
    wos_measure,
)
from harmcross.fixtures import slit_faces, slit_square

square = slit_square()

print("boundary classification:")
for z in (0.0 + 0.0j, 1.0 + 0.37j):
    print(f"  {z}: {classify_point(square, z, 1e-6).value}")

nb = nearest_boundary(square, 0.3j)
print(f"\nnearest boundary to 0.3i: {nb.curve_id} at distance {nb.distance:.3f}, "
      f"face {nb.side!r}")

# the set: both faces of (-1/4, 1/4), written as two single-face arcs
# (slit parameters run from x = -1/2 at 0 to x = 1/2 at 1)
faces = slit_faces(0.25, 0.75)
print(f"\nboth faces of (-1/4, 1/4): total length {faces.total_length}")

field = grid_measure(square, faces, GridConfig(spacing=1 / 128), [0.5j, -0.5j, 0.9 + 0.9j])
print("grid measure at 0.5i, -0.5i, 0.9+0.9i:", np.round(field.values, 6))
print("(the data is mirror symmetric, so the first two agree)")

# a single face makes the two sides of the slit genuinely different: walks
# started above the slit hit the upper face far more often
upper_only = BoundarySet([BoundaryArc("slit:0", 0.25, 0.75, "plus")])
walk = wos_measure(square, upper_only, WosConfig(samples=30_000, seed=2), [0.3j, -0.3j])
print(f"\nupper face only: measure above the slit {walk.values[0]:.4f}, "
      f"below {walk.values[1]:.4f}")

# through which sub-arcs could two-sided extension cross?  Full coverage of
# both faces qualifies; poke a hole of length 0.1 in it and nothing does.
print("\nextendible sub-arcs with full coverage:",
      len(find_extendible_points(square, faces)))
holed = BoundarySet(
    [BoundaryArc("slit:0", 0.25, 0.55, "plus"), BoundaryArc("slit:0", 0.25, 0.55, "minus"),
     BoundaryArc("slit:0", 0.65, 0.75, "plus"), BoundaryArc("slit:0", 0.65, 0.75, "minus")]
)
print("after removing a length-0.1 gap:", len(find_extendible_points(square, holed)))
