"""Compiled boundary data: indicator of membership in a boundary set.

Shared by the grid and walk engines.  Dirichlet data for the measure of a
set A is 0 on A and 1 on the rest of the boundary, per face on slits.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateBoundarySetError, InvalidSetError
from .geometry import BoundarySet, PlanarDomain

SIDE_PLUS = 1
SIDE_MINUS = -1


class BoundaryIndicator:
    """Per-curve, per-face interval index answering 'is (curve, param, side) in A?'."""

    def __init__(self, domain: PlanarDomain, boundary_set: BoundarySet, require_positive=True):
        boundary_set.validate(domain)
        if require_positive and boundary_set.total_length <= 0.0:
            raise DegenerateBoundarySetError(
                "boundary set has zero length; the measure needs positive length"
            )
        self._plus = {}
        self._minus = {}
        for ci, cid in enumerate(domain.curve_ids):
            arcs = boundary_set.on_curve(cid)
            if not arcs:
                continue
            if cid.startswith("slit:") and any(a.side == "both" for a in arcs):
                raise InvalidSetError(
                    f"slit arcs in measure data must name a face, got side='both' on {cid}"
                )
            plus = sorted((a.t0, a.t1) for a in arcs if a.side in ("plus", "both"))
            minus = sorted((a.t0, a.t1) for a in arcs if a.side in ("minus", "both"))
            if plus:
                self._plus[ci] = np.array(plus, dtype=float).ravel()
            if minus:
                self._minus[ci] = np.array(minus, dtype=float).ravel()

    def contains(self, curve_idx, params, side_sign) -> np.ndarray:
        """Vectorized membership for exit records.

        ``side_sign`` is +1/-1 per entry (ignored by curves whose plus and
        minus tables coincide, i.e. one-sided pieces).
        """
        curve_idx = np.asarray(curve_idx)
        params = np.asarray(params, dtype=float)
        side_sign = np.asarray(side_sign)
        out = np.zeros(params.shape, dtype=bool)
        for ci in np.unique(curve_idx):
            m = curve_idx == ci
            for table, want in ((self._plus, SIDE_PLUS), (self._minus, SIDE_MINUS)):
                breaks = table.get(int(ci))
                if breaks is None:
                    continue
                sel = m & (side_sign == want)
                if sel.any():
                    out[sel] = (np.searchsorted(breaks, params[sel], side="right") % 2) == 1
        return out

    def dirichlet(self, curve_idx, params, side_sign) -> np.ndarray:
        """Boundary values: 0 on the set, 1 elsewhere."""
        return np.where(self.contains(curve_idx, params, side_sign), 0.0, 1.0)
