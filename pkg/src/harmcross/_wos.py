"""Walk-on-spheres engine: exit-point sampling for harmonic measure.

Walks step by maximal inscribed circles until they enter an epsilon shell
of the boundary, then terminate at the nearest boundary point.  On slits
the face is attributed from the approach direction at the final step (the
sign of the cross product of the slit tangent with the offset from the
foot); the attribution bias is O(epsilon_shell).

Randomness is counter-based: the angle of walk ``s`` from point ``p`` at
step ``k`` is a pure function of (seed, p, s, k, retry round), so fields
are bitwise reproducible for any thread count, and batching is an
internal detail that never changes the stream.

Distances are served by a coarse node field (a valid lower bound, since
the distance function is 1-Lipschitz) with exact candidate-list queries
near the boundary; the inner loop is compiled with numba.
"""

from __future__ import annotations

import hashlib
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import StepBudgetExceededError
from .geometry import PlanarDomain, as_xy

_RETRY_CAP = 3

_accel_lock = threading.Lock()
_accel_cache: "OrderedDict[str, _DistanceAccel]" = OrderedDict()
_exit_lock = threading.Lock()
_exit_cache: "OrderedDict[tuple, ExitSample]" = OrderedDict()

# splitmix64 constants; per-field odd multipliers decorrelate the key parts
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLD = np.uint64(0x9E3779B97F4A7C15)
_KPOINT = np.uint64(0xD1342543DE82EF95)
_KSAMPLE = np.uint64(0xAF251AF3B0F025B5)
_KRETRY = np.uint64(0x9E6C63D0876A9A75)
_INV53 = 1.0 / 9007199254740992.0
_TWO_PI = 6.283185307179586


@njit(cache=True, nogil=True)
def _mix64(z):
    z = (z ^ (z >> _U30)) * _M1
    z = (z ^ (z >> _U27)) * _M2
    return z ^ (z >> _U31)


@njit(cache=True, nogil=True)
def _seg_min_dist(px, py, sax, say, sbx, sby, out):
    for i in range(px.shape[0]):
        best = 1e300
        for s in range(sax.shape[0]):
            abx = sbx[s] - sax[s]
            aby = sby[s] - say[s]
            ab2 = abx * abx + aby * aby
            if ab2 == 0.0:
                ab2 = 1.0
            t = ((px[i] - sax[s]) * abx + (py[i] - say[s]) * aby) / ab2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = px[i] - (sax[s] + t * abx)
            dy = py[i] - (say[s] + t * aby)
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
        out[i] = np.sqrt(best)


@njit(cache=True, nogil=True)
def _count_candidates(cx, cy, sax, say, sbx, sby, thresh, counts):
    for i in range(cx.shape[0]):
        lim = thresh[i] * thresh[i]
        c = 0
        for s in range(sax.shape[0]):
            abx = sbx[s] - sax[s]
            aby = sby[s] - say[s]
            ab2 = abx * abx + aby * aby
            if ab2 == 0.0:
                ab2 = 1.0
            t = ((cx[i] - sax[s]) * abx + (cy[i] - say[s]) * aby) / ab2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = cx[i] - (sax[s] + t * abx)
            dy = cy[i] - (say[s] + t * aby)
            if dx * dx + dy * dy <= lim:
                c += 1
        counts[i] = c


@njit(cache=True, nogil=True)
def _fill_candidates(cx, cy, sax, say, sbx, sby, thresh, cand, dead):
    for i in range(cx.shape[0]):
        lim = thresh[i] * thresh[i]
        c = 0
        for s in range(sax.shape[0]):
            abx = sbx[s] - sax[s]
            aby = sby[s] - say[s]
            ab2 = abx * abx + aby * aby
            if ab2 == 0.0:
                ab2 = 1.0
            t = ((cx[i] - sax[s]) * abx + (cy[i] - say[s]) * aby) / ab2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = cx[i] - (sax[s] + t * abx)
            dy = cy[i] - (say[s] + t * aby)
            if dx * dx + dy * dy <= lim:
                cand[i, c] = s
                c += 1
        for k in range(c, cand.shape[1]):
            dead[i, k] = True


@njit(cache=True, nogil=True)
def _walk_kernel(startx, starty, sample_ids, seed, point_idx, retry, eps, max_steps,
                 node_d, gx0, gy0, cell, ncx, ncy,
                 row_of_cell, cand, cax, cay, cabx, caby, cab2, cdead,
                 sax, say, sbx, sby,
                 out_seg, out_t, out_side):
    n = sample_ids.shape[0]
    eps2 = eps * eps
    for w in range(n):
        z = _mix64(np.uint64(seed) + _GOLD)
        z = _mix64(z ^ (np.uint64(point_idx) + np.uint64(1)) * _KPOINT)
        z = _mix64(z ^ (np.uint64(sample_ids[w]) + np.uint64(1)) * _KSAMPLE)
        base = _mix64(z ^ (np.uint64(retry) + np.uint64(1)) * _KRETRY)

        px = startx
        py = starty
        found = np.int64(-1)
        t_found = 0.0
        side_found = np.int8(0)
        for step in range(max_steps):
            fi = (px - gx0) / cell
            fj = (py - gy0) / cell
            ii = int(np.floor(fi))
            jj = int(np.floor(fj))
            if ii < 0:
                ii = 0
            elif ii > ncx - 1:
                ii = ncx - 1
            if jj < 0:
                jj = 0
            elif jj > ncy - 1:
                jj = ncy - 1
            bound = -1e300
            for dj in range(2):
                for di in range(2):
                    cxn = gx0 + cell * (ii + di)
                    cyn = gy0 + cell * (jj + dj)
                    ddx = px - cxn
                    ddy = py - cyn
                    v = node_d[jj + dj, ii + di] - np.sqrt(ddx * ddx + ddy * ddy)
                    if v > bound:
                        bound = v
            r = bound
            if bound < eps:
                row = row_of_cell[jj, ii]
                best_d2 = 1e300
                best_t = 0.0
                best_seg = np.int64(-1)
                if row >= 0:
                    for k in range(cand.shape[1]):
                        if cdead[row, k]:
                            break
                        t = ((px - cax[row, k]) * cabx[row, k] + (py - cay[row, k]) * caby[row, k]) / cab2[row, k]
                        if t < 0.0:
                            t = 0.0
                        elif t > 1.0:
                            t = 1.0
                        dx = px - (cax[row, k] + t * cabx[row, k])
                        dy = py - (cay[row, k] + t * caby[row, k])
                        d2 = dx * dx + dy * dy
                        if d2 < best_d2:
                            best_d2 = d2
                            best_t = t
                            best_seg = cand[row, k]
                else:
                    for s in range(sax.shape[0]):
                        abx = sbx[s] - sax[s]
                        aby = sby[s] - say[s]
                        ab2 = abx * abx + aby * aby
                        if ab2 == 0.0:
                            ab2 = 1.0
                        t = ((px - sax[s]) * abx + (py - say[s]) * aby) / ab2
                        if t < 0.0:
                            t = 0.0
                        elif t > 1.0:
                            t = 1.0
                        dx = px - (sax[s] + t * abx)
                        dy = py - (say[s] + t * aby)
                        d2 = dx * dx + dy * dy
                        if d2 < best_d2:
                            best_d2 = d2
                            best_t = t
                            best_seg = np.int64(s)
                if best_d2 < eps2:
                    found = best_seg
                    t_found = best_t
                    abx = sbx[best_seg] - sax[best_seg]
                    aby = sby[best_seg] - say[best_seg]
                    footx = sax[best_seg] + best_t * abx
                    footy = say[best_seg] + best_t * aby
                    cross = abx * (py - footy) - aby * (px - footx)
                    side_found = np.int8(1) if cross > 0.0 else np.int8(-1)
                    break
                r = np.sqrt(best_d2)
            u = _mix64(base + (np.uint64(step) + np.uint64(1)) * _GOLD)
            theta = _TWO_PI * ((u >> _U11) * _INV53)
            px += r * np.cos(theta)
            py += r * np.sin(theta)
        out_seg[w] = found
        out_t[w] = t_found
        out_side[w] = side_found


@dataclass
class ExitSample:
    """Exit records for all walks from a batch of start points."""

    points: np.ndarray       # (m, 2) start points
    curve: np.ndarray        # (m, samples) curve index of the exit piece
    param: np.ndarray        # (m, samples) arc-length parameter of the exit foot
    side: np.ndarray         # (m, samples) +1 / -1 face sign
    resampled: int           # walks that had to be rerun for step budget


class _DistanceAccel:
    """Coarse lower-bound distance field plus per-cell candidate segments.

    The corner-anchored bound max_c(d(c) - |z - c|) never exceeds the true
    distance because the distance field is 1-Lipschitz; cells near the
    boundary carry candidate segment lists wide enough to contain the
    nearest segment of any query issued there.
    """

    def __init__(self, domain: PlanarDomain, resolution: int = 160):
        self.domain = domain
        self.sax = np.ascontiguousarray(domain._seg_a[:, 0])
        self.say = np.ascontiguousarray(domain._seg_a[:, 1])
        self.sbx = np.ascontiguousarray(domain._seg_b[:, 0])
        self.sby = np.ascontiguousarray(domain._seg_b[:, 1])

        xmin, xmax, ymin, ymax = domain.bbox
        w, hgt = xmax - xmin, ymax - ymin
        cell = max(w, hgt) / resolution
        self.cell = cell
        self.x0 = xmin - 2 * cell
        self.y0 = ymin - 2 * cell
        self.ncx = int(np.ceil(w / cell)) + 4   # cells per axis
        self.ncy = int(np.ceil(hgt / cell)) + 4
        xs = self.x0 + cell * np.arange(self.ncx + 1)
        ys = self.y0 + cell * np.arange(self.ncy + 1)
        gx, gy = np.meshgrid(xs, ys)
        nodes_x = np.ascontiguousarray(gx.ravel())
        nodes_y = np.ascontiguousarray(gy.ravel())
        d = np.empty(len(nodes_x))
        _seg_min_dist(nodes_x, nodes_y, self.sax, self.say, self.sbx, self.sby, d)
        self.node_d = np.ascontiguousarray(d.reshape(self.ncy + 1, self.ncx + 1))

        diag = cell * np.sqrt(2.0)
        corner_min = np.minimum.reduce(
            [self.node_d[:-1, :-1], self.node_d[:-1, 1:], self.node_d[1:, :-1], self.node_d[1:, 1:]]
        )
        near_j, near_i = np.nonzero(corner_min < 2.5 * diag)
        self.row_of_cell = np.full((self.ncy, self.ncx), -1, dtype=np.int64)
        self.row_of_cell[near_j, near_i] = np.arange(len(near_j))

        cx = np.ascontiguousarray(self.x0 + cell * (near_i + 0.5))
        cy = np.ascontiguousarray(self.y0 + cell * (near_j + 0.5))
        dmin = np.empty(len(cx))
        _seg_min_dist(cx, cy, self.sax, self.say, self.sbx, self.sby, dmin)
        thresh = dmin + 2.5 * diag
        counts = np.empty(len(cx), dtype=np.int64)
        _count_candidates(cx, cy, self.sax, self.say, self.sbx, self.sby, thresh, counts)
        width = max(1, int(counts.max())) if len(counts) else 1
        self.cand = np.zeros((len(cx), width), dtype=np.int64)
        self.cdead = np.zeros((len(cx), width), dtype=np.bool_)
        _fill_candidates(cx, cy, self.sax, self.say, self.sbx, self.sby, thresh, self.cand, self.cdead)

        a = domain._seg_a[self.cand]
        ab = domain._seg_b[self.cand] - a
        self.cax = np.ascontiguousarray(a[:, :, 0])
        self.cay = np.ascontiguousarray(a[:, :, 1])
        self.cabx = np.ascontiguousarray(ab[:, :, 0])
        self.caby = np.ascontiguousarray(ab[:, :, 1])
        ab2 = self.cabx**2 + self.caby**2
        self.cab2 = np.where(ab2 == 0.0, 1.0, ab2)


def _accel_for(domain: PlanarDomain) -> _DistanceAccel:
    key = domain.content_key()
    with _accel_lock:
        if key in _accel_cache:
            _accel_cache.move_to_end(key)
            return _accel_cache[key]
    accel = _DistanceAccel(domain)
    with _accel_lock:
        _accel_cache[key] = accel
        while len(_accel_cache) > 6:
            _accel_cache.popitem(last=False)
    return accel


def sample_exits(domain: PlanarDomain, points, samples: int, seed: int, epsilon_shell: float,
                 max_steps: int, n_threads: int = 1) -> ExitSample:
    """Exit records for `samples` walks from each start point."""
    pts = as_xy(points)
    inside = domain.contains(pts)
    if not inside.all():
        bad = np.flatnonzero(~inside)
        raise ValueError(f"start points not interior to the domain at indices {bad.tolist()}")
    accel = _accel_for(domain)
    seed_u = int(seed) & (2**64 - 1)

    m = len(pts)
    curve = np.empty((m, samples), dtype=np.int64)
    param = np.empty((m, samples))
    side = np.empty((m, samples), dtype=np.int8)
    resampled = np.zeros(m, dtype=np.int64)

    def run_point(pi):
        out_seg = np.empty(samples, dtype=np.int64)
        out_t = np.empty(samples)
        out_side = np.empty(samples, dtype=np.int8)
        ids = np.arange(samples, dtype=np.int64)
        _walk_kernel(
            pts[pi, 0], pts[pi, 1], ids, seed_u, pi, 0, epsilon_shell, max_steps,
            accel.node_d, accel.x0, accel.y0, accel.cell, accel.ncx, accel.ncy,
            accel.row_of_cell, accel.cand, accel.cax, accel.cay, accel.cabx, accel.caby,
            accel.cab2, accel.cdead, accel.sax, accel.say, accel.sbx, accel.sby,
            out_seg, out_t, out_side,
        )
        pending = np.flatnonzero(out_seg < 0)
        retry = 0
        while len(pending) and retry < _RETRY_CAP:
            retry += 1
            resampled[pi] += len(pending)
            seg2 = np.empty(len(pending), dtype=np.int64)
            t2 = np.empty(len(pending))
            side2 = np.empty(len(pending), dtype=np.int8)
            _walk_kernel(
                pts[pi, 0], pts[pi, 1], pending.astype(np.int64), seed_u, pi, retry,
                epsilon_shell, max_steps,
                accel.node_d, accel.x0, accel.y0, accel.cell, accel.ncx, accel.ncy,
                accel.row_of_cell, accel.cand, accel.cax, accel.cay, accel.cabx, accel.caby,
                accel.cab2, accel.cdead, accel.sax, accel.say, accel.sbx, accel.sby,
                seg2, t2, side2,
            )
            out_seg[pending] = seg2
            out_t[pending] = t2
            out_side[pending] = side2
            pending = pending[seg2 < 0]
        if len(pending):
            raise StepBudgetExceededError(
                f"{len(pending)} walks from point {pi} exceeded {max_steps} steps "
                f"after {_RETRY_CAP} retries"
            )
        seg_len = domain._seg_len[out_seg]
        curve[pi] = domain._seg_curve[out_seg]
        param[pi] = domain._seg_t0[out_seg] + out_t * seg_len
        side[pi] = out_side

    if n_threads > 1 and m > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as ex:
            list(ex.map(run_point, range(m)))
    else:
        for pi in range(m):
            run_point(pi)
    return ExitSample(pts, curve, param, side, int(resampled.sum()))


def sample_exits_cached(domain, points, samples, seed, epsilon_shell, max_steps,
                        n_threads=1) -> ExitSample:
    pts = as_xy(points)
    key = (
        domain.content_key(),
        int(samples),
        int(seed),
        f"{epsilon_shell:.12e}",
        int(max_steps),
        hashlib.sha256(np.ascontiguousarray(pts).tobytes()).hexdigest(),
    )
    with _exit_lock:
        if key in _exit_cache:
            _exit_cache.move_to_end(key)
            return _exit_cache[key]
    res = sample_exits(domain, pts, samples, seed, epsilon_shell, max_steps, n_threads)
    with _exit_lock:
        _exit_cache[key] = res
        while len(_exit_cache) > 4:
            _exit_cache.popitem(last=False)
    return res


def clear_cache():
    with _accel_lock:
        _accel_cache.clear()
    with _exit_lock:
        _exit_cache.clear()
