"""Planar polyline predicates: simplicity, winding number, distances."""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy.spatial.distance import directed_hausdorff


@njit(cache=True, nogil=True)
def _orient(ax, ay, bx, by, cx, cy):
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


@njit(cache=True, nogil=True)
def _on_segment(ax, ay, bx, by, cx, cy):
    # c collinear with ab: is it inside the bounding box?
    return min(ax, bx) <= cx <= max(ax, bx) and min(ay, by) <= cy <= max(ay, by)


@njit(cache=True, nogil=True)
def segments_intersect(ax, ay, bx, by, cx, cy, dx, dy):
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


@njit(cache=True, nogil=True)
def _cells(xs, ys, i, j, x0, y0, sx, sy, g):
    cx0 = min(g - 1, int((min(xs[i], xs[j]) - x0) * sx))
    cx1 = min(g - 1, int((max(xs[i], xs[j]) - x0) * sx))
    cy0 = min(g - 1, int((min(ys[i], ys[j]) - y0) * sy))
    cy1 = min(g - 1, int((max(ys[i], ys[j]) - y0) * sy))
    return cx0, cx1, cy0, cy1


@njit(cache=True, nogil=True)
def _first_crossing(xs, ys):
    n = xs.shape[0]
    if n < 4:
        return -1, -1
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    g = max(1, int(math.sqrt(n)))
    sx = g / max(x1 - x0, 1e-300)
    sy = g / max(y1 - y0, 1e-300)
    # bucket every closed-polyline segment into the grid cells its bbox covers
    counts = np.zeros(g * g + 1, dtype=np.int64)
    for i in range(n):
        cx0, cx1, cy0, cy1 = _cells(xs, ys, i, (i + 1) % n, x0, y0, sx, sy, g)
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                counts[cx * g + cy + 1] += 1
    for c in range(g * g):
        counts[c + 1] += counts[c]
    fill = counts[:-1].copy()
    items = np.empty(counts[g * g], dtype=np.int64)
    for i in range(n):
        cx0, cx1, cy0, cy1 = _cells(xs, ys, i, (i + 1) % n, x0, y0, sx, sy, g)
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                c = cx * g + cy
                items[fill[c]] = i
                fill[c] += 1
    for c in range(g * g):
        lo, hi = counts[c], counts[c + 1]
        for p in range(lo, hi):
            i = items[p]
            ia = (i + 1) % n
            for q in range(p + 1, hi):
                k = items[q]
                if k == i or k == ia or (k + 1) % n == i:
                    continue
                ka = (k + 1) % n
                if segments_intersect(xs[i], ys[i], xs[ia], ys[ia], xs[k], ys[k], xs[ka], ys[ka]):
                    return min(i, k), max(i, k)
    return -1, -1


def first_crossing(points) -> tuple[int, int] | None:
    """Indices of two crossing edges of the closed polyline, or None if it is simple.

    Edge i joins points[i] and points[i+1 mod n]; adjacent edges are not tested.
    """
    pts = np.asarray(points, dtype=complex)
    i, k = _first_crossing(np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag))
    return None if i < 0 else (int(i), int(k))


def is_simple(points) -> bool:
    return first_crossing(points) is None


def winding_number(points, about: complex = 0.0) -> int:
    """Winding number of the closed polyline around ``about``."""
    w = np.asarray(points, dtype=complex) - about
    if np.any(w == 0):
        raise ValueError("polyline passes through the reference point")
    turns = np.angle(np.roll(w, -1) / w)
    return int(round(float(turns.sum()) / (2 * math.pi)))


def max_spacing(points, closed: bool = True) -> float:
    pts = np.asarray(points, dtype=complex)
    d = np.abs(np.diff(pts))
    if closed and len(pts) > 1:
        d = np.append(d, abs(pts[0] - pts[-1]))
    return float(d.max()) if len(d) else 0.0


def point_set_hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two finite planar point sets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    return max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0])


def point_to_polyline(z, poly, closed: bool = True) -> np.ndarray:
    """Distance from each point of ``z`` to the polyline through ``poly``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a = np.asarray(poly, dtype=complex)
    if len(a) == 1:
        return np.abs(z - a[0])
    b = np.roll(a, -1) if closed else a[1:]
    if not closed:
        a = a[:-1]
    ab = b - a
    L2 = np.abs(ab) ** 2
    L2 = np.where(L2 == 0, 1.0, L2)
    t = ((z[:, None] - a[None, :]) * np.conj(ab)[None, :]).real / L2[None, :]
    t = np.clip(t, 0.0, 1.0)
    proj = a[None, :] + t * ab[None, :]
    return np.min(np.abs(z[:, None] - proj), axis=1)


def polyline_hausdorff(a, b, closed: bool = True) -> float:
    """Symmetric Hausdorff distance measured vertex-to-polyline in both directions."""
    return float(max(point_to_polyline(a, b, closed).max(), point_to_polyline(b, a, closed).max()))
