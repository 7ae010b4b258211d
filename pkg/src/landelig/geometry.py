"""Planar geometry kernel.

Points, lines and polygons in SRS units, plus the grid-coupled operations
the exclusion engine is built on: densification, set-distance buffering,
area, point-in-polygon tests and polygonization of boolean grids.

Buffering is realized as fine-grid rasterization followed by an exact
Euclidean distance transform and polygonization. The fine pixel is chosen
small enough that every classification error stays inside the caller's
arc tolerance band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import (
    EmptyGeometry,
    InvalidRing,
    NegativeDistance,
    NonPositiveSegment,
)

__all__ = [
    "Extent",
    "Geometry",
    "point",
    "multipoint",
    "linestring",
    "multilinestring",
    "polygon",
    "multipolygon",
    "box",
    "map_coords",
    "segmentize",
    "envelope",
    "polygon_area",
    "point_in_polygon",
    "points_in_geometry",
    "polygonize",
    "buffer",
]

_POINT_KINDS = ("Point", "MultiPoint")
_LINE_KINDS = ("LineString", "MultiLineString")
_AREA_KINDS = ("Polygon", "MultiPolygon")


@dataclass(frozen=True)
class Extent:
    """Axis-aligned bounding rectangle in SRS units."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.x_min, self.y_min, self.x_max, self.y_max))):
            raise ValueError("extent coordinates must be finite")
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("extent has min > max")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def intersects(self, other: "Extent") -> bool:
        return not (
            self.x_max < other.x_min
            or other.x_max < self.x_min
            or self.y_max < other.y_min
            or other.y_max < self.y_min
        )

    def intersection(self, other: "Extent") -> "Extent | None":
        if not self.intersects(other):
            return None
        return Extent(
            max(self.x_min, other.x_min),
            max(self.y_min, other.y_min),
            min(self.x_max, other.x_max),
            min(self.y_max, other.y_max),
        )

    def padded(self, d: float) -> "Extent":
        return Extent(self.x_min - d, self.y_min - d, self.x_max + d, self.y_max + d)

    def union(self, other: "Extent") -> "Extent":
        return Extent(
            min(self.x_min, other.x_min),
            min(self.y_min, other.y_min),
            max(self.x_max, other.x_max),
            max(self.y_max, other.y_max),
        )


def _as_coords(seq, min_points: int) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < min_points:
        raise ValueError("expected an (N, 2) coordinate sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def _ring_signed_area(ring: np.ndarray) -> float:
    x, y = ring[:-1, 0], ring[:-1, 1]
    xn, yn = ring[1:, 0], ring[1:, 1]
    return 0.5 * float(np.sum(x * yn - xn * y))


def _normalize_ring(seq, want_ccw: bool) -> np.ndarray:
    ring = _as_coords(seq, 3)
    if not np.array_equal(ring[0], ring[-1]):
        ring = np.vstack([ring, ring[:1]])
    if ring.shape[0] < 4:
        raise InvalidRing("ring needs at least 3 distinct vertices")
    area = _ring_signed_area(ring)
    if area == 0.0:
        raise InvalidRing("ring has zero area")
    if (area > 0) != want_ccw:
        ring = ring[::-1].copy()
    return ring


class Geometry:
    """Immutable geometry value: point, line or polygon (and Multi* forms).

    Polygons are stored as tuples of closed rings, exterior first and
    counter-clockwise, holes clockwise. Construction normalizes ring
    closure and orientation and rejects non-finite coordinates.
    """

    __slots__ = ("kind", "data")

    def __init__(self, kind: str, data):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *_):
        raise AttributeError("Geometry is immutable")

    def __repr__(self):
        return f"Geometry({self.kind}, {self.vertex_count} vertices)"

    @property
    def is_empty(self) -> bool:
        return len(self.data) == 0 if isinstance(self.data, tuple) else self.data.size == 0

    @property
    def vertex_count(self) -> int:
        return sum(len(c) for c in coord_arrays(self))

    @property
    def has_area(self) -> bool:
        return self.kind in _AREA_KINDS


def point(x: float, y: float) -> Geometry:
    return Geometry("Point", _as_coords([(x, y)], 1)[0])


def multipoint(coords) -> Geometry:
    return Geometry("MultiPoint", _as_coords(coords, 1))


def linestring(coords) -> Geometry:
    return Geometry("LineString", _as_coords(coords, 2))


def multilinestring(lines) -> Geometry:
    return Geometry("MultiLineString", tuple(_as_coords(l, 2) for l in lines))


def polygon(shell, holes=()) -> Geometry:
    rings = [_normalize_ring(shell, want_ccw=True)]
    rings.extend(_normalize_ring(h, want_ccw=False) for h in holes)
    return Geometry("Polygon", tuple(rings))


def multipolygon(polys) -> Geometry:
    parts = []
    for p in polys:
        if isinstance(p, Geometry):
            if p.kind != "Polygon":
                raise ValueError("multipolygon parts must be polygons")
            parts.append(p.data)
        else:
            shell, *holes = p
            parts.append(polygon(shell, holes).data)
    return Geometry("MultiPolygon", tuple(parts))


def box(ext: Extent) -> Geometry:
    return polygon(
        [
            (ext.x_min, ext.y_min),
            (ext.x_max, ext.y_min),
            (ext.x_max, ext.y_max),
            (ext.x_min, ext.y_max),
        ]
    )


def coord_arrays(g: Geometry):
    """Yield every coordinate array of a geometry (rings, lines, points)."""
    if g.kind == "Point":
        yield g.data.reshape(1, 2)
    elif g.kind in ("MultiPoint", "LineString"):
        yield g.data
    elif g.kind == "MultiLineString":
        yield from g.data
    elif g.kind == "Polygon":
        yield from g.data
    elif g.kind == "MultiPolygon":
        for rings in g.data:
            yield from rings


def iter_polygons(g: Geometry):
    """Yield ring tuples for each polygon part of an area geometry."""
    if g.kind == "Polygon":
        yield g.data
    elif g.kind == "MultiPolygon":
        yield from g.data


def iter_segments(g: Geometry):
    """Yield (ax, ay, bx, by) arrays per line/ring part."""
    if g.kind in _POINT_KINDS:
        return
    for arr in coord_arrays(g):
        yield arr[:-1], arr[1:]


def map_coords(g: Geometry, fn) -> Geometry:
    """Rebuild a geometry with every coordinate array passed through fn."""

    def conv(arr):
        out = np.asarray(fn(arr), dtype=np.float64)
        if out.shape != arr.shape:
            raise ValueError("coordinate mapping must preserve shape")
        return out

    if g.kind == "Point":
        return Geometry("Point", conv(g.data.reshape(1, 2))[0])
    if g.kind in ("MultiPoint", "LineString"):
        return Geometry(g.kind, conv(g.data))
    if g.kind == "MultiLineString":
        return Geometry(g.kind, tuple(conv(a) for a in g.data))
    if g.kind == "Polygon":
        return polygon(conv(g.data[0]), [conv(r) for r in g.data[1:]])
    if g.kind == "MultiPolygon":
        return multipolygon(
            [[conv(rings[0])] + [conv(r) for r in rings[1:]] for rings in g.data]
        )
    raise ValueError(f"unknown geometry kind {g.kind!r}")


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------

def envelope(g: Geometry) -> Extent:
    """Tight axis-aligned bounds over all vertices."""
    arrays = list(coord_arrays(g))
    if not arrays or all(a.size == 0 for a in arrays):
        raise EmptyGeometry("cannot compute the envelope of an empty geometry")
    stacked = np.vstack(arrays)
    return Extent(
        float(stacked[:, 0].min()),
        float(stacked[:, 1].min()),
        float(stacked[:, 0].max()),
        float(stacked[:, 1].max()),
    )


def _segmentize_part(arr: np.ndarray, max_segment: float) -> np.ndarray:
    pieces = [arr[:1]]
    for k in range(len(arr) - 1):
        a, b = arr[k], arr[k + 1]
        length = math.hypot(b[0] - a[0], b[1] - a[1])
        n = max(1, math.ceil(length / max_segment - 1e-12))
        ts = np.linspace(0.0, 1.0, n + 1)[1:]
        pieces.append(a + ts[:, None] * (b - a))
    return np.vstack(pieces)


def segmentize(g: Geometry, max_segment: float) -> Geometry:
    """Insert vertices so that no edge is longer than max_segment.

    Original vertices are preserved; inserted vertices lie exactly on the
    original segments, so length and area are unchanged up to rounding.
    """
    if not (max_segment > 0):
        raise NonPositiveSegment("max_segment must be > 0")
    if g.kind in _POINT_KINDS:
        return g
    return map_coords(g, lambda arr: _segmentize_part(arr, max_segment))


def polygon_area(g: Geometry) -> float:
    """Shoelace area of a polygon or multipolygon, holes subtracted."""
    if g.kind not in _AREA_KINDS:
        raise InvalidRing(f"area is defined for polygons, not {g.kind}")
    total = 0.0
    for rings in iter_polygons(g):
        for ring in rings:
            total += _ring_signed_area(ring)  # holes are CW, hence negative
    return max(total, 0.0)


def _points_in_rings(px: np.ndarray, py: np.ndarray, rings) -> np.ndarray:
    """Even-odd test of many points against one polygon's rings.

    Points exactly on a ring edge count as inside.
    """
    n = px.shape[0]
    inside = np.zeros(n, dtype=bool)
    on_edge = np.zeros(n, dtype=bool)
    for ring in rings:
        x1, y1 = ring[:-1, 0], ring[:-1, 1]
        x2, y2 = ring[1:, 0], ring[1:, 1]
        m = x1.shape[0]
        # chunk points so the (chunk x m) broadcasts stay small
        step = max(1, int(4_000_000 // max(m, 1)))
        for s in range(0, n, step):
            sl = slice(s, min(s + step, n))
            pxs = px[sl, None]
            pys = py[sl, None]
            dy = y2 - y1
            crosses = (y1[None, :] > pys) != (y2[None, :] > pys)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = x1[None, :] + (pys - y1[None, :]) * (x2 - x1)[None, :] / dy[None, :]
            hits = crosses & (pxs < xint)
            inside[sl] ^= (np.sum(hits, axis=1) % 2).astype(bool)
            cross = (x2 - x1)[None, :] * (pys - y1[None, :]) - dy[None, :] * (
                pxs - x1[None, :]
            )
            on_seg = (
                (cross == 0.0)
                & (pxs >= np.minimum(x1, x2)[None, :])
                & (pxs <= np.maximum(x1, x2)[None, :])
                & (pys >= np.minimum(y1, y2)[None, :])
                & (pys <= np.maximum(y1, y2)[None, :])
            )
            on_edge[sl] |= np.any(on_seg, axis=1)
    return inside | on_edge


def points_in_geometry(points, g: Geometry) -> np.ndarray:
    """Vectorized containment of (N, 2) points in an area geometry."""
    if g.kind not in _AREA_KINDS:
        raise InvalidRing(f"containment is defined for polygons, not {g.kind}")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    result = np.zeros(pts.shape[0], dtype=bool)
    for rings in iter_polygons(g):
        result |= _points_in_rings(pts[:, 0], pts[:, 1], rings)
    return result


def point_in_polygon(pt, g: Geometry) -> bool:
    """Even-odd containment test; boundary points count as inside."""
    return bool(points_in_geometry(np.asarray(pt, dtype=np.float64).reshape(1, 2), g)[0])


# ---------------------------------------------------------------------------
# Grid coupling: touch rasterization, polygonization, buffering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridFrame:
    """Minimal pixel-grid georeference: top-left anchor plus pixel size."""

    x_min: float
    y_max: float
    dx: float
    dy: float
    nx: int
    ny: int


def _closed_index_range(f_lo: float, f_hi: float, n: int) -> tuple[int, int]:
    """Inclusive pixel index range whose closed footprints meet [f_lo, f_hi].

    Inputs are in pixel units relative to the grid origin. A value sitting
    exactly on a pixel boundary touches the pixels on both sides.
    """
    i0 = math.floor(f_lo)
    if f_lo == i0:
        i0 -= 1
    i1 = math.floor(f_hi)
    i0 = max(i0, 0)
    i1 = min(i1, n - 1)
    return i0, i1


def _mark_point(mask: np.ndarray, frame: GridFrame, x: float, y: float) -> None:
    fx = (x - frame.x_min) / frame.dx
    fy = (frame.y_max - y) / frame.dy
    j0, j1 = _closed_index_range(fx, fx, frame.nx)
    i0, i1 = _closed_index_range(fy, fy, frame.ny)
    if j0 <= j1 and i0 <= i1:
        mask[i0 : i1 + 1, j0 : j1 + 1] = True


def _mark_segment(mask: np.ndarray, frame: GridFrame, a, b) -> None:
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if ax == bx and ay == by:
        _mark_point(mask, frame, ax, ay)
        return
    fx_lo = (min(ax, bx) - frame.x_min) / frame.dx
    fx_hi = (max(ax, bx) - frame.x_min) / frame.dx
    j0, j1 = _closed_index_range(fx_lo, fx_hi, frame.nx)
    if j0 > j1:
        return
    for j in range(j0, j1 + 1):
        cx0 = frame.x_min + j * frame.dx
        cx1 = cx0 + frame.dx
        if ax == bx:
            y_lo, y_hi = min(ay, by), max(ay, by)
        else:
            t0 = (cx0 - ax) / (bx - ax)
            t1 = (cx1 - ax) / (bx - ax)
            t_lo = max(min(t0, t1), 0.0)
            t_hi = min(max(t0, t1), 1.0)
            if t_lo > t_hi:
                continue
            ya = ay + t_lo * (by - ay)
            yb = ay + t_hi * (by - ay)
            y_lo, y_hi = min(ya, yb), max(ya, yb)
        fy_lo = (frame.y_max - y_hi) / frame.dy
        fy_hi = (frame.y_max - y_lo) / frame.dy
        i0, i1 = _closed_index_range(fy_lo, fy_hi, frame.ny)
        if i0 <= i1:
            mask[i0 : i1 + 1, j] = True


def touch_mask(g: Geometry, frame: GridFrame) -> np.ndarray:
    """Boolean grid of pixels whose closed footprint intersects a geometry."""
    mask = np.zeros((frame.ny, frame.nx), dtype=bool)
    if g.kind == "Point":
        _mark_point(mask, frame, g.data[0], g.data[1])
    elif g.kind == "MultiPoint":
        for x, y in g.data:
            _mark_point(mask, frame, x, y)
    else:
        for starts, ends in iter_segments(g):
            for a, b in zip(starts, ends):
                _mark_segment(mask, frame, a, b)
    if g.has_area:
        # pixels fully interior to a polygon have no boundary crossing;
        # their centers are inside
        xs = frame.x_min + (np.arange(frame.nx) + 0.5) * frame.dx
        ys = frame.y_max - (np.arange(frame.ny) + 0.5) * frame.dy
        gx, gy = np.meshgrid(xs, ys)
        centers = np.column_stack([gx.ravel(), gy.ravel()])
        mask |= points_in_geometry(centers, g).reshape(frame.ny, frame.nx)
    return mask


_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)

# directed boundary edges keep the component interior on the walk's left;
# directions are (dcol, drow) steps on the corner lattice
_RIGHT_TURN = {(1, 0): (0, 1), (0, 1): (-1, 0), (-1, 0): (0, -1), (0, -1): (1, 0)}
_LEFT_TURN = {v: k for k, v in _RIGHT_TURN.items()}


def _component_edges(comp: np.ndarray):
    """Directed boundary edges of a cell set, interior kept on the left."""
    pad = np.pad(comp, 1)
    ii, jj = np.nonzero(comp)
    edges = {}

    def add(start, dirn):
        edges.setdefault(start, []).append(dirn)

    open_n = comp & ~pad[:-2, 1:-1]
    open_s = comp & ~pad[2:, 1:-1]
    open_w = comp & ~pad[1:-1, :-2]
    open_e = comp & ~pad[1:-1, 2:]
    for i, j in zip(ii, jj):
        if open_n[i, j]:
            add((j + 1, i), (-1, 0))
        if open_s[i, j]:
            add((j, i + 1), (1, 0))
        if open_w[i, j]:
            add((j, i), (0, 1))
        if open_e[i, j]:
            add((j + 1, i + 1), (0, -1))
    return edges


def _walk_rings(edges):
    """Chain directed edges into closed corner rings.

    Where two outgoing edges meet at a corner the walk prefers the right
    turn, which merges pinched boundaries into a single self-touching ring
    and so keeps one exterior ring per connected component.
    """
    rings = []
    while edges:
        start = None
        for corner, outs in edges.items():
            if len(outs) == 1:
                start = corner
                break
        if start is None:
            start = next(iter(edges))
        dirn = edges[start][-1]
        ring = [start]
        corner = start
        while True:
            outs = edges.get(corner)
            if len(outs) == 1:
                step = outs[0]
                del edges[corner]
            else:
                for cand in (_RIGHT_TURN[dirn], dirn, _LEFT_TURN[dirn]):
                    if cand in outs:
                        step = cand
                        break
                outs.remove(step)
            corner = (corner[0] + step[0], corner[1] + step[1])
            if step == dirn and len(ring) > 1:
                ring[-1] = corner  # extend the straight run
            else:
                ring.append(corner)
            dirn = step
            if corner == start:
                break
        if ring[0] != ring[-1]:
            ring.append(ring[0])
        # merge a collinear seam across the start corner
        if len(ring) > 3:
            d_last = (ring[-1][0] - ring[-2][0], ring[-1][1] - ring[-2][1])
            d_first = (ring[1][0] - ring[0][0], ring[1][1] - ring[0][1])
            dl = (d_last[0] and d_last[0] // abs(d_last[0]), d_last[1] and d_last[1] // abs(d_last[1]))
            df = (d_first[0] and d_first[0] // abs(d_first[0]), d_first[1] and d_first[1] // abs(d_first[1]))
            if dl == df:
                ring = ring[1:-1] + [ring[1]]
        rings.append(ring)
    return rings


def polygonize(grid: np.ndarray, georef) -> Geometry:
    """Trace contiguous true regions of a boolean grid into polygons.

    One polygon per 4-connected component; boundaries follow pixel edges,
    so rasterizing the result at the same georeference reproduces the
    input exactly. An all-false grid yields an empty multipolygon.

    georef needs x_min, y_max, dx and dy attributes.
    """
    grid = np.asarray(grid, dtype=bool)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    labels, count = ndimage.label(grid, structure=_FOUR_CONNECTED)
    if count == 0:
        return Geometry("MultiPolygon", ())
    x0, y0 = georef.x_min, georef.y_max
    dx, dy = georef.dx, georef.dy
    polys = []
    slices = ndimage.find_objects(labels)
    for idx, sl in enumerate(slices, start=1):
        comp = labels[sl] == idx
        row_off, col_off = sl[0].start, sl[1].start
        rings = _walk_rings(_component_edges(comp))
        shells, holes = [], []
        for ring in rings:
            coords = np.array(
                [
                    (x0 + (col_off + c) * dx, y0 - (row_off + r) * dy)
                    for c, r in ring
                ]
            )
            if _ring_signed_area(coords) > 0:
                shells.append(coords)
            else:
                holes.append(coords)
        if len(shells) == 1:
            polys.append(polygon(shells[0], holes))
        else:
            # defensive: attach each hole to the smallest shell whose
            # envelope contains it
            shells.sort(key=lambda s: abs(_ring_signed_area(s)))
            grouped = {id(s): [] for s in shells}
            for h in holes:
                hx, hy = h[:, 0], h[:, 1]
                for s in shells:
                    if (
                        s[:, 0].min() <= hx.min()
                        and s[:, 0].max() >= hx.max()
                        and s[:, 1].min() <= hy.min()
                        and s[:, 1].max() >= hy.max()
                    ):
                        grouped[id(s)].append(h)
                        break
            for s in shells:
                polys.append(polygon(s, grouped[id(s)]))
    return multipolygon(polys)


def buffer(g: Geometry, dist: float, arc_tolerance: float = 1.0) -> Geometry:
    """All points within dist of a geometry, as a multipolygon.

    The result is a pixel-edge polygon from a fine grid chosen so that
    membership is correct everywhere except within +-arc_tolerance of the
    exact buffer boundary. A zero distance returns polygons unchanged and
    collapses points and lines to an empty multipolygon, since they bound
    no area.
    """
    if dist < 0:
        raise NegativeDistance("buffer distance must be >= 0")
    if not (arc_tolerance > 0):
        raise ValueError("arc_tolerance must be > 0")
    if dist == 0:
        if g.kind == "Polygon":
            return Geometry("MultiPolygon", (g.data,))
        if g.kind == "MultiPolygon":
            return g
        return Geometry("MultiPolygon", ())
    # worst-case center-vs-set discretization error is p*sqrt(2), so keep
    # the fine pixel under arc_tolerance/sqrt(2)
    p = arc_tolerance * 0.7
    env = envelope(g)
    pad = dist + 3 * p
    x0 = math.floor((env.x_min - pad) / p) * p
    y1 = math.ceil((env.y_max + pad) / p) * p
    nx = max(1, math.ceil((env.x_max + pad - x0) / p))
    ny = max(1, math.ceil((y1 - (env.y_min - pad)) / p))
    frame = GridFrame(x_min=x0, y_max=y1, dx=p, dy=p, nx=nx, ny=ny)
    marked = touch_mask(g, frame)
    dt = ndimage.distance_transform_edt(~marked, sampling=p)
    return polygonize(dt <= dist, frame)
