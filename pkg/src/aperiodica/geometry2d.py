"""Polygonal window prototiles, patch substitution and gap/overlap audits.

The fractal windows of the cubic inflation (x^3 - 3x^2 + 1) can be replaced
by three polygons with the same substitution combinatorics.  Their vertices
are star images of explicit ring elements, so placements stay exact; areas
and intersections are evaluated in floating point from certified vertex
coordinates (algebraic edges match far above the audit tolerances).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cutproject import CutProjectScheme
from .dual import DualSubstitution
from .errors import SelfIntersectingError
from .numberfield import FieldElement


@dataclass(frozen=True)
class Polygon:
    """A simple polygon with counterclockwise orientation."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise SelfIntersectingError("a polygon needs at least three 2D vertices")
        if _signed_area(v) < 0:
            v = v[::-1]
        object.__setattr__(self, "vertices", v)
        if abs(_signed_area(v)) < 1e-14:
            raise SelfIntersectingError("polygon is degenerate")
        if not _is_simple(v):
            raise SelfIntersectingError("polygon boundary crosses itself")

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _is_simple(v: np.ndarray) -> bool:
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                return False
    return True


def shoelace_area(polygon) -> float:
    """Positive area of a simple polygon (SelfIntersectingError otherwise)."""
    if not isinstance(polygon, Polygon):
        polygon = Polygon(np.asarray(polygon, dtype=float))
    return polygon.area


# ---------------------------------------------------------------------------
# The three window polygons of the cubic inflation


@dataclass
class Prototile:
    """A window prototile as a union of convex pieces with a merged boundary."""

    name: str
    pieces: tuple  # tuple of (k, 2) float arrays, CCW convex
    boundary: Polygon
    area: float


CUBIC_MINPOLY = (1, 0, -3, 1)


def polygonal_prototiles(scheme: CutProjectScheme) -> dict:
    """The polygon substitutes of the three fractal windows (cubic case only).

    All vertices are star images of explicit elements of Z[lambda]; the two
    composite tiles are unions of two convex pieces glued along a shared edge.
    """
    field = scheme.field
    if field.minpoly.coefficients != CUBIC_MINPOLY:
        raise ValueError("polygonal prototiles are specific to the inflation x^3 - 3x^2 + 1")

    def pt(c0, c1, c2):
        return scheme.star(field.element((c0, c1, c2)))

    a = pt(-1, 0, 1)   # lambda^2 - 1
    b = pt(0, 0, 1)    # lambda^2
    c = pt(0, -1, 1)   # lambda^2 - lambda
    d = pt(-1, -1, 1)  # lambda^2 - lambda - 1
    e = pt(-1, -1, 2)  # 2 lambda^2 - lambda - 1
    g = pt(0, 1, 0)    # lambda
    h = pt(-1, 1, 1)   # lambda^2 + lambda - 1
    zero = pt(0, 0, 0)

    ps_piece = _ccw(np.array([a - b, a, h, h - b]))
    pm_piece1 = _ccw(np.array([e - g, e, d, d - g]))
    pm_piece2 = _ccw(np.array([c - g, c, e, e - g]))
    pl_piece1 = _ccw(np.array([zero, e, c, b]))
    pl_piece2 = _ccw(np.array([zero, g, h, d, e]))

    tiles = {
        "S": Prototile("S", (ps_piece,), Polygon(ps_piece), _signed_area(ps_piece)),
        "M": _composite("M", pm_piece1, pm_piece2),
        "L": _composite("L", pl_piece1, pl_piece2),
    }
    return tiles


def _ccw(v: np.ndarray) -> np.ndarray:
    return v if _signed_area(v) > 0 else v[::-1]


def _composite(name: str, piece1: np.ndarray, piece2: np.ndarray) -> Prototile:
    boundary = merge_on_shared_edge(piece1, piece2)
    return Prototile(name, (piece1, piece2),
                     Polygon(boundary), _signed_area(piece1) + _signed_area(piece2))


def merge_on_shared_edge(p1: np.ndarray, p2: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Splice two CCW polygons along their (single) shared edge."""
    n1, n2 = len(p1), len(p2)
    for i in range(n1):
        a, b = p1[i], p1[(i + 1) % n1]
        for j in range(n2):
            c, d = p2[j], p2[(j + 1) % n2]
            if np.allclose(a, d, atol=tol) and np.allclose(b, c, atol=tol):
                merged = [p1[(i + 1 + k) % n1] for k in range(n1 - 1)]
                merged += [p2[(j + 1 + k) % n2] for k in range(n2 - 1)]
                return _drop_collinear(np.array(merged))
    raise ValueError("pieces share no edge")


def _drop_collinear(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    keep = []
    n = len(v)
    for i in range(n):
        a, b, c = v[i - 1], v[i], v[(i + 1) % n]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) > tol:
            keep.append(v[i])
    return np.array(keep)


# ---------------------------------------------------------------------------
# Patches of the dual substitution acting on polygons


@dataclass
class Placement:
    name: str
    translation: FieldElement  # star form, exact
    xy: np.ndarray


@dataclass
class TilePatch2D:
    prototiles: dict
    placements: list
    generation: int

    def count(self) -> int:
        return len(self.placements)

    def counts_by_type(self) -> dict:
        out = {}
        for p in self.placements:
            out[p.name] = out.get(p.name, 0) + 1
        return out

    def total_area(self) -> float:
        return sum(self.prototiles[p.name].area for p in self.placements)


def substitute_patch(prototiles: dict, dual: DualSubstitution, k: int,
                     start: str = "L") -> TilePatch2D:
    """Apply the dual substitution k times to one prototile at the origin."""
    field = dual.scheme.field
    placements = [(start, field.zero())]
    for _ in range(k):
        new = []
        for name, x in placements:
            for ch in dual.rules[name]:
                new.append((ch.child, dual.inv_scale * x + ch.offset))
        placements = new
    out = [Placement(name, x, dual.scheme.star(x)) for name, x in placements]
    return TilePatch2D(prototiles, out, k)




# ---------------------------------------------------------------------------
# Convex clipping and the audit


EDGE_TOLERANCE = 1e-9  # band for algebraic shared edges, far above float noise


def convex_clip(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman intersection of two convex CCW polygons.

    Points within the edge tolerance band count as inside, so tiles sharing
    an algebraic edge produce an (essentially) zero-area sliver rather than a
    degenerate parallel-line intersection.
    """
    output = list(subject)
    n = len(clip)
    for i in range(n):
        a, b = clip[i], clip[(i + 1) % n]
        if not output:
            break
        ex, ey = b[0] - a[0], b[1] - a[1]
        norm = (ex * ex + ey * ey) ** 0.5
        if norm == 0:
            continue
        ex, ey = ex / norm, ey / norm

        def dist(p):
            return ex * (p[1] - a[1]) - ey * (p[0] - a[0])

        inputs, output = output, []
        prev = inputs[-1]
        prev_d = dist(prev)
        for cur in inputs:
            cur_d = dist(cur)
            if (cur_d >= -EDGE_TOLERANCE) != (prev_d >= -EDGE_TOLERANCE):
                t = prev_d / (prev_d - cur_d)
                output.append((prev[0] + t * (cur[0] - prev[0]),
                               prev[1] + t * (cur[1] - prev[1])))
            if cur_d >= -EDGE_TOLERANCE:
                output.append(cur)
            prev, prev_d = cur, cur_d
    return np.array(output) if output else np.zeros((0, 2))


def intersection_area(subject: np.ndarray, clip: np.ndarray) -> float:
    poly = convex_clip(subject, clip)
    if len(poly) < 3:
        return 0.0
    return abs(_signed_area(poly))


def point_in_convex(point, poly: np.ndarray, tol: float = 1e-9) -> bool:
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0]) < -tol:
            return False
    return True


@dataclass
class AuditReport:
    tile_count: int
    union_area: float
    overlap_area: float
    boundary_gap_estimate: float
    rim_components: int
    mismatched_edge_length: float
    reference_area: Optional[float]
    reference_rel_error: Optional[float]

    def to_dict(self):
        return {
            "tile_count": self.tile_count,
            "union_area": self.union_area,
            "overlap_area": self.overlap_area,
            "boundary_gap_estimate": self.boundary_gap_estimate,
            "rim_components": self.rim_components,
            "mismatched_edge_length": self.mismatched_edge_length,
            "reference_area": self.reference_area,
            "reference_rel_error": self.reference_rel_error,
        }


def audit_patch(patch: TilePatch2D, reference_area: Optional[float] = None) -> AuditReport:
    """Overlap and gap audit of a placed patch.

    Overlaps are measured by pairwise convex clipping (spatial hash to prune);
    the union area is the tile-area sum minus that overlap.  Gaps are detected
    combinatorially: after splitting tile edges at all incident vertices,
    every interior segment must be shared by exactly two tiles, and the
    unmatched segments must form a single closed rim.  Additional rim
    components betray holes; the gap estimate is the isoperimetric bound of
    their total length.  A shape comparison with the expanded prototile is
    deliberately absent: the polygon substitution does not preserve shape,
    only area.
    """
    pieces = []  # (placement index, vertex array, bbox)
    for idx, pl in enumerate(patch.placements):
        proto = patch.prototiles[pl.name]
        for piece in proto.pieces:
            poly = piece + pl.xy
            bbox = (poly[:, 0].min(), poly[:, 1].min(), poly[:, 0].max(), poly[:, 1].max())
            pieces.append((idx, poly, bbox))
    overlap = _pairwise_overlap(pieces)
    total = patch.total_area()
    union = total - overlap
    rim_components, inner_rim_length, mismatched = _edge_matching(pieces)
    gap_estimate = inner_rim_length ** 2 / (4 * np.pi)
    ref_err = None
    if reference_area is not None:
        ref_err = abs(union - reference_area) / reference_area
    return AuditReport(
        tile_count=patch.count(),
        union_area=union,
        overlap_area=overlap,
        boundary_gap_estimate=gap_estimate,
        rim_components=rim_components,
        mismatched_edge_length=mismatched,
        reference_area=reference_area,
        reference_rel_error=ref_err,
    )


def _pairwise_overlap(pieces) -> float:
    cell = max(max(b[2] - b[0], b[3] - b[1]) for _, _, b in pieces) + 1e-9
    grid: dict = {}
    for k, (_, _, b) in enumerate(pieces):
        key = (int(b[0] // cell), int(b[1] // cell))
        grid.setdefault(key, []).append(k)
    overlap = 0.0
    seen = set()
    for (cx, cy), members in grid.items():
        neighborhood = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                neighborhood.extend(grid.get((cx + dx, cy + dy), []))
        for i in members:
            for j in neighborhood:
                if j <= i or (i, j) in seen:
                    continue
                ii, pi, bi = pieces[i]
                jj, pj, bj = pieces[j]
                if ii == jj:
                    continue
                if bi[2] < bj[0] or bj[2] < bi[0] or bi[3] < bj[1] or bj[3] < bi[1]:
                    continue
                seen.add((i, j))
                overlap += intersection_area(pi, pj)
    return overlap


def _edge_matching(pieces, tol: float = 1e-7):
    """Split edges at incident vertices and match segments pairwise.

    Returns (number of rim components, total length of rim components other
    than the outer one, total length of segments shared by more than two
    tiles).
    """
    def key(p):
        return (round(float(p[0]) / tol) , round(float(p[1]) / tol))

    vertices = {}
    for _, poly, _ in pieces:
        for v in poly:
            vertices.setdefault(key(v), np.asarray(v, dtype=float))
    vert_arr = np.array(list(vertices.values()))

    segments: dict = {}
    for piece_id, (_, poly, _) in enumerate(pieces):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            d = b - a
            length = float(np.hypot(*d))
            # vertices lying on the open segment split it
            rel = vert_arr - a
            t = (rel @ d) / (length * length)
            perp = np.abs(rel[:, 0] * d[1] - rel[:, 1] * d[0]) / length
            on = (perp < tol) & (t > tol) & (t < 1 - tol)
            cuts = sorted(set([0.0, 1.0] + [float(x) for x in t[on]]))
            for t0, t1 in zip(cuts[:-1], cuts[1:]):
                p0, p1 = a + t0 * d, a + t1 * d
                seg = tuple(sorted((key(p0), key(p1))))
                segments.setdefault(seg, []).append(piece_id)

    rim_segments = []
    mismatched = 0.0
    for (k0, k1), owners in segments.items():
        length = np.hypot((k0[0] - k1[0]) * tol, (k0[1] - k1[1]) * tol)
        distinct = len(set(owners))
        if distinct == 1:
            rim_segments.append((k0, k1, length))
        elif distinct > 2:
            mismatched += length
    # connected components of the rim graph
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comp_length: dict = {}
    for k0, k1, length in rim_segments:
        r0, r1 = find(k0), find(k1)
        if r0 != r1:
            parent[r0] = r1
    for k0, k1, length in rim_segments:
        comp_length[find(k0)] = comp_length.get(find(k0), 0.0) + length
    if not comp_length:
        return 0, 0.0, mismatched
    inner = sum(v for v in comp_length.values()) - max(comp_length.values())
    return len(comp_length), inner, mismatched
