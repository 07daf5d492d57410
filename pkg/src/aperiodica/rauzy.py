"""Window sets of fixed-point tilings via graph-directed function systems.

From a fixed-point tiling the right endpoints of each tile type satisfy a
system of set equations ``V_j = union of lambda V_t + shift``; transported to
the internal space by the star map these become contractions whose unique
compact fixed tuple is the window partition (the Rauzy fractal).  Two
independent backends approximate the attractor: starring actual tiling
endpoints, and a chaos game on the map system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .cutproject import CutProjectScheme
from .errors import NonExpandingError, NotIntervalError, NotPisotError
from .numberfield import FieldElement, NumberField, PisotClass
from .substitution import SymbolicSubstitution, fixed_point_tiling

ALL = "*"  # source marker for terms applying to every tile type


@dataclass(frozen=True)
class Term:
    source: str
    shift: FieldElement

    def describe(self, factor="L") -> str:
        shift = str(self.shift)
        suffix = "" if shift == "0" else f" + ({shift})"
        name = "V" if self.source == ALL else f"V_{self.source}"
        return f"{factor}{name}{suffix}"


@dataclass(frozen=True)
class SetEquation:
    target: str
    terms: tuple

    def describe(self) -> str:
        return f"V_{self.target} = " + "  u  ".join(t.describe() for t in self.terms)


@dataclass(frozen=True)
class SetEquationSystem:
    """Per-type endpoint equations of a fixed-point tiling, over Z[lambda]."""

    substitution: SymbolicSubstitution
    lengths: dict
    factor: FieldElement
    equations: tuple
    endpoint: str

    def equation(self, target) -> SetEquation:
        for eq in self.equations:
            if eq.target == target:
                return eq
        raise KeyError(target)

    def expanded_terms(self, target):
        """Terms with ALL sources spelled out letter by letter."""
        out = []
        for term in self.equation(target).terms:
            if term.source == ALL:
                for a in self.substitution.alphabet:
                    out.append((a, term.shift))
            else:
                out.append((term.source, term.shift))
        return out

    def describe(self) -> str:
        return "\n".join(eq.describe() for eq in self.equations)


def derive_set_equations(s: SymbolicSubstitution, lengths: dict,
                         endpoint: str = "right") -> SetEquationSystem:
    """Set equations satisfied by the per-type endpoint sets of a fixed point.

    For an occurrence of letter j at position p of rule(t), inflating a tile
    of type t contributes ``lambda V_t - (sum of lengths after p)`` to V_j
    (right endpoints; with left endpoints the sign flips to the prefix sum).
    Identical shifts shared by every source type coalesce into a single
    all-types term.
    """
    if endpoint not in ("right", "left"):
        raise ValueError("endpoint must be 'right' or 'left'")
    field = next(iter(lengths.values())).field
    lam = field.generator()
    lam_lo, _ = lam.embed_interval()
    if lam_lo <= 1:
        raise NonExpandingError("inflation factor is not larger than one")
    for a in s.alphabet:
        total = field.zero()
        for letter in s.rule(a):
            total = total + lengths[letter]
        if not (total - lam * lengths[a]).is_zero():
            raise ValueError(f"lengths are inconsistent with the substitution at {a!r}")

    collected: dict = {a: {} for a in s.alphabet}
    for t in s.alphabet:
        word = s.rule(t)
        for p, j in enumerate(word):
            if endpoint == "right":
                shift = field.zero()
                for q in range(p + 1, len(word)):
                    shift = shift - lengths[word[q]]
            else:
                shift = field.zero()
                for q in range(p):
                    shift = shift + lengths[word[q]]
            collected[j].setdefault(shift.coords, set()).add(t)

    equations = []
    full = set(s.alphabet)
    for j in s.alphabet:
        terms = []
        for coords, sources in collected[j].items():
            shift = field.element(coords)
            if sources == full:
                terms.append(Term(ALL, shift))
            else:
                for t in sorted(sources, key=s.alphabet.index):
                    terms.append(Term(t, shift))
        terms.sort(key=lambda tm: (tm.source != ALL,
                                   s.alphabet.index(tm.source) if tm.source != ALL else -1,
                                   tm.shift.coords))
        equations.append(SetEquation(j, tuple(terms)))
    return SetEquationSystem(s, dict(lengths), lam, tuple(equations), endpoint)


# ---------------------------------------------------------------------------
# Graph-directed function systems


@dataclass(frozen=True)
class IFSMap:
    """x -> scale * x + shift, from the window of ``source`` into ``target``."""

    target: str
    source: str
    shift: FieldElement


@dataclass
class GraphIFS:
    """A system of affine maps between typed components.

    The common linear part is a ring element; embedding "internal" renders it
    on the internal space of the scheme (the starred system), embedding
    "physical" on the distinguished real line (the co-starred system used for
    dual windows).
    """

    types: tuple
    maps: tuple
    scale: FieldElement
    scheme: CutProjectScheme
    embedding: str = "internal"
    source_system: Optional[SetEquationSystem] = None

    @property
    def dim(self) -> int:
        return self.scheme.internal_dim if self.embedding == "internal" else 1

    def linear_matrix(self) -> np.ndarray:
        if self.embedding == "internal":
            return self.scheme.internal_multiplication_matrix(self.scale)
        return np.array([[self.scheme.costar(self.scale)]])

    def embed_shift(self, shift: FieldElement) -> np.ndarray:
        if self.embedding == "internal":
            return self.scheme.star(shift)
        return np.array([self.scheme.costar(shift)])

    def contraction_upper(self) -> float:
        if self.embedding == "internal":
            return self.scheme.contraction_factor(self.scale)
        lo, hi = self.scale.embed_interval(self.scheme.pf_index)
        return float(max(abs(lo), abs(hi)))

    def maps_from(self, source) -> tuple:
        return tuple(m for m in self.maps if m.source == source)

    def maps_into(self, target) -> tuple:
        return tuple(m for m in self.maps if m.target == target)

    def offset_norms(self):
        return [float(np.linalg.norm(self.embed_shift(m.shift))) for m in self.maps]

    def bound_radius(self) -> float:
        """Attractor radius bound max|offset| / (1 - contraction)."""
        c = self.contraction_upper()
        if c >= 1:
            raise NotPisotError("maps are not contractions")
        offs = self.offset_norms()
        return (max(offs) if offs else 0.0) / (1 - c)

    def geometric_series_radius(self) -> float:
        """The looser sum-of-offsets geometric bound."""
        c = self.contraction_upper()
        return sum(self.offset_norms()) / (1 - c)

    def describe(self) -> str:
        lines = []
        for t in self.types:
            parts = []
            for m in self.maps_into(t):
                shift = str(m.shift)
                suffix = "" if shift == "0" else f" + star({shift})"
                parts.append(f"Q V_{m.source}*{suffix}")
            lines.append(f"V_{t}* = " + "  u  ".join(parts))
        return "\n".join(lines)


def star_equations(eqs: SetEquationSystem, scheme: CutProjectScheme) -> GraphIFS:
    """Transport the set equations to the internal space.

    Requires a Pisot inflation factor: only then is the internal image of
    multiplication by lambda a contraction and the attractor compact.
    """
    if scheme.field.pisot_class() is not PisotClass.PV:
        raise NotPisotError(
            f"inflation factor class is {scheme.field.pisot_class().value}, not PV"
        )
    maps = []
    for eq in eqs.equations:
        for source, shift in eqs.expanded_terms(eq.target):
            maps.append(IFSMap(eq.target, source, shift))
    ifs = GraphIFS(
        types=eqs.substitution.alphabet,
        maps=tuple(maps),
        scale=eqs.factor,
        scheme=scheme,
        embedding="internal",
        source_system=eqs,
    )
    if ifs.contraction_upper() >= 1:
        raise NotPisotError("starred linear part is not certifiably contracting")
    return ifs


# ---------------------------------------------------------------------------
# Attractor point clouds


@dataclass
class PointCloud:
    type_names: tuple
    types: np.ndarray  # int8 indices into type_names
    points: np.ndarray  # (N, dim)
    meta: dict

    def __len__(self):
        return len(self.points)

    def points_of(self, name) -> np.ndarray:
        idx = self.type_names.index(name)
        return self.points[self.types == idx]


def attractor_cloud(ifs: GraphIFS, n_points: int, seed: int = 0,
                    backend: str = "chaos", burn_in: int = 100,
                    walkers: int = 256, oversample: int = 1) -> PointCloud:
    """Sample the attractor, tagged by component type.

    backend "chaos" runs seeded random walks on the map system; backend
    "direct" stars the endpoints of an actual fixed-point tiling window and
    serves as the independent oracle.  Both are deterministic given the seed.

    oversample > 1 draws that many times as many raw points and keeps a
    grid-stratified subset, trading compute for a smaller covering radius at
    the same cloud size (useful for oracle comparisons and rendering).
    """
    if n_points <= 0:
        return PointCloud(ifs.types, np.zeros(0, dtype=np.int8),
                          np.zeros((0, ifs.dim)), {"backend": backend, "seed": seed})
    raw_n = n_points * max(1, oversample)
    if backend == "chaos":
        cloud = _chaos_cloud(ifs, raw_n, seed, burn_in, walkers)
    elif backend == "direct":
        cloud = _direct_cloud(ifs, raw_n)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if oversample > 1:
        types, points = _stratified_thin(cloud.points, cloud.types, n_points)
        cloud = PointCloud(cloud.type_names, types, points,
                           dict(cloud.meta, oversample=oversample))
    return cloud


def _pack_cells(points: np.ndarray, h: float) -> np.ndarray:
    """Grid cell of each point as a single integer key."""
    cells = np.floor(points / h).astype(np.int64)
    mins = cells.min(axis=0)
    shifted = cells - mins
    spans = shifted.max(axis=0) + 1
    key = shifted[:, 0].copy()
    for j in range(1, points.shape[1]):
        key = key * spans[j] + shifted[:, j]
    return key


def _stratified_thin(points: np.ndarray, types: np.ndarray, n: int):
    """Deterministic coverage-first subsample of exactly n points.

    Picks the point nearest each cell centre on a grid sized so the occupied
    cells roughly match the quota, then fills the remainder in stream order.
    """
    if len(points) <= n:
        return types, points
    span = points.max(axis=0) - points.min(axis=0)
    volume = float(np.prod(span[span > 0])) or 1.0
    h = (volume / n) ** (1.0 / points.shape[1])
    for _ in range(3):
        occupied = len(np.unique(_pack_cells(points, h)))
        h *= (occupied / n) ** (1.0 / points.shape[1])
    key = _pack_cells(points, h)
    centers = (np.floor(points / h) + 0.5) * h
    dist = np.abs(points - centers).max(axis=1)
    order = np.lexsort((dist, key))
    sorted_keys = key[order]
    is_rep = np.ones(len(points), dtype=bool)
    is_rep[1:] = sorted_keys[1:] != sorted_keys[:-1]
    sel = np.concatenate([order[is_rep], order[~is_rep]])[:n]
    sel.sort()
    return types[sel], points[sel]


def _chaos_cloud(ifs, n_points, seed, burn_in, walkers):
    type_index = {t: i for i, t in enumerate(ifs.types)}
    by_source = [[] for _ in ifs.types]
    for m in sorted(ifs.maps, key=lambda m: (type_index[m.source], type_index[m.target], m.shift.coords)):
        by_source[type_index[m.source]].append(m)
    src_ptr = np.zeros(len(ifs.types) + 1, dtype=np.int64)
    map_target = []
    offsets = []
    cum_weights = []
    for i, maps in enumerate(by_source):
        src_ptr[i + 1] = src_ptr[i] + len(maps)
        for k, m in enumerate(maps):
            map_target.append(type_index[m.target])
            offsets.append(ifs.embed_shift(m.shift))
            cum_weights.append((k + 1) / len(maps))
    walkers = min(walkers, n_points)
    steps = burn_in + -(-n_points // walkers)
    rng = np.random.Generator(np.random.PCG64(seed))
    uniforms = rng.random((walkers, steps))
    start_types = (np.arange(walkers) % len(ifs.types)).astype(np.int64)
    types, points = _kernels.chaos_walk(
        ifs.linear_matrix(),
        np.array(offsets),
        np.array(map_target, dtype=np.int64),
        src_ptr,
        np.array(cum_weights),
        uniforms,
        start_types,
        burn_in,
    )
    return PointCloud(ifs.types, types[:n_points], points[:n_points],
                      {"backend": "chaos", "seed": seed, "burn_in": burn_in,
                       "walkers": walkers})


def _direct_cloud(ifs, n_points):
    system = ifs.source_system
    if system is None:
        raise ValueError("direct backend needs the originating set-equation system")
    if ifs.embedding != "internal":
        raise ValueError("direct backend renders internal-space clouds only")
    tiling = fixed_point_tiling(system.substitution, system.lengths,
                                min_size=n_points)
    half = n_points // 2 + 1
    tiling.left_indices = tiling.left_indices[-half:]
    tiling.right_indices = tiling.right_indices[:half]
    types, coords = tiling.endpoint_matrix()
    pts = ifs.scheme.star_many(coords)
    mid = len(tiling.left_indices)
    half = n_points // 2
    lo = max(0, mid - half)
    hi = lo + n_points
    if hi > len(types):
        hi = len(types)
        lo = hi - n_points
    return PointCloud(ifs.types, types[lo:hi].astype(np.int8), pts[lo:hi],
                      {"backend": "direct", "generations": tiling.generations})


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point sets."""
    ta, tb = cKDTree(a), cKDTree(b)
    d_ab = ta.query(b, k=1)[0].max()
    d_ba = tb.query(a, k=1)[0].max()
    return float(max(d_ab, d_ba))


def occupancy_measure(points: np.ndarray, resolution: float) -> float:
    """Sampled measure estimate: occupied grid cells times cell volume."""
    cells = np.unique(np.floor(points / resolution).astype(np.int64), axis=0)
    return float(len(cells)) * resolution ** points.shape[1]


def cluster_count(points: np.ndarray, radius: float) -> int:
    """Number of connected components at the given linking radius."""
    n = len(points)
    if n == 0:
        return 0
    tree = cKDTree(points)
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in tree.query_pairs(radius):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    return len({find(i) for i in range(n)})


# ---------------------------------------------------------------------------
# Exact interval attractors (one-dimensional systems)


def interval_attractor(ifs: GraphIFS) -> dict:
    """Solve a one-dimensional system exactly as a tuple of intervals.

    The converged floating point hull iteration decides which map image
    attains each endpoint; the resulting linear system is solved exactly over
    the rationals in ring coordinates and the candidate intervals are checked
    to tile each component without gaps.  NotIntervalError when the
    attractor is not a tuple of intervals (or the space is not a line).
    """
    if ifs.dim != 1:
        raise NotIntervalError(f"attractor lives in dimension {ifs.dim}, not 1")
    field = ifs.scheme.field
    m = field.degree
    types = list(ifs.types)
    t_index = {t: i for i, t in enumerate(types)}
    q = float(ifs.linear_matrix()[0, 0])
    if abs(q) >= 1:
        raise NotIntervalError("linear part is not a contraction")
    shifts = {mp: float(ifs.embed_shift(mp.shift)[0]) for mp in ifs.maps}

    radius = ifs.bound_radius() + 1
    lo = {t: -radius for t in types}
    hi = {t: radius for t in types}
    for _ in range(400):
        new_lo, new_hi = {}, {}
        for t in types:
            images = []
            for mp in ifs.maps_into(t):
                a = q * lo[mp.source] + shifts[mp]
                b = q * hi[mp.source] + shifts[mp]
                images.append((min(a, b), max(a, b)))
            if not images:
                raise NotIntervalError(f"component {t} has no incoming maps")
            new_lo[t] = min(i[0] for i in images)
            new_hi[t] = max(i[1] for i in images)
        lo, hi = new_lo, new_hi

    # which (map, endpoint) attains each hull endpoint
    def attaining(t, want_low):
        best, arg = None, None
        for mp in ifs.maps_into(t):
            a = q * lo[mp.source] + shifts[mp]
            b = q * hi[mp.source] + shifts[mp]
            val = min(a, b) if want_low else max(a, b)
            end_is_lo = (a <= b) == want_low  # which source endpoint produced it
            if best is None or (val < best if want_low else val > best):
                best, arg = val, (mp, end_is_lo)
        return arg

    # unknowns: coordinates of lo_t, hi_t for every type
    n_unknown = 2 * len(types) * m
    A = [[Fraction(0)] * n_unknown for _ in range(n_unknown)]
    rhs = [Fraction(0)] * n_unknown

    def block(t, is_lo):
        return (2 * t_index[t] + (0 if is_lo else 1)) * m

    scale_cols = [field.mul_coords(ifs.scale.coords, tuple(1 if i == k else 0 for i in range(m)))
                  for k in range(m)]
    row = 0
    for t in types:
        for want_low in (True, False):
            mp, end_is_lo = attaining(t, want_low)
            tgt = block(t, want_low)
            src = block(mp.source, end_is_lo)
            for i in range(m):
                A[row + i][tgt + i] += 1
                for k in range(m):
                    A[row + i][src + k] -= Fraction(scale_cols[k][i])
                rhs[row + i] = Fraction(mp.shift.coords[i])
            row += m
    sol = _solve_dense(A, rhs)
    if sol is None:
        raise NotIntervalError("endpoint equations are singular")

    intervals = {}
    for t in types:
        lo_el = field.element(_as_ints(sol[block(t, True): block(t, True) + m]))
        hi_el = field.element(_as_ints(sol[block(t, False): block(t, False) + m]))
        intervals[t] = (lo_el, hi_el)
    _verify_interval_solution(ifs, intervals)
    return intervals


def _as_ints(fracs):
    out = []
    for f in fracs:
        if f.denominator != 1:
            raise NotIntervalError("endpoints are not ring elements")
        out.append(f.numerator)
    return tuple(out)


def _solve_dense(A, b):
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _verify_interval_solution(ifs: GraphIFS, intervals: dict):
    """Exact closure check: map images must tile each interval without gaps."""
    field = ifs.scheme.field
    pf = ifs.scheme.pf_index
    root_index = pf if ifs.embedding == "physical" else ifs.scheme.internal_roots[0][0]
    q_sign = 1 if float(ifs.linear_matrix()[0, 0]) > 0 else -1

    def leq(a, b):
        return field.compare(a.coords, b.coords, root_index) <= 0

    for t in ifs.types:
        lo_t, hi_t = intervals[t]
        if not leq(lo_t, hi_t):
            raise NotIntervalError(f"component {t} has inverted endpoints")
        images = []
        for mp in ifs.maps_into(t):
            lo_s, hi_s = intervals[mp.source]
            if q_sign > 0:
                img = (ifs.scale * lo_s + mp.shift, ifs.scale * hi_s + mp.shift)
            else:
                img = (ifs.scale * hi_s + mp.shift, ifs.scale * lo_s + mp.shift)
            images.append(img)
        images.sort(key=lambda iv: iv[0].embed(root_index))
        if images[0][0].coords != lo_t.coords:
            raise NotIntervalError(f"left endpoint of {t} is not attained")
        reach = images[0][1]
        for img in images[1:]:
            if field.compare(img[0].coords, reach.coords, root_index) > 0:
                raise NotIntervalError(f"gap inside component {t}")
            if field.compare(img[1].coords, reach.coords, root_index) > 0:
                reach = img[1]
        if reach.coords != hi_t.coords:
            raise NotIntervalError(f"right endpoint of {t} is not attained")


def merge_intervals(intervals, field: NumberField, root_index: int):
    """Union of exact intervals: merged components and the total length."""
    items = sorted(intervals, key=lambda iv: iv[0].embed(root_index))
    merged = []
    for lo, hi in items:
        if merged and field.compare(lo.coords, merged[-1][1].coords, root_index) <= 0:
            if field.compare(hi.coords, merged[-1][1].coords, root_index) > 0:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    total = field.zero()
    for lo, hi in merged:
        total = total + (hi - lo)
    return merged, total
