"""The dual substitution: inverting the starred contractions.

In the unimodular case the internal contraction of the starred system can be
inverted exactly in the ring, turning the set equations inside out: the
expansion of each window contains translated copies of the windows, which is
a genuine (affine) substitution rule in internal space.  Control points turn
its tilings into point sets; transporting their set equations back to the
physical line solves the dual windows as exact intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .cutproject import CutProjectScheme
from .errors import NotAUnitError, NotInvertibleError, SeedNotNestedError
from .numberfield import FieldElement
from .rauzy import GraphIFS, IFSMap, interval_attractor, merge_intervals
from .substitution import SymbolicSubstitution, matrix_of


@dataclass(frozen=True)
class DualRuleChild:
    child: str
    offset: FieldElement  # star-form: placed at star(offset) inside the expanded tile


@dataclass
class DualSubstitution:
    """Expansion rules for the window prototiles, with exact offsets.

    Rule ``t``: the expanded window Q' W_t is the union of W_child translated
    by star(offset) over the rule children.  Control points c_t (star form)
    turn tile placements into the dual point set.
    """

    types: tuple
    rules: dict  # type -> tuple of DualRuleChild
    inv_scale: FieldElement  # lambda^{-1}; Q' is its internal representation
    scheme: CutProjectScheme
    control_points: dict  # type -> FieldElement (star form)
    primal: Optional[SymbolicSubstitution] = None

    def expansion_matrix(self) -> np.ndarray:
        return self.scheme.internal_multiplication_matrix(self.inv_scale)

    def matrix(self) -> np.ndarray:
        """Substitution matrix of the dual rules (row = type, column = child)."""
        index = {t: i for i, t in enumerate(self.types)}
        out = np.zeros((len(self.types), len(self.types)), dtype=np.int64)
        for t, children in self.rules.items():
            for ch in children:
                out[index[t], index[ch.child]] += 1
        return out

    def describe(self) -> str:
        lines = []
        for t in self.types:
            parts = []
            for ch in self.rules[t]:
                off = str(ch.offset)
                parts.append(f"W_{ch.child}" + ("" if off == "0" else f" + star({off})"))
            lines.append(f"sigma'(W_{t}) = {{ " + ", ".join(parts) + " }")
        return "\n".join(lines)


def dualize(ifs: GraphIFS, anchor_type: Optional[str] = None) -> DualSubstitution:
    """Invert a starred contraction system into the dual substitution.

    Each starred equation ``V_t* = union Q V_s* + star(w)`` becomes the rule
    ``Q' W_t = union W_s + star(w / lambda)``; exactness requires the
    inflation factor to be a unit of the ring (unimodular substitution
    matrix).  Control points are composed from the anchor type (whose
    control point is the origin) along a breadth-first search of the maps.
    """
    field = ifs.scheme.field
    try:
        inv = ifs.scale.inverse()
    except NotAUnitError as exc:
        raise NotInvertibleError("inflation factor is not a ring unit") from exc
    rules = {}
    for t in ifs.types:
        children = []
        for m in sorted(ifs.maps_into(t), key=lambda m: (ifs.types.index(m.source), m.shift.coords)):
            children.append(DualRuleChild(m.source, inv * m.shift))
        rules[t] = tuple(children)

    if anchor_type is None:
        anchor_type = ifs.types[-1]
    control = {anchor_type: field.zero()}
    frontier = [anchor_type]
    while frontier:
        nxt = []
        for src in frontier:
            for m in sorted(ifs.maps, key=lambda m: (ifs.types.index(m.target), m.shift.coords)):
                if m.source != src or m.target in control:
                    continue
                # image of the source control point under the starred map
                control[m.target] = ifs.scale * control[src] + m.shift
                nxt.append(m.target)
        frontier = nxt
    if len(control) != len(ifs.types):
        raise NotInvertibleError("map graph does not reach every type")
    primal = ifs.source_system.substitution if ifs.source_system else None
    return DualSubstitution(
        types=ifs.types,
        rules=rules,
        inv_scale=inv,
        scheme=ifs.scheme,
        control_points=control,
        primal=primal,
    )


# ---------------------------------------------------------------------------
# Dual point sets


@dataclass
class DualPointSet:
    """Control points of a dual-tiling patch, with exact lattice coordinates."""

    types: tuple
    points: dict  # type -> set of coordinate tuples (star form)
    generation: int
    scheme: CutProjectScheme

    def count(self) -> int:
        return sum(len(v) for v in self.points.values())

    def arrays(self):
        """(types, lattice coords, internal xy) as aligned numpy arrays."""
        t_idx, coords = [], []
        for i, t in enumerate(self.types):
            for c in sorted(self.points[t]):
                t_idx.append(i)
                coords.append(c)
        coords = np.array(coords, dtype=np.int64).reshape(len(t_idx), self.scheme.field.degree)
        return (np.array(t_idx, dtype=np.int8), coords, self.scheme.star_many(coords))

    def contains(self, other: "DualPointSet") -> bool:
        return all(other.points[t] <= self.points[t] for t in self.types)


def default_seed(dual: DualSubstitution):
    """The two-point nested seed: the anchor control point plus a second-type
    point chosen so the generated set has no arbitrarily large holes."""
    field = dual.scheme.field
    anchor = dual.types[-1]
    # a second type whose rule carries a child of its own type: the fixed
    # translation z = offset / (1 - lambda^{-1}) gives a self-reproducing point
    for t in dual.types:
        if t == anchor:
            continue
        for ch in dual.rules[t]:
            if ch.child != t:
                continue
            one_minus = field.one() - dual.inv_scale
            try:
                z = ch.offset * one_minus.inverse()
            except NotAUnitError:
                continue
            return ((anchor, field.zero()), (t, dual.control_points[t] + z))
    return ((anchor, field.zero()),)


def step_points(dual: DualSubstitution, points):
    """One substitution step on typed points (type, star-form element)."""
    out = set()
    for t, x in points:
        z = x - dual.control_points[t]  # translation of the carrying tile
        for ch in dual.rules[t]:
            out.add((ch.child, dual.control_points[ch.child] + dual.inv_scale * z + ch.offset))
    return out


def generate_dual_pointset(dual: DualSubstitution, k: int,
                           seed=None, check_nested: bool = True) -> DualPointSet:
    """Iterate the dual substitution k times on a nested seed point set."""
    field = dual.scheme.field
    if seed is None:
        seed = default_seed(dual)
    current = {(t, x) for t, x in seed}
    if check_nested:
        image = step_points(dual, current)
        if not current <= image:
            raise SeedNotNestedError("seed points are not contained in their image")
    for _ in range(k):
        current = step_points(dual, current)
    points = {t: set() for t in dual.types}
    for t, x in current:
        points[t].add(x.coords)
    return DualPointSet(dual.types, points, k, dual.scheme)


def delone_radius(pointset: DualPointSet) -> float:
    """Largest empty ball radius seen at desk scale (covering radius proxy).

    Estimated over a grid restricted to the inner half of the patch extent,
    so boundary effects of the finite patch do not dominate.
    """
    _, _, xy = pointset.arrays()
    if len(xy) < 4:
        return float("inf")
    tree = cKDTree(xy)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    center, span = (lo + hi) / 2, (hi - lo) / 2
    grid_axes = [np.linspace(c - s / 2, c + s / 2, 40) for c, s in zip(center, span)]
    mesh = np.stack(np.meshgrid(*grid_axes), axis=-1).reshape(-1, xy.shape[1])
    dist, _ = tree.query(mesh)
    return float(dist.max())


# ---------------------------------------------------------------------------
# Dual windows via the inverse star map


def costar_system(dual: DualSubstitution) -> GraphIFS:
    """Set equations of the dual point set, transported to the physical line.

    A rule child (t -> s at offset w) contributes the contraction
    ``V'_s includes lambda^{-1} V'_t + (c_s - lambda^{-1} c_t + w)`` once
    control points are subtracted; under the inverse star map the linear part
    embeds at the distinguished real root, so the system is one-dimensional.
    """
    maps = []
    for t in dual.types:
        for ch in dual.rules[t]:
            shift = (dual.control_points[ch.child]
                     - dual.inv_scale * dual.control_points[t] + ch.offset)
            maps.append(IFSMap(target=ch.child, source=t, shift=shift))
    return GraphIFS(
        types=dual.types,
        maps=tuple(maps),
        scale=dual.inv_scale,
        scheme=dual.scheme,
        embedding="physical",
        source_system=None,
    )


def dual_windows(dual: DualSubstitution):
    """Exact interval windows of the dual point set and their total measure.

    Returns (intervals, merged union, total length element).
    """
    system = costar_system(dual)
    intervals = interval_attractor(system)
    merged, total = merge_intervals(
        list(intervals.values()), dual.scheme.field, dual.scheme.pf_index
    )
    return intervals, merged, total


# ---------------------------------------------------------------------------
# Duality closure


@dataclass
class DualityReport:
    passed: bool
    factor_sign: int  # +1 direct reading, -1 reflected reading
    expansion_orientation: int  # sign of det of the dual expansion (internal space)
    induced_rules: dict  # type -> word read off the expanded windows
    reference_rules: dict
    scale_ratios: dict  # type -> window length relative to the last type (floats)
    notes: list

    def to_dict(self):
        return {
            "pass": self.passed,
            "factor_sign": self.factor_sign,
            "expansion_orientation": self.expansion_orientation,
            "induced_rules": {t: "".join(map(str, w)) for t, w in self.induced_rules.items()},
            "reference_rules": {t: "".join(map(str, w)) for t, w in self.reference_rules.items()},
            "scale_ratios": self.scale_ratios,
            "notes": self.notes,
        }


def dual_of_dual_check(dual: DualSubstitution,
                       reference: Optional[SymbolicSubstitution] = None) -> DualityReport:
    """Does inflating the dual windows reproduce the original substitution?

    Multiplying the co-starred system by the inflation factor turns the
    window intervals into a geometric substitution; its reading order per
    type is compared against the reference rules, allowing a global
    reflection (the inflation factor may act as -lambda).
    """
    if reference is None:
        reference = dual.primal
    if reference is None:
        raise ValueError("no reference substitution to compare against")
    field = dual.scheme.field
    pf = dual.scheme.pf_index
    lam = dual.inv_scale.inverse()
    system = costar_system(dual)
    intervals = interval_attractor(system)
    notes = []
    orientation = 1 if np.linalg.det(dual.expansion_matrix()) > 0 else -1
    if orientation < 0:
        notes.append("dual expansion is orientation-reversing")

    ref_rules = reference.rules_dict()
    for sign in (1, -1):
        induced = {}
        ok = True
        for t in dual.types:
            children = []
            # multiply the equation of V_t by lambda: children are the map
            # sources, placed at their window translated by lambda * shift
            for m in system.maps_into(t):
                s_lo, s_hi = intervals[m.source]
                shift = lam * m.shift
                if sign > 0:
                    lo = s_lo + shift
                else:
                    lo = -(s_hi + shift)
                children.append((lo.embed(pf), m.source))
            children.sort()
            induced[t] = tuple(ch for _, ch in children)
            if induced.get(t) != tuple(ref_rules.get(t, ())):
                ok = False
        if ok:
            # window length profile, relative to the last type
            lengths = {t: (intervals[t][1] - intervals[t][0]).embed(pf) for t in dual.types}
            base = lengths[dual.types[-1]]
            scale_ratios = {t: lengths[t] / base for t in dual.types}
            notes.append("matched with factor " + ("+lambda" if sign > 0 else "-lambda (reflected)"))
            return DualityReport(True, sign, orientation, induced, ref_rules, scale_ratios, notes)
    notes.append("no orientation matches the reference rules")
    return DualityReport(False, 0, orientation, induced, ref_rules, {}, notes)
