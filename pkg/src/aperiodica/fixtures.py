"""Built-in substitution fixtures with exact length data.

Each fixture packages a substitution together with the exact tile lengths
that anchor its geometric realization, so the star maps land in the ring.
Lengths are derived from the exact right eigenvector of the substitution
matrix, normalized at the fixture's designated unit tile.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from .intpoly import IntPolynomial
from .numberfield import NumberField
from .substitution import (
    SymbolicSubstitution,
    matrix_of,
    merge_letters,
    mn_pf_minimal_polynomial,
    mn_substitution,
    pf_data,
)

TAU = (1 + 5**0.5) / 2


@dataclass
class Fixture:
    name: str
    description: str
    substitution: Optional[SymbolicSubstitution] = None
    lengths: Optional[dict] = None
    endpoint: str = "right"
    mode: str = "primal"
    length_scale: int = 1  # integer multiplier applied to make lengths ring elements
    matrix: Optional[np.ndarray] = None  # for matrix-only fixtures
    volumes: Optional[tuple] = None
    notes: tuple = ()

    @property
    def kind(self) -> str:
        return "substitution" if self.substitution is not None else "matrix-data"

    @property
    def field(self) -> Optional[NumberField]:
        if self.lengths:
            return next(iter(self.lengths.values())).field
        return None


def _lengths_from_pf(subst: SymbolicSubstitution, anchor: str):
    data = pf_data(matrix_of(subst), anchor_index=subst.alphabet.index(anchor))
    elements = data.length_elements()
    if all(e is not None for e in elements):
        return dict(zip(subst.alphabet, elements)), 1
    elements, scale = data.scaled_length_elements()
    return dict(zip(subst.alphabet, elements)), scale


def _fibonacci() -> Fixture:
    subst = SymbolicSubstitution.from_dict({"S": ("L",), "L": ("L", "S")}, "SL")
    field = NumberField(IntPolynomial((-1, -1, 1)))
    tau = field.generator()
    lengths = {"S": tau - field.one(), "L": field.one()}
    return Fixture(
        name="fibonacci",
        description="S -> L, L -> LS with L the unit interval; golden-ratio inflation",
        substitution=subst,
        lengths=lengths,
        endpoint="left",
        notes=("left endpoints anchor the classic realization L=[0,1], S=[1,tau]",),
    )


def _n3() -> Fixture:
    subst = mn_substitution(3).rename({"1": "S", "2": "M", "3": "L"})
    lengths, scale = _lengths_from_pf(subst, "S")
    return Fixture(
        name="n3",
        description="cubic staircase family member: S -> L, M -> ML, L -> SML",
        substitution=subst,
        lengths=lengths,
        length_scale=scale,
    )


def _n4() -> Fixture:
    subst = mn_substitution(4).rename({"1": "X", "2": "S", "3": "M", "4": "L"})
    lengths, scale = _lengths_from_pf(subst, "X")
    return Fixture(
        name="n4",
        description="four-letter staircase substitution X -> L, S -> ML, M -> SML, L -> XSML",
        substitution=subst,
        lengths=lengths,
        length_scale=scale,
        notes=("X is the unit interval; merging XS into L gives the n4-merged fixture",),
    )


def _n4_merged(base: Fixture) -> Fixture:
    merged, lengths = merge_letters(base.substitution, ("X", "S"), "L",
                                    lengths=base.lengths)
    return Fixture(
        name="n4-merged",
        description="S -> ML, M -> SML, L -> LML on three letters (XS pairs fused)",
        substitution=merged,
        lengths=lengths,
        notes=("alphabet count now matches the algebraic degree of the inflation",),
    )


def _n4_dual(merged: Fixture) -> Fixture:
    return Fixture(
        name="n4-dual",
        description="the n4-merged substitution, analyzed through its dual tiling",
        substitution=merged.substitution,
        lengths=merged.lengths,
        mode="dual",
    )


def _substperm(merged: Fixture) -> Fixture:
    subst = SymbolicSubstitution.from_dict(
        {"S": ("M", "L"), "M": ("M", "L", "S"), "L": ("L", "M", "L")}, "SML"
    )
    return Fixture(
        name="substperm",
        description="letter-permuted variant S -> ML, M -> MLS, L -> LML",
        substitution=subst,
        lengths=dict(merged.lengths),
    )


def _substtransp() -> Fixture:
    subst = SymbolicSubstitution.from_dict(
        {"S": ("M",), "M": ("S", "M", "L"), "L": ("S", "M", "L", "L")}, "SML"
    )
    field = NumberField(IntPolynomial((1, 0, -3, 1)))
    lam = field.generator()
    one = field.one()
    lengths = {
        "S": lam * lam - 3 * lam + one,
        "M": lam - one,
        "L": lam,
    }
    return Fixture(
        name="substtransp",
        description="transposed-matrix variant S -> M, M -> SML, L -> SMLL",
        substitution=subst,
        lengths=lengths,
        notes=("its matrix is the transpose of the n4-merged matrix",
               "the window of M splits into two components"),
    )


def _golden_triangle() -> Fixture:
    return Fixture(
        name="golden-triangle-data",
        description="planar triangle pair with square-root-of-golden-ratio inflation (matrix and areas only)",
        matrix=np.array([[1, 1], [1, 0]], dtype=np.int64),
        volumes=(TAU**1.5, TAU**0.5),
        notes=("triangle rewriting geometry is out of scope; density data only",),
    )


def _n7() -> Fixture:
    subst = mn_substitution(7)
    lengths, scale = _lengths_from_pf(subst, "1")
    return Fixture(
        name="n7",
        description="seven-letter staircase member with a three-dimensional internal space",
        substitution=subst,
        lengths=lengths,
        length_scale=scale,
        notes=("point-cloud export only; the window set is three-dimensional",),
    )


_BUILDERS_DONE: dict = {}


def all_fixtures() -> dict:
    if not _BUILDERS_DONE:
        fib = _fibonacci()
        n3 = _n3()
        n4 = _n4()
        merged = _n4_merged(n4)
        for fx in (
            fib,
            n3,
            n4,
            merged,
            _n4_dual(merged),
            _substperm(merged),
            _substtransp(),
            _golden_triangle(),
            _n7(),
        ):
            _BUILDERS_DONE[fx.name] = fx
    return _BUILDERS_DONE


def get_fixture(name: str) -> Fixture:
    fixtures = all_fixtures()
    if name not in fixtures:
        known = ", ".join(sorted(fixtures))
        raise KeyError(f"unknown fixture {name!r} (known: {known})")
    return fixtures[name]
