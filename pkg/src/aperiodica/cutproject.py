"""Cut-and-project schemes built from the conjugates of an inflation factor.

The lattice is spanned by the columns (lambda_j^i) of the Vandermonde matrix
of the roots; projecting a lattice point to its first coordinate gives the
physical line, the remaining conjugate coordinates span the internal space.
Star maps transport points between the two sides along the lattice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .numberfield import FieldElement, NumberField


@dataclass(frozen=True)
class DeterminantResult:
    """Lattice determinant; ``exact`` holds the integer value when the
    discriminant is a perfect square."""

    value: float
    exact: Optional[int]
    discriminant: int

    def __float__(self):
        return self.value


class CutProjectScheme:
    """Projections and star maps for the lattice of a number field.

    Internal coordinates list the non-distinguished real conjugates in
    ascending order; a complex conjugate pair contributes a (Re, Im) plane
    through one representative of the pair.
    """

    def __init__(self, field: NumberField):
        self.field = field
        conj = field.conjugates()
        self.conjugates = conj
        self.pf_index = conj.pf_index
        if self.pf_index is None:
            raise ValueError("field has no real embedding to use as the physical direction")
        internal = []
        seen_complex = set()
        for i, root in enumerate(conj.roots):
            if i == self.pf_index:
                continue
            if root.is_real:
                internal.append((i, "real"))
            else:
                key = (root.center.real, abs(root.center.imag))
                if key in seen_complex:
                    continue
                seen_complex.add(key)
                internal.append((i, "complex"))
        self.internal_roots = tuple(internal)
        self.internal_dim = sum(1 if kind == "real" else 2 for _, kind in internal)
        self._star_matrix = self._build_star_matrix()

    def _build_star_matrix(self) -> np.ndarray:
        m = self.field.degree
        rows = []
        for idx, kind in self.internal_roots:
            root = self.conjugates.roots[idx]
            if kind == "real":
                r = float((root.lo + root.hi) / 2)
                rows.append([r**k for k in range(m)])
            else:
                z = root.center
                rows.append([(z**k).real for k in range(m)])
                rows.append([(z**k).imag for k in range(m)])
        if not rows:  # degree-1 field: empty internal space
            return np.zeros((0, m))
        return np.array(rows, dtype=float)

    @property
    def physical_dim(self) -> int:
        return 1

    def generator_matrix(self) -> np.ndarray:
        """Vandermonde generator: row per root, column i holds the root^i."""
        m = self.field.degree
        roots = [r.value() for r in self.conjugates.roots]
        return np.array([[complex(r) ** k for k in range(m)] for r in roots])

    # -- star maps -----------------------------------------------------------

    def star(self, x) -> np.ndarray:
        """Internal-space image of a ring element (or coordinate vector)."""
        coords = x.coords if isinstance(x, FieldElement) else tuple(x)
        return self._star_matrix @ np.asarray(coords, dtype=float)

    def star_many(self, coords: np.ndarray) -> np.ndarray:
        """Star map applied to rows of an integer coordinate array."""
        return np.asarray(coords, dtype=float) @ self._star_matrix.T

    def costar(self, coords) -> float:
        """Physical value of a lattice point given by integer coordinates."""
        if isinstance(coords, FieldElement):
            coords = coords.coords
        return self.field.embed_value(tuple(coords), self.pf_index)

    def internal_multiplication_matrix(self, element: FieldElement) -> np.ndarray:
        """Internal-space linear map of multiplication by a ring element.

        Block diagonal: a real conjugate contributes the scalar value of the
        element there, a complex pair the 2x2 rotation-scaling block.
        """
        blocks = []
        for idx, kind in self.internal_roots:
            v = self.field.embed_value(element.coords, idx)
            if kind == "real":
                blocks.append(np.array([[v]]))
            else:
                blocks.append(np.array([[v.real, -v.imag], [v.imag, v.real]]))
        if not blocks:
            return np.zeros((0, 0))
        out = np.zeros((self.internal_dim, self.internal_dim))
        pos = 0
        for b in blocks:
            k = b.shape[0]
            out[pos : pos + k, pos : pos + k] = b
            pos += k
        return out

    def contraction_factor(self, element: FieldElement) -> float:
        """Certified upper bound on the internal spectral radius of the element."""
        worst = 0.0
        for idx, _ in self.internal_roots:
            worst = max(worst, _abs_upper(self.field, element, idx))
        return worst

    def lattice_determinant(self) -> DeterminantResult:
        """|det| of the Vandermonde generator, via the discriminant identity.

        The squared determinant equals |disc| of the defining polynomial, so a
        perfect-square discriminant gives the determinant exactly.
        """
        disc = self.field.minpoly.discriminant()
        adisc = abs(disc)
        root = math.isqrt(adisc)
        if root * root == adisc:
            return DeterminantResult(float(root), root, disc)
        return DeterminantResult(math.sqrt(adisc), None, disc)


def _abs_upper(field: NumberField, element: FieldElement, root_index: int) -> float:
    root = field.conjugates().roots[root_index]
    if root.is_real:
        lo, hi = field.embed_interval(element.coords, root_index)
        return float(max(abs(lo), abs(hi)))
    z, rad = root.center, root.radius
    # |sum c_k z^k| <= |value at centre| + sum |c_k| k R^(k-1) rad for R >= |z|+rad
    val = abs(field.embed_value(element.coords, root_index))
    radius_bound = abs(z) + rad
    slope = sum(abs(c) * k * radius_bound ** (k - 1) for k, c in enumerate(element.coords) if k)
    return val + slope * rad


@dataclass(frozen=True)
class DensityReport:
    """Comparison of a point-set density against window volume / lattice determinant."""

    mu_window: float
    det_lattice: float
    density: float
    ratio: float
    rel_error: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {
            "mu_W": self.mu_window,
            "det_lambda": self.det_lattice,
            "dens": self.density,
            "ratio": self.ratio,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def window_density_check(mu_window: float, det_lattice: float, density: float,
                         tolerance: float) -> DensityReport:
    """Does mu(W) / det agree with the density within a relative tolerance?"""
    if mu_window <= 0 or det_lattice <= 0 or density <= 0:
        raise ValueError("all quantities must be positive")
    ratio = mu_window / det_lattice
    rel = abs(ratio - density) / density
    return DensityReport(
        mu_window=float(mu_window),
        det_lattice=float(det_lattice),
        density=float(density),
        ratio=ratio,
        rel_error=rel,
        tolerance=tolerance,
        passed=rel <= tolerance,
    )
