"""Exact arithmetic in Z[lambda] with certified numerical embeddings.

A :class:`NumberField` is defined by a monic integer polynomial.  Elements are
integer coordinate vectors over the power basis ``1, lambda, ..., lambda^(m-1)``
and all ring operations stay exact.  Numerical questions (values of the
conjugates, Pisot classification, signs of elements under an embedding) are
answered through certified enclosures: exact rational intervals for real
roots, centre/radius discs for complex ones.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import intpoly
from .errors import (
    FieldMismatchError,
    NotAUnitError,
    NotSquarefreeError,
    PrecisionUnreachableError,
    ZeroElementError,
)
from .intpoly import IntPolynomial

DEFAULT_PRECISION = Fraction(1, 10**15)


# ---------------------------------------------------------------------------
# Certified root enclosures


@dataclass(frozen=True)
class RootEnclosure:
    """One root of a squarefree polynomial, certified to lie in the enclosure.

    Real roots carry an exact rational interval [lo, hi].  Complex roots carry
    a floating point centre and a radius; the disc is certified to contain
    exactly one root.
    """

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    center: Optional[complex] = None
    radius: float = 0.0

    @property
    def is_real(self) -> bool:
        return self.lo is not None

    def value(self):
        if self.is_real:
            return float((self.lo + self.hi) / 2)
        return self.center

    def abs_bounds(self):
        """Certified (lower, upper) bounds on the modulus of the root."""
        if self.is_real:
            if self.lo >= 0:
                return self.lo, self.hi
            if self.hi <= 0:
                return -self.hi, -self.lo
            return Fraction(0), max(-self.lo, self.hi)
        mag = abs(self.center)
        return max(0.0, mag - self.radius), mag + self.radius

    def width(self):
        if self.is_real:
            return self.hi - self.lo
        return 2 * self.radius


@dataclass(frozen=True)
class ConjugateSet:
    """All roots of a squarefree monic polynomial with certified enclosures."""

    polynomial: IntPolynomial
    roots: tuple
    pf_index: Optional[int]
    precision: Fraction

    @property
    def degree(self) -> int:
        return self.polynomial.degree

    def internal_indices(self):
        """Indices of the conjugates other than the distinguished real root."""
        return tuple(i for i in range(len(self.roots)) if i != self.pf_index)

    def values(self):
        return [r.value() for r in self.roots]


def _integer_roots(coeffs):
    """Integer roots of a monic integer polynomial (all rational roots)."""
    c = intpoly.normalize(coeffs)
    roots = []
    while c[0] == 0 and intpoly.degree(c) >= 1:
        roots.append(0)
        c = c[1:]
    const = abs(c[0])
    if intpoly.degree(c) >= 1 and const:
        divisors = {d for d in range(1, int(math.isqrt(const)) + 1) if const % d == 0}
        divisors |= {const // d for d in divisors}
        for d in sorted(divisors):
            for cand in (d, -d):
                while intpoly.eval_at(c, cand) == 0:
                    roots.append(cand)
                    c = intpoly.divexact(c, (-cand, 1))
    return roots, c


def _isolate_real(coeffs, precision: Fraction):
    """Exact rational isolating intervals for all real roots (Sturm bisection)."""
    int_roots, core = _integer_roots(coeffs)
    enclosures = [RootEnclosure(lo=Fraction(r), hi=Fraction(r)) for r in int_roots]
    if intpoly.degree(core) < 1:
        return enclosures
    chain = intpoly.sturm_chain(core)
    bound = intpoly.cauchy_root_bound(core) + 1
    stack = [(-bound, bound)]
    isolated = []
    while stack:
        lo, hi = stack.pop()
        n = intpoly.count_real_roots(core, lo, hi, chain)
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    for lo, hi in isolated:
        # core has no rational roots, so signs at dyadic points never vanish
        flo = intpoly.eval_at(core, lo)
        while hi - lo > precision * max(abs(lo), abs(hi), Fraction(1, 10**6)):
            mid = (lo + hi) / 2
            fmid = intpoly.eval_at(core, mid)
            if (flo > 0) == (fmid > 0):
                lo, flo = mid, fmid
            else:
                hi = mid
        enclosures.append(RootEnclosure(lo=lo, hi=hi))
    enclosures.sort(key=lambda e: e.lo)
    return enclosures


def _certify_complex(coeffs, real_enclosures, n_complex, precision: Fraction):
    """Complex roots as certified discs via high-precision Newton polishing.

    Any point z has a root of p within deg(p) * |p(z)/p'(z)|; once the discs
    are pairwise disjoint and disjoint from the real intervals, each contains
    exactly one root.
    """
    deg = intpoly.degree(coeffs)
    desc = list(reversed(coeffs))
    dps = 40
    target = float(precision)
    while dps <= 600:
        with mpmath.workdps(dps):
            try:
                roots = list(mpmath.polyroots([mpmath.mpf(c) for c in desc], maxsteps=200, extraprec=60))
            except mpmath.libmp.NoConvergence:
                dps *= 2
                continue
            # peel off the roots matching the certified real enclosures
            rem = roots[:]
            for enc in real_enclosures:
                mid = (enc.lo + enc.hi) / 2
                midf = mpmath.mpf(mid.numerator) / mid.denominator
                best = min(rem, key=lambda r: abs(r - midf))
                rem.remove(best)
            cands = [r for r in rem if mpmath.im(r) > 0]
            if 2 * len(cands) != n_complex:
                dps *= 2
                continue
            dcoeffs = intpoly.derivative(coeffs)
            discs = []
            for r in cands:
                val = intpoly.eval_at(coeffs, r)
                dval = intpoly.eval_at(dcoeffs, r)
                if dval == 0:
                    discs = None
                    break
                rad = float(deg * abs(val / dval)) * 1.0001 + 1e-300
                discs.append((complex(r), rad))
        if discs is not None:
            ok = all(rad <= target * max(abs(c), 1e-6) for c, rad in discs)
            for (c1, r1), (c2, r2) in itertools.combinations(discs, 2):
                if abs(c1 - c2) <= r1 + r2:
                    ok = False
            for c, rad in discs:
                for enc in real_enclosures:
                    if abs(c.imag) <= rad and float(enc.lo) - rad <= c.real <= float(enc.hi) + rad:
                        ok = False
            if ok:
                out = []
                for c, rad in discs:
                    out.append(RootEnclosure(center=c, radius=rad))
                    out.append(RootEnclosure(center=c.conjugate(), radius=rad))
                return out
        dps *= 2
    raise PrecisionUnreachableError("complex root certification stalled")


def isolate_roots(poly: IntPolynomial, precision: Fraction = DEFAULT_PRECISION) -> ConjugateSet:
    """Certified enclosures for all roots of a squarefree monic polynomial."""
    if not isinstance(precision, Fraction):
        precision = Fraction(precision).limit_denominator(10**30)
    poly.require_squarefree()
    real = _isolate_real(poly.coefficients, precision)
    n_complex = poly.degree - len(real)
    roots = list(real)
    if n_complex:
        roots += _certify_complex(poly.coefficients, real, n_complex, precision)
    pf_index = None
    if real:
        # the distinguished root is the largest real root
        pf_index = max(range(len(real)), key=lambda i: real[i].lo)
    return ConjugateSet(poly, tuple(roots), pf_index, precision)


# ---------------------------------------------------------------------------
# Pisot / Salem classification


class PisotClass(enum.Enum):
    PV = "PV"
    SALEM = "Salem"
    NEITHER = "Neither"
    INDETERMINATE = "Indeterminate"


def classify_pisot(poly: IntPolynomial, precision: Fraction = DEFAULT_PRECISION,
                   use_reciprocal_test: bool = True) -> PisotClass:
    """Classify the largest real root of a minimal polynomial.

    PV requires every other conjugate certifiably inside the open unit disc;
    a conjugate certifiably outside gives Neither.  Enclosures can never
    certify modulus exactly one, so Salem numbers are detected algebraically:
    a palindromic polynomial maps under x + 1/x to a polynomial whose real
    roots in (-2, 2) account for the unit-circle conjugate pairs.

    The input must be the minimal polynomial of a real algebraic integer
    larger than one; reducible input may be misclassified.
    """
    poly.require_squarefree()
    conj = isolate_roots(poly, precision)
    if conj.pf_index is None:
        raise ValueError("polynomial has no real root")
    lam = conj.roots[conj.pf_index]
    if lam.hi <= 1:
        raise ValueError("largest real root is not larger than one")
    for attempt in range(3):
        verdicts = []
        for i, root in enumerate(conj.roots):
            if i == conj.pf_index:
                continue
            lo, hi = root.abs_bounds()
            if hi < 1:
                verdicts.append("in")
            elif lo > 1:
                verdicts.append("out")
            else:
                verdicts.append("straddle")
        if all(v == "in" for v in verdicts):
            return PisotClass.PV
        if any(v == "out" for v in verdicts):
            return PisotClass.NEITHER
        if use_reciprocal_test and _salem_certificate(poly):
            return PisotClass.SALEM
        precision = precision * precision
        conj = isolate_roots(poly, precision)
    return PisotClass.INDETERMINATE


def _salem_certificate(poly: IntPolynomial) -> bool:
    """Exact Salem test for a palindromic minimal polynomial.

    Under y = x + 1/x, conjugate pairs on the unit circle become real roots
    of the decomposed polynomial inside (-2, 2) and the pair (lam, 1/lam)
    becomes the single real root above 2.  Salem holds iff the decomposition
    has exactly one root outside [-2, 2] (above 2) and all remaining roots
    real inside (-2, 2).
    """
    coeffs = poly.coefficients
    if poly.degree < 4 or poly.degree % 2 or not intpoly.is_palindromic(coeffs):
        return False
    if intpoly.eval_at(coeffs, 1) == 0 or intpoly.eval_at(coeffs, -1) == 0:
        return False
    q = intpoly.symmetric_decompose(coeffs)
    k = intpoly.degree(q)
    bound = intpoly.cauchy_root_bound(q) + 1
    chain = intpoly.sturm_chain(q)
    above = intpoly.count_real_roots(q, Fraction(2), bound, chain)
    below = intpoly.count_real_roots(q, -bound, Fraction(-2), chain)
    inside = intpoly.count_real_roots(q, Fraction(-2), Fraction(2), chain)
    return above == 1 and below == 0 and inside == k - 1


# ---------------------------------------------------------------------------
# Number fields and field elements


_FIELD_REGISTRY: dict = {}


class NumberField:
    """Z[lambda] for lambda a root of a monic integer polynomial.

    Instances are interned by defining polynomial, so identity comparison of
    fields is meaningful.  The distinguished embedding sends lambda to the
    largest real root of the polynomial.
    """

    def __new__(cls, minpoly: IntPolynomial):
        key = minpoly.coefficients
        field = _FIELD_REGISTRY.get(key)
        if field is None:
            field = super().__new__(cls)
            field._init(minpoly)
            _FIELD_REGISTRY[key] = field
        return field

    def _init(self, minpoly: IntPolynomial):
        self.minpoly = minpoly
        self.degree = minpoly.degree
        m = self.degree
        # reduction rows: coordinates of lambda^k for k = m .. 2m-2
        rows = []
        rel = tuple(-c for c in minpoly.coefficients[:-1])  # lambda^m
        cur = list(rel)
        rows.append(tuple(cur))
        for _ in range(m - 2):
            shifted = [0] + cur  # multiply by lambda
            overflow = shifted[m] if len(shifted) > m else 0
            cur = shifted[:m]
            if overflow:
                cur = [c + overflow * r for c, r in zip(cur, rel)]
            rows.append(tuple(cur))
        self._reduction = tuple(rows)
        self._conjugates: dict = {}
        self._pisot_class = None

    # -- constructors ------------------------------------------------------

    def element(self, coords) -> "FieldElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, coords)

    def zero(self) -> "FieldElement":
        return self.element((0,) * self.degree)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "FieldElement":
        return self.element((n,) + (0,) * (self.degree - 1))

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            return self.from_int(-self.minpoly.coefficients[0])
        return self.element((0, 1) + (0,) * (self.degree - 2))

    # -- exact arithmetic on raw coordinate tuples -------------------------

    def reduce_product(self, conv):
        """Reduce a convolution of length <= 2m-1 to the power basis."""
        m = self.degree
        out = list(conv[:m]) + [0] * (m - len(conv[:m]))
        for k in range(m, len(conv)):
            c = conv[k]
            if c:
                row = self._reduction[k - m]
                for i in range(m):
                    out[i] += c * row[i]
        return tuple(out)

    def mul_coords(self, a, b):
        m = self.degree
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        return self.reduce_product(conv)

    def qinverse(self, coords):
        """Inverse in Q(lambda) as Fraction coordinates (extended Euclid)."""
        if all(c == 0 for c in coords):
            raise ZeroElementError("zero has no inverse")
        a = tuple(Fraction(c) for c in intpoly.normalize(coords))
        b = tuple(Fraction(c) for c in self.minpoly.coefficients)
        # Bezout: s*a + t*b = gcd (gcd constant since minpoly irreducible over Q)
        r0, r1 = b, a
        s0, s1 = (Fraction(0),), (Fraction(1),)
        while intpoly.degree(r1) > 0:
            q, r = intpoly.divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, intpoly.sub(s0, intpoly.mul(q, s1))
        if intpoly.is_zero(r1):
            raise ZeroDivisionError("element shares a factor with the defining polynomial")
        g = r1[0]
        inv = tuple(Fraction(c) / g for c in s1)
        _, inv = intpoly.divmod_frac(inv, b)
        out = list(inv) + [Fraction(0)] * (self.degree - len(inv))
        return tuple(out[: self.degree])

    # -- conjugates and embeddings ------------------------------------------

    def conjugates(self, precision: Fraction = DEFAULT_PRECISION) -> ConjugateSet:
        cs = self._conjugates.get(precision)
        if cs is None:
            cs = isolate_roots(self.minpoly, precision)
            self._conjugates[precision] = cs
        return cs

    @property
    def pf_index(self) -> int:
        return self.conjugates().pf_index

    def pisot_class(self) -> PisotClass:
        if self._pisot_class is None:
            self._pisot_class = classify_pisot(self.minpoly)
        return self._pisot_class

    def embed_interval(self, coords, root_index: int, precision=DEFAULT_PRECISION):
        """Exact rational interval for a real-root embedding of coords."""
        root = self.conjugates(precision).roots[root_index]
        if not root.is_real:
            raise ValueError("interval embedding requires a real root")
        lo, hi = Fraction(0), Fraction(0)
        plo, phi = Fraction(1), Fraction(1)
        for k, c in enumerate(coords):
            if k:
                plo, phi = _interval_mul(plo, phi, root.lo, root.hi)
            if c > 0:
                lo, hi = lo + c * plo, hi + c * phi
            elif c < 0:
                lo, hi = lo + c * phi, hi + c * plo
        return lo, hi

    def embed_value(self, coords, root_index: int, precision=DEFAULT_PRECISION):
        root = self.conjugates(precision).roots[root_index]
        if root.is_real:
            lo, hi = self.embed_interval(coords, root_index, precision)
            return float((lo + hi) / 2)
        z = root.center
        acc = 0j
        for c in reversed(coords):
            acc = acc * z + c
        return acc

    def compare(self, a_coords, b_coords, root_index: int) -> int:
        """Certified comparison of two elements under a real embedding."""
        if tuple(a_coords) == tuple(b_coords):
            return 0
        diff = tuple(x - y for x, y in zip(a_coords, b_coords))
        precision = DEFAULT_PRECISION
        for _ in range(6):
            lo, hi = self.embed_interval(diff, root_index, precision)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            precision = precision * precision
        raise PrecisionUnreachableError("sign of nonzero element could not be certified")


def _interval_mul(alo, ahi, blo, bhi):
    vals = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(vals), max(vals)


@dataclass(frozen=True)
class FieldElement:
    """An element of Z[lambda], exact integer coordinates over the power basis."""

    field: NumberField
    coords: tuple

    def _check(self, other: "FieldElement"):
        if self.field is not other.field:
            raise FieldMismatchError("elements belong to different fields")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, tuple(other * a for a in self.coords))
        self._check(other)
        return FieldElement(self.field, self.field.mul_coords(self.coords, other.coords))

    __rmul__ = __mul__
    __radd__ = __add__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _coerce(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        return other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = self.field.one(), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def inverse(self) -> "FieldElement":
        """Inverse in Z[lambda]; NotAUnitError when only a field inverse exists."""
        if self.is_zero():
            raise ZeroElementError("zero element")
        inv = self.field.qinverse(self.coords)
        if any(c.denominator != 1 for c in inv):
            raise NotAUnitError(f"{self} is not a unit of the ring")
        return self.field.element(tuple(c.numerator for c in inv))

    # -- embeddings ----------------------------------------------------------

    def embed(self, root_index: Optional[int] = None):
        """Certified numerical value at one conjugate (default: the PF root)."""
        if root_index is None:
            root_index = self.field.pf_index
        return self.field.embed_value(self.coords, root_index)

    def embed_interval(self, root_index: Optional[int] = None):
        if root_index is None:
            root_index = self.field.pf_index
        return self.field.embed_interval(self.coords, root_index)

    def compare(self, other: "FieldElement", root_index: Optional[int] = None) -> int:
        other = self._coerce(other)
        self._check(other)
        if root_index is None:
            root_index = self.field.pf_index
        return self.field.compare(self.coords, other.coords, root_index)

    def to_dict(self):
        return {"coords": list(self.coords), "minpoly": list(self.field.minpoly.coefficients)}

    def __str__(self):
        names = {0: "1", 1: "L", 2: "L^2", 3: "L^3"}
        parts = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            name = names.get(k, f"L^{k}")
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}{name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def element_from_dict(data) -> FieldElement:
    field = NumberField(IntPolynomial(tuple(data["minpoly"])))
    return field.element(tuple(data["coords"]))


def fe_add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def fe_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def fe_inverse(x: FieldElement) -> FieldElement:
    return x.inverse()


def embed(x: FieldElement, root_index: int, conj: Optional[ConjugateSet] = None):
    """Evaluate an element at one conjugate root."""
    if conj is not None and conj.polynomial != x.field.minpoly:
        raise FieldMismatchError("conjugate set belongs to a different polynomial")
    return x.field.embed_value(x.coords, root_index)


# ---------------------------------------------------------------------------
# Minimal polynomials


def minimal_polynomial_in_field(element: FieldElement) -> IntPolynomial:
    """Minimal polynomial over Q of an element given inside a number field.

    Found as the first linear dependence among the powers of the element
    (incremental exact Gaussian elimination); the result is monic and
    irreducible, and is checked to have integer coefficients.
    """
    field = element.field
    m = field.degree
    echelon: list = []  # (pivot index, normalized row, power-combination)
    cur = field.one()
    power = 0
    while power <= m:
        vec = [Fraction(c) for c in cur.coords]
        combo = {power: Fraction(1)}
        for piv, row, rcombo in echelon:
            f = vec[piv]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
                for k, v in rcombo.items():
                    combo[k] = combo.get(k, Fraction(0)) - f * v
        piv = next((i for i, v in enumerate(vec) if v != 0), None)
        if piv is None:
            coeffs = [Fraction(0)] * (power + 1)
            for k, v in combo.items():
                coeffs[k] = v
            if any(c.denominator != 1 for c in coeffs):
                raise ValueError("element is not an algebraic integer of its field")
            return IntPolynomial(tuple(int(c) for c in coeffs))
        scale = vec[piv]
        echelon.append((piv, [v / scale for v in vec], {k: v / scale for k, v in combo.items()}))
        cur = cur * element
        power += 1
    raise RuntimeError("no linear dependence found up to the field degree")


def _solve_rational(rows, target):
    """Solve sum a_i rows[i] = target over Q, or None when inconsistent."""
    if not rows:
        return None
    n = len(rows)
    m = len(target)
    # build augmented system: columns are the row vectors
    aug = [[Fraction(rows[i][j]) for i in range(n)] + [Fraction(target[j])] for j in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][n]
    # verify (also catches inconsistent rows below the pivot block)
    for j in range(m):
        acc = sum(sol[i] * Fraction(rows[i][j]) for i in range(n))
        if acc != Fraction(target[j]):
            return None
    return sol


def minimal_polynomial_of_root(poly: IntPolynomial, root_index: Optional[int] = None) -> IntPolynomial:
    """Irreducible factor of ``poly`` containing the distinguished root.

    The squarefree part is returned directly when a small-prime certificate
    proves it irreducible; otherwise the factor is recovered by searching
    subsets of high-precision roots whose product rounds to an integer
    polynomial dividing the input (ascending subset size, so the first hit is
    irreducible).
    """
    sf = intpoly.squarefree_part(poly.coefficients)
    sf_poly = IntPolynomial(sf)
    if intpoly.irreducibility_certificate(sf) is not None:
        return sf_poly
    deg = sf_poly.degree
    if deg > 24:
        raise PrecisionUnreachableError("factor search is limited to degree 24")
    with mpmath.workdps(60):
        roots = list(mpmath.polyroots([mpmath.mpf(c) for c in reversed(sf)], maxsteps=200, extraprec=80))
        conj = isolate_roots(sf_poly)
        if root_index is None:
            root_index = conj.pf_index
        target_enc = conj.roots[root_index]
        if target_enc.is_real:
            mid = (target_enc.lo + target_enc.hi) / 2
            tval = mpmath.mpf(mid.numerator) / mid.denominator
            target = min(roots, key=lambda r: abs(r - tval))
        else:
            target = min(roots, key=lambda r: abs(complex(r) - target_enc.center))
        others = [r for r in roots if r is not target]
        for size in range(1, deg + 1):
            for combo in itertools.combinations(others, size - 1):
                prod = [mpmath.mpf(1)]
                for r in (target, *combo):
                    prod = _poly_mul_root(prod, r)
                cand = []
                ok = True
                for c in prod:
                    ci = mpmath.nint(mpmath.re(c))
                    if abs(c - ci) > mpmath.mpf("1e-20") * max(1, abs(ci)):
                        ok = False
                        break
                    cand.append(int(ci))
                if not ok:
                    continue
                cand_t = intpoly.normalize(tuple(reversed(cand)))
                if intpoly.degree(cand_t) != size or cand_t[-1] != 1:
                    continue
                if intpoly.divides(cand_t, sf):
                    return IntPolynomial(cand_t)
    raise PrecisionUnreachableError("no integer factor found")


def _poly_mul_root(desc_coeffs, root):
    """Multiply a descending-coefficient polynomial by (x - root)."""
    out = [mpmath.mpf(0)] * (len(desc_coeffs) + 1)
    for i, c in enumerate(desc_coeffs):
        out[i] += c
        out[i + 1] -= c * root
    return out
