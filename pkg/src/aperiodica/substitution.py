"""Symbolic substitutions, their matrices, Perron-Frobenius data and tilings.

A substitution rewrites each letter of a finite alphabet into a nonempty word.
Its matrix ``A[i][j]`` counts occurrences of letter ``j`` in the image of
letter ``i``.  With that row convention the tile lengths form a right
eigenvector (inflating a tile of type ``t`` produces children whose lengths
sum to ``lambda * len(t)``) and the letter frequencies form a left eigenvector
(counts evolve by ``counts @ A``).  Both eigenvectors are computed exactly
over Q(lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import intpoly
from .errors import (
    MergeIllegalError,
    NoLegalSeedError,
    NotPrimitiveError,
)
from .intpoly import IntPolynomial
from .numberfield import (
    FieldElement,
    NumberField,
    minimal_polynomial_in_field,
    minimal_polynomial_of_root,
)


@dataclass(frozen=True)
class SymbolicSubstitution:
    """Rewrite rules over an ordered alphabet of letters."""

    alphabet: tuple
    rules: tuple  # tuple of words, each a tuple of letters, aligned with alphabet

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet letters must be distinct")
        if len(self.rules) != len(self.alphabet):
            raise ValueError("every letter needs a rule")
        seen = set()
        for word in self.rules:
            if not word:
                raise ValueError("rule words must be nonempty")
            for letter in word:
                if letter not in self.alphabet:
                    raise ValueError(f"rule uses unknown letter {letter!r}")
                seen.add(letter)
        missing = [a for a in self.alphabet if a not in seen]
        if missing:
            raise ValueError(f"letters {missing} never occur in any rule image")

    @classmethod
    def from_dict(cls, rules: dict, alphabet: Optional[Sequence] = None):
        alphabet = tuple(alphabet) if alphabet is not None else tuple(rules)
        return cls(alphabet, tuple(tuple(rules[a]) for a in alphabet))

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def rule(self, letter):
        return self.rules[self.alphabet.index(letter)]

    def rules_dict(self) -> dict:
        return {a: self.rules[i] for i, a in enumerate(self.alphabet)}

    def apply(self, word):
        out = []
        for letter in word:
            out.extend(self.rule(letter))
        return tuple(out)

    def iterate(self, word, k: int):
        for _ in range(k):
            word = self.apply(word)
        return word

    def power(self, k: int) -> "SymbolicSubstitution":
        """The substitution applied k times, as a substitution."""
        rules = tuple(self.iterate((a,), k) for a in self.alphabet)
        return SymbolicSubstitution(self.alphabet, rules)

    def rename(self, mapping: dict) -> "SymbolicSubstitution":
        alphabet = tuple(mapping.get(a, a) for a in self.alphabet)
        rules = tuple(tuple(mapping.get(x, x) for x in word) for word in self.rules)
        return SymbolicSubstitution(alphabet, rules)

    def __str__(self):
        return ", ".join(
            f"{a} -> {' '.join(str(x) for x in word)}" for a, word in zip(self.alphabet, self.rules)
        )


def matrix_of(s: SymbolicSubstitution) -> np.ndarray:
    """Substitution matrix: entry (i, j) counts letter j in the image of letter i."""
    m = s.size
    index = {a: i for i, a in enumerate(s.alphabet)}
    mat = np.zeros((m, m), dtype=np.int64)
    for i, word in enumerate(s.rules):
        for letter in word:
            mat[i, index[letter]] += 1
    return mat


def is_primitive(matrix) -> bool:
    """True iff some power of the nonnegative matrix is strictly positive.

    Checked with boolean arithmetic up to the Wielandt bound (m-1)^2 + 1.
    """
    mat = np.asarray(matrix)
    m = mat.shape[0]
    if np.any(mat < 0):
        raise ValueError("matrix must be nonnegative")
    rows = [sum(1 << j for j in range(m) if mat[i, j]) for i in range(m)]
    full = (1 << m) - 1
    power = rows[:]
    bound = (m - 1) ** 2 + 1
    for _ in range(bound):
        if all(r == full for r in power):
            return True
        power = [
            _bool_row_mul(power[i], rows, m)
            for i in range(m)
        ]
    return all(r == full for r in power)


def _bool_row_mul(row_mask: int, rows, m: int) -> int:
    out = 0
    mask = row_mask
    while mask:
        j = (mask & -mask).bit_length() - 1
        out |= rows[j]
        mask &= mask - 1
    return out


# ---------------------------------------------------------------------------
# The staircase matrix family and its inflation factors


def mn_matrix(n: int) -> np.ndarray:
    """0/1 matrix with ones where i + j > n (1-based indices)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return np.fromfunction(lambda i, j: (i + j >= n - 1) * 1, (n, n), dtype=int).astype(np.int64)


def mn_substitution(n: int) -> SymbolicSubstitution:
    """Substitution with matrix mn_matrix(n): letter i maps to (n-i+1) ... n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    letters = tuple(str(i) for i in range(1, n + 1))
    rules = tuple(tuple(str(j) for j in range(n - i + 1, n + 1)) for i in range(1, n + 1))
    return SymbolicSubstitution(letters, rules)


@lru_cache(maxsize=None)
def mn_pf_minimal_polynomial(n: int) -> IntPolynomial:
    """Minimal polynomial of the PF eigenvalue of mn_matrix(n), exactly.

    The eigenvalue is sin(n pi / (2n+1)) / sin(pi / (2n+1)); writing it as a
    Chebyshev polynomial in c = 2 cos(pi / (2n+1)) reduces the extraction to
    exact linear algebra inside Z[c].
    """
    big_n = 2 * n + 1
    psi = IntPolynomial(intpoly.cos_subfield_minpoly(big_n))
    field = NumberField(psi)
    if field.degree == 1:
        return psi
    c = field.generator()
    u_prev, u = field.one(), c  # U_k(c/2) recurrence
    for _ in range(n - 2):
        u_prev, u = u, c * u - u_prev
    return minimal_polynomial_in_field(u)


def sine_values(n: int, count: Optional[int] = None):
    """s_k = sin(k pi / (2n+1)) for k = 0 .. count (floats)."""
    if count is None:
        count = n
    return [math.sin(k * math.pi / (2 * n + 1)) for k in range(count + 1)]


def sine_ratio_identity_error(n: int, k: int, i: int) -> float:
    """Defect of (s_k/s_1) s_i = sum_{v=0}^{k-1} s_{i+1-k+2v}.

    Negative indices use the odd extension s_{-j} = -s_j with s_0 = 0, which
    makes the identity hold for all 1 <= k, i <= n.
    """
    s = sine_values(n, 2 * n + 1)

    def s_ext(j: int) -> float:
        if j >= 0:
            return s[j]
        return -s[-j]

    lhs = s[k] / s[1] * s[i]
    rhs = sum(s_ext(i + 1 - k + 2 * v) for v in range(k))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Exact Perron-Frobenius data


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _frac_coords(field: NumberField, value) -> tuple:
    if isinstance(value, FieldElement):
        return tuple(Fraction(c) for c in value.coords)
    return tuple(Fraction(c) for c in value)


def _fadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _fsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _fmul(field, a, b):
    return field.reduce_product(_convolve(a, b))


def _convolve(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _finv(field, a):
    den = 1
    for c in a:
        den = _lcm(den, c.denominator)
    ints = tuple(int(c * den) for c in a)
    inv = field.qinverse(ints)
    return tuple(c * den for c in inv)


def _is_zero_vec(a):
    return all(c == 0 for c in a)


def nullspace_vector(field: NumberField, rows) -> list:
    """One nonzero kernel vector of a matrix over Q(lambda) with 1-dim kernel.

    ``rows`` is an n x n list of Fraction coordinate tuples.  Gaussian
    elimination with exact field inverses; the free variable is set to one.
    """
    n = len(rows)
    m = field.degree
    zero = tuple([Fraction(0)] * m)
    one = tuple([Fraction(1)] + [Fraction(0)] * (m - 1))
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if not _is_zero_vec(mat[i][col])), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = _finv(field, mat[r][col])
        mat[r] = [_fmul(field, inv, x) for x in mat[r]]
        for i in range(n):
            if i != r and not _is_zero_vec(mat[i][col]):
                f = mat[i][col]
                mat[i] = [_fsub(x, _fmul(field, f, y)) for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise NotPrimitiveError(f"kernel dimension is {len(free)}, expected 1")
    fc = free[0]
    vec = [zero] * n
    vec[fc] = one
    for row_i, col in enumerate(pivots):
        vec[col] = tuple(-x for x in mat[row_i][fc])
    return vec


def _eigencoords(matrix, field: NumberField, transpose: bool) -> list:
    """Exact eigenvector of the PF eigenvalue, as Fraction coordinate tuples."""
    n = len(matrix)
    m = field.degree
    lam = field.generator()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            a = matrix[j][i] if transpose else matrix[i][j]
            coords = [Fraction(a) if k == 0 else Fraction(0) for k in range(m)]
            if i == j:
                coords = list(_fsub(tuple(coords), _frac_coords(field, lam)))
            row.append(tuple(coords))
        rows.append(row)
    return nullspace_vector(field, rows)


@dataclass(frozen=True)
class PFData:
    """Perron-Frobenius data of a primitive substitution matrix.

    ``lengths`` is the right eigenvector (tile lengths, anchor letter
    normalized to one) and ``frequencies`` the left eigenvector normalized to
    sum one.  Exact coordinate vectors over Q(lambda) accompany the floats.
    """

    matrix: np.ndarray
    minimal_polynomial: IntPolynomial
    field: NumberField
    pf_value: float
    frequencies: np.ndarray
    lengths: np.ndarray
    frequencies_exact: tuple
    lengths_exact: tuple
    anchor_index: int

    def pf_root(self) -> FieldElement:
        return self.field.generator()

    def length_elements(self):
        """Lengths as ring elements; None entries where a coordinate is fractional."""
        out = []
        for coords in self.lengths_exact:
            if all(c.denominator == 1 for c in coords):
                out.append(self.field.element(tuple(c.numerator for c in coords)))
            else:
                out.append(None)
        return out

    def scaled_length_elements(self):
        """(elements, scale): lengths multiplied by the smallest integer making them integral."""
        den = 1
        for coords in self.lengths_exact:
            for c in coords:
                den = _lcm(den, c.denominator)
        elems = [
            self.field.element(tuple(int(c * den) for c in coords))
            for coords in self.lengths_exact
        ]
        return elems, den


def pf_data(matrix, anchor_index: Optional[int] = None) -> PFData:
    """Certified PF eigenvalue and exact eigenvectors of a primitive matrix."""
    mat = np.asarray(matrix, dtype=np.int64)
    if not is_primitive(mat):
        raise NotPrimitiveError("matrix is not primitive")
    minpoly = minimal_polynomial_of_root(IntPolynomial(intpoly.charpoly(mat.tolist())))
    field = NumberField(minpoly)
    right = _eigencoords(mat.tolist(), field, transpose=False)
    left = _eigencoords(mat.tolist(), field, transpose=True)
    pf_idx = field.pf_index
    right_vals = np.array([field.embed_value(c, pf_idx) for c in right])
    left_vals = np.array([field.embed_value(c, pf_idx) for c in left])
    if right_vals.sum() < 0:
        right = [tuple(-x for x in c) for c in right]
        right_vals = -right_vals
    if left_vals.sum() < 0:
        left = [tuple(-x for x in c) for c in left]
        left_vals = -left_vals
    if np.any(right_vals <= 0) or np.any(left_vals <= 0):
        raise NotPrimitiveError("PF eigenvector is not strictly positive")
    if anchor_index is None:
        anchor_index = int(np.argmin(right_vals))
    inv_anchor = _finv(field, right[anchor_index])
    right = [_fmul(field, c, inv_anchor) for c in right]
    total = left[0]
    for c in left[1:]:
        total = _fadd(total, c)
    inv_total = _finv(field, total)
    left = [_fmul(field, c, inv_total) for c in left]
    return PFData(
        matrix=mat,
        minimal_polynomial=minpoly,
        field=field,
        pf_value=float(field.embed_value(field.generator().coords, pf_idx)),
        frequencies=np.array([field.embed_value(c, pf_idx) for c in left]),
        lengths=np.array([field.embed_value(c, pf_idx) for c in right]),
        frequencies_exact=tuple(left),
        lengths_exact=tuple(right),
        anchor_index=anchor_index,
    )


def density(volumes, frequencies) -> float:
    """Points per unit volume of a tiling point set: 1 / sum(freq * volume).

    ``frequencies`` must be normalized to sum one.
    """
    volumes = np.asarray(volumes, dtype=float)
    frequencies = np.asarray(frequencies, dtype=float)
    if volumes.shape != frequencies.shape:
        raise ValueError("dimension mismatch between volumes and frequencies")
    return float(1.0 / np.dot(volumes, frequencies))


# ---------------------------------------------------------------------------
# Merging adjacent tiles


def merge_letters(s: SymbolicSubstitution, pair, into, lengths: Optional[dict] = None,
                  window_letters: int = 10_000):
    """Merge every occurrence of the adjacent pair ``xy`` into a single letter.

    Legal only when x is always followed by y: this is verified on all rule
    images of sigma^j for j up to size+2 and on a generated word window (a
    semi-decision; a full proof is out of scope).  When ``lengths`` is given,
    the merged letter's length is the exact sum, and must match any existing
    length for ``into``.

    Returns the merged substitution, or (substitution, lengths) when lengths
    were supplied.
    """
    x, y = pair
    if x not in s.alphabet or y not in s.alphabet:
        raise MergeIllegalError(f"letters {pair} not in alphabet")
    if x == y:
        raise MergeIllegalError("cannot merge a letter with itself")

    def check_word(word, at_end_ok: bool):
        for i, letter in enumerate(word):
            if letter == x:
                if i + 1 >= len(word):
                    if not at_end_ok:
                        raise MergeIllegalError(f"{x!r} at the end of a rule image")
                elif word[i + 1] != y:
                    raise MergeIllegalError(f"{x!r} followed by {word[i + 1]!r}, not {y!r}")

    for j in range(1, s.size + 3):
        for a in s.alphabet:
            check_word(s.iterate((a,), j), at_end_ok=False)
    window = _sample_window(s, window_letters)
    check_word(window[:-1], at_end_ok=True)

    def merge_word(word):
        out = []
        i = 0
        while i < len(word):
            if word[i] == x:
                out.append(into)
                i += 2
            else:
                out.append(word[i])
                i += 1
        return tuple(out)

    fused = merge_word(s.rule(x) + s.rule(y))
    new_rules = {}
    for a in s.alphabet:
        if a == x:
            continue
        new_rules[a] = merge_word(s.rule(a))
    if into in s.alphabet:
        if new_rules[into] != fused:
            raise MergeIllegalError(
                f"image of the merged pair {fused} disagrees with the rule of {into!r}"
            )
    else:
        new_rules[into] = fused
    alphabet = [a for a in s.alphabet if a != x]
    if into not in alphabet:
        alphabet.append(into)
    # prune letters that no longer occur in any image
    while True:
        used = {letter for word in new_rules.values() for letter in word}
        dead = [a for a in alphabet if a not in used]
        if not dead:
            break
        for a in dead:
            alphabet.remove(a)
            new_rules.pop(a)
    merged = SymbolicSubstitution(tuple(alphabet), tuple(new_rules[a] for a in alphabet))
    if lengths is None:
        return merged
    new_len = lengths[x] + lengths[y]
    if into in s.alphabet and not (lengths[into] - new_len).is_zero():
        raise MergeIllegalError("merged length does not equal the existing length")
    out_lengths = {a: lengths[a] for a in alphabet if a in lengths}
    out_lengths[into] = new_len if into not in s.alphabet else lengths[into]
    return merged, out_lengths


def _sample_window(s: SymbolicSubstitution, min_letters: int):
    word = (s.alphabet[0],)
    while len(word) < min_letters:
        word = s.apply(word)
        if len(word) > 4 * min_letters:
            break
    return word[:min_letters] if len(word) > min_letters else word


# ---------------------------------------------------------------------------
# Fixed-point tilings


@dataclass
class IntervalTiling:
    """A window of the fixed-point tiling, anchored with an endpoint at zero.

    Tiles carry their right endpoint; the seed junction sits at the origin, so
    zero is the right endpoint of the last tile on the left half-line.
    Letters are stored as index arrays to keep large windows cheap.
    """

    substitution: SymbolicSubstitution
    lengths: dict
    field: NumberField
    left_indices: np.ndarray  # leftmost first; last tile ends at 0
    right_indices: np.ndarray  # first tile starts at 0
    seed: tuple
    power: int
    generations: int

    def word(self, radius: Optional[int] = None) -> str:
        letters = self.substitution.alphabet
        left, right = self.left_indices, self.right_indices
        if radius is not None:
            left, right = left[-radius:], right[:radius]
        return "".join(str(letters[i]) for i in np.concatenate([left, right]))

    def endpoint_matrix(self):
        """(types, coords): endpoint coordinates over the power basis, int64."""
        lenrows = np.array(
            [self.lengths[a].coords for a in self.substitution.alphabet], dtype=np.int64
        )
        rows_l = lenrows[self.left_indices]
        suffix = np.cumsum(rows_l[::-1], axis=0)[::-1]
        coords_l = -(suffix - rows_l)
        coords_r = np.cumsum(lenrows[self.right_indices], axis=0)
        types = np.concatenate([self.left_indices, self.right_indices]).astype(np.int8)
        coords = np.concatenate([coords_l, coords_r], axis=0)
        return types, coords

    def endpoint_elements(self):
        types, coords = self.endpoint_matrix()
        letters = self.substitution.alphabet
        return [(letters[t], self.field.element(tuple(int(v) for v in row)))
                for t, row in zip(types, coords)]

    def size(self) -> int:
        return len(self.left_indices) + len(self.right_indices)


def _rule_arrays(s: SymbolicSubstitution):
    index = {a: i for i, a in enumerate(s.alphabet)}
    return [np.array([index[x] for x in word], dtype=np.int8) for word in s.rules]


def _expand_indices(rules, rule_lengths, word: np.ndarray) -> np.ndarray:
    counts = rule_lengths[word]
    out = np.empty(int(counts.sum()), dtype=np.int8)
    starts = np.cumsum(counts) - counts
    for letter, rule in enumerate(rules):
        mask = word == letter
        hits = int(mask.sum())
        if not hits:
            continue
        idx = (starts[mask][:, None] + np.arange(len(rule))).ravel()
        out[idx] = np.tile(rule, hits)
    return out


def find_fixed_seed(s: SymbolicSubstitution, max_power: int = 4):
    """A legal two-letter seed (a|b) with sigma^p-fixed junction, and the power p."""
    for p in range(1, max_power + 1):
        sp = s.power(p)
        suffix_fixed = [a for a in s.alphabet if sp.rule(a)[-1] == a]
        prefix_fixed = [b for b in s.alphabet if sp.rule(b)[0] == b]
        legal = _legal_pairs(s)
        for a in suffix_fixed:
            for b in prefix_fixed:
                if (a, b) in legal:
                    return (a, b), p
    raise NoLegalSeedError(f"no fixed seed below power {max_power}")


def _legal_pairs(s: SymbolicSubstitution):
    rules = _rule_arrays(s)
    rule_lengths = np.array([len(r) for r in rules])
    pairs = set()
    for i, a in enumerate(s.alphabet):
        word = np.array([i], dtype=np.int8)
        for _ in range(s.size + 3):
            word = _expand_indices(rules, rule_lengths, word)
            if len(word) > 50_000:
                break
        for x, y in zip(word[:-1].tolist(), word[1:].tolist()):
            pairs.add((s.alphabet[x], s.alphabet[y]))
    return pairs


def fixed_point_tiling(s: SymbolicSubstitution, lengths: dict, generations: Optional[int] = None,
                       seed: Optional[tuple] = None, power: Optional[int] = None,
                       min_size: Optional[int] = None) -> IntervalTiling:
    """Iterate the substitution on a fixed seed (a|b) anchored at the origin.

    Either a generation count or a minimum window size must be given.
    """
    if seed is None:
        seed, power = find_fixed_seed(s)
    elif power is None:
        power = 1
    a, b = seed
    sp = s.power(power)
    if sp.rule(a)[-1] != a or sp.rule(b)[0] != b:
        raise NoLegalSeedError(f"seed {seed} is not fixed under power {power}")
    if (a, b) not in _legal_pairs(s):
        raise NoLegalSeedError(f"seed pair {seed} never occurs in the language")
    rules = _rule_arrays(sp)
    rule_lengths = np.array([len(r) for r in rules])
    index = {x: i for i, x in enumerate(s.alphabet)}
    left = np.array([index[a]], dtype=np.int8)
    right = np.array([index[b]], dtype=np.int8)
    if generations is None and min_size is None:
        raise ValueError("give either generations or min_size")
    done = 0
    while True:
        if generations is not None and done >= generations:
            break
        if generations is None and len(left) + len(right) >= min_size:
            break
        left = _expand_indices(rules, rule_lengths, left)
        right = _expand_indices(rules, rule_lengths, right)
        done += 1
    some_field = next(iter(lengths.values())).field
    return IntervalTiling(
        substitution=s,
        lengths=lengths,
        field=some_field,
        left_indices=left,
        right_indices=right,
        seed=seed,
        power=power,
        generations=done,
    )
