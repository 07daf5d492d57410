"""Exact univariate polynomial arithmetic over the integers and rationals.

Coefficient vectors are stored constant term first, so ``(c0, c1, ..., 1)``
represents the monic polynomial ``x^n + ... + c1*x + c0``.  All routines are
exact; floating point never enters any computation in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NotSquarefreeError

Coeffs = tuple


def normalize(coeffs) -> Coeffs:
    """Strip trailing zero coefficients (zero polynomial becomes ``(0,)``)."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(coeffs) -> int:
    c = normalize(coeffs)
    if c == (0,):
        return -1
    return len(c) - 1


def is_zero(coeffs) -> bool:
    return all(a == 0 for a in coeffs)


def add(a, b) -> Coeffs:
    n = max(len(a), len(b))
    return normalize(
        tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))
    )


def sub(a, b) -> Coeffs:
    return add(a, tuple(-x for x in b))


def mul(a, b) -> Coeffs:
    if is_zero(a) or is_zero(b):
        return (0,)
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return normalize(tuple(out))


def scale(a, s) -> Coeffs:
    return normalize(tuple(s * x for x in a))


def shift_x(a, k: int) -> Coeffs:
    """Multiply by x**k."""
    return normalize((0,) * k + tuple(a))


def eval_at(coeffs, x):
    """Horner evaluation; works for int, Fraction, float, complex, mpf, ..."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def derivative(coeffs) -> Coeffs:
    if len(coeffs) <= 1:
        return (0,)
    return normalize(tuple(i * coeffs[i] for i in range(1, len(coeffs))))


def divmod_frac(a, b):
    """Quotient and remainder in Q[x]; coefficients become Fractions."""
    b = normalize(b)
    if is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    db, lb = degree(b), Fraction(b[-1])
    while len(r) - 1 >= db and any(r):
        dr = len(r) - 1
        while dr > 0 and r[dr] == 0:
            dr -= 1
        if dr < db:
            break
        f = r[dr] / lb
        q[dr - db] = f
        for i in range(db + 1):
            r[dr - db + i] -= f * Fraction(b[i])
        del r[dr:]
        if not r:
            r = [Fraction(0)]
    return normalize(tuple(q)), normalize(tuple(r))


def divides(a, b) -> bool:
    """True iff a divides b exactly in Q[x]."""
    _, r = divmod_frac(b, a)
    return is_zero(r)


def divexact(b, a) -> Coeffs:
    """b / a when the division is exact and the result has integer coefficients."""
    q, r = divmod_frac(b, a)
    if not is_zero(r):
        raise ValueError("division is not exact")
    out = []
    for c in q:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("quotient is not integral")
            out.append(c.numerator)
        else:
            out.append(int(c))
    return normalize(tuple(out))


def content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(int(c)))
    return g or 1


def primitive_part(coeffs) -> Coeffs:
    c = normalize(coeffs)
    if is_zero(c):
        return (0,)
    g = content(c)
    c = tuple(x // g for x in c)
    if c[-1] < 0:
        c = tuple(-x for x in c)
    return c


def gcd_int(a, b) -> Coeffs:
    """Primitive gcd in Z[x], computed by rational Euclid on primitive parts."""
    a, b = primitive_part(a), primitive_part(b)
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    fa = tuple(Fraction(x) for x in a)
    fb = tuple(Fraction(x) for x in b)
    while not is_zero(fb):
        _, r = divmod_frac(fa, fb)
        fa, fb = fb, r
    # clear denominators
    den = 1
    for c in fa:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = tuple(int(c * den) for c in fa)
    return primitive_part(ints)


def is_squarefree(coeffs) -> bool:
    return degree(gcd_int(coeffs, derivative(coeffs))) <= 0


def squarefree_part(coeffs) -> Coeffs:
    g = gcd_int(coeffs, derivative(coeffs))
    if degree(g) <= 0:
        return primitive_part(coeffs)
    return primitive_part(divexact(primitive_part(coeffs), g))


def cauchy_root_bound(coeffs) -> Fraction:
    """All roots lie strictly inside |x| < bound."""
    c = normalize(coeffs)
    lead = c[-1]
    return 1 + max(Fraction(abs(a), abs(lead)) for a in c[:-1]) if len(c) > 1 else Fraction(1)


# ---------------------------------------------------------------------------
# Sturm sequences and exact real-root counting


def sturm_chain(coeffs):
    """Sturm chain as primitive integer polynomials (positive scalings only)."""
    chain = [primitive_part(coeffs)]
    d = derivative(coeffs)
    if is_zero(d):
        return chain
    chain.append(primitive_part(d))
    while degree(chain[-1]) > 0:
        _, r = divmod_frac(chain[-2], chain[-1])
        if is_zero(r):
            break
        den = 1
        for c in r:
            f = Fraction(c)
            den = den * f.denominator // math.gcd(den, f.denominator)
        r_int = tuple(int(Fraction(c) * den) for c in r)
        g = content(r_int)
        chain.append(tuple(-x // g for x in r_int))
    return chain


def _sign_variations(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for i in range(len(signs) - 1) if (signs[i] > 0) != (signs[i + 1] > 0))


def sturm_variations(chain, x: Fraction) -> int:
    return _sign_variations([eval_at(p, x) for p in chain])


def count_real_roots(coeffs, lo: Fraction, hi: Fraction, chain=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi].

    Requires a squarefree polynomial for the count to equal the number of
    roots with multiplicity.
    """
    if chain is None:
        chain = sturm_chain(coeffs)
    return sturm_variations(chain, Fraction(lo)) - sturm_variations(chain, Fraction(hi))


# ---------------------------------------------------------------------------
# Resultants and discriminants (Bareiss fraction-free determinant)


def _bareiss_det(mat) -> int:
    m = [row[:] for row in mat]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def resultant(a, b) -> int:
    """Resultant of two integer polynomials (Sylvester determinant, exact)."""
    a, b = normalize(a), normalize(b)
    da, db = degree(a), degree(b)
    if da < 0 or db < 0:
        return 0
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    n = da + db
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(db):
        rows.append([0] * i + ra + [0] * (n - da - 1 - i))
    for i in range(da):
        rows.append([0] * i + rb + [0] * (n - db - 1 - i))
    return _bareiss_det(rows)


def discriminant(coeffs) -> int:
    """Discriminant of a monic integer polynomial."""
    c = normalize(coeffs)
    n = degree(c)
    res = resultant(c, derivative(c))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res


# ---------------------------------------------------------------------------
# Cyclotomic polynomials and the maximal real subfield


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Coeffs:
    """The n-th cyclotomic polynomial, by exact division of x^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    p = tuple([-1] + [0] * (n - 1) + [1])  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            p = divexact(p, cyclotomic(d))
    return p


def is_palindromic(coeffs) -> bool:
    c = normalize(coeffs)
    return c == tuple(reversed(c))


def symmetric_decompose(coeffs) -> Coeffs:
    """Write a palindromic p of even degree 2k as x^k * q(x + 1/x); return q.

    Raises ValueError when p is not palindromic of even degree.
    """
    p = normalize(coeffs)
    n = degree(p)
    if n % 2 != 0 or not is_palindromic(p):
        raise ValueError("polynomial is not palindromic of even degree")
    k = n // 2
    g = list(p)
    q = [0] * (k + 1)
    # peel (x^2+1)^j * x^(k-j) from the top coefficient downwards
    for j in range(k, -1, -1):
        coef = g[k + j] if k + j < len(g) else 0
        q[j] = coef
        if coef:
            term = shift_x(_binomial_power_x2p1(j), k - j)
            g = list(sub(tuple(g), scale(term, coef)))
    if not is_zero(tuple(g)):
        raise ValueError("symmetric decomposition failed")
    return normalize(tuple(q))


@lru_cache(maxsize=None)
def _binomial_power_x2p1(j: int) -> Coeffs:
    """(x^2 + 1)^j."""
    out = (1,)
    for _ in range(j):
        out = mul(out, (1, 0, 1))
    return out


@lru_cache(maxsize=None)
def cos_subfield_minpoly(n: int) -> Coeffs:
    """Minimal polynomial of 2*cos(pi/n) for n >= 3.

    2*cos(pi/n) = zeta + 1/zeta for a primitive 2n-th root of unity zeta, so
    the polynomial is the symmetric decomposition of the 2n-th cyclotomic
    polynomial.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    return symmetric_decompose(cyclotomic(2 * n))


# ---------------------------------------------------------------------------
# Characteristic polynomials of integer matrices (Berkowitz, division free)


def charpoly(matrix) -> Coeffs:
    """char(A) = det(xI - A) of an integer matrix, constant term first."""
    n = len(matrix)
    if n == 0:
        return (1,)
    # coefficients of char polys of leading principal minors, descending order
    vec = [1, -matrix[0][0]]
    for k in range(1, n):
        a = matrix[k][k]
        row = [matrix[k][j] for j in range(k)]
        col = [matrix[i][k] for i in range(k)]
        sub_m = [[matrix[i][j] for j in range(k)] for i in range(k)]
        # first column of the Toeplitz factor: 1, -a, -(R C), -(R B C), ...
        first = [1, -a]
        cur = col
        for _ in range(k):
            first.append(-sum(r * c for r, c in zip(row, cur)))
            cur = [sum(sub_m[i][j] * cur[j] for j in range(k)) for i in range(k)]
        new = [0] * (k + 2)
        for i in range(k + 2):
            for j in range(min(i + 1, len(vec))):
                new[i] += first[i - j] * vec[j]
        vec = new
    return normalize(tuple(reversed(vec)))


# ---------------------------------------------------------------------------
# Irreducibility certificates modulo small primes


def _gf_normalize(c, q):
    c = [x % q for x in c]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _gf_divmod(a, b, q):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    quo = [0] * max(1, len(a) - db)
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * inv % q
        quo[da - db] = f
        for i in range(db + 1):
            a[da - db + i] = (a[da - db + i] - f * b[i]) % q
        a.pop()
        if not a:
            a = [0]
    return _gf_normalize(quo, q), _gf_normalize(a, q)


def _gf_gcd(a, b, q):
    a, b = _gf_normalize(a, q), _gf_normalize(b, q)
    while b != [0]:
        _, r = _gf_divmod(a, b, q)
        a, b = b, r
    return a


def _gf_mulmod(a, b, f, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    _, r = _gf_divmod(out, f, q)
    return r


def _gf_powmod_xq(f, q, times):
    """x^(q^times) mod f over GF(q)."""
    cur = [0, 1]  # x
    for _ in range(times):
        # raise to q-th power by square-and-multiply on the exponent q
        base, acc, e = cur, [1], q
        while e:
            if e & 1:
                acc = _gf_mulmod(acc, base, f, q)
            base = _gf_mulmod(base, base, f, q)
            e >>= 1
        cur = acc
    return cur


def _gf_minus_x(poly, q):
    out = list(poly) + [0] * max(0, 2 - len(poly))
    out[1] = (out[1] - 1) % q
    return _gf_normalize(out, q)


def irreducible_mod_prime(coeffs, q: int) -> bool:
    """Rabin test: is the reduction of coeffs mod q irreducible of full degree?"""
    f = _gf_normalize(list(coeffs), q)
    n = len(coeffs) - 1
    if len(f) - 1 != n or n == 0:
        return False
    if _gf_minus_x(_gf_powmod_xq(f, q, n), q) != [0]:
        return False
    for ell in set(_prime_factors(n)):
        g = _gf_gcd(f, _gf_minus_x(_gf_powmod_xq(f, q, n // ell), q), q)
        if len(g) > 1:
            return False
    return True


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducibility_certificate(coeffs, primes=(2, 3, 5, 7, 11, 13, 17)) -> int | None:
    """Return a prime witnessing irreducibility over Z, or None if inconclusive."""
    for q in primes:
        if irreducible_mod_prime(coeffs, q):
            return q
    return None


# ---------------------------------------------------------------------------
# The public polynomial type


@dataclass(frozen=True)
class IntPolynomial:
    """A monic integer polynomial, constant term first."""

    coefficients: Coeffs

    def __post_init__(self):
        c = normalize(tuple(int(x) for x in self.coefficients))
        if degree(c) < 1:
            raise ValueError("degree must be at least 1")
        if c[-1] != 1:
            raise ValueError("polynomial must be monic")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return eval_at(self.coefficients, x)

    def derivative(self) -> Coeffs:
        return derivative(self.coefficients)

    def is_squarefree(self) -> bool:
        return is_squarefree(self.coefficients)

    def require_squarefree(self):
        if not self.is_squarefree():
            raise NotSquarefreeError(f"{self} has repeated roots")

    def discriminant(self) -> int:
        return discriminant(self.coefficients)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    terms.append(x)
                elif c == -1:
                    terms.append(f"-{x}")
                else:
                    terms.append(f"{c}{x}")
        return " + ".join(reversed(terms)).replace("+ -", "- ")


def from_coeffs(seq: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(tuple(int(x) for x in seq))
