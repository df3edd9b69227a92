"""Independent reference computations used by the tests.

None of these reuse the package's algorithms: they brute-force, use rational
bounds, or defer to mpmath's own special functions.
"""
from fractions import Fraction
import math

import mpmath


def cf_from_bounds(n, digits=60):
    """Partial quotients of sqrt(n) from rational lower/upper bounds.

    Returns the prefix on which the expansions of both bounds agree.
    """
    scale = 10 ** digits
    lo = Fraction(math.isqrt(n * scale * scale), scale)
    hi = lo + Fraction(1, scale)
    out = []
    while True:
        a, b = math.floor(lo), math.floor(hi)
        if a != b or lo == a or hi == b:
            return out
        out.append(a)
        lo, hi = 1 / (hi - b), 1 / (lo - a)


def pell_brute(n, limit=10 ** 6):
    """Smallest (x, y), y >= 1, with x^2 - n y^2 = +-1, by scanning y."""
    for y in range(1, limit):
        for s in (-1, 1):
            x2 = n * y * y + s
            x = math.isqrt(x2)
            if x * x == x2:
                return x, y
    raise ValueError("no solution in range")


def two_squares_brute(p):
    out = set()
    for x in range(math.isqrt(p) + 1):
        y2 = p - x * x
        y = math.isqrt(y2)
        if y * y == y2:
            out.add(frozenset((x, y)))
    return out


def fundamental_discriminant(n):
    return n if n % 4 == 1 else 4 * n


def fundamental_unit(D):
    """(t, u, norm) of eps0 = (t + u sqrt D)/2, smallest with t^2 - D u^2 = +-4."""
    for u in range(1, 10 ** 7):
        for s in (-4, 4):
            t2 = D * u * u + s
            t = math.isqrt(t2)
            if t * t == t2:
                return t, u, s // 4
    raise ValueError("unit not found")


def _reduced_indefinite(D):
    """Gauss-reduced primitive forms (a, b, c) of positive discriminant D."""
    r = math.isqrt(D)
    forms = []
    for b in range(1, r + 1):
        if (b * b - D) % 4 or b * b >= D:
            continue
        m = (D - b * b) // 4  # = -a c
        for a in range(1, m + 1):
            if m % a:
                continue
            for sa in (a, -a):
                c = -m // sa
                # sqrt(D) - b < 2|a| < sqrt(D) + b, compared exactly
                lo_ok = (2 * a + b) ** 2 > D
                hi_ok = 2 * a < b or (2 * a - b) ** 2 < D
                if lo_ok and hi_ok and math.gcd(math.gcd(sa, b), c) == 1:
                    forms.append((sa, b, c))
    return forms


def _rho(f, D):
    a, b, c = f
    r = math.isqrt(D)
    cc = abs(c)
    # b' = -b mod 2|c| in the window sqrt(D) - 2|c| < b' < sqrt(D)
    b1 = -b % (2 * cc)
    while b1 <= r:
        b1 += 2 * cc
    b1 -= 2 * cc
    while b1 + 2 * cc <= r:
        b1 += 2 * cc
    if (r - b1) >= 2 * cc:
        b1 += 2 * cc
    a1 = (b1 * b1 - D) // (4 * c)
    return (c, b1, a1)


def narrow_class_number(D):
    forms = set(_reduced_indefinite(D))
    seen = set()
    cycles = 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D)
            assert g in forms, (D, g)
    return cycles


def class_number_regulator(n):
    """(h, R) of Q(sqrt n) from form cycles and the brute-force unit."""
    D = fundamental_discriminant(n)
    t, u, norm = fundamental_unit(D)
    hplus = narrow_class_number(D)
    h = hplus if norm == -1 else hplus // 2
    mpmath.mp.dps = 40
    R = mpmath.log((t + u * mpmath.sqrt(D)) / 2)
    return h, R


def is_prime_brute(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
