"""The product h*R of a real quadratic field from Dirichlet's class number formula.

Two evaluations are provided:

* ``hr_sine_sum``: -sum_{1 <= k < D/2} chi(k) ln sin(k pi / D), a finite sum of
  O(D) terms (the reference value);
* ``hr_fast_series``: (1/2) sum_{x >= 1} chi(x) [ (sqrt D / x) erfc(x sqrt(pi/D))
  + E1(pi x^2 / D) ], which converges exponentially once x exceeds sqrt(D).

Here D is the field discriminant (N if N = 1 mod 4, else 4N) and chi is the
Kronecker symbol (D/.). Both sums are reductions over fixed-size chunks added
in index order, so a caller may evaluate chunks in parallel (``executor``) and
still get a bit-identical result.
"""
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .arith import is_squarefree
from .errors import DomainError
from .infrastructure import mp_context

__all__ = [
    "HRMethod", "HRProduct", "jacobi", "kronecker", "discriminant", "erfc", "e1",
    "hr_sine_sum", "hr_fast_series", "regulator_ratio", "default_series_terms",
    "ERFC_SWITCH", "E1_SWITCH",
]

ERFC_SWITCH = 4
E1_SWITCH = 20
CHUNK = 1 << 15


class HRMethod(str, Enum):
    SINE_SUM = "sine-sum"
    FAST_SERIES = "fast-series"


@dataclass(frozen=True)
class HRProduct:
    n: int
    D: int
    value: object
    method: HRMethod
    terms_used: int
    est_error: object
    precision: int = 128

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("h*R must be positive")
        if self.D % 4 not in (0, 1):
            raise ValueError("discriminant must be 0 or 1 mod 4")

    def __float__(self):
        return float(self.value)


# -- characters ---------------------------------------------------------------

def jacobi(a, m):
    if m <= 0 or m % 2 == 0:
        raise ValueError("modulus must be odd and positive")
    a %= m
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                t = -t
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            t = -t
        a %= m
    return t if m == 1 else 0


def kronecker(a, n):
    """Kronecker symbol (a/n) for any integers a, n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            t = -t
        n >>= v
    return t * jacobi(a, n) if n > 1 else t


def discriminant(n):
    return n if n % 4 == 1 else 4 * n


def _jacobi_vec(a, m):
    """Elementwise Jacobi symbol for int64 arrays, m odd positive."""
    a = a % m
    out = np.zeros(a.shape, dtype=np.int8)
    idx = np.arange(a.size)
    t = np.ones(a.shape, dtype=np.int8)
    m = m.copy()
    while idx.size:
        done = a == 0
        if done.any():
            out[idx[done]] = np.where(m[done] == 1, t[done], 0)
            keep = ~done
            idx, a, m, t = idx[keep], a[keep], m[keep], t[keep]
            if not idx.size:
                break
        # strip the whole power of two at once
        low = a & -a
        tz = np.log2(low.astype(np.float64)).astype(np.int64)
        a = a // low
        m8 = m % 8
        t = np.where((tz % 2 == 1) & ((m8 == 3) | (m8 == 5)), -t, t)
        # reciprocity, then reduce
        t = np.where((a % 4 == 3) & (m % 4 == 3), -t, t)
        a, m = m % a, a
    return out


def _character_vec(D, k):
    """(D/k) for an array of positive k, D a fundamental discriminant."""
    if D % 4 == 1:
        # (D/k) = (k/D) for D = 1 mod 4
        return _jacobi_vec(k.astype(np.int64), np.full(k.shape, D, dtype=np.int64))
    out = np.zeros(k.shape, dtype=np.int8)
    odd = k % 2 == 1
    ko = k[odd].astype(np.int64)
    out[odd] = _jacobi_vec(np.full(ko.shape, D // 4, dtype=np.int64) % ko, ko)
    return out


# -- special functions ----------------------------------------------------------

def _lentz(ctx, b0, a, b, tol, max_iter=100000):
    """Evaluate b0 + a(1)/(b(1) + a(2)/(b(2) + ...)) by the modified Lentz method."""
    tiny = ctx.mpf(2) ** (-4 * ctx.prec)
    f = b0 if b0 != 0 else tiny
    C, Dn = f, ctx.mpf(0)
    for k in range(1, max_iter):
        Dn = b(k) + a(k) * Dn
        Dn = 1 / (Dn if Dn != 0 else tiny)
        C = b(k) + a(k) / C
        if C == 0:
            C = tiny
        step = C * Dn
        f *= step
        if abs(step - 1) < tol:
            return f
    raise ArithmeticError("continued fraction did not converge")


def erfc(x, prec=128):
    """Complementary error function at ``prec`` bits.

    Power series of erf below ERFC_SWITCH (with guard bits for the
    cancellation in 1 - erf), a continued fraction above it.
    """
    out = mp_context(prec)
    x = out.mpf(x)
    if x < 0:
        return 2 - erfc(-x, prec)
    if x == 0:
        return out.mpf(1)
    xf = float(x)
    if xf < ERFC_SWITCH:
        # terms peak near e^{x^2}; 1 - erf loses another x^2/ln 2 bits
        guard = int(3 * xf * xf) + 24
        ctx = mp_context(prec + guard)
        z = ctx.mpf(x)
        z2 = z * z
        term, total, n = z, z, 0
        eps = ctx.ldexp(1, -(prec + guard))
        while True:
            n += 1
            term *= -z2 / n
            add = term / (2 * n + 1)
            total += add
            if abs(add) < eps * abs(total):
                break
        return out.mpf(1 - 2 / ctx.sqrt(ctx.pi) * total)
    ctx = mp_context(prec + 16)
    z = ctx.mpf(x)
    tol = ctx.ldexp(1, -(prec + 8))
    # erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    frac = _lentz(ctx, z, lambda k: ctx.mpf(k) / 2, lambda k: z, tol)
    return out.mpf(ctx.exp(-z * z) / (ctx.sqrt(ctx.pi) * frac))


def e1(x, prec=128):
    """Exponential integral E1 for x > 0.

    Below E1_SWITCH: -gamma - ln x - sum (-x)^n/(n n!), with guard bits for
    the alternating terms. Above: the continued fraction
    E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
    """
    out = mp_context(prec)
    x = out.mpf(x)
    if x <= 0:
        raise DomainError("E1 is defined here for x > 0 only")
    xf = float(x)
    if xf < E1_SWITCH:
        guard = int(1.5 * xf) + 24
        ctx = mp_context(prec + guard)
        z = ctx.mpf(x)
        term, total, n = ctx.mpf(1), ctx.mpf(0), 0
        eps = ctx.ldexp(1, -(prec + guard))
        while True:
            n += 1
            term *= -z / n
            add = term / n
            total += add
            if abs(add) < eps * (abs(total) + 1):
                break
        return out.mpf(-ctx.euler - ctx.log(z) - total)
    ctx = mp_context(prec + 16)
    z = ctx.mpf(x)
    tol = ctx.ldexp(1, -(prec + 8))
    frac = _lentz(ctx, z + 1, lambda k: -ctx.mpf(k) ** 2, lambda k: z + 2 * k + 1, tol)
    return out.mpf(ctx.exp(-z) / frac)


# -- h*R ----------------------------------------------------------------------------

def _check_radicand(n):
    if n < 2 or not is_squarefree(n):
        raise ValueError(f"{n} must be square-free and >= 2")


def _chunks(lo, hi, size=CHUNK):
    return [(s, min(s + size, hi)) for s in range(lo, hi, size)]


def _sine_chunk_mp(D, lo, hi, prec):
    ctx = mp_context(prec)
    s = ctx.mpf(0)
    arg = ctx.pi / D
    for k in range(lo, hi):
        c = kronecker(D, k)
        if c:
            s += c * ctx.log(ctx.sin(k * arg))
    return s


def _sine_chunk_np(D, lo, hi):
    k = np.arange(lo, hi, dtype=np.int64)
    chi = _character_vec(D, k)
    nz = chi != 0
    vals = np.log(np.sin(k[nz] * (np.pi / D)))
    # fsum keeps the chunk sum exact to one rounding; abs sum feeds the bound
    return math.fsum(chi[nz] * vals), float(np.abs(vals).sum()), int(nz.sum())


def hr_sine_sum(n, precision=128, executor=None):
    """h*R = -sum_{1 <= k <= (D-1)/2} chi(k) ln sin(k pi / D).

    ``precision`` <= 53 selects a vectorised double-precision path (used for
    large D); above that every term is evaluated with mpmath at
    ``precision`` + 16 bits. est_error bounds rounding only.
    """
    _check_radicand(n)
    D = discriminant(n)
    top = (D - 1) // 2 + 1
    chunks = _chunks(1, top)
    mapper = executor.map if executor is not None else map
    if precision <= 53:
        parts = list(mapper(lambda c: _sine_chunk_np(D, *c), chunks))
        total = -math.fsum(p[0] for p in parts)
        mass = sum(p[1] for p in parts)
        # sin/log each within a few ulps: relative error per term ~ 8 eps
        # (the argument k*pi/D is rounded, which the log amplifies near 0)
        est = 8 * 2.0 ** -52 * mass + 2.0 ** -52 * abs(total)
        ctx = mp_context(53)
        return HRProduct(n, D, ctx.mpf(total), HRMethod.SINE_SUM, top - 1, ctx.mpf(est), precision)
    work = precision + 16
    parts = list(mapper(lambda c: _sine_chunk_mp(D, c[0], c[1], work), chunks))
    ctx = mp_context(work)
    total = -ctx.fsum(parts)
    est = ctx.ldexp(1, -precision) * (top + abs(total))
    out = mp_context(precision)
    return HRProduct(n, D, out.mpf(total), HRMethod.SINE_SUM, top - 1, out.mpf(est), precision)


def default_series_terms(n):
    return max(math.ceil(math.log(n) ** 2), 64)


def _series_tail(D, x):
    """Bound on (1/2) sum_{y > x} |term y|, using erfc(t) < e^{-t^2}/(t sqrt pi)
    and E1(t) < e^{-t}/t: each term is below (D/(pi y^2)) e^{-pi y^2/D}."""
    q = math.pi / D
    first = (1 / (q * (x + 1) ** 2)) * math.exp(-q * (x + 1) ** 2)
    ratio = math.exp(-q * (2 * x + 3))
    return first / (1 - ratio)


def _series_chunk(D, lo, hi, prec):
    ctx = mp_context(prec)
    sd = ctx.sqrt(D)
    s = ctx.mpf(0)
    c = ctx.sqrt(ctx.pi / D)
    for x in range(lo, hi):
        chi = kronecker(D, x)
        if chi:
            s += chi * (sd / x * erfc(x * c, prec) + e1(ctx.pi * x * x / D, prec))
    return s


def hr_fast_series(n, terms=None, precision=128, executor=None):
    """h*R from the erfc/E1 series truncated after ``terms`` terms.

    Terms whose magnitude bound falls below 2^-precision of the partial value
    are not evaluated; the analytic bound of everything omitted is added to
    est_error together with a rounding allowance.
    """
    _check_radicand(n)
    if terms is None:
        terms = default_series_terms(n)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    D = discriminant(n)
    # beyond this x the whole remaining tail is below 2^-(precision+8) * scale
    scale = math.sqrt(D)
    cutoff = terms
    for x in range(1, terms + 1):
        if _series_tail(D, x) < scale * 2.0 ** -(precision + 8):
            cutoff = x
            break
    work = precision + 16
    mapper = executor.map if executor is not None else map
    parts = list(mapper(lambda c: _series_chunk(D, c[0], c[1], work), _chunks(1, cutoff + 1, 256)))
    ctx = mp_context(work)
    total = ctx.fsum(parts) / 2
    est = _series_tail(D, cutoff) + float(ctx.ldexp(1, -precision)) * cutoff * float(abs(total) + scale)
    out = mp_context(precision)
    return HRProduct(n, D, out.mpf(total), HRMethod.FAST_SERIES, cutoff, out.mpf(est), precision)


def regulator_ratio(hr, log_unit, kmax=100, tol=1e-6):
    """Read hr / ln(unit) as k or k/3 for a positive integer k <= kmax.

    Returns (k, divisor) with divisor 1 or 3 (the unit is eps0 or eps0^3),
    or None if neither fits within ``tol``.
    """
    r = float(hr) / float(log_unit)
    k = round(r)
    if 1 <= k <= kmax and abs(r - k) <= tol:
        return k, 1
    k3 = round(3 * r)
    if 1 <= k3 <= kmax and abs(r - k3 / 3) <= tol:
        return k3, 3
    return None
