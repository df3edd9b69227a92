"""Reduced forms of discriminant 4N, baby steps, composition and distances.

Forms follow the sign convention of the sequence f_m = (delta_m, 2 omega_m,
delta_{m-1}): a form (a, 2b, c) is reduced when, with k = min(|a|, |c|),
sqrt(N) - |b| < k < sqrt(N) + |b| and b has the sign opposite to a.

Distances are tracked exactly (up to rounding) through the principal ideals
behind the forms. f_m corresponds to the ideal Z r_{m-1} + Z (c_{m-1} + sqrt N)
generated by c_{m-1} = A_{m-1} + B_{m-1} sqrt N, and its distance from the
start of the cycle is (1/2) ln |c_{m-1} / conj(c_{m-1})|. That quantity is a
homomorphism on generators, so composing two forms adds distances exactly and
every reduction step contributes a computable correction. Intervals from
mpmath's interval context give rigorous rounding bounds.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

from mpmath.ctx_iv import MPIntervalContext
from mpmath.ctx_mp import MPContext

from .arith import isqrt, neg1_pow
from .errors import IncompatibleForms, NotReduced, PrecisionExhausted

__all__ = [
    "Distance", "ReducedForm", "is_reduced", "rho_forward", "rho_backward",
    "compose", "step_distance", "period_distance", "principal_form",
    "cycle_from", "Walker", "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 128


@lru_cache(maxsize=None)
def mp_context(prec):
    ctx = MPContext()
    ctx.prec = prec
    return ctx


@lru_cache(maxsize=None)
def iv_context(prec):
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class Distance:
    """A real number in natural-log units with an absolute error bound."""

    value: object
    err_bound: object
    prec: int = DEFAULT_PRECISION

    @classmethod
    def from_interval(cls, x, prec):
        ctx = mp_context(prec)
        lo, hi = ctx.mpf(x.a), ctx.mpf(x.b)
        mid = (lo + hi) / 2
        # midpoint rounding adds at most one ulp of |mid|
        err = max(hi - mid, mid - lo) + abs(mid) * ctx.ldexp(1, 1 - prec)
        return cls(mid, err, prec)

    @classmethod
    def exact(cls, value, prec=DEFAULT_PRECISION):
        ctx = mp_context(prec)
        return cls(ctx.mpf(value), ctx.mpf(0), prec)

    def interval(self, prec=None):
        iv = iv_context(prec or self.prec)
        return iv.mpf([self.value - self.err_bound, self.value + self.err_bound])

    def _combine(self, other, op):
        prec = max(self.prec, other.prec if isinstance(other, Distance) else 0)
        iv = iv_context(prec)
        b = other.interval(prec) if isinstance(other, Distance) else iv.mpf(other)
        return Distance.from_interval(op(self.interval(prec), b), prec)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __mul__(self, k):
        return self._combine(k, lambda x, y: x * y)

    def __truediv__(self, k):
        return self._combine(k, lambda x, y: x / y)

    def __float__(self):
        return float(self.value)

    def contains(self, x):
        return abs(self.value - x) <= self.err_bound


@dataclass(frozen=True)
class ReducedForm:
    a: int
    b2: int
    c: int
    n: int
    dist: Distance = field(default=None, compare=False)

    def __post_init__(self):
        if self.b2 % 2:
            raise ValueError("middle coefficient must be even")
        if self.b2 * self.b2 - 4 * self.a * self.c != 4 * self.n:
            raise ValueError(f"({self.a}, {self.b2}, {self.c}) does not have discriminant 4*{self.n}")

    @property
    def b(self):
        return self.b2 // 2

    @property
    def triple(self):
        return (self.a, self.b2, self.c)

    @property
    def is_principal(self):
        return abs(self.a) == 1 or abs(self.c) == 1

    def with_dist(self, dist):
        return ReducedForm(self.a, self.b2, self.c, self.n, dist)


def is_reduced(f):
    n, a, b, c = f.n, f.a, f.b, f.c
    if a == 0 or b == 0 or (b > 0) == (a > 0):
        return False
    k, bb = min(abs(a), abs(c)), abs(b)
    # sqrt(n) - |b| < k  and  k < sqrt(n) + |b|, squared out exactly
    return (k + bb) ** 2 > n and (k - bb < 0 or (k - bb) ** 2 < n)


def _require_reduced(f):
    if not is_reduced(f):
        raise NotReduced(f"{f.triple} is not reduced for N={f.n}")


def _step_interval(n, p, prec):
    """(1/2) ln |(p + sqrt N)/(p - sqrt N)| as a rigorous interval."""
    iv = iv_context(prec)
    return iv.log(abs(iv.sqrt(n) + p)) - iv.log(abs(n - p * p)) / 2


def _add_dist(dist, delta_iv, prec):
    if dist is None:
        return None
    return Distance.from_interval(dist.interval(prec) + delta_iv, prec)


def rho_forward(f, prec=None):
    """One baby step forward along the cycle.

    (a, 2b, c) -> ((b1^2 - N)/a, 2 b1, a) where b1 = b (mod a), b1 carries the
    sign of a and |b1| is the largest such value not exceeding isqrt(N).
    """
    _require_reduced(f)
    n, a, b = f.n, f.a, f.b
    a0 = isqrt(n)
    q, t = abs(a), abs(b)
    t1 = a0 - (a0 + t) % q
    b1 = t1 if a > 0 else -t1
    a1 = (b1 * b1 - n) // a
    prec = prec or (f.dist.prec if f.dist else DEFAULT_PRECISION)
    dist = _add_dist(f.dist, _step_interval(n, t, prec), prec)
    return ReducedForm(a1, 2 * b1, a, n, dist)


def rho_backward(f, prec=None):
    """Inverse of :func:`rho_forward`: (a, 2b, c) -> (c, 2 b1, (b1^2 - N)/c)."""
    _require_reduced(f)
    n, b, c = f.n, f.b, f.c
    a0 = isqrt(n)
    q, t = abs(c), abs(b)
    t1 = a0 - (a0 + t) % q
    b1 = -t1 if c > 0 else t1
    c1 = (b1 * b1 - n) // c
    prec = prec or (f.dist.prec if f.dist else DEFAULT_PRECISION)
    dist = _add_dist(f.dist, -_step_interval(n, t1, prec), prec)
    return ReducedForm(c, 2 * b1, c1, n, dist)


def principal_form(n, prec=DEFAULT_PRECISION):
    """f_0 = (a0^2 - N, 2 a0, 1): the start of the cycle, at distance 0."""
    a0 = isqrt(n)
    return ReducedForm(a0 * a0 - n, 2 * a0, 1, n, Distance.exact(0, prec))


def step_distance(fs, m, prec=DEFAULT_PRECISION):
    """d(f_{m+1}, f_m) = (1/2) ln((sqrt N + (-1)^m omega_m)/(sqrt N - (-1)^m omega_m))."""
    if not 0 <= m < 2 * fs.period:
        raise ValueError("step index outside [0, 2 tau)")
    t = neg1_pow(m) * fs.w(m)
    return Distance.from_interval(_step_interval(fs.n, t, prec), prec)


def period_distance(fs, unit, prec=DEFAULT_PRECISION, tolerance=None):
    """Sum of the tau step distances; must match ln(A + B sqrt N) of the unit."""
    iv = iv_context(prec)
    total = iv.mpf(0)
    for m in range(fs.period):
        total += _step_interval(fs.n, neg1_pow(m) * fs.w(m), prec)
    d = Distance.from_interval(total, prec)
    if tolerance is not None and d.err_bound > tolerance:
        raise PrecisionExhausted(f"error bound {d.err_bound} exceeds {tolerance} at {prec} bits")
    log_unit = Distance.from_interval(iv.log(unit.A + unit.B * iv.sqrt(fs.n)), prec)
    if abs(d.value - log_unit.value) > d.err_bound + log_unit.err_bound:
        raise AssertionError(f"period distance {d.value} != ln(unit) {log_unit.value}")
    return d


# -- ideal-level machinery ----------------------------------------------------

@dataclass(frozen=True)
class _Ideal:
    """Z q + Z (p + sqrt N) with q > 0, a generator of norm sign ``sign`` and
    distance ``dist`` (an interval)."""

    p: int
    q: int
    sign: int
    dist: object


class Walker:
    """Baby steps, giant steps and reduction on the principal cycle of Z[sqrt N]."""

    def __init__(self, n, prec=DEFAULT_PRECISION):
        self.n = n
        self.a0 = isqrt(n)
        if self.a0 * self.a0 == n:
            raise ValueError("N must not be a square")
        self.prec = prec
        self.iv = iv_context(prec)

    # ideals
    def identity(self):
        return _Ideal(self.a0, 1, 1, self.iv.mpf(0))

    def is_reduced(self, I):
        p, q, a0 = I.p, I.q, self.a0
        return q > 0 and 0 < p <= a0 and p + q > a0 and q <= a0 + p

    def _normalized(self, I):
        p = self.a0 - (self.a0 - I.p) % I.q
        return _Ideal(p, I.q, I.sign, I.dist)

    def forward(self, I):
        n = self.n
        k = (I.p + self.a0) // I.q
        p1 = k * I.q - I.p
        q1 = (n - p1 * p1) // I.q
        return _Ideal(p1, q1, -I.sign, I.dist + _step_interval(n, p1, self.prec))

    def backward(self, I):
        n = self.n
        q0 = (n - I.p * I.p) // I.q
        p0 = self.a0 - (self.a0 + I.p) % q0
        return _Ideal(p0, q0, -I.sign, I.dist - _step_interval(n, I.p, self.prec))

    def reduce(self, I, max_steps=None):
        """Continued-fraction steps on (p + sqrt N)/q until the ideal is reduced."""
        n, a0 = self.n, self.a0
        I = self._normalized(I)
        if max_steps is None:
            max_steps = 4 * max(I.q.bit_length(), 1) + 64
        p, q, sign, dist = I.p, I.q, I.sign, I.dist
        for _ in range(max_steps):
            if q > 0 and 0 < p <= a0 and p + q > a0 and q <= a0 + p:
                return _Ideal(p, q, sign, dist)
            k = (p + a0) // q if q > 0 else -((p + a0) // -q) - 1
            p1 = k * q - p
            rem = n - p1 * p1
            q1 = rem // q
            sign = sign if rem < 0 else -sign
            dist = dist + _step_interval(n, p1, self.prec)
            p, q = p1, q1
        raise RuntimeError(f"reduction did not terminate for N={n}")

    def multiply(self, I, J):
        """Product ideal, stripped of its rational content, unreduced."""
        n = self.n
        p1, q1, p2, q2 = I.p, I.q, J.p, J.q
        gens = [(q1 * q2, 0), (q1 * p2, q1), (q2 * p1, q2), (p1 * p2 + n, p1 + p2)]
        g, u, v = _xgcd(q1, q2)
        g, s, w = _xgcd(g, p1 + p2)
        # coefficients of gens[1..3] producing sqrt-part g
        cu, cv, cw = s * u, s * v, w
        ex = cu * gens[1][0] + cv * gens[2][0] + cw * gens[3][0]
        qt = 0
        for x, y in gens:
            qt = math.gcd(qt, x - (y // g) * ex)
        assert qt % g == 0 and ex % g == 0, "product is not an ideal of Z[sqrt N]"
        q3 = qt // g
        p3 = (ex // g) % q3
        assert (n - p3 * p3) % q3 == 0
        return _Ideal(p3, q3, I.sign * J.sign, I.dist + J.dist)

    def compose(self, I, J):
        return self.reduce(self.multiply(I, J))

    # conversions
    def ideal_of(self, f):
        """The ideal behind a reduced form (keyed on its c coefficient)."""
        q = abs(f.c)
        p = self.a0 - (self.a0 + abs(f.b)) % q
        if f.dist is not None:
            dist = f.dist.interval(self.prec)
        else:
            dist = self.iv.mpf(0)
        return _Ideal(p, q, -1 if f.a > 0 else 1, dist)

    def form_of(self, I):
        nxt = self.forward(I)
        eps = -I.sign
        return ReducedForm(eps * nxt.q, -2 * eps * nxt.p, -eps * I.q, self.n,
                           Distance.from_interval(I.dist, self.prec))

    def distance(self, I):
        return Distance.from_interval(I.dist, self.prec)

    def baby_step_scale(self):
        """Smallest possible baby step, bounded below by 1/(2 sqrt N)."""
        return 1 / (2 * math.sqrt(self.n) + 2)


def _xgcd(a, b):
    """(g, x, y) with a*x + b*y == g == gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f, g, prec=None):
    """Gauss composition of two reduced forms followed by reduction.

    The result is stepped forward (never backward) until it is reduced and its
    sign triple is (-,+,+) when f and g have the same index parity, (+,-,-)
    otherwise. Returns ``(h, distance)``. When both inputs carry distances the
    returned distance is h's exact ledger position; otherwise it is the offset
    d(h) - d(f) - d(g).
    """
    if f.n != g.n:
        raise IncompatibleForms(f"discriminants 4*{f.n} and 4*{g.n} differ")
    _require_reduced(f)
    _require_reduced(g)
    if prec is None:
        prec = max(x.dist.prec if x.dist else DEFAULT_PRECISION for x in (f, g))
    W = Walker(f.n, prec)
    I, J = W.ideal_of(f), W.ideal_of(g)
    if f.dist is None or g.dist is None:
        I = _Ideal(I.p, I.q, I.sign, W.iv.mpf(0))
        J = _Ideal(J.p, J.q, J.sign, W.iv.mpf(0))
    K = W.compose(I, J)
    # index parity: a < 0 on even positions
    want_eps = -(1 if f.a > 0 else -1) * (1 if g.a > 0 else -1)
    if -K.sign != want_eps:
        K = W.forward(K)
    h = W.form_of(K)
    return h, h.dist


def cycle_from(f, steps):
    """Forms f, rho+(f), ..., ``steps`` baby steps forward."""
    out = [f]
    for _ in range(steps):
        out.append(rho_forward(out[-1]))
    return out
