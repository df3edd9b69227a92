"""Splitting N with the continued fraction of sqrt(N).

Small N: walk the expansion to the symmetry point of the period and read the
divisor of 4N sitting there. Larger N: jump to the same position with giant
steps, using h*R from the class number formula as the distance target, and
halve the target while the landing form is principal.
"""
from collections import Counter
from dataclasses import dataclass
import math

from .analytic import HRProduct, hr_fast_series, hr_sine_sum
from .arith import is_probable_prime, is_square, isqrt, perfect_power, primes_up_to
from .cf_expansion import default_max_terms
from .errors import Exhausted, Incomplete, NoEvenPeriod, PeriodNotFound, PerfectSquare, PrecisionExhausted
from .infrastructure import DEFAULT_PRECISION, Distance, ReducedForm, Walker
from .representations import SplitResult, SplitSource, split_from

__all__ = [
    "FactorizationResult", "BsgsPlan", "factor_by_period_walk", "navigate_to_distance",
    "factor_by_infrastructure", "full_factorization", "hr_for_factoring", "Navigator",
    "default_max_halvings", "MULTIPLIERS",
]

TRIAL_BOUND = 1000
SINE_SUM_LIMIT = 10 ** 6
MULTIPLIERS = (3, 5, 7, 11, 13, 15, 17, 19, 21, 23, 29, 31, 33, 35, 37, 39, 41, 43)


@dataclass(frozen=True)
class FactorizationResult:
    n: int
    factors: tuple  # ((prime, exponent), ...) sorted by prime
    method_trace: tuple  # ((divisor, tag), ...)

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            prod *= p ** e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")
        for p, _ in self.factors:
            if not is_probable_prime(p):
                raise ValueError(f"{p} is not prime")

    @property
    def primes(self):
        return [p for p, _ in self.factors]

    def expanded(self):
        return [p for p, e in self.factors for _ in range(e)]


@dataclass(frozen=True)
class BsgsPlan:
    target_distance: object
    halving_level: int
    giant_form: ReducedForm
    tolerance: object

    def __post_init__(self):
        if not self.target_distance > 0:
            raise ValueError("target distance must be positive")


# -- period walk ----------------------------------------------------------------

def _walk_to_symmetry(n, max_terms):
    """Run (c, r) until the period folds back on itself.

    c_{m+1} == c_m marks the middle of an even period (t0 = m); r_{m+1} == r_m
    the middle of an odd one.
    """
    a0 = isqrt(n)
    c, r = a0, n - a0 * a0
    for m in range(max_terms):
        a = (a0 + c) // r
        c1 = a * r - c
        r1 = (n - c1 * c1) // r
        if r1 == r:
            # both repeat only when tau = 1
            return "odd", m, r
        if c1 == c:
            return "even", m, r
        c, r = c1, r1
    raise PeriodNotFound(n, max_terms)


def factor_by_period_walk(n, max_terms=None):
    """Midpoint divisor of an even period, falling back to gcd(A -+ 1, N).

    Returns a SplitResult whose source is TRIVIAL when neither route splits.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if is_square(n):
        raise PerfectSquare(n)
    if max_terms is None:
        max_terms = default_max_terms(n)
    kind, t0, r = _walk_to_symmetry(n, max_terms)
    if kind == "odd":
        raise NoEvenPeriod(f"period of sqrt({n}) is odd")
    res = split_from(n, r, SplitSource.MIDPOINT, {"position": t0, "delta": -r if t0 % 2 == 0 else r})
    if res.nontrivial:
        return res
    A = _unit_numerator_mod(n, 2 * t0 + 2)
    for g, src in ((A - 1, SplitSource.UNIT_MINUS), (A + 1, SplitSource.UNIT_PLUS)):
        alt = split_from(n, g, src, {"period": 2 * t0 + 2})
        if alt.nontrivial:
            return alt
    return res


def _unit_numerator_mod(n, tau):
    """A_{tau-1} mod n, so gcd(A -+ 1, n) costs O(tau) small operations."""
    a0 = isqrt(n)
    c, r = a0, n - a0 * a0
    prev, cur = 1, a0 % n
    for _ in range(tau - 1):
        a = (a0 + c) // r
        c = a * r - c
        r = (n - c * c) // r
        prev, cur = cur, (a * cur + prev) % n
    return cur


# -- giant steps ------------------------------------------------------------------

class Navigator:
    """Doubling table of principal ideals for reaching far distances quickly."""

    def __init__(self, n, reach, precision=DEFAULT_PRECISION):
        self.n = n
        self.walker = W = Walker(n, precision)
        self.precision = precision
        self.iv = W.iv
        g = W.forward(W.identity())
        while g.dist.a < 1:
            g = W.forward(g)
        table = [g]
        while table[-1].dist.b * 2 <= reach:
            table.append(W.compose(table[-1], table[-1]))
        self.table = table

    def locate(self, target):
        """Reduced principal ideal whose distance is nearest to ``target``."""
        W = self.walker
        t = target.interval(self.precision) if isinstance(target, Distance) else self.iv.mpf(target)
        if not t.a > 0:
            raise ValueError("target must be positive")
        cur = W.identity()
        for g in reversed(self.table):
            if (cur.dist + g.dist).b <= t.a:
                cur = W.compose(cur, g)
        while cur.dist.a > t.b:
            cur = W.backward(cur)
        nxt = W.forward(cur)
        while nxt.dist.b <= t.a:
            cur, nxt = nxt, W.forward(nxt)
        err = max(cur.dist.delta, nxt.dist.delta) + t.delta
        if err >= W.baby_step_scale():
            raise PrecisionExhausted(f"distance error {err} exceeds baby-step scale; raise precision")
        mid = t.mid
        return cur if abs(cur.dist.mid - mid) <= abs(nxt.dist.mid - mid) else nxt

    def neighborhood(self, I, k):
        W = self.walker
        back, fwd = [], []
        x = I
        for _ in range(k):
            x = W.backward(x)
            back.append(x)
        x = I
        for _ in range(k):
            x = W.forward(x)
            fwd.append(x)
        return back[::-1] + [I] + fwd


def navigate_to_distance(n, target, precision=DEFAULT_PRECISION):
    """Reduced form (with distance) nearest to ``target`` on the principal cycle."""
    val = float(target.value if isinstance(target, Distance) else target)
    nav = Navigator(n, val + 1, precision)
    return nav.walker.form_of(nav.locate(target))


def default_max_halvings(n, hr):
    return max(1, math.ceil(math.log2(max(float(hr) / math.log(2 * math.sqrt(n)), 1.0))) + 1)


def _hr_value(hr):
    return hr.value if isinstance(hr, HRProduct) else hr


def factor_by_infrastructure(n, hr, max_halvings=None, precision=DEFAULT_PRECISION, cube=False):
    """Probe distances hr/2^l and 3 hr/2^l for a form exposing a divisor of n.

    Landing next to the principal form means the class number is even at this
    level, so the target is halved again. With ``cube`` (the Pell unit is a
    cube) the targets divided by 3 are probed as well.
    """
    if is_square(n):
        raise PerfectSquare(n)
    hv = _hr_value(hr)
    if max_halvings is None:
        max_halvings = default_max_halvings(n, hv)
    nav = Navigator(n, 1.5 * float(hv) + 1, precision)
    W = nav.walker
    k = math.ceil(math.log(n))
    hr_iv = nav.iv.mpf(hv)
    if isinstance(hr, HRProduct):
        hr_iv = nav.iv.mpf([hv - hr.est_error, hv + hr.est_error])
    attempts = []
    for level in range(1, max_halvings + 1):
        scale = 2 ** level
        targets = [hr_iv / scale, 3 * hr_iv / scale]
        if cube:
            targets += [t / 3 for t in targets]
        for t in targets:
            target = Distance.from_interval(t, precision)
            I = nav.locate(target)
            plan = BsgsPlan(target.value, level, W.form_of(I), target.err_bound + W.distance(I).err_bound)
            hood = nav.neighborhood(I, k)
            for J in hood:
                g = math.gcd(J.q, n)
                if 1 < g < n:
                    return SplitResult(n, g, n // g, SplitSource.INFRASTRUCTURE, {
                        "level": level, "target": float(target.value), "q": J.q,
                        "distance": float(J.dist.mid), "plan": plan})
            principal = any(J.q == 1 for J in hood[k - 1:k + 2])
            attempts.append((level, float(target.value), "principal" if principal else "no-divisor"))
    raise Exhausted(f"no divisor of {n} within {max_halvings} halvings: {attempts}")


def hr_for_factoring(n, precision=DEFAULT_PRECISION):
    if n <= SINE_SUM_LIMIT:
        return hr_sine_sum(n, precision if n <= 2000 else 53)
    D = n if n % 4 == 1 else 4 * n
    return hr_fast_series(n, terms=math.ceil(8 * math.sqrt(D)) + 64, precision=precision)


# -- full factorization ----------------------------------------------------------------

def _split_multiplier(m, max_terms):
    """The midpoint of sqrt(k m) divides 4 k m and often splits m."""
    for mult in MULTIPLIERS:
        km = mult * m
        if m % mult == 0 or is_square(km):
            continue
        try:
            kind, _, r = _walk_to_symmetry(km, max_terms)
        except PeriodNotFound:
            continue
        g = math.gcd(r, m)
        if kind == "even" and 1 < g < m:
            return g, "multiplier"
    return None


def _split_walk(m, max_terms):
    try:
        res = factor_by_period_walk(m, max_terms=max_terms)
    except (NoEvenPeriod, PeriodNotFound):
        return None
    return (res.factor, res.source.value) if res.nontrivial else None


def _split_infra(m, precision, infra_limit):
    if m > infra_limit:
        return None
    try:
        # ValueError: h*R needs a square-free radicand
        res = factor_by_infrastructure(m, hr_for_factoring(m, precision), precision=precision)
    except (Exhausted, ValueError):
        return None
    return res.factor, res.source.value


def _split_trial(m):
    for p in primes_up_to(min(isqrt(m), 10 ** 6)):
        if m % p == 0:
            return p, "trial"
    return None


METHOD_ORDER = {
    "auto": ("walk", "infra", "multiplier"),
    "walk": ("walk", "multiplier", "trial"),
    "infra": ("infra", "walk", "multiplier", "trial"),
}


def full_factorization(n, max_terms=None, precision=DEFAULT_PRECISION, infra_limit=SINE_SUM_LIMIT,
                       method="auto", trial_bound=None):
    """Prime factorization with a per-divisor method trace.

    ``auto`` strips primes below 1000 by trial division first; ``walk`` and
    ``infra`` skip that so the continued-fraction methods do the splitting
    and only fall back to trial division on cofactors they cannot split.
    After a probable-prime screen and perfect-power extraction, each composite
    is tried with the period walk, infrastructure probes (cofactors up to
    ``infra_limit``, where the sine sum is affordable) and the midpoints of
    sqrt(k m) for small multipliers k, in the order given by ``method``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if method not in METHOD_ORDER:
        raise ValueError(f"unknown method {method!r}")
    if trial_bound is None:
        trial_bound = TRIAL_BOUND if method == "auto" else 0
    factors = Counter()
    trace = []
    m = n
    for p in primes_up_to(trial_bound):
        if m % p == 0:
            while m % p == 0:
                m //= p
                factors[p] += 1
            trace.append((p, "trial"))
    stack = [(m, 1)] if m > 1 else []
    stuck = []
    while stack:
        c, mult = stack.pop()
        if is_probable_prime(c):
            factors[c] += mult
            trace.append((c, "prime"))
            continue
        root, k = perfect_power(c)
        if k > 1:
            trace.append((root, "square" if k == 2 else "power"))
            stack.append((root, mult * k))
            continue
        budget = max_terms if max_terms is not None else default_max_terms(c)
        found = None
        for step in METHOD_ORDER[method]:
            if step == "walk":
                found = _split_walk(c, budget)
            elif step == "infra":
                found = _split_infra(c, precision, infra_limit)
            elif step == "multiplier":
                found = _split_multiplier(c, budget)
            else:
                found = _split_trial(c)
            if found:
                break
        if found is None:
            stuck.append((c, mult))
            continue
        g, tag = found
        assert c % g == 0 and 1 < g < c, "emitted divisor must divide the cofactor"
        trace.append((g, tag))
        stack.append((g, mult))
        stack.append((c // g, mult))
    if stuck:
        partial = {"n": n, "factors": sorted(factors.items()), "unsplit": stuck, "trace": trace}
        raise Incomplete(partial, f"could not split {[c for c, _ in stuck]}")
    return FactorizationResult(n, tuple(sorted(factors.items())), tuple(trace))
