"""Continued-fraction expansion of sqrt(N) and its convergents.

All arithmetic is exact. An expansion stores exactly one period of the
partial quotients plus the (c, r) pairs for indices 0..tau; anything beyond
is resolved by periodicity.
"""
from dataclasses import dataclass
import math

from .arith import isqrt, neg1_pow
from .errors import PerfectSquare, PeriodNotFound
from .report import CheckReport

__all__ = [
    "SurdExpansion", "Convergent", "isqrt", "expand_sqrt", "default_max_terms",
    "convergents", "verify_identities",
]


@dataclass(frozen=True)
class SurdExpansion:
    n: int
    a0: int
    partials: tuple  # a_1 .. a_tau
    c_seq: tuple     # c_0 .. c_tau
    r_seq: tuple     # r_0 .. r_tau
    period: int

    def a(self, m):
        if m == 0:
            return self.a0
        if m < 0:
            raise IndexError("partial quotients start at index 0")
        return self.partials[(m - 1) % self.period]

    def c(self, m):
        return self.c_seq[m % self.period]

    def r(self, m):
        return self.r_seq[m % self.period]

    @property
    def tau(self):
        return self.period

    @property
    def is_even(self):
        return self.period % 2 == 0


@dataclass(frozen=True)
class Convergent:
    index: int
    A: int
    B: int

    def element(self):
        """The element A + B*sqrt(N) as an ``(A, B)`` pair."""
        return (self.A, self.B)


def default_max_terms(n):
    return math.ceil(math.sqrt(n) * math.log(n)) + 16


def expand_sqrt(n, max_terms=None):
    """Expand sqrt(n) through exactly one period.

    Stops at the first m with a_m == 2*a0. Raises PerfectSquare for square n
    and PeriodNotFound if ``max_terms`` partial quotients do not close it.
    """
    if n < 2:
        raise ValueError(f"radicand must be >= 2, got {n}")
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(n)
    if max_terms is None:
        max_terms = default_max_terms(n)
    c, r = a0, n - a0 * a0
    partials, cs, rs = [], [c], [r]
    two_a0 = 2 * a0
    while True:
        if len(partials) >= max_terms:
            raise PeriodNotFound(n, max_terms)
        a = (a0 + c) // r
        c = a * r - c
        q, rem = divmod(n - c * c, r)
        assert rem == 0
        r = q
        partials.append(a)
        cs.append(c)
        rs.append(r)
        if a == two_a0:
            break
    assert (cs[-1], rs[-1]) == (cs[0], rs[0]), "period closed with a stale (c, r) state"
    return SurdExpansion(n, a0, tuple(partials), tuple(cs), tuple(rs), len(partials))


def convergents(exp, upto):
    """Convergents A_m/B_m for m = -1 .. upto (list index = m + 1)."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    out = [Convergent(-1, 1, 0), Convergent(0, exp.a0, 1)]
    A2, B2, A1, B1 = 1, 0, exp.a0, 1
    for m in range(1, upto + 1):
        a = exp.a(m)
        A2, B2, A1, B1 = A1, B1, a * A1 + A2, a * B1 + B2
        out.append(Convergent(m, A1, B1))
    return out


def verify_identities(exp, upto=None, convs=None):
    """Check the classical convergent identities exactly.

    ``convs`` may be supplied (list indexed by m + 1) to audit an externally
    produced sequence; by default it is recomputed. Every identity reports
    the first index at which it fails.
    """
    tau, n, a0 = exp.period, exp.n, exp.a0
    if upto is None:
        upto = 2 * tau
    if upto < tau:
        raise ValueError("upto must cover one full period")
    if convs is None:
        convs = convergents(exp, upto)
    A = lambda m: convs[m + 1].A  # noqa: E731
    B = lambda m: convs[m + 1].B  # noqa: E731
    rep = CheckReport(subject=n)

    rep.record("recurrence", range(1, upto + 1),
               lambda m: A(m) == exp.a(m) * A(m - 1) + A(m - 2)
               and B(m) == exp.a(m) * B(m - 1) + B(m - 2))
    rep.record("determinant", range(0, upto + 1),
               lambda m: A(m) * B(m - 1) - A(m - 1) * B(m) == neg1_pow(m - 1))
    rep.record("determinant_step2", range(1, upto + 1),
               lambda m: A(m) * B(m - 2) - A(m - 2) * B(m) == neg1_pow(m) * exp.a(m))
    rep.record("coprime", range(0, upto + 1), lambda m: math.gcd(A(m), B(m)) == 1)

    t = tau
    rep.add("period_end_recurrence",
            A(t) == 2 * a0 * A(t - 1) + A(t - 2) and B(t) == 2 * a0 * B(t - 1) + B(t - 2))
    s = neg1_pow(t)
    rep.add("period_end_determinants",
            A(t) * B(t - 1) - A(t - 1) * B(t) == -s
            and A(t - 1) * B(t - 2) - A(t - 2) * B(t - 1) == s
            and A(t) * B(t - 2) - A(t - 2) * B(t) == 2 * a0 * s)
    rep.add("period_end_predecessor",
            A(t - 2) == -a0 * A(t - 1) + n * B(t - 1)
            and B(t - 2) == A(t - 1) - a0 * B(t - 1))
    rep.add("period_end_successor",
            A(t) == a0 * A(t - 1) + n * B(t - 1) and B(t) == A(t - 1) + a0 * B(t - 1))
    rep.record("period_cross_products", range(0, t),
               lambda j: A(j) * A(t - j - 1) + A(j - 1) * A(t - j - 2)
               - n * (B(j) * B(t - j - 1) + B(j - 1) * B(t - j - 2)) == 0)
    return rep
