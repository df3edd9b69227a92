"""What the parity of the period says about N.

Odd period: the middle of the period carries N = x^2 + y^2.
Even period: the middle of the period carries a divisor of 4N.
"""
from dataclasses import dataclass
from enum import Enum
import math

from .arith import qmul, qpow
from .cf_expansion import expand_sqrt
from .delta_omega import form_sequence, gamma_product
from .errors import EvenPeriod, OddPeriod

__all__ = [
    "TwoSquares", "SplitResult", "SplitSource", "sum_of_two_squares",
    "midpoint_factor", "unit_split", "check_gamma_product", "split_from",
]


@dataclass(frozen=True)
class TwoSquares:
    n: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x + self.y * self.y != self.n:
            raise ValueError(f"{self.x}^2 + {self.y}^2 != {self.n}")


class SplitSource(str, Enum):
    MIDPOINT = "midpoint"
    UNIT_PLUS = "unit-plus"
    UNIT_MINUS = "unit-minus"
    INFRASTRUCTURE = "infrastructure"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class SplitResult:
    n: int
    factor: int
    cofactor: int
    source: SplitSource
    detail: dict = None

    def __post_init__(self):
        if self.factor * self.cofactor != self.n:
            raise ValueError("factor * cofactor != n")
        if self.source is not SplitSource.TRIVIAL and not 1 < self.factor < self.n:
            raise ValueError(f"{self.factor} is not a proper divisor of {self.n}")

    @property
    def nontrivial(self):
        return self.source is not SplitSource.TRIVIAL


def split_from(n, g, source, detail=None):
    """SplitResult for divisor candidate g (falls back to Trivial)."""
    g = math.gcd(abs(g), n)
    if 1 < g < n:
        return SplitResult(n, g, n // g, source, detail)
    return SplitResult(n, 1, n, SplitSource.TRIVIAL, detail)


def _expansion(n, exp=None):
    return exp if exp is not None else expand_sqrt(n)


def sum_of_two_squares(n, exp=None):
    """(|delta_k|, |omega_k|) with k = (tau - 1)/2; requires odd period."""
    exp = _expansion(n, exp)
    tau = exp.period
    if tau % 2 == 0:
        raise EvenPeriod(f"period of sqrt({n}) is {tau} (even)")
    k = (tau - 1) // 2
    # |delta_k| = r_k and |omega_k| = c_k
    return TwoSquares(n, exp.r(k), exp.c(k))


def midpoint_factor(n, exp=None):
    """gcd(|delta_t0|, n) at t0 = (tau - 2)/2; requires even period."""
    exp = _expansion(n, exp)
    tau = exp.period
    if tau % 2:
        raise OddPeriod(f"period of sqrt({n}) is {tau} (odd)")
    t0 = (tau - 2) // 2
    d = exp.r(t0)
    assert (4 * n) % d == 0, "midpoint norm must divide 4N"
    return split_from(n, d, SplitSource.MIDPOINT, {"position": t0, "delta": -d if t0 % 2 == 0 else d})


def unit_split(n, unit):
    if unit.norm != 1:
        raise OddPeriod(f"unit of sqrt({n}) has norm -1")
    lo = math.gcd(unit.A - 1, n)
    if 1 < lo < n:
        return SplitResult(n, lo, n // lo, SplitSource.UNIT_MINUS)
    hi = math.gcd(unit.A + 1, n)
    if 1 < hi < n:
        return SplitResult(n, hi, n // hi, SplitSource.UNIT_PLUS)
    return SplitResult(n, 1, n, SplitSource.TRIVIAL)


def check_gamma_product(fs, unit):
    """Exact check of the gamma-product identities for even period.

    With gamma = prod_{m=1}^{tau} (sqrt N + (-1)^m omega_m) and
    D = prod_{m=1}^{tau} (-1)^m delta_m, verifies gamma == D * unit and the
    consequence gamma == sigma(gamma) * unit^2, all by cross-multiplication.
    """
    if fs.period % 2:
        raise OddPeriod("gamma identity is stated for even period")
    n = fs.n
    g, den = gamma_product(fs)
    u = (unit.A, unit.B)
    return g == (den * unit.A, den * unit.B) and qmul((g[0], -g[1]), qpow(u, 2, n), n) == g
