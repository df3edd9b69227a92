"""Norm sequences of the convergents and the quadratic forms they define.

For the convergents A_m + B_m*sqrt(N):

    delta_m = A_m**2 - N*B_m**2                 (field norm)
    omega_m = A_m*A_{m-1} - N*B_m*B_{m-1}

and the form f_m(x, y) = delta_m x^2 + 2 omega_m xy + delta_{m-1} y^2 has
discriminant 4N. Omega_0 is taken as a0 (from A_{-1} = 1, B_{-1} = 0), so
the norm identity omega_{m+1}^2 - delta_m delta_{m+1} = N holds from m = 0.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

from .arith import iroot, is_square, neg1_pow, qmul, qpow
from .cf_expansion import convergents, Convergent
from .errors import InternalInconsistency
from .report import CheckReport

__all__ = [
    "FormSequence", "QuadraticForm", "PellUnit", "form_sequence", "form_at",
    "check_symmetry", "check_uniqueness", "pell_unit", "translate",
    "t_matrix", "lambda_via_matrices", "check_recurrences", "check_bounds",
    "gamma_product",
]


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b2: int
    c: int

    @property
    def discriminant(self):
        return self.b2 * self.b2 - 4 * self.a * self.c

    @property
    def is_primitive(self):
        return math.gcd(self.a, self.b2, self.c) == 1

    def __call__(self, x, y):
        return self.a * x * x + self.b2 * x * y + self.c * y * y

    def __iter__(self):
        return iter((self.a, self.b2, self.c))


@dataclass(frozen=True)
class FormSequence:
    n: int
    delta: tuple  # delta_0 .. delta_tau
    omega: tuple  # omega_0 .. omega_tau
    period: int
    expansion: object = None

    def _fold(self, m, seq):
        # c_{m + k tau} = c_m * unit^k and the unit has norm (-1)^tau, so both
        # sequences pick up a factor (-1)^(k tau) per translation.
        k, r = divmod(m, self.period)
        sign = -1 if (k * self.period) % 2 else 1
        return sign * seq[r]

    def d(self, m):
        """delta_m for any integer m (delta_{-1} = 1)."""
        return self._fold(m, self.delta)

    def w(self, m):
        """omega_m for any integer m."""
        return self._fold(m, self.omega)

    @property
    def form_period(self):
        return self.period if self.period % 2 == 0 else 2 * self.period


@dataclass(frozen=True)
class PellUnit:
    A: int
    B: int
    n: int
    norm: int
    is_cube: bool
    period: int = 0
    cube_root: tuple = None  # (u, v) with ((u + v sqrt N)/2)^3 == A + B sqrt N

    def element(self):
        return (self.A, self.B)


def form_sequence(exp):
    """Delta/omega over one period, computed twice and cross-checked.

    The direct route squares convergents; the second route runs the
    recurrences omega_{m+1} = omega_m + a_{m+1} delta_m and
    delta_{m+1} = a_{m+1}^2 delta_m + 2 a_{m+1} omega_m + delta_{m-1}.
    """
    n, tau = exp.n, exp.period
    convs = convergents(exp, tau)
    direct_d, direct_w = [], []
    for m in range(tau + 1):
        cm, cp = convs[m + 1], convs[m]
        direct_d.append(cm.A * cm.A - n * cm.B * cm.B)
        direct_w.append(cm.A * cp.A - n * cm.B * cp.B)

    rec_d, rec_w = [exp.a0 * exp.a0 - n], [exp.a0]
    d_prev = 1
    for m in range(tau):
        a = exp.a(m + 1)
        d_next = a * a * rec_d[m] + 2 * a * rec_w[m] + d_prev
        rec_w.append(rec_w[m] + a * rec_d[m])
        d_prev = rec_d[m]
        rec_d.append(d_next)

    if direct_d != rec_d or direct_w != rec_w:
        raise InternalInconsistency(f"delta/omega routes disagree for N={n}")
    return FormSequence(n, tuple(rec_d), tuple(rec_w), tau, exp)


def form_at(fs, m):
    """f_m = (delta_m, 2 omega_m, delta_{m-1}) for m >= 1, periodic beyond tau."""
    if m < 1:
        raise ValueError("forms are indexed from m = 1")
    q = QuadraticForm(fs.d(m), 2 * fs.w(m), fs.d(m - 1))
    assert q.discriminant == 4 * fs.n
    return q


def check_symmetry(fs):
    tau, n = fs.period, fs.n
    s = neg1_pow(tau)
    rep = CheckReport(subject=n)
    rep.record("delta_reflection", range(0, tau - 1),
               lambda m: fs.d(m) == s * fs.d(tau - m - 2))
    rep.record("omega_reflection", range(1, tau - 1),
               lambda m: fs.w(tau - m - 1) == -s * fs.w(m))
    convs = convergents(fs.expansion, tau)
    A = lambda m: convs[m + 1].A  # noqa: E731
    B = lambda m: convs[m + 1].B  # noqa: E731
    At, Bt = A(tau - 1), B(tau - 1)
    rep.record("convergent_reflection", range(0, tau - 1),
               lambda m: A(tau - m - 2) == neg1_pow(m - 1) * At * A(m) + neg1_pow(m) * n * Bt * B(m)
               and B(tau - m - 2) == neg1_pow(m) * At * B(m) + neg1_pow(m - 1) * Bt * A(m))
    rep.record("delta_periodic", range(1, 2 * fs.form_period + 1),
               lambda m: fs.d(m + fs.form_period) == fs.d(m))
    return rep


def check_uniqueness(fs):
    triples = {tuple(form_at(fs, m)) for m in range(1, fs.period + 1)}
    return len(triples) == fs.period


def check_recurrences(fs, upto=None):
    """Norm identity, both recurrence forms and the sign pattern up to ``upto``."""
    n = fs.n
    exp = fs.expansion
    if upto is None:
        upto = 2 * fs.period
    d, w = fs.d, fs.w
    rep = CheckReport(subject=n)
    rep.record("norm_identity", range(0, upto),
               lambda m: w(m + 1) ** 2 - d(m) * d(m + 1) == n)
    rep.record("delta_recurrence", range(1, upto),
               lambda m: d(m + 1) == exp.a(m + 1) ** 2 * d(m) + 2 * exp.a(m + 1) * w(m) + d(m - 1)
               and w(m + 1) == w(m) + exp.a(m + 1) * d(m))
    rep.record("delta_recurrence_alt", range(1, upto),
               lambda m: d(m + 1) == d(m - 1) + exp.a(m + 1) * (w(m + 1) + w(m)))
    rep.record("sign_pattern", range(1, upto + 1),
               lambda m: (d(m) > 0) != (d(m - 1) > 0) and (w(m) > 0) == (d(m - 1) > 0))
    rep.record("cr_link", range(0, upto + 1),
               lambda m: abs(d(m)) == exp.r(m) and abs(w(m)) == exp.c(m))
    rep.record("matrix_route", [0],
               lambda _: lambda_via_matrices(fs, upto) == [tuple(form_at(fs, m)) for m in range(1, upto + 1)])
    if fs.period % 2 == 0:
        t = fs.period
        rep.add("even_period_end", d(t) == d(t - 2) and w(t - 1) == -exp.a0 and w(t) == exp.a0)
    return rep


def check_bounds(fs, upto=None):
    n, exp = fs.n, fs.expansion
    if upto is None:
        upto = 2 * fs.period
    rep = CheckReport(subject=n)
    # |delta_m| < 2 sqrt(N) / a_{m+1}  <=>  (a_{m+1} delta_m)^2 < 4N
    rep.record("delta_bound", range(1, upto + 1),
               lambda m: (exp.a(m + 1) * fs.d(m)) ** 2 < 4 * n)
    rep.record("omega_bound", range(1, upto + 1), lambda m: 0 < fs.w(m) ** 2 < n)
    return rep


def t_matrix(a):
    return ((a * a, a, 1), (2 * a, 1, 0), (1, 0, 0))


def _matvec(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(3)) for i in range(3))


def _matmul(M, P):
    return tuple(tuple(sum(M[i][k] * P[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def lambda_via_matrices(fs, upto):
    """Triples Lambda_1..Lambda_upto from Lambda_1 by cumulative T-matrix products.

    Verification path only: the product T(a_m)...T(a_2) is accumulated and
    applied to Lambda_1 afresh at every step.
    """
    exp = fs.expansion
    lam1 = (fs.d(1), 2 * fs.w(1), fs.d(0))
    out = [lam1]
    P = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for m in range(2, upto + 1):
        P = _matmul(t_matrix(exp.a(m)), P)
        out.append(_matvec(P, lam1))
    return out


def gamma_product(fs):
    """gamma = prod_{m=1}^{tau} (sqrt N + (-1)^m omega_m) in Z[sqrt N], and the
    rational integer prod_{m=1}^{tau} (-1)^m delta_m."""
    n = fs.n
    g = (1, 0)
    den = 1
    for m in range(1, fs.period + 1):
        sgn = -1 if m % 2 else 1
        g = qmul(g, (sgn * fs.w(m), 1), n)
        den *= sgn * fs.d(m)
    return g, den


def _cube_root_half(A, B, n):
    """Search x = u/2 (u odd or even) with (x + y sqrt N)^3 == A + B sqrt N.

    Candidates come from the real root of 64x^9 - 48Ax^6 + (27NB^2 - 15A^2)x^3 - A^3;
    since A + B sqrt N ~ 2A, the root satisfies u = 2x ~ (2A)^(1/3). Each
    candidate is accepted only after exact checks of the polynomial, of
    y^2 = (A - x^3)/(3Nx) being the square of a half-integer, and of the cube.
    """
    c = iroot(2 * A, 3)
    for u in range(max(1, c - 3), c + 4):
        # polynomial at x = u/2, scaled by 2^9
        poly = 64 * u ** 9 - 48 * 8 * A * u ** 6 + (27 * n * B * B - 15 * A * A) * 64 * u ** 3 - 512 * A ** 3
        if poly != 0:
            continue
        x = Fraction(u, 2)
        y2 = (A - x ** 3) / (3 * n * x)
        if y2 <= 0:
            continue
        v2 = 4 * y2
        if v2.denominator != 1 or not is_square(v2.numerator):
            continue
        v = math.isqrt(v2.numerator)
        # (u + v sqrt N)^3 == 8 (A + B sqrt N)
        if qpow((u, v), 3, n) == (8 * A, 8 * B):
            return (u, v)
    return None


def pell_unit(exp):
    """The unit A_{tau-1} + B_{tau-1} sqrt(N), with its norm and cube test."""
    n, tau = exp.n, exp.period
    conv = convergents(exp, tau - 1)[-1]
    A, B = conv.A, conv.B
    norm = A * A - n * B * B
    if norm != neg1_pow(tau):
        raise InternalInconsistency(f"unit norm {norm} for N={n}, tau={tau}")
    root = _cube_root_half(A, B, n)
    return PellUnit(A, B, n, norm, root is not None, tau, root)


def translate(conv, unit, k):
    """c_m * unit^k, i.e. the convergent k periods further along."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return conv
    A, B = qmul((conv.A, conv.B), qpow((unit.A, unit.B), k, unit.n), unit.n)
    return Convergent(conv.index + k * unit.period, A, B)
