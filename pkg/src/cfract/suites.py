"""Invariant suites run by ``cfract verify`` and by the acceptance tests.

Every suite takes a radicand and returns a CheckReport; nothing raises on a
failed identity, so a sweep can report every failure at once.
"""
from dataclasses import dataclass, field
import math

from .analytic import hr_fast_series, hr_sine_sum, regulator_ratio
from .arith import is_square, is_squarefree
from .cf_expansion import expand_sqrt, verify_identities
from .delta_omega import (check_bounds, check_recurrences, check_symmetry, check_uniqueness,
                          form_at, form_sequence, pell_unit)
from .infrastructure import cycle_from, is_reduced, period_distance, principal_form, rho_backward
from .report import CheckReport
from .representations import check_gamma_product, sum_of_two_squares

__all__ = ["Context", "SUITES", "run_suites", "sweep"]

PERIOD_DISTANCE_TOL = 1e-20


@dataclass
class Context:
    """Shared per-radicand data so suites do not re-expand sqrt(n)."""

    n: int
    exp: object = None
    fs: object = None
    unit: object = None
    cache: dict = field(default_factory=dict)

    @classmethod
    def build(cls, n):
        exp = expand_sqrt(n)
        fs = form_sequence(exp)
        return cls(n, exp, fs, pell_unit(exp))


def suite_expansion(ctx):
    return verify_identities(ctx.exp, upto=2 * ctx.exp.period)


def suite_forms(ctx):
    fs = ctx.fs
    rep = CheckReport(subject=ctx.n)
    rep.merge(check_symmetry(fs))
    rep.add("uniqueness", check_uniqueness(fs))
    rep.merge(check_recurrences(fs))
    rep.merge(check_bounds(fs))
    return rep


def suite_representations(ctx):
    n, exp, fs = ctx.n, ctx.exp, ctx.fs
    rep = CheckReport(subject=n)
    if exp.period % 2:
        ts = sum_of_two_squares(n, exp)
        rep.add("two_squares", ts.x ** 2 + ts.y ** 2 == n)
    else:
        rep.add("gamma_product", check_gamma_product(fs, ctx.unit))
        if is_squarefree(n):
            t0 = (exp.period - 2) // 2
            rep.add("midpoint_divides_4n", (4 * n) % abs(fs.d(t0)) == 0, t0)
    return rep


def suite_infrastructure(ctx, prec=128):
    n, fs = ctx.n, ctx.fs
    rep = CheckReport(subject=n)
    span = 2 * fs.form_period
    cyc = cycle_from(principal_form(n, prec), span)
    rep.record("orbit_matches_sequence", range(1, span + 1),
               lambda m: cyc[m].triple == tuple(form_at(fs, m)) and is_reduced(cyc[m]))
    rep.record("rho_inverse", range(1, span + 1),
               lambda m: rho_backward(cyc[m]).triple == cyc[m - 1].triple)
    rep.add("orbit_period", cyc[fs.form_period].triple == cyc[0].triple)
    d = period_distance(fs, ctx.unit, prec)
    ctx.cache["period_distance"] = d
    log_unit = cyc[fs.period].dist
    rep.add("period_distance", abs(d.value - log_unit.value) <= d.err_bound + log_unit.err_bound
            and d.err_bound < PERIOD_DISTANCE_TOL, detail=f"err_bound={float(d.err_bound):.3g}")
    return rep


def suite_analytic(ctx, prec=64):
    """Sine sum against the fast series, and h*R against the Pell unit."""
    n = ctx.n
    rep = CheckReport(subject=n)
    if not is_squarefree(n):
        return rep
    a = hr_sine_sum(n, prec)
    b = hr_fast_series(n, terms=50 * math.ceil(math.log(n)), precision=prec)
    rel = abs(a.value - b.value) / a.value
    rep.add("dirichlet_cross_check", rel <= 1e-6, detail=f"rel={float(rel):.3g}")
    log_unit = ctx.cache.get("period_distance") or period_distance(ctx.fs, ctx.unit)
    rep.add("regulator_ratio", regulator_ratio(a.value, log_unit.value) is not None,
            detail=f"ratio={float(a.value / log_unit.value):.9f}")
    return rep


SUITES = {
    "expansion": suite_expansion,
    "forms": suite_forms,
    "representations": suite_representations,
    "infrastructure": suite_infrastructure,
    "analytic": suite_analytic,
}

# the sine sum is O(n); keep the analytic suite to small radicands
ANALYTIC_LIMIT = 500


def run_suites(n, names=None):
    ctx = Context.build(n)
    names = names or list(SUITES)
    out = {}
    for name in names:
        if name == "analytic" and n > ANALYTIC_LIMIT:
            continue
        out[name] = SUITES[name](ctx)
    return out


def sweep(upto, names=None, start=2):
    """Run suites over every non-square n in [start, upto]; return failures by suite."""
    failures = {}
    counts = {}
    for n in range(start, upto + 1):
        if is_square(n):
            continue
        for name, rep in run_suites(n, names).items():
            counts[name] = counts.get(name, 0) + 1
            for c in rep.failures():
                failures.setdefault(name, []).append((n, c.name, c.first_failure))
    return counts, failures
