"""cfract command line.

    cfract <expand|forms|two-squares|factor|hr|verify|bench> N [options]

Every command prints one record {schema_version, n, command, result,
timings}. Integers inside ``result`` are decimal strings. Exit codes:
0 success, 1 method failure, 2 invalid input, 64 usage error.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
import time

from . import __version__
from .analytic import hr_fast_series, hr_sine_sum
from .arith import is_squarefree
from .cache import ResultCache, resolve_path
from .cf_expansion import convergents, expand_sqrt
from .delta_omega import form_at, form_sequence, pell_unit
from .errors import (DomainError, EvenPeriod, Exhausted, Incomplete, NoEvenPeriod, OddPeriod,
                     PeriodNotFound, PerfectSquare, PrecisionExhausted)
from .factoring import full_factorization
from .infrastructure import mp_context
from .representations import sum_of_two_squares

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILURE, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64

COMMANDS = ("expand", "forms", "two-squares", "factor", "hr", "verify", "bench")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="cfract", description="Continued fractions of sqrt(N): periods, forms, splitting and h*R.")
    p.add_argument("--version", action="version", version=f"cfract {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("n", nargs="?", type=int, help="radicand (not used by verify)")
    p.add_argument("--precision", type=int, default=128, metavar="BITS")
    p.add_argument("--series-terms", type=int, default=None, metavar="K")
    p.add_argument("--max-terms", type=int, default=None, metavar="T",
                   help="budget of continued-fraction steps")
    p.add_argument("--method", default=None, metavar="M",
                   help="factor: walk|infra|auto (default walk); hr: sine|fast (default sine)")
    p.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--cache", default=None, metavar="PATH")
    p.add_argument("--upto", type=int, default=None, metavar="M", help="verify: largest radicand")
    return p


# -- helpers -------------------------------------------------------------------------

def _s(x):
    return str(x)


def _real(x, prec):
    return mp_context(prec).nstr(x, max(15, int(prec * math.log10(2))))


def _expansion(n, args):
    return expand_sqrt(n, max_terms=args.max_terms)


# -- commands --------------------------------------------------------------------------

def cmd_expand(args, cache):
    exp = _expansion(args.n, args)
    convs = convergents(exp, exp.period - 1)
    unit = convs[-1]
    cache.append(n=args.n, tau=exp.period, unit_A_digits=_s(unit.A), unit_B_digits=_s(unit.B))
    return {
        "a0": _s(exp.a0),
        "partials": [_s(a) for a in exp.partials],
        "period": _s(exp.period),
        "convergents": [{"index": _s(c.index), "A": _s(c.A), "B": _s(c.B)} for c in convs[1:]],
    }


def cmd_forms(args, cache):
    exp = _expansion(args.n, args)
    fs = form_sequence(exp)
    unit = pell_unit(exp)
    cache.append(n=args.n, tau=exp.period, unit_A_digits=_s(unit.A), unit_B_digits=_s(unit.B))
    return {
        "period": _s(exp.period),
        "delta": [_s(d) for d in fs.delta],
        "omega": [_s(w) for w in fs.omega],
        "forms": [[_s(x) for x in form_at(fs, m)] for m in range(1, fs.form_period + 1)],
        "unit": {"A": _s(unit.A), "B": _s(unit.B), "norm": _s(unit.norm), "is_cube": unit.is_cube},
    }


def cmd_two_squares(args, cache):
    ts = sum_of_two_squares(args.n, _expansion(args.n, args))
    return {"x": _s(ts.x), "y": _s(ts.y)}


def cmd_factor(args, cache):
    method = args.method or "walk"
    res = full_factorization(args.n, max_terms=args.max_terms, precision=args.precision, method=method)
    return {
        "factors": [[_s(p), _s(e)] for p, e in res.factors],
        "method_trace": [[_s(d), tag] for d, tag in res.method_trace],
        "method": method,
    }


def cmd_hr(args, cache):
    n = args.n
    method = args.method or "sine"
    if method not in ("sine", "fast"):
        raise UsageError(f"hr method must be sine or fast, not {method!r}")
    if not is_squarefree(n):
        raise ValueError(f"{n} is not square-free")
    tag = "sine-sum" if method == "sine" else "fast-series"
    terms = args.series_terms if method == "fast" else None
    hit = cache.hr(n, tag, args.precision, terms)
    if hit is None:
        if method == "sine":
            hr = hr_sine_sum(n, args.precision)
        else:
            hr = hr_fast_series(n, terms=terms, precision=args.precision)
        hit = {"hr_value": _real(hr.value, args.precision), "hr_terms_used": _s(hr.terms_used),
               "hr_est_error": mp_context(64).nstr(hr.est_error, 6)}
        unit = cache.unit(n)
        fields = {}
        if unit is None and n <= 10 ** 8:
            exp = expand_sqrt(n)
            c = convergents(exp, exp.period - 1)[-1]
            fields = dict(tau=exp.period, unit_A_digits=_s(c.A), unit_B_digits=_s(c.B))
        cache.append(n=n, hr_method=tag, precision_bits=args.precision, series_terms=terms, **hit, **fields)
    return {
        "D": _s(n if n % 4 == 1 else 4 * n),
        "value": hit["hr_value"],
        "method": tag,
        "terms_used": hit["hr_terms_used"],
        "est_error": hit["hr_est_error"],
        "precision_bits": _s(args.precision),
    }


def cmd_verify(args, cache):
    from .suites import sweep
    upto = args.upto if args.upto is not None else args.n
    if upto is None:
        raise UsageError("verify needs --upto M")
    counts, failures = sweep(upto)
    result = {
        "upto": _s(upto),
        "suites": {name: {"checked": _s(counts.get(name, 0)),
                          "failed": _s(len(failures.get(name, [])))} for name in counts},
        "failures": [[name, _s(n), check, _s(idx)] for name, lst in failures.items() for n, check, idx in lst][:100],
        "passed": not failures,
    }
    return result


def cmd_bench(args, cache):
    n = args.n
    stages = {}

    def clock(name, fn):
        t = time.perf_counter()
        out = fn()
        stages[name] = round(time.perf_counter() - t, 6)
        return out

    exp = clock("expand", lambda: _expansion(n, args))
    clock("forms", lambda: form_sequence(exp))
    clock("pell_unit", lambda: pell_unit(exp))
    if is_squarefree(n):
        clock("hr_sine_sum", lambda: hr_sine_sum(n, 53 if n > 2000 else args.precision))
    clock("factor", lambda: full_factorization(n, method="walk", max_terms=args.max_terms))
    return {"period": _s(exp.period), "stages": sorted(stages)}, stages


HANDLERS = {
    "expand": cmd_expand, "forms": cmd_forms, "two-squares": cmd_two_squares,
    "factor": cmd_factor, "hr": cmd_hr, "verify": cmd_verify, "bench": cmd_bench,
}


# -- output ------------------------------------------------------------------------------

def render(record, fmt):
    if fmt == "json":
        return json.dumps(record, sort_keys=True)
    if fmt == "text":
        lines = [f"{record['command']} {record['n'] or ''}".rstrip()]
        for k, v in sorted(record["result"].items()):
            lines.append(f"  {k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
        return "\n".join(lines)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema_version", "n", "command", "field", "value"])
    for k, v in sorted(record["result"].items()):
        w.writerow([record["schema_version"], record["n"], record["command"], k,
                    json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v])
    return buf.getvalue().rstrip("\n")


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command != "verify" and args.n is None:
            raise UsageError(f"{args.command} needs N")
        if args.precision < 64:
            raise UsageError("--precision must be at least 64 bits")
        if args.series_terms is not None and args.series_terms < 1:
            raise UsageError("--series-terms must be >= 1")
    except UsageError as exc:
        print(f"cfract: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.n is not None and args.n < 2:
        print(f"cfract: invalid input: N must be >= 2, got {args.n}", file=stderr)
        return EXIT_INVALID

    cache = ResultCache(resolve_path(args.cache))
    t0 = time.perf_counter()
    try:
        out = HANDLERS[args.command](args, cache)
    except UsageError as exc:
        print(f"cfract: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (PerfectSquare, DomainError, ValueError) as exc:
        if isinstance(exc, (EvenPeriod, OddPeriod)):
            print(f"cfract: {exc}", file=stderr)
            return EXIT_FAILURE
        print(f"cfract: invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except (Exhausted, Incomplete, NoEvenPeriod, PeriodNotFound, PrecisionExhausted) as exc:
        print(f"cfract: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAILURE
    total = round(time.perf_counter() - t0, 6)
    result, timings = (out if isinstance(out, tuple) else (out, {}))
    timings = dict(timings, total=total)
    record = {
        "schema_version": SCHEMA_VERSION,
        "n": None if args.n is None else _s(args.n),
        "command": args.command,
        "result": result,
        "timings": timings,
    }
    print(render(record, args.output_format), file=stdout)
    if args.command == "verify" and not result["passed"]:
        return EXIT_FAILURE
    return EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="cfract: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
