"""Command-line front end: ``qmgamma eval | grid | check``.

All three commands work with G_r(z+1; q), so ``--z 0`` is the normalization
point G_r(1) = 1 and ``--z N`` for a non-negative integer N is covered by the
finite closed-form product.

Exit codes: 0 ok, 1 invariant failure, 2 bad arguments, 3 pole, 4 budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import altforms, invariants
from .errors import BudgetError, DomainError, PoleError
from .qcore import EvalResult, Precision, QParam, log_q_number_checked, safe_exp
from .qmultigamma import check_tol, log_qmg_integer_closed, log_qmg_product, qmg

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_POLE = 3
EXIT_BUDGET = 4

METHODS = ("product", "gauss", "euler", "recurrence", "closed", "auto")
CSV_HEADER = ["z_re", "z_im", "G_re", "G_im", "log_re", "log_im", "terms_used"]

DESCRIPTION = """\
Evaluate the q-multiple gamma functions G_r(z+1; q) for complex z, 0 < q < 1.

  G_0(z+1) = [z+1] = (1 - q^(z+1)) / (1 - q)
  G_r(z+1) = G_{r-1}(z) G_r(z),   G_r(1) = 1
  G_1(z+1) = Gamma(z+1; q) = (1-q)^(-z) prod_n ((1-q^(z+n)) / (1-q^n))^(-1)
"""

METHOD_HELP = """\
evaluation route (default auto):
  product     (1-q)^(-binom(z,r)) prod_n ((1-q^(z+n))/(1-q^n))^((-1)^r binom(n+r-2,r-1))
              * (1-q^n)^(g_r(z,n)),  Re z >= 0
  gauss       lim_N prod_{k<=N} G_{r-1}(k)/G_{r-1}(z+k) * prod_{m<=r} G_{r-m}(N+1)^binom(z,m),
              Re z >= 0
  euler       prod_n G_{r-1}(n)/G_{r-1}(z+n) * prod_{m<=r} (G_{r-m}(n+1)/G_{r-m}(n))^binom(z,m),
              Re z >= 0
  recurrence  G_r(z) = G_r(z+k) / prod_{j<k} G_{r-1}(z+j), any z off the singular set;
              reported as product when no shift is needed
  closed      G_r(N+1) = (1-q)^(-binom(N,r)) prod_{n<=N} (1-q^n)^binom(N-n,r-1), integer N >= 0
  auto        closed at integers z >= 0, product for Re z > 0, recurrence otherwise"""


def parse_complex(text: str) -> complex:
    """``RE`` or ``RE,IM`` to a complex number."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"non-finite coordinate in {text!r}")
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _pos_int(text: str) -> int:
    v = _nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _pos_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _add_common(p: argparse.ArgumentParser, tol_default: float):
    p.add_argument("--q", type=float, required=True, help="base, 0 < q <= 1 - 1e-6")
    p.add_argument("--tol", type=_pos_float, default=tol_default,
                   help=f"absolute tolerance on log G (default {tol_default:g})")
    p.add_argument("--max-terms", type=_pos_int, default=200_000,
                   help="largest admissible truncation length (default 200000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmgamma", description=DESCRIPTION,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser(
        "eval", formatter_class=argparse.RawDescriptionHelpFormatter,
        help="evaluate G_r(z+1; q) at one point",
        description="Evaluate G_r(z+1; q) at one point and print a JSON record.\n\n" + METHOD_HELP,
    )
    ev.add_argument("--r", type=_nonneg_int, required=True, help="order r >= 0")
    _add_common(ev, 1e-12)
    ev.add_argument("--z", type=parse_complex, required=True, metavar="RE[,IM]")
    ev.add_argument("--method", choices=METHODS, default="auto")
    ev.add_argument("--output", choices=("json", "csv"), default="json")

    gr = sub.add_parser(
        "grid", formatter_class=argparse.RawDescriptionHelpFormatter,
        help="tabulate G_r(z+1; q) along a segment",
        description=(
            "Tabulate G_r(z+1; q) at z_start + k (z_end - z_start) / steps, k = 0..steps.\n"
            "Rows at singular points carry nan values and the exit status is 3.\n\n" + METHOD_HELP
        ),
    )
    gr.add_argument("--r", type=_nonneg_int, required=True, help="order r >= 0")
    _add_common(gr, 1e-12)
    gr.add_argument("--z-start", type=parse_complex, required=True, metavar="RE[,IM]")
    gr.add_argument("--z-end", type=parse_complex, required=True, metavar="RE[,IM]")
    gr.add_argument("--steps", type=_nonneg_int, required=True,
                    help="number of intervals; steps + 1 rows including both ends")
    gr.add_argument("--method", choices=METHODS, default="auto")
    gr.add_argument("--output", choices=("json", "csv"), default="csv")
    gr.add_argument("--jobs", type=_pos_int, default=1, help="worker processes (default 1)")

    ck = sub.add_parser(
        "check", formatter_class=argparse.RawDescriptionHelpFormatter,
        help="run the invariant suite",
        description=(
            "Run every invariant family and print its worst residual against its threshold.\n\n"
            "  functional equation   G_r(z+1) = G_{r-1}(z) G_r(z)\n"
            "  normalization         G_r(1) = 1\n"
            "  closed form           G_r(N+1) = (1-q)^(-binom(N,r)) prod_n (1-q^n)^binom(N-n,r-1)\n"
            "  reduction             G_1(z+1) = Gamma(z+1; q), Gamma(N+1) = [1]...[N]\n"
            "  three forms           product vs Gauss limit vs Euler product\n"
            "  log-convexity         (-log q)^(r+1) sum_k k^r q^((z+1)k) / (1-q^k)^r > 0\n"
            "  soundness             doubling N moves a result by at most its tail bound"
        ),
    )
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--tol", type=_pos_float, default=1e-14,
                    help="tolerance for the evaluations inside the suite (default 1e-14)")
    ck.add_argument("--only", nargs="*", choices=sorted(invariants.FAMILIES), metavar="FAMILY",
                    help="restrict to the named families")
    return parser


# ---------------------------------------------------------------- evaluation

def _is_nonneg_integer(z: complex) -> bool:
    return z.imag == 0 and z.real >= 0 and z.real == math.floor(z.real)


def _closed(r: int, z: complex, qp: QParam) -> EvalResult:
    if not _is_nonneg_integer(z):
        raise DomainError(f"the closed form needs an integer z >= 0, got {z}")
    log_val = complex(log_qmg_integer_closed(r, int(z.real), qp))
    return EvalResult(safe_exp(log_val), log_val, int(z.real), 0.0, "closed")


def resolve_method(r: int, z: complex, method: str) -> str:
    if r == 0:
        return "closed"
    if method != "auto":
        return method
    if _is_nonneg_integer(z):
        return "closed"
    if z.real > 0:
        return "product"
    return "recurrence"


def evaluate(r: int, z: complex, q: float, method: str = "auto",
             tol: float = 1e-12, max_terms: int = 200_000) -> EvalResult:
    """G_r(z+1; q) by the requested route."""
    qp = QParam(q)
    prec = Precision(tol, max_terms)
    check_tol(tol)
    z = complex(z)
    how = resolve_method(r, z, method)
    if r == 0:
        log_val = log_q_number_checked(qp, z + 1, z + 1)
        return EvalResult(safe_exp(log_val), log_val, 0, 0.0, "closed")
    if how == "closed":
        return _closed(r, z, qp)
    if how == "product":
        if not z.real >= 0:
            raise DomainError(f"the defining product needs Re z >= 0, got {z}")
        lp = log_qmg_product(r, z, qp, prec)
        return EvalResult(safe_exp(lp.log_sum), lp.log_sum, lp.terms_used, lp.tail_bound, "product")
    if how == "gauss":
        return altforms.gauss_evaluate(r, z, qp, prec)
    if how == "euler":
        return altforms.qmg_euler(r, z, qp, prec)
    return qmg(r, z + 1, qp, prec)


def _f(x) -> float:
    return float(x)


def result_record(res: EvalResult) -> dict:
    val = complex(res.value)
    lg = complex(res.log_value)
    return {
        "re": _f(val.real),
        "im": _f(val.imag),
        "log_re": _f(lg.real),
        "log_im": _f(lg.imag),
        "terms_used": int(res.terms_used),
        "tail_bound": _f(res.tail_bound),
        "method": res.method,
        "continuation_steps": int(res.continuation_steps),
    }


def _json_safe(x):
    # JSON has no nan; grid rows at poles become null
    return None if isinstance(x, float) and math.isnan(x) else x


def run_eval(args) -> int:
    res = evaluate(args.r, args.z, args.q, args.method, args.tol, args.max_terms)
    rec = result_record(res)
    if args.output == "json":
        print(json.dumps(rec))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(list(rec))
        w.writerow([repr(v) if isinstance(v, float) else v for v in rec.values()])
    return EXIT_OK


def _grid_point(task):
    r, z, q, method, tol, max_terms = task
    try:
        res = evaluate(r, z, q, method, tol, max_terms)
    except PoleError as exc:
        return ("pole", exc.location)
    except BudgetError as exc:
        return ("budget", str(exc))
    except DomainError as exc:
        return ("domain", str(exc))
    return ("ok", complex(res.value), complex(res.log_value), int(res.terms_used))


def grid_points(z_start: complex, z_end: complex, steps: int) -> list[complex]:
    if steps == 0:
        return [z_start]
    d = (z_end - z_start) / steps
    pts = [z_start + k * d for k in range(steps)]
    return pts + [z_end]


def run_grid(args) -> int:
    QParam(args.q)  # reject a bad base before any work
    Precision(args.tol, args.max_terms)
    pts = grid_points(args.z_start, args.z_end, args.steps)
    tasks = [(args.r, z, args.q, args.method, args.tol, args.max_terms) for z in pts]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outs = list(pool.map(_grid_point, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        outs = [_grid_point(t) for t in tasks]

    nan = float("nan")
    rows = []
    status = EXIT_OK
    for z, out in zip(pts, outs):
        kind = out[0]
        if kind == "ok":
            _, val, lg, terms = out
            rows.append([z.real, z.imag, val.real, val.imag, lg.real, lg.imag, terms])
            continue
        if kind == "pole":
            print(f"pole at G argument {_fmt_complex(out[1])} (grid z = {_fmt_complex(z)})",
                  file=sys.stderr)
            status = max(status, EXIT_POLE)
            rows.append([z.real, z.imag, nan, nan, nan, nan, 0])
        elif kind == "budget":
            print(f"budget exhausted at z = {_fmt_complex(z)}: {out[1]}", file=sys.stderr)
            status = max(status, EXIT_BUDGET)
            rows.append([z.real, z.imag, nan, nan, nan, nan, 0])
        else:
            raise DomainError(out[1])

    if args.output == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow([repr(float(v)) for v in row[:6]] + [row[6]])
    else:
        recs = [{k: _json_safe(float(v)) if k != "terms_used" else v for k, v in zip(CSV_HEADER, row)}
                for row in rows]
        print(json.dumps(recs))
    return status


def run_check(args) -> int:
    only = set(args.only) if args.only else None
    ok = True
    for name, fam in invariants.FAMILIES.items():
        if only and name not in only:
            continue
        res = fam(seed=args.seed, tol=args.tol)
        print(res.line(), flush=True)
        ok = ok and res.passed
    print("all invariants pass" if ok else "invariant failure")
    return EXIT_OK if ok else EXIT_INVARIANT


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}j"


_COMPLEX_FLAGS = ("--z", "--z-start", "--z-end")


def _glue_complex_flags(argv: list[str]) -> list[str]:
    # "--z -2.5,1" would otherwise be read as an unknown option "-2.5,1"
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COMPLEX_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_complex_flags(argv))
    handler = {"eval": run_eval, "grid": run_grid, "check": run_check}[args.command]
    try:
        return handler(args)
    except PoleError as exc:
        print(f"pole at G argument {_fmt_complex(exc.location)}: {exc}", file=sys.stderr)
        return EXIT_POLE
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"qmgamma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
