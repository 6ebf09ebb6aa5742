"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 refuted chain, 3 infeasible
construction (and nonzero from ``reproduce`` when any check fails).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import sys
from fractions import Fraction

from . import chain, characterization, chihara, fixedpoint, pq_constructor, reproduce
from .numeric import Backend, DenominatorOverflow, Tolerance, format_scalar, parse_scalar, quarter
from .sequences import NotEpsilonForm, SpecError, parse_family

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_REFUTED, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def jsonable(obj):
    if isinstance(obj, (Fraction, float)):
        return format_scalar(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    return obj


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, (Fraction, float)):
        return format_scalar(x)
    return x


def rows_to_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def run_to_dict(run: chain.ParameterRun) -> dict:
    return {"horizon": run.horizon, "g0": run.g[0], "g": run.g,
            "first_invalid": run.first_invalid}


def verdict_to_dict(v: chain.ChainVerdict) -> dict:
    return {"kind": v.kind, "horizon": v.horizon, "index": v.index,
            "reason": v.reason, "certificate": v.certificate}


# -- commands -----------------------------------------------------------------

ANALYZE_COLUMNS = ["n", "a_n", "a_n_minus_quarter", "S_n", "g_n", "valid"]


def cmd_analyze(args) -> tuple[dict, list, list, int]:
    seq = _family(args)
    horizon = args.horizon if seq.length is None else min(args.horizon, seq.length)
    v = chain.verdict(seq, horizon)
    osc = chihara.classify_oscillation(seq, None, horizon)
    rep = chihara.chihara_sums(seq, horizon)
    run = chain.minimal_parameters(seq, horizon)
    qt = quarter(seq.backend)
    rows = []
    for n in range(1, horizon + 1):
        a = rep.terms[n - 1]
        g = run.g[n] if n < len(run.g) else None
        rows.append({"n": n, "a_n": a, "a_n_minus_quarter": a - qt,
                     "S_n": rep.partial_sums[n - 1], "g_n": g,
                     "valid": run.is_valid_at(n) and g is not None})
    doc = {
        "command": "analyze", "family": seq.spec(), "backend": seq.backend, "horizon": horizon,
        "verdict": verdict_to_dict(v),
        "oscillation": {k: getattr(osc, k) for k in ("center", "horizon", "count_above",
                                                     "count_below", "count_equal",
                                                     "classification", "structural")},
        "chihara": {"S_N": rep.partial_sums[-1], "sup_so_far": rep.sup_so_far,
                    "bound": rep.bound, "bound_violated_at": rep.bound_violated_at,
                    "divergence_verdict": rep.divergence_verdict,
                    "divergence_kind": rep.divergence_kind,
                    "hypothesis_met": rep.hypothesis_met, "limit": rep.limit},
        "parameters": run_to_dict(run),
        "rows": rows,
    }
    code = EXIT_REFUTED if v.kind is chain.VerdictKind.REFUTED else EXIT_OK
    return doc, rows, ANALYZE_COLUMNS, code


CONSTRUCT_COLUMNS = ["n", "a_n", "g_n", "valid"]


def cmd_construct(args):
    b = _backend(args)
    try:
        vals = {k: parse_scalar(getattr(args, k)) for k in ("p", "q", "eps", "gamma")}
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        cfg = pq_constructor.PQConfig(**vals)
        cert = pq_constructor.certify(cfg)
    except pq_constructor.FeasibilityFailure as e:
        doc = {"command": "construct", "feasible": False, "error": str(e),
               "failed_check": e.check.as_dict()}
        return doc, [], CONSTRUCT_COLUMNS, EXIT_INFEASIBLE
    except ValueError as e:
        doc = {"command": "construct", "feasible": False, "error": str(e)}
        return doc, [], CONSTRUCT_COLUMNS, EXIT_INFEASIBLE
    seq = pq_constructor.build_sequence(cfg, b)
    run = chain.minimal_parameters(seq, args.horizon)
    rows = [{"n": n, "a_n": seq.term(n), "g_n": run.g[n], "valid": run.is_valid_at(n)}
            for n in range(1, len(run.g))]
    doc = {
        "command": "construct", "feasible": True, "family": seq.spec(), "backend": b,
        "certificate": cert.as_dict(),
        "divergence_verdict": chihara.Divergence.DIVERGES,
        "divergence_kind": pq_constructor.divergence_kind(cfg.p, cfg.q),
        "first_bound_violation": pq_constructor.first_violation_index(cfg.p, cfg.q),
        "parameters": run_to_dict(run),
        "rows": rows,
    }
    return doc, rows, CONSTRUCT_COLUMNS, EXIT_OK


ITERATE_COLUMNS = ["i", "x_i", "x_i_minus_half"]


def cmd_iterate(args):
    b = _backend(args)
    try:
        x0 = parse_scalar(args.x0, b)
        tr = fixedpoint.iterate_f(x0, args.horizon, b)
    except (ValueError, fixedpoint.DomainError) as e:
        raise UsageError(str(e)) from None
    dist = fixedpoint.distance_to_fixed_point(tr)
    rows = [{"i": i, "x_i": x, "x_i_minus_half": d} for i, (x, d) in enumerate(zip(tr.x, dist))]
    doc = {"command": "iterate", "x0": x0, "k": tr.k, "backend": b,
           "non_increasing": fixedpoint.is_non_increasing(tr), "rows": rows}
    return doc, rows, ITERATE_COLUMNS, EXIT_OK


CHARACTERIZE_COLUMNS = ["n", "residual", "tail_bound", "verdict"]


def cmd_characterize(args):
    # exact backward recursion explodes in size, so float unless asked
    b = Backend.parse(args.backend) if args.backend else Backend.FLOAT
    seq = _family(args, b)
    upto = args.indices
    M = args.M if args.M is not None else characterization.default_truncation(upto)
    if upto > M:
        raise UsageError("--indices must not exceed --M")
    try:
        rep = characterization.characterize(seq, range(1, upto + 1), M, kind=args.run,
                                            lookahead=args.lookahead, tol=_tol(args))
    except NotEpsilonForm as e:
        raise UsageError(str(e)) from None
    except chain.RefutedRun as e:
        doc = {"command": "characterize", "family": seq.spec(), "error": str(e)}
        return doc, [], CHARACTERIZE_COLUMNS, EXIT_REFUTED
    rows = [{"n": c.n, "residual": c.residual, "tail_bound": c.tail_bound, "verdict": c.verdict.value}
            for c in rep.checks]
    doc = {"command": "characterize", "family": seq.spec(), "backend": b, "run": args.run,
           "g0": rep.extra["g0"], "c_max": rep.c_max,
           "condition_i_ok": rep.condition_i_ok, "checks": rows, "M": rep.truncation_M}
    return doc, rows, CHARACTERIZE_COLUMNS, EXIT_OK


REPRODUCE_COLUMNS = ["name", "status", "detail", "seconds"]


def cmd_reproduce(args):
    b = _backend(args)
    horizon = args.horizon if args.horizon_given else None
    results = reproduce.run_checks(b, horizon)
    rows = [{"name": r.name, "status": r.status, "detail": r.detail,
             "seconds": round(r.seconds, 4)} for r in results]
    failed = [r for r in results if r.status == "fail"]
    doc = {"command": "reproduce", "backend": b, "checks": rows,
           "passed": sum(r.status == "pass" for r in results),
           "failed": len(failed), "skipped": sum(r.status == "skipped" for r in results)}
    if args.format == "json" and not args.out:
        table = "\n".join(f"[{r.status.upper():7}] {r.name}  ({r.detail})" for r in results)
        print(table, file=sys.stderr)
    return doc, rows, REPRODUCE_COLUMNS, (1 if failed else EXIT_OK)


# -- plumbing -----------------------------------------------------------------

def _backend(args) -> Backend:
    return Backend.parse(args.backend) if args.backend else Backend.EXACT


def _tol(args) -> Tolerance:
    return Tolerance(args.tol, args.tol) if args.tol else Tolerance()


def _family(args, backend: Backend | None = None):
    b = backend or _backend(args)
    try:
        return parse_family(args.family, b)
    except SpecError as e:
        raise UsageError(f"bad family spec {args.family!r}: {e}") from None


class _HorizonAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.horizon_given = True


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=_positive_int, default=1000, action=_HorizonAction)
    common.add_argument("--backend", choices=["exact", "float"], default=None)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", default=None, help="write to PATH instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="float tolerance (abs and rel)")

    p = argparse.ArgumentParser(prog="chainseq", description="Chain sequence analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="verdict, oscillation and partial sums")
    a.add_argument("family")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", parents=[common], help="certified two-periodic chain")
    for k in ("p", "q", "eps", "gamma"):
        c.add_argument(f"--{k}", required=True)
    c.set_defaults(func=cmd_construct)

    it = sub.add_parser("iterate", parents=[common], help="iterate f(x) = 1 - 1/(4x); horizon = k")
    it.add_argument("--x0", default="1")
    it.set_defaults(func=cmd_iterate)

    ch = sub.add_parser("characterize", parents=[common], help="c_n conditions (i) and (ii)")
    ch.add_argument("family")
    ch.add_argument("--run", choices=["maximal", "minimal"], default="maximal")
    ch.add_argument("--M", type=_positive_int, default=None, help="truncation index")
    ch.add_argument("--indices", type=_positive_int, default=20, help="check n = 1..INDICES")
    ch.add_argument("--lookahead", type=_positive_int, default=None)
    ch.set_defaults(func=cmd_characterize)

    r = sub.add_parser("reproduce", parents=[common], help="recompute the reference numbers")
    r.set_defaults(func=cmd_reproduce)
    p.set_defaults(horizon_given=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        if args.tol is not None:
            _tol(args)
        doc, rows, columns, code = args.func(args)
    except (UsageError, ValueError, DenominatorOverflow) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "csv":
        text = rows_to_csv(rows, columns)
    else:
        text = json.dumps({"schema_version": SCHEMA_VERSION, **jsonable(doc)}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
