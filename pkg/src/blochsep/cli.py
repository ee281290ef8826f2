"""Command-line front end.

Subcommands:

* ``analyze``          norm-versus-bound records for chosen subsystem subsets,
                       plus the exact qubit-class test and the sufficiency sum
* ``threshold``        noise weight where a criterion's verdict flips
* ``threshold-table``  the flip points of the noisy GHZ and W families
* ``decompose``        explicit separable decomposition when one is certified
* ``zoo``              write a bundled example state to a state file

States come either from a JSON state file or from the zoo via ``zoo:FAMILY``
plus parameter flags.  Exit status: 0 on success, 2 on invalid input, 3 when
a requested criterion or construction does not apply to the state, 4 on a
numeric integrity failure.
"""
from __future__ import annotations

import argparse
import sys
import time

from .criteria import (
    AnalysisReport,
    Decision,
    SufficiencyRecord,
    Verdict,
    assemble_decomposition,
    noise_threshold_table,
    qubit_exact_test,
    separable_decomposition,
    subset_scan,
    sufficiency_test,
    threshold_search,
)
from .errors import CriterionUnavailableError, InvalidStateError, NumericIntegrityError
from .states import DensityMatrix, ZooSpec, zoo_families
from .tolerances import BOUND_GUARD
from .stateio import (
    SCHEMA_VERSION,
    dump_json,
    format_number,
    load_state,
    records_to_csv,
    state_to_jsonable,
    write_text_atomic,
)

import numpy as np


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochsep",
        description="Correlation-tensor separability analysis for multipartite states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_zoo_params(p):
        p.add_argument("-N", "--parties", type=int, help="number of subsystems")
        p.add_argument("-d", "--levels", type=int, help="levels per subsystem")
        p.add_argument("-p", "--noise", type=float, help="noise weight in [0, 1]")
        p.add_argument("-n", "--removed", type=int, help="subsystems traced out")
        p.add_argument("--dims", help="comma-separated dimensions, e.g. 2,2")

    def add_output(p):
        p.add_argument("-o", "--output", help="write here instead of stdout")

    pa = sub.add_parser("analyze", help="run separability tests on a state")
    pa.add_argument("state", help="state file path or zoo:FAMILY")
    pa.add_argument(
        "--subsets",
        default="full",
        help="full | all | pairs | k=<M> (default: full)",
    )
    pa.add_argument(
        "--criteria",
        default="all",
        choices=["t1", "c1", "c2", "p2", "all"],
        help="t1: necessary norm test on the full tensor; c1: the same per "
        "subset; c2: exact qubit-class test; p2: sufficiency sum (default: all)",
    )
    pa.add_argument(
        "--tol", type=float, default=None, help="guard band for norm-vs-bound verdicts"
    )
    pa.add_argument("--format", default="json", choices=["json", "csv"])
    pa.add_argument(
        "--timing", action="store_true", help="include wall-clock timing in the report"
    )
    add_zoo_params(pa)
    add_output(pa)

    pt = sub.add_parser("threshold", help="locate a verdict flip over the noise weight")
    pt.add_argument("family", help="zoo family with a free noise parameter")
    pt.add_argument(
        "--criterion", default="t1", choices=["t1", "c1", "c2", "p2"]
    )
    pt.add_argument("--tol", type=float, default=1e-6, help="bisection tolerance on p")
    add_zoo_params(pt)
    add_output(pt)

    ptt = sub.add_parser(
        "threshold-table", help="thresholds of the noisy GHZ and W families"
    )
    ptt.add_argument("--max-parties", type=int, default=6)
    ptt.add_argument("--tol", type=float, default=1e-6)
    ptt.add_argument("--format", default="json", choices=["json", "csv"])
    add_output(ptt)

    pd = sub.add_parser(
        "decompose", help="emit an explicit separable decomposition when certified"
    )
    pd.add_argument("state", help="state file path or zoo:FAMILY")
    add_zoo_params(pd)
    add_output(pd)

    pz = sub.add_parser("zoo", help="write a bundled example state")
    pz.add_argument("family", choices=list(zoo_families()))
    add_zoo_params(pz)
    add_output(pz)

    return parser


def _zoo_spec(family: str, args) -> ZooSpec:
    dims = None
    if args.dims:
        try:
            dims = tuple(int(x) for x in args.dims.split(","))
        except ValueError:
            raise InvalidStateError(f"cannot parse --dims {args.dims!r}")
    return ZooSpec(
        family=family,
        parties=args.parties,
        levels=args.levels,
        noise=args.noise,
        removed=args.removed,
        dims=dims,
    )


def _resolve_state(args) -> tuple:
    """Return (DensityMatrix, input descriptor dict)."""
    src = args.state
    if src.startswith("zoo:"):
        spec = _zoo_spec(src[len("zoo:") :], args)
        rho = spec.build()
        descriptor = {"source": src, "family": spec.family}
        for key in ("parties", "levels", "noise", "removed"):
            value = getattr(spec, key)
            if value is not None:
                descriptor[key] = value
        if spec.dims is not None:
            descriptor["dims"] = list(spec.dims)
        return rho, descriptor
    rho, metadata = load_state(src)
    descriptor = {"source": src}
    if metadata.get("name"):
        descriptor["name"] = metadata["name"]
    return rho, descriptor


def _parse_subsets(text: str):
    if text in ("full", "all", "pairs"):
        return text
    if text.startswith("k="):
        try:
            return int(text[2:])
        except ValueError:
            pass
    raise InvalidStateError(f"cannot parse subset selector {text!r}")


def _verdict_dict(v: Verdict) -> dict:
    doc = {
        "decision": v.decision.value,
        "criterion": v.criterion,
        "norm": None if v.norm_value is None else float(v.norm_value),
        "bound": None if v.bound_value is None else float(v.bound_value),
        "borderline": bool(v.borderline),
    }
    if v.reason:
        doc["reason"] = v.reason
    return doc


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        write_text_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    rho, descriptor = _resolve_state(args)
    start = time.perf_counter()
    guard = BOUND_GUARD if args.tol is None else args.tol
    selector = _parse_subsets(args.subsets)
    if args.criteria == "t1":
        selector = "full"
    report = AnalysisReport(dims=rho.dims, records=[])
    if args.criteria in ("t1", "c1", "all"):
        report.records = subset_scan(rho, selector, guard).records
    if args.criteria in ("c2", "all"):
        report.exact_qubit = qubit_exact_test(rho, guard)
    if args.criteria in ("p2", "all"):
        v = sufficiency_test(rho)
        report.sufficiency = SufficiencyRecord(
            lhs=v.norm_value,
            available=v.norm_value is not None,
            decision=v.decision,
            reason=v.reason,
        )
    report.elapsed_seconds = time.perf_counter() - start

    if args.format == "csv":
        rows = [
            (
                ",".join(str(k) for k in rec.subset),
                format_number(rec.norm),
                format_number(rec.bound),
                rec.verdict.decision.value,
                rec.verdict.criterion,
                int(rec.verdict.borderline),
            )
            for rec in report.records
        ]
        _emit(args, records_to_csv(rows, ["subset", "norm", "bound", "decision", "criterion", "borderline"]))
        return 0

    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "analysis",
        "input": descriptor,
        "dims": [int(d) for d in rho.dims],
        "criteria": args.criteria,
        "subsets": args.subsets,
        "records": [
            {
                "subset": [int(k) for k in rec.subset],
                "norm": float(rec.norm),
                "bound": float(rec.bound),
                "decision": rec.verdict.decision.value,
                "criterion": rec.verdict.criterion,
                "borderline": bool(rec.verdict.borderline),
            }
            for rec in report.records
        ],
    }
    if report.exact_qubit is not None:
        doc["exact_qubit"] = _verdict_dict(report.exact_qubit)
    if report.sufficiency is not None:
        suff = report.sufficiency
        entry = {
            "lhs": None if suff.lhs is None else float(suff.lhs),
            "available": bool(suff.available),
            "decision": suff.decision.value,
        }
        if suff.reason:
            entry["reason"] = suff.reason
        doc["sufficiency"] = entry
    if args.timing:
        doc["timing"] = {"elapsed_seconds": report.elapsed_seconds}
    _emit(args, dump_json(doc))
    return 0


def cmd_threshold(args) -> int:
    spec = _zoo_spec(args.family, args)
    p_star = threshold_search(spec, args.criterion, args.tol)
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "threshold",
        "family": {"name": spec.family},
        "criterion": args.criterion,
        "tolerance": args.tol,
        "threshold": p_star,
    }
    for key in ("parties", "levels", "removed"):
        value = getattr(spec, key)
        if value is not None:
            doc["family"][key] = value
    _emit(args, dump_json(doc))
    return 0


def cmd_threshold_table(args) -> int:
    rows = noise_threshold_table(args.max_parties, args.tol)
    if args.format == "csv":
        csv_rows = [
            (fam, n, "" if p is None else format_number(p)) for fam, n, p in rows
        ]
        _emit(args, records_to_csv(csv_rows, ["family", "parties", "threshold"]))
        return 0
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "threshold-table",
        "tolerance": args.tol,
        "records": [
            {"family": fam, "parties": n, "threshold": p} for fam, n, p in rows
        ],
    }
    _emit(args, dump_json(doc))
    return 0


def cmd_decompose(args) -> int:
    rho, descriptor = _resolve_state(args)
    dec = separable_decomposition(rho)
    residual = float(
        np.linalg.norm(assemble_decomposition(dec).matrix - rho.matrix)
    )
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "separable-decomposition",
        "input": descriptor,
        "dims": [int(d) for d in rho.dims],
        "identity_weight": float(dec.identity_weight),
        "term_count": len(dec.terms),
        "reconstruction_residual": residual,
        "terms": [
            {
                "weight": float(w),
                "factors": [[float(x) for x in vec] for vec in factors],
            }
            for w, factors in dec.terms
        ],
    }
    _emit(args, dump_json(doc))
    return 0


def cmd_zoo(args) -> int:
    spec = _zoo_spec(args.family, args)
    rho = spec.build()
    text = dump_json(state_to_jsonable(rho, name=spec.family, source="zoo"))
    _emit(args, text)
    return 0


_COMMANDS = {
    "analyze": cmd_analyze,
    "threshold": cmd_threshold,
    "threshold-table": cmd_threshold_table,
    "decompose": cmd_decompose,
    "zoo": cmd_zoo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (InvalidStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CriterionUnavailableError as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return 3
    except NumericIntegrityError as exc:
        print(f"numeric integrity failure: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())
