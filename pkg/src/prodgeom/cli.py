"""Command-line interface.

Exit codes: 0 success / product, 1 not a product (or not a state), 2 error.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import formats
from .embedding import NAMED_CASES, build_map, get_case
from .fano import (
    DensityMatrix,
    FanoTensor,
    NormalizationError,
    ShapeError,
    ValidationError,
    decompose,
    reconstruct,
    validate,
)
from .geometry import (
    CLOSED_FORM_CASES,
    CURVATURE_CLOSED_FORM_CASES,
    SingularExpressionError,
    SingularMetricError,
    curvature,
    induced_metric,
    metric_closed_form,
    scalar_curvature_closed_form,
)
from .lie_basis import InvalidDimensionError, su_generators
from .partition import Partition, PartitionError
from .separability import DEFAULT_TOL, classify, is_product
from .states import (
    SamplingError,
    named_state,
    random_partition_product,
    random_product_state,
    sample_points,
    tensor_product,
)


class CLIError(Exception):
    pass


EXPECTED_ERRORS = (
    CLIError,
    formats.FormatError,
    ShapeError,
    NormalizationError,
    PartitionError,
    InvalidDimensionError,
    SingularMetricError,
    SingularExpressionError,
    SamplingError,
    json.JSONDecodeError,
    OSError,
    KeyError,
    ValueError,
)


def _as_tensor(state):
    if isinstance(state, DensityMatrix):
        return decompose(state)
    return state


# -- subcommands -------------------------------------------------------------


def cmd_basis(args):
    gens = su_generators(args.levels)
    formats.write_json(
        {"levels": args.levels, "generators": [formats.matrix_to_json(s) for s in gens]},
        args.output,
    )
    return 0


def cmd_decompose(args):
    obj = formats.load_json(args.input)
    rho = formats.density_from_json(obj)
    try:
        d = decompose(rho)
    except ValidationError as exc:
        sys.stderr.write(formats.dumps({"error": str(exc), "report": exc.report.to_dict()}))
        return 2
    formats.write_json(formats.tensor_to_json(d), args.output)
    return 0


def cmd_reconstruct(args):
    d = formats.tensor_from_json(formats.load_json(args.input))
    rho = reconstruct(d)
    report = validate(rho)
    if not report.psd:
        sys.stderr.write(
            f"warning: reconstructed matrix is not positive semidefinite "
            f"(min eigenvalue {report.min_eig:.3e})\n"
        )
    formats.write_json(formats.density_to_json(rho), args.output)
    return 0


def cmd_validate(args):
    obj = formats.load_json(args.input)
    state = formats.read_state(obj)
    if isinstance(state, FanoTensor):
        state = reconstruct(state)
    report = validate(state)
    formats.write_json(report.to_dict(), args.output)
    return 0 if report.is_state else 1


def cmd_check(args):
    d = _as_tensor(formats.read_state(formats.load_json(args.input)))
    if args.tol <= 0:
        raise CLIError("--tol must be positive")
    if args.classify:
        reports = classify(d, args.tol)
        formats.write_json(
            {"classification": [r.to_dict() for r in reports]}, args.output
        )
        return 0 if any(r.is_product and r.partition.size > 1 for r in reports) else 1
    if args.partition:
        partition = Partition.parse(args.partition, d.qudits)
    else:
        partition = Partition.totally_product(d.qudits)
    report = is_product(d, partition, args.tol)
    formats.write_json(report.to_dict(include_blocks=args.blocks), args.output)
    return 0 if report.is_product else 1


def _case_from_args(args):
    if args.case == "general":
        if args.levels is None or args.qudits is None:
            raise CLIError("--case general needs --levels and --qudits")
    return get_case(args.case, args.levels, args.qudits, args.partition)


def _point_from_args(args, case):
    if args.origin:
        return np.zeros(case.m)
    if args.point:
        obj = formats.load_json(args.point)
        u = np.asarray(obj["u"] if isinstance(obj, dict) else obj, dtype=float)
    elif args.u:
        u = np.asarray([float(x) for x in args.u.split(",")])
    else:
        raise CLIError("give --origin, --point FILE or --u v0,v1,...")
    if u.shape != (case.m,):
        raise CLIError(f"case {case.name} needs {case.m} coordinates, got {u.size}")
    return u


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def curvature_record(case, emap, u):
    """JSON-ready curvature summary at one point."""
    rep = curvature(emap, u)
    out = {
        "case": case.name,
        "point": [float(x) for x in u],
        "scalar": rep.scalar,
        "metric_condition_number": rep.condition_number,
        "symmetry_residuals": rep.symmetry_residuals(),
    }
    if case.name in CURVATURE_CLOSED_FORM_CASES:
        closed = scalar_curvature_closed_form(case.name, u)
        out["scalar_closed_form"] = closed
        out["closed_form_rel_error"] = _rel(rep.scalar, closed)
        if case.name == "two-qubit-product":
            fixed = scalar_curvature_closed_form(case.name, u, corrected=True)
            out["scalar_closed_form_corrected"] = fixed
            out["corrected_rel_error"] = _rel(rep.scalar, fixed)
    return out


def cmd_curvature(args):
    case = _case_from_args(args)
    u = _point_from_args(args, case)
    formats.write_json(curvature_record(case, build_map(case), u), args.output)
    return 0


def cmd_metric(args):
    case = _case_from_args(args)
    u = _point_from_args(args, case)
    metric = induced_metric(build_map(case), u)
    out = {
        "case": case.name,
        "point": [float(x) for x in u],
        "g": metric.g.tolist(),
        "condition_number": metric.condition_number,
    }
    if case.name in CLOSED_FORM_CASES:
        closed = metric_closed_form(case.name, u)
        out["g_closed_form"] = closed.tolist()
        out["max_abs_diff"] = float(np.max(np.abs(closed - metric.g)))
    formats.write_json(out, args.output)
    return 0


def cmd_sample(args):
    if args.count < 1:
        raise CLIError("--count must be >= 1")
    case = _case_from_args(args)
    emap = build_map(case)
    points = sample_points(case, args.count, args.seed, args.mode)
    has_closed = case.name in CURVATURE_CLOSED_FORM_CASES
    rows = []
    for k, u in enumerate(points):
        rep = curvature(emap, u)
        row = {"index": k, "u": u, "Q": rep.scalar, "condition_number": rep.condition_number}
        if has_closed:
            row["Q_closed_form"] = scalar_curvature_closed_form(case.name, u)
        rows.append(row)
    qs = np.array([r["Q"] for r in rows])
    summary = {
        "case": case.name,
        "count": len(rows),
        "seed": args.seed,
        "mode": args.mode,
        "Q_min": float(qs.min()),
        "Q_max": float(qs.max()),
        "Q_mean": float(qs.mean()),
        "negative": int(np.sum(qs < 0)),
        "zero": int(np.sum(qs == 0)),
        "positive": int(np.sum(qs > 0)),
        "sign_violations": int(np.sum(qs >= 0)),
    }
    if has_closed:
        rel = [_rel(r["Q"], r["Q_closed_form"]) for r in rows]
        summary["closed_form_max_rel_error"] = float(max(rel))
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        header = ["index"] + [f"u{j}" for j in range(case.m)] + ["Q"]
        if has_closed:
            header.append("Q_closed_form")
        header.append("condition_number")
        writer.writerow(header)
        for r in rows:
            line = [r["index"]] + [repr(float(x)) for x in r["u"]] + [repr(r["Q"])]
            if has_closed:
                line.append(repr(r["Q_closed_form"]))
            line.append(repr(r["condition_number"]))
            writer.writerow(line)
        text = buf.getvalue()
        if args.output in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        sys.stderr.write(
            "summary: "
            + " ".join(f"{k}={v}" for k, v in summary.items())
            + "\n"
        )
    else:
        table = []
        for r in rows:
            item = dict(r, u=[float(x) for x in r["u"]])
            table.append(item)
        formats.write_json({"summary": summary, "points": table}, args.output)
    return 0


FIXTURE_SEEDS = (11, 12, 13, 14, 15)


def fixture_corpus():
    """Named and seeded states with the partitions each one factorizes across.

    Returns ``{filename: (state, {"seed": .., "product_partitions": [..]})}``.
    """
    bell = named_state("bell_phi_plus")
    corpus = {
        "bell_phi_plus.json": (bell, {"product_partitions": []}),
        "ghz3.json": (named_state("ghz", 3), {"product_partitions": []}),
        "w3.json": (named_state("w", 3), {"product_partitions": []}),
        "maximally_mixed2.json": (named_state("maximally_mixed", 2), {"product_partitions": ["1|2"]}),
    }
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts = ["1|2"] if p == 0.0 else []
        corpus[f"werner_p{p:.2f}.json"] = (named_state("werner", p=p), {"p": p, "product_partitions": parts})
    for seed in FIXTURE_SEEDS[:3]:
        corpus[f"product2_s{seed}.json"] = (
            random_product_state(2, 2, seed),
            {"seed": seed, "product_partitions": ["1|2"]},
        )
        corpus[f"product3_s{seed}.json"] = (
            random_product_state(2, 3, seed),
            {"seed": seed, "product_partitions": ["1,2|3", "1,3|2", "1|2,3", "1|2|3"]},
        )
        corpus[f"biproduct3_s{seed}.json"] = (
            random_partition_product(Partition.parse("1,2|3"), 2, seed),
            {"seed": seed, "product_partitions": ["1,2|3"]},
        )
    corpus["bell_x_zero.json"] = (
        tensor_product(bell, DensityMatrix(2, 1, np.diag([1.0, 0.0]))),
        {"product_partitions": ["1,2|3"]},
    )
    return corpus


def cmd_fixtures(args):
    os.makedirs(args.output_dir, exist_ok=True)
    manifest = {}
    for name, (state, meta) in fixture_corpus().items():
        formats.write_json(formats.density_to_json(state), os.path.join(args.output_dir, name))
        manifest[name] = meta
    formats.write_json(manifest, os.path.join(args.output_dir, "manifest.json"))
    sys.stderr.write(f"wrote {len(manifest)} fixtures to {args.output_dir}\n")
    return 0


# -- parser ------------------------------------------------------------------


def _add_case_args(p):
    p.add_argument(
        "--case",
        required=True,
        choices=list(NAMED_CASES) + ["general"],
        help="manifold to evaluate",
    )
    p.add_argument("--levels", type=int, help="levels N (general case)")
    p.add_argument("--qudits", type=int, help="qudits M (general case)")
    p.add_argument(
        "--partition", help="partition such as '1,2|3' for the general case; None means totally product"
    )


def _add_point_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--origin", action="store_true", help="evaluate at u = 0")
    g.add_argument("--point", help='JSON point file {"case": ..., "u": [...]}')
    g.add_argument("--u", help="comma-separated coordinates")


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="prodgeom",
        description="Fano-form decomposition, product-state checks and curvature "
        "of product-state manifolds.",
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="emit su(N) generators as JSON", formatter_class=fmt)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--output", default="-", help="output file ('-' for stdout)")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("decompose", help="density matrix -> Fano tensor", formatter_class=fmt)
    p.add_argument("input", help="density-matrix JSON file ('-' for stdin)")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="Fano tensor -> density matrix", formatter_class=fmt)
    p.add_argument("input", help="Fano-tensor JSON file")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("validate", help="check Hermiticity, trace and positivity", formatter_class=fmt)
    p.add_argument("input", help="density-matrix or Fano-tensor JSON file")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="test a product condition", formatter_class=fmt)
    p.add_argument("input", help="density-matrix or Fano-tensor JSON file")
    p.add_argument("--partition", help="e.g. '1|2' or '1,2|3'; None means totally product")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="max allowed residual entry")
    p.add_argument("--classify", action="store_true", help="check every partition")
    p.add_argument("--blocks", action="store_true", help="include group coefficient blocks")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("curvature", help="scalar curvature at a point", formatter_class=fmt)
    _add_case_args(p)
    _add_point_args(p)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("metric", help="induced metric at a point", formatter_class=fmt)
    _add_case_args(p)
    _add_point_args(p)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("sample", help="curvature over random points", formatter_class=fmt)
    _add_case_args(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["box", "physical"], default="box")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fixtures", help="write the named-state corpus", formatter_class=fmt)
    p.add_argument("output_dir")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EXPECTED_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
