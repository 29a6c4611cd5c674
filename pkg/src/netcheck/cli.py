"""Command-line interface.

Three subcommands: ``check`` evaluates a formula and prints the
satisfying node keys in ascending order, ``query`` prints the keys
whose payload matches a bare filter, ``metrics`` prints the statistics
report. Output goes to stdout only on success and is byte-identical
across runs; diagnostics go to stderr. Exit codes: 0 success (an empty
result set is success), 1 formula or filter syntax error, 2 network
file or format error, 3 evaluation type error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .checker import label_nodes, parse_formula, replace_filters
from .ctl import NotSatisfiedError, Witness, model_check, witness
from .errors import FilterTypeError, FormatError, ParseError, UnknownKeyError
from .metrics import (
    clustering_coefficient,
    components,
    degree_histogram,
    diameter,
    eulerian_path_exists,
    mean_geodesic,
)
from .network import Network, load_network
from .xpath import eval_filter, parse_filter

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_FORMAT = 2
EXIT_TYPE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcheck",
        description="Check path properties of XML-attributed networks.",
    )
    parser.add_argument("--version", action="version", version=f"netcheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check_p = sub.add_parser("check", help="evaluate a formula over a network")
    check_p.add_argument("--network", metavar="PATH")
    group = check_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula", metavar="TEXT")
    group.add_argument("--formula-file", metavar="PATH")
    check_p.add_argument("--witness-for", metavar="KEY")
    check_p.add_argument("--parallel", type=int, default=1, metavar="N")
    check_p.add_argument("--format", choices=("lines", "json"), default="lines")

    query_p = sub.add_parser("query", help="print keys whose payload matches a filter")
    query_p.add_argument("--network", metavar="PATH")
    query_p.add_argument("--filter", required=True, metavar="TEXT")
    query_p.add_argument("--format", choices=("lines", "json"), default="lines")

    metrics_p = sub.add_parser("metrics", help="print network statistics")
    metrics_p.add_argument("--network", metavar="PATH")
    metrics_p.add_argument("--format", choices=("lines", "json"), default="lines")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _run_check(args)
        if args.command == "query":
            return _run_query(args)
        return _run_metrics(args)
    except BrokenPipeError:
        return EXIT_OK


def _fail(code: int, message: str) -> int:
    print(f"netcheck: {message}", file=sys.stderr)
    return code


def _load(args) -> Network:
    if args.network is None:
        raise FormatError("--network is required")
    return load_network(args.network)


def _emit(lines: list[str]) -> None:
    if lines:
        sys.stdout.write("\n".join(lines) + "\n")


def _run_check(args) -> int:
    # Formula syntax is checked before the network is touched.
    if args.formula is not None:
        formula_text = args.formula
    else:
        try:
            with open(args.formula_file, "r", encoding="utf-8") as fh:
                formula_text = fh.read()
        except OSError as exc:
            return _fail(EXIT_FORMAT, f"cannot read formula file: {exc}")
    try:
        formula = parse_formula(formula_text)
    except ParseError as exc:
        return _fail(EXIT_SYNTAX, f"formula: {exc}")

    try:
        net = _load(args)
    except OSError as exc:
        return _fail(EXIT_FORMAT, f"cannot read network: {exc}")
    except (ParseError, FormatError) as exc:
        return _fail(EXIT_FORMAT, f"network: {exc}")

    try:
        labels, registry = label_nodes(net, formula, parallel=max(1, args.parallel))
        propositional = replace_filters(formula, registry)
        satisfying = model_check(net, labels, propositional)
        witness_report = None
        if args.witness_for is not None:
            witness_report = _witness_report(
                net, labels, propositional, args.witness_for
            )
    except FilterTypeError as exc:
        return _fail(EXIT_TYPE, f"evaluation: {exc}")

    keys = sorted(satisfying)
    if args.format == "json":
        # plain key array; an object only when a witness is attached
        if witness_report is None:
            _emit([json.dumps(keys, indent=2)])
        else:
            payload = {"satisfying": keys, "witness": witness_report}
            _emit([json.dumps(payload, indent=2, sort_keys=True)])
    else:
        lines = list(keys)
        if witness_report is not None:
            lines.append(_witness_line(witness_report))
        _emit(lines)
    return EXIT_OK


def _witness_report(net, labels, formula, key: str) -> dict:
    try:
        w = witness(net, labels, formula, key)
    except UnknownKeyError:
        return {"for": key, "status": "unknown-node"}
    except NotSatisfiedError:
        return {"for": key, "status": "not-satisfied"}
    if w.kind == "none-available":
        return {"for": key, "status": "none-available"}
    return {
        "for": key,
        "status": w.kind,
        "path": list(w.path),
        "transpose": w.in_transpose,
    }


def _witness_line(report: dict) -> str:
    key = report["for"]
    status = report["status"]
    if status == "unknown-node":
        return f"witness {key}: unknown node"
    if status == "not-satisfied":
        return f"witness {key}: formula does not hold at this node"
    if status == "none-available":
        return f"witness {key}: none available for this operator"
    arrow = " -> ".join(report["path"])
    suffix = " (transposed edges)" if report["transpose"] else ""
    return f"witness {key}: {arrow}{suffix}"


def _run_query(args) -> int:
    try:
        filter_expr = parse_filter(args.filter)
    except ParseError as exc:
        return _fail(EXIT_SYNTAX, f"filter: {exc}")
    try:
        net = _load(args)
    except OSError as exc:
        return _fail(EXIT_FORMAT, f"cannot read network: {exc}")
    except (ParseError, FormatError) as exc:
        return _fail(EXIT_FORMAT, f"network: {exc}")
    keys = []
    try:
        for key in net.node_keys():
            if eval_filter(filter_expr, net.payload(key)):
                keys.append(key)
    except FilterTypeError as exc:
        return _fail(EXIT_TYPE, f"evaluation: at node '{key}': {exc}")
    if args.format == "json":
        _emit([json.dumps(keys, indent=2)])
    else:
        _emit(keys)
    return EXIT_OK


def _format_ratio(value: Fraction) -> float:
    return float(value)


def _run_metrics(args) -> int:
    try:
        net = _load(args)
    except OSError as exc:
        return _fail(EXIT_FORMAT, f"cannot read network: {exc}")
    except (ParseError, FormatError) as exc:
        return _fail(EXIT_FORMAT, f"network: {exc}")

    comp = components(net)
    hist = degree_histogram(net)
    data: dict = {
        "nodes": net.n,
        "edges": net.m,
        "directed": net.directed,
        "component_count": len(comp),
        "giant_component_size": len(comp.giant),
        "clustering_coefficient": _format_ratio(clustering_coefficient(net)),
    }
    if net.n > 0:
        data["diameter"] = diameter(net)
        data["mean_geodesic"] = _format_ratio(mean_geodesic(net))
    else:
        data["diameter"] = None
        data["mean_geodesic"] = None
    if net.directed:
        data["degree_histogram"] = None
        data["in_degree_histogram"] = hist.in_counts
        data["out_degree_histogram"] = hist.out_counts
        data["eulerian_path"] = None
    else:
        data["degree_histogram"] = hist.counts
        data["in_degree_histogram"] = None
        data["out_degree_histogram"] = None
        try:
            data["eulerian_path"] = eulerian_path_exists(net)
        except FormatError as exc:
            return _fail(EXIT_FORMAT, f"network: {exc}")

    if args.format == "json":
        _emit([json.dumps(_jsonable(data), indent=2, sort_keys=True)])
    else:
        _emit(_metrics_lines(data))
    return EXIT_OK


def _jsonable(data: dict) -> dict:
    out = {}
    for k, v in data.items():
        if isinstance(v, dict):
            out[k] = {str(d): c for d, c in v.items()}
        else:
            out[k] = v
    return out


def _metrics_lines(data: dict) -> list[str]:
    lines = []
    for key in (
        "nodes",
        "edges",
        "directed",
        "component_count",
        "giant_component_size",
        "clustering_coefficient",
        "diameter",
        "mean_geodesic",
        "degree_histogram",
        "in_degree_histogram",
        "out_degree_histogram",
        "eulerian_path",
    ):
        value = data[key]
        if value is None:
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, dict):
            text = "{" + ", ".join(f"{d}: {c}" for d, c in sorted(value.items())) + "}"
        else:
            text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key}: {text}")
    return lines
