from __future__ import annotations

import argparse
import json
import os
import sys
import textwrap
from dataclasses import replace
from pathlib import Path
from typing import Any

from flagforge.allocation import allocate_parts
from flagforge.bounds import (
    c_cost,
    c_cost_ceiling,
    c_cost_upper,
    d_cost,
    d_cost_upper,
    diagnose_face_vector,
    equal_vertices_bound,
    ffk_bound,
    flag_or_shadow_bound,
    kk_shadow,
    kk_upper,
    limit_constant_dim,
    limit_constant_two,
    ratio_to_limit,
    to_decimal,
    within_c_cost_ceiling,
    within_c_cost_upper,
    within_d_cost_upper,
)
from flagforge.complex import (
    SimplicialComplexExplicit,
    VertexColoredGraph,
    clique_f_vector,
    f_to_h,
    is_balanced,
    is_vertex_decomposable,
    plus_construction,
)
from flagforge.config import GRAPH_FORMATS, MIN_PRECISION, load_runtime_config
from flagforge.construct import (
    ConstructionResult,
    construct_dim,
    construct_hvec,
    construct_main,
    construct_two_face,
)
from flagforge.decompose import color_rep, dim_two_term_rep, evaluate, flag_rep, kk_rep, two_term_rep
from flagforge.errors import ERROR_CATALOG, FlagForgeError, input_error, unhandled_error
from flagforge.logs import configure_logging
from flagforge.models import Allocation, FaceVector, HVector, RunConfig, SuiteRanges
from flagforge.serialization import (
    dump_graph,
    dump_plan,
    graph_to_dict,
    load_plan,
    plan_to_document,
    read_graph_file,
    report_document,
    write_text,
)
from flagforge.verify import SUITE_CHECKS, bound_consistency_suite, search_flag_profiles, verify_graph

EXIT_OK = 0
EXIT_NEGATIVE = 2


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter):
    pass


def _help_topics_text() -> dict[str, str]:
    return {
        "formats": textwrap.dedent(
            """
            File formats

            Graph JSON (default):
              {"colors": [1, 2, 1], "edges": [[0, 1], [1, 2]]}
              colors[v] is the positive color of vertex v; edges join distinct vertices.

            Graph edge list (--format edgelist):
              #colors 1 2 1
              0 1
              1 2

            Plan JSON: written by --plan-out, stamped with format_version 1.0.
            Every command prints one JSON record per line on stdout.
            """
        ).strip(),
        "config": textwrap.dedent(
            """
            Runtime config

            File: $XDG_CONFIG_HOME/flagforge/config.yaml (~/.config/flagforge/config.yaml)

            Supported keys:
            runtime.threads        (>= 1)
            runtime.precision      (>= 50 significant digits)
            output.graph_format    (json | edgelist)
            search.max_vertices    (1..9)

            Precedence (highest -> lowest):
            1. CLI flags (--threads, --precision, --format)
            2. FLAGFORGE_THREADS, FLAGFORGE_PRECISION
            3. config.yaml
            4. built-in defaults

            Disable file autoload:
            - CLI: --no-config-autoload
            - ENV: FLAGFORGE_NO_CONFIG_AUTOLOAD=1
            """
        ).strip(),
        "errors": textwrap.dedent(
            """
            Error codes (printed as one JSON line, see docs/errors.md)

            FLAG_001 InputValidationError    exit 1
            FLAG_002 GraphFormatError        exit 1
            FLAG_003 PlanCompatibilityError  exit 1
            FLAG_004 SizeGuardError          exit 1
            FLAG_005 ColoringError           exit 1
            FLAG_006 UndefinedRepresentationError exit 1
            FLAG_007 ConfigError             exit 1
            FLAG_900 SelfVerificationError   exit 3
            FLAG_999 UnknownUnhandledError   exit 1

            A failed construction, a verify mismatch or a violated bound is
            not an error: the record is printed and the exit code is 2.
            """
        ).strip(),
        "examples": textwrap.dedent(
            """
            Example command flow

            1) Decompose an integer
               flagforge decompose --m 2000 --k 3 --r 3 --flavor colored

            2) Build and check a complex
               flagforge construct --f-vector 1,100,1000,2000 --out g.json --plan-out plan.json
               flagforge verify g.json --expect 1,100,1000,2000

            3) Search small graphs
               flagforge search --fix-card 2 --fix-count 15 --report-card 3 --max-vertices 8

            4) Watch a cost function approach its limit
               flagforge limits --k 3 --p 2 --upto 1000000
            """
        ).strip(),
    }


def _help_topics_json() -> dict[str, Any]:
    return {
        "formats": {
            "graph_formats": list(GRAPH_FORMATS),
            "graph_json_keys": ["colors", "edges"],
            "edgelist_header": "#colors c0 c1 ...",
            "plan_format_version": "1.0",
            "docs": ["docs/formats.md"],
        },
        "config": {
            "path": "~/.config/flagforge/config.yaml",
            "keys": ["runtime.threads", "runtime.precision", "output.graph_format", "search.max_vertices"],
            "env_vars": ["FLAGFORGE_THREADS", "FLAGFORGE_PRECISION", "FLAGFORGE_NO_CONFIG_AUTOLOAD"],
            "precedence": ["cli_flags", "env", "config_yaml", "defaults"],
        },
        "errors": {
            "codes": {code: error_type for code, (error_type, _) in ERROR_CATALOG.items()},
            "exit_codes": {"0": "success", "1": "usage/IO", "2": "mathematical negative", "3": "internal"},
        },
        "examples": {
            "commands": [
                "flagforge decompose --m 2000 --k 3 --r 3 --flavor colored",
                "flagforge construct --f-vector 1,100,1000,2000 --out g.json --plan-out plan.json",
                "flagforge verify g.json --expect 1,100,1000,2000",
                "flagforge search --fix-card 2 --fix-count 15 --report-card 3 --max-vertices 8",
                "flagforge limits --k 3 --p 2 --upto 1000000",
            ]
        },
    }


def cmd_help(args: argparse.Namespace) -> int:
    topic = args.topic
    if args.format == "json":
        _print_json({"topic": topic, "content": _help_topics_json()[topic]})
        return EXIT_OK

    print(_help_topics_text()[topic])
    return EXIT_OK


def _print_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, ensure_ascii=True))


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name, None) is None]
    if missing:
        raise input_error(f"{args.command} needs {', '.join(missing)}.", missing=missing)


def _run_config(args: argparse.Namespace) -> RunConfig:
    return args._run


def _emit_graph(args: argparse.Namespace, g: VertexColoredGraph, record: dict[str, Any]) -> None:
    """Write the graph to --out, or embed it in the stdout record."""
    run = _run_config(args)
    if run.out:
        write_text(run.out, dump_graph(g, run.graph_format))
        record["graph_path"] = run.out
        record["graph_format"] = run.graph_format
    else:
        record["graph"] = graph_to_dict(g)


def _finish_construction(args: argparse.Namespace, result: ConstructionResult) -> int:
    plan = result.plan
    plan_out = getattr(args, "plan_out", None)
    if plan_out:
        write_text(plan_out, dump_plan(plan))
    record = report_document("construction", {"plan": plan_to_document(plan)})
    if plan_out:
        record["plan_path"] = plan_out
    if result.graph is not None:
        _emit_graph(args, result.graph, record)
    _print_json(record)
    return EXIT_OK if result.succeeded else EXIT_NEGATIVE


def _parse_alloc(text: str, target: FaceVector, precision: int) -> Allocation:
    if text == "auto":
        return allocate_parts(target, precision=precision)
    if text == "balanced":
        return Allocation.balanced()
    try:
        parts = tuple(int(item) for item in text.split(","))
    except ValueError:
        raise input_error("--alloc must be auto, balanced or a comma-separated list of part sizes.", alloc=text) from None
    if len(parts) != target.d or any(size < 1 for size in parts):
        raise input_error("Explicit parts need one positive size per color of the top stage.", parts=list(parts), d=target.d)
    return Allocation.explicit(parts)


def cmd_decompose(args: argparse.Namespace) -> int:
    _need(args, "m", "k")
    flavor = args.flavor
    if flavor == "plain":
        rep = kk_rep(args.m, args.k)
    elif flavor == "colored":
        _need(args, "r")
        rep = color_rep(args.m, args.k, args.r)
    elif flavor == "two-term":
        rep = two_term_rep(args.m, args.k) if args.r is None else dim_two_term_rep(args.m, args.k, args.r)
    else:
        rep = flag_rep(args.m, args.k)
    record = rep.to_dict()
    record["evaluated"] = evaluate(rep)
    _print_json(report_document("decompose", record))
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    run = _run_config(args)
    kind = args.kind
    record: dict[str, Any] = {"kind": kind}
    if kind == "kk":
        if args.j is not None:
            _need(args, "m", "k")
            record.update(kind="kk_upper", value=kk_upper(args.m, args.k, args.j), j=args.j)
        else:
            _need(args, "m", "k", "p")
            record["value"] = kk_shadow(args.m, args.k, args.p)
    elif kind == "ffk":
        _need(args, "m", "k", "p", "r")
        record["value"] = ffk_bound(args.m, args.k, args.p, args.r)
    elif kind == "flag":
        _need(args, "m", "k", "p")
        record.update(flag_or_shadow_bound(args.m, args.k, args.p).to_dict())
    elif kind == "cost":
        _need(args, "m", "k", "p")
        if args.r is None:
            value = c_cost(args.m, args.k, args.p)
            record.update(function="c_cost", value=value)
            if args.p >= 2:
                record["ceiling"] = to_decimal(c_cost_upper(args.m, args.k, args.p), run.precision)
                record["within_ceiling"] = within_c_cost_upper(value, args.m, args.k, args.p)
                record["safe_ceiling"] = to_decimal(c_cost_ceiling(args.m, args.k, args.p), run.precision)
                record["within_safe_ceiling"] = within_c_cost_ceiling(value, args.m, args.k, args.p)
        else:
            value = d_cost(args.m, args.k, args.p, args.r)
            record.update(function="d_cost", value=value, r=args.r)
            if args.p >= 2:
                record["ceiling"] = to_decimal(d_cost_upper(args.m, args.k, args.p, args.r), run.precision)
                record["within_ceiling"] = within_d_cost_upper(value, args.m, args.k, args.p, args.r)
    else:
        _need(args, "d", "m", "k", "p")
        record["value"] = to_decimal(equal_vertices_bound(args.d, args.k, args.p, args.m), run.precision)
    _print_json(report_document("bound", record))
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    run = _run_config(args)
    target = FaceVector.parse(args.f_vector)
    alloc = _parse_alloc(args.alloc, target, run.precision)
    result = construct_main(target, alloc, pair=not args.no_pair, threads=run.threads)
    return _finish_construction(args, result)


def cmd_two_face(args: argparse.Namespace) -> int:
    run = _run_config(args)
    result = construct_two_face(args.k, args.p, args.m, args.q, threads=run.threads)
    return _finish_construction(args, result)


def cmd_dim(args: argparse.Namespace) -> int:
    run = _run_config(args)
    result = construct_dim(args.r, args.k, args.p, args.m, args.q, pair=args.pair, threads=run.threads)
    return _finish_construction(args, result)


def cmd_hvec(args: argparse.Namespace) -> int:
    run = _run_config(args)
    target = HVector.parse(args.h_vector)
    alloc = None
    if args.alloc != "balanced":
        entries = list(target.entries)
        while len(entries) > 1 and entries[-1] == 0:
            entries.pop()
        alloc = _parse_alloc(args.alloc, FaceVector(tuple(entries)), run.precision)
    result = construct_hvec(target, alloc, threads=run.threads)
    return _finish_construction(args, result)


def cmd_verify(args: argparse.Namespace) -> int:
    run = _run_config(args)
    if args.expect is not None:
        expected = FaceVector.parse(args.expect)
    elif args.plan is not None:
        try:
            text = Path(args.plan).read_text(encoding="utf-8")
        except OSError as exc:
            raise input_error("Could not read plan file.", path=args.plan, reason=str(exc)) from None
        plan = load_plan(text)
        if plan.f_vector is None:
            raise input_error("The plan records no face vector; it describes a failed construction.", plan=args.plan)
        expected = FaceVector(plan.f_vector)
    else:
        raise input_error("verify needs --expect or --plan.")
    g = read_graph_file(args.graph)
    outcome = verify_graph(g, expected, threads=run.threads)
    _print_json(report_document("verify", outcome.to_dict()))
    return EXIT_OK if outcome.passed else EXIT_NEGATIVE


def cmd_search(args: argparse.Namespace) -> int:
    run = _run_config(args)
    report = search_flag_profiles(
        args.fix_card, args.fix_count, args.report_card, args.max_vertices, workers=run.threads
    )
    _print_json(report_document("search", report.to_dict()))
    return EXIT_OK


def cmd_plus(args: argparse.Namespace) -> int:
    run = _run_config(args)
    g = read_graph_file(args.graph)
    colors = range(1, args.colors + 1) if args.colors is not None else None
    plus = plus_construction(g, colors)
    f = clique_f_vector(plus, threads=run.threads)
    record = report_document(
        "plus",
        {
            "f_vector": f.to_list(),
            "h_vector": f_to_h(f).to_list(),
            "balanced": is_balanced(plus),
            "added_vertices": plus.vertex_count - g.vertex_count,
        },
    )
    _emit_graph(args, plus, record)
    _print_json(record)
    return EXIT_OK


def cmd_vd(args: argparse.Namespace) -> int:
    g = read_graph_file(args.graph)
    complex_ = SimplicialComplexExplicit.from_graph(g)
    decomposable = is_vertex_decomposable(complex_)
    record = {
        "vertex_decomposable": decomposable,
        "facets": len(complex_.facets),
        "vertices": g.vertex_count,
        "f_vector": complex_.f_vector().to_list(),
    }
    _print_json(report_document("vd", record))
    return EXIT_OK if decomposable else EXIT_NEGATIVE


def cmd_diagnose(args: argparse.Namespace) -> int:
    target = FaceVector.parse(args.f_vector)
    violations = diagnose_face_vector(target)
    _print_json(report_document("diagnose", {"target": target.to_list(), "violations": violations}))
    return EXIT_OK if not violations else EXIT_NEGATIVE


def _ladder(upto: int) -> list[int]:
    rungs = []
    m = 10
    while m < upto:
        rungs.append(m)
        m *= 10
    rungs.append(upto)
    return rungs


def cmd_limits(args: argparse.Namespace) -> int:
    run = _run_config(args)
    if args.upto < 1:
        raise input_error("--upto must be >= 1.", upto=args.upto)
    if args.r is None:
        limit = limit_constant_two(args.k, args.p)
    else:
        limit = limit_constant_dim(args.r, args.k, args.p)
    for m in _ladder(args.upto):
        value = c_cost(m, args.k, args.p) if args.r is None else d_cost(m, args.k, args.p, args.r)
        ratio = ratio_to_limit(value, m, args.k, args.p)
        record = {
            "m": m,
            "k": args.k,
            "p": args.p,
            "r": args.r,
            "cost": value,
            "ratio": to_decimal(ratio, run.precision),
            "limit": to_decimal(limit, run.precision),
            "relative_error": to_decimal(ratio / limit - 1, run.precision),
        }
        _print_json(report_document("limits", record))
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    ranges = SuiteRanges.full() if args.full else SuiteRanges()
    report = bound_consistency_suite(ranges, only=args.only)
    _print_json(report_document("suite", report.to_dict()))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def _add_int(p: argparse.ArgumentParser, *names: str, required: bool = False) -> None:
    for name in names:
        p.add_argument(f"--{name}", metavar="INT", type=int, required=required, help=f"Value of {name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagforge",
        description="Build flag complexes with prescribed face numbers and check the bounds around them.",
        formatter_class=_HelpFormatter,
        epilog=textwrap.dedent(
            """
            Quick start:
              flagforge construct --f-vector 1,100,1000,2000 --out g.json
              flagforge verify g.json --expect 1,100,1000,2000

            More help:
              flagforge help formats
              flagforge help errors
              flagforge help examples
            """
        ),
    )
    parser.add_argument(
        "--no-config-autoload",
        action="store_true",
        help="Disable automatic loading of config.yaml.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO logs, -vv for DEBUG")
    parser.add_argument("--threads", metavar="N", type=int, help="Worker processes for counting and search")
    parser.add_argument("--precision", metavar="DIGITS", type=int, help="Significant digits for real-valued bounds")
    parser.add_argument("--format", dest="graph_format", choices=GRAPH_FORMATS, help="Graph output format")
    sub = parser.add_subparsers(
        dest="command",
        required=True,
        metavar="{decompose,bound,construct,two-face,dim,hvec,verify,search,plus,vd,diagnose,limits,suite,help}",
    )

    dec_p = sub.add_parser(
        "decompose",
        help="Cascade representation of an integer",
        description="Print the plain, colored, two-term or flag representation of m.",
        formatter_class=_HelpFormatter,
    )
    _add_int(dec_p, "m", "k", "r")
    dec_p.add_argument("--flavor", choices=["plain", "colored", "two-term", "flag"], default="plain")
    dec_p.set_defaults(func=cmd_decompose)

    b_p = sub.add_parser(
        "bound",
        help="Evaluate one bound",
        description=textwrap.dedent(
            """
            kk     shadow floor for f_{p-1} (with --j: upward ceiling for f_{k-1+j})
            ffk    colored shadow floor for an r-colored complex
            flag   two-branch floor for flag complexes
            cost   c_cost (or d_cost with --r) plus its closed-form ceiling
            equal  equal-part floor for balanced complexes with d colors
            """
        ),
        formatter_class=_HelpFormatter,
    )
    b_p.add_argument("--kind", choices=["kk", "ffk", "flag", "cost", "equal"], required=True)
    _add_int(b_p, "m", "k", "p", "r", "d", "j")
    b_p.set_defaults(func=cmd_bound)

    c_p = sub.add_parser(
        "construct",
        help="Build a flag complex with a given face vector",
        description="Run the staged construction; exit 2 with a diagnosis if it runs out of room.",
        formatter_class=_HelpFormatter,
    )
    c_p.add_argument("--f-vector", metavar="1,c1,...,cd", required=True, help="Target face vector")
    c_p.add_argument("--alloc", metavar="auto|balanced|p1,...,pd", default="balanced", help="Part-size allocation")
    c_p.add_argument("--no-pair", action="store_true", help="Never join consecutive extra vertices")
    c_p.add_argument("--out", metavar="PATH", help="Graph output file")
    c_p.add_argument("--plan-out", metavar="PATH", help="Plan JSON output file")
    c_p.set_defaults(func=cmd_construct)

    t_p = sub.add_parser(
        "two-face",
        help="Flag complex with two prescribed face numbers",
        description="Build a complex with f_{k-1} = m and f_{p-1} = q from a clique base.",
        formatter_class=_HelpFormatter,
    )
    _add_int(t_p, "k", "p", "m", "q", required=True)
    t_p.add_argument("--out", metavar="PATH", help="Graph output file")
    t_p.add_argument("--plan-out", metavar="PATH", help="Plan JSON output file")
    t_p.set_defaults(func=cmd_two_face)

    dim_p = sub.add_parser(
        "dim",
        help="Two prescribed face numbers in bounded dimension",
        description="Build a complex of dimension <= r-1 with f_{k-1} = m and f_{p-1} = q from a Turán base.",
        formatter_class=_HelpFormatter,
    )
    _add_int(dim_p, "r", "k", "p", "m", "q", required=True)
    dim_p.add_argument("--pair", action="store_true", help="Join consecutive extra vertices where allowed")
    dim_p.add_argument("--out", metavar="PATH", help="Graph output file")
    dim_p.add_argument("--plan-out", metavar="PATH", help="Plan JSON output file")
    dim_p.set_defaults(func=cmd_dim)

    h_vec_p = sub.add_parser(
        "hvec",
        help="Balanced flag complex with a given h-vector",
        description="Build Δ with f(Δ) = h, then add one vertex per color.",
        formatter_class=_HelpFormatter,
    )
    h_vec_p.add_argument("--h-vector", metavar="1,h1,...,hd", required=True, help="Target h-vector")
    h_vec_p.add_argument("--alloc", metavar="auto|balanced|p1,...,pd", default="balanced", help="Part-size allocation")
    h_vec_p.add_argument("--out", metavar="PATH", help="Graph output file")
    h_vec_p.add_argument("--plan-out", metavar="PATH", help="Plan JSON output file")
    h_vec_p.set_defaults(func=cmd_hvec)

    v_p = sub.add_parser(
        "verify",
        help="Recount a graph's cliques against a face vector",
        description="Brute-force the clique complex and compare entrywise; exit 2 on the first mismatch.",
        formatter_class=_HelpFormatter,
    )
    v_p.add_argument("graph", metavar="GRAPH_FILE", help="Graph JSON or edge list")
    v_p.add_argument("--expect", metavar="1,c1,...,cd", help="Expected face vector")
    v_p.add_argument("--plan", metavar="PATH", help="Take the expected face vector from a plan file")
    v_p.set_defaults(func=cmd_verify)

    s_p = sub.add_parser(
        "search",
        help="Exhaustive search over small graphs",
        description="List the attained values of one face number among graphs with another face number fixed.",
        formatter_class=_HelpFormatter,
    )
    _add_int(s_p, "fix-card", "fix-count", "report-card", required=True)
    s_p.add_argument("--max-vertices", metavar="INT", type=int, help="Vertex budget (<= 9); default from config")
    s_p.set_defaults(func=cmd_search)

    plus_p = sub.add_parser(
        "plus",
        help="Add one vertex per color and report the h-vector",
        description="Apply the plus construction to a properly colored graph.",
        formatter_class=_HelpFormatter,
    )
    plus_p.add_argument("graph", metavar="GRAPH_FILE", help="Graph JSON or edge list")
    plus_p.add_argument("--colors", metavar="INT", type=int, help="Palette size; default is the largest color used")
    plus_p.add_argument("--out", metavar="PATH", help="Graph output file")
    plus_p.set_defaults(func=cmd_plus)

    vd_p = sub.add_parser(
        "vd",
        help="Vertex decomposability of a clique complex",
        description="Check the clique complex of a graph (<= 25 vertices) for vertex decomposability.",
        formatter_class=_HelpFormatter,
    )
    vd_p.add_argument("graph", metavar="GRAPH_FILE", help="Graph JSON or edge list")
    vd_p.set_defaults(func=cmd_vd)

    diag_p = sub.add_parser(
        "diagnose",
        help="Necessary conditions a face vector violates",
        description="Check the shadow, flag and colored bounds between consecutive face numbers.",
        formatter_class=_HelpFormatter,
    )
    diag_p.add_argument("--f-vector", metavar="1,c1,...,cd", required=True, help="Face vector to check")
    diag_p.set_defaults(func=cmd_diagnose)

    lim_p = sub.add_parser(
        "limits",
        help="Cost function ratios against their limits",
        description="Print c_cost (or d_cost with --r) over m^((p-1)/(k-1)) for m = 10, 100, ..., upto.",
        formatter_class=_HelpFormatter,
    )
    _add_int(lim_p, "k", "p", required=True)
    _add_int(lim_p, "r")
    lim_p.add_argument("--upto", metavar="M", type=int, default=10**6, help="Largest m on the ladder")
    lim_p.set_defaults(func=cmd_limits)

    suite_p = sub.add_parser(
        "suite",
        help="Run the bound consistency suite",
        description="Cross-check closed forms against recurrences, exhaustive search and constructions.",
        formatter_class=_HelpFormatter,
    )
    suite_p.add_argument("--full", action="store_true", help="Use the full sweep ranges (minutes)")
    suite_p.add_argument(
        "--only", metavar="CHECK", action="append", choices=[name for name, _ in SUITE_CHECKS], help="Run one check"
    )
    suite_p.set_defaults(func=cmd_suite)

    h_p = sub.add_parser(
        "help",
        help="Show help topics",
        description="Show reference help for formats, config, errors and example commands.",
        formatter_class=_HelpFormatter,
    )
    h_p.add_argument(
        "topic",
        choices=["formats", "config", "errors", "examples"],
        metavar="TOPIC",
        help="Help topic to print",
    )
    h_p.add_argument(
        "--format",
        choices=["text", "json"],
        default="json",
        help="Output format for help topic",
    )
    h_p.set_defaults(func=cmd_help)

    return parser


def _resolve_run_config(args: argparse.Namespace, *, autoload: bool) -> RunConfig:
    # Flags override a copy; the cached config keeps file and env values only.
    cfg = replace(load_runtime_config(autoload=autoload), loaded_sources=[])
    if args.threads is not None:
        if args.threads < 1:
            raise input_error("--threads must be >= 1.", threads=args.threads)
        cfg.threads = args.threads
        cfg.loaded_sources.append("cli:--threads")
    if args.precision is not None:
        if args.precision < MIN_PRECISION:
            raise input_error(f"--precision must be >= {MIN_PRECISION}.", precision=args.precision)
        cfg.precision = args.precision
        cfg.loaded_sources.append("cli:--precision")
    if args.graph_format is not None:
        cfg.graph_format = args.graph_format
    return RunConfig(
        command=args.command,
        out=getattr(args, "out", None),
        verbosity=args.verbose,
        threads=cfg.threads,
        precision=cfg.precision,
        graph_format=cfg.graph_format,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "help":
            return int(args.func(args))
        autoload = not args.no_config_autoload and os.environ.get("FLAGFORGE_NO_CONFIG_AUTOLOAD") != "1"
        configure_logging(args.verbose)
        setattr(args, "_run", _resolve_run_config(args, autoload=autoload))
        return int(args.func(args))
    except FlagForgeError as exc:
        _print_json(exc.payload.to_dict())
        return exc.exit_code
    except Exception as exc:
        wrapped = unhandled_error(exc)
        _print_json(wrapped.payload.to_dict())
        return wrapped.exit_code


if __name__ == "__main__":
    sys.exit(main())
