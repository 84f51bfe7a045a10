"""Command-line entry point.

Exit codes: 0 success, 1 a negative answer (UNSAT, INVALID, violations found),
2 usage or I/O errors, 3 UNKNOWN (a time budget ran out before an answer).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .bounds import bounds_report, optimal_coloring
from .covers import TotalCover, dumps_cover, loads_cover, validate_total_cover
from .graph import Graph, GraphError, format_dimacs, read_graph
from .solvers.cnf import build_cnf, export_cnf, sat_solve
from .solvers.search import (
    EXHAUSTIVE_LIMIT,
    SearchTimeout,
    decide_tessellation,
    decide_total,
    exact_T,
    exact_Tt,
    total_lower_bound,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    """Bad arguments or unreadable input; reported with exit code 2."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _load_graph(path: str) -> Graph:
    try:
        return read_graph(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_cover(path: str) -> TotalCover:
    try:
        return loads_cover(_read_text(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    report = bounds_report(g, known_T=args.T, known_chi_t=args.chi_t)
    print(report.format())
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=False))
    return EXIT_OK


def _sat_exact_total(g: Graph, backend: str, start: int) -> tuple[int, TotalCover]:
    k = start
    while True:
        cnf = build_cnf(g, k)
        model = sat_solve(cnf.nvars, cnf.clauses, backend)
        if model is not None:
            return k, cnf.decode(model)
        k += 1


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    if args.cnf:
        if not args.total or args.k is None:
            raise UsageError("--cnf needs --total and --k")
        _write_text(args.cnf, export_cnf(g, args.k))
    if args.k is not None and args.k < 0:
        raise UsageError("--k must be non-negative")
    backend = args.backend
    if backend == "auto":
        backend = "search" if g.n <= EXHAUSTIVE_LIMIT else "cadical153"
    if not args.total and backend != "search":
        raise UsageError("plain tessellation covers use the search backend only")
    try:
        if args.total:
            if args.k is not None:
                if backend == "search":
                    cover = decide_total(g, args.k, timeout=args.timeout, max_vertices=g.n)
                else:
                    cover = None if args.k < 1 else build_and_solve(g, args.k, backend)
                if cover is None:
                    print("UNSAT")
                    return EXIT_NEGATIVE
                print("SAT")
                _emit_cover(cover, args.witness)
                return EXIT_OK
            if backend == "search":
                outcome = exact_Tt(g, timeout=args.timeout, max_vertices=g.n)
                value, cover = outcome.value, outcome.witness
            else:
                value, cover = _sat_exact_total(g, backend, total_lower_bound(g))
            print(f"T_t = {value}")
            _emit_cover(cover, args.witness)
            return EXIT_OK
        if args.k is not None:
            parts = decide_tessellation(g, args.k, timeout=args.timeout, max_vertices=g.n)
            if parts is None:
                print("UNSAT")
                return EXIT_NEGATIVE
            print("SAT")
            print(json.dumps([[list(b) for b in p.blocks] for p in parts]))
            return EXIT_OK
        outcome = exact_T(g, timeout=args.timeout, max_vertices=g.n)
        print(f"T = {outcome.value}")
        print(json.dumps([[list(b) for b in p.blocks] for p in outcome.witness]))
        return EXIT_OK
    except SearchTimeout:
        print("UNKNOWN")
        return EXIT_UNKNOWN


def build_and_solve(g: Graph, k: int, backend: str) -> TotalCover | None:
    cnf = build_cnf(g, k)
    model = sat_solve(cnf.nvars, cnf.clauses, backend)
    return None if model is None else cnf.decode(model)


def _emit_cover(cover: TotalCover, path: str | None) -> None:
    text = dumps_cover(cover)
    if path:
        _write_text(path, text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    cover = _load_cover(args.cover)
    problems = validate_total_cover(g, cover)
    if problems:
        print("INVALID")
        for p in problems:
            print(p)
        return EXIT_NEGATIVE
    print("VALID")
    return EXIT_OK


def cmd_theta(args) -> int:
    from .theta import ThetaError, lovasz_theta

    g = _load_graph(args.graph)
    try:
        res = lovasz_theta(g, tol=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except ThetaError as exc:
        print(f"UNKNOWN {exc}")
        return EXIT_UNKNOWN
    print(f"theta = {res.theta:.8f}")
    print(f"bounds = [{res.lower:.8f}, {res.upper:.8f}]")
    print(f"psi = {res.psi}")
    print(f"certified = {str(res.certified).lower()}")
    print(f"iterations = {res.iterations}")
    return EXIT_OK


def cmd_classify(args) -> int:
    from .theta import type1_value, type2_value

    g = _load_graph(args.graph)
    try:
        value = type1_value(g, args.tol) if args.type == 1 else type2_value(g, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"promised T_t = {value}")
    if g.n > EXHAUSTIVE_LIMIT:
        print("exact check: skipped (graph too large)")
        return EXIT_OK
    try:
        exact = exact_Tt(g, timeout=args.timeout).value
    except SearchTimeout:
        print("exact check: UNKNOWN")
        return EXIT_UNKNOWN
    if exact == value:
        print(f"exact check: confirmed (T_t = {exact})")
        return EXIT_OK
    print(f"exact check: REFUTED (T_t = {exact}; promise does not hold)")
    return EXIT_NEGATIVE


def cmd_construct(args) -> int:
    from . import constructions as c

    def need_input() -> Graph:
        if not args.input:
            raise UsageError(f"{args.kind} needs --input")
        return _load_graph(args.input)

    cover = None
    status = EXIT_OK
    if args.kind == "example3t":
        h = c.example_3T_graph()
    elif args.kind == "anchored-k4":
        h = c.anchored_k4_graph()
        if args.check:
            rep = c.check_anchored_k4(h)
            print(f"covers enumerated: {rep.total_covers_found}")
            print(f"property holds: {str(rep.property_holds).lower()}")
            status = EXIT_OK if rep.property_holds else EXIT_NEGATIVE
    elif args.kind == "gadget":
        gadget = c.build_gadget(args.role, args.degree)
        h = gadget.graph
        if args.check:
            rep = c.check_gadget(h, args.role, gadget.terminals)
            print(f"signatures: {len(rep.signatures)}")
            print(f"property holds: {str(rep.property_holds).lower()}")
            status = EXIT_OK if rep.property_holds else EXIT_NEGATIVE
    elif args.kind == "universal":
        g = need_input()
        build = c.c5_padded_construction(g, args.pad)
        h = build.graph
        cover = c.universal_cover(g, optimal_coloring(g), args.pad)
    elif args.kind == "chordal":
        g = need_input()
        coloring = optimal_coloring(g)
        if max(coloring, default=0) > 3:
            raise UsageError("chordal construction needs a 3-colourable input")
        try:
            h = c.chordal_construction(g).graph
        except GraphError as exc:
            raise UsageError(str(exc)) from exc
        cover = c.chordal_cover(g, coloring)
    else:  # planar-reduction
        g = need_input()
        try:
            red = c.planar_reduction(g)
        except GraphError as exc:
            raise UsageError(str(exc)) from exc
        h = red.graph
        for line in red.log:
            print(line)
        print(f"euler check: {red.euler}")
        if args.solve or args.cover:
            cover = build_and_solve(h, 4, "cadical153")
            print("SAT" if cover is not None else "UNSAT")
            status = EXIT_OK if cover is not None else EXIT_NEGATIVE
    print(f"{args.kind}: {h.n} vertices, {h.m} edges")
    if cover is not None:
        print(f"cover labels: {cover.k}")
    if args.out:
        _write_text(args.out, format_dimacs(h, comment=args.kind))
    if args.cover and cover is not None:
        _write_text(args.cover, dumps_cover(cover))
    return status


def cmd_walk(args) -> int:
    import csv

    from .walks import WalkError, WalkState, simulate_total_walk, site_index, site_names
    from .covers import InvalidCoverError
    from .graph import total_graph

    g = _load_graph(args.graph)
    cover = _load_cover(args.cover)
    dim = g.n + g.m
    try:
        start = site_index(g, args.init)
        dists = simulate_total_walk(g, cover, WalkState.basis(dim, start), args.steps, args.per_operator)
    except InvalidCoverError as exc:
        print(f"INVALID {exc}")
        return EXIT_NEGATIVE
    except WalkError as exc:
        raise UsageError(str(exc)) from exc
    names = site_names(g, total_graph(g))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["step", "site", "probability"])
        for step, dist in enumerate(dists):
            for name, p in zip(names, dist):
                writer.writerow([step, name, f"{p:.12f}"])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .sweep import records_to_csv, run_sweep, sweep_violations

    start = time.monotonic()
    records = run_sweep(args.max_n, args.min_n, args.threads)
    text = records_to_csv(records, full=args.full)
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    violations = sweep_violations(records)
    print(
        f"graphs: {len(records)}, violations: {len(violations)}, "
        f"{time.monotonic() - start:.1f}s",
        file=sys.stderr,
    )
    for v in violations:
        print(f"VIOLATION {v.rule} {v.graph} {v.detail}", file=sys.stderr)
    return EXIT_NEGATIVE if violations else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tesslab", description="Total tessellation cover toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="exact parameters and T_t envelopes")
    a.add_argument("graph")
    a.add_argument("--json", action="store_true", help="also print the report as JSON")
    a.add_argument("--T", type=int, help="known T(G), enables the T-based envelopes")
    a.add_argument("--chi-t", type=int, dest="chi_t", help="known total chromatic number")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("solve", help="exact T or T_t, or a decision at fixed k")
    s.add_argument("graph")
    s.add_argument("--total", action="store_true", help="total covers instead of plain ones")
    s.add_argument("--k", type=int, help="decide whether k labels suffice")
    s.add_argument("--cnf", help="write the DIMACS CNF for --k to this path")
    s.add_argument("--timeout", type=float, help="seconds for the search backend")
    s.add_argument("--witness", help="write the witness cover JSON here instead of stdout")
    s.add_argument(
        "--backend",
        default="auto",
        help="search, dpll, or a pysat solver name such as cadical153 (default: auto)",
    )
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check a total cover")
    v.add_argument("graph")
    v.add_argument("cover")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("theta", help="Lovasz number by SDP")
    t.add_argument("graph")
    t.add_argument("--tol", type=float, default=1e-6)
    t.set_defaults(func=cmd_theta)

    c = sub.add_parser("classify", help="T_t under a promised type, checked when small")
    c.add_argument("graph")
    c.add_argument("--type", type=int, choices=(1, 2), required=True)
    c.add_argument("--tol", type=float, default=1e-6)
    c.add_argument("--timeout", type=float, default=60.0)
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("construct", help="build the reduction and certificate graphs")
    k.add_argument(
        "kind",
        choices=("example3t", "anchored-k4", "gadget", "universal", "chordal", "planar-reduction"),
    )
    k.add_argument("--input", help="source graph (universal, chordal, planar-reduction)")
    k.add_argument("--out", help="write the constructed graph here")
    k.add_argument("--cover", help="write the constructed or solved cover JSON here")
    k.add_argument("--pad", type=int, default=0, help="C5 copies for universal")
    k.add_argument(
        "--role", default="equal", choices=("equal", "not_equal", "duplicator", "shifter"),
        help="gadget role",
    )
    k.add_argument("--degree", type=int, default=2, help="duplicator fan-out")
    k.add_argument("--check", action="store_true", help="run the gadget check")
    k.add_argument("--solve", action="store_true", help="solve the reduction at k = 4")
    k.set_defaults(func=cmd_construct)

    w = sub.add_parser("walk", help="total quantum walk from a total cover")
    w.add_argument("graph")
    w.add_argument("--cover", required=True)
    w.add_argument("--init", required=True, help='start site: vertex id or edge "u-v" (0-based)')
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--per-operator", action="store_true", help="one reflection per step")
    w.add_argument("--out", help="CSV path (default stdout)")
    w.set_defaults(func=cmd_walk)

    sw = sub.add_parser("sweep", help="exhaustive check over connected graphs")
    sw.add_argument("--max-n", type=int, default=6)
    sw.add_argument("--min-n", type=int, default=1)
    sw.add_argument("--out", help="CSV path (default stdout)")
    sw.add_argument("--full", action="store_true", help="all computed columns")
    sw.add_argument("--threads", type=int, help="worker processes (default TESSLAB_THREADS or 1)")
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
