"""Command-line interface: gen, analyze, verify, sweep.

Exit codes: 0 success, 1 verification/bound failure, 2 invalid input.
``--json`` switches stdout to machine-parsable JSON.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import statistics
import sys

from . import oracle
from .constants import DEFAULT_CONSTANTS, load_constants
from .drawing import (
    convex_complete,
    crossing_matrix,
    load_drawing,
    outer_face_vertex,
    random_geometric_complete,
    relabel_ccw,
    save_drawing,
    triangle_family,
    validate_simple,
)
from .errors import DrawingFormatError, InvalidDrawingError, ShortEdgeError
from .packing import MatchConfig, build_low_stab_matching, matching_from_json, verify_matching
from .pipeline import CSV_HEADER, select_short_edge
from .set_system import dual_shatter_estimate, family_from_json, stab_count

GENERATORS = ("convex", "random-geometric")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _load_constants(args):
    if args.constants:
        return load_constants(args.constants)
    return DEFAULT_CONSTANTS


def cmd_gen(args) -> int:
    if args.n < 3:
        print("error: --n must be at least 3", file=sys.stderr)
        return 2
    if args.generator == "convex":
        drawing = convex_complete(args.n)
    else:
        drawing = random_geometric_complete(args.n, seed=args.seed)
    save_drawing(drawing, args.output)
    mx = crossing_matrix(drawing)
    payload = {"vertices": drawing.n_vertices, "edges": len(drawing.edge_keys),
               "crossings": mx.total_crossings, "output": args.output}
    _emit(args, payload,
          f"wrote {args.output}: {payload['vertices']} vertices, "
          f"{payload['edges']} edges, {payload['crossings']} crossings")
    return 0


def cmd_analyze(args) -> int:
    cons = _load_constants(args)
    try:
        drawing = load_drawing(args.input)
        report = select_short_edge(drawing, constants=cons, hint=args.hint,
                                   generator=args.label, seed=args.seed)
    except DrawingFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidDrawingError as exc:
        for v in exc.violations:
            print(f"violation: {v}", file=sys.stderr)
        return 2

    oracle_min = None
    if args.with_oracle:
        _, oracle_min = oracle.brute_min_crossing_edge(drawing)

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh)
            fh.write("\n")
    if args.csv:
        _append_csv(args.csv, [report.csv_row(oracle_min)])

    edge = report.chosen if report.chosen else report.chosen_ids
    _emit(args, report.to_json(),
          f"chosen edge {edge}: {report.crossing_count} crossings "
          f"(bound {report.bound:.1f}, passed={report.passed}, fallback={report.fallback})")
    return 0 if (report.passed or report.fallback) else 1


def _append_csv(path, rows) -> None:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            has_header = fh.readline().strip() == CSV_HEADER
    except FileNotFoundError:
        has_header = False
    with open(path, "a", encoding="utf-8") as fh:
        if not has_header:
            fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row + "\n")


def cmd_verify(args) -> int:
    checks = []

    def check(name, ok, detail=""):
        checks.append({"name": name, "passed": bool(ok), "detail": detail})

    try:
        if args.family:
            with open(args.family, "r", encoding="utf-8") as fh:
                family = family_from_json(json.load(fh))
            _family_checks(family, check, args)
        else:
            drawing = load_drawing(args.input)
            _drawing_checks(drawing, check, args)
    except (DrawingFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    failed = [c for c in checks if not c["passed"]]
    if args.json:
        print(json.dumps({"passed": not failed, "checks": checks}))
    else:
        for c in checks:
            status = "PASS" if c["passed"] else "FAIL"
            detail = f"  ({c['detail']})" if c["detail"] else ""
            print(f"{status} {c['name']}{detail}")
    return 1 if failed else 0


def _family_checks(family, check, args) -> None:
    n = family.ground.n
    import random as _random
    rng = _random.Random(args.seed or 0)
    ok = True
    for _ in range(min(2000, n * n)):
        u, v, w = rng.choices(range(1, n + 1), k=3)
        if u != v and v != w and u != w:
            if stab_count(family, u, w) > stab_count(family, u, v) + stab_count(family, v, w):
                ok = False
                break
    check("pseudometric-triangle-inequality", ok)
    for m in (1, 2, 3):
        if m <= len(family.members):
            est = dual_shatter_estimate(family, m, budget=None)
            check(f"venn-cells-m{m}",
                  est.value <= min(n, 2 ** m),
                  f"max {est.value} cells, ceiling {min(n, 2 ** m)}")


def _drawing_checks(drawing, check, args) -> None:
    cons = _load_constants(args)
    violations = validate_simple(drawing)
    check("simplicity", not violations,
          "" if not violations else str(violations[0]))
    if violations:
        return
    n = drawing.n_vertices - 1
    v0 = outer_face_vertex(drawing, args.hint)
    labeling = relabel_ccw(drawing, v0)
    family = triangle_family(drawing, labeling)

    budget = args.shatter_budget
    for m in (1, 2, 3):
        est = dual_shatter_estimate(family, m, budget=None)
        check(f"shatter-bound-m{m} (exhaustive)", est.value <= 5 * m * m,
              f"max {est.value} cells vs budget {5 * m * m}")
    for m in (4, 5, 6):
        if m <= len(family.members):
            est = dual_shatter_estimate(family, m, budget=budget, seed=args.seed or 0)
            kind = "exact" if est.exact else "sampled"
            check(f"shatter-bound-m{m} ({kind})", est.value <= 5 * m * m,
                  f"max {est.value} cells vs budget {5 * m * m}")

    cfg = MatchConfig(c2=cons.c2, c3=cons.c3, min_n=cons.min_n)
    if args.matching:
        with open(args.matching, "r", encoding="utf-8") as fh:
            matching = matching_from_json(json.load(fh))
    elif n >= cfg.min_n:
        matching = build_low_stab_matching(family, cfg)
    else:
        matching = None
        check("matching-properties", True, f"skipped: n={n} below min_n={cfg.min_n}")
    if matching is not None:
        mreport = verify_matching(family, matching, cfg)
        for c in mreport.checks:
            check(f"matching-{c.name}", c.passed,
                  f"achieved {c.achieved:.2f}, limit {c.limit:.2f}")

    report = select_short_edge(drawing, constants=cons, hint=args.hint)
    check("selected-edge-bound", report.passed or report.fallback,
          f"{report.crossing_count} crossings vs {report.bound:.1f}")
    check("residual-endpoint-split", report.observation_ok)
    check("crossing-classes-partition",
          report.fallback or report.diagnostics.get("class_sum_matches_total", False))

    if n <= oracle.PHI_GUARD:
        stab_table = oracle.brute_stab_counts(family)
        ok = all(stab_count(family, u, v) == c for (u, v), c in stab_table.items())
        check("oracle-stab-equivalence", ok)
        edge, cnt = oracle.brute_min_crossing_edge(drawing)
        check("oracle-min-sandwich", cnt <= report.crossing_count,
              f"oracle {cnt} <= pipeline {report.crossing_count}")


def cmd_sweep(args) -> int:
    cons = _load_constants(args)
    ns = [int(x) for x in args.ns.split(",") if x]
    tasks = [(n, seed) for n in ns for seed in range(args.seeds)]

    def run_one(task):
        n, seed = task
        return _sweep_row(args.generator, n, seed, cons, args.oracle_guard)

    results = {}
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for task, row in zip(tasks, pool.map(_sweep_task, [
                    (args.generator, n, seed, args.constants, args.oracle_guard)
                    for n, seed in tasks])):
                results[task] = row
    else:
        for task in tasks:
            results[task] = run_one(task)

    rows = []
    aggregates = []
    for n in ns:
        per_n = [results[(n, seed)] for seed in range(args.seeds)]
        rows.extend(r for _, r in per_n)
        chosen = [c for c, _ in per_n if c is not None and c[0] is not None]
        crossings = [c[0] for c in chosen]
        oracle_vals = [c[1] for c in chosen if c[1] is not None]
        agg = ["v1", "aggregate", n, "", args.generator] + [""] * 20
        agg[21] = max(crossings) if crossings else ""
        agg[22] = f"{statistics.median(crossings):.1f}" if crossings else ""
        agg[23] = max(oracle_vals) if oracle_vals else ""
        agg[24] = f"{statistics.median(oracle_vals):.1f}" if oracle_vals else ""
        aggregates.append(",".join(str(c) for c in agg))
    _append_csv(args.output, rows + aggregates)
    if args.json:
        print(json.dumps({"rows": len(rows), "aggregates": len(aggregates),
                          "output": args.output}))
    else:
        print(f"wrote {len(rows)} run rows and {len(aggregates)} aggregate rows to {args.output}")
    return 0


def _sweep_task(packed):
    generator, n, seed, constants_path, oracle_guard = packed
    cons = load_constants(constants_path) if constants_path else DEFAULT_CONSTANTS
    return _sweep_row(generator, n, seed, cons, oracle_guard)


def _sweep_row(generator, n, seed, cons, oracle_guard):
    from .fit import make_drawing
    try:
        drawing = make_drawing(generator, n, seed)
        report = select_short_edge(drawing, constants=cons, generator=generator, seed=seed)
        oracle_min = None
        if n <= oracle_guard:
            _, oracle_min = oracle.brute_min_crossing_edge(drawing)
        return (report.crossing_count, oracle_min), report.csv_row(oracle_min)
    except ShortEdgeError as exc:
        cells = ["v1", "run", n, seed, generator] + [""] * 20
        cells[20] = f"error:{type(exc).__name__}"
        return (None, None), ",".join(str(c) for c in cells)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="shortedge",
                                     description="low-crossing edge selection in "
                                                 "complete simple topological drawings")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="JSON output on stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--constants", help="JSON file overriding c1..c4/min_n")

    p_gen = sub.add_parser("gen", help="generate a drawing file")
    common(p_gen)
    p_gen.add_argument("--generator", choices=GENERATORS, required=True)
    p_gen.add_argument("--n", type=int, required=True, help="number of vertices")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_an = sub.add_parser("analyze", help="run the selection pipeline on a drawing")
    common(p_an)
    p_an.add_argument("input")
    p_an.add_argument("-o", "--output", help="write the report JSON here")
    p_an.add_argument("--csv", help="append a CSV row here")
    p_an.add_argument("--hint", type=int, help="outer-face vertex hint for curved drawings")
    p_an.add_argument("--label", default="file", help="generator label for the CSV row")
    p_an.add_argument("--with-oracle", action="store_true",
                      help="also compute the brute-force minimum")
    p_an.set_defaults(func=cmd_analyze)

    p_vf = sub.add_parser("verify", help="run the invariant suite")
    common(p_vf)
    p_vf.add_argument("input", nargs="?", help="drawing JSON")
    p_vf.add_argument("--family", help="set-family JSON instead of a drawing")
    p_vf.add_argument("--matching", help="matching JSON to verify against the drawing")
    p_vf.add_argument("--hint", type=int)
    p_vf.add_argument("--shatter-budget", type=int, default=1000)
    p_vf.set_defaults(func=cmd_verify)

    p_sw = sub.add_parser("sweep", help="run analyze across a grid, emit CSV")
    common(p_sw)
    p_sw.add_argument("--generator", choices=GENERATORS, default="random-geometric")
    p_sw.add_argument("--ns", required=True, help="comma-separated ground set sizes")
    p_sw.add_argument("--seeds", type=int, default=5, help="seeds 0..k-1 per n")
    p_sw.add_argument("--jobs", type=int, default=1)
    p_sw.add_argument("--oracle-guard", type=int, default=64)
    p_sw.add_argument("-o", "--output", required=True)
    p_sw.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    if args.command == "verify" and not args.input and not args.family:
        parser.error("verify needs a drawing path or --family")
    try:
        return args.func(args)
    except ShortEdgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
