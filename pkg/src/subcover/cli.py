"""Command line interface: ``subcover catalog|analyze|generate|score``.

Exit codes: 0 success, 1 usage error, 2 input validation error, 3 infeasible
generator spec.  ``SUBCOVER_WORKERS`` sets the worker count.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .enumeration import worker_count
from .errors import InfeasibleSpecError, SubcoverError
from .generators import PlantSpec, generate_bjr, realize_uniform_cover
from .graph import read_edge_list, write_edge_list
from .information import CostModel, information_report
from .motifs import MotifCatalog, generate_catalog, motif_from_id, resolve_motif
from .reports import build_report, dump_cover, dumps_csv, dumps_json, read_cover
from .solver import SolverConfig, greedy_cover, prepare_tables

log = logging.getLogger("subcover")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- catalog ----------------------------------------------------------------------

def cmd_catalog(args) -> int:
    cat = generate_catalog(args.max_size, args.directed, args.filter)
    if args.out:
        cat.save(args.out)
    print(len(cat))
    return 0


# -- analyze ------------------------------------------------------------------------

def run_seed(seed: int, run: int) -> int:
    """Seed of run ``run``; run 0 uses ``seed`` itself."""
    if run == 0:
        return seed
    return int(np.random.SeedSequence([seed, run]).generate_state(1, np.uint64)[0] >> 1)


def _candidates(args, directed: bool) -> tuple[MotifCatalog, dict]:
    if args.candidates:
        cat = MotifCatalog.load(args.candidates)
        if cat.directed != directed:
            raise UsageError("candidate catalog direction does not match the graph")
        source = {"source": "file", "path": args.candidates}
    else:
        cat = generate_catalog(args.max_size, directed,
                               "biconnected" if args.biconnected_only else "connected")
        source = {"source": "generated", "max_size": args.max_size}
    if not cat.has_edge_motif():
        log.warning("candidate set lacks the single-edge motif; adding it")
        cat = cat.with_edge_motif()
    source.update(filter=cat.kind, count=len(cat))
    return cat, source


def cmd_analyze(args) -> int:
    g = read_edge_list(args.graph, directed=args.directed)
    if g.m == 0:
        raise SubcoverError(f"{args.graph}: graph has no edges")
    catalog, cand_info = _candidates(args, g.directed)
    model = CostModel.parse(args.epsilon, args.log_star)
    config = SolverConfig(catalog, seed=args.seed, restarts_per_step=args.restarts, model=model,
                          biconnected_only=args.biconnected_only)
    tables = prepare_tables(g, config)
    seeds = [run_seed(args.seed, i) for i in range(args.runs)]

    def one(s):
        cfg = SolverConfig(catalog, seed=s, restarts_per_step=args.restarts, model=model,
                           biconnected_only=args.biconnected_only, workers=1)
        return greedy_cover(g, cfg, tables)

    workers = worker_count()
    if workers > 1 and args.runs > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, seeds))
    else:
        results = [one(s) for s in seeds]

    best = min(range(len(results)), key=lambda i: results[i][1].sigma)
    cover, info = results[best]
    keys = set()
    for c, _ in results:
        keys.update(k for k, n in c.counts.counts.items() if n)
    ranges = {k: (min(c.counts.counts.get(k, 0) for c, _ in results),
                  max(c.counts.counts.get(k, 0) for c, _ in results)) for k in keys}
    runs = [{"seed": s, "sigma": r[1].sigma,
             "counts": dict(sorted((k, n) for k, n in r[0].counts.counts.items() if n))}
            for s, r in zip(seeds, results)]
    config_echo = {
        "candidates": cand_info,
        "seed": args.seed,
        "restarts": args.restarts,
        "runs": args.runs,
        "best_run": best,
        "epsilon": model.describe(),
        "log_star": model.log_star_variant,
        "biconnected_only": args.biconnected_only,
    }
    report = build_report(g, info, model, source=args.graph, config=config_echo, runs=runs,
                          ranges=ranges, cover=cover if args.emit_cover else None)
    text = dumps_json(report) if args.format == "json" else dumps_csv(report)
    _emit(text, args.out)
    if args.cover_out:
        with open(args.cover_out, "w", encoding="utf-8") as fh:
            dump_cover(cover, g, fh)
    return 0


# -- generate ------------------------------------------------------------------------

def parse_plant(text: str, directed: bool, model: str):
    plan = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in item:
            raise UsageError(f"plant entry {item!r} must look like motif=value")
        name, value = item.rsplit("=", 1)
        try:
            m = resolve_motif(name, directed)
        except (ValueError, SubcoverError) as exc:
            raise UsageError(str(exc)) from None
        try:
            target = float(value)
        except ValueError:
            raise UsageError(f"bad value {value!r} for {name}") from None
        if target <= 0:
            raise InfeasibleSpecError(f"{name}={value} plants nothing; values must be positive")
        if model == "uniform" and target != int(target):
            raise UsageError(f"uniform plantings need integer counts, got {value}")
        plan.append((m, int(target) if model == "uniform" else target))
    if not plan:
        raise UsageError("empty --plant specification")
    return plan


def cmd_generate(args) -> int:
    plan = parse_plant(args.plant, args.directed, args.model)
    spec = PlantSpec(args.n, args.directed, plan, args.seed)
    result = realize_uniform_cover(spec) if args.model == "uniform" else generate_bjr(spec)
    with open(args.out_graph, "w", encoding="utf-8") as fh:
        write_edge_list(result.graph, fh)
    if args.out_cover:
        with open(args.out_cover, "w", encoding="utf-8") as fh:
            dump_cover(result.planted, result.graph, fh)
    counts = ", ".join(f"{k}={n}" for k, n in result.counts.items())
    print(f"N={result.graph.n} E={result.graph.m} collisions={result.collisions} planted: {counts}")
    return 0


# -- score ---------------------------------------------------------------------------

def cmd_score(args) -> int:
    g = read_edge_list(args.graph, directed=args.directed)
    if g.m == 0:
        raise SubcoverError(f"{args.graph}: graph has no edges")
    cover = read_cover(args.cover, g)
    model = CostModel.parse(args.epsilon, args.log_star)
    catalog = MotifCatalog([motif_from_id(k) for k in cover.counts.counts], g.directed).with_edge_motif()
    info = information_report(g, cover, catalog, model)
    config_echo = {"cover": args.cover, "epsilon": model.describe(), "log_star": model.log_star_variant}
    report = build_report(g, info, model, source=args.graph, config=config_echo, command="score")
    text = dumps_json(report) if args.format == "json" else dumps_csv(report)
    _emit(text, args.out)
    return 0


# -- wiring ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="subcover", description="Motif analysis through minimal-information subgraph covers.")
    p.add_argument("--version", action="version", version=f"subcover {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="generate a candidate motif catalog")
    c.add_argument("--directed", action="store_true")
    c.add_argument("--max-size", type=int, required=True)
    c.add_argument("--filter", choices=["connected", "biconnected"], default="connected")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    a = sub.add_parser("analyze", help="find a low-information subgraph cover")
    a.add_argument("graph")
    a.add_argument("--directed", action="store_true")
    grp = a.add_mutually_exclusive_group()
    grp.add_argument("--candidates", help="catalog file")
    grp.add_argument("--max-size", type=int, default=None)
    a.add_argument("--biconnected-only", action="store_true")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--restarts", type=int, default=5)
    a.add_argument("--runs", type=int, default=1)
    a.add_argument("--epsilon", default="edge-list", help="edge-list, zero or const:<bits>")
    a.add_argument("--log-star", choices=["rissanen", "plain"], default="rissanen")
    a.add_argument("--emit-cover", action="store_true", help="embed the cover in the report")
    a.add_argument("--cover-out", help="also write the cover JSON to this file")
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    gen = sub.add_parser("generate", help="sample a graph with a planted cover")
    gen.add_argument("--model", choices=["uniform", "bjr"], default="uniform")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--plant", required=True, help='e.g. "triangle=50,claw=100,edge=200"')
    gen.add_argument("--directed", action="store_true")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-graph", required=True)
    gen.add_argument("--out-cover")
    gen.set_defaults(func=cmd_generate)

    s = sub.add_parser("score", help="evaluate a given cover")
    s.add_argument("graph")
    s.add_argument("cover")
    s.add_argument("--directed", action="store_true")
    s.add_argument("--epsilon", default="edge-list")
    s.add_argument("--log-star", choices=["rissanen", "plain"], default="rissanen")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_score)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "analyze":
        if args.max_size is None and not args.candidates:
            args.max_size = 3
        if args.runs < 1 or args.restarts < 1:
            parser.error("--runs and --restarts must be positive")
    try:
        return args.func(args)
    except SubcoverError as exc:
        code, msg = exc.exit_code, str(exc)
    except (UsageError, ValueError) as exc:
        code, msg = 1, str(exc)
    except OSError as exc:
        code, msg = 2, str(exc)
    print(f"subcover: error: {msg}", file=sys.stderr)
    return code

if __name__ == "__main__":
    sys.exit(main())
