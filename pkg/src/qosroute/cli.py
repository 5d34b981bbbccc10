"""Command-line front end.

    qosroute route  [topology] [demand] [thresholds] [GA settings] [--kb FILE] [--oracle-check]
    qosroute sweep  ... --seeds 1..100 [--csv FILE] [--jobs N]
    qosroute paths  ...            dump the enumerated path pool
    qosroute generate --random N --density D --seed S

Without --topology or --random the bundled ten-node demo network is used.
Exit status: 0 route found, 2 no route, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib.resources import files

from . import report
from .errors import KnowledgeBaseError, NoRouteError, QosRouteError
from .ga import GaConfig, evolve
from .grading import QosThresholds, grade_nodes
from .kb import KnowledgeBase, KnowledgeEntry, scenario_key
from .oracle import brute_force_optimal
from .paths import enumerate_paths
from .topology import Demand, dump_topology, generate_random_topology, load_topology

EXIT_ROUTE, EXIT_ERROR, EXIT_NO_ROUTE = 0, 1, 2

DEFAULT_THRESHOLDS = QosThresholds(delay_max=0.01, jitter_max=40.0, loss_max=0.08)

log = logging.getLogger("qosroute")


def demo_topology_text() -> str:
    return files("qosroute").joinpath("data/demo10.topo").read_text(encoding="utf-8")


@dataclass(frozen=True)
class RunSpec:
    topology_file: str | None = None
    random_nodes: int | None = None
    density: float = 0.4
    topology_seed: int | None = None  # defaults to the GA seed
    source: int = 0
    destination: int | None = None  # defaults to the last node
    required_bw: float = 4.0e6
    msg_size: float = 12000.0
    thresholds: QosThresholds = DEFAULT_THRESHOLDS
    config: GaConfig = field(default_factory=GaConfig)
    max_hops: int | None = None
    kb: str | None = None
    oracle_check: bool = False
    fmt: str = "text"

    def __post_init__(self):
        if self.topology_file is not None and self.random_nodes is not None:
            raise ValueError("give either a topology file or generator parameters, not both")

    def topology(self):
        if self.random_nodes is not None:
            seed = self.topology_seed if self.topology_seed is not None else self.config.seed
            return generate_random_topology(self.random_nodes, self.density, seed)
        if self.topology_file is not None:
            with open(self.topology_file, encoding="utf-8") as fh:
                return load_topology(fh.read())
        return load_topology(demo_topology_text())

    def demand(self, topology) -> Demand:
        dest = self.destination if self.destination is not None else topology.node_count - 1
        d = Demand(self.source, dest, self.required_bw, self.msg_size)
        d.check_against(topology)
        return d


@dataclass
class RouteOutcome:
    route: object = None  # RouteResult, or None when no route exists
    trace: tuple = ()
    oracle: object = None
    oracle_error: str | None = None
    cached: bool = False
    error: str | None = None

    @property
    def agrees(self):
        if self.oracle is None or self.route is None:
            return None
        return tuple(self.route.path) == tuple(self.oracle.path)


def execute(spec: RunSpec, topology=None, on_generation=None) -> RouteOutcome:
    """Grade, enumerate, evolve and select; consult the knowledge base if configured."""
    topology = topology if topology is not None else spec.topology()
    demand = spec.demand(topology)
    graded = grade_nodes(topology, spec.thresholds, demand)
    out = RouteOutcome()

    if spec.oracle_check:
        try:
            out.oracle = brute_force_optimal(graded, demand, spec.max_hops)
        except NoRouteError as exc:
            out.oracle_error = str(exc)

    store = key = None
    if spec.kb:
        store = KnowledgeBase(spec.kb)
        key = scenario_key(topology, demand, spec.thresholds, spec.config, spec.max_hops)
        hit = store.lookup(key, topology, demand)
        if hit is not None:
            out.route, out.cached = hit.to_route(), True
            return out

    try:
        pool = enumerate_paths(graded, demand, spec.max_hops)
        route = evolve(pool, graded, demand, spec.config, on_generation=on_generation)
    except NoRouteError as exc:
        out.error = str(exc)
        return out
    out.route, out.trace = route, route.trace

    if store is not None:
        try:
            store.store(KnowledgeEntry.from_route(key, route), topology, demand)
        except KnowledgeBaseError as exc:
            log.warning("%s", exc)
    return out


def render(spec: RunSpec, out: RouteOutcome) -> str:
    if spec.fmt == "json":
        doc = {
            "route": report.route_dict(out.route) if out.route else None,
            "cached": out.cached,
            "error": out.error,
            "trace": report.trace_dict(out.trace),
        }
        if spec.oracle_check:
            doc["oracle"] = report.route_dict(out.oracle) if out.oracle else None
            doc["agrees"] = out.agrees
        return report.dumps(doc)
    if spec.fmt == "csv":
        text = report.csv_rows(out.trace)
    else:
        text = "\n".join(report.text_table(r) for r in out.trace)
        if out.trace:
            text += "\n"
    if out.cached:
        text += "knowledge base hit\n"
    text += report.route_line(out.route) + "\n" if out.route else f"no route: {out.error}\n"
    if spec.oracle_check:
        if out.oracle is not None:
            text += "oracle: path " + " ".join(map(str, out.oracle.path))
            text += f" hops={out.oracle.hop_count} agree={'yes' if out.agrees else 'no'}\n"
        else:
            text += f"oracle: no route ({out.oracle_error})\n"
    return text


# --- sweep -----------------------------------------------------------------

SWEEP_FIELDS = ("seed", "status", "ga_path", "ga_hops", "oracle_path", "oracle_hops", "agree", "elite_match_generation")


def _sweep_one(args):
    spec, seed, random_endpoints = args
    import random as _random
    spec = replace(spec, config=replace(spec.config, seed=seed), topology_seed=seed if spec.random_nodes else None,
                   oracle_check=True, kb=None)
    row = dict.fromkeys(SWEEP_FIELDS, "")
    row["seed"] = seed
    try:
        topology = spec.topology()
        if random_endpoints:
            src, dst = _random.Random(seed).sample(range(topology.node_count), 2)
            spec = replace(spec, source=src, destination=dst)
        out = execute(spec, topology)
    except (QosRouteError, ValueError, OSError) as exc:
        row["status"] = f"error: {exc}"
        return row
    if out.oracle is not None:
        row["oracle_path"] = " ".join(map(str, out.oracle.path))
        row["oracle_hops"] = out.oracle.hop_count
    if out.route is None:
        row["status"] = "no-route"
    else:
        row["status"] = "route"
        row["ga_path"] = " ".join(map(str, out.route.path))
        row["ga_hops"] = out.route.hop_count
    if out.agrees is not None:
        row["agree"] = int(out.agrees)
    if out.oracle is not None:
        for rep in out.trace:
            if rep.elite.path == out.oracle.path:
                row["elite_match_generation"] = rep.index
                break
    return row


def sweep(spec: RunSpec, seeds, random_endpoints=False, jobs=1):
    work = [(spec, s, random_endpoints) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_sweep_one, work))
    return [_sweep_one(w) for w in work]


def summarize(rows) -> dict:
    compared = [r for r in rows if r["agree"] != ""]
    agreed = sum(r["agree"] for r in compared)
    matched = [r["elite_match_generation"] for r in rows if r["elite_match_generation"] != ""]
    return {
        "runs": len(rows),
        "routed": sum(r["status"] == "route" for r in rows),
        "no_route": sum(r["status"] == "no-route" for r in rows),
        "errors": sum(r["status"].startswith("error") for r in rows),
        "oracle_no_route": sum(r["oracle_path"] == "" for r in rows),
        "compared": len(compared),
        "agreement": agreed / len(compared) if compared else None,
        "mean_elite_match_generation": sum(matched) / len(matched) if matched else None,
    }


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def summary_text(s) -> str:
    agreement = "n/a" if s["agreement"] is None else f"{s['agreement']:.4f}"
    mean_gen = "n/a" if s["mean_elite_match_generation"] is None else f"{s['mean_elite_match_generation']:.2f}"
    return (
        f"runs={s['runs']} routed={s['routed']} no_route={s['no_route']} errors={s['errors']} "
        f"oracle_no_route={s['oracle_no_route']}\n"
        f"oracle agreement: {agreement} over {s['compared']} comparable runs\n"
        f"mean generation where elite equals oracle route: {mean_gen}\n"
    )


# --- argument parsing ------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _seed_range(text):
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}; use A..B or a,b,c") from None


def _add_run_args(p):
    src = p.add_argument_group("topology")
    one = src.add_mutually_exclusive_group()
    one.add_argument("--topology", metavar="FILE", help="topology file (default: bundled demo)")
    one.add_argument("--random", type=int, metavar="N", help="generate a random N-node topology")
    src.add_argument("--density", type=float, default=0.4, help="extra-link probability for --random")
    src.add_argument("--topology-seed", type=int, help="generator seed (default: --seed)")

    dem = p.add_argument_group("demand")
    dem.add_argument("--source", type=int, default=0)
    dem.add_argument("--dest", type=int, help="destination node (default: last node)")
    dem.add_argument("--required-bw", type=float, default=4.0e6, help="bits/second")
    dem.add_argument("--msg-size", type=float, default=12000.0, help="bits")

    qos = p.add_argument_group("QoS thresholds")
    qos.add_argument("--delay-max", type=float, default=DEFAULT_THRESHOLDS.delay_max, help="seconds")
    qos.add_argument("--jitter-max", type=float, default=DEFAULT_THRESHOLDS.jitter_max, help="milliseconds")
    qos.add_argument("--loss-max", type=float, default=DEFAULT_THRESHOLDS.loss_max, help="fraction")

    ga = p.add_argument_group("genetic algorithm")
    defaults = GaConfig()
    ga.add_argument("--generations", type=int, default=defaults.generations)
    ga.add_argument("--population", type=int, default=defaults.population_size)
    ga.add_argument("--candidates", type=int, default=defaults.initial_candidates)
    ga.add_argument("--crossover-rate", type=float, default=defaults.crossover_rate)
    ga.add_argument("--mutation-rate", type=float, default=defaults.mutation_rate)
    ga.add_argument("--floor", type=float, default=defaults.selection_floor)
    ga.add_argument("--crossover", choices=("multipoint", "single"), default=defaults.crossover)
    ga.add_argument("--seed", type=int, default=defaults.seed)
    ga.add_argument("--max-hops", type=int, help="path length cap (default: node count - 1)")

    p.add_argument("--kb", metavar="FILE", help="knowledge base file")
    p.add_argument("--oracle-check", action="store_true", help="compare with exhaustive search")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")


def build_parser():
    parser = _Parser(prog="qosroute", description="QoS-graded genetic path selection.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_run_args(sub.add_parser("route", help="route one demand and print generation tables"))

    sw = sub.add_parser("sweep", help="route over many seeds and compare with the oracle")
    _add_run_args(sw)
    sw.add_argument("--seeds", type=_seed_range, default=range(1, 101), help="A..B or a,b,c (default 1..100)")
    sw.add_argument("--random-endpoints", action="store_true", help="draw source/destination per seed")
    sw.add_argument("--csv", metavar="FILE", help="write per-seed rows here")
    sw.add_argument("--jobs", type=int, default=1)

    _add_run_args(sub.add_parser("paths", help="dump the enumerated path pool"))

    gen = sub.add_parser("generate", help="write a random topology to stdout")
    gen.add_argument("--random", type=int, required=True, metavar="N")
    gen.add_argument("--density", type=float, default=0.4)
    gen.add_argument("--seed", type=int, default=0)
    return parser


def spec_from_args(a) -> RunSpec:
    config = GaConfig(
        population_size=a.population,
        initial_candidates=a.candidates,
        generations=a.generations,
        crossover_rate=a.crossover_rate,
        mutation_rate=a.mutation_rate,
        selection_floor=a.floor,
        seed=a.seed,
        crossover=a.crossover,
    )
    return RunSpec(
        topology_file=a.topology,
        random_nodes=a.random,
        density=a.density,
        topology_seed=a.topology_seed,
        source=a.source,
        destination=a.dest,
        required_bw=a.required_bw,
        msg_size=a.msg_size,
        thresholds=QosThresholds(a.delay_max, a.jitter_max, a.loss_max),
        config=config,
        max_hops=a.max_hops,
        kb=a.kb,
        oracle_check=a.oracle_check,
        fmt=a.format,
    )


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "generate":
            stdout.write(dump_topology(generate_random_topology(args.random, args.density, args.seed)))
            return EXIT_ROUTE
        spec = spec_from_args(args)
        if args.command == "route":
            out = execute(spec)
            stdout.write(render(spec, out))
            return EXIT_ROUTE if out.route is not None else EXIT_NO_ROUTE
        if args.command == "paths":
            topology = spec.topology()
            demand = spec.demand(topology)
            graded = grade_nodes(topology, spec.thresholds, demand)
            try:
                stdout.write(enumerate_paths(graded, demand, spec.max_hops).dump())
            except NoRouteError as exc:
                stdout.write(f"no route: {exc}\n")
                return EXIT_NO_ROUTE
            return EXIT_ROUTE
        rows = sweep(spec, args.seeds, args.random_endpoints, args.jobs)
        table = sweep_csv(rows)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(table)
        summary = summarize(rows)
        if args.format == "json":
            stdout.write(report.dumps({"summary": summary, "runs": rows}))
        elif args.format == "csv":
            stdout.write(table)
        else:
            stdout.write(summary_text(summary))
        return EXIT_ROUTE
    except (QosRouteError, ValueError, OSError) as exc:
        print(f"qosroute: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
