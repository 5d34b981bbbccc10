"""Genetic path selection over a graded network.

Fitness of a path is its share of the population's total available
bandwidth, where a path's available bandwidth is its bottleneck: the
smallest per-link surplus of utility over the demand's required bandwidth,
or 0 if any link has no surplus. The elite, carried unchanged through every
generation, is the shortest enumerated path whose links all have surplus.

RNG consumption order is fixed so that a seed reproduces a trace exactly:
initial candidate draws, then per generation and per open slot one operator
draw followed by that operator's own draws.
"""

from __future__ import annotations

import bisect
import itertools
import random
from dataclasses import dataclass, field, replace

from .errors import DegenerateWheelError, EmptyPoolError, NoRouteError
from .grading import GradedSubgraph
from .paths import PathPool, hop_count
from .topology import Demand, available_bandwidth


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 5
    initial_candidates: int = 10
    generations: int = 5
    crossover_rate: float = 0.95
    mutation_rate: float = 0.05
    selection_floor: float = 0.5
    seed: int = 0
    crossover: str = "multipoint"  # or "single"

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.population_size > self.initial_candidates:
            raise ValueError("population_size must not exceed initial_candidates")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_rate", "mutation_rate", "selection_floor"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.crossover_rate + self.mutation_rate > 1 + 1e-12:
            raise ValueError("crossover_rate + mutation_rate must be <= 1")
        if self.crossover not in ("multipoint", "single"):
            raise ValueError(f"unknown crossover kind {self.crossover!r}")


@dataclass(frozen=True)
class FitnessRecord:
    label: str
    path: tuple
    nodes_visited: int
    ab: float
    fitness: float
    probability: float  # as reported; 1 for the elite
    elite: bool = False
    # what final selection compares: equals `probability` except for the elite,
    # which gets its running-total value (1 if feasible, else 0)
    raw_probability: float = 0.0


@dataclass(frozen=True)
class GenerationReport:
    index: int
    records: tuple

    @property
    def elite(self) -> FitnessRecord:
        return next(r for r in self.records if r.elite)


@dataclass(frozen=True)
class RouteResult:
    path: tuple
    hop_count: int
    bottleneck_ab: float
    probability: float = 0.0
    label: str = ""
    trace: tuple = field(default=(), compare=False)


# --- fitness ---------------------------------------------------------------

def path_available_bandwidth(path, graph, demand: Demand) -> float:
    """Bottleneck available bandwidth of a path, 0 if any link is saturated.

    ``graph`` is a Topology or GradedSubgraph; every consecutive pair must be linked.
    """
    worst = float("inf")
    for a, b in zip(path, path[1:]):
        link = graph.link(a, b)
        if link is None:
            raise ValueError(f"no link {a}-{b} on path {path}")
        ab = available_bandwidth(link, demand)
        if ab <= 0:
            return 0.0
        worst = min(worst, ab)
    return worst if worst != float("inf") else 0.0


def fitness_from_ab(abs_):
    total = sum(abs_)
    if total <= 0:
        return [0.0] * len(abs_)
    return [ab / total for ab in abs_]


def fitness(population, graph, demand: Demand):
    if not population:
        raise ValueError("population must be non-empty")
    return fitness_from_ab([path_available_bandwidth(p, graph, demand) for p in population])


def selection_probability(fitnesses, elite_index=None):
    """Probabilities normalised over the non-elite members; the elite reports 1."""
    rest = sum(f for i, f in enumerate(fitnesses) if i != elite_index)
    out = []
    for i, f in enumerate(fitnesses):
        if i == elite_index:
            out.append(1.0)
        else:
            out.append(f / rest if rest > 0 else 0.0)
    return out


def running_probability(fitnesses):
    """Each fitness over the running total of the rows up to and including it.

    The first row with positive fitness always gets 1; this is the value the
    elite carries into final selection.
    """
    out, total = [], 0.0
    for f in fitnesses:
        total += f
        out.append(f / total if total > 0 else 0.0)
    return out


# --- selection -------------------------------------------------------------

def roulette_index(weights, rng: random.Random) -> int:
    """Index drawn with probability proportional to its (non-negative) weight."""
    cumulative = list(itertools.accumulate(weights))
    if not cumulative or cumulative[-1] <= 0:
        raise DegenerateWheelError("roulette wheel has no positive weight")
    spin = rng.random() * cumulative[-1]
    i = bisect.bisect_right(cumulative, spin)
    # zero-width slices can never be hit; guard the float edge at the end
    while weights[min(i, len(weights) - 1)] <= 0:
        i -= 1
    return min(i, len(weights) - 1)


def roulette_select(records, rng: random.Random, weight=lambda r: r.fitness):
    return records[roulette_index([weight(r) for r in records], rng)]


def initial_population(pool: PathPool, config: GaConfig, rng: random.Random, elite=None):
    """Seed a population from the pool.

    ``initial_candidates`` distinct paths are drawn with weight 1/hops, the
    ``population_size`` shortest are kept, and the elite (default: the first
    path of the shortest group) is forced in at position 0.
    Returns ``(population, candidates)``.
    """
    if not len(pool):
        raise EmptyPoolError("empty path pool")
    if elite is None:
        elite = pool.shortest[0]
    paths = list(pool.paths)
    if len(paths) <= config.initial_candidates:
        candidates = paths
    else:
        remaining = paths
        weights = [1.0 / hop_count(p) for p in remaining]
        candidates = []
        for _ in range(config.initial_candidates):
            i = roulette_index(weights, rng)
            candidates.append(remaining[i])
            remaining = remaining[:i] + remaining[i + 1:]
            weights = weights[:i] + weights[i + 1:]
    others = sorted((p for p in candidates if p != elite), key=lambda p: (len(p), p))
    population = [elite] + others[: config.population_size - 1]
    return population, candidates


# --- operators -------------------------------------------------------------

def _follow(gene, from_seg, to_seg, blocked):
    """Chase the segment mapping from ``gene`` until it leaves ``blocked``."""
    index = {g: i for i, g in enumerate(from_seg)}
    for _ in range(len(from_seg) + 1):
        if gene not in blocked:
            return gene
        gene = to_seg[index[gene]]
    return None


def pmx(p1, p2, lo: int, hi: int):
    """Partially mapped crossover exchanging ``p[lo:hi]`` between the parents.

    Works for parents that are not permutations of each other: genes pushed
    out of one child are moved into the other, so each child stays
    duplicate-free and the two children together carry the parents' genes.
    For permutation parents this is textbook PMX.
    """
    n = len(p1)
    if len(p2) != n:
        raise ValueError("PMX needs equal-length parents")
    if p1[0] != p2[0] or p1[-1] != p2[-1]:
        raise ValueError("PMX parents must share endpoints")
    if not 1 <= lo < hi <= n - 1:
        raise ValueError(f"crossover sites {lo}:{hi} must lie strictly inside the path")

    seg1, seg2 = p1[lo:hi], p2[lo:hi]
    in1, in2 = set(seg1), set(seg2)
    outside = [i for i in range(1, n - 1) if not lo <= i < hi]
    out1 = [p1[i] for i in outside]
    out2 = [p2[i] for i in outside]
    shared = set(out1) & set(out2)
    must1 = [g for g in out2 if g in in1]  # p2 genes displaced by seg1 in child2
    must2 = [g for g in out1 if g in in2]  # p1 genes displaced by seg2 in child1
    free1 = [g for g in out1 if g not in in2 and g not in shared]
    free2 = [g for g in out2 if g not in in1 and g not in shared]

    moved_to_1 = free2[: max(0, len(must2) - len(must1))]
    moved_to_2 = free1[: max(0, len(must1) - len(must2))]

    def build(parent, seg_from, seg_to, blocked, needed, evict):
        child = list(parent)
        child[lo:hi] = seg_to
        needed = list(needed)
        holes = []
        for i in outside:
            gene = parent[i]
            if gene in blocked:
                target = _follow(gene, seg_to, seg_from, blocked)
                if target in needed:
                    child[i] = target
                    needed.remove(target)
                    continue
                holes.append(i)
            elif gene in evict:
                holes.append(i)
        for i, gene in zip(holes, needed):
            child[i] = gene
        return tuple(child)

    child1 = build(p1, seg1, seg2, in2, must1 + moved_to_1, set(moved_to_2))
    child2 = build(p2, seg2, seg1, in1, must2 + moved_to_2, set(moved_to_1))
    return child1, child2


def multipoint_crossover(p1, p2, rng: random.Random):
    """PMX at two uniformly drawn interior sites; identity for paths with no interior."""
    if len(p1) != len(p2):
        raise ValueError("crossover partners must have equal length")
    n = len(p1)
    if n < 3:
        return tuple(p1), tuple(p2)
    lo, hi = sorted(rng.sample(range(1, n), 2))
    return pmx(p1, p2, lo, hi)


def single_point_crossover(p1, p2, rng: random.Random):
    """Head of one parent joined to the tail of the other; may repeat nodes."""
    if len(p1) != len(p2):
        raise ValueError("crossover partners must have equal length")
    n = len(p1)
    if n < 3:
        return tuple(p1), tuple(p2)
    cut = rng.randrange(1, n - 1)
    return tuple(p1[:cut] + p2[cut:]), tuple(p2[:cut] + p1[cut:])


def insertion_mutation(path, graded: GradedSubgraph, rng: random.Random):
    """Insert a common neighbour into one randomly chosen gap, if any exists."""
    path = tuple(path)
    if len(path) < 2:
        return path
    i = rng.randrange(len(path) - 1)
    a, b = path[i], path[i + 1]
    adjacency = graded.adjacency
    if a not in adjacency or b not in adjacency:
        return path
    options = sorted((adjacency[a] & adjacency[b]) - set(path))
    if not options:
        return path
    return path[: i + 1] + (rng.choice(options),) + path[i + 1:]


def validate(path, graded: GradedSubgraph, demand: Demand | None = None) -> bool:
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    if demand is not None and (path[0] != demand.source or path[-1] != demand.destination):
        return False
    if any(v not in graded.admitted for v in path):
        return False
    return all(graded.has_link(a, b) for a, b in zip(path, path[1:]))


# --- engine ----------------------------------------------------------------

class _Labels:
    """C1, C2, ... by pool position; paths found later get the next free number."""

    def __init__(self, pool: PathPool):
        self._ids = {p: f"C{i}" for i, p in enumerate(pool.paths, start=1)}

    def __call__(self, path):
        if path not in self._ids:
            self._ids[path] = f"C{len(self._ids) + 1}"
        return self._ids[path]


def _rank(path, ab):
    """Elite preference: feasible, fewest hops, widest bottleneck, lexicographic."""
    return (ab <= 0, len(path), -ab, path)


def make_report(index, population, graded, demand, labels) -> GenerationReport:
    """Score a population whose first member is the elite."""
    abs_ = [path_available_bandwidth(p, graded, demand) for p in population]
    fits = fitness_from_ab(abs_)
    probs = selection_probability(fits, 0)
    raw_elite = running_probability(fits)[0]
    records = tuple(
        FitnessRecord(
            label=labels(p),
            path=p,
            nodes_visited=hop_count(p),
            ab=ab,
            fitness=f,
            probability=pr,
            elite=(i == 0),
            raw_probability=raw_elite if i == 0 else pr,
        )
        for i, (p, ab, f, pr) in enumerate(zip(population, abs_, fits, probs))
    )
    return GenerationReport(index, records)


class PathSelectionGA:
    """One GA run; owns its RNG and is not meant to be shared across threads."""

    def __init__(self, pool: PathPool, graded: GradedSubgraph, demand: Demand,
                 config: GaConfig = GaConfig(), rng: random.Random | None = None):
        if not len(pool):
            raise EmptyPoolError("empty path pool")
        self.pool = pool
        self.graded = graded
        self.demand = demand
        self.config = config
        self.rng = rng if rng is not None else random.Random(config.seed)
        self.labels = _Labels(pool)
        self.size = min(config.population_size, len(pool))
        self._ab_cache = {}

    def ab(self, path) -> float:
        if path not in self._ab_cache:
            self._ab_cache[path] = path_available_bandwidth(path, self.graded, self.demand)
        return self._ab_cache[path]

    def _pick_elite(self):
        """Shortest pool path whose links all have spare bandwidth, widest first."""
        return min(self.pool.paths, key=lambda p: _rank(p, self.ab(p)))

    def _select_from_pool(self, taken):
        """Roulette over the pool with weight 1/hops, skipping paths already placed."""
        paths = self.pool.paths
        weights = [0.0 if p in taken else 1.0 / hop_count(p) for p in paths]
        return paths[roulette_index(weights, self.rng)]

    def _crossover(self, report: GenerationReport):
        members = {}
        for r in report.records:
            if r.fitness > 0:
                members.setdefault(r.path, r.fitness)
        by_len = {}
        for p, f in members.items():
            by_len.setdefault(len(p), []).append((p, f))
        eligible = [(p, f) for group in by_len.values() if len(group) >= 2 for p, f in group]
        if not eligible:
            return None
        first = eligible[roulette_index([f for _, f in eligible], self.rng)][0]
        partners = [(p, f) for p, f in by_len[len(first)] if p != first]
        second = partners[roulette_index([f for _, f in partners], self.rng)][0]
        op = multipoint_crossover if self.config.crossover == "multipoint" else single_point_crossover
        return op(first, second, self.rng)

    def _mutate(self, report: GenerationReport):
        """Mutated copy of a fitness-roulette pick, or None if the insertion was a no-op."""
        records = report.records
        if any(r.fitness > 0 for r in records):
            parent = roulette_select(records, self.rng).path
        else:
            parent = self.rng.choice(records).path
        child = insertion_mutation(parent, self.graded, self.rng)
        return None if child == parent else child

    def _next_population(self, report: GenerationReport, elite):
        cfg = self.config
        population = [elite]
        while len(population) < self.size:
            draw = self.rng.random()
            produced = []
            if draw < cfg.crossover_rate:
                children = self._crossover(report)
                if children is not None:
                    produced = [c for c in children if validate(c, self.graded, self.demand)]
            elif draw < cfg.crossover_rate + cfg.mutation_rate:
                child = self._mutate(report)
                if child is not None and validate(child, self.graded, self.demand):
                    produced = [child]
            added = False
            for child in dict.fromkeys(produced):
                if child not in population and len(population) < self.size:
                    population.append(child)
                    added = True
            if not added:
                population.append(self._select_from_pool(population))
        return population

    def run(self, on_generation=None) -> RouteResult:
        elite = self._pick_elite()
        population, _ = initial_population(self.pool, self.config, self.rng, elite=elite)
        trace = []
        for g in range(1, self.config.generations + 1):
            if g > 1:
                population = self._next_population(trace[-1], elite)
            report = make_report(g, population, self.graded, self.demand, self.labels)
            trace.append(report)
            if on_generation is not None:
                on_generation(report)
        result = final_selection(trace[-1], self.config.selection_floor)
        return replace(result, trace=tuple(trace))


def evolve(pool: PathPool, graded: GradedSubgraph, demand: Demand,
           config: GaConfig = GaConfig(), rng: random.Random | None = None,
           on_generation=None) -> RouteResult:
    return PathSelectionGA(pool, graded, demand, config, rng).run(on_generation)


def final_selection(last: GenerationReport, floor: float = 0.5) -> RouteResult:
    """Fewest hops among records whose probability clears ``floor``.

    Ties go to higher probability, then wider bottleneck, then path order.
    If nothing clears the floor, the feasible record with the highest
    probability wins.
    """
    feasible = [r for r in last.records if r.ab > 0]
    if not feasible:
        raise NoRouteError("no feasible chromosome in the final generation")
    cleared = [r for r in feasible if r.raw_probability > floor]
    if cleared:
        best = min(cleared, key=lambda r: (r.nodes_visited, -r.raw_probability, -r.ab, r.path))
    else:
        best = min(feasible, key=lambda r: (-r.raw_probability, r.nodes_visited, -r.ab, r.path))
    return RouteResult(best.path, best.nodes_visited, best.ab, best.raw_probability, best.label)
