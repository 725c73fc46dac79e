"""Greedy minimization of the total information of a subgraph cover.

Each step evaluates every candidate motif: a randomized greedy packing of its
instances that are edge-disjoint on still-uncovered edges, trimmed to the
prefix with the best efficiency (bits per newly covered edge).  Motifs whose
step would raise the partial-cover cost are discarded; the most efficient
survivor is added.  Uncovered edges are costed as single-edge subgraphs, so
the partial cost starts at the edge-cover benchmark and never increases.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ._kernels import any_uncovered, greedy_pack
from .enumeration import (DEFAULT_INSTANCE_CAP, Instance, InstanceTable, collect_instances,
                          find_instances, instance_from_edges, worker_count)
from .errors import DomainError
from .graph import Graph
from .information import (DEFAULT_MODEL, RISSANEN_C0, CostModel, CoverSummary,
                          information_report, placements)
from .motifs import MotifCatalog, MotifClass, canonicalizer, edges_to_mask

_LN2 = math.log(2.0)


@dataclass
class SolverConfig:
    catalog: MotifCatalog
    seed: int = 0
    restarts_per_step: int = 5
    model: CostModel = DEFAULT_MODEL
    instance_cap: int = DEFAULT_INSTANCE_CAP
    biconnected_only: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.restarts_per_step < 1:
            raise ValueError("restarts_per_step must be positive")
        if not self.catalog.has_edge_motif():
            raise ValueError("the candidate catalog must contain the single-edge motif")

    def candidates(self) -> list[MotifClass]:
        out = [m for m in self.catalog if m.connected]
        if self.biconnected_only:
            out = [m for m in out if m.biconnected]
        edge = self.catalog.edge_motif
        if edge not in out:
            out.insert(0, edge)
        return out


@dataclass
class Step:
    motif: str
    count: int
    new_edges: int
    sigma_eff: float
    total_after: float


@dataclass
class Cover:
    """Instances plus their motif counts and covered edge keys."""

    instances: list[Instance]
    counts: CoverSummary
    covered: set
    steps: list[Step] = field(default_factory=list)
    seed: int | None = None

    @classmethod
    def from_instances(cls, g: Graph, instances) -> "Cover":
        instances = list(dict.fromkeys(instances))
        counts = Counter(inst.motif for inst in instances)
        covered = {e for inst in instances for e in inst.edges}
        return cls(instances, CoverSummary(g.n, g.directed, dict(counts)), covered)

    def is_complete(self, g: Graph) -> bool:
        return len(self.covered) == g.m and all(e in g.edge_id for e in self.covered)

    def uncovered(self, g: Graph) -> list:
        return [e for e in g.edges if e not in self.covered]

    def by_motif(self, key: str) -> list[Instance]:
        return [inst for inst in self.instances if inst.motif == key]


def edge_cover(g: Graph) -> Cover:
    from .motifs import single_edge_motif
    key = single_edge_motif(g.directed).canonical_id
    return Cover.from_instances(g, [instance_from_edges(key, [e]) for e in g.edges])


# -- efficiency -------------------------------------------------------------------

def step_cost(m: MotifClass, k: int, N: int, model: CostModel = DEFAULT_MODEL) -> float:
    """``Sigma(S_m) = S(m, k) + eps(m) + log*(k)`` for a step of ``k`` instances."""
    return model.motif_cost(m, k, N)


def efficiency(step_set, cover: Cover, g: Graph, model: CostModel = DEFAULT_MODEL,
               catalog: MotifCatalog | None = None) -> float:
    """Bits per newly covered edge of a set of instances of one motif."""
    step_set = list(step_set)
    if not step_set:
        raise DomainError("efficiency of an empty instance set is undefined")
    keys = {inst.motif for inst in step_set}
    if len(keys) != 1:
        raise ValueError("a step set holds instances of a single motif")
    key = keys.pop()
    from .motifs import motif_from_id
    m = catalog[key] if catalog is not None else motif_from_id(key)
    new = {e for inst in step_set for e in inst.edges} - cover.covered
    if not new:
        raise DomainError("the step set covers no new edge; efficiency is undefined")
    return step_cost(m, len(step_set), g.n, model) / len(new)


def _log_star_vec(k: np.ndarray, variant: str) -> np.ndarray:
    total = np.full(k.shape, math.log2(RISSANEN_C0) if variant == "rissanen" else 0.0)
    term = np.log2(k.astype(float))
    while np.any(term > 0):
        pos = term > 0
        total[pos] += term[pos]
        term = np.where(pos, np.log2(np.where(pos, term, 1.0)), 0.0)
    return total


def _best_prefix(m: MotifClass, N: int, gains: np.ndarray, model: CostModel) -> int:
    """Prefix length minimizing bits per new edge (``gains`` sorted descending)."""
    K = len(gains)
    P = float(placements(m, N))
    i = np.arange(K, dtype=float)
    ln_falling = np.cumsum(math.log(P) + np.log1p(-i / P))
    k = i + 1
    bits = (ln_falling - gammaln(k + 1)) / _LN2 + model.epsilon(m) + _log_star_vec(k, model.log_star_variant)
    sigma = bits / np.cumsum(gains)
    return int(np.argmin(sigma)) + 1


# -- per-motif optimal instance sets ------------------------------------------------

@dataclass
class Candidate:
    index: int
    motif: MotifClass
    rows: np.ndarray          # (k, |E(m)|) edge ids of the chosen instances
    new_edges: int
    sigma: float


class _Pool:
    """Per-motif instance rows, pruned as edges become covered."""

    def __init__(self, table: InstanceTable | None, motif: MotifClass):
        self.motif = motif
        self.overflow = table is not None and table.overflow
        self.rows = None if table is None else table.edges

    def prune(self, covered: np.ndarray) -> None:
        if self.rows is not None and len(self.rows):
            keep = any_uncovered(self.rows, covered)
            if not keep.all():
                self.rows = self.rows[keep]


def _pack_stream(g: Graph, m: MotifClass, covered: np.ndarray):
    """Greedy packing in enumeration order for motifs too numerous to store."""
    used = set()
    rows, gains = [], []
    covered_keys = {g.edges[e] for e in np.flatnonzero(covered)}
    for inst in find_instances(g, m, covered_keys):
        ids = [g.edge_id[e] for e in inst.edges]
        fresh = [e for e in ids if not covered[e]]
        if any(e in used for e in fresh):
            continue
        used.update(fresh)
        rows.append(ids)
        gains.append(len(fresh))
    return np.asarray(rows, dtype=np.int32).reshape(-1, m.edge_count), np.asarray(gains, dtype=np.int64)


def optimal_instance_set(m: MotifClass, covered: np.ndarray, rows: np.ndarray, N: int,
                         rng: np.random.Generator, restarts: int = 5,
                         model: CostModel = DEFAULT_MODEL) -> tuple[np.ndarray, int, float]:
    """Best of ``restarts`` randomized greedy packings of ``rows``.

    ``rows`` holds instance edge ids; only rows with an uncovered edge are
    eligible and chosen rows are disjoint on uncovered edges.  Returns
    ``(chosen rows, newly covered edges, efficiency)``; an empty selection
    has efficiency ``inf``.
    """
    empty = (rows[:0], 0, math.inf)
    if len(rows) == 0:
        return empty
    used = np.zeros(covered.shape[0], dtype=np.bool_)
    best = empty
    degree = None
    for r in range(restarts):
        noise = rng.random(len(rows))
        if r % 2 == 0:
            if degree is None:
                degree = _conflict_degree(rows, covered)
            order = np.lexsort((noise, degree))
        else:
            order = np.argsort(noise, kind="stable")
        picked, gains = greedy_pack(rows, order, covered, used)
        if len(picked) == 0:
            continue
        cand = _trim(m, rows, picked, gains, N, model)
        if cand[2] < best[2]:
            best = cand
    return best


def _conflict_degree(rows, covered):
    """Number of other instances sharing an uncovered edge, per instance."""
    free = ~covered[rows]
    load = np.bincount(rows[free], minlength=covered.shape[0])
    return np.where(free, load[rows], 0).sum(axis=1) - free.sum(axis=1)


def _trim(m, rows, picked, gains, N, model):
    desc = np.argsort(-gains, kind="stable")
    picked, gains = picked[desc], gains[desc]
    k = _best_prefix(m, N, gains, model)
    new = int(gains[:k].sum())
    return rows[picked[:k]], new, step_cost(m, k, N, model) / new


def optimal_instance_set_for(g: Graph, m: MotifClass, cover: Cover, config: SolverConfig,
                             rng: np.random.Generator | None = None) -> list[Instance]:
    """Instance-level convenience wrapper around :func:`optimal_instance_set`."""
    covered = np.zeros(g.m, dtype=np.bool_)
    for e in cover.covered:
        covered[g.edge_id[e]] = True
    rows = collect_instances(g, [m], cap=config.instance_cap, workers=1)[0].edges
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    chosen, _, _ = optimal_instance_set(m, covered, rows, g.n, rng, config.restarts_per_step,
                                        config.model)
    return [instance_from_edges(m.canonical_id, (g.edges[e] for e in row)) for row in chosen]


# -- the greedy loop -------------------------------------------------------------------

class _Ledger:
    """Motif counts of the partial cover plus the uncovered-edge count."""

    def __init__(self, g: Graph, edge: MotifClass, model: CostModel):
        self.N = g.n
        self.edge = edge
        self.model = model
        self.counts: dict[str, int] = {}
        self.uncovered = g.m

    def _edge_total(self, extra_covered=0, extra_edges=0):
        return self.counts.get(self.edge.canonical_id, 0) + extra_edges + self.uncovered - extra_covered

    def total(self, catalog) -> float:
        t = self.model.log_star(self.N)
        for key, n in self.counts.items():
            if key != self.edge.canonical_id and n:
                t += self.model.motif_cost(catalog[key], n, self.N)
        return t + self.model.motif_cost(self.edge, self._edge_total(), self.N)

    def delta(self, m: MotifClass, k: int, new_edges: int) -> float:
        """Change of the partial-cover cost if ``k`` instances of ``m`` covering
        ``new_edges`` fresh edges were added."""
        if m.canonical_id == self.edge.canonical_id:
            return 0.0
        n = self.counts.get(m.canonical_id, 0)
        cost = self.model.motif_cost
        d = cost(m, n + k, self.N) - cost(m, n, self.N)
        d += cost(self.edge, self._edge_total(new_edges), self.N) - cost(self.edge, self._edge_total(), self.N)
        return d

    def add(self, m: MotifClass, k: int, new_edges: int) -> None:
        self.counts[m.canonical_id] = self.counts.get(m.canonical_id, 0) + k
        self.uncovered -= new_edges


def prepare_tables(g: Graph, config: SolverConfig) -> list[InstanceTable]:
    """Enumerate instances of every non-edge candidate once (reusable across runs)."""
    motifs = [m for m in config.candidates() if m.size > 2]
    return collect_instances(g, motifs, cap=config.instance_cap, workers=config.workers)


def greedy_cover(g: Graph, config: SolverConfig, tables: list[InstanceTable] | None = None):
    """Run the greedy algorithm; returns ``(Cover, InformationReport)``."""
    if g.m < 1:
        raise DomainError("cannot cover a graph without edges")
    model = config.model
    candidates = config.candidates()
    catalog = MotifCatalog(candidates, g.directed, kind=config.catalog.kind)
    edge = catalog.edge_motif
    if tables is None:
        tables = prepare_tables(g, config)
    by_id = {t.motif.canonical_id: t for t in tables}

    pools: list[_Pool] = []
    for m in candidates:
        if m.size == 2:
            rows = _two_vertex_rows(g, m)
            pools.append(_Pool(InstanceTable(m, rows), m))
            continue
        table = by_id.get(m.canonical_id)
        if table is None or (len(table) == 0 and not table.overflow):
            continue  # no instances now, none later
        pools.append(_Pool(table, m))

    covered = np.zeros(g.m, dtype=np.bool_)
    ledger = _Ledger(g, edge, model)
    picks: list[tuple[MotifClass, np.ndarray]] = []
    steps: list[Step] = []
    workers = worker_count() if config.workers is None else max(1, config.workers)
    step_no = 0
    previous = ledger.total(catalog)

    def evaluate(idx):
        pool = pools[idx]
        rng = np.random.default_rng([config.seed, step_no, idx])
        if pool.overflow:
            rows, gains = _pack_stream(g, pool.motif, covered)
            if len(rows) == 0:
                return None
            chosen, new, sigma = _trim(pool.motif, rows, np.arange(len(rows)), gains, g.n, model)
        else:
            chosen, new, sigma = optimal_instance_set(pool.motif, covered, pool.rows, g.n, rng,
                                                      config.restarts_per_step, model)
        if new == 0:
            return None
        return Candidate(idx, pool.motif, chosen, new, sigma)

    while ledger.uncovered > 0:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(evaluate, range(len(pools))))
        else:
            results = [evaluate(i) for i in range(len(pools))]
        admissible = [c for c in results
                      if c is not None and ledger.delta(c.motif, len(c.rows), c.new_edges) <= 0.0]
        if not admissible:
            raise RuntimeError("no admissible motif; the single-edge step should always qualify")
        best = min(admissible, key=lambda c: (c.sigma, c.motif.size, c.motif.canonical_id))
        covered[best.rows.ravel()] = True
        ledger.add(best.motif, len(best.rows), best.new_edges)
        picks.append((best.motif, best.rows))
        total = ledger.total(catalog)
        assert total <= previous + 1e-9 * max(1.0, abs(previous)), "partial cost increased"
        previous = total
        steps.append(Step(best.motif.canonical_id, len(best.rows), best.new_edges, best.sigma, total))
        for pool in pools:
            pool.prune(covered)
        step_no += 1

    instances = []
    for m, rows in picks:
        for row in rows:
            instances.append(instance_from_edges(m.canonical_id, (g.edges[e] for e in row)))
    cover = Cover(instances, CoverSummary(g.n, g.directed, dict(ledger.counts)),
                  {e for inst in instances for e in inst.edges}, steps, config.seed)
    assert cover.is_complete(g)
    return cover, information_report(g, cover, catalog, model)


def _two_vertex_rows(g: Graph, m: MotifClass) -> np.ndarray:
    """Instances of the single edge (or, directed, the mutual arc pair)."""
    if m.edge_count == 1:
        return np.arange(g.m, dtype=np.int32).reshape(-1, 1)
    rows = [(i, g.edge_id[(v, u)]) for i, (u, v) in enumerate(g.edges)
            if u < v and (v, u) in g.edge_id]
    return np.asarray(rows, dtype=np.int32).reshape(-1, 2)


# -- role sequences ------------------------------------------------------------------

def role_sequence(cover: Cover, g: Graph) -> dict[int, Counter]:
    """Per vertex, a multiset of ``(motif id, orbit index)`` attachments."""
    if not cover.is_complete(g):
        raise DomainError("role sequences are defined for complete covers only")
    from .motifs import motif_from_id
    roles: dict[int, Counter] = {v: Counter() for v in range(g.n)}
    for inst in cover.instances:
        m = motif_from_id(inst.motif)
        verts = inst.vertices
        local = {v: i for i, v in enumerate(verts)}
        mask = edges_to_mask(m.size, [(local[u], local[v]) for u, v in inst.edges], g.directed)
        canon, perm, _ = canonicalizer(m.size, g.directed).classify(mask)
        if canon != m.mask:
            raise DomainError(f"instance on {verts} is not a {inst.motif}")
        orbit_of = m.orbit_of
        for i, v in enumerate(verts):
            roles[v][(inst.motif, orbit_of[perm[i]])] += 1
    return roles
