"""Enumeration of motif instances (non-induced subgraphs) in a host graph.

Connected vertex sets are produced with ESU (each set exactly once, rooted at
its smallest vertex).  For every set the induced edges are read into a local
bitmask; each spanning connected edge subset of that mask is one instance,
classified through :mod:`subcover.motifs` lookup tables.  Distinct instances
have distinct (vertex set, edge subset) pairs, so no deduplication is needed.

A full ESU sweep at 5 or 6 vertices visits every connected set of that size,
which dominates the cost when the catalog only asks for a few large motifs
(a 5-star, say).  Such sizes are served by a direct backtracking matcher
instead; both paths give the same instance sets.
"""

from __future__ import annotations

import os
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import UnsupportedSizeError
from .graph import Graph, edge_key
from .motifs import MotifClass, canonicalizer, pair_list

MAX_ENUM_SIZE = 6
# Sizes from MATCH_MIN_SIZE up with at most MATCH_MAX_TARGETS catalog motifs use
# the backtracking matcher instead of ESU.
MATCH_MIN_SIZE = 5
MATCH_MAX_TARGETS = 4
DEFAULT_INSTANCE_CAP = 10**7

EdgeKey = tuple


@dataclass(frozen=True)
class Instance:
    """One concrete subgraph: ``edges`` are host edge keys, sorted."""

    motif: str
    vertices: tuple[int, ...]
    edges: tuple[EdgeKey, ...]

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.motif == other.motif and self.edges == other.edges

    def __hash__(self):
        return hash((self.motif, self.edges))


def instance_from_edges(motif: str, edges: Iterable[EdgeKey]) -> Instance:
    edges = tuple(sorted(edges))
    verts = tuple(sorted({x for e in edges for x in e}))
    return Instance(motif, verts, edges)


# -- connected vertex sets ----------------------------------------------------

def _sorted_neighbors(g: Graph) -> list[list[int]]:
    return [sorted(s) for s in g.neighbors]


def _esu(nbrs: list[list[int]], nbr_sets: list[set[int]], kmax: int,
         roots: Iterable[int], kmin: int = 1) -> Iterator[tuple[int, ...]]:
    """Yield every connected vertex set of size ``kmin..kmax`` rooted in ``roots``."""
    for v in roots:
        if kmin <= 1:
            yield (v,)
        if kmax < 2:
            continue
        ext = [u for u in nbrs[v] if u > v]
        closed = set(nbr_sets[v])
        closed.add(v)
        yield from _extend([v], ext, closed, v, kmin, kmax, nbrs)


def _extend(sub, ext, closed, root, kmin, kmax, nbrs):
    ext = list(ext)
    last = len(sub) + 1 == kmax
    while ext:
        w = ext.pop()
        new_sub = sub + [w]
        if len(new_sub) >= kmin:
            yield tuple(sorted(new_sub))
        if last:
            continue
        excl = [u for u in nbrs[w] if u > root and u not in closed]
        if ext or excl:
            new_closed = closed.union(nbrs[w])
            yield from _extend(new_sub, ext + excl, new_closed, root, kmin, kmax, nbrs)


def enumerate_connected_vertex_sets(g: Graph, k: int) -> Iterator[tuple[int, ...]]:
    """Every ``k``-set of vertices whose (weakly) induced subgraph is connected,
    each exactly once, as a sorted tuple."""
    if not 2 <= k <= MAX_ENUM_SIZE:
        raise UnsupportedSizeError(f"connected-set enumeration supports 2 <= k <= {MAX_ENUM_SIZE}")
    nbrs = _sorted_neighbors(g)
    return _esu(nbrs, g.neighbors, k, range(g.n), kmin=k)


# -- instance decomposition of one vertex set ----------------------------------

class _Decomposer:
    """Cache: local mask -> [(target index, pair positions)] for one size."""

    def __init__(self, k: int, directed: bool, targets: dict[int, int]):
        self.k = k
        self.directed = directed
        self.pairs = pair_list(k, directed)
        self.top = len(self.pairs) - 1
        self.canon = canonicalizer(k, directed)
        self.targets = targets  # canonical mask -> target index
        self.cache: dict[int, list[tuple[int, tuple[int, ...]]]] = {}

    def parts(self, mask: int):
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        out = []
        top = self.top
        sub = mask
        while sub:
            canon, _, spanning = self.canon.classify(sub)
            if spanning:
                t = self.targets.get(canon)
                if t is not None:
                    pos = tuple(i for i in range(top + 1) if sub >> (top - i) & 1)
                    out.append((t, pos))
            sub = (sub - 1) & mask
        out.reverse()
        self.cache[mask] = out
        return out


def _local_edges(g: Graph, verts: Sequence[int], pairs) -> tuple[int, list[int]]:
    """Local mask of the edges induced on ``verts`` plus host edge id per pair."""
    eid = g.edge_id
    top = len(pairs) - 1
    mask = 0
    ids = [-1] * len(pairs)
    directed = g.directed
    for idx, (i, j) in enumerate(pairs):
        key = (verts[i], verts[j])
        if not directed and key[0] > key[1]:
            key = (key[1], key[0])
        e = eid.get(key)
        if e is not None:
            mask |= 1 << (top - idx)
            ids[idx] = e
    return mask, ids


def _decomposers(g: Graph, motifs: Sequence[MotifClass]) -> dict[int, _Decomposer]:
    by_size: dict[int, dict[int, int]] = {}
    for t, m in enumerate(motifs):
        if m.directed != g.directed:
            raise ValueError(f"motif {m.canonical_id} does not match the host graph direction")
        if m.size > MAX_ENUM_SIZE:
            raise UnsupportedSizeError(f"motif {m.canonical_id} exceeds the enumeration limit "
                                       f"of {MAX_ENUM_SIZE} vertices")
        if not m.connected:
            raise ValueError(f"motif {m.canonical_id} is not connected")
        by_size.setdefault(m.size, {})[m.mask] = t
    return {k: _Decomposer(k, g.directed, targets) for k, targets in by_size.items()}


class _Matcher:
    """Backtracking embeddings of one motif, rooted at the smallest host vertex.

    The motif vertex mapped onto the root ranges over one representative per
    orbit; every other vertex must map above the root.  Each instance is then
    reached once per automorphism fixing that representative, and the
    duplicates are removed per root.
    """

    def __init__(self, g: Graph, m: MotifClass, target: int):
        self.target = target
        self.directed = g.directed
        adj = [set() for _ in range(m.size)]
        for u, v in m.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.plans = []
        for orbit in m.orbits:
            start = min(orbit)
            order, parent = [start], {start: -1}
            for x in order:
                for y in sorted(adj[x]):
                    if y not in parent:
                        parent[y] = x
                        order.append(y)
            pos = {v: i for i, v in enumerate(order)}
            # edges between each new vertex and those placed before it
            checks = []
            for i, x in enumerate(order):
                checks.append([(pos[a] if b == x else pos[b], a == x)
                               for a, b in m.edges if x in (a, b) and pos[a + b - x] < i])
            self.plans.append((order, [pos[parent[x]] if parent[x] >= 0 else -1 for x in order],
                               checks))

    def run(self, g: Graph, nbrs, root: int):
        eid = g.edge_id
        directed = self.directed
        seen = set()
        for order, parent, checks in self.plans:
            k = len(order)
            img = [root] + [-1] * (k - 1)
            used = {root}

            def grow(i):
                if i == k:
                    ids = []
                    for j in range(1, k):
                        for p, forward in checks[j]:
                            if not directed:
                                a, b = sorted((img[p], img[j]))
                            elif forward:
                                a, b = img[j], img[p]
                            else:
                                a, b = img[p], img[j]
                            ids.append(eid[(a, b)])
                    key = tuple(sorted(ids))
                    if key not in seen:
                        seen.add(key)
                        yield tuple(sorted(img)), key
                    return
                for w in nbrs[img[parent[i]]]:
                    if w <= root or w in used:
                        continue
                    ok = True
                    for p, forward in checks[i]:
                        if not directed:
                            ok = (min(w, img[p]), max(w, img[p])) in eid
                        elif forward:
                            ok = (w, img[p]) in eid
                        else:
                            ok = (img[p], w) in eid
                        if not ok:
                            break
                    if ok:
                        img[i] = w
                        used.add(w)
                        yield from grow(i + 1)
                        used.discard(w)
                img[i] = -1

            yield from grow(1)


def _split(g: Graph, motifs: Sequence[MotifClass]):
    decs = _decomposers(g, motifs)
    matchers = []
    for k in sorted(decs):
        targets = decs[k].targets
        if k >= MATCH_MIN_SIZE and len(targets) <= MATCH_MAX_TARGETS:
            matchers.extend(_Matcher(g, motifs[t], t) for t in sorted(targets.values()))
            del decs[k]
    return decs, matchers


def _iter_raw(g: Graph, motifs: Sequence[MotifClass], roots: Iterable[int]):
    """Yield ``(target index, vertex tuple, edge id tuple)`` for all instances."""
    decs, matchers = _split(g, motifs)
    if not decs and not matchers:
        return
    nbrs = _sorted_neighbors(g)
    if decs:
        kmin, kmax = min(decs), max(decs)
    for root in roots:
        if decs:
            for verts in _esu(nbrs, g.neighbors, kmax, (root,), kmin=kmin):
                dec = decs.get(len(verts))
                if dec is None:
                    continue
                mask, ids = _local_edges(g, verts, dec.pairs)
                for t, pos in dec.parts(mask):
                    yield t, verts, tuple(ids[p] for p in pos)
        for mt in matchers:
            for verts, ids in mt.run(g, nbrs, root):
                yield mt.target, verts, ids


def find_instances(g: Graph, m: MotifClass, covered: set | None = None) -> Iterator[Instance]:
    """Stream every distinct instance of ``m`` in ``g``.

    With ``covered`` (a set of edge keys), instances whose edges are all
    covered are suppressed.
    """
    edges = g.edges
    for _, verts, ids in _iter_raw(g, [m], range(g.n)):
        keys = tuple(sorted(edges[e] for e in ids))
        if covered and all(k in covered for k in keys):
            continue
        yield Instance(m.canonical_id, verts, keys)


def count_instances(g: Graph, m: MotifClass) -> int:
    return sum(1 for _ in _iter_raw(g, [m], range(g.n)))


# -- bulk collection for the solver ---------------------------------------------

@dataclass
class InstanceTable:
    """All instances of one motif as an ``(n, |E(m)|)`` array of host edge ids.

    ``overflow`` marks motifs whose count exceeded the cap; their instances
    are not stored and must be re-enumerated when needed.
    """

    motif: MotifClass
    edges: np.ndarray
    overflow: bool = False

    def __len__(self):
        return len(self.edges)


def _collect_chunk(args):
    g, motifs, roots, cap = args
    buffers = [array("i") for _ in motifs]
    counts = [0] * len(motifs)
    for t, _, ids in _iter_raw(g, motifs, roots):
        counts[t] += 1
        if counts[t] <= cap:
            buffers[t].extend(ids)
    return buffers, counts


def worker_count() -> int:
    """Worker processes for enumeration (``SUBCOVER_WORKERS``, default 1)."""
    try:
        return max(1, int(os.environ.get("SUBCOVER_WORKERS", "1")))
    except ValueError:
        return 1


def collect_instances(g: Graph, motifs: Sequence[MotifClass], cap: int = DEFAULT_INSTANCE_CAP,
                      workers: int | None = None) -> list[InstanceTable]:
    """Materialize instance tables for all ``motifs`` in a single ESU pass.

    Root vertices are split into contiguous chunks; chunk results are
    concatenated in root order, so the output does not depend on ``workers``.
    """
    workers = worker_count() if workers is None else max(1, workers)
    motifs = list(motifs)
    if workers == 1 or g.n < 2 * workers:
        parts = [_collect_chunk((g, motifs, range(g.n), cap))]
    else:
        bounds = np.linspace(0, g.n, 4 * workers + 1).astype(int)
        jobs = [(g, motifs, range(a, b), cap) for a, b in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_collect_chunk, jobs))
    tables = []
    for t, m in enumerate(motifs):
        total = sum(p[1][t] for p in parts)
        if total > cap:
            tables.append(InstanceTable(m, np.empty((0, m.edge_count), dtype=np.int32), True))
            continue
        flat = np.concatenate([np.frombuffer(p[0][t], dtype=np.int32) for p in parts]) \
            if parts else np.empty(0, dtype=np.int32)
        tables.append(InstanceTable(m, flat.reshape(-1, m.edge_count).copy()))
    return tables


def covered_keys(g: Graph, covered_ids: Iterable[int]) -> set:
    return {g.edges[e] for e in covered_ids}


__all__ = [
    "Instance", "InstanceTable", "collect_instances", "count_instances",
    "enumerate_connected_vertex_sets", "find_instances", "instance_from_edges",
    "edge_key",
]
