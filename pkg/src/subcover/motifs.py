"""Small-graph isomorphism classes: canonical forms, automorphisms, catalogs.

A pattern on ``k`` vertices is encoded as a bitmask over vertex pairs.  Pairs
are listed lexicographically (``i < j`` when undirected, ``i != j`` when
directed) and pair ``p`` occupies bit ``npairs - 1 - p``, so a larger mask
means a lexicographically smaller sorted edge list.  The canonical form of a
pattern is the relabelling with the maximal mask, i.e. the lexicographically
least sorted edge list.

Canonical ids are strings such as ``u3:01-02-12`` (undirected triangle) or
``d2:01-10`` (mutual arc pair).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError, UnsupportedSizeError
from .information import log2_binomial_exact, log_star

MAX_PATTERN_SIZE = 8
MAX_TABLE_SIZE = {False: 6, True: 5}
MAX_CATALOG_SIZE = {False: 6, True: 5}

_ID_RE = re.compile(r"^([ud])([2-8]):((?:[0-7]{2})(?:-[0-7]{2})*)$")


@lru_cache(maxsize=None)
def pair_list(k: int, directed: bool) -> tuple[tuple[int, int], ...]:
    if directed:
        return tuple((i, j) for i in range(k) for j in range(k) if i != j)
    return tuple((i, j) for i in range(k) for j in range(i + 1, k))


@lru_cache(maxsize=None)
def pair_bit(k: int, directed: bool) -> dict[tuple[int, int], int]:
    pairs = pair_list(k, directed)
    top = len(pairs) - 1
    return {p: 1 << (top - idx) for idx, p in enumerate(pairs)}


def edges_to_mask(k: int, edges: Iterable[tuple[int, int]], directed: bool) -> int:
    bits = pair_bit(k, directed)
    mask = 0
    for u, v in edges:
        if not directed and u > v:
            u, v = v, u
        mask |= bits[(u, v)]
    return mask


def mask_to_edges(k: int, mask: int, directed: bool) -> tuple[tuple[int, int], ...]:
    pairs = pair_list(k, directed)
    top = len(pairs) - 1
    return tuple(p for idx, p in enumerate(pairs) if mask >> (top - idx) & 1)


def format_id(k: int, edges: Sequence[tuple[int, int]], directed: bool) -> str:
    body = "-".join(f"{u}{v}" for u, v in sorted(edges))
    return f"{'d' if directed else 'u'}{k}:{body}"


def parse_id(text: str) -> tuple[int, tuple[tuple[int, int], ...], bool]:
    """Split a canonical id into ``(size, edges, directed)``."""
    match = _ID_RE.match(text.strip())
    if not match:
        raise ParseError(f"not a motif id: {text!r}")
    directed = match.group(1) == "d"
    k = int(match.group(2))
    edges = tuple((int(t[0]), int(t[1])) for t in match.group(3).split("-"))
    for u, v in edges:
        if u >= k or v >= k or u == v or (not directed and u > v):
            raise ParseError(f"bad edge {u}{v} in motif id {text!r}")
    return k, edges, directed


def _as_pattern(pattern) -> tuple[int, tuple[tuple[int, int], ...], bool]:
    """Accept a :class:`~subcover.graph.Graph`, a MotifClass or ``(k, edges, directed)``."""
    if isinstance(pattern, tuple):
        k, edges, directed = pattern
        return int(k), tuple(edges), bool(directed)
    if isinstance(pattern, MotifClass):
        return pattern.size, pattern.edges, pattern.directed
    return pattern.n, tuple(pattern.edges), pattern.directed


def _check_size(k: int, limit: int = MAX_PATTERN_SIZE) -> None:
    if k > limit:
        raise UnsupportedSizeError(f"patterns with {k} vertices exceed the limit of {limit}")


def _permuted_mask(k: int, edges, directed: bool, perm: Sequence[int]) -> int:
    bits = pair_bit(k, directed)
    mask = 0
    for u, v in edges:
        a, b = perm[u], perm[v]
        if not directed and a > b:
            a, b = b, a
        mask |= bits[(a, b)]
    return mask


def canonical_form(pattern) -> str:
    """Canonical id by exhaustive search over all ``k!`` relabellings."""
    k, edges, directed = _as_pattern(pattern)
    _check_size(k)
    best = max(_permuted_mask(k, edges, directed, p)
               for p in itertools.permutations(range(k)))
    return format_id(k, mask_to_edges(k, best, directed), directed)


def automorphisms(pattern) -> list[tuple[int, ...]]:
    k, edges, directed = _as_pattern(pattern)
    _check_size(k)
    mask = _permuted_mask(k, edges, directed, range(k))
    return [p for p in itertools.permutations(range(k))
            if _permuted_mask(k, edges, directed, p) == mask]


def _orbits_from(k: int, perms: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for v in range(k):
            a, b = find(v), find(p[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(k):
        groups.setdefault(find(v), []).append(v)
    return tuple(sorted(tuple(g) for g in groups.values()))


def automorphism_group(pattern) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """``(|Aut|, orbits)`` by checking every vertex permutation."""
    k = _as_pattern(pattern)[0]
    auts = automorphisms(pattern)
    return len(auts), _orbits_from(k, auts)


def _undirected_adjacency(k: int, edges) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(k)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _is_connected(k: int, adj: list[set[int]], removed: int = -1) -> bool:
    verts = [v for v in range(k) if v != removed]
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y != removed and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def is_connected(pattern) -> bool:
    """Weak connectivity over all ``k`` vertices (isolated vertices disconnect)."""
    k, edges, _ = _as_pattern(pattern)
    return _is_connected(k, _undirected_adjacency(k, edges))


def is_biconnected(pattern) -> bool:
    """No cut vertex in the underlying undirected graph.

    Two-vertex patterns (a single edge, or a mutual arc pair) count as
    biconnected; with that convention the directed catalog up to five
    vertices has 7585 biconnected classes.
    """
    k, edges, _ = _as_pattern(pattern)
    adj = _undirected_adjacency(k, edges)
    if not _is_connected(k, adj):
        raise DomainError("biconnectivity is only defined for connected patterns")
    if k <= 2:
        return True
    return all(_is_connected(k, adj, removed=v) for v in range(k))


def effective_complexity(m, variant: str = "rissanen") -> float:
    """Edge-list code length of a motif: ``log*|V| + log*|E| + log2 C(pairs, |E|)``."""
    slots = m.size * (m.size - 1) if m.directed else m.size * (m.size - 1) // 2
    return (log_star(m.size, variant) + log_star(m.edge_count, variant)
            + log2_binomial_exact(slots, m.edge_count))


@dataclass(frozen=True)
class MotifClass:
    canonical_id: str
    size: int
    edge_count: int
    directed: bool
    aut_size: int
    orbits: tuple[tuple[int, ...], ...]
    connected: bool
    biconnected: bool
    epsilon_bits: float
    edges: tuple[tuple[int, int], ...] = field(repr=False)
    mask: int = field(repr=False)

    @property
    def sort_key(self):
        return (self.size, self.edge_count, self.canonical_id)

    @property
    def orbit_of(self) -> tuple[int, ...]:
        return _orbit_lookup(self.size, self.orbits)

    def __str__(self):
        return self.canonical_id


@lru_cache(maxsize=None)
def _orbit_lookup(k, orbits):
    out = [0] * k
    for idx, orb in enumerate(orbits):
        for v in orb:
            out[v] = idx
    return tuple(out)


@lru_cache(maxsize=100_000)
def motif_from_id(canonical_id: str) -> MotifClass:
    """Build the full class record for a canonical id (verifying canonicity)."""
    k, edges, directed = parse_id(canonical_id)
    if canonical_form((k, edges, directed)) != format_id(k, edges, directed):
        raise ParseError(f"{canonical_id!r} is not in canonical form")
    return _build_class(k, edges, directed)


def _build_class(k, edges, directed, aut_size=None, orbits=None) -> MotifClass:
    if aut_size is None:
        aut_size, orbits = automorphism_group((k, edges, directed))
    adj = _undirected_adjacency(k, edges)
    connected = _is_connected(k, adj)
    biconnected = connected and (k <= 2 or all(_is_connected(k, adj, v) for v in range(k)))
    m = MotifClass(format_id(k, edges, directed), k, len(edges), directed, aut_size, orbits,
                   connected, biconnected, 0.0, tuple(sorted(edges)),
                   edges_to_mask(k, edges, directed))
    object.__setattr__(m, "epsilon_bits", effective_complexity(m))
    return m


def motif_class(pattern) -> MotifClass:
    """Class record of an arbitrary (not necessarily canonical) pattern."""
    return motif_from_id(canonical_form(pattern))


def single_edge_motif(directed: bool) -> MotifClass:
    return motif_from_id("d2:01" if directed else "u2:01")


# -- vectorized labelled-graph tables ------------------------------------------

class LabelledTable:
    """Canonical mask, canonicalizing permutation and spanning-connectivity flag
    for every labelled graph on ``k`` vertices, computed with numpy."""

    def __init__(self, k: int, directed: bool):
        if k < 2 or k > MAX_TABLE_SIZE[directed]:
            raise UnsupportedSizeError(f"no lookup table for k={k}, directed={directed}")
        self.k = k
        self.directed = directed
        self.pairs = pair_list(k, directed)
        self.npairs = len(self.pairs)
        self.perms = list(itertools.permutations(range(k)))
        masks = np.arange(1 << self.npairs, dtype=np.uint32)
        self._chunks = _chunk_tables(k, directed, self.perms)

        canon = masks.copy()
        perm_idx = np.zeros(masks.shape, dtype=np.uint16)
        for idx in range(1, len(self.perms)):
            cand = self.apply(idx, masks)
            better = cand > canon
            canon[better] = cand[better]
            perm_idx[better] = idx
        self.canon = canon
        self.perm_index = perm_idx
        self.spanning = _spanning_connected(k, directed, masks)

    def apply(self, perm_idx: int, masks: np.ndarray) -> np.ndarray:
        """Relabel an array of masks with permutation ``perms[perm_idx]``."""
        out = np.zeros(masks.shape, dtype=np.uint32)
        for shift, table in self._chunks[perm_idx]:
            out |= table[(masks >> shift) & 0x3FF]
        return out


def _chunk_tables(k, directed, perms):
    pairs = pair_list(k, directed)
    npairs = len(pairs)
    index = {p: i for i, p in enumerate(pairs)}
    chunk_vals = np.arange(1024, dtype=np.uint32)
    out = []
    for perm in perms:
        # destination bit position for each source bit position
        dest = [0] * npairs
        for src_idx, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            if not directed and a > b:
                a, b = b, a
            dest[npairs - 1 - src_idx] = npairs - 1 - index[(a, b)]
        tables = []
        for shift in range(0, npairs, 10):
            table = np.zeros(1024, dtype=np.uint32)
            for t in range(min(10, npairs - shift)):
                table |= ((chunk_vals >> t) & 1) << np.uint32(dest[shift + t])
            tables.append((np.uint32(shift), table))
        out.append(tables)
    return out


def _spanning_connected(k, directed, masks):
    pairs = pair_list(k, directed)
    top = len(pairs) - 1
    nbr = [np.zeros(masks.shape, dtype=np.uint32) for _ in range(k)]
    for idx, (u, v) in enumerate(pairs):
        bit = (masks >> np.uint32(top - idx)) & 1
        nbr[u] |= bit << np.uint32(v)
        nbr[v] |= bit << np.uint32(u)
    reach = np.ones(masks.shape, dtype=np.uint32)
    for _ in range(k - 1):
        grown = reach.copy()
        for v in range(k):
            has_v = ((reach >> np.uint32(v)) & 1).astype(bool)
            grown[has_v] |= nbr[v][has_v]
        reach = grown
    return reach == (1 << k) - 1


@lru_cache(maxsize=None)
def labelled_table(k: int, directed: bool) -> LabelledTable:
    return LabelledTable(k, directed)


class Canonicalizer:
    """Fast ``mask -> (canonical mask, permutation)`` for one (k, directed).

    Uses :class:`LabelledTable` when one exists for the size, otherwise a
    memoized brute-force search.
    """

    def __init__(self, k: int, directed: bool):
        _check_size(k)
        self.k = k
        self.directed = directed
        self.pairs = pair_list(k, directed)
        self.table = labelled_table(k, directed) if k <= MAX_TABLE_SIZE[directed] else None
        self.perms = list(itertools.permutations(range(k)))
        self._memo: dict[int, tuple[int, tuple[int, ...], bool]] = {}

    def classify(self, mask: int) -> tuple[int, tuple[int, ...], bool]:
        """``(canonical mask, perm, spanning-connected)``; ``perm[i]`` is the
        canonical position of local vertex ``i``."""
        if self.table is not None:
            t = self.table
            return (int(t.canon[mask]), t.perms[int(t.perm_index[mask])], bool(t.spanning[mask]))
        hit = self._memo.get(mask)
        if hit is None:
            edges = mask_to_edges(self.k, mask, self.directed)
            best, best_perm = -1, None
            for p in self.perms:
                cand = _permuted_mask(self.k, edges, self.directed, p)
                if cand > best:
                    best, best_perm = cand, p
            adj = _undirected_adjacency(self.k, edges)
            hit = (best, best_perm, _is_connected(self.k, adj))
            self._memo[mask] = hit
        return hit


@lru_cache(maxsize=None)
def canonicalizer(k: int, directed: bool) -> Canonicalizer:
    return Canonicalizer(k, directed)


# -- catalogs -------------------------------------------------------------------

class MotifCatalog:
    """Ordered, immutable set of candidate motif classes."""

    def __init__(self, classes: Iterable[MotifClass], directed: bool,
                 max_size: int | None = None, kind: str = "custom"):
        uniq = {}
        for m in classes:
            if m.directed != directed:
                raise ValueError(f"motif {m.canonical_id} does not match directed={directed}")
            uniq[m.canonical_id] = m
        self.classes: tuple[MotifClass, ...] = tuple(sorted(uniq.values(), key=lambda m: m.sort_key))
        self.index = {m.canonical_id: i for i, m in enumerate(self.classes)}
        self.directed = directed
        self.max_size = max_size if max_size is not None else max((m.size for m in self.classes), default=0)
        self.kind = kind

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __contains__(self, key):
        if isinstance(key, MotifClass):
            key = key.canonical_id
        return key in self.index

    def __getitem__(self, key: str) -> MotifClass:
        return self.classes[self.index[key]]

    def get(self, key, default=None):
        i = self.index.get(key)
        return default if i is None else self.classes[i]

    @property
    def edge_motif(self) -> MotifClass:
        return single_edge_motif(self.directed)

    def has_edge_motif(self) -> bool:
        return self.edge_motif.canonical_id in self.index

    def with_edge_motif(self) -> "MotifCatalog":
        if self.has_edge_motif():
            return self
        return MotifCatalog((*self.classes, self.edge_motif), self.directed, self.max_size, self.kind)

    def restrict(self, predicate) -> "MotifCatalog":
        return MotifCatalog([m for m in self.classes if predicate(m)], self.directed,
                            self.max_size, self.kind)

    def dumps(self) -> str:
        lines = [f"# subcover catalog directed={int(self.directed)} max_size={self.max_size} "
                 f"filter={self.kind} count={len(self)}"]
        for m in self.classes:
            orbits = "/".join(",".join(map(str, o)) for o in m.orbits)
            flags = ("c" if m.connected else "") + ("b" if m.biconnected else "") or "-"
            lines.append(f"{m.canonical_id} | {m.size} | {m.edge_count} | {m.aut_size} | {orbits} | {flags}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "MotifCatalog":
        classes = []
        directed = None
        kind = "custom"
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line.startswith("#"):
                found = re.search(r"filter=(\S+)", line)
                if found:
                    kind = found.group(1)
                continue
            if not line:
                continue
            fields = [f.strip() for f in line.split("|")]
            try:
                m = motif_from_id(fields[0])
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
            if len(fields) >= 4:
                try:
                    declared = (int(fields[1]), int(fields[2]), int(fields[3]))
                except ValueError:
                    raise ParseError("size, edge and aut columns must be integers", lineno) from None
                if declared != (m.size, m.edge_count, m.aut_size):
                    raise ParseError(f"columns disagree with motif {m.canonical_id}", lineno)
            if directed is None:
                directed = m.directed
            elif directed != m.directed:
                raise ParseError("catalog mixes directed and undirected motifs", lineno)
            classes.append(m)
        if directed is None:
            raise ParseError("catalog file lists no motifs")
        return cls(classes, directed, kind=kind)

    @classmethod
    def load(cls, path) -> "MotifCatalog":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def _classes_of_size(k: int, directed: bool, biconnected_only: bool) -> list[MotifClass]:
    table = labelled_table(k, directed)
    canon_of_connected = table.canon[table.spanning]
    reps, counts = np.unique(canon_of_connected, return_counts=True)
    fact = math.factorial(k)

    # automorphisms of every representative at once
    is_aut = np.empty((len(table.perms), len(reps)), dtype=bool)
    for idx in range(len(table.perms)):
        is_aut[idx] = table.apply(idx, reps) == reps

    out = []
    for j, (rep, count) in enumerate(zip(reps.tolist(), counts.tolist())):
        aut_size = fact // count
        auts = [table.perms[i] for i in np.flatnonzero(is_aut[:, j])]
        assert len(auts) == aut_size
        edges = mask_to_edges(k, rep, directed)
        m = _build_class(k, edges, directed, aut_size, _orbits_from(k, auts))
        if biconnected_only and not m.biconnected:
            continue
        out.append(m)
    return out


def generate_catalog(max_size: int, directed: bool = False, filter: str = "connected") -> MotifCatalog:
    """All connected (or biconnected) classes on 2..max_size vertices.

    Every labelled graph is canonicalized through the vectorized tables, then
    deduplicated.
    """
    if filter not in ("connected", "biconnected"):
        raise ValueError(f"unknown catalog filter {filter!r}")
    limit = MAX_CATALOG_SIZE[directed]
    if not 2 <= max_size <= limit:
        raise UnsupportedSizeError(
            f"max_size must lie in [2, {limit}] for {'directed' if directed else 'undirected'} catalogs")
    classes = []
    for k in range(2, max_size + 1):
        classes.extend(_classes_of_size(k, directed, filter == "biconnected"))
    return MotifCatalog(classes, directed, max_size, filter)


# -- named motifs ---------------------------------------------------------------

def _named_edges(name: str, directed: bool):
    name = name.lower()
    if name in ("edge", "arc"):
        return 2, [(0, 1)]
    if name == "mutual":
        if not directed:
            raise ValueError("'mutual' is a directed motif")
        return 2, [(0, 1), (1, 0)]
    if name == "triangle":
        name = "cycle3" if directed else "k3"
    if name == "claw":
        name = "star3"
    if name == "ffl":
        if not directed:
            raise ValueError("'ffl' is a directed motif")
        return 3, [(0, 1), (0, 2), (1, 2)]
    match = re.fullmatch(r"(k|star|cycle|path)(\d+)", name)
    if not match:
        raise ValueError(f"unknown motif name {name!r}")
    family, n = match.group(1), int(match.group(2))
    if family == "k":
        edges = [(i, j) for i in range(n) for j in range(n) if i != j and (directed or i < j)]
        return n, edges
    if family == "star":
        return n + 1, [(0, i) for i in range(1, n + 1)]
    if family == "cycle":
        if n < 3:
            raise ValueError("cycles need at least three vertices")
        return n, [(i, (i + 1) % n) for i in range(n)]
    return n, [(i, i + 1) for i in range(n - 1)]


def resolve_motif(name: str, directed: bool) -> MotifClass:
    """Motif from a canonical id or an alias.

    Aliases: ``edge``, ``triangle``, ``claw``, ``kN`` (clique), ``starN``
    (centre plus N leaves), ``cycleN``, ``pathN`` (N vertices); directed
    only: ``ffl``, ``mutual``.  In the directed case ``triangle`` is the
    3-cycle and ``kN`` the complete bidirected graph.
    """
    text = name.strip()
    if _ID_RE.match(text):
        k, edges, is_directed = parse_id(text)
        if is_directed != directed:
            raise ValueError(f"motif {text} does not match directed={directed}")
        return motif_class((k, edges, directed))
    k, edges = _named_edges(text, directed)
    if k < 2 or k > MAX_PATTERN_SIZE:
        raise UnsupportedSizeError(f"motif {name!r} has {k} vertices")
    return motif_class((k, tuple(edges), directed))
