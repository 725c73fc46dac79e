"""Host graph representation and edge-list I/O.

Edges are stored as normalized vertex pairs ("edge keys"): ordered for
directed graphs, ``(min, max)`` for undirected ones.  Every edge also gets a
dense integer id (its position in the sorted edge list), which is what the
enumeration and solver layers use for covered-edge bookkeeping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import ParseError, ValidationError

_HEADER = re.compile(r"#\s*vertices\s+(\S+)\s*$")


def edge_key(u: int, v: int, directed: bool) -> tuple[int, int]:
    """Normalize a vertex pair to the key used for edge identity."""
    if directed or u < v:
        return (u, v)
    return (v, u)


@dataclass
class LoadStats:
    lines: int = 0
    duplicates: int = 0


class Graph:
    """Simple directed or undirected graph on vertices ``0..n-1``.

    The object is treated as immutable once built.  ``labels[i]`` is the
    original id of vertex ``i`` when the graph was loaded with id compaction.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], directed: bool = False,
                 labels: list[int] | None = None):
        if n < 0:
            raise ValidationError("vertex count must be non-negative")
        self.directed = bool(directed)
        self.n = int(n)
        keys = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop on vertex {u}: edge ({u}, {v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            keys.add(edge_key(u, v, self.directed))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(keys))
        self.edge_id: dict[tuple[int, int], int] = {e: i for i, e in enumerate(self.edges)}
        self.labels = list(range(n)) if labels is None else list(labels)
        if len(self.labels) != n:
            raise ValidationError("label map length differs from vertex count")

        # underlying undirected neighbourhoods, used by enumeration
        nbrs: list[set[int]] = [set() for _ in range(n)]
        out_deg = [0] * n
        in_deg = [0] * n
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
            out_deg[u] += 1
            in_deg[v] += 1
        self.neighbors = nbrs
        self.out_degree = out_deg
        self.in_degree = in_deg
        self.load_stats = LoadStats()

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.directed == other.directed and self.n == other.n
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.directed, self.n, self.edges))

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self.n}, m={self.m})"

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v, self.directed) in self.edge_id

    def degree(self, v: int) -> int:
        """Number of incident edges (in plus out for directed graphs)."""
        return self.out_degree[v] + self.in_degree[v]

    def edge_array(self) -> np.ndarray:
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr.reshape(-1, 2)

    def label_of(self, v: int) -> int:
        return self.labels[v]

    def index_of_label(self) -> dict[int, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


def underlying_undirected(g: Graph) -> Graph:
    """Drop arc orientation; mutual arcs collapse into one edge."""
    if not g.directed:
        return g
    return Graph(g.n, g.edges, directed=False, labels=g.labels)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer vertex id, got {token!r}", lineno) from None


def load_edge_list(stream: TextIO | Iterable[str], directed: bool = False,
                   compact: bool = True) -> Graph:
    """Read a whitespace separated edge list.

    ``#`` starts a comment.  A ``# vertices N`` header fixes the vertex count
    and disables id compaction (ids must then lie in ``[0, N)``).  Without a
    header, ids that occur are relabelled to ``0..N-1`` in increasing order
    when ``compact`` is true, otherwise ``N = max id + 1``.
    """
    header_n = None
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    stats = LoadStats()
    for lineno, raw in enumerate(stream, start=1):
        stats.lines += 1
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _HEADER.match(line)
            if match:
                header_n = _parse_int(match.group(1), lineno)
                if header_n < 0:
                    raise ParseError("vertex count must be non-negative", lineno)
            continue
        line = line.split("#", 1)[0]
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two vertex ids, got {len(tokens)} tokens", lineno)
        u = _parse_int(tokens[0], lineno)
        v = _parse_int(tokens[1], lineno)
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop ({u}, {v})")
        if u < 0 or v < 0:
            raise ValidationError(f"line {lineno}: negative vertex id in ({u}, {v})")
        key = edge_key(u, v, directed)
        if key in seen:
            stats.duplicates += 1
            continue
        seen.add(key)
        pairs.append(key)

    if header_n is not None:
        for u, v in pairs:
            if u >= header_n or v >= header_n:
                raise ValidationError(
                    f"edge ({u}, {v}) exceeds the declared vertex count {header_n}")
        g = Graph(header_n, pairs, directed)
    elif compact:
        ids = sorted({x for e in pairs for x in e})
        remap = {x: i for i, x in enumerate(ids)}
        g = Graph(len(ids), [(remap[u], remap[v]) for u, v in pairs], directed, labels=ids)
    else:
        n = 1 + max((x for e in pairs for x in e), default=-1)
        g = Graph(n, pairs, directed)
    g.load_stats = stats
    return g


def read_edge_list(path, directed: bool = False, compact: bool = True) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, directed=directed, compact=compact)


def write_edge_list(g: Graph, sink: TextIO) -> None:
    """Write ``g`` in compact ids, sorted; a header is emitted only when some
    vertex is isolated (otherwise the vertex count is implied)."""
    touched = sum(1 for v in range(g.n) if g.degree(v) > 0)
    if touched < g.n:
        sink.write(f"# vertices {g.n}\n")
    for u, v in g.edges:
        sink.write(f"{u} {v}\n")
