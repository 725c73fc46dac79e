"""Bit-cost arithmetic for subgraph covers.

Everything here is measured in bits.  The cover cost is

    Sigma(C) = log*(N) + sum_m [ S(m, n_m) + eps(m) + log*(n_m) ]

with ``S(m, n) = log2 binom(P(m, N), n)`` and ``P(m, N)`` the number of
distinct placements of motif ``m`` on ``N`` labelled vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import DomainError, UndefinedProfileError

LOG2E = math.log2(math.e)
RISSANEN_C0 = 2.865064
EXACT_LIMIT = 10**6

_LN2 = math.log(2.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_star(n: int, variant: str = "rissanen") -> float:
    """Universal code length of a positive integer.

    ``"rissanen"`` adds ``log2(2.865064)`` to the positive terms of the
    iterated base-2 logarithm; ``"plain"`` omits the constant (so
    ``log_star(1, "plain") == 0``).
    """
    if n < 1:
        raise DomainError(f"log* is defined for positive integers, got {n}")
    if variant not in ("rissanen", "plain"):
        raise ValueError(f"unknown log* variant {variant!r}")
    total = math.log2(RISSANEN_C0) if variant == "rissanen" else 0.0
    term = math.log2(n)
    while term > 0:
        total += term
        term = math.log2(term)
    return total


# -- binomials --------------------------------------------------------------

_SMALL_N = 256


@lru_cache(maxsize=4)
def _primes_upto(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(limit ** 0.5) + 1):
        if sieve[q]:
            sieve[q * q::q] = False
    return np.flatnonzero(sieve)


def _sieve_bound(p: int) -> int:
    # round up so nearby p values share one cached sieve
    return 1 << max(10, (p - 1).bit_length())


def log2_binomial_exact(p: int, n: int) -> float:
    """log2 C(p, n) through exact integer arithmetic.

    Small ``n`` multiplies out the binomial; otherwise the exact prime
    factorization of C(p, n) (Legendre's formula) is summed term by term,
    which avoids building a number with ``n log2 p`` bits.
    """
    if n < 0 or n > p:
        raise DomainError(f"binomial C({p}, {n}) is zero")
    n = min(n, p - n)
    if n == 0:
        return 0.0
    if n <= _SMALL_N or p > 64 * EXACT_LIMIT:
        return math.log2(math.comb(p, n))
    primes = _primes_upto(_sieve_bound(p))
    primes = primes[primes <= p]
    exps = np.zeros(len(primes), dtype=np.int64)
    power = primes.astype(np.int64)
    live = np.ones(len(primes), dtype=bool)
    while live.any():
        q = power[live]
        exps[live] += p // q - n // q - (p - n) // q
        live[live] = q <= p // primes[live]
        power[live] *= primes[live]
    nz = exps > 0
    return math.fsum((exps[nz] * np.log2(primes[nz])).tolist())


def _stirling_tail(x: float) -> float:
    # lgamma(x + 1) - [(x + 1/2) ln x - x + ln(2 pi)/2]
    inv = 1.0 / x
    inv2 = inv * inv
    return inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 / 1680)))


def _ln_falling(p: float, n: int) -> float:
    """ln(p! / (p - n)!) without cancellation for large ``p - n``."""
    y = p - n
    if y < 1000:
        return math.lgamma(p + 1) - math.lgamma(y + 1)
    return (n * math.log(p) - (y + 0.5) * math.log1p(-n / p) - n
            + _stirling_tail(p) - _stirling_tail(y))


def log2_binomial_lgamma(p: int, n: int) -> float:
    """log2 C(p, n) through log-gamma, accurate to ~1e-12 relative."""
    if n < 0 or n > p:
        raise DomainError(f"binomial C({p}, {n}) is zero")
    n = min(n, p - n)
    if n == 0:
        return 0.0
    return (_ln_falling(float(p), n) - math.lgamma(n + 1)) / _LN2


def log2_binomial(p: int, n: int) -> float:
    if p <= EXACT_LIMIT:
        return log2_binomial_exact(p, n)
    return log2_binomial_lgamma(p, n)


# -- per-motif terms ----------------------------------------------------------

def placements(m, N: int) -> int:
    """Distinct placements of ``m`` on ``N`` labelled vertices:
    ``N! / ((N - |m|)! |Aut(m)|)``."""
    if N < m.size:
        raise DomainError(f"motif of size {m.size} cannot be placed on {N} vertices")
    return math.perm(N, m.size) // m.aut_size


def log2_placements(m, N: int) -> float:
    return math.log2(placements(m, N))


def entropy_S(m, n: int, N: int) -> float:
    """Bits needed to pick ``n`` distinct instances of ``m`` on ``N`` vertices."""
    p = placements(m, N)
    if n < 0 or n > p:
        raise DomainError(f"{n} instances of {m.canonical_id} exceed the {p} placements on N={N}")
    return log2_binomial(p, n)


def entropy_stirling(m, n: int, N: int) -> float:
    """Large-N approximation of :func:`entropy_S`; diagnostic only."""
    if n < 1:
        raise DomainError("Stirling form needs at least one instance")
    if m.size <= 2:
        raise DomainError("Stirling form applies to motifs with more than two vertices")
    if n > placements(m, N):
        raise DomainError(f"{n} instances exceed the placement count")
    return n * (m.size * math.log2(N) - math.log2(m.aut_size) - math.log2(n) + LOG2E)


# -- cost model ---------------------------------------------------------------

@dataclass(frozen=True)
class CostModel:
    """How motif complexity and integer lengths are charged.

    ``epsilon_mode`` is ``"edge-list"`` (the motif's own ``epsilon_bits``),
    ``"zero"`` (maximum likelihood) or ``"constant"`` (every motif costs
    ``epsilon_value`` bits, a frequency threshold).
    """

    epsilon_mode: str = "edge-list"
    epsilon_value: float = 0.0
    log_star_variant: str = "rissanen"

    def __post_init__(self):
        if self.epsilon_mode not in ("edge-list", "zero", "constant"):
            raise ValueError(f"unknown epsilon mode {self.epsilon_mode!r}")
        if self.epsilon_value < 0:
            raise ValueError("epsilon must be non-negative")

    @classmethod
    def parse(cls, text: str, log_star_variant: str = "rissanen") -> "CostModel":
        """Parse ``edge-list``, ``zero`` or ``const:<bits>``."""
        if text in ("edge-list", "zero"):
            return cls(text, 0.0, log_star_variant)
        if text.startswith("const:"):
            return cls("constant", float(text[6:]), log_star_variant)
        raise ValueError(f"bad epsilon mode {text!r}; use edge-list, zero or const:<bits>")

    def describe(self) -> str:
        if self.epsilon_mode == "constant":
            return f"const:{self.epsilon_value!r}"
        return self.epsilon_mode

    def epsilon(self, m) -> float:
        if self.epsilon_mode == "edge-list":
            if self.log_star_variant == "rissanen":
                return m.epsilon_bits
            from .motifs import effective_complexity
            return effective_complexity(m, self.log_star_variant)
        if self.epsilon_mode == "zero":
            return 0.0
        return self.epsilon_value

    def log_star(self, n: int) -> float:
        return log_star(n, self.log_star_variant)

    def motif_cost(self, m, n: int, N: int) -> float:
        """``S(m, n) + eps(m) + log*(n)``; zero when ``n == 0``."""
        if n == 0:
            return 0.0
        return entropy_S(m, n, N) + self.epsilon(m) + self.log_star(n)


DEFAULT_MODEL = CostModel()


@dataclass
class CoverSummary:
    """Motif counts of a cover on a host with ``N`` vertices."""

    N: int
    directed: bool
    counts: dict[str, int] = field(default_factory=dict)

    def with_counts(self, extra: Mapping[str, int]) -> "CoverSummary":
        merged = dict(self.counts)
        for key, n in extra.items():
            merged[key] = merged.get(key, 0) + n
        return CoverSummary(self.N, self.directed, merged)


def _lookup(catalog, key):
    try:
        return catalog[key]
    except KeyError:
        raise KeyError(f"motif {key} is not in the active catalog") from None


def total_information(summary: CoverSummary, catalog, model: CostModel = DEFAULT_MODEL) -> float:
    total = model.log_star(summary.N)
    for key, n in summary.counts.items():
        if n:
            total += model.motif_cost(_lookup(catalog, key), n, summary.N)
    return total


def edge_summary(g) -> CoverSummary:
    from .motifs import single_edge_motif
    return CoverSummary(g.n, g.directed, {single_edge_motif(g.directed).canonical_id: g.m})


def edge_cover_information(g, catalog=None, model: CostModel = DEFAULT_MODEL) -> float:
    """Cost of the all-single-edge cover (the ERI benchmark)."""
    from .motifs import single_edge_motif
    if g.m < 1:
        raise DomainError("the edge cover of an edgeless graph is undefined")
    edge = single_edge_motif(g.directed)
    if catalog is None:
        catalog = {edge.canonical_id: edge}
    return total_information(edge_summary(g), catalog, model)


def delta_sigma(g, summary: CoverSummary, catalog, model: CostModel = DEFAULT_MODEL) -> float:
    return edge_cover_information(g, catalog, model) - total_information(summary, catalog, model)


def dissolve(cover, key: str, directed: bool):
    """Counts of the cover with every ``key`` instance replaced by its edges.

    Single-edge instances are a set, so edges already present as single-edge
    subgraphs are not counted twice.
    """
    from .motifs import single_edge_motif
    edge_id = single_edge_motif(directed).canonical_id
    counts = dict(cover.counts.counts)
    if key == edge_id or counts.get(key, 0) == 0:
        return counts
    single = {inst.edges[0] for inst in cover.instances if inst.motif == edge_id}
    freed = set()
    for inst in cover.instances:
        if inst.motif == key:
            freed.update(inst.edges)
    counts.pop(key)
    counts[edge_id] = len(single | freed)
    return counts


def c_score(g, cover, key: str, catalog, model: CostModel = DEFAULT_MODEL) -> float:
    """Relative cost increase from dissolving motif ``key`` into single edges."""
    counts = cover.counts.counts
    if counts.get(key, 0) == 0:
        return 0.0
    dissolved = dissolve(cover, key, g.directed)
    if dissolved == counts:  # the single-edge motif dissolves into itself
        return 0.0
    base = total_information(cover.counts, catalog, model)
    after = total_information(CoverSummary(g.n, g.directed, dissolved), catalog, model)
    return after / base - 1.0


def normalize_profile(scores: Mapping[str, float]) -> dict[str, float]:
    norm = math.sqrt(sum(max(c, 0.0) ** 2 for c in scores.values()))
    if norm == 0.0:
        raise UndefinedProfileError("all c-scores are zero; the profile is undefined")
    return {k: (c / norm if c > 0 else 0.0) for k, c in scores.items()}


def significance_profile(g, cover, catalog, model: CostModel = DEFAULT_MODEL) -> dict[str, float]:
    scores = {k: c_score(g, cover, k, catalog, model) for k in cover.counts.counts}
    return normalize_profile(scores)


@dataclass
class MotifRow:
    canonical_id: str
    count: int
    entropy: float
    epsilon: float
    c_score: float
    normalized: float


@dataclass
class InformationReport:
    sigma: float
    eri: float
    delta_sigma: float
    rows: list[MotifRow]

    @property
    def compression(self) -> float:
        return self.delta_sigma / self.eri if self.eri else 0.0

    def row(self, key: str) -> MotifRow:
        for r in self.rows:
            if r.canonical_id == key:
                return r
        raise KeyError(key)


def information_report(g, cover, catalog, model: CostModel = DEFAULT_MODEL) -> InformationReport:
    sigma = total_information(cover.counts, catalog, model)
    eri = edge_cover_information(g, catalog, model)
    scores = {k: c_score(g, cover, k, catalog, model)
              for k, n in cover.counts.counts.items() if n}
    try:
        profile = normalize_profile(scores)
    except UndefinedProfileError:
        profile = {k: 0.0 for k in scores}
    rows = []
    for key in sorted(scores, key=lambda k: catalog[k].sort_key):
        m = catalog[key]
        n = cover.counts.counts[key]
        rows.append(MotifRow(key, n, entropy_S(m, n, g.n), model.epsilon(m),
                             scores[key], profile[key]))
    return InformationReport(sigma, eri, eri - sigma, rows)
