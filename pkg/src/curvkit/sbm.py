"""Stochastic block model sampling and the curvature-separation score grid.

Sampling walks each block's pair space with geometric skips, so the cost is
proportional to the number of edges drawn, and the whole procedure is a pure
function of the seed. Replicate seeds are derived with SplitMix64 so grid
runs can be distributed without coordinating RNG state.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .curvature import CurvatureKind, curvature_all
from .errors import PreconditionError
from .graph import Graph, Partition, _from_internal_edges

__all__ = [
    "SbmSpec",
    "ReplicateStats",
    "GridRecord",
    "splitmix64",
    "sample_sbm",
    "split_by_community",
    "percentile_rank",
    "pps_indicator",
    "aer",
    "aop",
    "default_grid",
    "grid_from_lists",
    "run_grid",
    "write_grid_csv",
]

_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 step; used to derive independent replicate seeds."""
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


@dataclass(frozen=True)
class SbmSpec:
    """Equal-split stochastic block model (first n mod K blocks get the
    extra node); block_matrix[k, l] is the edge probability between blocks."""

    n: int
    k: int
    block_matrix: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        b = np.asarray(self.block_matrix, dtype=np.float64)
        if self.k < 1 or self.n < self.k:
            raise PreconditionError("need K >= 1 and n >= K")
        if b.shape != (self.k, self.k):
            raise PreconditionError("block matrix must be K x K")
        if not np.allclose(b, b.T, atol=0.0):
            raise PreconditionError("block matrix must be symmetric")
        if (b < 0).any() or (b > 1).any():
            raise PreconditionError("block probabilities must be in [0, 1]")
        object.__setattr__(self, "block_matrix", b)

    @classmethod
    def from_probs(cls, n: int, k: int, p1: float, p2: float, seed: int) -> "SbmSpec":
        b = np.full((k, k), p2, dtype=np.float64)
        np.fill_diagonal(b, p1)
        return cls(n=n, k=k, block_matrix=b, seed=seed)

    def block_sizes(self) -> np.ndarray:
        base = self.n // self.k
        sizes = np.full(self.k, base, dtype=np.int64)
        sizes[: self.n % self.k] += 1
        return sizes


def _sample_positions(rng: np.random.Generator, n_pairs: int, p: float) -> np.ndarray:
    """Indices of successes among n_pairs independent Bernoulli(p) slots."""
    if n_pairs == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_pairs, dtype=np.int64)
    out: list[np.ndarray] = []
    pos = -1
    while True:
        est = int((n_pairs - pos) * p * 1.2 + 16)
        gaps = rng.geometric(p, size=est).astype(np.int64)
        steps = pos + np.cumsum(gaps)
        if steps[-1] >= n_pairs:
            out.append(steps[steps < n_pairs])
            break
        out.append(steps)
        pos = int(steps[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _triangular_unrank(t: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    # pair index t -> (i, j), i < j, over the upper triangle of an s x s block
    tf = t.astype(np.float64)
    i = np.floor(((2 * s - 1) - np.sqrt((2 * s - 1) ** 2 - 8 * tf)) / 2).astype(np.int64)
    # guard against float rounding at cell boundaries
    off = i * (2 * s - i - 1) // 2
    too_big = off > t
    i[too_big] -= 1
    off = i * (2 * s - i - 1) // 2
    too_small = t >= off + (s - i - 1)
    i[too_small] += 1
    off = i * (2 * s - i - 1) // 2
    j = t - off + i + 1
    return i, j


def sample_sbm(spec: SbmSpec) -> tuple[Graph, Partition]:
    """One SBM draw: every unordered pair {i, j} appears independently with
    probability block_matrix[z_i, z_j]. returns the graph (external ids are
    0..n-1) and the planted labels."""
    sizes = spec.block_sizes()
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    labels = np.repeat(np.arange(spec.k, dtype=np.int64), sizes)
    rng = np.random.default_rng(spec.seed)
    chunks_u: list[np.ndarray] = []
    chunks_v: list[np.ndarray] = []
    for k in range(spec.k):
        for l in range(k, spec.k):
            p = float(spec.block_matrix[k, l])
            if k == l:
                s = int(sizes[k])
                pos = _sample_positions(rng, s * (s - 1) // 2, p)
                i, j = _triangular_unrank(pos, s)
                chunks_u.append(i + offsets[k])
                chunks_v.append(j + offsets[k])
            else:
                sl = int(sizes[l])
                pos = _sample_positions(rng, int(sizes[k]) * sl, p)
                chunks_u.append(pos // sl + offsets[k])
                chunks_v.append(pos % sl + offsets[l])
    u = np.concatenate(chunks_u) if chunks_u else np.empty(0, dtype=np.int64)
    v = np.concatenate(chunks_v) if chunks_v else np.empty(0, dtype=np.int64)
    pairs = np.stack([u, v], axis=1).astype(np.int64)
    ext = np.arange(spec.n, dtype=np.int64)
    g = _from_internal_edges(spec.n, pairs, ext, {i: i for i in range(spec.n)})
    return g, Partition(labels=labels)


@dataclass(frozen=True)
class ReplicateStats:
    """Curvature values split by whether the edge stays inside a community."""

    within_values: np.ndarray
    across_values: np.ndarray

    @property
    def within_count(self) -> int:
        return len(self.within_values)

    @property
    def across_count(self) -> int:
        return len(self.across_values)


def split_by_community(g: Graph, labels: Partition, values: np.ndarray) -> ReplicateStats:
    same = labels.labels[g.edges_u] == labels.labels[g.edges_v]
    return ReplicateStats(within_values=values[same], across_values=values[~same])


def percentile_rank(v: float, values) -> float:
    """Weak percentile rank |{x <= v}| / |values|."""
    arr = np.asarray(values, dtype=np.float64)
    if len(arr) == 0:
        raise PreconditionError("empty set")
    return float(np.count_nonzero(arr <= v)) / len(arr)


def pps_indicator(stats: ReplicateStats) -> int:
    """1 iff min within-community value >= max across-community value.
    Either side empty counts as (vacuously) separated."""
    if stats.across_count == 0 or stats.within_count == 0:
        return 1
    return int(stats.within_values.min() >= stats.across_values.max())


def aer(stats: ReplicateStats) -> float:
    """Share of within-community edges below the largest across value."""
    if stats.across_count == 0 or stats.within_count == 0:
        return 0.0
    cutoff = stats.across_values.max()
    return float(np.count_nonzero(stats.within_values < cutoff)) / stats.within_count


def aop(stats: ReplicateStats) -> float:
    """Overlap of the two value distributions, in [0, 2] (2 = disjoint,
    within above across)."""
    if stats.across_count == 0 or stats.within_count == 0:
        return 2.0
    lo_w = float(stats.within_values.min())
    hi_a = float(stats.across_values.max())
    return percentile_rank(lo_w, stats.across_values) + 1.0 - percentile_rank(
        hi_a, stats.within_values
    )


_SCORES = ("AER", "AOP", "PPS")


@dataclass(frozen=True)
class GridRecord:
    p1: float
    p2: float
    curvature: CurvatureKind
    score_name: str
    value: float
    replicates: int
    base_seed: int


def default_grid() -> list[tuple[float, float]]:
    """10 p1 values in [0.1, 1.0], each with 10 p2 values in [0.01, p1)."""
    cells: list[tuple[float, float]] = []
    for p1 in np.linspace(0.1, 1.0, 10):
        for p2 in np.linspace(0.01, p1, 10, endpoint=False):
            cells.append((float(p1), float(p2)))
    return cells


def grid_from_lists(p1s: Sequence[float], p2s: Sequence[float]) -> list[tuple[float, float]]:
    cells = [(float(p1), float(p2)) for p1 in p1s for p2 in p2s]
    for p1, p2 in cells:
        if p2 >= p1:
            raise PreconditionError(f"grid requires p2 < p1, got p1={p1} p2={p2}")
    return cells


def replicate_scores(
    n: int, k: int, p1: float, p2: float, seed: int, kinds: Sequence[CurvatureKind]
) -> dict[CurvatureKind, dict[str, float]]:
    """Scores of a single replicate, all curvatures on the same draw."""
    g, labels = sample_sbm(SbmSpec.from_probs(n, k, p1, p2, seed))
    out: dict[CurvatureKind, dict[str, float]] = {}
    for kind in kinds:
        if g.m == 0:
            stats = ReplicateStats(
                within_values=np.empty(0), across_values=np.empty(0)
            )
        else:
            values = curvature_all(g, kind).values
            stats = split_by_community(g, labels, values)
        out[kind] = {
            "PPS": float(pps_indicator(stats)),
            "AER": aer(stats),
            "AOP": aop(stats),
        }
    return out


def _grid_task(args) -> dict[CurvatureKind, dict[str, float]]:
    n, k, p1, p2, seed, kinds = args
    return replicate_scores(n, k, p1, p2, seed, kinds)


def run_grid(
    cells: Iterable[tuple[float, float]],
    n: int,
    k: int,
    replicates: int,
    kinds: Sequence[CurvatureKind],
    base_seed: int,
    workers: int = 1,
) -> list[GridRecord]:
    """Mean PPS/AER/AOP over ``replicates`` seeded draws per grid cell.

    Replicate r of every cell uses seed SplitMix64(base_seed XOR r). Rows
    come out sorted by (p1, p2, curvature, score); any ``workers`` setting
    yields identical results.
    """
    cells = list(cells)
    if replicates < 1:
        raise PreconditionError("need at least one replicate")
    for p1, p2 in cells:
        if p2 >= p1:
            raise PreconditionError(f"grid requires p2 < p1, got p1={p1} p2={p2}")
    kinds = [CurvatureKind(kd) for kd in kinds]
    seeds = [splitmix64(base_seed ^ r) for r in range(replicates)]
    tasks = [
        (n, k, p1, p2, seeds[r], tuple(kinds))
        for (p1, p2) in cells
        for r in range(replicates)
    ]
    if workers <= 1:
        results = [_grid_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_task, tasks, chunksize=8))
    records: list[GridRecord] = []
    for ci, (p1, p2) in enumerate(cells):
        per_rep = results[ci * replicates : (ci + 1) * replicates]
        for kind in kinds:
            for score in _SCORES:
                mean = float(np.mean([rep[kind][score] for rep in per_rep]))
                records.append(
                    GridRecord(
                        p1=p1,
                        p2=p2,
                        curvature=kind,
                        score_name=score,
                        value=mean,
                        replicates=replicates,
                        base_seed=base_seed,
                    )
                )
    records.sort(key=lambda r: (r.p1, r.p2, r.curvature.value, r.score_name))
    return records


def write_grid_csv(records: Sequence[GridRecord], stream: IO[str]) -> None:
    stream.write("p1,p2,curvature,score,value,replicates,base_seed\n")
    for r in records:
        stream.write(
            f"{r.p1:.6g},{r.p2:.6g},{r.curvature.value},{r.score_name},"
            f"{r.value:.6g},{r.replicates},{r.base_seed}\n"
        )
