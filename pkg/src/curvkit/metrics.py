"""Partition/cover agreement metrics and a built-in label propagation
baseline, so detection quality can be evaluated without external libraries.

ARI follows the Hubert-Arabie adjusted form. AMI uses natural-log entropies,
the exact hypergeometric expected mutual information, and arithmetic-mean
normalization. Cover comparison is symmetric average-best-match F1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import PreconditionError
from .graph import Cover, Graph, Partition

__all__ = [
    "ContingencyTable",
    "DetectionResult",
    "contingency",
    "ari",
    "ami",
    "overlapping_f1",
    "lpa_detect",
]


@dataclass(frozen=True)
class ContingencyTable:
    """Sparse co-assignment counts between two partitions of N nodes."""

    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    total: int


def _check_same_nodes(a: Partition, b: Partition) -> None:
    if a.n != b.n:
        raise PreconditionError("node-set mismatch")
    if a.n == 0:
        raise PreconditionError("empty partitions")


def contingency(a: Partition, b: Partition) -> ContingencyTable:
    _check_same_nodes(a, b)
    _, ra = np.unique(a.labels, return_inverse=True)
    _, rb = np.unique(b.labels, return_inverse=True)
    n_rows = int(ra.max()) + 1
    n_cols = int(rb.max()) + 1
    combined, counts = np.unique(ra.astype(np.int64) * n_cols + rb, return_counts=True)
    rows = combined // n_cols
    cols = combined % n_cols
    row_marg = np.bincount(ra, minlength=n_rows).astype(np.int64)
    col_marg = np.bincount(rb, minlength=n_cols).astype(np.int64)
    return ContingencyTable(
        rows=rows.astype(np.int64),
        cols=cols.astype(np.int64),
        counts=counts.astype(np.int64),
        row_marginals=row_marg,
        col_marginals=col_marg,
        total=a.n,
    )


def _comb2(x: np.ndarray) -> np.ndarray:
    return x * (x - 1) // 2


def ari(a: Partition, b: Partition) -> float:
    """Hubert-Arabie adjusted Rand index; two equal trivial partitions
    (numerator and denominator both zero) score 1.0."""
    ct = contingency(a, b)
    index = float(_comb2(ct.counts).sum())
    sum_a = float(_comb2(ct.row_marginals).sum())
    sum_b = float(_comb2(ct.col_marginals).sum())
    pairs = ct.total * (ct.total - 1) / 2
    expected = sum_a * sum_b / pairs if pairs else 0.0
    num = index - expected
    den = 0.5 * (sum_a + sum_b) - expected
    if den == 0.0:
        return 1.0 if num == 0.0 else 0.0
    return num / den


def _entropy(marginals: np.ndarray, total: int) -> float:
    p = marginals[marginals > 0] / total
    return float(-(p * np.log(p)).sum())


def _expected_mi(row_marg: np.ndarray, col_marg: np.ndarray, total: int) -> float:
    """Exact E[MI] under the permutation (hypergeometric) model.

    O(R * C * N) in the worst case; intended for modest label counts.
    """
    n = total
    lg = gammaln(np.arange(n + 2, dtype=np.float64) + 1.0)  # lg[x] = ln(x!)
    emi = 0.0
    log_n = math.log(n)
    for a_i in row_marg:
        a_i = int(a_i)
        for b_j in col_marg:
            b_j = int(b_j)
            start = max(1, a_i + b_j - n)
            stop = min(a_i, b_j)
            for nij in range(start, stop + 1):
                log_p = (
                    lg[a_i]
                    + lg[b_j]
                    + lg[n - a_i]
                    + lg[n - b_j]
                    - lg[n]
                    - lg[nij]
                    - lg[a_i - nij]
                    - lg[b_j - nij]
                    - lg[n - a_i - b_j + nij]
                )
                emi += (nij / n) * (log_n + math.log(nij) - math.log(a_i * b_j)) * math.exp(log_p)
    return emi


def _identical_partitions(ct: ContingencyTable) -> bool:
    # one nonzero cell per row and per column <=> same partition up to names
    return (
        len(ct.counts) == len(ct.row_marginals) == len(ct.col_marginals)
        and len(set(ct.rows.tolist())) == len(ct.counts)
        and len(set(ct.cols.tolist())) == len(ct.counts)
    )


def ami(a: Partition, b: Partition) -> float:
    """Adjusted mutual information, clipped to [-1, 1]. Degenerate cases:
    equal trivial partitions give 1.0, otherwise a vanishing denominator
    gives 0.0."""
    ct = contingency(a, b)
    n = ct.total
    nij = ct.counts.astype(np.float64)
    a_i = ct.row_marginals[ct.rows].astype(np.float64)
    b_j = ct.col_marginals[ct.cols].astype(np.float64)
    mi = float(((nij / n) * (np.log(n * nij) - np.log(a_i * b_j))).sum())
    h_a = _entropy(ct.row_marginals, n)
    h_b = _entropy(ct.col_marginals, n)
    emi = _expected_mi(ct.row_marginals, ct.col_marginals, n)
    den = 0.5 * (h_a + h_b) - emi
    if abs(den) <= 1e-12:
        return 1.0 if _identical_partitions(ct) else 0.0
    return float(np.clip((mi - emi) / den, -1.0, 1.0))


def _f1_sets(x: frozenset[int], y: frozenset[int]) -> float:
    inter = len(x & y)
    return 2.0 * inter / (len(x) + len(y))


def overlapping_f1(truth: Cover, pred: Cover) -> float:
    """Symmetric average-best-match F1 between two covers."""
    if len(truth) == 0 or len(pred) == 0:
        raise PreconditionError("empty cover")
    fwd = float(
        np.mean([max(_f1_sets(t, p) for p in pred.communities) for t in truth.communities])
    )
    bwd = float(
        np.mean([max(_f1_sets(t, p) for t in truth.communities) for p in pred.communities])
    )
    return 0.5 * (fwd + bwd)


@dataclass(frozen=True)
class DetectionResult:
    partition: Partition
    iterations: int
    seed: int


def lpa_detect(g: Graph, seed: int, max_sweeps: int = 100) -> DetectionResult:
    """Asynchronous label propagation.

    Every node starts with its own (external) id as label; each sweep visits
    nodes in a fresh seeded random order and each node adopts the most
    frequent label among its neighbors (ties broken uniformly at random).
    Stops when a sweep changes nothing or after max_sweeps. Isolated nodes
    keep their labels. Keying everything on external ids makes the result a
    function of (abstract graph, seed), not of internal numbering.
    """
    if g.n == 0:
        raise PreconditionError("empty graph")
    rng = np.random.default_rng(seed)
    labels = g.ext_ids.astype(np.int64).copy()
    by_ext = np.argsort(g.ext_ids, kind="stable")
    indptr, indices = g.indptr, g.indices
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        changed = False
        for u in by_ext[rng.permutation(g.n)]:
            lo, hi = indptr[u], indptr[u + 1]
            if lo == hi:
                continue
            counts: dict[int, int] = {}
            best = 0
            for v in indices[lo:hi]:
                lab = int(labels[v])
                c = counts.get(lab, 0) + 1
                counts[lab] = c
                if c > best:
                    best = c
            tied = sorted(lab for lab, c in counts.items() if c == best)
            pick = tied[0] if len(tied) == 1 else tied[int(rng.integers(len(tied)))]
            if pick != labels[u]:
                labels[u] = pick
                changed = True
        if not changed:
            break
    return DetectionResult(partition=Partition(labels=labels.copy()), iterations=sweeps, seed=seed)
