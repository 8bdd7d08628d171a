#!/usr/bin/env python3
"""Regenerate data/football_surrogate.gml.

A deterministic schedule-like network standing in for the NCAA Division I
2000 season schedule when the real file (data/football.gml, see README) is
not available: 115 teams in 12 conferences, 613 games. One conference plays
no internal games (independents) and inter-conference games are biased
toward neighboring conferences on a 12-cycle, which reproduces the kind of
label-propagation confusion the real schedule exhibits.

The committed file was produced by exactly this script; rerun it only if
you change the parameters below (and expect recalibration, see tests).
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

CONF_SIZES = [9, 8, 11, 12, 10, 5, 13, 8, 10, 12, 7, 10]  # 115 teams
INDEPENDENTS = 5  # conference index without internal games
TOTAL_EDGES = 613
SEED = 13
INTRA_PER_TEAM = 7.0  # internal games per team (subsampled round robin)
WEAK_CONFS = {10: 4.5}  # conferences with a thinner internal schedule
TAU = 0.85  # inter-conference distance decay on the 12-cycle
INDEP_QUOTA = 11  # out-of-conference game quota for independents
BASE_QUOTA = 5  # out-of-conference game quota for everyone else


def generate() -> tuple[int, np.ndarray, list[tuple[int, int]]]:
    rng = np.random.default_rng(SEED)
    n = sum(CONF_SIZES)
    conf = np.repeat(np.arange(len(CONF_SIZES)), CONF_SIZES)
    offsets = np.concatenate([[0], np.cumsum(CONF_SIZES)])
    edges: set[tuple[int, int]] = set()
    for c, s in enumerate(CONF_SIZES):
        if c == INDEPENDENTS:
            continue
        per_team = WEAK_CONFS.get(c, INTRA_PER_TEAM)
        target = min(s * (s - 1) // 2, int(round(s * per_team / 2)))
        pairs = [
            (offsets[c] + i, offsets[c] + j) for i in range(s) for j in range(i + 1, s)
        ]
        for t in rng.choice(len(pairs), size=target, replace=False):
            edges.add(pairs[t])
    inter_total = TOTAL_EDGES - len(edges)
    quota = np.array(
        [INDEP_QUOTA if conf[i] == INDEPENDENTS else BASE_QUOTA for i in range(n)],
        dtype=np.float64,
    )
    cand: list[tuple[int, int]] = []
    wts: list[float] = []
    k = len(CONF_SIZES)
    for u in range(n):
        for v in range(u + 1, n):
            if conf[u] == conf[v]:
                continue
            d = abs(int(conf[u]) - int(conf[v]))
            d = min(d, k - d)
            cand.append((u, v))
            wts.append(float(np.exp(-d / TAU)))
    # weighted sampling without replacement (exponential race), then honor
    # per-team quotas greedily
    keys = rng.exponential(1.0, size=len(cand)) / np.asarray(wts)
    got = 0
    ranked = np.argsort(keys)
    for t in ranked:
        u, v = cand[t]
        if quota[u] <= 0 or quota[v] <= 0:
            continue
        edges.add((u, v))
        quota[u] -= 1
        quota[v] -= 1
        got += 1
        if got >= inter_total:
            break
    if got < inter_total:
        for t in ranked:
            u, v = cand[t]
            if (u, v) in edges:
                continue
            edges.add((u, v))
            got += 1
            if got >= inter_total:
                break
    return n, conf, sorted(edges)


def main(out_path: str) -> None:
    n, conf, edges = generate()
    assert n == 115 and len(edges) == TOTAL_EDGES, (n, len(edges))
    lines = ["graph [", "  directed 0"]
    for i in range(n):
        lines.append(f'  node [ id {i} label "T{i:03d}" value {int(conf[i])} ]')
    for u, v in edges:
        lines.append(f"  edge [ source {u} target {v} ]")
    lines.append("]")
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out_path}: {n} nodes, {len(edges)} edges")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/football_surrogate.gml")
