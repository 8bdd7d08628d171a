"""Immutable undirected simple graphs in compressed adjacency form.

Node ids found in input files ("external" ids) are remapped to a dense
internal range 0..n-1 in order of first appearance; every query answers in
internal ids and every serialization writes external ids. Edges are stored
once in canonical order: (u, v) with u < v, sorted lexicographically.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import FormatError, PreconditionError

__all__ = [
    "Graph",
    "Partition",
    "Cover",
    "BuildReport",
    "build_graph",
    "parse_edge_list",
    "parse_gml_subset",
    "parse_community_file",
    "bfs_distances",
    "connected_components",
    "diameter",
    "spectral_gap",
    "cheeger_constant",
    "remove_edges",
    "write_edge_list",
    "graph_fingerprint",
]

_DIAMETER_NODE_LIMIT = 10_000
_SPECTRAL_NODE_LIMIT = 2_000
_CHEEGER_NODE_LIMIT = 20


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph over internal ids 0..n-1.

    Attributes
    ----------
    indptr, indices : CSR adjacency; ``indices[indptr[i]:indptr[i+1]]`` is the
        strictly ascending neighbor list of node i.
    ext_ids : external id of each internal node.
    id_map : external id -> internal id.
    edges_u, edges_v : canonical edge endpoints, u < v, lexicographic order.
    """

    indptr: np.ndarray
    indices: np.ndarray
    ext_ids: np.ndarray
    id_map: dict[int, int] = field(repr=False)
    edges_u: np.ndarray
    edges_v: np.ndarray

    @property
    def n(self) -> int:
        return len(self.ext_ids)

    @property
    def m(self) -> int:
        return len(self.edges_u)

    def degree(self, i: int) -> int:
        self._check_node(i)
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        self._check_node(i)
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        row = self.indices[self.indptr[u] : self.indptr[u + 1]]
        k = np.searchsorted(row, v)
        return k < len(row) and row[k] == v

    def canonical_edges(self) -> Iterator[tuple[int, int]]:
        for u, v in zip(self.edges_u.tolist(), self.edges_v.tolist()):
            yield u, v

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise PreconditionError(f"node id {i} out of range [0, {self.n})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edges_u, other.edges_u)
            and np.array_equal(self.edges_v, other.edges_v)
            and np.array_equal(self.ext_ids, other.ext_ids)
        )


@dataclass(frozen=True)
class Partition:
    """Disjoint community labels, one integer label per internal node."""

    labels: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    def community_count(self) -> int:
        return len(np.unique(self.labels))

    def as_dict(self) -> dict[int, int]:
        return {i: int(l) for i, l in enumerate(self.labels)}


@dataclass(frozen=True)
class Cover:
    """Possibly overlapping communities, each a non-empty set of node ids.

    Ids stay in whatever space the producer used (parse_community_file keeps
    external ids; detection outputs use whatever they were given).
    """

    communities: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        for c in self.communities:
            if not c:
                raise PreconditionError("empty community in cover")

    def __len__(self) -> int:
        return len(self.communities)


@dataclass(frozen=True)
class BuildReport:
    loops_dropped: int
    duplicates_dropped: int


def _from_internal_edges(
    n: int, pairs: np.ndarray, ext_ids: np.ndarray, id_map: dict[int, int]
) -> Graph:
    # pairs: (m, 2) internal-id array, already simple, u != v, unordered pairs.
    if len(pairs):
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        order = np.lexsort((hi, lo))
        edges_u = np.ascontiguousarray(lo[order])
        edges_v = np.ascontiguousarray(hi[order])
        both = np.concatenate([pairs[:, 0], pairs[:, 1]])
        other = np.concatenate([pairs[:, 1], pairs[:, 0]])
        counts = np.bincount(both, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        order2 = np.lexsort((other, both))
        indices = np.ascontiguousarray(other[order2])
    else:
        edges_u = np.empty(0, dtype=np.int64)
        edges_v = np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices = np.empty(0, dtype=np.int64)
    return Graph(
        indptr=indptr,
        indices=indices,
        ext_ids=ext_ids,
        id_map=id_map,
        edges_u=edges_u,
        edges_v=edges_v,
    )


def build_graph(
    edge_pairs: Iterable[tuple[int, int]],
    nodes: Sequence[int] = (),
) -> tuple[Graph, BuildReport]:
    """Build a Graph from external-id pairs.

    Self-loops are dropped, duplicate edges (either orientation) are
    deduplicated, and ids are remapped densely in first-appearance order
    (declared ``nodes`` first, then edge endpoints). Returns the graph and a
    report of how many loops/duplicates were dropped.
    """
    id_map: dict[int, int] = {}
    ext: list[int] = []

    def intern(x: int) -> int:
        if x < 0:
            raise FormatError(f"negative node id {x}")
        i = id_map.get(x)
        if i is None:
            i = len(ext)
            id_map[x] = i
            ext.append(x)
        return i

    for x in nodes:
        intern(int(x))

    loops = 0
    dups = 0
    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []
    for a, b in edge_pairs:
        u = intern(int(a))
        v = intern(int(b))
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        pairs.append(key)
    if not ext:
        raise PreconditionError("empty graph")
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    g = _from_internal_edges(len(ext), arr, np.asarray(ext, dtype=np.int64), id_map)
    return g, BuildReport(loops_dropped=loops, duplicates_dropped=dups)


def parse_edge_list(stream: IO[str]) -> Graph:
    """Parse SNAP-style edge lists: '#' comments, two ids per line."""
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected 2 tokens, got {len(tokens)}")
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer token") from exc
        if a < 0 or b < 0:
            raise FormatError(f"line {lineno}: negative node id")
        pairs.append((a, b))
    if not pairs:
        raise PreconditionError("empty graph")
    g, _ = build_graph(pairs)
    return g


def _tokenize_gml(stream: IO[str]) -> list[str]:
    tokens: list[str] = []
    for raw in stream:
        line = raw.split("#", 1)[0] if raw.lstrip().startswith("#") else raw
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
            elif ch == '"':
                j = line.find('"', i + 1)
                if j < 0:
                    raise FormatError("unterminated string in GML")
                tokens.append(line[i : j + 1])
                i = j + 1
            elif ch in "[]":
                tokens.append(ch)
                i += 1
            else:
                j = i
                while j < len(line) and not line[j].isspace() and line[j] not in "[]":
                    j += 1
                tokens.append(line[i:j])
                i = j
    return tokens


def parse_gml_subset(stream: IO[str]) -> tuple[Graph, Partition]:
    """Parse the GML subset used by labeled small-network datasets.

    Interprets ``node [ id N label "..." value V ]`` and
    ``edge [ source A target B ]`` blocks; every other key is skipped
    (including nested blocks). The integer ``value`` of each node becomes its
    community label in the returned Partition.
    """
    tokens = _tokenize_gml(stream)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError("unbalanced brackets in GML")
        t = tokens[pos]
        pos += 1
        return t

    def skip_value() -> None:
        t = take()
        if t == "[":
            depth = 1
            while depth:
                t = take()
                if t == "[":
                    depth += 1
                elif t == "]":
                    depth -= 1
        elif t == "]":
            raise FormatError("unexpected ']' in GML")

    def parse_int(context: str) -> int:
        t = take()
        try:
            return int(t)
        except ValueError as exc:
            raise FormatError(f"non-integer {context} in GML: {t!r}") from exc

    nodes: list[int] = []
    values: dict[int, int] = {}
    edges: list[tuple[int, int]] = []

    def parse_block(kind: str) -> None:
        if take() != "[":
            raise FormatError(f"{kind} block missing '['")
        fields: dict[str, int] = {}
        while True:
            t = peek()
            if t is None:
                raise FormatError("unbalanced brackets in GML")
            if t == "]":
                take()
                break
            key = take()
            if kind == "node" and key in ("id", "value"):
                fields[key] = parse_int(f"node {key}")
            elif kind == "edge" and key in ("source", "target"):
                fields[key] = parse_int(f"edge {key}")
            else:
                skip_value()
        if kind == "node":
            if "id" not in fields:
                raise FormatError("node without id in GML")
            if "value" not in fields:
                raise FormatError(f"missing value on node {fields['id']}")
            if fields["id"] in values:
                raise FormatError(f"duplicate node id {fields['id']} in GML")
            nodes.append(fields["id"])
            values[fields["id"]] = fields["value"]
        else:
            if "source" not in fields or "target" not in fields:
                raise FormatError("edge without source/target in GML")
            edges.append((fields["source"], fields["target"]))

    depth_guard = 0
    while pos < len(tokens):
        t = take()
        if t == "node":
            parse_block("node")
        elif t == "edge":
            parse_block("edge")
        elif t == "[":
            depth_guard += 1
        elif t == "]":
            depth_guard -= 1
            if depth_guard < 0:
                raise FormatError("unbalanced brackets in GML")
        else:
            nxt = peek()
            if nxt is not None and nxt != "[" and nxt != "]":
                take()  # plain key-value pair at graph level
    if depth_guard != 0:
        raise FormatError("unbalanced brackets in GML")
    if not nodes:
        raise PreconditionError("empty graph")
    for a, b in edges:
        if a not in values or b not in values:
            raise FormatError(f"edge references unknown node id ({a}, {b})")
    g, _ = build_graph(edges, nodes=nodes)
    labels = np.array([values[int(x)] for x in g.ext_ids], dtype=np.int64)
    return g, Partition(labels=labels)


def parse_community_file(stream: IO[str]) -> Cover:
    """Parse ground-truth covers: one community per line, external ids."""
    communities: list[frozenset[int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            ids = frozenset(int(t) for t in line.split())
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer token") from exc
        communities.append(ids)
    if not communities:
        raise PreconditionError("empty cover")
    return Cover(communities=tuple(communities))


def degree(g: Graph, i: int) -> int:
    return g.degree(i)


def neighbors(g: Graph, i: int) -> np.ndarray:
    return g.neighbors(i)


def common_neighbor_count(g: Graph, i: int, j: int) -> int:
    """|N(i) & N(j)| by sorted-list intersection, O(deg(i) + deg(j))."""
    a = g.neighbors(i)
    b = g.neighbors(j)
    ia = ib = count = 0
    while ia < len(a) and ib < len(b):
        x, y = a[ia], b[ib]
        if x == y:
            count += 1
            ia += 1
            ib += 1
        elif x < y:
            ia += 1
        else:
            ib += 1
    return count


def bfs_distances(g: Graph, source: int, max_depth: int | None = None) -> dict[int, int]:
    """Hop distances from source; nodes beyond max_depth (or unreachable)
    are absent from the result."""
    g._check_node(source)
    dist = _bfs_array(g, source, max_depth)
    reached = np.flatnonzero(dist >= 0)
    return {int(i): int(dist[i]) for i in reached}


def _bfs_array(g: Graph, source: int, max_depth: int | None = None) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    d = 0
    indptr, indices = g.indptr, g.indices
    while frontier and (max_depth is None or d < max_depth):
        d += 1
        nxt: list[int] = []
        for u in frontier:
            for v in indices[indptr[u] : indptr[u + 1]]:
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(int(v))
        frontier = nxt
    return dist


def connected_components(g: Graph) -> Partition:
    """Labels are component indices ordered by smallest contained node id."""
    labels = np.full(g.n, -1, dtype=np.int64)
    comp = 0
    indptr, indices = g.indptr, g.indices
    for s in range(g.n):
        if labels[s] >= 0:
            continue
        stack = [s]
        labels[s] = comp
        while stack:
            u = stack.pop()
            for v in indices[indptr[u] : indptr[u + 1]]:
                if labels[v] < 0:
                    labels[v] = comp
                    stack.append(int(v))
        comp += 1
    return Partition(labels=labels)


def _require_connected(g: Graph, op: str) -> None:
    if g.n == 0:
        raise PreconditionError(f"{op}: empty graph")
    if connected_components(g).community_count() != 1:
        raise PreconditionError("disconnected")


def diameter(g: Graph) -> int:
    """Max BFS eccentricity over all nodes. Test-scale only (n <= 10^4)."""
    if g.n > _DIAMETER_NODE_LIMIT:
        raise PreconditionError(f"diameter limited to n <= {_DIAMETER_NODE_LIMIT}")
    _require_connected(g, "diameter")
    best = 0
    for s in range(g.n):
        dist = _bfs_array(g, s)
        best = max(best, int(dist.max()))
    return best


def spectral_gap(g: Graph) -> float:
    """Smallest non-zero eigenvalue of the normalized Laplacian
    I - D^{-1/2} A D^{-1/2} (dense eigensolve; test support only)."""
    from scipy.linalg import eigh

    if g.n > _SPECTRAL_NODE_LIMIT:
        raise PreconditionError(f"spectral_gap limited to n <= {_SPECTRAL_NODE_LIMIT}")
    _require_connected(g, "spectral_gap")
    deg = g.degrees().astype(np.float64)
    if (deg == 0).any():
        raise PreconditionError("spectral_gap requires no isolated nodes")
    a = np.zeros((g.n, g.n), dtype=np.float64)
    a[g.edges_u, g.edges_v] = 1.0
    a[g.edges_v, g.edges_u] = 1.0
    dinv = 1.0 / np.sqrt(deg)
    lap = np.eye(g.n) - dinv[:, None] * a * dinv[None, :]
    vals = eigh(lap, eigvals_only=True)
    # connected graph: exactly one zero eigenvalue
    return float(vals[1])


def cheeger_constant(g: Graph) -> float:
    """Exhaustive Cheeger constant, Chung's normalized form:
    min over S with vol(S) <= vol(V)/2 of |boundary(S)| / vol(S)."""
    if g.n > _CHEEGER_NODE_LIMIT:
        raise PreconditionError("brute force limit")
    _require_connected(g, "cheeger_constant")
    deg = g.degrees()
    total_vol = int(deg.sum())
    nbr_mask = np.zeros(g.n, dtype=np.int64)
    for i in range(g.n):
        mask = 0
        for v in g.neighbors(i):
            mask |= 1 << int(v)
        nbr_mask[i] = mask
    best = float("inf")
    for s_bits in range(1, 1 << g.n):
        vol = 0
        boundary = 0
        bits = s_bits
        while bits:
            i = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            vol += int(deg[i])
            boundary += bin(int(nbr_mask[i]) & ~s_bits).count("1")
            if 2 * vol > total_vol:
                break
        else:
            if vol > 0:
                best = min(best, boundary / vol)
    return best


def remove_edges(g: Graph, keep) -> Graph:
    """New graph over the same node set keeping only the given edges.

    ``keep`` is a boolean mask aligned to canonical edge order, a predicate
    called as keep(u, v) on internal ids, or an iterable of internal-id
    pairs (orientation-insensitive).
    """
    if isinstance(keep, np.ndarray) and keep.dtype == bool:
        if len(keep) != g.m:
            raise PreconditionError("keep mask length != edge count")
        mask = keep
    elif callable(keep):
        mask = np.fromiter(
            (bool(keep(u, v)) for u, v in zip(g.edges_u.tolist(), g.edges_v.tolist())),
            dtype=bool,
            count=g.m,
        )
    else:
        wanted = {(min(u, v), max(u, v)) for u, v in keep}
        mask = np.fromiter(
            ((u, v) in wanted for u, v in zip(g.edges_u.tolist(), g.edges_v.tolist())),
            dtype=bool,
            count=g.m,
        )
    pairs = np.stack([g.edges_u[mask], g.edges_v[mask]], axis=1)
    return _from_internal_edges(g.n, pairs, g.ext_ids, dict(g.id_map))


def write_edge_list(g: Graph, stream: IO[str]) -> None:
    """One 'u<TAB>v' line per canonical edge, external ids, written as
    (min, max) pairs in lexicographic order so the file itself is canonical
    and re-parsing a written file is byte-stable."""
    ext = g.ext_ids
    a = ext[g.edges_u]
    b = ext[g.edges_v]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    order = np.lexsort((hi, lo))
    for u, v in zip(lo[order].tolist(), hi[order].tolist()):
        stream.write(f"{int(u)}\t{int(v)}\n")


def graph_fingerprint(g: Graph) -> str:
    """Stable hash of the canonical edge list (and node count)."""
    h = hashlib.sha256()
    h.update(str(g.n).encode())
    h.update(g.edges_u.astype("<i8").tobytes())
    h.update(g.edges_v.astype("<i8").tobytes())
    return h.hexdigest()
