"""Finite simple graphs and the exact combinatorial/linear-algebra routines.

Graphs are immutable: vertices are indices 0..n-1 with string labels,
edges are index pairs (u, v) with u < v.  Everything downstream (modulus
solvers, metrics) treats a Graph as a value.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64


class GraphFormatError(ValueError):
    """Malformed graph input (parse errors, self-loops, duplicates, disconnection)."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]
    # Derived, excluded from equality/hash.
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(compare=False, repr=False)
    edge_index: dict = field(compare=False, repr=False)
    label_index: dict = field(compare=False, repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def index(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise GraphFormatError(f"unknown node label {label!r}") from None


@dataclass(frozen=True)
class Path:
    """A simple path, stored as its vertex sequence plus edge indices."""

    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.edge_indices)

    def usage(self, num_edges: int) -> np.ndarray:
        """Edge usage counts N(gamma, e) as a float vector."""
        u = np.zeros(num_edges)
        for e in self.edge_indices:
            u[e] += 1.0
        return u


@dataclass(frozen=True)
class CutResult:
    value: int
    source_side: tuple[int, ...]
    cut_edges: tuple[int, ...]


def build_graph(labels, edge_pairs) -> Graph:
    """Assemble a validated Graph from labels and index pairs.

    Rejects self-loops, duplicate edges (either orientation), out-of-range
    indices, and disconnected graphs.
    """
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    if n == 0:
        raise GraphFormatError("empty graph")
    if len(set(labels)) != n:
        raise GraphFormatError("duplicate node labels")
    seen = set()
    edges = []
    for u, v in edge_pairs:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) references a missing node")
        if u == v:
            raise GraphFormatError(f"self-loop at node {labels[u]!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {labels[key[0]]!r} -- {labels[key[1]]!r}")
        seen.add(key)
        edges.append(key)
    adj_lists: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (u, v) in enumerate(edges):
        adj_lists[u].append((v, k))
        adj_lists[v].append((u, k))
    # Neighbor order is part of the determinism contract: ascending index.
    adjacency = tuple(tuple(sorted(lst)) for lst in adj_lists)
    edge_index = {}
    for k, (u, v) in enumerate(edges):
        edge_index[(u, v)] = k
        edge_index[(v, u)] = k
    g = Graph(
        n=n,
        edges=tuple(edges),
        labels=labels,
        adjacency=adjacency,
        edge_index=edge_index,
        label_index={lab: i for i, lab in enumerate(labels)},
    )
    if n > 1:
        comp = _component(g, 0)
        if len(comp) != n:
            inside = [labels[i] for i in sorted(comp)][:6]
            outside = [labels[i] for i in range(n) if i not in comp][:6]
            raise GraphFormatError(
                f"graph is disconnected: component containing {inside} "
                f"does not reach {outside}"
            )
    return g


def _component(g: Graph, src: int) -> set:
    seen = {src}
    q = deque([src])
    while q:
        u = q.popleft()
        for v, _ in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                q.append(v)
    return seen


def parse_graph(text: str) -> Graph:
    """Parse whitespace-separated edge-list text.

    One edge per line, two node labels per edge; '#' starts a comment;
    labels are arbitrary non-whitespace strings, numbered in first-appearance
    order.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    pairs = []
    pair_lines = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphFormatError(f"line {ln}: expected two node labels, got {len(toks)}")
        uv = []
        for t in toks:
            if t not in index:
                index[t] = len(labels)
                labels.append(t)
            uv.append(index[t])
        if uv[0] == uv[1]:
            raise GraphFormatError(f"line {ln}: self-loop at {toks[0]!r}")
        key = (min(uv), max(uv))
        if key in pair_lines:
            raise GraphFormatError(f"line {ln}: duplicate edge {toks[0]!r} -- {toks[1]!r}")
        pair_lines.append(key)
        pairs.append(key)
    if not labels:
        raise GraphFormatError("no edges found")
    return build_graph(labels, pairs)


def parse_graph_json(text: str) -> Graph:
    """Parse the JSON graph form: {"nodes": [...], "edges": [[u, v], ...]}.

    Edge entries name nodes by label (values are matched after str()).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON graph: {exc}") from None
    if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
        raise GraphFormatError('JSON graph needs "nodes" and "edges" keys')
    labels = [str(x) for x in doc["nodes"]]
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise GraphFormatError("duplicate node labels in JSON graph")
    pairs = []
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphFormatError(f"edge #{k}: expected a pair")
        try:
            pairs.append((index[str(e[0])], index[str(e[1])]))
        except KeyError as exc:
            raise GraphFormatError(f"edge #{k}: unknown node {exc.args[0]!r}") from None
    return build_graph(labels, pairs)


def load_graph(path: str) -> Graph:
    """Load a graph file, sniffing JSON vs edge-list by the leading character."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph(text)


# ---------------------------------------------------------------------------
# Standard generators (string labels "0".."n-1" unless noted).


def path_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError("path graph needs n >= 2")
    return build_graph([str(i) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle graph needs n >= 3")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return build_graph([str(i) for i in range(n)], edges)


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return build_graph([str(i) for i in range(n)], edges)


def parallel_paths(k: int, hops: int) -> Graph:
    """k internally disjoint paths of `hops` edges joining node 0 to node 1."""
    if k < 1 or hops < 1:
        raise ValueError("need k >= 1 and hops >= 1")
    if hops == 1:
        if k != 1:
            raise ValueError("hops=1 with k > 1 would need parallel edges")
        return build_graph(["0", "1"], [(0, 1)])
    labels = ["0", "1"]
    edges = []
    for _ in range(k):
        prev = 0
        for step in range(hops - 1):
            labels.append(str(len(labels)))
            node = len(labels) - 1
            edges.append((prev, node))
            prev = node
        edges.append((prev, 1))
    return build_graph(labels, edges)


def erdos_renyi_connected(n: int, expected_degree: float, seed: int) -> Graph:
    """Connected G(n, q) sample with q = expected_degree / (n - 1).

    Pairs (i, j), i < j, are visited in lexicographic order with one uniform
    draw each; disconnected samples are discarded and the draw continues on
    the same splitmix64 stream, so a seed pins the whole rejection sequence.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not (0.0 < expected_degree <= n - 1):
        raise ValueError("expected_degree must lie in (0, n-1]")
    q = expected_degree / (n - 1)
    stream = SplitMix64(seed)
    labels = [str(i) for i in range(n)]
    for _ in range(100_000):
        pairs = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if stream.random() < q
        ]
        if not pairs:
            continue
        try:
            return build_graph(labels, pairs)
        except GraphFormatError:
            continue  # disconnected (or isolated nodes); resample
    raise ValueError(
        f"no connected G({n}, {q:.4f}) sample in 100000 attempts; "
        "expected_degree is too small"
    )


# ---------------------------------------------------------------------------
# Exact routines.


def bfs_hops(g: Graph, src: int) -> np.ndarray:
    """Hop counts from src to every node."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v, _ in g.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def shortest_path_hops(g: Graph, a: int, b: int) -> int:
    _check_node(g, a)
    _check_node(g, b)
    return int(bfs_hops(g, a)[b])


def min_cut(g: Graph, a: int, b: int) -> CutResult:
    """Minimum a/b edge cut by Edmonds-Karp with unit capacities.

    Each undirected edge becomes a pair of unit arcs; the returned side is
    the set of nodes residual-reachable from a, and cut_edges are the edge
    indices crossing it.
    """
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise ValueError("min cut needs distinct endpoints")
    m = g.num_edges
    # arcs 2k (u->v) and 2k+1 (v->u); residual cap starts at 1 each.
    res = np.ones(2 * m, dtype=np.int64)
    arc_to = np.empty(2 * m, dtype=np.int64)
    out_arcs: list[list[int]] = [[] for _ in range(g.n)]
    for k, (u, v) in enumerate(g.edges):
        arc_to[2 * k] = v
        arc_to[2 * k + 1] = u
        out_arcs[u].append(2 * k)
        out_arcs[v].append(2 * k + 1)
    flow = 0
    while True:
        parent_arc = np.full(g.n, -1, dtype=np.int64)
        parent_arc[a] = -2
        q = deque([a])
        while q and parent_arc[b] == -1:
            u = q.popleft()
            for arc in out_arcs[u]:
                v = int(arc_to[arc])
                if res[arc] > 0 and parent_arc[v] == -1:
                    parent_arc[v] = arc
                    q.append(v)
        if parent_arc[b] == -1:
            break
        v = b
        while v != a:
            arc = int(parent_arc[v])
            res[arc] -= 1
            res[arc ^ 1] += 1
            v = int(arc_to[arc ^ 1])
        flow += 1
    side = {a}
    q = deque([a])
    while q:
        u = q.popleft()
        for arc in out_arcs[u]:
            v = int(arc_to[arc])
            if res[arc] > 0 and v not in side:
                side.add(v)
                q.append(v)
    cut = tuple(
        k for k, (u, v) in enumerate(g.edges) if (u in side) != (v in side)
    )
    return CutResult(value=flow, source_side=tuple(sorted(side)), cut_edges=cut)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian L = sum over edges of (δu - δv)(δu - δv)^T."""
    L = np.zeros((g.n, g.n))
    for u, v in g.edges:
        L[u, u] += 1.0
        L[v, v] += 1.0
        L[u, v] -= 1.0
        L[v, u] -= 1.0
    return L


def voltage(g: Graph, a: int, b: int) -> np.ndarray:
    """Solve L x = delta_b - delta_a with sum(x) = 0.

    Adding the rank-one term J/n makes the system SPD for a connected graph;
    the constraint sum(x) = 0 then holds automatically (multiply the system
    by the all-ones vector).
    """
    _check_node(g, a)
    _check_node(g, b)
    L = laplacian(g)
    A = L + np.full((g.n, g.n), 1.0 / g.n)
    rhs = np.zeros(g.n)
    rhs[b] += 1.0
    rhs[a] -= 1.0
    return np.linalg.solve(A, rhs)


def effective_resistance(g: Graph, a: int, b: int) -> float:
    """Two-point effective resistance (a = b gives 0 by convention)."""
    if a == b:
        _check_node(g, a)
        return 0.0
    x = voltage(g, a, b)
    return float(x[b] - x[a])


def effective_resistance_matrix(g: Graph) -> np.ndarray:
    """All-pairs effective resistance from one dense factorization.

    With M = (L + J/n)^{-1}, the J-parts cancel in the quadratic form and
    R(a, b) = M_aa + M_bb - 2 M_ab.
    """
    M = np.linalg.inv(laplacian(g) + np.full((g.n, g.n), 1.0 / g.n))
    # inv() of a symmetric matrix is not bit-symmetric; R must be.
    M = 0.5 * (M + M.T)
    d = np.diag(M)
    R = d[:, None] + d[None, :] - 2.0 * M
    np.fill_diagonal(R, 0.0)
    return R


def path_from_vertices(g: Graph, vertices) -> Path:
    """Build a Path from a vertex sequence, validating adjacency and simplicity."""
    verts = tuple(int(v) for v in vertices)
    if len(verts) < 1:
        raise ValueError("empty vertex sequence")
    if len(set(verts)) != len(verts):
        raise ValueError("vertex sequence revisits a node; paths must be simple")
    eidx = []
    for x, y in zip(verts, verts[1:]):
        try:
            eidx.append(g.edge_index[(x, y)])
        except KeyError:
            raise ValueError(f"vertices {x} and {y} are not adjacent") from None
    return Path(vertices=verts, edge_indices=tuple(eidx))


def enumerate_simple_paths(g: Graph, a: int, b: int, cap: int = 100_000) -> list[Path]:
    """All simple a-b paths, DFS in ascending-neighbor order.

    Raises ValueError once more than `cap` paths are found.
    """
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise ValueError("need distinct endpoints")
    out: list[Path] = []
    on_path = [False] * g.n
    verts = [a]
    edges: list[int] = []
    on_path[a] = True

    def visit(u):
        for v, k in g.adjacency[u]:
            if v == b:
                out.append(Path(vertices=tuple(verts) + (b,), edge_indices=tuple(edges) + (k,)))
                if len(out) > cap:
                    raise ValueError(f"more than {cap} simple paths between {a} and {b}")
            elif not on_path[v]:
                on_path[v] = True
                verts.append(v)
                edges.append(k)
                visit(v)
                edges.pop()
                verts.pop()
                on_path[v] = False

    visit(a)
    return out


def _check_node(g: Graph, v: int):
    if not (0 <= v < g.n):
        raise ValueError(f"node index {v} out of range for graph with {g.n} nodes")
