"""Undirected simple graphs with incrementally maintained triangle counts.

Node ids are dense integers ``0..n-1`` assigned in creation order.  Besides
adjacency the graph keeps, for every node, its degree and the number of
triangles it belongs to, plus two derived counters used by the clustering
attachment models:

* ``active_count``: nodes lying in at least one triangle,
* ``active_connected_pairs``: edges whose endpoints are both active.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Raised on operations that would break simplicity of the graph."""


class EdgeListParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Graph:
    __slots__ = (
        "adj",
        "degree",
        "triangles",
        "edge_count",
        "active_count",
        "active_connected_pairs",
        "_triangle_sum",
        "dirty",
    )

    def __init__(self, n_nodes: int = 0):
        self.adj: list[set[int]] = [set() for _ in range(n_nodes)]
        self.degree: list[int] = [0] * n_nodes
        self.triangles: list[int] = [0] * n_nodes
        self.edge_count = 0
        self.active_count = 0
        self.active_connected_pairs = 0
        self._triangle_sum = 0
        # nodes whose (degree, triangles) changed; consumers clear it
        self.dirty: set[int] = set()

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n_nodes: int | None = None) -> "Graph":
        edges = list(edges)
        top = max((max(e) for e in edges), default=-1) + 1
        g = cls(max(top, n_nodes or 0))
        for i, j in edges:
            g.add_edge(i, j)
        g.dirty.clear()
        return g

    @property
    def n_nodes(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def __repr__(self) -> str:
        return (
            f"Graph(nodes={self.n_nodes}, edges={self.edge_count}, "
            f"triangles={self.total_triangles()}, active={self.active_count})"
        )

    def add_node(self) -> int:
        self.adj.append(set())
        self.degree.append(0)
        self.triangles.append(0)
        node = len(self.adj) - 1
        self.dirty.add(node)
        return node

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def is_active(self, i: int) -> bool:
        return self.triangles[i] > 0

    def _check_node(self, i: int) -> None:
        if not 0 <= i < len(self.adj):
            raise GraphError(f"unknown node {i}")

    def add_edge(self, i: int, j: int) -> int:
        """Insert edge ``{i, j}`` and return the number of triangles it closes."""
        if i == j:
            raise GraphError(f"self-loop at node {i}")
        self._check_node(i)
        self._check_node(j)
        adj = self.adj
        ai, aj = adj[i], adj[j]
        if j in ai:
            raise GraphError(f"duplicate edge {i}-{j}")
        common = ai & aj if len(ai) <= len(aj) else aj & ai
        tri = self.triangles
        newly_active = []
        c = len(common)
        if c:
            if tri[i] == 0:
                newly_active.append(i)
            if tri[j] == 0:
                newly_active.append(j)
            tri[i] += c
            tri[j] += c
            for k in common:
                if tri[k] == 0:
                    newly_active.append(k)
                tri[k] += 1
            self._triangle_sum += 3 * c
            self.dirty.update(common)
        ai.add(j)
        aj.add(i)
        self.degree[i] += 1
        self.degree[j] += 1
        self.edge_count += 1
        self.dirty.add(i)
        self.dirty.add(j)

        pairs = 1 if (tri[i] > 0 and tri[j] > 0) else 0
        if newly_active:
            self.active_count += len(newly_active)
            fresh = set(newly_active)
            for x in newly_active:
                for y in adj[x]:
                    if tri[y] == 0 or (y in fresh and y < x):
                        continue
                    if (x == i and y == j) or (x == j and y == i):
                        continue
                    pairs += 1
        self.active_connected_pairs += pairs
        return c

    def total_triangles(self) -> int:
        return self._triangle_sum // 3

    def edges(self) -> Iterator[tuple[int, int]]:
        for i, nbrs in enumerate(self.adj):
            for j in sorted(nbrs):
                if i < j:
                    yield (i, j)

    def active_nodes(self) -> list[int]:
        return [i for i, t in enumerate(self.triangles) if t > 0]

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.adj = [set(a) for a in self.adj]
        g.degree = list(self.degree)
        g.triangles = list(self.triangles)
        g.edge_count = self.edge_count
        g.active_count = self.active_count
        g.active_connected_pairs = self.active_connected_pairs
        g._triangle_sum = self._triangle_sum
        g.dirty = set()
        return g


def clustering_coefficient(g: Graph, i: int) -> Fraction:
    g._check_node(i)
    d = g.degree[i]
    if d <= 1:
        return Fraction(0)
    return Fraction(2 * g.triangles[i], d * (d - 1))


def total_triangles(g: Graph) -> int:
    s = sum(g.triangles)
    assert s % 3 == 0
    return s // 3


def brute_force_recount(g: Graph) -> list[int]:
    """Per-node triangle counts by scanning every neighbour pair."""
    out = []
    for nbrs in g.adj:
        out.append(sum(1 for a, b in combinations(sorted(nbrs), 2) if b in g.adj[a]))
    return out


def recount_active(g: Graph) -> tuple[int, int]:
    """``(active_count, active_connected_pairs)`` recomputed from scratch."""
    tri = brute_force_recount(g)
    active = sum(1 for t in tri if t > 0)
    pairs = sum(1 for i, j in g.edges() if tri[i] > 0 and tri[j] > 0)
    return active, pairs


# --- reference graphs -----------------------------------------------------

def complete_graph(k: int) -> Graph:
    return Graph.from_edges(combinations(range(k), 2), n_nodes=k)


def triangle() -> Graph:
    return complete_graph(3)


def quadrilateral_example() -> Graph:
    """Four nodes, five edges: the quadrilateral missing one diagonal.

    Node ``i`` here is node ``i + 1`` of the usual 1-based labelling, so the
    missing diagonal is ``{1, 3}``.
    """
    return Graph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)], n_nodes=4)


def path_graph(k: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(k - 1)], n_nodes=k)


# --- text formats ---------------------------------------------------------

def load_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment.

    A ``# nodes N`` comment (as written by :func:`save_edge_list`) pads the
    graph with isolated nodes up to ``N``.
    """
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    n_nodes = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        head = comment.split()
        if len(head) == 2 and head[0] == "nodes" and head[1].isdigit():
            n_nodes = int(head[1])
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise EdgeListParseError(lineno, f"expected 'u v', got {line.strip()!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer node id in {line.strip()!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(lineno, "node ids must be non-negative")
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop at node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListParseError(lineno, f"duplicate edge {u}-{v}")
        seen.add(key)
        edges.append((u, v))
    return Graph.from_edges(edges, n_nodes=n_nodes)


def save_edge_list(g: Graph) -> str:
    lines = [f"# nodes {g.n_nodes}"]
    lines.extend(f"{i} {j}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def export_dot(g: Graph, name: str = "G") -> str:
    """DOT text with active nodes and active-active edges flagged.

    Active nodes are black, edges between two active nodes dark grey, and
    everything else light grey; each element also carries ``active=true`` or
    ``active=false`` so the partition survives without colours.
    """
    tri = g.triangles
    out = [f"graph {name} {{", "  node [shape=point];"]
    for i in range(g.n_nodes):
        if tri[i] > 0:
            out.append(f'  {i} [active=true, color="black"];')
        else:
            out.append(f'  {i} [active=false, color="gray80"];')
    for i, j in g.edges():
        if tri[i] > 0 and tri[j] > 0:
            out.append(f'  {i} -- {j} [active=true, color="gray30"];')
        else:
            out.append(f'  {i} -- {j} [active=false, color="gray80"];')
    out.append("}")
    return "\n".join(out) + "\n"
