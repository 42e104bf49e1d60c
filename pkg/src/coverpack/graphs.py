"""Simple undirected graphs with stable vertex ids, plus standard builders.

Vertices are always 0..n-1.  Graphs are immutable after construction and
safe to share across worker processes.  Builders fix their vertex
numbering explicitly because covers and list assignments refer to ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Loops are rejected; duplicate edges collapse.  ``edges`` is a sorted
    tuple of (u, v) pairs with u < v, ``adj`` a tuple of sorted neighbour
    tuples.
    """

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            norm.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = tuple(sorted(norm))
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def num_edges(self) -> int:
        return len(self.edges)

    def subgraph_without(self, removed) -> "Graph":
        """Induced subgraph on V minus ``removed``, keeping original ids.

        Removed vertices stay as isolated placeholders so slot/vertex
        indexing of an associated cover remains valid.
        """
        gone = set(removed)
        keep = [e for e in self.edges if e[0] not in gone and e[1] not in gone]
        return Graph(self.n, keep)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_regular(self, d: int | None = None) -> bool:
        degs = {len(a) for a in self.adj}
        if len(degs) > 1:
            return False
        if d is None or not degs:
            return True
        return degs.pop() == d

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class DegeneracyOrder:
    """A vertex order where each vertex has at most ``degeneracy`` neighbours
    occurring later in ``order``."""

    order: tuple
    degeneracy: int


def degeneracy(g: Graph) -> DegeneracyOrder:
    """Smallest-first removal order achieving the degeneracy.

    Repeatedly removes a minimum-degree vertex, ties broken by lowest id;
    the removal sequence is returned as ``order`` and satisfies the
    back-degree bound.  Deterministic, so downstream greedy constructions
    are replayable.
    """
    deg = [g.degree(v) for v in range(g.n)]
    alive = set(range(g.n))
    order = []
    d = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        d = max(d, deg[v])
        order.append(v)
        alive.discard(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    return DegeneracyOrder(tuple(order), d)


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adj), default=0)


def clique_number(g: Graph) -> int:
    """Exhaustive clique search; fine for the graph sizes used here."""
    best = 1 if g.n else 0
    adj_sets = [set(a) for a in g.adj]

    def grow(clique, cands):
        nonlocal best
        best = max(best, len(clique))
        for i, v in enumerate(cands):
            if len(clique) + len(cands) - i <= best:
                break
            grow(clique + [v], [w for w in cands[i + 1:] if w in adj_sets[v]])

    grow([], list(range(g.n)))
    return best


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or None for forests (BFS per root)."""
    best = None
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


def edge_not_in_triangle(g: Graph):
    """An edge whose endpoints share no common neighbour.

    Requires a connected cubic graph other than K4; every such graph has
    one.  Distinct precondition failures raise distinct reasons.
    """
    if not g.is_connected():
        raise PreconditionError("not-connected", "graph must be connected")
    if not g.is_regular(3):
        raise PreconditionError("not-cubic", "graph must be 3-regular")
    if g.n == 4:
        raise PreconditionError("is-k4", "K4 has every edge in a triangle")
    adj_sets = [set(a) for a in g.adj]
    for u, v in g.edges:
        if not (adj_sets[u] & adj_sets[v]):
            return (u, v)
    raise RuntimeError("no triangle-free edge found in a cubic non-K4 graph")


def bipartition(g: Graph):
    """(A, B) with max degree over A <= max degree over B, or None if not
    bipartite.  Side assignment is deterministic: within each component the
    lowest vertex starts on side 0; sides are swapped at the end if needed
    to put the smaller maximum degree on A."""
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] >= 0:
            continue
        side[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in g.adj[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    a = tuple(v for v in range(g.n) if side[v] == 0)
    b = tuple(v for v in range(g.n) if side[v] == 1)
    da = max((g.degree(v) for v in a), default=0)
    db = max((g.degree(v) for v in b), default=0)
    return (a, b) if da <= db else (b, a)


# ---------------------------------------------------------------------------
# builders (vertex numbering is part of the contract)
# ---------------------------------------------------------------------------

def path(n: int) -> Graph:
    """Path v0-v1-...-v(n-1)."""
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    """Cycle v0-v1-...-v(n-1)-v0."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete needs n >= 1")
    return Graph(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """Sides 0..a-1 and a..a+b-1."""
    if a < 1 or b < 1:
        raise ValueError("complete_bipartite needs a, b >= 1")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def fan7() -> Graph:
    """Path on vertices 0..5 plus the universal vertex 6."""
    edges = [(i, i + 1) for i in range(5)] + [(i, 6) for i in range(6)]
    return Graph(7, edges)


def petersen() -> Graph:
    """Outer cycle 0..4, inner pentagram 5..9, spokes i-(i+5)."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, edges)


def diamond() -> Graph:
    """K4 minus the edge 0-1; vertices 0 and 1 have degree 2."""
    return Graph(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def diamond_necklace() -> Graph:
    """Two diamonds joined by two bridge edges between their degree-2 vertices.

    Left diamond: 0 (bottom), 1 (top) degree-2; 2, 3 the chorded pair.
    Right diamond: 4 (bottom), 5 (top) degree-2; 6, 7 the chorded pair.
    Bridges 0-4 and 1-5.  The result is 3-regular on 8 vertices (12 edges).
    """
    edges = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
             (4, 6), (4, 7), (5, 6), (5, 7), (6, 7),
             (0, 4), (1, 5)]
    return Graph(8, edges)


def latin_square(n: int) -> Graph:
    """Rook's graph on an n x n grid: cells adjacent iff same row or column.

    Cell (i, j) with 1-based i, j maps to id (i-1)*n + (j-1), row major.
    """
    if n < 1:
        raise ValueError("latin_square needs n >= 1")
    vid = lambda i, j: (i - 1) * n + (j - 1)
    edges = []
    for i in range(1, n + 1):
        for j1, j2 in combinations(range(1, n + 1), 2):
            edges.append((vid(i, j1), vid(i, j2)))
    for j in range(1, n + 1):
        for i1, i2 in combinations(range(1, n + 1), 2):
            edges.append((vid(i1, j), vid(i2, j)))
    return Graph(n * n, edges)


def latin_cell(n: int, i: int, j: int) -> int:
    """Vertex id of cell (i, j), 1-based, in latin_square(n)."""
    return (i - 1) * n + (j - 1)


_BUILDERS = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "fan7": (fan7, 0),
    "petersen": (petersen, 0),
    "diamond": (diamond, 0),
    "diamond_necklace": (diamond_necklace, 0),
    "latin_square": (latin_square, 1),
}


def build_standard(spec: str) -> Graph:
    """Build a named graph from a string key like ``cycle(5)`` or ``petersen``."""
    spec = spec.strip()
    if "(" in spec:
        name, rest = spec.split("(", 1)
        if not rest.endswith(")"):
            raise ValueError(f"malformed graph spec {spec!r}")
        args = [int(x) for x in rest[:-1].split(",") if x.strip()]
    else:
        name, args = spec, []
    name = name.strip()
    if name not in _BUILDERS:
        raise ValueError(f"unknown graph name {name!r}; known: {sorted(_BUILDERS)}")
    fn, arity = _BUILDERS[name]
    if len(args) != arity:
        raise ValueError(f"{name} takes {arity} argument(s), got {len(args)}")
    return fn(*args)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

GRAPH_SCHEMA = "coverpack.graph/1"


def graph_to_json(g: Graph) -> dict:
    return {"schema": GRAPH_SCHEMA, "n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_json(data: dict) -> Graph:
    """Strict loader: rejects loops and repeated edges."""
    if isinstance(data, str):
        data = json.loads(data)
    n = data["n"]
    edges = [tuple(e) for e in data["edges"]]
    seen = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"repeated edge {key}")
        seen.add(key)
    return Graph(n, edges)
