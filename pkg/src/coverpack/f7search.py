"""Search for 3-lists on the 7-vertex fan that admit no packing.

Sweeps the exhaustive list-cover enumeration, and for every cover with
no packing tries to express a realising assignment within the palette
bound.  Colour classes can share a palette colour exactly when their
vertex sets are disjoint and span no edge (the induced cover is then
unchanged), so palette compression is a small exact colouring problem on
the class-conflict graph.  Budget exhaustion is a normal outcome and is
reported distinctly from a completed enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import covers as cv
from . import packing as pk
from .covers import ListAssignment
from .graphs import Graph, fan7


@dataclass
class F7SearchResult:
    graph: Graph
    found: ListAssignment | None
    checked: int
    exhausted: bool              # enumeration finished within the budget


def _class_conflicts(g: Graph, classes):
    """Conflict graph over colour classes: same palette colour is allowed
    only for classes with disjoint, mutually non-adjacent vertex sets."""
    n = len(classes)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            vi, vj = classes[i], classes[j]
            if vi & vj or any((min(u, w), max(u, w)) in set(g.edges)
                              for u in vi for w in vj):
                adj[i].add(j)
                adj[j].add(i)
    return adj


def _colour_classes_within(adj, limit: int):
    """Exact decision: colour the conflict graph with at most ``limit``
    colours; returns the colouring or None.  Class counts stay tiny, so
    plain backtracking in descending-degree order is enough."""
    n = len(adj)
    order = sorted(range(n), key=lambda x: -len(adj[x]))
    colour = {}

    def rec(i):
        if i == n:
            return True
        x = order[i]
        used = {colour[y] for y in adj[x] if y in colour}
        for c in range(1, limit + 1):
            if c not in used:
                colour[x] = c
                if rec(i + 1):
                    return True
                del colour[x]
            if c not in used and c > len(colour) + 1:
                break
        return False

    return colour if rec(0) else None


def compress_palette(g: Graph, assignment: ListAssignment, limit: int):
    """Re-name colours to use at most ``limit`` palette values without
    changing the induced cover, or None when impossible."""
    members: dict = {}
    for v in range(g.n):
        for c in assignment.lists[v]:
            members.setdefault(c, set()).add(v)
    names = sorted(members)
    classes = [frozenset(members[c]) for c in names]
    adj = _class_conflicts(g, classes)
    colouring = _colour_classes_within(adj, limit)
    if colouring is None:
        return None
    rename = {c: colouring[i] for i, c in enumerate(names)}
    lists = [tuple(sorted(rename[c] for c in assignment.lists[v])) for v in range(g.n)]
    return ListAssignment(tuple(lists))


def search_f7_witness(palette_max: int = 6, budget: int = 200_000,
                      k: int = 3) -> F7SearchResult:
    """First enumerated k-list cover of the fan with no packing that fits
    the palette bound; the compressed assignment is re-verified before
    being returned."""
    g = fan7()
    checked = 0
    for _idx, assignment, cover in cv.enumerate_list_covers(g, k):
        if checked >= budget:
            return F7SearchResult(g, None, checked, exhausted=False)
        checked += 1
        if pk.find_packing(cover) is not None:
            continue
        compressed = compress_palette(g, assignment, palette_max)
        if compressed is None:
            continue
        recheck = cv.cover_from_lists(g, compressed)
        if pk.find_packing(recheck) is None:
            return F7SearchResult(g, compressed, checked, exhausted=False)
    return F7SearchResult(g, None, checked, exhausted=True)
