"""Named witness instances with pinned expected verdicts.

Each witness bundles a graph with a list assignment or explicit cover
and the verdict the solvers must reproduce.  Vertex numbering and list
placement are fixed here once; the reproduction suite re-derives every
verdict, so a mis-wired witness shows up as a red check rather than a
silently different object.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fractional as fr
from . import packing as pk
from .covers import CorrespondenceCover, ListAssignment, cover_from_lists
from .graphs import Graph, complete, cycle, diamond, diamond_necklace, latin_square


@dataclass
class Witness:
    name: str
    graph: Graph
    expected: str                # no_packing | no_fractional_packing | ...
    check: str                   # packing | fractional | general_fractional
    assignment: ListAssignment | None = None
    cover: CorrespondenceCover | None = None
    note: str = ""

    def payload_cover(self) -> CorrespondenceCover:
        if self.cover is not None:
            return self.cover
        return cover_from_lists(self.graph, self.assignment)


def even_cycle_bad_lists(n: int) -> Witness:
    """Two-colour lists on an even cycle with a clash pinned at the end:
    {1,2} everywhere except {1,3} and {2,3} on the last two vertices.
    No packing exists (the induced cover contains an odd cycle)."""
    if n < 4 or n % 2:
        raise ValueError("needs an even n >= 4")
    lists = [(1, 2)] * (n - 2) + [(1, 3), (2, 3)]
    return Witness(
        name=f"even-cycle-bad-lists-{n}",
        graph=cycle(n),
        expected="no_packing",
        check="packing",
        assignment=ListAssignment.of(lists),
        note="two-fold list cover of an even cycle with no packing",
    )


def twisted_cycle_cover(n: int) -> Witness:
    """Three-fold cover of a cycle, identities except one edge carrying the
    transposition 2<->3.  The cycle monodromy is odd, so no packing."""
    if n < 3:
        raise ValueError("needs n >= 3")
    g = cycle(n)
    matchings = {e: {1: 1, 2: 2, 3: 3} for e in g.edges}
    matchings[(0, n - 1)] = {1: 1, 2: 3, 3: 2}
    return Witness(
        name=f"twisted-cycle-cover-{n}",
        graph=g,
        expected="no_packing",
        check="packing",
        cover=CorrespondenceCover(g, 3, matchings),
        note="odd-monodromy three-fold cycle cover",
    )


def degeneracy_gap(d: int):
    """Layered construction with degeneracy d whose (d+1)-lists admit no
    fractional packing.

    Layer 1 is a clique on d+1 vertices with lists 1..d+1; each later
    layer copies the previous one, joining copy i to all of the previous
    layer except vertex i, and shifts the shared list: a swap (i j) is
    realised as the three single-element shifts i->d+2, j->i, d+2->j.
    The swaps (1 2)..(1 d) run in order, the whole round repeats d-1
    times, and a final apex vertex with list 1..d+1 attaches to the first
    vertex of layers 3p(d-1)+1 for p = 0..d-1.

    Returns (witness, layer_lists).
    """
    if d < 2:
        raise ValueError("needs d >= 2")
    shifts = []
    for _round in range(d - 1):
        for t in range(2, d + 1):
            shifts += [(1, d + 2), (t, 1), (d + 2, t)]
    layer_lists = [tuple(range(1, d + 2))]
    for i, j in shifts:
        cur = set(layer_lists[-1])
        cur.discard(i)
        cur.add(j)
        layer_lists.append(tuple(sorted(cur)))
    layers = len(layer_lists)
    width = d + 1
    apex = layers * width
    vid = lambda layer, idx: layer * width + idx
    edges = []
    for a in range(width):
        for b in range(a + 1, width):
            edges.append((vid(0, a), vid(0, b)))
    for layer in range(1, layers):
        for a in range(width):
            for b in range(width):
                if a != b:
                    edges.append((vid(layer - 1, b), vid(layer, a)))
    for p in range(d):
        edges.append((vid(3 * p * (d - 1), 0), apex))
    g = Graph(apex + 1, edges)
    lists = []
    for layer in range(layers):
        lists.extend([layer_lists[layer]] * width)
    lists.append(tuple(range(1, d + 2)))
    w = Witness(
        name=f"degeneracy-gap-{d}",
        graph=g,
        expected="no_fractional_packing",
        check="fractional",
        assignment=ListAssignment.of(lists),
        note=f"degeneracy-{d} layered graph, ({d+1})-lists, fractionally unpackable",
    )
    return w, layer_lists


def necklace_witness() -> Witness:
    """The two-diamond necklace with the 3-lists that kill every fractional
    packing while every single (vertex, colour) choice still extends.

    Id map: 0/1 bottom/top of the left diamond (degree-2 pair), 2/3 its
    chorded vertices; 4..7 the same on the right; bridges 0-4, 1-5.
    """
    lists = [
        (1, 2, 4),   # 0: left bottom
        (1, 3, 4),   # 1: left top
        (2, 3, 4),   # 2: left chorded
        (2, 3, 4),   # 3: left chorded
        (1, 2, 4),   # 4: right bottom
        (1, 3, 4),   # 5: right top
        (1, 2, 4),   # 6: right chorded
        (1, 2, 4),   # 7: right chorded
    ]
    return Witness(
        name="necklace",
        graph=diamond_necklace(),
        expected="no_fractional_packing",
        check="fractional",
        assignment=ListAssignment.of(lists),
        note="3-regular non-clique graph, flexible yet fractionally unpackable",
    )


def latin_square_witness(n: int) -> Witness:
    """Rook's-graph lists: row 1 gets 1..n+1 minus {1}, the rest of column 1
    gets 1..n+1 minus {2}, interior cells get 1..n.  Despite very many
    proper colourings, no transversal puts n+1 on cell (1,1), so no
    fractional packing exists."""
    if n < 2:
        raise ValueError("needs n >= 2")
    full = set(range(1, n + 2))
    lists = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == 1:
                lists.append(tuple(sorted(full - {1})))
            elif j == 1:
                lists.append(tuple(sorted(full - {2})))
            else:
                lists.append(tuple(range(1, n + 1)))
    return Witness(
        name=f"latin-square-{n}",
        graph=latin_square(n),
        expected="no_fractional_packing",
        check="fractional",
        assignment=ListAssignment.of(lists),
        note="rook's graph lists rich in colourings but fractionally unpackable",
    )


def k5_minus_edge() -> Graph:
    edges = [e for e in complete(5).edges if e != (0, 1)]
    return Graph(5, edges)


def degree_list_witnesses() -> list:
    """Degree-sized lists that defeat the demand distribution: the diamond
    with 2-lists on its degree-2 vertices, and K5 minus an edge with
    3-lists on the nonadjacent pair."""
    d = Witness(
        name="diamond-degree-lists",
        graph=diamond(),
        expected="no_fractional_packing",
        check="general_fractional",
        assignment=ListAssignment.of([(1, 2), (1, 3), (1, 2, 3), (1, 2, 3)]),
        note="degree-sized lists on the diamond, demand LP infeasible",
    )
    k5m = Witness(
        name="k5-minus-edge-degree-lists",
        graph=k5_minus_edge(),
        expected="no_fractional_packing",
        check="general_fractional",
        assignment=ListAssignment.of(
            [(1, 2, 3), (1, 2, 4), (1, 2, 3, 4), (1, 2, 3, 4), (1, 2, 3, 4)]),
        note="degree-sized lists on K5 minus an edge, demand LP infeasible",
    )
    return [d, k5m]


def all_witnesses() -> list:
    out = [even_cycle_bad_lists(4), even_cycle_bad_lists(6)]
    out += [twisted_cycle_cover(n) for n in (3, 4, 5, 6)]
    out.append(degeneracy_gap(2)[0])
    out.append(necklace_witness())
    out += [latin_square_witness(n) for n in (2, 3, 4)]
    out += degree_list_witnesses()
    return out


def verify_witness(w: Witness):
    """(ok, observed verdict, certificate-ish object).  Re-derives the
    expected verdict with the solvers."""
    if w.check == "packing":
        res = pk.find_packing(w.payload_cover())
        observed = "no_packing" if res is None else "packing_exists"
        return observed == w.expected, observed, res
    if w.check == "fractional":
        res = fr.fractional_packing(w.payload_cover())
        infeasible = isinstance(res, fr.InfeasibilityCertificate)
        observed = "no_fractional_packing" if infeasible else "fractional_exists"
        return observed == w.expected, observed, res
    if w.check == "general_fractional":
        res = fr.general_fractional_packing(w.graph, w.assignment)
        infeasible = isinstance(res, fr.DemandInfeasibility)
        observed = "no_fractional_packing" if infeasible else "fractional_exists"
        return observed == w.expected, observed, res
    raise ValueError(f"unknown check {w.check!r}")
