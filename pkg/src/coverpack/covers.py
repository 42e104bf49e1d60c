"""List assignments, correspondence covers, and exhaustive cover enumeration.

A cover gives every base vertex a clique of local slots 1..k_v and every
base edge a partial injective matching between the endpoint slots.  List
assignments induce covers by matching slots that carry equal palette
colours; the two worlds stay separate otherwise (slots are local labels,
palette colours live only in ListAssignment).

Full covers are enumerated up to untwisting: matchings on a spanning
forest are normalised to identities, every non-forest edge runs through
all k! permutations.  The enumeration is an indexed family, so shards
(start, end) can be farmed out to workers with no shared state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial

from .errors import PreconditionError, ResourceCapError
from .graphs import Graph, graph_from_json, graph_to_json

_PERMS_CACHE: dict = {}


def perms_of(k: int):
    """All permutations of 1..k as tuples, lexicographic, cached."""
    if k not in _PERMS_CACHE:
        _PERMS_CACHE[k] = tuple(permutations(range(1, k + 1)))
    return _PERMS_CACHE[k]


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex sorted colour lists over a small integer palette."""

    lists: tuple

    @staticmethod
    def of(raw) -> "ListAssignment":
        lists = []
        for L in raw:
            L = sorted(set(L))
            if not L:
                raise ValueError("lists must be non-empty")
            lists.append(tuple(L))
        return ListAssignment(tuple(lists))

    def size(self, v: int) -> int:
        return len(self.lists[v])

    def uniform(self, k: int | None = None) -> bool:
        sizes = {len(L) for L in self.lists}
        if len(sizes) != 1:
            return False
        return k is None or sizes.pop() == k

    def palette(self) -> tuple:
        return tuple(sorted({c for L in self.lists for c in L}))

    def to_json(self) -> dict:
        return {"schema": LISTS_SCHEMA, "lists": [list(L) for L in self.lists]}


class CorrespondenceCover:
    """Cover of a base graph: per-vertex slot counts plus one partial
    injective matching per base edge.

    ``matchings`` maps each edge (u, v) with u < v to a dict slot_u -> slot_v.
    ``maps`` holds both directions as lookup tuples: maps[(x, y)][s] is the
    partner of slot s of x on y, or 0 when unmatched (index 0 unused).
    Treat instances as immutable.
    """

    __slots__ = ("base", "fold", "matchings", "maps")

    def __init__(self, base: Graph, fold, matchings: dict):
        self.base = base
        if isinstance(fold, int):
            fold = [fold] * base.n
        self.fold = tuple(fold)
        if len(self.fold) != base.n:
            raise ValueError("fold must give one list size per vertex")
        if any(k < 1 for k in self.fold):
            raise ValueError("list sizes must be >= 1")
        norm = {}
        edge_set = set(base.edges)
        for (u, v), m in matchings.items():
            if u > v:
                u, v = v, u
                m = {t: s for s, t in m.items()}
            if (u, v) not in edge_set:
                raise ValueError(f"matching on non-edge ({u},{v})")
            norm[(u, v)] = dict(m)
        for e in edge_set:
            norm.setdefault(e, {})
        self.matchings = norm
        maps = {}
        for (u, v), m in norm.items():
            fwd = [0] * (self.fold[u] + 1)
            bwd = [0] * (self.fold[v] + 1)
            for s, t in m.items():
                if not (1 <= s <= self.fold[u] and 1 <= t <= self.fold[v]):
                    raise ValueError(f"slot out of range on edge ({u},{v})")
                if fwd[s] or bwd[t]:
                    raise ValueError(f"matching on edge ({u},{v}) is not injective")
                fwd[s] = t
                bwd[t] = s
            maps[(u, v)] = tuple(fwd)
            maps[(v, u)] = tuple(bwd)
        self.maps = maps

    def uniform_fold(self) -> int:
        ks = set(self.fold)
        if len(ks) != 1:
            raise PreconditionError("fold", "cover does not have uniform fold")
        return ks.pop()

    def is_full(self, k: int | None = None) -> bool:
        """All lists the same size and every matching a bijection."""
        ks = set(self.fold)
        if len(ks) != 1 or (k is not None and ks != {k}):
            return False
        kk = self.fold[0] if self.fold else 0
        return all(len(m) == kk for m in self.matchings.values())

    def partner(self, x: int, y: int, s: int) -> int:
        """Slot of y matched to slot s of x, or 0."""
        return self.maps[(x, y)][s]

    def subcover_without(self, removed) -> "CorrespondenceCover":
        """Cover of the base with ``removed`` vertices' edges dropped.

        Vertex ids and slot counts are kept, so packings of the subcover
        index the same way.
        """
        gone = set(removed)
        sub = {e: m for e, m in self.matchings.items()
               if e[0] not in gone and e[1] not in gone}
        return CorrespondenceCover(self.base.subgraph_without(gone), self.fold, sub)

    def __eq__(self, other):
        return (isinstance(other, CorrespondenceCover)
                and self.base == other.base
                and self.fold == other.fold
                and self.matchings == other.matchings)

    def __repr__(self):
        return f"CorrespondenceCover(n={self.base.n}, fold={self.fold})"


@dataclass(frozen=True)
class CoverGraph:
    """Explicit cover graph: vertices are (base id, slot) pairs in
    lexicographic order, edges are within-list cliques plus matching edges."""

    slots: tuple
    edges: tuple
    index: dict

    def adjacent(self, x, y) -> bool:
        return (x, y) in self.edge_set or (y, x) in self.edge_set

    @property
    def edge_set(self):
        return set(self.edges)


def slot_offsets(cover: CorrespondenceCover):
    """Offsets of each vertex's slot block in the flat slot indexing."""
    off = [0] * cover.base.n
    for v in range(1, cover.base.n):
        off[v] = off[v - 1] + cover.fold[v - 1]
    return off, sum(cover.fold)


def cover_from_lists(g: Graph, assignment: ListAssignment) -> CorrespondenceCover:
    """The cover induced by a list assignment: slot i of v is the i-th
    smallest colour of L(v), equal colours across an edge are matched."""
    fold = [assignment.size(v) for v in range(g.n)]
    matchings = {}
    for u, v in g.edges:
        lu, lv = assignment.lists[u], assignment.lists[v]
        pos_v = {c: i + 1 for i, c in enumerate(lv)}
        matchings[(u, v)] = {i + 1: pos_v[c] for i, c in enumerate(lu) if c in pos_v}
    return CorrespondenceCover(g, fold, matchings)


def validate_data(base: Graph, fold, matchings: dict) -> list:
    """Diagnostic check of raw cover data against the cover axioms;
    returns each violation with a witness (empty when sound).  The
    constructor rejects bad data outright; this reports what is wrong
    with hand-built or deserialised candidates."""
    out = []
    if isinstance(fold, int):
        fold = [fold] * base.n
    edge_set = set(base.edges)
    for v in range(base.n):
        if fold[v] < 1:
            out.append(("empty-list", v))
    for (u, v), m in matchings.items():
        if (min(u, v), max(u, v)) not in edge_set:
            out.append(("matching-on-non-edge", (u, v)))
            continue
        seen_t = {}
        for s, t in m.items():
            if not 1 <= s <= fold[u]:
                out.append(("slot-out-of-range", (u, v, s)))
            if not 1 <= t <= fold[v]:
                out.append(("slot-out-of-range", (v, u, t)))
            if t in seen_t:
                out.append(("not-injective", (u, v, seen_t[t], s)))
            seen_t[t] = s
    return out


def validate(cover: CorrespondenceCover) -> list:
    """Re-check a constructed cover (always empty unless internals were
    mutated by hand)."""
    return validate_data(cover.base, cover.fold, cover.matchings)


def expand(cover: CorrespondenceCover) -> CoverGraph:
    """Explicit cover graph with clique and matching edges."""
    slots = []
    for v in range(cover.base.n):
        for s in range(1, cover.fold[v] + 1):
            slots.append((v, s))
    index = {vs: i for i, vs in enumerate(slots)}
    edges = set()
    for v in range(cover.base.n):
        for s, t in combinations(range(1, cover.fold[v] + 1), 2):
            edges.add(((v, s), (v, t)))
    for (u, v), m in cover.matchings.items():
        for s, t in m.items():
            edges.add(((u, s), (v, t)))
    return CoverGraph(tuple(slots), tuple(sorted(edges)), index)


def spanning_forest(g: Graph):
    """Deterministic BFS spanning forest: lowest-id roots, neighbours ascending."""
    seen = set()
    forest = []
    for root in range(g.n):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    forest.append((min(u, w), max(u, w)))
                    queue.append(w)
    return tuple(sorted(forest))


def _check_forest(g: Graph, forest) -> None:
    edge_set = set(g.edges)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in forest:
        if (min(u, v), max(u, v)) not in edge_set:
            raise PreconditionError("forest", f"({u},{v}) is not a base edge")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise PreconditionError("forest", f"edge set contains a cycle through ({u},{v})")
        parent[ru] = rv


def untwist(cover: CorrespondenceCover, forest):
    """Relabel slots per vertex so matchings on ``forest`` edges become
    identities.

    Returns (new_cover, relabellings) where relabellings[v][s-1] is the
    new label of old slot s; certificates for the old cover transport
    through these permutations.  Forest-edge matchings must be bijections.
    """
    k = cover.uniform_fold()
    forest = tuple(tuple(sorted(e)) for e in forest)
    _check_forest(cover.base, forest)
    fedges = set(forest)
    fadj = [[] for _ in range(cover.base.n)]
    for u, v in forest:
        if len(cover.matchings[(u, v)]) != k:
            raise PreconditionError("full", f"forest edge ({u},{v}) matching is not full")
        fadj[u].append(v)
        fadj[v].append(u)
    ident = tuple(range(1, k + 1))
    relab = {}
    for root in range(cover.base.n):
        if root in relab:
            continue
        relab[root] = ident
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in sorted(fadj[u]):
                if w in relab:
                    continue
                back = cover.maps[(w, u)]
                # new label of slot s at w = relabelled label of its partner at u
                relab[w] = tuple(relab[u][back[s] - 1] for s in range(1, k + 1))
                queue.append(w)
    new_matchings = {}
    for (u, v), m in cover.matchings.items():
        pu, pv = relab[u], relab[v]
        new_matchings[(u, v)] = {pu[s - 1]: pv[t - 1] for s, t in m.items()}
    return CorrespondenceCover(cover.base, cover.fold, new_matchings), relab


def monodromy(cover: CorrespondenceCover, walk):
    """Composition of the edge matchings along a closed walk.

    ``walk`` is a vertex sequence with walk[0] == walk[-1]; traversed
    matchings must be full.  Returns the permutation of 1..k as a tuple
    p with p[s-1] the image of slot s.
    """
    if len(walk) < 2 or walk[0] != walk[-1]:
        raise PreconditionError("walk", "walk must be closed")
    k = cover.uniform_fold()
    cur = list(range(1, k + 1))
    for x, y in zip(walk, walk[1:]):
        if (x, y) not in cover.maps:
            raise PreconditionError("walk", f"({x},{y}) is not a base edge")
        step = cover.maps[(x, y)]
        if 0 in step[1:]:
            raise PreconditionError("full", f"matching on ({x},{y}) is not full")
        cur = [step[c] for c in cur]
    return tuple(cur)


def permutation_parity(p) -> int:
    """0 for even, 1 for odd."""
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv & 1


def is_list_cover(cover: CorrespondenceCover):
    """Palette naming of the slots realising the cover as a list cover,
    or None.

    Matched slots are forced to share a name (union-find closure); the
    cover is a list cover iff afterwards no two slots of one vertex share
    a class and no unmatched slot pair across an edge does.  Each class
    then gets its own palette colour, so the palette never exceeds the
    total slot count.
    """
    slots = [(v, s) for v in range(cover.base.n) for s in range(1, cover.fold[v] + 1)]
    idx = {vs: i for i, vs in enumerate(slots)}
    parent = list(range(len(slots)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), m in cover.matchings.items():
        for s, t in m.items():
            ru, rv = find(idx[(u, s)]), find(idx[(v, t)])
            if ru != rv:
                parent[ru] = rv
    for v in range(cover.base.n):
        classes = {find(idx[(v, s)]) for s in range(1, cover.fold[v] + 1)}
        if len(classes) != cover.fold[v]:
            return None
    for (u, v), m in cover.matchings.items():
        for s in range(1, cover.fold[u] + 1):
            for t in range(1, cover.fold[v] + 1):
                if m.get(s) != t and find(idx[(u, s)]) == find(idx[(v, t)]):
                    return None
    colour = {}
    naming = {}
    for vs in slots:
        root = find(idx[vs])
        if root not in colour:
            colour[root] = len(colour) + 1
        naming[vs] = colour[root]
    lists = []
    for v in range(cover.base.n):
        lists.append(tuple(sorted(naming[(v, s)] for s in range(1, cover.fold[v] + 1))))
    return ListAssignment(lists), naming


def identity_cover(g: Graph, k: int) -> CorrespondenceCover:
    """Full k-fold cover with every matching the identity."""
    ident = {s: s for s in range(1, k + 1)}
    return CorrespondenceCover(g, k, {e: dict(ident) for e in g.edges})


def count_covers(g: Graph, k: int, forest=None) -> int:
    forest = spanning_forest(g) if forest is None else tuple(tuple(sorted(e)) for e in forest)
    nonforest = [e for e in g.edges if e not in set(forest)]
    return factorial(k) ** len(nonforest)


def cover_at_index(g: Graph, k: int, index: int, forest=None) -> CorrespondenceCover:
    """The ``index``-th cover of the untwisted enumeration (mixed-radix
    over non-forest edges, lexicographic permutations)."""
    forest = spanning_forest(g) if forest is None else tuple(tuple(sorted(e)) for e in forest)
    _check_forest(g, forest)
    nonforest = [e for e in g.edges if e not in set(forest)]
    per = perms_of(k)
    total = len(per) ** len(nonforest)
    if not 0 <= index < total:
        raise ValueError(f"cover index {index} out of range (total {total})")
    ident = {s: s for s in range(1, k + 1)}
    matchings = {e: dict(ident) for e in forest}
    rem = index
    for e in reversed(nonforest):
        rem, digit = divmod(rem, len(per))
        p = per[digit]
        matchings[e] = {s: p[s - 1] for s in range(1, k + 1)}
    return CorrespondenceCover(g, k, matchings)


def enumerate_covers(g: Graph, k: int, forest=None, start: int = 0, end: int | None = None):
    """Yield (index, cover) for every full k-fold cover with identity
    matchings on the forest, in deterministic lexicographic order.

    The family has exactly (k!)^(#non-forest edges) members; ``start`` and
    ``end`` select a shard of the index range.
    """
    forest = spanning_forest(g) if forest is None else tuple(tuple(sorted(e)) for e in forest)
    _check_forest(g, forest)
    nonforest = [e for e in g.edges if e not in set(forest)]
    per = perms_of(k)
    total = len(per) ** len(nonforest)
    end = total if end is None else min(end, total)
    ident = {s: s for s in range(1, k + 1)}
    base_matchings = {e: dict(ident) for e in forest}
    for index in range(start, end):
        matchings = dict(base_matchings)
        rem = index
        for e in reversed(nonforest):
            rem, digit = divmod(rem, len(per))
            p = per[digit]
            matchings[e] = {s: p[s - 1] for s in range(1, k + 1)}
        yield index, CorrespondenceCover(g, k, matchings)


def random_full_cover(g: Graph, k: int, rng, forest=None) -> CorrespondenceCover:
    """Random untwisted cover: identities on the forest, a uniform random
    permutation on every other edge."""
    forest = spanning_forest(g) if forest is None else tuple(tuple(sorted(e)) for e in forest)
    fset = set(forest)
    ident = {s: s for s in range(1, k + 1)}
    matchings = {}
    per = perms_of(k)
    for e in g.edges:
        if e in fset:
            matchings[e] = dict(ident)
        else:
            p = rng.choice(per)
            matchings[e] = {s: p[s - 1] for s in range(1, k + 1)}
    return CorrespondenceCover(g, k, matchings)


# ---------------------------------------------------------------------------
# exhaustive list-cover enumeration
# ---------------------------------------------------------------------------
#
# The cover induced by a list assignment depends only on, per colour, the
# edge set it spans: a colour appearing on S contributes matching edges
# exactly on E(G[S]), and colours confined to a single vertex contribute
# nothing.  Every realisable per-colour edge pattern equals E(G[W]) for
# some W, and conversely any multiset of such patterns with per-vertex
# multiplicity at most k is realised by an assignment (pad short lists
# with fresh private colours).  Sweeping pattern multisets therefore
# covers all k-list-assignments over every finite palette.

def induced_edge_patterns(g: Graph):
    """Distinct non-empty induced edge sets E(G[S]), sorted for determinism."""
    seen = set()
    edge_list = g.edges
    for r in range(2, g.n + 1):
        for sub in combinations(range(g.n), r):
            ss = set(sub)
            pat = frozenset(e for e in edge_list if e[0] in ss and e[1] in ss)
            if pat:
                seen.add(pat)
    return sorted(seen, key=lambda p: (len(p), sorted(p)))


def _pattern_load(g: Graph, pattern):
    load = [0] * g.n
    for u, v in pattern:
        load[u] = 1
        load[v] = 1
    return load


def assignment_from_patterns(g: Graph, k: int, multiset) -> ListAssignment:
    """Concrete k-list-assignment realising a pattern multiset: colour i+1
    for the i-th pattern occurrence, fresh padding colours afterwards."""
    lists = [[] for _ in range(g.n)]
    for i, pat in enumerate(multiset):
        members = {x for e in pat for x in e}
        for v in members:
            lists[v].append(i + 1)
    nxt = len(multiset) + 1
    for v in range(g.n):
        if len(lists[v]) > k:
            raise ValueError("pattern multiset exceeds the fold at a vertex")
        while len(lists[v]) < k:
            lists[v].append(nxt)
            nxt += 1
    return ListAssignment.of(lists)


def enumerate_list_covers(g: Graph, k: int, start: int = 0, end: int | None = None):
    """Yield (index, assignment, cover) for one representative k-list
    assignment per induced cover, exhaustively.

    Deterministic order; ``start``/``end`` shard by index.
    """
    patterns = induced_edge_patterns(g)
    loads = [_pattern_load(g, p) for p in patterns]
    counter = 0
    load = [0] * g.n
    chosen = []

    def rec(i):
        nonlocal counter
        if i == len(patterns):
            idx = counter
            counter += 1
            if idx >= start and (end is None or idx < end):
                assignment = assignment_from_patterns(g, k, chosen)
                yield idx, assignment, cover_from_lists(g, assignment)
            return
        yield from rec(i + 1)
        added = 0
        while True:
            ok = True
            for v in range(g.n):
                load[v] += loads[i][v]
                if load[v] > k:
                    ok = False
            if not ok:
                for v in range(g.n):
                    load[v] -= loads[i][v]
                break
            chosen.append(patterns[i])
            added += 1
            yield from rec(i + 1)
        for _ in range(added):
            chosen.pop()
            for v in range(g.n):
                load[v] -= loads[i][v]

    yield from rec(0)


def count_list_covers(g: Graph, k: int) -> int:
    return sum(1 for _ in enumerate_list_covers(g, k))


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

COVER_SCHEMA = "coverpack.cover/1"
LISTS_SCHEMA = "coverpack.lists/1"


def cover_to_json(cover: CorrespondenceCover) -> dict:
    matchings = {f"{u}-{v}": sorted([s, t] for s, t in m.items())
                 for (u, v), m in sorted(cover.matchings.items())}
    return {
        "schema": COVER_SCHEMA,
        "graph": graph_to_json(cover.base),
        "fold": list(cover.fold),
        "matchings": matchings,
    }


def cover_from_json(data) -> CorrespondenceCover:
    if isinstance(data, str):
        data = json.loads(data)
    g = graph_from_json(data["graph"])
    fold = data["fold"]
    matchings = {}
    for key, pairs in data["matchings"].items():
        u, v = (int(x) for x in key.split("-"))
        matchings[(u, v)] = {int(s): int(t) for s, t in pairs}
    return CorrespondenceCover(g, fold, matchings)


def lists_from_json(data) -> ListAssignment:
    if isinstance(data, str):
        data = json.loads(data)
    return ListAssignment.of(data["lists"])


def to_dimacs(cover: CorrespondenceCover) -> str:
    """Cover graph in DIMACS edge format (1-based vertex ids), for
    cross-checking with external colouring tools."""
    cg = expand(cover)
    lines = [f"c cover graph of base with {cover.base.n} vertices, fold {list(cover.fold)}",
             f"p edge {len(cg.slots)} {len(cg.edges)}"]
    for x, y in cg.edges:
        lines.append(f"e {cg.index[x] + 1} {cg.index[y] + 1}")
    return "\n".join(lines) + "\n"
