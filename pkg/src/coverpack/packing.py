"""Integral packing: existence, counting, greedy construction, packing
numbers, and the degree-3 / degree-4 extension machinery.

A packing of a uniform k-fold cover assigns every base vertex a
permutation of its k slots (column i = colouring i); properness says no
matching edge joins the slots chosen by one colouring.  The solver
backtracks over whole per-vertex permutations in reverse degeneracy
order and prunes with a per-vertex matching-feasibility test, which is
what makes exhaustive sweeps over tens of thousands of covers cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from . import covers as cv
from . import hall
from .covers import CorrespondenceCover, ListAssignment, perms_of
from .errors import PreconditionError, ResourceCapError
from .graphs import Graph, degeneracy, max_degree

PACKING_SCHEMA = "coverpack.packing/1"


@dataclass(frozen=True)
class Packing:
    """k mutually slot-disjoint proper transversals; colourings[i][v] is the
    slot colouring i picks at vertex v (1-based)."""

    colourings: tuple

    @property
    def k(self) -> int:
        return len(self.colourings)

    def assignment(self, v: int) -> tuple:
        """The slot permutation a vertex receives, indexed by colouring."""
        return tuple(c[v] for c in self.colourings)

    def to_json(self) -> dict:
        return {"schema": PACKING_SCHEMA, "k": self.k,
                "colourings": [list(c) for c in self.colourings]}


def packing_from_assignments(n: int, assignments: dict) -> Packing:
    k = len(next(iter(assignments.values())))
    cols = []
    for i in range(k):
        cols.append(tuple(assignments[v][i] if v in assignments else 0 for v in range(n)))
    return Packing(tuple(cols))


def validate_packing(cover: CorrespondenceCover, packing: Packing) -> list:
    """Re-check properness and per-vertex disjointness against the expanded
    cover graph, independently of the solver's internal maps."""
    out = []
    k = cover.uniform_fold()
    if packing.k != k:
        out.append(("wrong-size", packing.k))
        return out
    n = cover.base.n
    for c in packing.colourings:
        if len(c) != n or any(not 1 <= c[v] <= cover.fold[v] for v in range(n)):
            out.append(("bad-slot-range", c))
            return out
    cg = cv.expand(cover)
    edge_set = set(cg.edges)
    for i, c in enumerate(packing.colourings):
        for u, v in cover.base.edges:
            if ((u, c[u]), (v, c[v])) in edge_set or ((v, c[v]), (u, c[u])) in edge_set:
                out.append(("improper", (i, u, v)))
    for v in range(n):
        if sorted(packing.assignment(v)) != list(range(1, k + 1)):
            out.append(("not-disjoint", v))
    return out


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------

_WITHOUT_CACHE: dict = {}


def _without_masks(k: int):
    """without[s] has bit m set iff slot-subset m does not contain slot s+1;
    used by the subset DP deciding matchability of one vertex."""
    if k not in _WITHOUT_CACHE:
        _WITHOUT_CACHE[k] = tuple(
            sum(1 << m for m in range(1 << k) if not (m >> s) & 1) for s in range(k))
    return _WITHOUT_CACHE[k]


def _vertex_matchable(forb, k, without, full):
    """Whether some permutation avoids the per-index forbidden masks
    (perfect matching indices x slots), via subset DP."""
    dp = 1
    for i in range(k):
        allowed = full & ~forb[i]
        ndp = 0
        while allowed:
            s = (allowed & -allowed).bit_length() - 1
            allowed &= allowed - 1
            ndp |= (dp & without[s]) << (1 << s)
        dp = ndp
        if not dp:
            return False
    return True


def _search(cover: CorrespondenceCover, count_all: bool, cap: int | None = None):
    k = cover.uniform_fold()
    g = cover.base
    n = g.n
    perms = perms_of(k)
    maps = cover.maps
    order = degeneracy(g).order[::-1]
    forb = [[0] * k for _ in range(n)]
    assigned: list = [None] * n
    without = _without_masks(k)
    full = (1 << k) - 1
    found = 0
    solutions = []

    def rec(idx: int) -> bool:
        nonlocal found
        if idx == n:
            found += 1
            if count_all:
                if cap is not None and found > cap:
                    raise ResourceCapError(f"more than {cap} packings")
                return False
            solutions.append([tuple(a) for a in assigned])
            return True
        v = order[idx]
        fb = forb[v]
        nbrs = [w for w in g.adj[v] if assigned[w] is None]
        vmaps = [maps[(v, w)] for w in nbrs]
        for per in perms:
            ok = True
            for i in range(k):
                if fb[i] >> (per[i] - 1) & 1:
                    ok = False
                    break
            if not ok:
                continue
            assigned[v] = per
            undo = []
            feasible = True
            for w, mp in zip(nbrs, vmaps):
                fw = forb[w]
                for i in range(k):
                    t = mp[per[i]]
                    if t:
                        bit = 1 << (t - 1)
                        if not fw[i] & bit:
                            fw[i] |= bit
                            undo.append((fw, i, bit))
                if not _vertex_matchable(fw, k, without, full):
                    feasible = False
                    break
            if feasible and rec(idx + 1):
                return True
            for fw, i, bit in undo:
                fw[i] &= ~bit
            assigned[v] = None
        return False

    hit = rec(0)
    if count_all:
        return found
    if not hit:
        return None
    sol = solutions[0]
    return packing_from_assignments(n, {v: sol[v] for v in range(n)})


def find_packing(cover: CorrespondenceCover) -> Packing | None:
    """Exhaustive decision: a valid packing, or None when none exists."""
    if cover.base.n == 0:
        return Packing(())
    return _search(cover, count_all=False)


def count_packings(cover: CorrespondenceCover, cap_slots: int = 48,
                   cap_count: int | None = None) -> int:
    """Exact number of ordered packings.  Refuses cover graphs past
    ``cap_slots`` slots outright rather than running unbounded."""
    nslots = sum(cover.fold)
    if nslots > cap_slots:
        raise ResourceCapError(f"cover graph has {nslots} > {cap_slots} slots")
    if cover.base.n == 0:
        return 1
    return _search(cover, count_all=True, cap=cap_count)


# ---------------------------------------------------------------------------
# greedy construction under the doubled-degeneracy bound
# ---------------------------------------------------------------------------

def greedy_degenerate_packing(cover: CorrespondenceCover) -> Packing:
    """Build a packing vertex-by-vertex in reverse degeneracy order.

    Requires fold k >= 2 * degeneracy(base).  At each vertex the k
    colouring indices are matched to available slots; each index forbids
    at most degeneracy-many slots, so the availability graph has minimum
    degree >= k/2 on both sides and the matching always exists.  A
    failure therefore certifies a bug and raises.
    """
    k = cover.uniform_fold()
    dg = degeneracy(cover.base)
    if k < 2 * dg.degeneracy:
        raise PreconditionError(
            "fold", f"fold {k} < 2 * degeneracy {dg.degeneracy}")
    g = cover.base
    maps = cover.maps
    assignments: dict = {}
    for v in dg.order[::-1]:
        allowed = [(1 << k) - 1 for _ in range(k)]
        for w in g.adj[v]:
            if w in assignments:
                mp = maps[(w, v)]
                for i in range(k):
                    t = mp[assignments[w][i]]
                    if t:
                        allowed[i] &= ~(1 << (t - 1))
        bg = hall.BipartiteGraph(
            k, k, [(i, s) for i in range(k) for s in range(k) if allowed[i] >> s & 1])
        cert = hall.saturating_matching(bg)
        if not cert.saturating():
            raise RuntimeError(
                f"greedy packing failed at vertex {v}; violator {sorted(cert.violator)}")
        assignments[v] = tuple(b + 1 for b in cert.matching)
    return packing_from_assignments(g.n, assignments)


# ---------------------------------------------------------------------------
# packing numbers
# ---------------------------------------------------------------------------

@dataclass
class SweepOutcome:
    """One exhaustive all-covers-pack check at a fixed fold."""

    k: int
    total: int
    all_pack: bool
    failure_index: int | None
    failure_cover: CorrespondenceCover | None
    failure_assignment: ListAssignment | None = None


def packs_at(g: Graph, k: int, mode: str, jobs: int = 1,
             stop_on_failure: bool = True) -> SweepOutcome:
    """Do all k-fold covers of the given mode admit a packing?

    Correspondence mode sweeps the untwisted full covers (sufficient:
    completing partial matchings only adds constraints, and slot
    relabelling transports packings).  List mode sweeps one assignment
    per induced list cover.
    """
    if mode == "correspondence":
        if jobs > 1:
            from . import sweeps
            res = sweeps.sweep_covers(g, k, "packs", jobs=jobs,
                                      stop_on_failure=stop_on_failure)
            idx = res.failures[0] if res.failures else None
            cover = cv.cover_at_index(g, k, idx) if idx is not None else None
            return SweepOutcome(k, res.total, not res.failures, idx, cover)
        total = cv.count_covers(g, k)
        for idx, cover in cv.enumerate_covers(g, k):
            if find_packing(cover) is None:
                return SweepOutcome(k, total, False, idx, cover)
        return SweepOutcome(k, total, True, None, None)
    if mode == "list":
        total = 0
        for idx, assignment, cover in cv.enumerate_list_covers(g, k):
            total += 1
            if find_packing(cover) is None:
                return SweepOutcome(k, total, False, idx, cover, assignment)
        return SweepOutcome(k, total, True, None, None)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class PackingNumberResult:
    value: int | None           # least k with all covers packable, if found
    lower_bound: int            # k_max + 1 when exhausted
    witness_cover: CorrespondenceCover | None   # failing cover at value - 1
    witness_assignment: ListAssignment | None
    sweeps: list


def packing_number(g: Graph, mode: str, k_max: int, jobs: int = 1) -> PackingNumberResult:
    """Smallest k <= k_max such that every k-fold cover packs, plus the
    failing witness at k-1.  Exhausting k_max reports only a lower bound."""
    outcomes = []
    witness = None
    witness_assignment = None
    for k in range(1, k_max + 1):
        out = packs_at(g, k, mode, jobs=jobs)
        outcomes.append(out)
        if out.all_pack:
            return PackingNumberResult(k, k, witness, witness_assignment, outcomes)
        witness = out.failure_cover
        witness_assignment = out.failure_assignment
    return PackingNumberResult(None, k_max + 1, witness, witness_assignment, outcomes)


# ---------------------------------------------------------------------------
# the fold-4 extension table for cubic graphs
# ---------------------------------------------------------------------------
#
# Local situation: an edge uv in no triangle, neighbours u1, u2 of u and
# v1, v2 of v, all distinct; matchings on the 5-edge tree
# {uu1, uu2, uv, vv1, vv2} normalised to identities and the permutation at
# u1 fixed to the identity.  A triple of permutations at (u2, v1, v2) is
# extendable when permutations at u and v exist that are index-disjoint
# from their packed neighbours and from each other.
#
# The extension recipe excludes four permutations at u2 up front; these
# EXCLUDED constants are part of the procedure, everything else below is
# derived and re-verified.

EXCLUDED_U2 = ((2, 3, 4, 1), (2, 4, 1, 3), (3, 1, 4, 2), (4, 1, 2, 3))


@dataclass
class FoldFourExtensionReport:
    non_extendable: tuple        # ordered triples (sigma_u2, sigma_v1, sigma_v2)
    counts_by_u2: dict           # permutation -> number of non-extendable triples
    excluded: tuple              # the four up-front exclusions (verified worst class)
    excellent: tuple             # u2 choices with no bad triple
    good: tuple                  # u2 choices with exactly one problematic pair
    bad: tuple                   # remaining worst-class choices after exclusion
    problematic_pairs: dict      # u2 -> tuple of unordered {v1, v2} pairs
    avoided: tuple               # permutations whose avoidance rescues the bad cases
    avoided_sufficient: bool     # verified: triples clear of `avoided` all extend

    @property
    def total_non_extendable(self) -> int:
        return len(self.non_extendable)


def _index_disjoint(a, b) -> bool:
    return all(x != y for x, y in zip(a, b))


def delta3_case_analysis() -> FoldFourExtensionReport:
    """Enumerate all 24^3 triples and classify the u2 permutations.

    The `avoided` set is derived, not assumed: it is the common core of
    the problematic pairs of the two bad choices, and the report verifies
    that staying clear of it makes every remaining triple extendable.
    """
    s4 = perms_of(4)
    ident = (1, 2, 3, 4)
    compat_with_ident = {p: _index_disjoint(p, ident) for p in s4}
    bad_triples = []
    for u2 in s4:
        su = [p for p in s4 if compat_with_ident[p] and _index_disjoint(p, u2)]
        for v1 in s4:
            for v2 in s4:
                sv = [p for p in s4 if _index_disjoint(p, v1) and _index_disjoint(p, v2)]
                if not any(_index_disjoint(a, b) for a in su for b in sv):
                    bad_triples.append((u2, v1, v2))
    counts = {p: 0 for p in s4}
    pairs: dict = {p: set() for p in s4}
    for u2, v1, v2 in bad_triples:
        counts[u2] += 1
        pairs[u2].add(tuple(sorted((v1, v2))))
    excellent = tuple(p for p in s4 if counts[p] == 0)
    good = tuple(p for p in s4 if counts[p] == 2)
    worst = tuple(p for p in s4 if counts[p] not in (0, 2))
    for p in EXCLUDED_U2:
        if p not in worst:
            raise RuntimeError(f"excluded permutation {p} is not in the worst class")
    bad = tuple(p for p in worst if p not in EXCLUDED_U2)
    avoided: set | None = None
    for p in bad:
        members = {x for pr in pairs[p] for x in pr}
        avoided = members if avoided is None else avoided & members
    avoided = tuple(sorted(avoided or ()))
    avoided_set = set(avoided)
    extendable_outside = True
    for u2 in bad:
        su = [p for p in s4 if compat_with_ident[p] and _index_disjoint(p, u2)]
        for v1 in s4:
            if v1 in avoided_set:
                continue
            for v2 in s4:
                if v2 in avoided_set:
                    continue
                sv = [p for p in s4 if _index_disjoint(p, v1) and _index_disjoint(p, v2)]
                if not any(_index_disjoint(a, b) for a in su for b in sv):
                    extendable_outside = False
    return FoldFourExtensionReport(
        non_extendable=tuple(bad_triples),
        counts_by_u2=counts,
        excluded=EXCLUDED_U2,
        excellent=excellent,
        good=good,
        bad=bad,
        problematic_pairs={p: tuple(sorted(pairs[p])) for p in s4 if pairs[p]},
        avoided=avoided,
        avoided_sufficient=extendable_outside,
    )


# ---------------------------------------------------------------------------
# two-vertex extension at fold 2*maxdeg - 2
# ---------------------------------------------------------------------------

@dataclass
class ExtensionFailure:
    """Certificate that some Hall step of the two-vertex extension failed;
    under the documented preconditions this never occurs, so an instance
    of this class is a counterexample worth keeping."""

    stage: str
    detail: dict


def _availability(cover: CorrespondenceCover, partial: dict, x: int, skip: int):
    k = cover.uniform_fold()
    avail = [set(range(1, k + 1)) for _ in range(k)]
    for w in cover.base.adj[x]:
        if w == skip or w not in partial:
            continue
        mp = cover.maps[(w, x)]
        for i in range(k):
            t = mp[partial[w][i]]
            if t:
                avail[i].discard(t)
    return avail


def _match_permutation(avail):
    k = len(avail)
    bg = hall.BipartiteGraph(k, k, [(i, s - 1) for i in range(k) for s in avail[i]])
    cert = hall.saturating_matching(bg)
    if cert.saturating():
        return tuple(b + 1 for b in cert.matching), None
    return None, cert.violator


def _pinned_matching_structure(v_avail, k: int, m: int):
    """Search both orientations of the availability bipartite graph
    (colour indices x slots) for the block pattern of the robustness
    claim: an m-set A1 complete to an (m-1)-set B1 and matched mK2+K1
    into the rest.  Returns (orientation, matched index/slot pairs)."""
    def has_edge(i, s):
        return s in v_avail[i]

    for orient in (0, 1):
        if orient == 0:
            a_side = list(range(k))
            b_side = list(range(1, k + 1))
            adj_ab = has_edge
        else:
            a_side = list(range(1, k + 1))
            b_side = list(range(k))
            adj_ab = lambda x, y: has_edge(y, x)
        for a1 in combinations(a_side, m):
            b1 = [y for y in b_side if all(adj_ab(x, y) for x in a1)]
            if len(b1) != m - 1:
                continue
            b2 = [y for y in b_side if y not in b1]
            partners = []
            ok = True
            for x in a1:
                ns = [y for y in b2 if adj_ab(x, y)]
                if len(ns) != 1:
                    ok = False
                    break
                partners.append(ns[0])
            if not ok or len(set(partners)) != m or len(b2) != m + 1:
                continue
            if orient == 0:
                pairs = tuple(zip(a1, partners))
            else:
                pairs = tuple((i, s) for s, i in zip(a1, partners))
            return orient, pairs
    return None


def extend_packing_two_vertices(cover: CorrespondenceCover, partial: dict,
                                edge) -> Packing | ExtensionFailure:
    """Extend a packing of G minus {u, v} across the edge uv when the base
    is Delta-regular, Delta >= 4 and the fold is 2*Delta - 2.

    First matches colouring indices to available slots at u; if the
    induced exclusions leave v unmatched, locates the rigid block
    structure in v's availability graph, re-matches u under two extra
    constraints that spare two of the pinned slots, and matches v.  Any
    Hall failure along the way is returned as a structured certificate
    (the preconditions guarantee there is none).
    """
    u, v = edge
    g = cover.base
    k = cover.uniform_fold()
    delta = max_degree(g)
    if delta < 4 or not g.is_regular(delta):
        raise PreconditionError("regular", "base must be Delta-regular with Delta >= 4")
    if k != 2 * delta - 2:
        raise PreconditionError("fold", f"fold must be {2 * delta - 2}")
    if not g.has_edge(u, v):
        raise PreconditionError("edge", f"({u},{v}) is not an edge")
    needed = set(range(g.n)) - {u, v}
    if set(partial) < needed:
        raise PreconditionError("partial", "partial packing must cover G minus {u, v}")
    partial = {w: p for w, p in partial.items() if w not in (u, v)}
    for w, perm in partial.items():
        if sorted(perm) != list(range(1, k + 1)):
            raise PreconditionError("partial", f"assignment at {w} is not a permutation")
    for x, y in cover.base.edges:
        if x in partial and y in partial:
            mp = cover.maps[(x, y)]
            for i in range(k):
                if mp[partial[x][i]] == partial[y][i]:
                    raise PreconditionError(
                        "partial", f"partial packing improper on edge ({x},{y})")

    m = k // 2
    u_avail = _availability(cover, partial, u, skip=v)
    v_avail = _availability(cover, partial, v, skip=u)
    uv_map = cover.maps[(u, v)]
    vu_map = cover.maps[(v, u)]

    sigma_u, violator = _match_permutation(u_avail)
    if sigma_u is None:
        return ExtensionFailure("u-matching", {"violator": sorted(violator)})

    def v_choices(su):
        out = []
        for i in range(k):
            drop = uv_map[su[i]]
            out.append(v_avail[i] - {drop} if drop else v_avail[i])
        return out

    sigma_v, violator = _match_permutation(v_choices(sigma_u))
    if sigma_v is None:
        found = _pinned_matching_structure(v_avail, k, m)
        if found is None:
            return ExtensionFailure(
                "no-block-structure",
                {"violator": sorted(violator), "v_avail": [sorted(a) for a in v_avail]})
        _, pairs = found
        constrained = [list(s) for s in u_avail]
        imposed = 0
        for i, slot_v in pairs:
            if imposed == 2:
                break
            back = vu_map[slot_v]
            if back:
                if back in constrained[i]:
                    constrained[i].remove(back)
                imposed += 1
        sigma_u, violator = _match_permutation([set(c) for c in constrained])
        if sigma_u is None:
            return ExtensionFailure("constrained-u-matching",
                                    {"violator": sorted(violator)})
        sigma_v, violator = _match_permutation(v_choices(sigma_u))
        if sigma_v is None:
            return ExtensionFailure("v-matching-after-structure",
                                    {"violator": sorted(violator)})
    assignments = dict(partial)
    assignments[u] = sigma_u
    assignments[v] = sigma_v
    packing = packing_from_assignments(g.n, assignments)
    errs = validate_packing(cover, packing)
    if errs:
        return ExtensionFailure("final-validation", {"violations": errs})
    return packing


def random_regular_extension_trial(g: Graph, rng: random.Random):
    """One randomized instance of the two-vertex extension: a random
    untwisted cover at fold 2*Delta-2, a greedy partial packing of
    G minus {u, v} for the lexicographically first edge, then the
    extension.  Returns the extension result."""
    delta = max_degree(g)
    k = 2 * delta - 2
    cover = cv.random_full_cover(g, k, rng)
    u, v = g.edges[0]
    sub = cover.subcover_without({u, v})
    greedy = greedy_degenerate_packing(sub)
    partial = {w: greedy.assignment(w) for w in range(g.n) if w not in (u, v)}
    return extend_packing_two_vertices(cover, partial, (u, v))
