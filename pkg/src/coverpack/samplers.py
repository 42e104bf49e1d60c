"""Randomized transversal constructions with exact marginal oracles.

Two samplers: a greedy one for covers whose list sizes exceed the vertex
degrees, guaranteeing every slot marginal at least 1/|L(v)|, and a two-phase
one for covers of bipartite graphs at fold max-degree-plus-one on the
lighter side, where every marginal is exactly 1/k.  Both assume matchings
completed to maximum/perfect size; completion is performed internally
(lexicographic pairing of unmatched slots) and only adds constraints, so
the guarantees transfer to the original cover.

The oracles expand the full choice tree with Fraction weights and must
use the same deterministic tie-breaks as the samplers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .covers import CorrespondenceCover
from .errors import PreconditionError, ResourceCapError
from .graphs import bipartition

MARGINALS_SCHEMA = "coverpack.marginals/1"


@dataclass
class MarginalTable:
    """Exact inclusion probability per (vertex, slot)."""

    entries: dict

    def min_ratio_ok(self, fold) -> bool:
        return all(w >= Fraction(1, fold[v]) for (v, _s), w in self.entries.items())

    def verify_sums(self, fold) -> bool:
        n = 1 + max(v for v, _ in self.entries)
        for v in range(n):
            total = sum(self.entries[(v, s)] for s in range(1, fold[v] + 1))
            if total != 1:
                return False
        return True

    def to_json(self) -> dict:
        return {"schema": MARGINALS_SCHEMA,
                "marginals": {f"{v}:{s}": str(w)
                              for (v, s), w in sorted(self.entries.items())}}


def complete_matchings(cover: CorrespondenceCover,
                       perfect: bool = False) -> CorrespondenceCover:
    """Pair unmatched slots on every edge in lexicographic order until the
    matching is maximum (or perfect, which requires equal endpoint folds)."""
    new = {}
    for (u, v), m in cover.matchings.items():
        m = dict(m)
        used_u = set(m)
        used_v = set(m.values())
        free_u = [s for s in range(1, cover.fold[u] + 1) if s not in used_u]
        free_v = [t for t in range(1, cover.fold[v] + 1) if t not in used_v]
        if perfect and cover.fold[u] != cover.fold[v]:
            raise PreconditionError("fold", "perfect completion needs equal folds")
        for s, t in zip(free_u, free_v):
            m[s] = t
        new[(u, v)] = m
    return CorrespondenceCover(cover.base, cover.fold, new)


def _check_sizes_exceed_degrees(cover: CorrespondenceCover) -> None:
    g = cover.base
    for v in range(g.n):
        if cover.fold[v] < g.degree(v) + 1:
            raise PreconditionError(
                "list-size", f"|L({v})| = {cover.fold[v]} < deg+1 = {g.degree(v) + 1}")


def _pick_vertex(remaining, lists):
    """Max current list size, ties to the lowest id; the oracle replays
    the identical rule."""
    return max(sorted(remaining), key=lambda v: (len(lists[v]), -v))


def _delete_slot_neighbours(cover, remaining, lists, v, x):
    """Remove v and the matched partners of its chosen slot from the
    neighbouring lists; returns the updated lists dict."""
    new_lists = dict(lists)
    del new_lists[v]
    for w in cover.base.adj[v]:
        if w in remaining and w != v:
            partner = cover.maps[(v, w)][x]
            if partner and partner in new_lists[w]:
                new_lists[w] = tuple(s for s in new_lists[w] if s != partner)
    return new_lists


def greedy_fractional_sampler(cover: CorrespondenceCover, seed) -> tuple:
    """One random transversal: repeatedly pick the max-list vertex, draw a
    uniform slot, delete its closed neighbourhood, recurse."""
    _check_sizes_exceed_degrees(cover)
    work = complete_matchings(cover)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    remaining = set(range(work.base.n))
    lists = {v: tuple(range(1, work.fold[v] + 1)) for v in remaining}
    choice = {}
    while remaining:
        v = _pick_vertex(remaining, lists)
        x = rng.choice(lists[v])
        choice[v] = x
        remaining.discard(v)
        lists = _delete_slot_neighbours(work, remaining, lists, v, x)
    out = tuple(choice[v] for v in range(work.base.n))
    _assert_independent(cover, out)
    return out


def _assert_independent(cover, t):
    for u, v in cover.base.edges:
        if cover.maps[(u, v)][t[u]] == t[v]:
            raise RuntimeError(f"sampler produced a conflicting pair on edge ({u},{v})")


def exact_marginals_greedy(cover: CorrespondenceCover,
                           cap: int = 10 ** 7) -> MarginalTable:
    """Exact slot marginals of the greedy sampler by expanding its whole
    recursion tree with rational weights."""
    _check_sizes_exceed_degrees(cover)
    work = complete_matchings(cover)
    marg = {(v, s): Fraction(0)
            for v in range(work.base.n) for s in range(1, work.fold[v] + 1)}
    leaves = 0

    def rec(remaining, lists, weight):
        nonlocal leaves
        if not remaining:
            leaves += 1
            if leaves > cap:
                raise ResourceCapError(f"recursion tree beyond {cap} leaves")
            return
        v = _pick_vertex(remaining, lists)
        p = weight / len(lists[v])
        rest = remaining - {v}
        for x in lists[v]:
            marg[(v, x)] += p
            rec(rest, _delete_slot_neighbours(work, rest, lists, v, x), p)

    lists0 = {v: tuple(range(1, work.fold[v] + 1)) for v in range(work.base.n)}
    rec(frozenset(range(work.base.n)), lists0, Fraction(1))
    return MarginalTable(marg)


def _bipartite_setup(cover: CorrespondenceCover):
    parts = bipartition(cover.base)
    if parts is None:
        raise PreconditionError("bipartite", "base graph is not bipartite")
    a_side, b_side = parts
    k = cover.uniform_fold()
    delta_a = max((cover.base.degree(v) for v in a_side), default=0)
    if k < delta_a + 1:
        raise PreconditionError("fold", f"fold {k} < max degree on A + 1 = {delta_a + 1}")
    return complete_matchings(cover, perfect=True), a_side, b_side, k


def _available_for(work, a, b_choice):
    avail = set(range(1, work.fold[a] + 1))
    for b in work.base.adj[a]:
        partner = work.maps[(b, a)][b_choice[b]]
        if partner:
            avail.discard(partner)
    return sorted(avail)


def bipartite_sampler(cover: CorrespondenceCover, seed) -> tuple:
    """Uniform independent slots on the B side, then for each A vertex a
    uniform slot among those not matched to the B choices."""
    work, a_side, b_side, k = _bipartite_setup(cover)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    choice = {}
    for b in b_side:
        choice[b] = rng.randint(1, k)
    for a in a_side:
        avail = _available_for(work, a, choice)
        choice[a] = rng.choice(avail)
    out = tuple(choice[v] for v in range(work.base.n))
    _assert_independent(cover, out)
    return out


def exact_marginals_bipartite(cover: CorrespondenceCover,
                              cap: int = 10 ** 7) -> MarginalTable:
    """Exact marginals of the bipartite sampler by summing over all k^|B|
    choices on the B side."""
    work, a_side, b_side, k = _bipartite_setup(cover)
    if k ** len(b_side) > cap:
        raise ResourceCapError(f"{k}^{len(b_side)} B-side choices beyond {cap}")
    marg = {(v, s): Fraction(0)
            for v in range(work.base.n) for s in range(1, work.fold[v] + 1)}
    weight = Fraction(1, k ** len(b_side))
    for combo in product(range(1, k + 1), repeat=len(b_side)):
        b_choice = dict(zip(b_side, combo))
        for b, s in b_choice.items():
            marg[(b, s)] += weight
        for a in a_side:
            avail = _available_for(work, a, b_choice)
            share = weight / len(avail)
            for s in avail:
                marg[(a, s)] += share
    return MarginalTable(marg)
