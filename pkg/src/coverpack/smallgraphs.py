"""Exhaustive enumeration of small graphs up to isomorphism.

Brute-force canonical forms (minimum edge bitmask over all vertex
permutations) are fine at n <= 5, which is all the exhaustive
spot-checks need.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .graphs import Graph


def _edge_index(n):
    pairs = list(combinations(range(n), 2))
    return pairs, {p: i for i, p in enumerate(pairs)}


def _canonical_mask(mask, n, perms, pairs, index):
    best = None
    for p in perms:
        out = 0
        m = mask
        while m:
            b = (m & -m).bit_length() - 1
            m &= m - 1
            u, v = pairs[b]
            pu, pv = p[u], p[v]
            out |= 1 << index[(min(pu, pv), max(pu, pv))]
        if best is None or out < best:
            best = out
    return best


def nonisomorphic_graphs(n: int):
    """All graphs on exactly n vertices up to isomorphism (n <= 5)."""
    if n > 5:
        raise ValueError("brute-force enumeration is limited to n <= 5")
    pairs, index = _edge_index(n)
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        canon = _canonical_mask(mask, n, perms, pairs, index)
        if canon in seen:
            continue
        seen.add(canon)
        edges = [pairs[b] for b in range(len(pairs)) if canon >> b & 1]
        out.append(Graph(n, edges))
    return out


def connected_graphs_max_degree(n_max: int, dmax: int):
    """Connected graphs with at most n_max vertices and maximum degree at
    most dmax, one per isomorphism class."""
    out = []
    for n in range(1, n_max + 1):
        for g in nonisomorphic_graphs(n):
            if g.is_connected() and all(g.degree(v) <= dmax for v in range(n)):
                out.append(g)
    return out
