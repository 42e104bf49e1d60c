import random
from itertools import product

import pytest

from coverpack import covers as cv
from coverpack import fractional as fr
from coverpack import graphs
from coverpack import packing as pk
from coverpack.errors import PreconditionError


def bad_lists_c4():
    return cv.ListAssignment.of([(1, 2), (1, 2), (1, 3), (2, 3)])


def is_bipartite_edges(nverts, edges):
    colour = {}
    adj = {v: [] for v in range(nverts)}
    for x, y in edges:
        adj[x].append(y)
        adj[y].append(x)
    for root in range(nverts):
        if root in colour:
            continue
        colour[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
    return True


def test_cover_from_lists_identity():
    g = graphs.cycle(4)
    c = cv.cover_from_lists(g, cv.ListAssignment.of([(1, 2, 3)] * 4))
    assert c.is_full(3)
    assert all(m == {1: 1, 2: 2, 3: 3} for m in c.matchings.values())


def test_cover_from_lists_bad_even_cycle_has_odd_cycle():
    g = graphs.cycle(4)
    c = cv.cover_from_lists(g, bad_lists_c4())
    cg = cv.expand(c)
    idx = {s: i for i, s in enumerate(cg.slots)}
    assert not is_bipartite_edges(len(cg.slots), [(idx[x], idx[y]) for x, y in cg.edges])


def test_cover_from_lists_disjoint_lists_empty_matching():
    g = graphs.path(2)
    c = cv.cover_from_lists(g, cv.ListAssignment.of([(1, 2), (3, 4)]))
    assert c.matchings[(0, 1)] == {}


def test_validate_reports_violations():
    g = graphs.path(2)
    ok = cv.cover_from_lists(g, cv.ListAssignment.of([(1, 2), (1, 2)]))
    assert cv.validate(ok) == []
    bad = cv.validate_data(g, [2, 2], {(0, 1): {1: 1, 2: 1}})
    assert any(v[0] == "not-injective" for v in bad)
    bad = cv.validate_data(graphs.Graph(3, [(0, 1)]), [2, 2, 2], {(0, 2): {1: 1}})
    assert any(v[0] == "matching-on-non-edge" for v in bad)


def test_expand_counts():
    c = cv.identity_cover(graphs.cycle(4), 3)
    cg = cv.expand(c)
    assert len(cg.slots) == 12
    assert len(cg.edges) == 4 * 3 + 4 * 3
    two = cv.identity_cover(graphs.path(2), 2)
    cg2 = cv.expand(two)
    # one clique edge per vertex plus the two matching edges: a 4-cycle
    assert len(cg2.slots) == 4 and len(cg2.edges) == 4
    assert is_bipartite_edges(4, [(cg2.index[x], cg2.index[y]) for x, y in cg2.edges])


def twisted_cover(n):
    g = graphs.cycle(n)
    matchings = {e: {1: 1, 2: 2, 3: 3} for e in g.edges}
    matchings[(0, n - 1)] = {1: 1, 2: 3, 3: 2}
    return cv.CorrespondenceCover(g, 3, matchings)


def test_monodromy_examples():
    n = 5
    c = twisted_cover(n)
    walk = list(range(n)) + [0]
    mono = cv.monodromy(c, walk)
    assert cv.permutation_parity(mono) == 1
    ident = cv.identity_cover(graphs.cycle(n), 3)
    assert cv.monodromy(ident, walk) == (1, 2, 3)


def test_untwist_examples():
    n = 5
    c = twisted_cover(n)
    forest = [e for e in c.base.edges if e != (0, n - 1)]
    out, relab = cv.untwist(c, forest)
    for e in forest:
        assert out.matchings[e] == {1: 1, 2: 2, 3: 3}
    walk = list(range(n)) + [0]
    assert cv.permutation_parity(cv.monodromy(out, walk)) == 1
    ident = cv.identity_cover(graphs.cycle(4), 3)
    same, _ = cv.untwist(ident, [e for e in ident.base.edges][:3])
    assert same == ident
    tree = cv.identity_cover(graphs.path(4), 2)
    out2, _ = cv.untwist(tree, tree.base.edges)
    assert out2 == tree
    with pytest.raises(PreconditionError):
        cv.untwist(c, c.base.edges)  # contains a cycle


def random_free_cover(g, k, rng):
    per = cv.perms_of(k)
    matchings = {}
    for e in g.edges:
        p = rng.choice(per)
        matchings[e] = {s: p[s - 1] for s in range(1, k + 1)}
    return cv.CorrespondenceCover(g, k, matchings)


def transport_packing(packing, relab):
    cols = []
    for c in packing.colourings:
        cols.append(tuple(relab[v][c[v] - 1] for v in range(len(c))))
    return pk.Packing(tuple(cols))


def test_untwist_preserves_packing_and_fractional():
    rng = random.Random(99)
    for n in (3, 4, 5, 6):
        g = graphs.cycle(n)
        covers = []
        if n <= 4:
            per = cv.perms_of(3)
            for combo in product(range(6), repeat=n):
                matchings = {}
                for e, ci in zip(g.edges, combo):
                    p = per[ci]
                    matchings[e] = {s: p[s - 1] for s in range(1, 4)}
                covers.append(cv.CorrespondenceCover(g, 3, matchings))
        else:
            covers = [random_free_cover(g, 3, rng) for _ in range(40)]
        forest = [e for e in g.edges if e != (0, n - 1)]
        for c in covers:
            out, relab = cv.untwist(c, forest)
            p_before = pk.find_packing(c)
            p_after = pk.find_packing(out)
            assert (p_before is None) == (p_after is None)
            if p_before is not None:
                moved = transport_packing(p_before, relab)
                assert pk.validate_packing(out, moved) == []
            assert pk.count_packings(c) == pk.count_packings(out)
            f_before = fr.fractional_packing(c)
            f_after = fr.fractional_packing(out)
            assert isinstance(f_before, fr.FractionalPacking) == \
                isinstance(f_after, fr.FractionalPacking)


def test_is_list_cover_roundtrip_and_negatives():
    g = graphs.cycle(4)
    c = cv.cover_from_lists(g, bad_lists_c4())
    res = cv.is_list_cover(c)
    assert res is not None
    recovered, naming = res
    # recovered classes refine the original colours
    original = {(v, i + 1): col for v in range(4)
                for i, col in enumerate(bad_lists_c4().lists[v])}
    by_class = {}
    for slot, cls in naming.items():
        by_class.setdefault(cls, set()).add(original[slot])
    assert all(len(s) == 1 for s in by_class.values())
    assert cv.is_list_cover(twisted_cover(5)) is None
    full = cv.identity_cover(graphs.complete(3), 3)
    rec, _ = cv.is_list_cover(full)
    assert rec.lists == ((1, 2, 3),) * 3


def test_is_list_cover_iff_trivial_monodromy():
    for n in (3, 4, 5):
        g = graphs.cycle(n)
        walk = list(range(n)) + [0]
        for _, c in cv.enumerate_covers(g, 3):
            listy = cv.is_list_cover(c) is not None
            assert listy == (cv.monodromy(c, walk) == (1, 2, 3))


def test_enumerate_covers_counts_and_sharding():
    g = graphs.cycle(5)
    allc = list(cv.enumerate_covers(g, 3))
    assert len(allc) == 6 == cv.count_covers(g, 3)
    seen = {tuple(sorted((e, tuple(sorted(m.items()))) for e, m in c.matchings.items()))
            for _, c in allc}
    assert len(seen) == 6
    assert cv.count_covers(graphs.complete(4), 4) == 24 ** 3 == 13824
    assert cv.count_covers(graphs.path(5), 7) == 1
    first = [c for _, c in cv.enumerate_covers(g, 3, start=0, end=3)]
    rest = [c for _, c in cv.enumerate_covers(g, 3, start=3)]
    assert [c.matchings for c in first + rest] == [c.matchings for _, c in allc]
    for idx, c in allc:
        assert cv.cover_at_index(g, 3, idx) == c


def test_cover_json_roundtrip_and_dimacs():
    c = twisted_cover(4)
    again = cv.cover_from_json(cv.cover_to_json(c))
    assert again == c
    text = cv.to_dimacs(c)
    lines = text.strip().splitlines()
    assert lines[1] == "p edge 12 24"
    assert sum(1 for ln in lines if ln.startswith("e ")) == 24


def test_list_assignment_validation():
    with pytest.raises(ValueError):
        cv.ListAssignment.of([[]])
    la = cv.ListAssignment.of([(3, 1), (2, 2, 4)])
    assert la.lists == ((1, 3), (2, 4))
    assert la.uniform(2)
    assert la.palette() == (1, 2, 3, 4)
