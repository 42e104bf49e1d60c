import json

import pytest
from hypothesis import given, settings, strategies as st

from coverpack import graphs
from coverpack.errors import PreconditionError


def random_graph(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.integers(0, 2 ** len(pairs) - 1))
    return graphs.Graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


graph_strategy = st.composite(random_graph)()


def test_builders_basic_counts():
    f = graphs.fan7()
    assert (f.n, f.num_edges(), graphs.max_degree(f)) == (7, 11, 6)
    neck = graphs.diamond_necklace()
    assert neck.n == 8 and neck.is_regular(3) and neck.num_edges() == 12
    p = graphs.petersen()
    assert (p.n, p.num_edges()) == (10, 15)
    assert graphs.girth(p) == 5


def test_builder_preconditions():
    with pytest.raises(ValueError):
        graphs.cycle(2)
    with pytest.raises(ValueError):
        graphs.path(0)
    with pytest.raises(ValueError):
        graphs.latin_square(0)


def test_graph_rejects_loops_and_range():
    with pytest.raises(ValueError):
        graphs.Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        graphs.Graph(2, [(0, 5)])


def test_degeneracy_examples():
    assert graphs.degeneracy(graphs.cycle(5)).degeneracy == 2
    assert graphs.degeneracy(graphs.complete(4)).degeneracy == 3
    assert graphs.degeneracy(graphs.path(6)).degeneracy == 1


def degeneracy_oracle(g):
    """Max over induced subgraphs of the minimum degree."""
    best = 0
    for mask in range(1, 1 << g.n):
        verts = [v for v in range(g.n) if mask >> v & 1]
        vs = set(verts)
        degs = [sum(1 for w in g.adj[v] if w in vs) for v in verts]
        best = max(best, min(degs))
    return best


@settings(max_examples=60, deadline=None)
@given(graph_strategy)
def test_degeneracy_matches_subgraph_oracle(g):
    dg = graphs.degeneracy(g)
    assert dg.degeneracy == degeneracy_oracle(g)
    # back-degree bound
    pos = {v: i for i, v in enumerate(dg.order)}
    for v in range(g.n):
        assert sum(1 for w in g.adj[v] if pos[w] > pos[v]) <= dg.degeneracy


def test_edge_not_in_triangle_examples():
    e = graphs.edge_not_in_triangle(graphs.petersen())
    assert e in graphs.petersen().edges
    neck = graphs.diamond_necklace()
    assert graphs.edge_not_in_triangle(neck) in {(0, 4), (1, 5)}
    with pytest.raises(PreconditionError) as exc:
        graphs.edge_not_in_triangle(graphs.complete(4))
    assert exc.value.reason == "is-k4"
    with pytest.raises(PreconditionError) as exc:
        graphs.edge_not_in_triangle(graphs.cycle(5))
    assert exc.value.reason == "not-cubic"


def all_labelled_cubic_6():
    pairs = [(u, v) for u in range(6) for v in range(u + 1, 6)]
    out = []
    for mask in range(1 << len(pairs)):
        if bin(mask).count("1") != 9:
            continue
        deg = [0] * 6
        for i, (u, v) in enumerate(pairs):
            if mask >> i & 1:
                deg[u] += 1
                deg[v] += 1
        if all(d == 3 for d in deg):
            out.append(graphs.Graph(6, [p for i, p in enumerate(pairs) if mask >> i & 1]))
    return out


def test_edge_not_in_triangle_all_cubic_on_6():
    for g in all_labelled_cubic_6():
        if not g.is_connected():
            continue
        u, v = graphs.edge_not_in_triangle(g)
        assert not set(g.adj[u]) & set(g.adj[v])


def random_cubic(n, rng):
    """Pairing-model cubic graph, rejection sampled to simplicity."""
    import random
    while True:
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            if a == b or (min(a, b), max(a, b)) in edges:
                ok = False
                break
            edges.add((min(a, b), max(a, b)))
        if ok:
            return graphs.Graph(n, edges)


def test_edge_not_in_triangle_random_cubic():
    import random
    rng = random.Random(4242)
    for n in (8, 10, 12, 14):
        for _ in range(25):
            g = random_cubic(n, rng)
            if not g.is_connected():
                continue
            u, v = graphs.edge_not_in_triangle(g)
            assert not set(g.adj[u]) & set(g.adj[v])


def test_clique_number_examples():
    assert graphs.max_degree(graphs.cycle(6)) == 2
    assert graphs.clique_number(graphs.cycle(6)) == 2
    assert graphs.clique_number(graphs.complete(5)) == 5
    ls = graphs.latin_square(4)
    assert graphs.max_degree(ls) == 6
    assert graphs.clique_number(ls) == 4


def test_latin_square_regular():
    for n in (2, 3, 4):
        g = graphs.latin_square(n)
        assert g.is_regular(2 * (n - 1))


def test_build_standard_and_json_roundtrip():
    g = graphs.build_standard("complete_bipartite(3,3)")
    assert g.n == 6 and g.num_edges() == 9
    assert graphs.build_standard("petersen").n == 10
    with pytest.raises(ValueError):
        graphs.build_standard("unknown(3)")
    data = json.loads(json.dumps(graphs.graph_to_json(g)))
    assert graphs.graph_from_json(data) == g
    with pytest.raises(ValueError):
        graphs.graph_from_json({"n": 2, "edges": [[0, 1], [1, 0]]})


def test_bipartition_prefers_lighter_side():
    g = graphs.complete_bipartite(5, 2)
    a, b = graphs.bipartition(g)
    assert max(g.degree(v) for v in a) <= max(g.degree(v) for v in b)
    assert set(a) == set(range(5))
    assert graphs.bipartition(graphs.cycle(5)) is None
