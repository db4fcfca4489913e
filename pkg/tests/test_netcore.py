import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

import oracles
from snirkit import (
    DirectedGraph,
    GeneratorSpec,
    betweenness,
    follower_loss,
    gen_er,
    gen_powerlaw,
    gen_sbm,
    harmonic,
    in_degree,
    read_edgelist,
    write_edgelist,
)
from snirkit.errors import DataError, EmptyGraphError, InvalidConfigError
from snirkit.netcore import powerlaw_pmf


def path3():
    return DirectedGraph.from_edges(3, [(0, 1), (1, 2)])


@st.composite
def digraphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    a = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    m = np.array(a, dtype=float).reshape(n, n)
    np.fill_diagonal(m, 0)
    return DirectedGraph.from_dense(m)


# -- storage ---------------------------------------------------------------

def test_in_degree_examples():
    g = DirectedGraph.from_edges(3, [(0, 1), (2, 1)])
    assert in_degree(g).tolist() == [0, 2, 0]
    assert in_degree(DirectedGraph(4)).tolist() == [0] * 4
    full = DirectedGraph.from_dense(1 - np.eye(4))
    assert in_degree(full).tolist() == [3] * 4


def test_graph_rejects_self_loops_and_collapses_duplicates():
    with pytest.raises(InvalidConfigError):
        DirectedGraph.from_edges(2, [(1, 1)])
    g = DirectedGraph.from_edges(3, [(0, 1), (0, 1), (2, 1)])
    assert g.n_edges == 2
    assert g.has_edge(0, 1) and not g.has_edge(1, 0)


def test_neighbors_and_block():
    g = DirectedGraph.from_edges(4, [(0, 1), (2, 1), (3, 0)])
    assert g.in_neighbors(1).tolist() == [0, 2]
    assert g.out_neighbors(3).tolist() == [0]
    b = g.block([0, 2, 3], [1, 0]).toarray()
    assert b.tolist() == [[1, 0], [1, 0], [0, 1]]


def test_graph_is_immutable():
    g = path3()
    with pytest.raises(ValueError):
        g.in_degree[0] = 5


@given(digraphs())
def test_degree_sums_match_edges(g):
    assert g.in_degree.sum() == g.n_edges == g.out_degree.sum()
    assert np.array_equal(g.in_degree, g.to_dense().sum(axis=0))


# -- generators ------------------------------------------------------------

def test_er_trivial():
    assert gen_er(3, 1.0, seed=0).n_edges == 6
    assert gen_er(3, 0.0, seed=0).n_edges == 0


def test_er_edge_count_within_4sd():
    n = 5000
    p = 0.5 * n ** -0.8
    g = gen_er(n, seed=7)
    mean = n * (n - 1) * p
    assert abs(g.n_edges - mean) <= 4 * np.sqrt(mean * (1 - p))


def test_er_is_seed_deterministic():
    assert gen_er(300, seed=3) == gen_er(300, seed=3)
    assert gen_er(300, seed=3) != gen_er(300, seed=4)


def test_sbm_trivial():
    assert gen_sbm(4, k_blocks=1, p_in=1.0, p_out=0.3, seed=0).n_edges == 12
    g, blocks = gen_sbm(4, k_blocks=4, p_in=1.0, p_out=0.0, seed=0, return_blocks=True)
    # with uniform labels some blocks may share nodes; only within-block pairs link
    a = g.to_dense()
    same = blocks[:, None] == blocks[None, :]
    np.fill_diagonal(same, False)
    assert np.array_equal(a.astype(bool), same)


def test_sbm_rates_within_4sd():
    n = 2500
    g, blocks = gen_sbm(n, seed=11, return_blocks=True)
    a = g.adjacency.tocoo()
    same = blocks[a.row] == blocks[a.col]
    sizes = np.bincount(blocks)
    pairs_in = int((sizes * (sizes - 1)).sum())
    pairs_out = n * (n - 1) - pairs_in
    for count, pairs, p in ((same.sum(), pairs_in, n ** -0.8), ((~same).sum(), pairs_out, 0.5 * n ** -0.8)):
        sd = np.sqrt(pairs * p * (1 - p))
        assert abs(count - pairs * p) <= 4 * sd


def test_powerlaw_two_nodes_is_two_cycle():
    for alpha in (1.5, 2.5, 4.0):
        g = gen_powerlaw(2, alpha, seed=1)
        assert g.in_degree.tolist() == [1, 1]
        assert g.has_edge(0, 1) and g.has_edge(1, 0)


def test_powerlaw_in_degree_fits_truncated_law():
    n = 5000
    g = gen_powerlaw(n, 2.5, seed=5)
    pmf = powerlaw_pmf(n, 2.5)
    edges = [1, 2, 3, 4, 5, 7, 10, 15, 25, n]
    obs, exp = [], []
    deg = g.in_degree
    for lo, hi in zip(edges[:-1], edges[1:]):
        obs.append(np.sum((deg >= lo) & (deg < hi)))
        exp.append(n * pmf[lo - 1: hi - 1].sum())
    p = stats.chisquare(obs, exp).pvalue
    assert p > 0.01


def test_powerlaw_self_consistent():
    g = gen_powerlaw(100, 2.5, seed=9)
    assert np.array_equal(g.in_degree, g.to_dense().sum(axis=0))
    assert g.in_degree.min() >= 1


def test_generator_spec_validation():
    with pytest.raises(InvalidConfigError):
        GeneratorSpec("lattice", 10)
    with pytest.raises(InvalidConfigError):
        GeneratorSpec("er", 10, {"p": 1.5})
    with pytest.raises(InvalidConfigError):
        GeneratorSpec("powerlaw", 10, {"alpha": 0.5})
    assert GeneratorSpec("ER", 50, {"p": 0.1}).build(seed=2) == gen_er(50, 0.1, seed=2)


# -- centralities ----------------------------------------------------------

def test_betweenness_examples():
    assert betweenness(path3()).tolist() == [0.0, 1.0, 0.0]
    assert betweenness(DirectedGraph.from_dense(1 - np.eye(3))).tolist() == [0.0] * 3
    assert betweenness(DirectedGraph.from_edges(4, [(0, 1), (2, 3)])).tolist() == [0.0] * 4


def test_harmonic_examples():
    assert harmonic(path3())[2] == pytest.approx(1.5)
    assert harmonic(DirectedGraph(3)).tolist() == [0.0] * 3
    assert harmonic(DirectedGraph.from_edges(2, [(0, 1), (1, 0)])).tolist() == [1.0, 1.0]


@given(digraphs(max_n=8))
def test_centralities_match_path_enumeration(g):
    a = g.to_dense()
    bc = np.array([float(x) for x in oracles.betweenness_exact(a)])
    hc = np.array([float(x) for x in oracles.harmonic_exact(a)])
    np.testing.assert_allclose(betweenness(g), bc, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(harmonic(g), hc, rtol=1e-12, atol=1e-12)


def test_centralities_match_networkx_on_er():
    nx = pytest.importorskip("networkx")
    g = gen_er(300, 0.02, seed=4)
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(zip(*map(np.ndarray.tolist, g.edges())))
    bc = nx.betweenness_centrality(h, normalized=False)
    hc = nx.harmonic_centrality(h)
    np.testing.assert_allclose(betweenness(g), [bc[i] for i in range(g.n)], rtol=1e-10, atol=1e-9)
    np.testing.assert_allclose(harmonic(g), [hc[i] for i in range(g.n)], rtol=1e-10, atol=1e-9)


# -- follower loss ---------------------------------------------------------

def test_follower_loss_examples():
    g = DirectedGraph.from_edges(3, [(0, 2), (1, 2), (0, 1)])
    assert follower_loss(g, []) == 0
    assert follower_loss(g, [0, 1, 2]) == 1
    assert follower_loss(g, [2]) == pytest.approx(2 / 3)
    with pytest.raises(EmptyGraphError):
        follower_loss(DirectedGraph(3), [0])


@given(digraphs(), st.data())
def test_follower_loss_monotone(g, data):
    if g.n_edges == 0:
        return
    s = data.draw(st.sets(st.integers(0, g.n - 1)))
    extra = data.draw(st.integers(0, g.n - 1))
    assert follower_loss(g, s) <= follower_loss(g, s | {extra}) + 1e-15


# -- edge lists ------------------------------------------------------------

def test_edgelist_round_trip(tmp_path):
    g = DirectedGraph.from_edges(5, [(3, 0), (0, 1), (1, 3)], labels=["a", "b", "c", "d", "e"])
    p = tmp_path / "g.txt"
    write_edgelist(g, p)
    h = read_edgelist(p)
    assert h == g and h.labels == g.labels


@given(digraphs())
def test_edgelist_round_trip_property(g):
    import tempfile, os
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "g.txt")
        write_edgelist(g, p)
        assert read_edgelist(p) == g


def test_edgelist_parsing(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("src,dst\nalice,bob\n# note\n\ncarol, bob\nalice,bob\nbob,bob\n")
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        g = read_edgelist(p)
    msgs = " ".join(str(x.message) for x in w)
    assert "header" in msgs and "self-loop" in msgs and "duplicate" in msgs
    assert g.labels == ["alice", "bob", "carol"]
    assert g.in_degree.tolist() == [0, 2, 0]


def test_edgelist_bad_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1 2\n3 4 5\n")
    with pytest.raises(DataError) as e:
        read_edgelist(p)
    assert e.value.lineno == 2
    q = tmp_path / "empty.txt"
    q.write_text("# nothing\n")
    with pytest.raises(DataError):
        read_edgelist(q)
