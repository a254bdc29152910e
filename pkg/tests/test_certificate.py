import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghforge.certificate import forest_decomposition, sparsify
from ghforge.graph import GraphError

from conftest import graphs
from oracles import cut_table


def check_certificate(g, h, k):
    _, cg = cut_table(g.n, g.edges)
    _, ch = cut_table(h.n, h.edges)
    assert ((cg.clip(max=k) <= ch) & (ch <= cg)).all()
    assert h.m <= min(g.m, k * (g.n - 1))
    assert set(h.edges) <= set(g.edges)


def test_k1_spanning_forest(K4):
    h = sparsify(K4, 1)
    assert h.m == 3
    check_certificate(K4, h, 1)


def test_k3_on_k4_keeps_everything(K4):
    assert sparsify(K4, 3) == K4


@pytest.mark.parametrize("k", [1, 2, 5])
def test_tree_is_own_certificate(P3, k):
    assert sparsify(P3, k) == P3


def test_rejects_k0(K4):
    with pytest.raises(GraphError):
        sparsify(K4, 0)


def test_forests_are_forests(K4):
    for f in forest_decomposition(K4, 3):
        assert len(f) <= 3


@settings(max_examples=60, deadline=None)
@given(graphs(2, 11), st.integers(1, 5))
def test_certificate_property(g, k):
    h = sparsify(g, k)
    check_certificate(g, h, k)
    check_certificate(g, sparsify(h, k), k)
