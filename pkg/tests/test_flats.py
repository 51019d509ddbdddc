from hypothesis import given

from closurelab.core import AttrSet, submasks
from closurelab.errors import NotIndependent
from closurelab.fixtures import e3, e4
from closurelab.flats import (
    ancestors,
    delta,
    delta_table,
    flat_report,
    from_facets,
    kappa_bottomup,
    kappa_mask,
    kappa_topdown,
    maximal_independent_subsets,
    uniform_collection,
)

import pytest

from conftest import hereditary, universe

E3, E4 = e3(), e4()


def S(h, names):
    return h.universe.set(names.split())


def fmts(sets):
    return [" ".join(s) for s in sets]


def test_from_facets_examples():
    assert sorted(E4.members) == [0, 1, 2, 3, 4]
    u = universe(3)
    assert from_facets(u, []).members == {0}
    assert len(from_facets(u, [u.full_mask])) == 8


def test_delta_examples():
    assert delta(E4, S(E4, "c")) == E4.universe.full()
    assert delta(E3, S(E3, "a")) == E3.universe.full()
    free = uniform_collection(3, 3)
    for m in free.members:
        assert delta_table(free)[m] == m
    with pytest.raises(NotIndependent):
        delta(E4, S(E4, "a c"))


def test_ancestors_examples():
    assert fmts(ancestors(E3, S(E3, "a"))) == ["a b"]
    assert fmts(ancestors(E4, S(E4, "c"))) == ["a c", "b c", "a b c"]
    images = sorted(set(delta_table(E4).values()))
    assert sorted(a.mask for a in ancestors(E4, E4.universe.empty())) == images


def test_kappa_examples():
    assert kappa_topdown(E4, S(E4, "c")) == S(E4, "c")
    assert kappa_topdown(E3, S(E3, "a")) == E3.universe.full()
    assert kappa_topdown(E4, E4.universe.empty()) == E4.universe.empty()
    assert kappa_bottomup(E3, S(E3, "a")) == E3.universe.full()
    assert kappa_bottomup(E4, S(E4, "c")) == E4.universe.full()
    rep = flat_report(E4, S(E4, "c"))
    assert rep["divergent"] and rep["topdown"] == S(E4, "c")
    free = uniform_collection(3, 3)
    for m in range(8):
        x = AttrSet(free.universe, m)
        assert kappa_bottomup(free, x) == x == kappa_topdown(free, x)


def test_maximal_independent_subsets():
    assert fmts(maximal_independent_subsets(E4, E4.universe.full())) == ["c", "a b"]


@given(hereditary(max_n=5))
def test_flat_closure_laws(h):
    n = len(h.universe)
    k = [kappa_mask(h, x) for x in range(1 << n)]
    d = delta_table(h)
    for y in range(1 << n):
        assert y & ~k[y] == 0 and k[k[y]] == k[y]
        for x in submasks(y):
            assert k[x] & ~k[y] == 0
        assert ancestors(h, AttrSet(h.universe, y))
        for i in maximal_independent_subsets(h, AttrSet(h.universe, y)):
            assert k[y] & ~d[i.mask] == 0
    # every member is a key of its flat closure
    for i in h.members:
        assert all(k[i & ~(1 << b)] != k[i] for b in range(n) if i >> b & 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_uniform_matroids_agree(n):
    for k in range(n + 1):
        h = uniform_collection(k, n)
        d = delta_table(h)
        for x in range(1 << n):
            xs = AttrSet(h.universe, x)
            top = kappa_topdown(h, xs)
            assert kappa_bottomup(h, xs) == top
            for i in maximal_independent_subsets(h, xs):
                assert d[i.mask] == top.mask
