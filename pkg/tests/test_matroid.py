import itertools

import pytest
from hypothesis import given, settings

from closurelab.closure import closed_sets, closure_table, materialize_mu
from closurelab.core import AttrSet, FdFunction, FdPair, Universe, submasks
from closurelab.covers import is_cover, nonredundant_cover
from closurelab.errors import (
    ClosureMismatch,
    NoDirectDetermination,
    NotNonredundantCover,
    PairMismatch,
    PairNotInMu,
    UnequalClosures,
)
from closurelab.fixtures import e1
from closurelab.matroid import (
    dd_bijection,
    dd_target,
    dd_target_case,
    directly_determines,
    enumerate_bases,
    exchange,
    interior_closure_mask,
    restrict,
    singleton_status,
    top_signature,
)
from closurelab.oracle import oracle_nonredundant_covers

from conftest import fd_functions

E1 = e1()
U = E1.universe
D = U.full()
MU = materialize_mu(E1)


def S(names):
    return U.set(names.split())


def F(*pairs):
    return FdFunction.parse_pairs(U, pairs)


def P(left, right):
    return FdPair(S(left), S(right))


ALPHA = F(("a", "a b"), ("b", "a b"), ("a c", "a b c d"))
BETA2 = F(("a", "a b"), ("b", "a b"), ("b c", "a b c d"))
GAMMA = F(("a", "a b"), ("b", "a b"), ("a b c", "a b c d"))


def test_restrict_examples():
    r = restrict(MU, S("a b"))
    assert r.body.fmt_lines() == ["->", "a -> a b", "b -> a b", "a b -> a b"]
    assert r.interior.fmt_lines() == ["->"]
    assert len(r.top) == 3
    assert restrict(GAMMA, D).top.fmt_lines() == ["a b c -> a b c d"]
    empty = restrict(GAMMA, S("c"), ambient=E1)
    assert len(empty.body) == len(empty.interior) == len(empty.top) == 0


def test_directly_determines_examples():
    ok, trace = directly_determines(E1, S("a c"), S("b c"))
    assert ok and trace.result == S("a b c")
    assert directly_determines(E1, S("a d"), S("a d"))[0]
    ok, _ = directly_determines(E1, S("a"), S("b"))
    assert not ok
    with pytest.raises(UnequalClosures):
        directly_determines(E1, S("a"), S("c"))


def test_dd_target_examples():
    assert dd_target(GAMMA, S("a c"), D) == P("a b c", "a b c d")
    assert dd_target_case(ALPHA, S("a c d"), D) == (P("a c", "a b c d"), "subset")
    with pytest.raises(ClosureMismatch):
        dd_target(GAMMA, S("a d"), D)


def test_exchange_examples():
    assert exchange(ALPHA, P("a c", "a b c d"), P("b c", "a b c d")) == BETA2
    p = P("a c", "a b c d")
    assert exchange(ALPHA, p, p) == ALPHA
    with pytest.raises(PairMismatch):
        exchange(ALPHA, P("a", "a b"), P("b c", "a b c d"))


def test_exchange_needs_direct_determination():
    # inside D's interior {a, c} only reaches {a, b, c}, which misses d
    with pytest.raises(NoDirectDetermination):
        exchange(ALPHA, P("a c", "a b c d"), P("a c d", "a b c d"))


def test_dd_bijection_examples():
    m = {(a.fmt(), b.fmt()) for a, b in dd_bijection(ALPHA, GAMMA)}
    assert m == {("a -> a b", "a -> a b"), ("b -> a b", "b -> a b"),
                 ("a c -> a b c d", "a b c -> a b c d")}
    assert all(a == b for a, b in dd_bijection(ALPHA, ALPHA))
    third = [(a.fmt(), b.fmt()) for a, b in dd_bijection(ALPHA, BETA2)][2]
    assert third == ("a c -> a b c d", "b c -> a b c d")
    with pytest.raises(NotNonredundantCover):
        dd_bijection(ALPHA, F(("a", "a b"), ("a b", "a b")))


def test_enumerate_bases_examples():
    bases = enumerate_bases(MU)
    assert sorted(bases, key=lambda f: f.sort_key()) == bases
    assert set(bases) == {ALPHA, BETA2, GAMMA}
    assert all(len(b) == 3 for b in bases)
    assert enumerate_bases(materialize_mu(FdFunction(U))) == [FdFunction(U)]
    v = Universe("ab")
    only = enumerate_bases(materialize_mu(FdFunction(v, [(1, 3)])))
    assert [b.fmt_lines() for b in only] == [["a -> a b"]]


def test_top_signature_examples():
    for b in (ALPHA, BETA2, GAMMA):
        assert top_signature(b) == [S("a b"), D]
    assert top_signature(FdFunction(U)) == []
    with pytest.raises(NotNonredundantCover):
        top_signature(F(("a", "a b"), ("a b", "a b")))


def test_singleton_status_examples():
    refl = singleton_status(MU, P("a b c d", "a b c d"))
    assert refl.mat12_dependent and not refl.oracle_independent
    ac = singleton_status(MU, P("a c", "a b c d"))
    assert not ac.mat12_dependent and ac.mat12_verdict == "undetermined"
    assert ac.oracle_independent and ac.in_some_basis
    abc = singleton_status(MU, P("a b c", "a b c d"))
    assert abc.mat12_dependent and not abc.left_is_key
    assert abc.in_some_basis and abc.conflict
    with pytest.raises(PairNotInMu):
        singleton_status(MU, P("a", "a"))


def _covers_and_mu(f):
    mu = materialize_mu(f)
    return mu, oracle_nonredundant_covers(mu)


@settings(max_examples=40)
@given(fd_functions(max_n=3, max_pairs=5))
def test_basis_laws_against_oracle(f):
    mu, bases = _covers_and_mu(f)
    assert set(enumerate_bases(mu)) == set(bases)
    assert len({len(b) for b in bases}) == 1
    assert len({tuple(top_signature(b)) for b in bases}) == 1
    as_sets = [frozenset(b.masks()) for b in bases]
    for a, b in itertools.product(as_sets, repeat=2):
        for x in a - b:
            assert any((a - {x}) | {y} in as_sets for y in b - a)
    for a, b in itertools.product(bases, repeat=2):
        fwd = dd_bijection(a, b)
        back = {p: q for q, p in dd_bijection(b, a)}
        assert len({q for _, q in fwd}) == len(b)
        assert all(back[q] == p for p, q in fwd)


@settings(max_examples=40)
@given(fd_functions(max_n=4, max_pairs=5))
def test_direct_determination_laws(f):
    t = closure_table(f)
    g = nonredundant_cover(f)
    for c in closed_sets(f):
        C = c.mask
        cls = [x for x in submasks(C) if t[x] == C]
        for x in cls:
            # the interior closure does not depend on which cover computes it
            assert interior_closure_mask(f, C, x) == interior_closure_mask(g, C, x)
            assert directly_determines(f, AttrSet(U_of(f), x), AttrSet(U_of(f), x))[0]
            for y in cls:
                if y & ~x == 0:
                    assert directly_determines(f, AttrSet(U_of(f), x), AttrSet(U_of(f), y))[0]
        reach = {x: interior_closure_mask(f, C, x) for x in cls}
        for x, y, z in itertools.product(cls, repeat=3):
            if y & ~reach[x] == 0 and z & ~reach[y] == 0:
                assert z & ~reach[x] == 0


def U_of(f):
    return f.universe


@settings(max_examples=30)
@given(fd_functions(max_n=4, max_pairs=5))
def test_exchange_keeps_cover(f):
    g = nonredundant_cover(f)
    mu = materialize_mu(f)
    for p in g.pairs():
        for l, r in mu.masks():
            if r != p.right.mask or l == r or g.has_mask(l, r):
                continue
            q = FdPair(AttrSet(f.universe, l), AttrSet(f.universe, r))
            try:
                h = exchange(g, p, q)
            except NoDirectDetermination:
                continue
            assert is_cover(h, g) and len(h) == len(g)
