import pytest
from hypothesis import given
from hypothesis import strategies as st

from closurelab.core import (
    AttrSet,
    FdFunction,
    FdPair,
    HereditaryCollection,
    Universe,
    canonical_order,
    insert_pair,
    make_universe,
    set_ops,
)
from closurelab.errors import (
    DuplicateAttribute,
    DuplicateLeft,
    EmptyName,
    NotHereditary,
    UniverseMismatch,
)

from conftest import fd_functions

U = make_universe(["a", "b", "c", "d"])


def S(names):
    return U.set(names.split())


def test_universe_basics():
    assert len(U) == 4
    assert U.index["a"] == 0
    assert len(make_universe(["City", "Year", "RainfallTotal"])) == 3


def test_universe_rejects_bad_names():
    with pytest.raises(DuplicateAttribute):
        make_universe(["a", "a"])
    with pytest.raises(EmptyName):
        make_universe(["a", ""])


def test_set_ops_examples():
    assert S("a c") <= S("a b c")
    assert not S("a") < S("a")
    assert S("a b") | S("c") == S("a b c")
    ops = set_ops(S("a b"), S("b c"))
    assert ops["union"] == S("a b c")
    assert ops["intersection"] == S("b")


def test_mixed_universes_rejected():
    v = Universe("abce")
    with pytest.raises(UniverseMismatch):
        S("a") | v.set(["a"])
    assert S("a") | Universe("abcd").set(["b"]) == S("a b")


sets = st.integers(0, U.full_mask).map(lambda m: AttrSet(U, m))


@given(sets, sets, sets)
def test_boolean_lattice_laws(x, y, z):
    assert (x | y) | z == x | (y | z)
    assert (x & y) & z == x & (y & z)
    assert x | (x & y) == x
    assert x & (x | y) == x
    assert ~(x | y) == ~x & ~y
    assert ~(x & y) == ~x | ~y
    assert ~~x == x
    assert (x <= y) == ((x & y) == x)


def test_insert_pair_merge_and_collision():
    f = FdFunction(U)
    f = insert_pair(f, FdPair(S("a"), S("b")))
    assert len(f) == 1
    merged = insert_pair(f, FdPair(S("a"), S("c")), merge=True)
    assert merged.pairs() == [FdPair(S("a"), S("b c"))]
    with pytest.raises(DuplicateLeft):
        insert_pair(f, FdPair(S("a"), S("b")))


def test_canonical_order_examples():
    D = U.full()
    f = FdFunction(U, [(S("a c"), D), (S("a"), S("a b"))])
    assert canonical_order(f) == [FdPair(S("a"), S("a b")), FdPair(S("a c"), D)]
    assert canonical_order(FdFunction(U)) == []
    g = FdFunction(U, [(S("b"), S("c")), (S("a"), S("d"))])
    assert [p.left for p in canonical_order(g)] == [S("a"), S("b")]


@given(fd_functions(canonical=False), st.randoms(use_true_random=False))
def test_canonical_order_ignores_insertion_order(f, rnd):
    pairs = f.masks()
    shuffled = pairs[:]
    rnd.shuffle(shuffled)
    g = FdFunction(f.universe, shuffled)
    assert canonical_order(g) == canonical_order(f)
    keys = [p.left.sort_key() for p in canonical_order(f)]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_function_algebra():
    f = FdFunction.parse_pairs(U, [("a", "a b"), ("b", "a b")])
    g = f.without(f.pairs()[0])
    assert len(g) == 1 and g <= f and not f <= g
    assert (f - g).as_map() == {1: 3}
    assert (g | (f - g)) == f


def test_hereditary_collection_checks_heredity():
    with pytest.raises(NotHereditary):
        HereditaryCollection(U, [0, 0b11])
    h = HereditaryCollection(U, [0, 1, 2, 3])
    assert h.maximal_masks() == [3]
