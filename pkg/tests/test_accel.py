import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from closurelab import _accel
from closurelab._accel import ClosureIndex, subset_closures, use_backend
from closurelab.oracle import naive_closure

import pytest


@st.composite
def wide_pairs(draw):
    n = draw(st.integers(1, 150))
    full = (1 << n) - 1
    pairs = draw(st.lists(st.tuples(st.integers(0, full), st.integers(0, full)), max_size=12))
    xs = draw(st.lists(st.integers(0, full), min_size=1, max_size=4))
    return n, pairs, xs


def _dedupe(pairs):
    table = {}
    for l, r in pairs:
        table[l] = table.get(l, 0) | r
    return list(table.items())


@given(wide_pairs())
def test_backends_agree_with_naive_closure(case):
    n, pairs, xs = case
    pairs = _dedupe(pairs)
    idx = ClosureIndex(n, pairs)
    expect = [naive_closure(pairs, x) for x in xs]
    for name in ("numba", "numpy"):
        with use_backend(name):
            assert [idx.closure(x) for x in xs] == expect
            assert idx.closure_many(xs) == expect


@given(wide_pairs(), st.data())
def test_active_mask_and_target(case, data):
    n, pairs, xs = case
    pairs = _dedupe(pairs)
    idx = ClosureIndex(n, pairs)
    active = np.array(data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs))),
                      dtype=bool)
    kept = [p for p, a in zip(pairs, active) if a]
    for name in ("numba", "numpy"):
        with use_backend(name):
            for x in xs:
                full = naive_closure(kept, x)
                assert idx.closure(x, active) == full
                # early exit still reports a superset of the target when it is reachable
                got = idx.closure(x, active, target=full)
                assert full & ~got == 0


@given(st.integers(1, 6), st.data())
def test_subset_closure_kernels_agree(n, data):
    full = (1 << n) - 1
    pairs = data.draw(st.lists(st.tuples(st.integers(0, full), st.integers(0, full)), max_size=7))
    lefts = [l for l, _ in pairs]
    rights = [r for _, r in pairs]
    queries = np.arange(1 << n)
    with use_backend("numba"):
        a = subset_closures(lefts, rights, queries)
    with use_backend("numpy"):
        b = subset_closures(lefts, rights, queries)
    assert (a == b).all()
    for m in range(1 << len(pairs)):
        fam = [pairs[j] for j in range(len(pairs)) if m >> j & 1]
        assert a[m].tolist() == [naive_closure(fam, int(q)) for q in queries]


def test_backend_switching():
    prev = _accel.BACKEND
    with use_backend("numpy"):
        assert _accel.BACKEND == "numpy"
    assert _accel.BACKEND == prev
    with pytest.raises(ValueError):
        _accel.set_backend("fortran")


def test_env_flag_selects_numpy():
    import os
    import subprocess
    import sys

    env = dict(os.environ, CLOSURELAB_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from closurelab import _accel; print(_accel.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
