"""Hot kernels, each with a numba implementation and a pure-numpy fallback.

Set ``CLOSURELAB_NO_NUMBA=1`` in the environment to force the numpy path, or
switch at runtime with :func:`use_backend`.  Both paths return bit-identical
results; ``benchmarks/bench_kernels.py`` times them against each other.

Attribute sets travel through the kernels as little-endian ``uint64`` word
arrays (``words_of`` / ``mask_of_words`` convert from/to Python ints).
"""
from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


_DISABLED = os.environ.get("CLOSURELAB_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

_WORD = 64
_M64 = (1 << 64) - 1


def n_words(n_attrs: int) -> int:
    return max(1, -(-n_attrs // _WORD))


def words_of(mask: int, w: int) -> np.ndarray:
    return np.array([(mask >> (_WORD * i)) & _M64 for i in range(w)], dtype=np.uint64)


def mask_of_words(words) -> int:
    out = 0
    for i, v in enumerate(words.tolist()):
        out |= v << (_WORD * i)
    return out


# ---------------------------------------------------------------------------
# Linear-time closure (per-pair counters + work queue)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _fire(j, right, result, queue, tail):
    W = result.shape[0]
    one = np.uint64(1)
    zero = np.uint64(0)
    for w in range(W):
        new = right[j, w] & ~result[w]
        if new != zero:
            result[w] |= new
            b = 0
            while new != zero:
                if new & one:
                    queue[tail] = w * 64 + b
                    tail += 1
                new >>= one
                b += 1
    return tail


@njit(cache=True)
def _covers(result, target):
    for w in range(result.shape[0]):
        if target[w] & ~result[w]:
            return False
    return True


@njit(cache=True)
def closure_numba(x, left_count, right, ptr, idx, active, target, use_target):
    W = x.shape[0]
    P = right.shape[0]
    result = x.copy()
    counter = left_count.copy()
    queue = np.empty(W * 64, dtype=np.int64)
    head = 0
    tail = 0
    one = np.uint64(1)
    zero = np.uint64(0)
    for w in range(W):
        v = x[w]
        b = 0
        while v != zero:
            if v & one:
                queue[tail] = w * 64 + b
                tail += 1
            v >>= one
            b += 1
    if use_target and _covers(result, target):
        return result
    for j in range(P):
        if counter[j] == 0 and active[j]:
            tail = _fire(j, right, result, queue, tail)
            if use_target and _covers(result, target):
                return result
    while head < tail:
        a = queue[head]
        head += 1
        for k in range(ptr[a], ptr[a + 1]):
            j = idx[k]
            counter[j] -= 1
            if counter[j] == 0 and active[j]:
                tail = _fire(j, right, result, queue, tail)
                if use_target and _covers(result, target):
                    return result
    return result


def _bit_positions(words: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.unpackbits(words.view(np.uint8), bitorder="little"))


def closure_numpy(x, left_count, right, ptr, idx, active, target, use_target):
    """Same counter discipline, processed one frontier wave at a time."""
    P = right.shape[0]
    result = x.copy()
    counter = left_count.copy()
    pending = active.copy()
    frontier = _bit_positions(result)
    ready = pending & (counter == 0)
    while True:
        if frontier.size:
            starts = ptr[frontier]
            lens = ptr[frontier + 1] - starts
            total = int(lens.sum())
            if total:
                offs = np.repeat(starts - np.concatenate(([0], np.cumsum(lens)[:-1])), lens)
                hit = idx[offs + np.arange(total)]
                counter -= np.bincount(hit, minlength=P)
            ready = pending & (counter == 0)
        if not ready.any():
            break
        pending &= ~ready
        acc = np.bitwise_or.reduce(right[ready], axis=0)
        new = acc & ~result
        result |= new
        ready = np.zeros(P, dtype=bool)
        if use_target and not (target & ~result).any():
            break
        frontier = _bit_positions(new)
        if not frontier.size:
            break
    return result


@njit(cache=True)
def closure_batch_numba(xs, left_count, right, ptr, idx, active):
    out = np.empty_like(xs)
    dummy = np.zeros(xs.shape[1], dtype=np.uint64)
    for q in range(xs.shape[0]):
        out[q] = closure_numba(xs[q], left_count, right, ptr, idx, active, dummy, False)
    return out


def closure_batch_numpy(xs, left_count, right, ptr, idx, active):
    dummy = np.zeros(xs.shape[1], dtype=np.uint64)
    out = np.empty_like(xs)
    for q in range(xs.shape[0]):
        out[q] = closure_numpy(xs[q], left_count, right, ptr, idx, active, dummy, False)
    return out


# ---------------------------------------------------------------------------
# Closures of fixed queries under every subfamily of a small pair list
# ---------------------------------------------------------------------------

@njit(cache=True)
def subset_closures_numba(lefts, rights, queries):
    P = lefts.shape[0]
    Q = queries.shape[0]
    M = 1 << P
    out = np.empty((M, Q), dtype=np.int64)
    for m in range(M):
        for q in range(Q):
            if m == 0:
                cur = queries[q]
            else:
                # the parent family's closure is already closed under every pair but
                # the newest one, so unless that pair fires the closure is unchanged
                cur = out[m & (m - 1), q]
                low = m & -m
                j0 = 0
                while (low >> j0) != 1:
                    j0 += 1
                if (lefts[j0] & ~cur) != 0 or (rights[j0] & ~cur) == 0:
                    out[m, q] = cur
                    continue
            changed = True
            while changed:
                changed = False
                for j in range(P):
                    if (m >> j) & 1 and (lefts[j] & ~cur) == 0 and (rights[j] & ~cur) != 0:
                        cur |= rights[j]
                        changed = True
            out[m, q] = cur
    return out


def subset_closures_numpy(lefts, rights, queries):
    P = lefts.shape[0]
    M = 1 << P
    member = ((np.arange(M, dtype=np.int64)[:, None] >> np.arange(P)) & 1).astype(bool)
    out = np.broadcast_to(queries, (M, queries.shape[0])).copy()
    changed = True
    while changed:
        changed = False
        for j in range(P):
            fire = member[:, j:j + 1] & ((lefts[j] & ~out) == 0) & ((rights[j] & ~out) != 0)
            if fire.any():
                out = np.where(fire, out | rights[j], out)
                changed = True
    return out


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_IMPLS = {
    "numba": (closure_numba, closure_batch_numba, subset_closures_numba),
    "numpy": (closure_numpy, closure_batch_numpy, subset_closures_numpy),
}


def closure_words(*args):
    return _IMPLS[BACKEND][0](*args)


def closure_batch(*args):
    return _IMPLS[BACKEND][1](*args)


def subset_closures(lefts, rights, queries):
    """``out[m, q]`` = closure of ``queries[q]`` under the pairs selected by bitmask ``m``.

    Masks must fit in 62 bits and there must be at most ~20 pairs.
    """
    lefts = np.asarray(lefts, dtype=np.int64)
    rights = np.asarray(rights, dtype=np.int64)
    queries = np.asarray(queries, dtype=np.int64)
    return _IMPLS[BACKEND][2](lefts, rights, queries)


def set_backend(name: str):
    global BACKEND
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


@contextlib.contextmanager
def use_backend(name: str):
    prev = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


class ClosureIndex:
    """Packed form of a function's pairs, built once and queried many times.

    ``closure(x)`` runs the linear counter algorithm; ``active`` (a boolean
    array over pair positions in canonical order) switches pairs off without
    rebuilding, which is what redundancy elimination needs.
    """

    def __init__(self, n_attrs: int, pairs):
        self.n_attrs = n_attrs
        self.w = n_words(n_attrs)
        P = len(pairs)
        self.n_pairs = P
        self.lefts = [l for l, _ in pairs]
        self.rights = [r for _, r in pairs]
        if n_attrs <= 64:
            self.left_words = np.array(self.lefts, dtype=np.uint64).reshape(P, 1)
            self.right_words = np.array(self.rights, dtype=np.uint64).reshape(P, 1)
        else:
            self.left_words = np.array([words_of(l, self.w) for l in self.lefts], dtype=np.uint64).reshape(P, self.w)
            self.right_words = np.array([words_of(r, self.w) for r in self.rights], dtype=np.uint64).reshape(P, self.w)
        self.left_count = np.array([l.bit_count() for l in self.lefts], dtype=np.int64)
        buckets = [[] for _ in range(self.w * _WORD)]
        for j, l in enumerate(self.lefts):
            while l:
                low = l & -l
                buckets[low.bit_length() - 1].append(j)
                l ^= low
        lens = np.array([len(b) for b in buckets], dtype=np.int64)
        self.ptr = np.zeros(len(buckets) + 1, dtype=np.int64)
        np.cumsum(lens, out=self.ptr[1:])
        self.idx = np.array([j for b in buckets for j in b], dtype=np.int64)
        self.all_active = np.ones(P, dtype=bool)
        self._zero = np.zeros(self.w, dtype=np.uint64)

    def _words(self, mask: int) -> np.ndarray:
        if self.w == 1:
            return np.array([mask], dtype=np.uint64)
        return words_of(mask, self.w)

    def closure(self, x: int, active=None, target=None) -> int:
        """Closure of ``x``; with ``target`` set, may stop as soon as it is covered."""
        if active is None:
            active = self.all_active
        if target is None:
            t, use = self._zero, False
        else:
            t, use = self._words(target), True
        res = closure_words(self._words(x), self.left_count, self.right_words,
                            self.ptr, self.idx, active, t, use)
        if self.w == 1:
            return int(res[0])
        return mask_of_words(res)

    def closure_many(self, xs, active=None) -> list[int]:
        if active is None:
            active = self.all_active
        if not len(xs):
            return []
        if self.w == 1:
            arr = np.array(xs, dtype=np.uint64).reshape(len(xs), 1)
        else:
            arr = np.array([words_of(x, self.w) for x in xs], dtype=np.uint64)
        out = closure_batch(arr, self.left_count, self.right_words, self.ptr, self.idx, active)
        if self.w == 1:
            return [int(v) for v in out[:, 0].tolist()]
        return [mask_of_words(row) for row in out]
