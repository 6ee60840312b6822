"""Integer kernels for the combinatorial inner loops.

Each kernel has two implementations:

* a numba ``@njit`` depth-first walk (used when numba imports and
  ``SKEWCAPELLI_NUMBA`` is not ``0``), and
* a vectorized numpy breadth-first expansion.

Both return identical arrays in identical row order. Indices are 0-based.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and os.environ.get("SKEWCAPELLI_NUMBA", "1") != "0"


def _jit(func):
    # compiled lazily on first call, so an unused path costs nothing
    return njit(cache=True)(func) if _HAVE_NUMBA else func


# --- numba path -------------------------------------------------------------

@_jit
def _parity(seq):
    inv = 0
    m = seq.shape[0]
    for p in range(m):
        for q in range(p + 1, m):
            if seq[p] > seq[q]:
                inv += 1
    return 1 - 2 * (inv & 1)


@_jit
def _matchings_walk(support, out, signs, write):
    m = support.shape[0]
    if m == 0:
        if write:
            signs[0] = 1
        return 1
    if m % 2 == 1:
        return 0
    half = m // 2
    used = np.zeros(m, np.bool_)
    first = np.zeros(half, np.int64)
    cur = np.zeros(half, np.int64)
    seq = np.zeros(m, np.int64)
    count = 0
    depth = 0
    used[0] = True
    while depth >= 0:
        a = first[depth]
        b = cur[depth]
        if b != a:
            used[b] = False
        b += 1
        while b < m and (used[b] or not support[a, b]):
            b += 1
        if b >= m:
            used[a] = False
            depth -= 1
            continue
        cur[depth] = b
        used[b] = True
        seq[2 * depth] = a
        seq[2 * depth + 1] = b
        if depth == half - 1:
            if write:
                out[count, :] = seq
                signs[count] = _parity(seq)
            count += 1
        else:
            depth += 1
            a2 = 0
            while used[a2]:
                a2 += 1
            first[depth] = a2
            cur[depth] = a2
            used[a2] = True
    return count


@_jit
def _sequences_walk(support, out, signs, write):
    m = support.shape[0]
    if m == 0:
        if write:
            signs[0] = 1
        return 1
    if m % 2 == 1:
        return 0
    used = np.zeros(m, np.bool_)
    cur = np.full(m, -1, np.int64)
    seq = np.zeros(m, np.int64)
    count = 0
    p = 0
    while p >= 0:
        c = cur[p]
        if c >= 0:
            used[c] = False
        c += 1
        while c < m and (used[c] or (p % 2 == 1 and not support[seq[p - 1], c])):
            c += 1
        if c >= m:
            cur[p] = -1
            p -= 1
            continue
        cur[p] = c
        used[c] = True
        seq[p] = c
        if p == m - 1:
            if write:
                out[count, :] = seq
                signs[count] = _parity(seq)
            count += 1
        else:
            p += 1
    return count


@_jit
def _popcount(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c


@_jit
def _wedge_signs_loop(a, b, out):
    for i in range(a.shape[0]):
        s = a[i]
        for j in range(b.shape[0]):
            t = b[j]
            if s & t:
                out[i, j] = 0
                continue
            inv = 0
            tt = t
            while tt:
                low = tt & -tt
                inv += _popcount(s & ~((low << 1) - 1))
                tt ^= low
            out[i, j] = 1 - 2 * (inv & 1)


def _two_pass(walk, support):
    support = np.ascontiguousarray(support, dtype=np.bool_)
    m = support.shape[0]
    dummy = np.zeros((1, max(m, 1)), np.int64)
    k = walk(support, dummy, np.zeros(1, np.int64), False)
    out = np.zeros((k, m), np.int64)
    signs = np.zeros(max(k, 1), np.int64)
    walk(support, out, signs, True)
    return out, signs[:k]


# --- numpy path -------------------------------------------------------------

def _parity_np(seqs: np.ndarray) -> np.ndarray:
    m = seqs.shape[1]
    inv = np.zeros(seqs.shape[0], np.int64)
    for p in range(m):
        inv += (seqs[:, p:p + 1] > seqs[:, p + 1:]).sum(axis=1)
    return 1 - 2 * (inv & 1)


def _matchings_np(support: np.ndarray):
    support = np.asarray(support, dtype=np.bool_)
    m = support.shape[0]
    if m % 2:
        return np.zeros((0, m), np.int64), np.zeros(0, np.int64)
    seqs = np.zeros((1, 0), np.int64)
    used = np.zeros((1, m), np.bool_)
    for _ in range(m // 2):
        a = np.argmin(used, axis=1)
        rows = np.arange(len(a))
        used_a = used.copy()
        used_a[rows, a] = True
        # candidate b for every partial: b > a, unused, supported
        cand = (~used_a) & support[a] & (np.arange(m)[None, :] > a[:, None])
        r, b = np.nonzero(cand)
        seqs = np.concatenate([seqs[r], a[r, None], b[:, None]], axis=1)
        used = used_a[r]
        used[np.arange(len(r)), b] = True
    if m == 0:
        return np.zeros((1, 0), np.int64), np.ones(1, np.int64)
    return seqs, _parity_np(seqs)


def _sequences_np(support: np.ndarray):
    support = np.asarray(support, dtype=np.bool_)
    m = support.shape[0]
    if m % 2:
        return np.zeros((0, m), np.int64), np.zeros(0, np.int64)
    seqs = np.zeros((1, 0), np.int64)
    used = np.zeros((1, m), np.bool_)
    for p in range(m):
        cand = ~used
        if p % 2 == 1:
            cand &= support[seqs[:, p - 1]]
        r, c = np.nonzero(cand)
        seqs = np.concatenate([seqs[r], c[:, None]], axis=1)
        used = used[r]
        used[np.arange(len(r)), c] = True
    if m == 0:
        return np.zeros((1, 0), np.int64), np.ones(1, np.int64)
    return seqs, _parity_np(seqs)


def _wedge_signs_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    overlap = (a[:, None] & b[None, :]) != 0
    top = int(max(a.max(initial=0), b.max(initial=0))).bit_length()
    inv = np.zeros((len(a), len(b)), np.int64)
    for y in range(top):
        bit = (b >> y) & 1
        above = np.bitwise_count(a >> (y + 1)).astype(np.int64)
        inv += above[:, None] * bit[None, :]
    out = (1 - 2 * (inv & 1)).astype(np.int8)
    out[overlap] = 0
    return out


# --- public entry points ----------------------------------------------------

def perfect_matchings(support, accelerated: bool = None):
    """All perfect matchings of the graph ``support`` (symmetric bool matrix).

    Returns ``(seqs, signs)``: row ``r`` is the flattened matching
    ``(a1, b1, a2, b2, ...)`` with ``a_k < b_k`` and ``a1 < a2 < ...``; ``signs[r]``
    is the parity of that sequence as a permutation.
    """
    use = NUMBA_ENABLED if accelerated is None else accelerated and _HAVE_NUMBA
    if use:
        return _two_pass(_matchings_walk, support)
    return _matchings_np(support)


def pair_sequences(support, accelerated: bool = None):
    """All permutations ``s`` with ``support[s[2k], s[2k+1]]`` for every k, with parities."""
    use = NUMBA_ENABLED if accelerated is None else accelerated and _HAVE_NUMBA
    if use:
        return _two_pass(_sequences_walk, support)
    return _sequences_np(support)


def wedge_signs(a_masks, b_masks, accelerated: bool = None) -> np.ndarray:
    """Sign of ``e_S ^ e_T`` for every bitmask pair (0 when the sets overlap)."""
    use = NUMBA_ENABLED if accelerated is None else accelerated and _HAVE_NUMBA
    a = np.ascontiguousarray(a_masks, dtype=np.int64)
    b = np.ascontiguousarray(b_masks, dtype=np.int64)
    if use:
        out = np.zeros((len(a), len(b)), np.int8)
        _wedge_signs_loop(a, b, out)
        return out
    return _wedge_signs_np(a, b)


def permutation_parity(seq) -> int:
    """+1 for an even permutation (by inversion count), -1 for odd."""
    arr = np.asarray(seq, dtype=np.int64).reshape(1, -1)
    return int(_parity_np(arr)[0])
