import os
import subprocess
import sys
from itertools import permutations

import numpy as np
import pytest

from skewcapelli import _kernels


def brute_parity(seq):
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def double_factorial(m):
    out = 1
    for k in range(m - 1, 0, -2):
        out *= k
    return out


@pytest.mark.parametrize("m", [0, 2, 4, 6, 8, 10])
def test_matchings_count_and_signs(m):
    seqs, signs = _kernels.perfect_matchings(~np.eye(m, dtype=bool))
    assert len(seqs) == double_factorial(m) if m else len(seqs) == 1
    for row, s in zip(seqs.tolist(), signs.tolist()):
        assert brute_parity(row) == s
        assert all(row[2 * k] < row[2 * k + 1] for k in range(m // 2))
        assert sorted(row) == list(range(m))


@pytest.mark.parametrize("m", range(0, 9))
def test_numba_and_numpy_paths_agree(m):
    rng = np.random.default_rng(m)
    sup = rng.random((m, m)) < 0.7
    sup = np.triu(sup, 1)
    sup = sup | sup.T
    for fn in (_kernels.perfect_matchings, _kernels.pair_sequences):
        a = fn(sup, accelerated=True)
        b = fn(sup, accelerated=False)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_pair_sequences_match_brute_force():
    m = 6
    sup = ~np.eye(m, dtype=bool)
    sup[0, 3] = sup[3, 0] = False
    seqs, signs = _kernels.pair_sequences(sup)
    expected = [p for p in permutations(range(m)) if all(sup[p[2 * k], p[2 * k + 1]] for k in range(m // 2))]
    assert [tuple(r) for r in seqs.tolist()] == expected
    assert signs.tolist() == [brute_parity(p) for p in expected]


def test_odd_dimension_has_no_matchings():
    seqs, signs = _kernels.perfect_matchings(~np.eye(5, dtype=bool))
    assert len(seqs) == 0 and len(signs) == 0


def brute_wedge(s, t):
    if s & t:
        return 0
    seq = [p for p in range(16) if s >> p & 1] + [p for p in range(16) if t >> p & 1]
    return brute_parity(seq)


def test_wedge_signs_against_brute_force():
    a = np.arange(64, dtype=np.int64)
    b = np.array([0, 1, 5, 12, 33, 48, 63], dtype=np.int64)
    expected = np.array([[brute_wedge(int(s), int(t)) for t in b] for s in a])
    for acc in (True, False):
        assert np.array_equal(_kernels.wedge_signs(a, b, accelerated=acc), expected)


def test_permutation_parity():
    assert _kernels.permutation_parity([1, 0]) == -1
    assert _kernels.permutation_parity([0, 1, 2]) == 1
    assert _kernels.permutation_parity([3, 2, 1, 0]) == 1


def test_environment_flag_selects_numpy_path():
    env = dict(os.environ, SKEWCAPELLI_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from skewcapelli import _kernels; print(_kernels.NUMBA_ENABLED)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
