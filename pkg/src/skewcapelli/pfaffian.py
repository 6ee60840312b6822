"""Noncommutative and commutative Pfaffians.

Backends:

``full``
    ``1/(2^n n!) * sum over all of S_2n`` of signed ordered products.
``restricted``
    ``1/n! * sum`` over permutations with ``s(2i-1) < s(2i)``, i.e. every
    perfect matching with every ordering of its pairs. With ``fuse=True`` the
    ordering average is taken per group of mutually non-commuting entries.
``forms``
    Volume coefficient of the n-th power of the associated 2-form
    (see :mod:`skewcapelli.forms`).
``commutative``
    One product per matching; only valid when entries commute.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import _kernels
from .opmatrix import OpMatrix, check_hat, is_alternating, is_anti_alternating, j_matrix, matmul
from .scalars import ScalarMatrix
from .weyl import WeylElement, weyl_mul

# dimension guards (2n); configuration, overridable per call
GUARDS: Dict[str, int] = {"full": 8, "restricted": 12, "forms": 14}
PARALLEL_MIN_MATCHINGS = 2000

BACKENDS = ("full", "restricted", "forms", "commutative")


class PfaffianError(ValueError):
    pass


@dataclass(frozen=True)
class Matching:
    """A perfect matching of [2n] as ordered pairs ``(a, b)``, ``a < b`` (1-based)."""

    pairs: Tuple[Tuple[int, int], ...]
    sign: int

    def flattened(self) -> Tuple[int, ...]:
        return tuple(v for p in self.pairs for v in p)


def matchings(m: int, support=None) -> List[Matching]:
    """Perfect matchings of [m] restricted to the boolean ``support`` (default: complete)."""
    if support is None:
        support = ~np.eye(m, dtype=bool)
    seqs, signs = _kernels.perfect_matchings(support)
    return [Matching(tuple((int(r[2 * k]) + 1, int(r[2 * k + 1]) + 1) for k in range(m // 2)), int(s))
            for r, s in zip(seqs, signs)]


def matching_sign(pairs: Sequence[Tuple[int, int]]) -> int:
    return _kernels.permutation_parity([v for p in pairs for v in p])


def _support(X) -> np.ndarray:
    m = len(X.rows)
    return np.array([[bool(X.rows[i][j]) for j in range(m)] for i in range(m)], dtype=bool).reshape(m, m)


def _check_alternating(X: OpMatrix, backend: str, max_dim) -> int:
    m = X.dim
    if m % 2:
        raise PfaffianError(f"odd dimension {m}")
    limit = GUARDS[backend] if max_dim is None else max_dim
    if m > limit:
        hint = " (use the restricted or forms backend)" if backend == "full" else ""
        raise PfaffianError(f"dimension {m} exceeds the {backend} guard {limit}{hint}")
    if not is_alternating(X):
        raise PfaffianError("matrix is not alternating")
    return m // 2


def pf_full(X: OpMatrix, max_dim: int = None, check: bool = True) -> WeylElement:
    n_pairs = _check_alternating(X, "full", max_dim) if check else X.dim // 2
    seqs, signs = _kernels.pair_sequences(_support(X))
    rows = X.rows
    acc = WeylElement.zero(X.n)
    # rows come in DFS order: reuse prefix products shared with the previous row
    prefix: List[WeylElement] = [WeylElement.one(X.n)]
    prev = None
    for seq, sgn in zip(seqs.tolist(), signs.tolist()):
        start = 0
        if prev is not None:
            while start < n_pairs and seq[2 * start:2 * start + 2] == prev[2 * start:2 * start + 2]:
                start += 1
        del prefix[start + 1:]
        for k in range(start, n_pairs):
            prefix.append(weyl_mul(prefix[-1], rows[seq[2 * k]][seq[2 * k + 1]]))
        acc = acc + prefix[-1] if sgn > 0 else acc - prefix[-1]
        prev = seq
    if X.dim == 0:
        return WeylElement.one(X.n)
    return acc.scale(Fraction(1, 2 ** n_pairs * math.factorial(n_pairs)))


def _all_orderings_average(entries: Sequence[WeylElement], n: int) -> WeylElement:
    acc = WeylElement.zero(n)
    count = 0
    for order in permutations(range(len(entries))):
        p = WeylElement.one(n)
        for k in order:
            p = weyl_mul(p, entries[k])
        acc = acc + p
        count += 1
    return acc.scale(Fraction(1, count))


def _commute(a: WeylElement, b: WeylElement) -> bool:
    ax, ad = a.support()
    bx, bd = b.support()
    return not (ax & bd) and not (ad & bx)


def symmetrized_product(entries: Sequence[WeylElement], n: int, fuse: bool = True) -> WeylElement:
    """Average of the ordered products over all orderings of ``entries``.

    With ``fuse``, entries are grouped into connected components of the
    non-commutation graph (disjoint variable support as x versus d); induced
    orders on different components are independent and uniform, so the average
    factorises over components.
    """
    if not fuse:
        return _all_orderings_average(entries, n)
    k = len(entries)
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(k):
        for j in range(i + 1, k):
            if not _commute(entries[i], entries[j]):
                parent[find(i)] = find(j)
    groups: Dict[int, List[WeylElement]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(entries[i])
    out = WeylElement.one(n)
    for g in groups.values():
        out = weyl_mul(out, g[0] if len(g) == 1 else _all_orderings_average(g, n))
    return out


def _restricted_chunk(args) -> WeylElement:
    rows, n, chunk, fuse = args
    acc = WeylElement.zero(n)
    for seq, sgn in chunk:
        entries = [rows[seq[2 * k]][seq[2 * k + 1]] for k in range(len(seq) // 2)]
        term = symmetrized_product(entries, n, fuse)
        acc = acc + term if sgn > 0 else acc - term
    return acc


def pf_restricted(X: OpMatrix, max_dim: int = None, fuse: bool = True, workers: int = 1,
                  check: bool = True) -> WeylElement:
    if check:
        _check_alternating(X, "restricted", max_dim)
    if X.dim == 0:
        return WeylElement.one(X.n)
    seqs, signs = _kernels.perfect_matchings(_support(X))
    work = list(zip(seqs.tolist(), signs.tolist()))
    if workers > 1 and len(work) >= PARALLEL_MIN_MATCHINGS:
        chunks = [work[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_restricted_chunk, [(X.rows, X.n, c, fuse) for c in chunks]))
        acc = WeylElement.zero(X.n)
        for p in parts:
            acc = acc + p
        return acc
    return _restricted_chunk((X.rows, X.n, work, fuse))


def _one_like(entry):
    if isinstance(entry, WeylElement):
        return WeylElement.one(entry.n)
    if hasattr(type(entry), "one") and hasattr(entry, "n"):
        return type(entry).one(entry.n)
    return Fraction(1)


def _as_rows(X) -> List[list]:
    if isinstance(X, (OpMatrix, ScalarMatrix)):
        return [list(r) for r in X.rows]
    return [list(r) for r in X]


def pf_commutative(X, one=None):
    """Sum over perfect matchings, one product per matching (entries must commute)."""
    rows = _as_rows(X)
    m = len(rows)
    if m % 2:
        raise PfaffianError(f"odd dimension {m}")
    if one is None:
        if m == 0:
            one = WeylElement.one(X.n) if isinstance(X, OpMatrix) else Fraction(1)
        else:
            one = _one_like(rows[0][0])
    if m == 0:
        return one
    support = np.array([[bool(v) if not isinstance(v, (int, Fraction)) else v != 0 for v in r] for r in rows])
    seqs, signs = _kernels.perfect_matchings(support)
    acc = one - one
    for seq, sgn in zip(seqs.tolist(), signs.tolist()):
        p = one
        for k in range(m // 2):
            p = p * rows[seq[2 * k]][seq[2 * k + 1]]
        acc = acc + p if sgn > 0 else acc - p
    return acc


def pf_commutative_recursive(X, one=None):
    """First-row expansion ``Pf(A) = sum_j (-1)^j a[1,j] Pf(A minus rows/cols 1, j)``."""
    rows = _as_rows(X)
    m = len(rows)
    if m % 2:
        raise PfaffianError(f"odd dimension {m}")
    if one is None:
        if m == 0:
            one = WeylElement.one(X.n) if isinstance(X, OpMatrix) else Fraction(1)
        else:
            one = _one_like(rows[0][0])

    def rec(idx: Tuple[int, ...]):
        if not idx:
            return one
        first, rest = idx[0], idx[1:]
        acc = one - one
        for pos, j in enumerate(rest):
            a = rows[first][j]
            if not a:
                continue
            sub = rest[:pos] + rest[pos + 1:]
            term = a * rec(sub)
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    return rec(tuple(range(m)))


def pfaffian(X: OpMatrix, backend: str = "restricted", **kw) -> WeylElement:
    """Pfaffian of an alternating matrix with the named backend."""
    if backend == "full":
        kw.pop("workers", None)
        kw.pop("fuse", None)
        return pf_full(X, **kw)
    if backend == "restricted":
        return pf_restricted(X, **kw)
    if backend == "commutative":
        return pf_commutative(X)
    if backend == "forms":
        from .forms import pf_via_forms_alternating

        return pf_via_forms_alternating(X, **kw)
    raise PfaffianError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")


def pf_anti(X: OpMatrix, backend: str = "restricted", **kw) -> WeylElement:
    """Pfaffian of an anti-alternating matrix, ``Pf(X J)``."""
    if X.dim % 2:
        raise PfaffianError(f"odd dimension {X.dim}")
    if not is_anti_alternating(X):
        raise PfaffianError("matrix is not anti-alternating")
    if backend == "forms":
        from .forms import pf_via_forms

        return pf_via_forms(X, **kw)
    return pfaffian(matmul(X, j_matrix(X.dim)), backend, **kw) if X.dim else WeylElement.one(X.n)


def pf_equivariance_check(g: ScalarMatrix, X: OpMatrix, backend: str = "restricted") -> bool:
    """``Pf(g X J g^T J) == det(g) Pf(X)`` for anti-alternating X."""
    lhs = pf_anti(matmul(matmul(g, X), check_hat(g)), backend)
    return lhs == pf_anti(X, backend).scale(g.det())
