"""Matrices over the Weyl algebra: M, D, the operator matrix Phi(u), J and the
embedding of GL_n into SO_2n.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Sequence, Union

from .scalars import ScalarMatrix
from .weyl import (
    WeylElement,
    conjugate_derivation,
    conjugate_multiplication,
    signed_generator,
    weyl_mul,
)


class MatrixError(ValueError):
    pass


class OpMatrix:
    """Dense square matrix of :class:`WeylElement` entries over a common n."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[Sequence[WeylElement]]):
        rows = [list(r) for r in rows]
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise MatrixError("OpMatrix must be square")
        for r in rows:
            for e in r:
                if not isinstance(e, WeylElement):
                    raise MatrixError(f"entry {e!r} is not a WeylElement")
                if e.n != n:
                    raise MatrixError(f"entry over n={e.n} in a matrix over n={n}")
        self.n = n
        self.rows: List[List[WeylElement]] = rows

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> WeylElement:
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> WeylElement:
        """1-based access."""
        return self.rows[i - 1][j - 1]

    @classmethod
    def zeros(cls, n: int, m: int) -> "OpMatrix":
        return cls(n, [[WeylElement.zero(n) for _ in range(m)] for _ in range(m)])

    @classmethod
    def from_function(cls, n: int, m: int, f: Callable[[int, int], WeylElement]) -> "OpMatrix":
        """Build from a 1-based entry function."""
        return cls(n, [[f(i, j) for j in range(1, m + 1)] for i in range(1, m + 1)])

    @classmethod
    def from_scalar(cls, n: int, g: ScalarMatrix) -> "OpMatrix":
        return cls(n, [[WeylElement.const(n, v) for v in r] for r in g.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, OpMatrix) and self.n == other.n and self.rows == other.rows

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        _same_shape(self, other)
        return OpMatrix(self.n, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        _same_shape(self, other)
        return OpMatrix(self.n, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "OpMatrix":
        return OpMatrix(self.n, [[-a for a in r] for r in self.rows])

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def map(self, f: Callable[[WeylElement], WeylElement]) -> "OpMatrix":
        return OpMatrix(self.n, [[f(a) for a in r] for r in self.rows])

    def transpose(self) -> "OpMatrix":
        return OpMatrix(self.n, [list(c) for c in zip(*self.rows)])

    def submatrix(self, idx: Sequence[int]) -> "OpMatrix":
        """Principal submatrix on 0-based indices ``idx``."""
        return OpMatrix(self.n, [[self.rows[i][j] for j in idx] for i in idx])

    def block(self, r0: int, c0: int, size: int) -> "OpMatrix":
        return OpMatrix(self.n, [r[c0:c0 + size] for r in self.rows[r0:r0 + size]])

    def specialize_u(self, r) -> "OpMatrix":
        return self.map(lambda e: e.specialize_u(r))

    def to_text(self) -> str:
        cells = [[str(e) for e in r] for r in self.rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"OpMatrix(n={self.n}, dim={self.dim})"

    def to_json(self) -> dict:
        return {"n": self.n, "dim": self.dim, "entries": [[e.to_json() for e in r] for r in self.rows]}


def _same_shape(a: OpMatrix, b: OpMatrix) -> None:
    if a.dim != b.dim or a.n != b.n:
        raise MatrixError(f"shape mismatch: {a.dim}/n={a.n} vs {b.dim}/n={b.n}")


def matmul(A: Union[OpMatrix, ScalarMatrix], B: Union[OpMatrix, ScalarMatrix]) -> OpMatrix:
    """Product with noncommutative entry order ``A[i,k] * B[k,j]``.

    Either side may be a :class:`ScalarMatrix`; rational entries are central.
    """
    if isinstance(A, ScalarMatrix) and isinstance(B, ScalarMatrix):
        raise MatrixError("use ScalarMatrix @ ScalarMatrix for scalar products")
    if A.dim != B.dim:
        raise MatrixError(f"dimension mismatch {A.dim} vs {B.dim}")
    m = A.dim
    n = A.n if isinstance(A, OpMatrix) else B.n
    if isinstance(A, OpMatrix) and isinstance(B, OpMatrix) and A.n != B.n:
        raise MatrixError("mismatched ring sizes")
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = WeylElement.zero(n)
            for k in range(m):
                if isinstance(A, ScalarMatrix):
                    c = A[i, k]
                    if c:
                        acc = acc + B[k, j].scale(c)
                elif isinstance(B, ScalarMatrix):
                    c = B[k, j]
                    if c:
                        acc = acc + A[i, k].scale(c)
                else:
                    a, b = A[i, k], B[k, j]
                    if a and b:
                        acc = acc + weyl_mul(a, b)
            row.append(acc)
        rows.append(row)
    return OpMatrix(n, rows)


# --- index conventions ------------------------------------------------------

def neg(i: int, m: int) -> int:
    """The 1-based index written ``-i``: ``m + 1 - i``."""
    return m + 1 - i


def j_matrix(m: int) -> ScalarMatrix:
    if m < 1:
        raise MatrixError("J needs m >= 1")
    return ScalarMatrix([[int(j == m - 1 - i) for j in range(m)] for i in range(m)])


def check_hat(g: ScalarMatrix) -> ScalarMatrix:
    """``J g^T J``."""
    J = j_matrix(g.dim)
    return J @ g.T @ J


# --- M, D and Phi ---------------------------------------------------------

def build_M(n: int) -> OpMatrix:
    if n < 1:
        raise MatrixError("n >= 1")
    return OpMatrix.from_function(n, n, lambda i, j: signed_generator(n, i, j, "mult"))


def build_D(n: int) -> OpMatrix:
    if n < 1:
        raise MatrixError("n >= 1")
    return OpMatrix.from_function(n, n, lambda i, j: signed_generator(n, i, j, "deriv"))


def build_phi_tilde(n: int) -> OpMatrix:
    """The alternating 2n x 2n matrix: M upper-left, u on the anti-diagonal of the
    upper-right block, -u on the lower-left anti-diagonal, and the derivations in
    the lower-right block laid out anti-transposed (row 1 of that block reads
    ``0, d[n-1,n], ..., d[1,n]``).
    """
    if n < 1:
        raise MatrixError("n >= 1")
    m = 2 * n
    u = WeylElement.u(n)
    zero = WeylElement.zero(n)

    def entry(p: int, q: int) -> WeylElement:
        if p <= n and q <= n:
            return signed_generator(n, p, q, "mult")
        if p <= n < q:
            return u if q == neg(p, m) else zero
        if q <= n < p:
            return -u if p == neg(q, m) else zero
        r, c = p - n, q - n
        return signed_generator(n, n + 1 - c, n + 1 - r, "deriv")

    return OpMatrix.from_function(n, m, entry)


def build_phi(n: int) -> OpMatrix:
    """``Phi(u) = Phi~(u) J_2n`` (anti-alternating)."""
    return matmul(build_phi_tilde(n), j_matrix(2 * n))


def block_matrix(n: int, blocks) -> OpMatrix:
    """Assemble a 2x2 block matrix of n x n OpMatrix blocks."""
    (A, B), (C, D) = blocks
    rows = [ra + rb for ra, rb in zip(A.rows, B.rows)] + [rc + rd for rc, rd in zip(C.rows, D.rows)]
    return OpMatrix(n, rows)


def u_identity(n: int, sign: int = 1) -> OpMatrix:
    u = WeylElement.u(n)
    z = WeylElement.zero(n)
    return OpMatrix(n, [[(u if sign > 0 else -u) if i == j else z for j in range(n)] for i in range(n)])


def phi_block_form(n: int) -> OpMatrix:
    """``[[u 1, M J], [-J D, -u 1]]``, which equals ``Phi~(u) J`` for the displayed Phi~."""
    J = j_matrix(n)
    return block_matrix(n, ((u_identity(n), matmul(build_M(n), J)),
                            (-matmul(J, build_D(n)), u_identity(n, -1))))


def phi_transposed_block_form(n: int) -> OpMatrix:
    """``[[u 1, D J], [-J M, -u 1]]``: the block form with the roles of M and D exchanged."""
    J = j_matrix(n)
    return block_matrix(n, ((u_identity(n), matmul(build_D(n), J)),
                            (-matmul(J, build_M(n)), u_identity(n, -1))))


# --- embedding ----------------------------------------------------------------

def iota(g: ScalarMatrix) -> ScalarMatrix:
    """``g -> diag(g, J g^{-T} J)``."""
    n = g.dim
    if not g.is_invertible():
        raise MatrixError("g is singular")
    J = j_matrix(n)
    low = J @ g.inverse().T @ J
    m = 2 * n
    rows = [[Fraction(0)] * m for _ in range(m)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = g[i, j]
            rows[n + i][n + j] = low[i, j]
    return ScalarMatrix(rows)


def scalar_conj(g: ScalarMatrix, X: OpMatrix) -> OpMatrix:
    """``g X J g^T J``."""
    return matmul(matmul(g, X), check_hat(g))


def conjugate_by(h: ScalarMatrix, X: OpMatrix) -> OpMatrix:
    """``h X h^{-1}``."""
    return matmul(matmul(h, X), h.inverse())


# --- predicates ---------------------------------------------------------------

def is_alternating(X: OpMatrix) -> bool:
    m = X.dim
    return all(X[i, j] == -X[j, i] for i in range(m) for j in range(m)) and \
        all(X[i, i].is_zero() for i in range(m))


def is_anti_alternating(X: OpMatrix) -> bool:
    """``X[i,j] == -X[-j,-i]`` for all i, j (with ``-i = m+1-i``)."""
    m = X.dim
    return all(X[i, j] == -X[m - 1 - j, m - 1 - i] for i in range(m) for j in range(m))


# --- adjoint action -----------------------------------------------------------

def ad_entry(g: ScalarMatrix, P: WeylElement) -> WeylElement:
    """``pi(g) P pi(g)^{-1}`` for P affine in the generators (u-terms are central)."""
    out = WeylElement.zero(P.n)
    for mono, poly in P.terms.items():
        c = WeylElement.const(P.n, poly)
        if not mono:
            out = out + c
            continue
        if len(mono) != 1 or mono[0][1] + mono[0][2] != 1:
            raise MatrixError(f"entry {P} is not affine in the generators")
        (i, j), a, _ = mono[0]
        img = conjugate_multiplication(g, i, j) if a else conjugate_derivation(g, i, j)
        out = out + c * img
    return out


def ad_matrix(g: ScalarMatrix, X: OpMatrix) -> OpMatrix:
    if g.dim != X.n:
        raise MatrixError("g must be n x n for the ring PD(Alt_n)")
    if not g.is_invertible():
        raise MatrixError("g is singular")
    return X.map(lambda e: ad_entry(g, e))


ADJOINT_LAYOUTS = ("block", "display", "display-literal")


def adjoint_equivariance_check(g: ScalarMatrix, layout: str = "block") -> bool:
    """``Ad_pi(g)(X) == h X h^{-1}`` for one of three (matrix, h) pairings.

    ``block``: X = [[u, DJ], [-JM, -u]] with h = iota(g^T).
    ``display``: X = Phi~ J with h = iota(g^{-1}).
    ``display-literal``: X = Phi~ J with h = iota(g^T); false for generic g.
    """
    n = g.dim
    if layout == "block":
        X, h = phi_transposed_block_form(n), iota(g.T)
    elif layout == "display":
        X, h = build_phi(n), iota(g.inverse())
    elif layout == "display-literal":
        X, h = build_phi(n), iota(g.T)
    else:
        raise MatrixError(f"unknown layout {layout!r}; choose from {', '.join(ADJOINT_LAYOUTS)}")
    return ad_matrix(g, X) == conjugate_by(h, X)
