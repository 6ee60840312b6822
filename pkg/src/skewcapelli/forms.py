"""Exterior algebra on V = span{e_i : i in [+-k]} with Weyl-algebra coefficients.

Basis vectors are stored by position in the volume-form order
``1 < 2 < ... < k < -k < ... < -1``; position ``p`` (0-based) carries label
``p + 1`` for ``p < k`` and ``-(2k - p)`` otherwise. A basis monomial is a
bitmask over positions, always read in increasing position order, so the
volume form is the all-ones mask with sign +1.

Coefficients commute past basis vectors and multiply in the Weyl algebra in the
order written: ``(w X)(t Y) = (w ^ t) (X Y)``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from . import _kernels
from .opmatrix import OpMatrix, build_D, build_M, is_anti_alternating, j_matrix, matmul
from .pfaffian import GUARDS, PfaffianError, pf_commutative
from .scalars import UPoly, as_rational
from .weyl import (
    Generator,
    WeylElement,
    c_coeff,
    from_raw,
    mul_accumulate,
    normal_order_word,
    weyl_product,
)


class FormError(ValueError):
    pass


def label_to_pos(label: int, k: int) -> int:
    if 1 <= label <= k:
        return label - 1
    if -k <= label <= -1:
        return 2 * k + label
    raise FormError(f"basis label {label} outside [+-{k}]")


def pos_to_label(p: int, k: int) -> int:
    return p + 1 if p < k else -(2 * k - p)


def mask_labels(mask: int, k: int) -> List[int]:
    return [pos_to_label(p, k) for p in range(2 * k) if mask >> p & 1]


def sort_sign(positions: Sequence[int]) -> Tuple[int, int]:
    """(sign, mask) of ``e_{p1} ... e_{pr}`` reordered increasingly; sign 0 on repeats."""
    mask = 0
    for p in positions:
        if mask >> p & 1:
            return 0, 0
        mask |= 1 << p
    return _kernels.permutation_parity(list(positions)) if len(positions) > 1 else 1, mask


class ExtElement:
    """Element of ``/\\V (x) PD(Alt_n)``: a map basis-mask -> WeylElement."""

    __slots__ = ("k", "n", "terms")

    def __init__(self, k: int, n: int, terms: Mapping[int, WeylElement] = None):
        self.k = k
        self.n = n
        self.terms: Dict[int, WeylElement] = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def scalar(cls, k: int, n: int, c) -> "ExtElement":
        c = c if isinstance(c, WeylElement) else WeylElement.const(n, c)
        return cls(k, n, {0: c})

    @classmethod
    def one(cls, k: int, n: int) -> "ExtElement":
        return cls.scalar(k, n, 1)

    @classmethod
    def basis(cls, k: int, n: int, labels: Iterable[int], coeff=1) -> "ExtElement":
        """``e_{l1} e_{l2} ... (x) coeff`` for labels in [+-k], in the given order."""
        sign, mask = sort_sign([label_to_pos(lab, k) for lab in labels])
        c = coeff if isinstance(coeff, WeylElement) else WeylElement.const(n, coeff)
        if sign == 0:
            return cls(k, n)
        return cls(k, n, {mask: c.scale(sign)})

    def _same(self, other: "ExtElement") -> None:
        if (self.k, self.n) != (other.k, other.n):
            raise FormError("mismatched exterior algebras")

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtElement) and (self.k, self.n) == (other.k, other.n) \
            and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExtElement") -> "ExtElement":
        self._same(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return ExtElement(self.k, self.n, acc)

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.k, self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + (-other)

    def scale(self, c) -> "ExtElement":
        if isinstance(c, (WeylElement, UPoly)):
            w = c if isinstance(c, WeylElement) else WeylElement.const(self.n, c)
            return ExtElement(self.k, self.n, {m: w * v for m, v in self.terms.items()})
        c = as_rational(c)
        return ExtElement(self.k, self.n, {m: v.scale(c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ExtElement):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, r: int) -> "ExtElement":
        return wedge_power(self, r)

    def degree_parts(self) -> Dict[int, "ExtElement"]:
        parts: Dict[int, Dict[int, WeylElement]] = {}
        for m, c in self.terms.items():
            parts.setdefault(bin(m).count("1"), {})[m] = c
        return {d: ExtElement(self.k, self.n, t) for d, t in parts.items()}

    def coefficient(self, labels: Sequence[int]) -> WeylElement:
        """Coefficient of ``e_{labels}`` written in the given order."""
        sign, mask = sort_sign([label_to_pos(lab, self.k) for lab in labels])
        c = self.terms.get(mask)
        if sign == 0 or c is None:
            return WeylElement.zero(self.n)
        return c.scale(sign)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        lines = []
        for m in sorted(self.terms, key=lambda m: (bin(m).count("1"), [p for p in range(2 * self.k) if m >> p & 1])):
            lab = ",".join(str(v) for v in mask_labels(m, self.k))
            lines.append(f"e[{lab}] ⊗ ({self.terms[m]})")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"ExtElement(k={self.k}, n={self.n}, terms={len(self.terms)})"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "terms": [{"e": mask_labels(m, self.k), "coeff": self.terms[m].to_json()}
                      for m in sorted(self.terms, key=lambda m: (bin(m).count("1"), m))],
        }


def wedge(a: ExtElement, b: ExtElement) -> ExtElement:
    a._same(b)
    if not a.terms or not b.terms:
        return ExtElement(a.k, a.n)
    ak = list(a.terms)
    bk = list(b.terms)
    signs = _kernels.wedge_signs(np.array(ak, dtype=np.int64), np.array(bk, dtype=np.int64))
    raw: Dict[int, dict] = {}
    for i, j in zip(*np.nonzero(signs)):
        sm, tm = ak[i], bk[j]
        acc = raw.setdefault(sm | tm, {})
        mul_accumulate(acc, a.terms[sm], b.terms[tm], int(signs[i, j]))
    return ExtElement(a.k, a.n, {m: from_raw(a.n, acc) for m, acc in raw.items()})


def wedge_power(w: ExtElement, r: int) -> ExtElement:
    """``w^r`` by plain left-to-right products (coefficients do not commute)."""
    out = ExtElement.one(w.k, w.n)
    for _ in range(r):
        out = wedge(out, w)
    return out


def ext_commutator(a: ExtElement, b: ExtElement) -> ExtElement:
    return wedge(a, b) - wedge(b, a)


def volume_mask(k: int) -> int:
    return (1 << (2 * k)) - 1


def volume_coefficient(w: ExtElement) -> WeylElement:
    """Coefficient of ``e_1 ... e_k e_-k ... e_-1``."""
    if w.k == 0:
        return w.terms.get(0, WeylElement.zero(w.n))
    return w.terms.get(volume_mask(w.k), WeylElement.zero(w.n))


# --- 2-forms -----------------------------------------------------------------

def two_form_of_matrix(X: OpMatrix) -> ExtElement:
    """``sum_{i,j in [+-k]} e_i e_{-j} (x) X[i,j]`` for anti-alternating X."""
    m = X.dim
    if m % 2:
        raise FormError(f"odd dimension {m}")
    k = m // 2
    raw: Dict[int, dict] = {}
    one = WeylElement.one(X.n)
    for p in range(m):
        for q in range(m):
            c = X[p, q]
            r = m - 1 - q
            if c.is_zero() or p == r:
                continue
            sign = 1 if p < r else -1
            mul_accumulate(raw.setdefault((1 << p) | (1 << r), {}), c, one, sign)
    return ExtElement(k, X.n, {mk: from_raw(X.n, acc) for mk, acc in raw.items()})


def tau(n: int) -> ExtElement:
    """``sum_i e_i e_{-i}`` (single index sum)."""
    out = ExtElement(n, n)
    for i in range(1, n + 1):
        out = out + ExtElement.basis(n, n, (i, -i))
    return out


def theta_minus(n: int) -> ExtElement:
    out = ExtElement(n, n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out = out + ExtElement.basis(n, n, (i, j), WeylElement.x(n, i, j))
    return out


def theta_plus(n: int) -> ExtElement:
    out = ExtElement(n, n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out = out + ExtElement.basis(n, n, (-j, -i), WeylElement.d(n, i, j))
    return out


def omega(n: int) -> ExtElement:
    """``Theta_- + 2u tau + Theta_+``."""
    return theta_minus(n) + tau(n).scale(WeylElement.u(n).scale(2)) + theta_plus(n)


# --- Pfaffian through forms -------------------------------------------------

def pf_via_forms(X: OpMatrix, check: bool = True, max_dim: int = None, **_ignored) -> WeylElement:
    """``vol-coefficient(Xi_X^k) / (2^k k!)`` for anti-alternating X."""
    if X.dim % 2:
        raise PfaffianError(f"odd dimension {X.dim}")
    limit = GUARDS["forms"] if max_dim is None else max_dim
    if X.dim > limit:
        raise PfaffianError(f"dimension {X.dim} exceeds the forms guard {limit}")
    if check and not is_anti_alternating(X):
        raise PfaffianError("matrix is not anti-alternating")
    k = X.dim // 2
    if k == 0:
        return WeylElement.one(X.n)
    xi = two_form_of_matrix(X)
    return volume_coefficient(wedge_power(xi, k)).scale(Fraction(1, 2 ** k * math.factorial(k)))


def pf_via_forms_alternating(A: OpMatrix, **kw) -> WeylElement:
    if A.dim == 0:
        return WeylElement.one(A.n)
    return pf_via_forms(matmul(A, j_matrix(A.dim)), **kw)


# --- word-tracked forms and normal ordering ---------------------------------

Word = Tuple[Generator, ...]


class WordForm:
    """Forms whose coefficients are kept as unevaluated generator words.

    Needed for the ``:.:`` map, which is defined on words rather than on
    already-reordered operators.
    """

    __slots__ = ("k", "n", "terms")

    def __init__(self, k: int, n: int, terms: Mapping[Tuple[int, Word], Fraction] = None):
        self.k, self.n = k, n
        self.terms: Dict[Tuple[int, Word], Fraction] = {t: c for t, c in (terms or {}).items() if c != 0}

    @classmethod
    def one(cls, k: int, n: int) -> "WordForm":
        return cls(k, n, {(0, ()): Fraction(1)})

    @classmethod
    def from_letters(cls, k: int, n: int, items: Iterable[Tuple[Sequence[int], Word, Fraction]]) -> "WordForm":
        acc: Dict[Tuple[int, Word], Fraction] = {}
        for labels, word, c in items:
            sign, mask = sort_sign([label_to_pos(lab, k) for lab in labels])
            if sign == 0:
                continue
            word, wsign = _canonical_word(word)
            if wsign == 0:
                continue
            key = (mask, word)
            acc[key] = acc.get(key, 0) + c * sign * wsign
        return cls(k, n, acc)

    def __add__(self, other: "WordForm") -> "WordForm":
        acc = dict(self.terms)
        for t, c in other.terms.items():
            acc[t] = acc.get(t, 0) + c
        return WordForm(self.k, self.n, acc)

    def scale(self, c) -> "WordForm":
        c = as_rational(c)
        return WordForm(self.k, self.n, {t: c * v for t, v in self.terms.items()})

    def wedge(self, other: "WordForm") -> "WordForm":
        acc: Dict[Tuple[int, Word], Fraction] = {}
        for (m1, w1), c1 in self.terms.items():
            for (m2, w2), c2 in other.terms.items():
                if m1 & m2:
                    continue
                sign = int(_kernels.wedge_signs(np.array([m1]), np.array([m2]), accelerated=False)[0, 0])
                key = (m1 | m2, w1 + w2)
                acc[key] = acc.get(key, 0) + sign * c1 * c2
        return WordForm(self.k, self.n, acc)

    def power(self, r: int) -> "WordForm":
        out = WordForm.one(self.k, self.n)
        for _ in range(r):
            out = out.wedge(self)
        return out

    def evaluate(self) -> ExtElement:
        """Multiply each word out in the Weyl algebra."""
        raw: Dict[int, dict] = {}
        one = WeylElement.one(self.n)
        for (m, w), c in self.terms.items():
            mul_accumulate(raw.setdefault(m, {}), _word_product(self.n, w), one, c)
        return ExtElement(self.k, self.n, {m: from_raw(self.n, acc) for m, acc in raw.items()})


def _canonical_word(word: Word) -> Tuple[Word, int]:
    sign = 1
    out = []
    for kind, i, j in word:
        if kind != "u":
            if i == j:
                return (), 0
            if i > j:
                i, j, sign = j, i, -sign
        out.append((kind, i, j))
    return tuple(out), sign


def _word_product(n: int, word: Word) -> WeylElement:
    factors = []
    for kind, i, j in word:
        if kind == "x":
            factors.append(WeylElement.x(n, i, j))
        elif kind == "d":
            factors.append(WeylElement.d(n, i, j))
        else:
            factors.append(WeylElement.u(n))
    return weyl_product(factors, n)


def normal_order_form(w: WordForm) -> ExtElement:
    """Coefficient-wise ``:.:`` on a word-tracked form."""
    raw: Dict[int, dict] = {}
    one = WeylElement.one(w.n)
    for (m, word), c in w.terms.items():
        mul_accumulate(raw.setdefault(m, {}), normal_order_word(w.n, word), one, c)
    return ExtElement(w.k, w.n, {mk: from_raw(w.n, acc) for mk, acc in raw.items()})


def theta_minus_words(n: int) -> WordForm:
    return WordForm.from_letters(n, n, (((i, j), (("x", i, j),), Fraction(1))
                                        for i in range(1, n + 1) for j in range(1, n + 1) if i != j))


def theta_plus_words(n: int) -> WordForm:
    return WordForm.from_letters(n, n, (((-j, -i), (("d", i, j),), Fraction(1))
                                        for i in range(1, n + 1) for j in range(1, n + 1) if i != j))


# --- checks of the exterior-algebra identities -------------------------------

def two_tau_squared(n: int) -> ExtElement:
    t = tau(n)
    return wedge(t, t).scale(2)


def cr_check(n: int) -> bool:
    """``[tau, Theta_-] = [tau, Theta_+] = 0`` and ``[Theta_+, Theta_-] = 2 tau^2``."""
    t, tm, tp = tau(n), theta_minus(n), theta_plus(n)
    return (ext_commutator(t, tm).is_zero()
            and ext_commutator(t, tp).is_zero()
            and ext_commutator(tp, tm) == two_tau_squared(n))


def theta_power_identity_check(n: int, r: int) -> bool:
    """``Theta_-^r = 2^r r! sum_{|I|=2r} e_I Pf(x_I)`` and the mirrored identity for Theta_+."""
    if 2 * r > n:
        raise FormError("need 2r <= n")
    M, D = build_M(n), build_D(n)
    lhs_minus = wedge_power(theta_minus(n), r)
    lhs_plus = wedge_power(theta_plus(n), r)
    rhs_minus = ExtElement(n, n)
    rhs_plus = ExtElement(n, n)
    for I in combinations(range(1, n + 1), 2 * r):
        idx = [i - 1 for i in I]
        rhs_minus = rhs_minus + ExtElement.basis(n, n, I, pf_commutative(M.submatrix(idx)))
        rhs_plus = rhs_plus + ExtElement.basis(n, n, [-i for i in reversed(I)], pf_commutative(D.submatrix(idx)))
    factor = 2 ** r * math.factorial(r)
    return lhs_minus == rhs_minus.scale(factor) and lhs_plus == rhs_plus.scale(factor)


def normal_ordered_binomial(n: int, m: int) -> ExtElement:
    """``:(Theta_- + Theta_+)^m:`` through the word-level ordering map."""
    return normal_order_form((theta_minus_words(n) + theta_plus_words(n)).power(m))


def expansion_check(n: int, m: int) -> bool:
    """``(Theta_- + Theta_+)^m = sum_k c_k(m) (2 tau^2)^k :(Theta_- + Theta_+)^(m-2k):``."""
    lhs = wedge_power(theta_minus(n) + theta_plus(n), m)
    tt = two_tau_squared(n)
    rhs = ExtElement(n, n)
    for k in range(m // 2 + 1):
        rhs = rhs + wedge(wedge_power(tt, k), normal_ordered_binomial(n, m - 2 * k)).scale(c_coeff(k, m))
    return lhs == rhs


def falling(z: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= z - t
    return out


def theta_commutation_check(n: int, a: int, b: int, bound: int = 8) -> bool:
    """``Theta_+^a Theta_-^b = sum_k (a)_k (b)_k / k! (2 tau^2)^k Theta_-^(b-k) Theta_+^(a-k)``."""
    if a > bound or b > bound:
        raise FormError(f"a, b must be <= {bound}")
    tm, tp = theta_minus(n), theta_plus(n)
    lhs = wedge(wedge_power(tp, a), wedge_power(tm, b))
    tt = two_tau_squared(n)
    rhs = ExtElement(n, n)
    for k in range(min(a, b) + 1):
        coeff = Fraction(falling(a, k) * falling(b, k), math.factorial(k))
        term = wedge(wedge(wedge_power(tt, k), wedge_power(tm, b - k)), wedge_power(tp, a - k))
        rhs = rhs + term.scale(coeff)
    return lhs == rhs


def shuffle_sign(I: Iterable[int], n: int, mirrored: bool = False) -> int:
    """Parity of arranging ``[n] \\ I`` then ``I`` (or the mirror on ``-[n]``).

    The mirrored arrangement is ``-([n] \\ I)`` then ``-I``, each in the order
    ``-n < ... < -1``, measured against that same order on ``-[n]``.
    """
    I = sorted(set(I))
    if any(not 1 <= i <= n for i in I):
        raise FormError("I must be a subset of [n]")
    rest = [i for i in range(1, n + 1) if i not in I]
    if not mirrored:
        seq = rest + I
    else:
        # rank of -i in the order -n < ... < -1 is n - i
        seq = [n - i for i in sorted(rest, reverse=True)] + [n - i for i in sorted(I, reverse=True)]
    return _kernels.permutation_parity(seq)


def volume_reassembly_check(I: Iterable[int], n: int) -> bool:
    """``e_{[n]\\I} e_{-([n]\\I)} e_I e_{-I} == e_[n] e_-[n]``."""
    I = sorted(set(I))
    rest = [i for i in range(1, n + 1) if i not in I]
    parts = [ExtElement.basis(n, n, rest), ExtElement.basis(n, n, [-i for i in reversed(rest)]),
             ExtElement.basis(n, n, I), ExtElement.basis(n, n, [-i for i in reversed(I)])]
    acc = ExtElement.one(n, n)
    for p in parts:
        acc = wedge(acc, p)
    return acc == ExtElement.basis(n, n, list(range(1, n + 1)) + [-i for i in range(n, 0, -1)])
