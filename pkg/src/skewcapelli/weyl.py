"""The Weyl algebra PD(Alt_n) of polynomial-coefficient differential operators
on alternating n x n matrices.

Independent coordinates are ``x[i,j]`` for ``1 <= i < j <= n``; ``d[i,j]`` is
the derivation in that coordinate. Accessors implement ``x[j,i] = -x[i,j]`` and
the zero diagonal, so only strictly upper-triangular names are ever stored.

A monomial is a tuple of ``((i, j), a, b)`` triples sorted by ``(i, j)`` with
``a + b >= 1``; it stands for the normal-ordered word ``prod x^a * prod d^b``.
Elements are finite linear combinations of monomials with coefficients in
Q[u]; internally the u-degree is folded into the dictionary key.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as _iproduct
from math import comb, factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .scalars import ScalarMatrix, UPoly, as_rational, rational_str

VarIndex = Tuple[int, int]
Monomial = Tuple[Tuple[VarIndex, int, int], ...]
Key = Tuple[Monomial, int]

ONE_MONO: Monomial = ()


class WeylError(ValueError):
    """Bad index, mismatched ring size, or an unsupported operation."""


def _check_index(n: int, i: int, j: int) -> None:
    if not (1 <= i <= n and 1 <= j <= n):
        raise WeylError(f"index ({i},{j}) outside [1,{n}]")


def variables(n: int) -> List[VarIndex]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def make_monomial(xexp: Mapping[VarIndex, int] = None, dexp: Mapping[VarIndex, int] = None) -> Monomial:
    xexp, dexp = dict(xexp or {}), dict(dexp or {})
    out = []
    for v in sorted(set(xexp) | set(dexp)):
        if not v[0] < v[1]:
            raise WeylError(f"monomial variable {v} is not strictly upper-triangular")
        a, b = xexp.get(v, 0), dexp.get(v, 0)
        if a < 0 or b < 0:
            raise WeylError("negative exponent")
        if a or b:
            out.append((v, a, b))
    return tuple(out)


def split_monomial(m: Monomial) -> Tuple[Dict[VarIndex, int], Dict[VarIndex, int]]:
    return {v: a for v, a, _ in m if a}, {v: b for v, _, b in m if b}


def mono_degrees(m: Monomial) -> Tuple[int, int]:
    """(x-degree, d-degree) of a monomial."""
    return sum(a for _, a, _ in m), sum(b for _, _, b in m)


@lru_cache(maxsize=1 << 18)
def mono_mul(m1: Monomial, m2: Monomial) -> Tuple[Tuple[Monomial, int], ...]:
    """Normal-ordered expansion of ``m1 * m2`` as ``((monomial, int coeff), ...)``.

    Per variable, ``d^b x^a = sum_k k! C(b,k) C(a,k) x^(a-k) d^(b-k)``; distinct
    variables commute.
    """
    factors: List[List[Tuple[Tuple[VarIndex, int, int], int]]] = []
    i = j = 0
    while i < len(m1) or j < len(m2):
        if j == len(m2) or (i < len(m1) and m1[i][0] < m2[j][0]):
            factors.append([(m1[i], 1)])
            i += 1
        elif i == len(m1) or m2[j][0] < m1[i][0]:
            factors.append([(m2[j], 1)])
            j += 1
        else:
            v, a1, b1 = m1[i]
            _, a2, b2 = m2[j]
            opts = []
            for k in range(min(b1, a2) + 1):
                c = factorial(k) * comb(b1, k) * comb(a2, k)
                opts.append(((v, a1 + a2 - k, b1 + b2 - k), c))
            factors.append(opts)
            i += 1
            j += 1
    if all(len(f) == 1 for f in factors):
        return ((tuple(f[0][0] for f in factors), 1),)
    out: Dict[Monomial, int] = {}
    for combo in _iproduct(*factors):
        c = 1
        mono = []
        for t, k in combo:
            c *= k
            if t[1] or t[2]:
                mono.append(t)
        key = tuple(mono)
        out[key] = out.get(key, 0) + c
    return tuple(out.items())


def mono_str(m: Monomial) -> str:
    parts = []
    for (i, j), a, _ in m:
        if a:
            parts.append(f"x[{i},{j}]" + (f"^{a}" if a > 1 else ""))
    for (i, j), _, b in m:
        if b:
            parts.append(f"d[{i},{j}]" + (f"^{b}" if b > 1 else ""))
    return " ".join(parts)


def mono_sort_key(m: Monomial):
    """Graded lexicographic order on (xexp, dexp), highest degree first."""
    dx, dd = mono_degrees(m)
    return (-(dx + dd), -dx, tuple((v, -a) for v, a, _ in m if a), tuple((v, -b) for v, _, b in m if b))


def _term_str(poly: UPoly, mono: Monomial, first: bool) -> str:
    ms = mono_str(mono)
    coeffs = poly.coeffs
    if not ms:
        body = poly.to_str()
        if first:
            return body
        return f"- {body[1:]}" if body.startswith("-") else f"+ {body}"
    if len(coeffs) == 1:
        (e, c), = coeffs.items()
        mag = abs(c)
        head = []
        if mag != 1:
            head.append(rational_str(mag))
        if e:
            head.append("u" if e == 1 else f"u^{e}")
        body = " ".join(head + [ms])
        if first:
            return f"-{body}" if c < 0 else body
        return f"- {body}" if c < 0 else f"+ {body}"
    body = f"({poly.to_str()}) {ms}"
    return body if first else f"+ {body}"


Coefficient = Union[int, Fraction, UPoly]


class WeylElement:
    """Element of PD(Alt_n) (x) Q[u] in canonical normal-ordered form."""

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, terms: Mapping[Key, Fraction] = None, *, _trusted: bool = False):
        if n < 1:
            raise WeylError("n must be positive")
        self.n = n
        if _trusted:
            self._t = terms
        else:
            self._t = {k: c for k, c in (terms or {}).items() if c != 0}
        self._hash = None

    # --- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "WeylElement":
        return cls(n, {}, _trusted=True)

    @classmethod
    def const(cls, n: int, c: Coefficient) -> "WeylElement":
        if isinstance(c, UPoly):
            return cls(n, {(ONE_MONO, e): v for e, v in c.coeffs.items()}, _trusted=True)
        return cls(n, {(ONE_MONO, 0): as_rational(c)})

    @classmethod
    def one(cls, n: int) -> "WeylElement":
        return cls.const(n, 1)

    @classmethod
    def u(cls, n: int, power: int = 1) -> "WeylElement":
        return cls(n, {(ONE_MONO, power): Fraction(1)}, _trusted=True)

    @classmethod
    def from_monomial(cls, n: int, mono: Monomial, coeff: Coefficient = 1) -> "WeylElement":
        for (i, j), _, _ in mono:
            _check_index(n, i, j)
        return cls.const(n, coeff)._mul_mono_right(mono)

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Monomial, Coefficient]) -> "WeylElement":
        out = cls.zero(n)
        for mono, c in terms.items():
            out = out + cls.from_monomial(n, mono, c)
        return out

    @classmethod
    def x(cls, n: int, i: int, j: int) -> "WeylElement":
        return signed_generator(n, i, j, "mult")

    @classmethod
    def d(cls, n: int, i: int, j: int) -> "WeylElement":
        return signed_generator(n, i, j, "deriv")

    def _mul_mono_right(self, mono: Monomial) -> "WeylElement":
        # only valid for constants: coefficient times monomial
        return WeylElement(self.n, {(mono, e): c for (m, e), c in self._t.items()}, _trusted=True)

    # --- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, UPoly]:
        acc: Dict[Monomial, Dict[int, Fraction]] = {}
        for (m, e), c in self._t.items():
            acc.setdefault(m, {})[e] = c
        return {m: UPoly(cs) for m, cs in acc.items()}

    def raw_terms(self) -> Dict[Key, Fraction]:
        return dict(self._t)

    def items(self) -> Iterator[Tuple[Key, Fraction]]:
        return iter(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Monomial) -> UPoly:
        return UPoly({e: c for (m, e), c in self._t.items() if m == mono})

    def u_coefficient(self, power: int) -> "WeylElement":
        """The coefficient of ``u^power`` as a u-free element."""
        return WeylElement(self.n, {(m, 0): c for (m, e), c in self._t.items() if e == power}, _trusted=True)

    def u_degree(self) -> int:
        return max((e for (_, e) in self._t), default=-1)

    def is_u_free(self) -> bool:
        return all(e == 0 for (_, e) in self._t)

    def order(self) -> int:
        """Maximum d-degree; ``-1`` for zero."""
        return max((mono_degrees(m)[1] for (m, _) in self._t), default=-1)

    def support(self) -> Tuple[frozenset, frozenset]:
        """(variables occurring as x, variables occurring as d)."""
        xs, ds = set(), set()
        for (m, _) in self._t:
            for v, a, b in m:
                if a:
                    xs.add(v)
                if b:
                    ds.add(v)
        return frozenset(xs), frozenset(ds)

    def specialize_u(self, r) -> "WeylElement":
        r = as_rational(r)
        acc: Dict[Key, Fraction] = {}
        for (m, e), c in self._t.items():
            k = (m, 0)
            acc[k] = acc.get(k, 0) + c * r ** e
        return WeylElement(self.n, acc)

    # --- arithmetic ---------------------------------------------------
    def _same(self, other: "WeylElement") -> None:
        if other.n != self.n:
            raise WeylError(f"mismatched ring sizes n={self.n} and n={other.n}")

    def _lift(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction, UPoly)):
            return WeylElement.const(self.n, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, UPoly)):
            other = WeylElement.const(self.n, other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.n == other.n and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._t.items())))
        return self._hash

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._t)
        for k, c in other._t.items():
            s = acc.get(k, 0) + c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return WeylElement(self.n, acc, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement(self.n, {k: -c for k, c in self._t.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = as_rational(c)
        if c == 0:
            return WeylElement.zero(self.n)
        return WeylElement(self.n, {k: c * v for k, v in self._t.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return weyl_mul(other, self)

    def __pow__(self, k: int) -> "WeylElement":
        out = WeylElement.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    # --- rendering ----------------------------------------------------
    def sorted_terms(self) -> List[Tuple[Monomial, UPoly]]:
        return sorted(self.terms.items(), key=lambda t: mono_sort_key(t[0]))

    def __str__(self) -> str:
        ts = self.sorted_terms()
        if not ts:
            return "0"
        return " ".join(_term_str(p, m, i == 0) for i, (m, p) in enumerate(ts))

    def __repr__(self) -> str:
        return f"WeylElement(n={self.n}, {self})"

    def to_json(self) -> dict:
        terms = []
        for m, p in self.sorted_terms():
            xe, de = split_monomial(m)
            terms.append({
                "x": {f"{i},{j}": a for (i, j), a in sorted(xe.items())},
                "d": {f"{i},{j}": b for (i, j), b in sorted(de.items())},
                "coeff": p.to_json(),
            })
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "WeylElement":
        def _vk(s: str) -> VarIndex:
            i, j = s.split(",")
            return int(i), int(j)

        n = int(data["n"])
        out = cls.zero(n)
        for t in data["terms"]:
            mono = make_monomial({_vk(k): int(v) for k, v in t.get("x", {}).items()},
                                 {_vk(k): int(v) for k, v in t.get("d", {}).items()})
            out = out + cls.from_monomial(n, mono, UPoly.from_json(t["coeff"]))
        return out


def signed_generator(n: int, i: int, j: int, kind: str) -> WeylElement:
    """``x[i,j]`` (kind ``mult``) or ``d[i,j]`` (kind ``deriv``) with alternation applied."""
    _check_index(n, i, j)
    if kind not in ("mult", "deriv"):
        raise WeylError(f"unknown generator kind {kind!r}")
    if i == j:
        return WeylElement.zero(n)
    v = (min(i, j), max(i, j))
    mono = ((v, 1, 0),) if kind == "mult" else ((v, 0, 1),)
    return WeylElement(n, {(mono, 0): Fraction(1 if i < j else -1)}, _trusted=True)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    if a.n != b.n:
        raise WeylError(f"mismatched ring sizes n={a.n} and n={b.n}")
    acc: Dict[Key, Fraction] = {}
    get = acc.get
    for (m1, e1), c1 in a._t.items():
        for (m2, e2), c2 in b._t.items():
            c12 = c1 * c2
            e = e1 + e2
            for m, k in mono_mul(m1, m2):
                key = (m, e)
                acc[key] = get(key, 0) + c12 * k
    return WeylElement(a.n, {k: c for k, c in acc.items() if c != 0}, _trusted=True)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return weyl_mul(a, b) - weyl_mul(b, a)


def weyl_product(factors: Sequence[WeylElement], n: int = None) -> WeylElement:
    """Ordered product, left to right."""
    if not factors:
        if n is None:
            raise WeylError("empty product needs n")
        return WeylElement.one(n)
    out = factors[0]
    for f in factors[1:]:
        out = weyl_mul(out, f)
    return out


# --- normal ordering --------------------------------------------------------

Generator = Tuple[str, int, int]


def normal_order_word(n: int, word: Iterable[Generator]) -> WeylElement:
    """The ``:.:`` map on a word of signed generators.

    Multiplication factors are moved left of derivations and all commutator
    corrections are discarded. Letters are ``("x", i, j)``, ``("d", i, j)`` or
    ``("u", 0, 0)``.
    """
    sign = 1
    xexp: Dict[VarIndex, int] = {}
    dexp: Dict[VarIndex, int] = {}
    upow = 0
    for kind, i, j in word:
        if kind == "u":
            upow += 1
            continue
        _check_index(n, i, j)
        if i == j:
            return WeylElement.zero(n)
        if i > j:
            sign, i, j = -sign, j, i
        if kind == "x":
            xexp[(i, j)] = xexp.get((i, j), 0) + 1
        elif kind == "d":
            dexp[(i, j)] = dexp.get((i, j), 0) + 1
        else:
            raise WeylError(f"unknown letter {kind!r}")
    return WeylElement(n, {(make_monomial(xexp, dexp), upow): Fraction(sign)}, _trusted=True)


# --- commutative polynomials ------------------------------------------------

class SymbolPoly:
    """Commutative polynomial in ``x[i,j]``, ``xi[i,j]`` and ``u``.

    Keys reuse the monomial layout ``((i, j), x-exp, xi-exp)``.
    """

    __slots__ = ("n", "_t")

    def __init__(self, n: int, terms: Mapping[Key, Fraction] = None):
        self.n = n
        self._t: Dict[Key, Fraction] = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, n: int, c) -> "SymbolPoly":
        if isinstance(c, UPoly):
            return cls(n, {(ONE_MONO, e): v for e, v in c.coeffs.items()})
        return cls(n, {(ONE_MONO, 0): as_rational(c)})

    @classmethod
    def zero(cls, n: int) -> "SymbolPoly":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "SymbolPoly":
        return cls.const(n, 1)

    @classmethod
    def var(cls, n: int, i: int, j: int, kind: str = "x") -> "SymbolPoly":
        """Signed coordinate ``x[i,j]`` or symbol ``xi[i,j]``."""
        _check_index(n, i, j)
        if i == j:
            return cls(n)
        v = (min(i, j), max(i, j))
        mono = ((v, 1, 0),) if kind == "x" else ((v, 0, 1),)
        return cls(n, {(mono, 0): Fraction(1 if i < j else -1)})

    @classmethod
    def u(cls, n: int, power: int = 1) -> "SymbolPoly":
        return cls(n, {(ONE_MONO, power): Fraction(1)})

    def raw_terms(self) -> Dict[Key, Fraction]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def _lift(self, other):
        if isinstance(other, type(self)) or isinstance(other, SymbolPoly):
            return other
        if isinstance(other, (int, Fraction, UPoly)):
            return type(self).const(self.n, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._t)
        for k, c in other._t.items():
            acc[k] = acc.get(k, 0) + c
        return type(self)(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.n, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return type(self)(self.n, {k: c * v for k, v in self._t.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc: Dict[Key, Fraction] = {}
        for (m1, e1), c1 in self._t.items():
            for (m2, e2), c2 in other._t.items():
                key = (_comm_mono_mul(m1, m2), e1 + e2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return type(self)(self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = type(self).one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def specialize_u(self, r):
        r = as_rational(r)
        acc: Dict[Key, Fraction] = {}
        for (m, e), c in self._t.items():
            acc[(m, 0)] = acc.get((m, 0), 0) + c * r ** e
        return type(self)(self.n, acc)

    def __str__(self) -> str:
        if not self._t:
            return "0"
        grouped: Dict[Monomial, Dict[int, Fraction]] = {}
        for (m, e), c in self._t.items():
            grouped.setdefault(m, {})[e] = c
        items = sorted(((m, UPoly(cs)) for m, cs in grouped.items()), key=lambda t: mono_sort_key(t[0]))
        text = " ".join(_term_str(p, m, i == 0) for i, (m, p) in enumerate(items))
        return text.replace("d[", "xi[")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, {self})"


@lru_cache(maxsize=1 << 16)
def _comm_mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    acc: Dict[VarIndex, List[int]] = {}
    for v, a, b in m1 + m2:
        e = acc.setdefault(v, [0, 0])
        e[0] += a
        e[1] += b
    return tuple((v, a, b) for v, (a, b) in sorted(acc.items()))


class AltPoly(SymbolPoly):
    """Commutative polynomial on Alt_n in the coordinates ``x[i,j]`` (coefficients in Q[u])."""

    __slots__ = ()

    @classmethod
    def x(cls, n: int, i: int, j: int) -> "AltPoly":
        return cls.var(n, i, j, "x")

    @classmethod
    def monomial(cls, n: int, xexp: Mapping[VarIndex, int], coeff=1) -> "AltPoly":
        return cls(n, {(make_monomial(xexp), 0): as_rational(coeff)})

    def subs(self, images: Mapping[VarIndex, "AltPoly"]) -> "AltPoly":
        """Substitute each coordinate by a polynomial."""
        out = AltPoly(self.n)
        cache: Dict[Tuple[VarIndex, int], AltPoly] = {}
        for (m, e), c in self._t.items():
            term = AltPoly(self.n, {(ONE_MONO, e): c})
            for v, a, _ in m:
                key = (v, a)
                if key not in cache:
                    cache[key] = images[v] ** a
                term = term * cache[key]
            out = out + term
        return out

    def __str__(self) -> str:
        return SymbolPoly.__str__(self)


def monomials_up_to(n: int, degree: int) -> List[AltPoly]:
    """All monic monomials on Alt_n of total degree <= ``degree``."""
    vs = variables(n)
    out: List[AltPoly] = []

    def rec(idx: int, left: int, exps: Dict[VarIndex, int]):
        if idx == len(vs):
            out.append(AltPoly.monomial(n, exps))
            return
        for a in range(left + 1):
            if a:
                exps[vs[idx]] = a
            rec(idx + 1, left - a, exps)
            exps.pop(vs[idx], None)

    rec(0, degree, {})
    return out


# --- action on polynomials --------------------------------------------------

def apply(P: WeylElement, f: AltPoly) -> AltPoly:
    """Let ``P`` act on ``f``: derivations differentiate, right factors act first."""
    if P.n != f.n:
        raise WeylError("mismatched ring sizes")
    acc: Dict[Key, Fraction] = {}
    for (pm, pe), pc in P._t.items():
        for (fm, fe), fc in f._t.items():
            res = _apply_mono(pm, fm)
            if res is None:
                continue
            m, k = res
            key = (m, pe + fe)
            acc[key] = acc.get(key, 0) + pc * fc * k
    return AltPoly(P.n, acc)


@lru_cache(maxsize=1 << 16)
def _apply_mono(pm: Monomial, fm: Monomial):
    fexp = {v: a for v, a, _ in fm}
    coeff = 1
    for v, a, b in pm:
        if b:
            have = fexp.get(v, 0)
            if have < b:
                return None
            coeff *= factorial(have) // factorial(have - b)
            fexp[v] = have - b
        if a:
            fexp[v] = fexp.get(v, 0) + a
    return make_monomial({v: e for v, e in fexp.items() if e}), coeff


def _coordinate_matrix(n: int) -> List[List[AltPoly]]:
    return [[AltPoly.x(n, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def _linear_substitution(n: int, h: ScalarMatrix) -> Dict[VarIndex, AltPoly]:
    """Entries of ``h X h^T`` for the generic alternating ``X``, by matrix product."""
    X = _coordinate_matrix(n)
    zero = AltPoly(n)
    hX = [[sum((X[k][j] * h[i, k] for k in range(n) if h[i, k]), zero) for j in range(n)] for i in range(n)]
    return {(i, j): sum((hX[i - 1][k] * h[j - 1, k] for k in range(n) if h[j - 1, k]), zero)
            for (i, j) in variables(n)}


def group_action(g: ScalarMatrix, f: AltPoly) -> AltPoly:
    """``pi(g) f (x) = f(g^{-1} x g^{-T})``."""
    if g.dim != f.n:
        raise WeylError("group element size does not match polynomial ring")
    h = g.inverse()
    return f.subs(_linear_substitution(f.n, h))


def conjugate_derivation(g: ScalarMatrix, i: int, j: int) -> WeylElement:
    """Closed form of ``pi(g) d[i,j] pi(g)^{-1}``: sum_{a<b} det(g[{a,b},{i,j}]) d[a,b]."""
    n = g.dim
    if not i < j:
        raise WeylError("need i < j")
    if not g.is_invertible():
        raise WeylError("g is singular")
    out = WeylElement.zero(n)
    for a, b in variables(n):
        c = g.minor2((a - 1, b - 1), (i - 1, j - 1))
        if c:
            out = out + WeylElement.d(n, a, b).scale(c)
    return out


def conjugate_multiplication(g: ScalarMatrix, i: int, j: int) -> WeylElement:
    """Closed form of ``pi(g) x[i,j] pi(g)^{-1}``: sum_{a<b} det(g^{-1}[{i,j},{a,b}]) x[a,b]."""
    n = g.dim
    if not i < j:
        raise WeylError("need i < j")
    h = g.inverse()
    out = WeylElement.zero(n)
    for a, b in variables(n):
        c = h.minor2((i - 1, j - 1), (a - 1, b - 1))
        if c:
            out = out + WeylElement.x(n, a, b).scale(c)
    return out


def dpi(n: int, i: int, j: int) -> WeylElement:
    """Infinitesimal action of the matrix unit: ``-sum_k x[k,j] d[k,i]``."""
    _check_index(n, i, j)
    out = WeylElement.zero(n)
    for k in range(1, n + 1):
        out = out - weyl_mul(signed_generator(n, k, j, "mult"), signed_generator(n, k, i, "deriv"))
    return out


# --- symbols ----------------------------------------------------------------

def total_symbol(P: WeylElement) -> SymbolPoly:
    return SymbolPoly(P.n, dict(P._t))


def principal_symbol(P: WeylElement) -> SymbolPoly:
    top = P.order()
    return SymbolPoly(P.n, {(m, e): c for (m, e), c in P._t.items() if mono_degrees(m)[1] == top})


# --- general binomial formula with central commutator ---------------------

def c_coeff(k: int, m: int) -> Fraction:
    """``m! / (2^k k! (m-2k)!)``, and 0 outside ``0 <= k <= m//2``."""
    if k < 0 or 2 * k > m:
        return Fraction(0)
    return Fraction(factorial(m), 2 ** k * factorial(k) * factorial(m - 2 * k))


def central_commutator_forms(m: int) -> Dict[str, bool]:
    """Check ``(A+B)^m`` against both readings of the central-commutator expansion.

    ``A = x``, ``B = d`` in one variable, so ``[A, B] = -1``. The ``"printed"``
    reading raises the commutator to ``2k``, the ``"half"`` reading to ``k``.
    """
    n = 2
    A = WeylElement.x(n, 1, 2)
    B = WeylElement.d(n, 1, 2)
    AB = commutator(A, B)
    lhs = (A + B) ** m
    results = {}
    for name, power in (("printed", lambda k: 2 * k), ("half", lambda k: k)):
        rhs = WeylElement.zero(n)
        for k in range(m // 2 + 1):
            inner = WeylElement.zero(n)
            r = m - 2 * k
            for s in range(r + 1):
                inner = inner + (B ** s * A ** (r - s)).scale(comb(r, s))
            rhs = rhs + (AB ** power(k) * inner).scale(c_coeff(k, m))
        results[name] = lhs == rhs
    return results


def binomial_central_commutator_check(m: int, bound: int = 8, form: str = "printed") -> bool:
    if m < 0 or m > bound:
        raise WeylError(f"m={m} outside [0,{bound}]")
    return central_commutator_forms(m)[form]


def mul_accumulate(acc: Dict[Key, Fraction], a: WeylElement, b: WeylElement, scale=1) -> None:
    """``acc += scale * a * b`` on raw term dictionaries (zeros are not pruned)."""
    get = acc.get
    for (m1, e1), c1 in a._t.items():
        c1s = c1 * scale
        for (m2, e2), c2 in b._t.items():
            c12 = c1s * c2
            e = e1 + e2
            for m, k in mono_mul(m1, m2):
                key = (m, e)
                acc[key] = get(key, 0) + c12 * k


def from_raw(n: int, acc: Mapping[Key, Fraction]) -> WeylElement:
    return WeylElement(n, {k: c for k, c in acc.items() if c != 0}, _trusted=True)


def adjoint_apply(g: ScalarMatrix, P: WeylElement, f: AltPoly) -> AltPoly:
    """``(pi(g) P pi(g)^{-1}) f`` by substitution and differentiation."""
    return group_action(g, apply(P, group_action(g.inverse(), f)))


def conjugation_closed_form_check(g: ScalarMatrix, f: AltPoly) -> bool:
    """Closed-form conjugates of every generator agree with the substitution oracle on ``f``."""
    n = g.dim
    if g.dim != f.n:
        raise WeylError("group element size does not match polynomial ring")
    # pi(g) is substitution by g^{-1}, pi(g)^{-1} by g; both maps are shared by all generators
    to_g = _linear_substitution(n, g.inverse())
    pulled = f.subs(_linear_substitution(n, g))
    for i, j in variables(n):
        pairs = ((WeylElement.d(n, i, j), conjugate_derivation(g, i, j)),
                 (WeylElement.x(n, i, j), conjugate_multiplication(g, i, j)))
        for P, closed in pairs:
            if apply(P, pulled).subs(to_g) != apply(closed, f):
                return False
    return True
