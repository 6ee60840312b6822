"""Exact scalars: rationals, polynomials in the central parameter ``u``,
and Gaussian rationals.

Rationals are :class:`fractions.Fraction`; plain ``int`` is accepted anywhere a
rational is expected and compares equal to the matching fraction.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class ScalarError(ArithmeticError):
    """Raised for invalid scalar operations (division by zero, bad op name)."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def rational_str(q: Scalar) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "div":
        if b == 0:
            raise ScalarError(f"division of {rational_str(a)} by zero")
        return a / b
    raise ScalarError(f"unknown rational op {op!r}")


class UPoly:
    """Polynomial in ``u`` with exact rational coefficients (immutable).

    Stored as a dense coefficient tuple, lowest degree first, with no trailing
    zeros; the zero polynomial is the empty tuple.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, Scalar], Iterable[Scalar], Scalar] = ()):
        if isinstance(coeffs, Mapping):
            top = max(coeffs, default=-1)
            dense = [Fraction(0)] * (top + 1)
            for e, c in coeffs.items():
                if e < 0:
                    raise ValueError("negative exponent")
                dense[e] += as_rational(c)
        elif isinstance(coeffs, (int, Fraction)):
            dense = [as_rational(coeffs)]
        else:
            dense = [as_rational(c) for c in coeffs]
        while dense and dense[-1] == 0:
            dense.pop()
        self._c: Tuple[Fraction, ...] = tuple(dense)
        self._hash = None

    @classmethod
    def u(cls, power: int = 1) -> "UPoly":
        return cls({power: 1})

    @classmethod
    def const(cls, c: Scalar) -> "UPoly":
        return cls((c,))

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return {e: c for e, c in enumerate(self._c) if c != 0}

    def coeff(self, e: int) -> Fraction:
        return self._c[e] if 0 <= e < len(self._c) else Fraction(0)

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UPoly.const(other)
        if not isinstance(other, UPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("UPoly", self._c))
        return self._hash

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return UPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "UPoly":
        return UPoly([c * x for x in self._c])

    def __pow__(self, k: int) -> "UPoly":
        if k < 0:
            raise ScalarError("negative power of a polynomial")
        out = UPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, r: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * r + c
        return acc

    def to_str(self, var: str = "u") -> str:
        if not self._c:
            return "0"
        parts = []
        for e in range(len(self._c) - 1, -1, -1):
            c = self._c[e]
            if c == 0:
                continue
            mag = rational_str(abs(c))
            if e == 0:
                body = mag
            else:
                v = var if e == 1 else f"{var}^{e}"
                body = v if abs(c) == 1 else f"{mag} {v}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"UPoly({self.to_str()!r})"

    def to_json(self) -> Dict[str, str]:
        return {str(e): rational_str(c) for e, c in sorted(self.coeffs.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "UPoly":
        return cls({int(e): Fraction(c) for e, c in data.items()})


def upoly_arith(p: UPoly, q, op: str) -> UPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(as_rational(q))
    raise ScalarError(f"unknown polynomial op {op!r}")


class GaussRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        self.re = as_rational(re)
        self.im = as_rational(im)

    I: "GaussRational"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussRational(other)
        if not isinstance(other, GaussRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, other: "GaussRational") -> "GaussRational":
        other = _gauss(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other) -> "GaussRational":
        return self + (-_gauss(other))

    def __mul__(self, other) -> "GaussRational":
        other = _gauss(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GaussRational":
        if k < 0:
            raise ScalarError("negative power")
        out, base = GaussRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"GaussRational({rational_str(self.re)}, {rational_str(self.im)})"


GaussRational.I = GaussRational(0, 1)


def _gauss(z) -> GaussRational:
    return z if isinstance(z, GaussRational) else GaussRational(as_rational(z))


def gauss_arith(z: GaussRational, w, op: str) -> GaussRational:
    if op == "add":
        return z + w
    if op == "mul":
        return z * w
    if op == "pow":
        if not isinstance(w, int) or w < 0:
            raise ScalarError("pow exponent must be a nonnegative integer")
        return z ** w
    raise ScalarError(f"unknown Gaussian op {op!r}")


class ScalarMatrix:
    """Square matrix over the rationals (immutable, dense)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(as_rational(v) for v in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("ScalarMatrix must be square")
        self.rows: Tuple[Tuple[Fraction, ...], ...] = rows

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, m: int) -> "ScalarMatrix":
        return cls([[int(i == j) for j in range(m)] for i in range(m)])

    @classmethod
    def diag(cls, values) -> "ScalarMatrix":
        values = list(values)
        m = len(values)
        return cls([[values[i] if i == j else 0 for j in range(m)] for i in range(m)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")
        cols = list(zip(*other.rows))
        return ScalarMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def __mul__(self, c: Scalar) -> "ScalarMatrix":
        return ScalarMatrix([[c * v for v in r] for r in self.rows])

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarMatrix":
        return self * -1

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(list(zip(*self.rows)))

    @property
    def T(self) -> "ScalarMatrix":
        return self.transpose()

    def det(self) -> Fraction:
        a = [list(r) for r in self.rows]
        m = len(a)
        det = Fraction(1)
        for c in range(m):
            p = next((r for r in range(c, m) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, m):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "ScalarMatrix":
        m = self.dim
        a = [list(r) + [Fraction(int(i == j)) for j in range(m)] for i, r in enumerate(self.rows)]
        for c in range(m):
            p = next((r for r in range(c, m) if a[r][c] != 0), None)
            if p is None:
                raise ScalarError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            inv = 1 / a[c][c]
            a[c] = [x * inv for x in a[c]]
            for r in range(m):
                if r != c and a[r][c] != 0:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return ScalarMatrix([r[m:] for r in a])

    def is_invertible(self) -> bool:
        return self.det() != 0

    def minor2(self, rows: Tuple[int, int], cols: Tuple[int, int]) -> Fraction:
        """Determinant of the 2x2 submatrix on 0-based ``rows`` x ``cols``."""
        (a, b), (i, j) = rows, cols
        r = self.rows
        return r[a][i] * r[b][j] - r[a][j] * r[b][i]

    @classmethod
    def random_invertible(cls, m: int, rng, lo: int = -3, hi: int = 3, denom: int = 2) -> "ScalarMatrix":
        """Seeded random invertible matrix with small rational entries."""
        while True:
            g = cls([[Fraction(rng.randint(lo, hi), rng.randint(1, denom)) for _ in range(m)] for _ in range(m)])
            if g.det() != 0:
                return g

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rational_str(v) for v in r) for r in self.rows)
        return f"ScalarMatrix([{body}])"
