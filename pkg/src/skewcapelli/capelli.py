"""Skew Capelli operators Gamma_k, the Hermite-type coefficients a_m(u), and
exact checks of the generating-function identity

    Pf(Phi(u)) = sum_k a_{n-2k}(u) Gamma_k

together with its symbol-level shadow and GL_n-invariance.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List

from .opmatrix import build_D, build_M, build_phi, j_matrix, neg
from .pfaffian import pf_anti, pf_commutative
from .scalars import GaussRational, ScalarMatrix, UPoly
from .weyl import AltPoly, SymbolPoly, WeylElement, apply, commutator, dpi, group_action, mono_degrees, weyl_mul

U_SAMPLES = (0, 1, -1, 2)


class CapelliError(ValueError):
    pass


@dataclass(frozen=True)
class GammaOperator:
    n: int
    k: int
    element: WeylElement

    def __str__(self) -> str:
        return str(self.element)


@dataclass(frozen=True)
class HermiteData:
    m: int
    hermite: UPoly
    a_poly: UPoly

    def __str__(self) -> str:
        return f"H_{self.m} = {integer_poly_str(self.hermite, 'x')}; a_{self.m} = {self.a_poly.to_str('u')}"


def integer_poly_str(p: UPoly, var: str = "x") -> str:
    """Compact rendering for integer polynomials: ``8x^3 - 12x``."""
    if p.degree < 0:
        return "0"
    parts = []
    for e in sorted(p.coeffs, reverse=True):
        c = p.coeffs[e]
        mag = abs(c)
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts)


def gamma(n: int, k: int) -> GammaOperator:
    """``Gamma_k = sum_{|I| = 2k} Pf(x_I) Pf(d_I)``, factors in that order."""
    if n < 1:
        raise CapelliError("n must be >= 1")
    if not 0 <= k <= n // 2:
        raise CapelliError(f"k={k} outside [0, {n // 2}]")
    if k == 0:
        return GammaOperator(n, 0, WeylElement.one(n))
    M, D = build_M(n), build_D(n)
    acc = WeylElement.zero(n)
    for I in combinations(range(n), 2 * k):
        acc = acc + weyl_mul(pf_commutative(M.submatrix(I)), pf_commutative(D.submatrix(I)))
    return GammaOperator(n, k, acc)


def hermite(m: int) -> UPoly:
    """``H_m(x) = m! sum_k (-1)^k 2^(m-2k) / (k! (m-2k)!) x^(m-2k)`` (integer coefficients)."""
    if m < 0:
        raise CapelliError("m must be >= 0")
    return UPoly({m - 2 * k: Fraction((-1) ** k * math.factorial(m) * 2 ** (m - 2 * k),
                                      math.factorial(k) * math.factorial(m - 2 * k))
                  for k in range(m // 2 + 1)})


def a_poly(m: int) -> UPoly:
    """``a_m(u) = sum_k m! / (4^k (m-2k)! k!) u^(m-2k)``."""
    if m < 0:
        raise CapelliError("m must be >= 0")
    return UPoly({m - 2 * k: Fraction(math.factorial(m), 4 ** k * math.factorial(m - 2 * k) * math.factorial(k))
                  for k in range(m // 2 + 1)})


def hermite_data(m: int) -> HermiteData:
    return HermiteData(m, hermite(m), a_poly(m))


def hermite_relation_check(m: int) -> bool:
    """``a_m(u) == (-i/2)^m H_m(i u)`` over the Gaussian rationals."""
    i = GaussRational.I
    pre = GaussRational(0, Fraction(-1, 2)) ** m
    coeffs: Dict[int, GaussRational] = {}
    for e, c in hermite(m).coeffs.items():
        coeffs[e] = pre * (i ** e) * GaussRational(c, 0)
    if any(v.im != 0 for v in coeffs.values()):
        return False
    return UPoly({e: v.re for e, v in coeffs.items()}) == a_poly(m)


def expected_pfaffian(n: int) -> WeylElement:
    """Right-hand side ``sum_k a_{n-2k}(u) Gamma_k``."""
    acc = WeylElement.zero(n)
    for k in range(n // 2 + 1):
        acc = acc + gamma(n, k).element * WeylElement.const(n, a_poly(n - 2 * k))
    return acc


@dataclass
class IdentityReport:
    n: int
    backend: str
    passed: bool
    delta_term_count: int
    pf_term_count: int
    millis: int
    pf: WeylElement = field(repr=False)
    delta: WeylElement = field(repr=False)

    def to_json(self, timing: bool = True) -> dict:
        out = {"n": self.n, "backend": self.backend, "pass": self.passed,
               "delta_term_count": self.delta_term_count, "pf_term_count": self.pf_term_count}
        if timing:
            out["millis"] = self.millis
        return out

    def to_text(self, timing: bool = True) -> str:
        lines = [f"n = {self.n}, backend = {self.backend}: {'PASS' if self.passed else 'FAIL'}",
                 f"Pf(Phi(u)) = {self.pf}",
                 f"terms: pf {self.pf_term_count}, delta {self.delta_term_count}"]
        if not self.passed:
            lines.append(f"delta = {self.delta}")
        if timing:
            lines.append(f"time: {self.millis} ms")
        return "\n".join(lines)


def main_identity_check(n: int, backend: str = "restricted", **kw) -> IdentityReport:
    if n < 1:
        raise CapelliError("n must be >= 1")
    if backend not in ("restricted", "forms", "full"):
        raise CapelliError(f"backend {backend!r} cannot evaluate a noncommutative Pfaffian")
    t0 = time.perf_counter()
    pf = pf_anti(build_phi(n), backend, **kw)
    delta = pf - expected_pfaffian(n)
    millis = int(round((time.perf_counter() - t0) * 1000))
    return IdentityReport(n, backend, delta.is_zero(), delta.term_count, pf.term_count, millis, pf, delta)


# --- symbol level -------------------------------------------------------------

def symbol_phi_tilde(n: int) -> List[List[SymbolPoly]]:
    """The displayed alternating matrix with every d[i,j] replaced by the commuting xi[i,j]."""
    m = 2 * n
    u = SymbolPoly.u(n)
    zero = SymbolPoly.zero(n)

    def entry(p: int, q: int) -> SymbolPoly:
        if p <= n and q <= n:
            return SymbolPoly.var(n, p, q, "x")
        if p <= n < q:
            return u if q == neg(p, m) else zero
        if q <= n < p:
            return -u if p == neg(q, m) else zero
        r, c = p - n, q - n
        return SymbolPoly.var(n, n + 1 - c, n + 1 - r, "xi")

    return [[entry(p, q) for q in range(1, m + 1)] for p in range(1, m + 1)]


def symbol_pfaffian(n: int) -> SymbolPoly:
    """Commutative Pfaffian of the symbol matrix, taken as ``Pf(Phi J)`` with ``Phi = Phi~ J``."""
    mat = symbol_phi_tilde(n)
    J = j_matrix(2 * n)
    # Phi = Phi~ J, then Phi J = Phi~ (J J) = Phi~; written out to keep the convention visible
    phi = [[sum((mat[i][k] * J[k, j] for k in range(2 * n) if J[k, j]), SymbolPoly.zero(n))
            for j in range(2 * n)] for i in range(2 * n)]
    phi_j = [[sum((phi[i][k] * J[k, j] for k in range(2 * n) if J[k, j]), SymbolPoly.zero(n))
              for j in range(2 * n)] for i in range(2 * n)]
    return pf_commutative(phi_j, one=SymbolPoly.one(n))


def gamma_symbol(n: int, k: int) -> SymbolPoly:
    """``gamma_k = sum_I Pf(x_I) Pf(xi_I)``."""
    one = SymbolPoly.one(n)
    xs = [[SymbolPoly.var(n, i, j, "x") for j in range(1, n + 1)] for i in range(1, n + 1)]
    ks = [[SymbolPoly.var(n, i, j, "xi") for j in range(1, n + 1)] for i in range(1, n + 1)]
    acc = SymbolPoly.zero(n)
    for I in combinations(range(n), 2 * k):
        sub_x = [[xs[a][b] for b in I] for a in I]
        sub_k = [[ks[a][b] for b in I] for a in I]
        acc = acc + pf_commutative(sub_x, one=one) * pf_commutative(sub_k, one=one)
    return acc


def symbol_identity_check(n: int) -> bool:
    """``Pf(sigma Phi~(u)) == sum_k u^(n-2k) gamma_k`` with commuting entries."""
    if n < 1:
        raise CapelliError("n must be >= 1")
    rhs = SymbolPoly.zero(n)
    for k in range(n // 2 + 1):
        rhs = rhs + SymbolPoly.u(n, n - 2 * k) * gamma_symbol(n, k)
    return symbol_pfaffian(n) == rhs


# --- invariance -------------------------------------------------------------

def invariance_check(n: int, pf: WeylElement = None) -> bool:
    """``[dpi(E_ij), Gamma_k] == 0`` and ``[dpi(E_ij), Pf(Phi(u))] == 0`` for all i, j, k."""
    if n < 1:
        raise CapelliError("n must be >= 1")
    gens = [dpi(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    targets = [gamma(n, k).element for k in range(n // 2 + 1)]
    targets.append(pf if pf is not None else pf_anti(build_phi(n), "forms"))
    return all(commutator(e, t).is_zero() for e in gens for t in targets)


def u_samples(n: int) -> List[int]:
    """Four fixed samples, extended so that at least n + 1 points are used."""
    out = list(U_SAMPLES)
    v = 3
    while len(out) < n + 1:
        out.extend([v, -v])
        v += 1
    return out[:max(len(U_SAMPLES), n + 1)]


def group_invariance_spot_check(n: int, g: ScalarMatrix, f: AltPoly, pf: WeylElement = None) -> bool:
    """``pi(g) P pi(g)^{-1} f == P f`` with ``P = Pf(Phi(u0))`` for sampled rational u0."""
    if g.dim != n or f.n != n:
        raise CapelliError("size mismatch")
    if not g.is_invertible():
        raise CapelliError("g is singular")
    pf = pf if pf is not None else pf_anti(build_phi(n), "forms")
    g_inv = g.inverse()
    for u0 in u_samples(n):
        P = pf.specialize_u(u0)
        lhs = group_action(g, apply(P, group_action(g_inv, f)))
        if lhs != apply(P, f):
            return False
    return True


def bidegree_ok(op: GammaOperator) -> bool:
    return all(mono_degrees(m) == (op.k, op.k) for m in op.element.terms)
