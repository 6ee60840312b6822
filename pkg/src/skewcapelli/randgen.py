"""Seeded random inputs for property suites. All functions take a ``random.Random``."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .opmatrix import OpMatrix, j_matrix, matmul
from .scalars import ScalarMatrix
from .weyl import AltPoly, WeylElement, make_monomial, variables


def rational(rng: random.Random, lo: int = -4, hi: int = 4, denom: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, denom))


def nonzero_rational(rng: random.Random, **kw) -> Fraction:
    while True:
        q = rational(rng, **kw)
        if q:
            return q


def weyl_element(rng: random.Random, n: int, terms: int = 3, max_exp: int = 2, u_deg: int = 1) -> WeylElement:
    """Sum of a few random normal-ordered monomials."""
    vs = variables(n)
    out = WeylElement.zero(n)
    for _ in range(terms):
        xe, de = {}, {}
        for _ in range(rng.randint(0, 2) if vs else 0):
            v = rng.choice(vs)
            if rng.random() < 0.5:
                xe[v] = rng.randint(1, max_exp)
            else:
                de[v] = rng.randint(1, max_exp)
        c = WeylElement.from_monomial(n, make_monomial(xe, de), rational(rng))
        out = out + c * WeylElement.u(n, rng.randint(0, u_deg))
    return out


def affine_entry(rng: random.Random, n: int, density: float = 0.6) -> WeylElement:
    """Zero, or a random combination of one or two generators plus a u-term."""
    vs = variables(n)
    if rng.random() > density or not vs:
        return WeylElement.zero(n)
    out = WeylElement.zero(n)
    for _ in range(rng.randint(1, 2)):
        i, j = rng.choice(vs)
        g = WeylElement.x(n, i, j) if rng.random() < 0.5 else WeylElement.d(n, i, j)
        out = out + g.scale(nonzero_rational(rng))
    if rng.random() < 0.4:
        out = out + WeylElement.u(n).scale(rational(rng))
    return out


def alternating_opmatrix(rng: random.Random, n: int, dim: int, density: float = 0.6) -> OpMatrix:
    rows = [[WeylElement.zero(n) for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            e = affine_entry(rng, n, density)
            rows[i][j] = e
            rows[j][i] = -e
    return OpMatrix(n, rows)


def anti_alternating_opmatrix(rng: random.Random, n: int, dim: int, density: float = 0.6) -> OpMatrix:
    return matmul(alternating_opmatrix(rng, n, dim, density), j_matrix(dim))


def invertible(rng: random.Random, m: int) -> ScalarMatrix:
    return ScalarMatrix.random_invertible(m, rng)


def alt_monomials(rng: random.Random, n: int, count: int, max_degree: int = 3) -> List[AltPoly]:
    vs = variables(n)
    out = []
    for _ in range(count):
        exps = {}
        for _ in range(rng.randint(0, max_degree) if vs else 0):
            v = rng.choice(vs)
            exps[v] = exps.get(v, 0) + 1
        out.append(AltPoly.monomial(n, exps))
    return out


def alt_poly(rng: random.Random, n: int, terms: int = 3, max_degree: int = 3) -> AltPoly:
    out = AltPoly(n)
    for f in alt_monomials(rng, n, terms, max_degree):
        out = out + f * rational(rng)
    return out
