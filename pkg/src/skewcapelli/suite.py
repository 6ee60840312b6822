"""Seeded invariant suite over every module. Output carries counts only, no timings,
so a fixed seed gives byte-identical reports.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import capelli, forms, randgen
from .opmatrix import adjoint_equivariance_check
from .pfaffian import pf_anti, pf_equivariance_check, pf_full, pf_restricted
from .forms import pf_via_forms_alternating
from .scalars import ScalarMatrix, UPoly
from .weyl import apply, binomial_central_commutator_check, c_coeff, conjugation_closed_form_check, weyl_mul

Outcome = Tuple[int, int]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _count(checks) -> Outcome:
    results = list(checks)
    return sum(1 for r in results if r), len(results)


def _field_axioms(rng: random.Random) -> Outcome:
    def one():
        a, b, c = (randgen.rational(rng, -50, 50, 20) for _ in range(3))
        ok = (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
        return ok and (a == 0 or a * (1 / a) == 1)
    return _count(one() for _ in range(300))


def _upoly_ring(rng: random.Random) -> Outcome:
    def poly():
        return UPoly([randgen.rational(rng) for _ in range(rng.randint(0, 4))])

    def one():
        p, q, r = poly(), poly(), poly()
        return (p * q) * r == p * (q * r) and p * (q + r) == p * q + p * r and p * q == q * p
    return _count(one() for _ in range(100))


def _det_multiplicative(rng: random.Random) -> Outcome:
    def one():
        a, b = randgen.invertible(rng, 3), randgen.invertible(rng, 3)
        return (a @ b).det() == a.det() * b.det() and (a @ a.inverse()) == ScalarMatrix.identity(3)
    return _count(one() for _ in range(30))


def _weyl_associativity(rng: random.Random) -> Outcome:
    def one():
        a, b, c = (randgen.weyl_element(rng, 3) for _ in range(3))
        return weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c))
    return _count(one() for _ in range(60))


def _weyl_leibniz(rng: random.Random) -> Outcome:
    def one():
        p, q = randgen.weyl_element(rng, 3, u_deg=0), randgen.weyl_element(rng, 3, u_deg=0)
        f = randgen.alt_poly(rng, 3)
        return apply(weyl_mul(p, q), f) == apply(p, apply(q, f))
    return _count(one() for _ in range(40))


def _conjugation_closed_forms(rng: random.Random) -> Outcome:
    def one():
        n = rng.choice((2, 3))
        g = randgen.invertible(rng, n)
        return all(conjugation_closed_form_check(g, f) for f in randgen.alt_monomials(rng, n, 3, 3))
    return _count(one() for _ in range(6))


def _central_commutator(rng: random.Random) -> Outcome:
    return _count(binomial_central_commutator_check(m, form="half") for m in range(9))


def _adjoint_equivariance(rng: random.Random) -> Outcome:
    gs = [randgen.invertible(rng, n) for n in (2, 3) for _ in range(2)]
    return _count(adjoint_equivariance_check(g, layout) for g in gs for layout in ("block", "display"))


def _backend_equivalence(rng: random.Random) -> Outcome:
    def one():
        dim = rng.choice((4, 6))
        X = randgen.alternating_opmatrix(rng, 3, dim)
        r = pf_restricted(X)
        return pf_full(X) == r == pf_via_forms_alternating(X)
    return _count(one() for _ in range(10))


def _pf_equivariance(rng: random.Random) -> Outcome:
    def one():
        X = randgen.anti_alternating_opmatrix(rng, 2, 4)
        return pf_equivariance_check(randgen.invertible(rng, 4), X)
    return _count(one() for _ in range(6))


def _forms_relations(rng: random.Random) -> Outcome:
    checks = [forms.cr_check(n) for n in range(1, 5)]
    checks += [forms.expansion_check(n, m) for n in range(1, 4) for m in range(5)]
    checks += [forms.theta_commutation_check(n, a, b) for n in range(1, 4)
               for a in range(4) for b in range(4) if a + b <= 4]
    checks += [forms.theta_power_identity_check(n, r) for n in range(1, 5) for r in range(n // 2 + 1)]
    return _count(checks)


def _c_recursion(rng: random.Random) -> Outcome:
    return _count(c_coeff(k, m + 1) == c_coeff(k, m) + (m + 2 - 2 * k) * c_coeff(k - 1, m)
                  for m in range(21) for k in range(-1, m // 2 + 3))


def _shuffle_mirror(rng: random.Random) -> Outcome:
    # the mirror identity is needed (and holds) for even |I|
    subsets = [I for r in range(0, 5, 2) for I in combinations(range(1, 5), r)]
    return _count(forms.shuffle_sign(I, 4) == forms.shuffle_sign(I, 4, mirrored=True) for I in subsets)


def _volume_reassembly(rng: random.Random) -> Outcome:
    cases = [(I, n) for n in range(1, 6) for r in range(n + 1) for I in combinations(range(1, n + 1), r)]
    return _count(forms.volume_reassembly_check(I, n) for I, n in cases)


def _main_identity(rng: random.Random) -> Outcome:
    return _count(capelli.main_identity_check(n, b).passed for n in range(1, 5) for b in ("restricted", "forms"))


def _hermite(rng: random.Random) -> Outcome:
    return _count(capelli.hermite_relation_check(m) for m in range(11))


def _symbol(rng: random.Random) -> Outcome:
    return _count(capelli.symbol_identity_check(n) for n in range(1, 6))


def _invariance(rng: random.Random) -> Outcome:
    return _count(capelli.invariance_check(n) for n in range(1, 5))


def _group_spot(rng: random.Random) -> Outcome:
    def one():
        n = rng.choice((2, 3))
        g = randgen.invertible(rng, n)
        pf = pf_anti(capelli.build_phi(n), "forms")
        return all(capelli.group_invariance_spot_check(n, g, f, pf) for f in randgen.alt_monomials(rng, n, 2, 2))
    return _count(one() for _ in range(3))


PROPERTIES: Dict[str, Callable[[random.Random], Outcome]] = {
    "scalars.field_axioms": _field_axioms,
    "scalars.upoly_ring": _upoly_ring,
    "scalars.det_multiplicative": _det_multiplicative,
    "weyl.associativity": _weyl_associativity,
    "weyl.leibniz": _weyl_leibniz,
    "weyl.conjugation_closed_forms": _conjugation_closed_forms,
    "weyl.central_commutator_expansion": _central_commutator,
    "opmatrix.adjoint_equivariance": _adjoint_equivariance,
    "pfaffian.backend_equivalence": _backend_equivalence,
    "pfaffian.equivariance": _pf_equivariance,
    "forms.theta_relations": _forms_relations,
    "forms.c_recursion": _c_recursion,
    "forms.shuffle_mirror_even": _shuffle_mirror,
    "forms.volume_reassembly": _volume_reassembly,
    "capelli.main_identity": _main_identity,
    "capelli.hermite_bridge": _hermite,
    "capelli.symbol_identity": _symbol,
    "capelli.invariance": _invariance,
    "capelli.group_spot_check": _group_spot,
}


def run_suite(seed: int, names: Optional[Sequence[str]] = None) -> List[PropertyResult]:
    out = []
    for name in names or PROPERTIES:
        rng = random.Random(f"{seed}:{name}")
        passed, total = PROPERTIES[name](rng)
        out.append(PropertyResult(name, passed, total))
    return out
