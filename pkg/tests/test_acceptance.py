"""Acceptance gate: the fourteen criteria, every comparison exact.

Each test records one ``criterion N: PASS|FAIL`` line; the lines are printed
as the test runs and again in the pytest terminal summary.  Two criteria are
stated more strongly than the mathematics allows; those tests check the
literal statement, print FAIL, and are marked as strict expected failures.
Companion tests check the corrected statements.
"""
from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import pytest

from skewcapelli import randgen
from skewcapelli.capelli import (
    a_poly,
    hermite_relation_check,
    invariance_check,
    main_identity_check,
    symbol_identity_check,
)
from skewcapelli.cli import main
from skewcapelli.forms import (
    cr_check,
    expansion_check,
    pf_via_forms_alternating,
    shuffle_sign,
    theta_commutation_check,
    theta_power_identity_check,
    volume_reassembly_check,
)
from skewcapelli.opmatrix import build_phi, adjoint_equivariance_check
from skewcapelli.pfaffian import pf_anti, pf_equivariance_check, pf_full, pf_restricted
from skewcapelli.weyl import (
    AltPoly,
    WeylElement,
    c_coeff,
    central_commutator_forms,
    conjugation_closed_form_check,
    monomials_up_to,
    variables,
)

RESULTS: dict = {}


def report(key: str, ok: bool, detail: str) -> bool:
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[key] = line
    print(line)
    return ok


def seeded(tag: str) -> random.Random:
    return random.Random(f"acceptance:{tag}")


# 1 -------------------------------------------------------------------------

def test_criterion_01_main_identity():
    worst = 0
    ok = True
    for n in range(1, 6):
        for backend in ("restricted", "forms"):
            t0 = time.perf_counter()
            r = main_identity_check(n, backend)
            worst = max(worst, time.perf_counter() - t0)
            ok &= r.passed and r.delta.is_zero()
    t0 = time.perf_counter()
    stretch = main_identity_check(6, "forms").passed
    stretch_secs = time.perf_counter() - t0
    ok &= worst <= 60 and stretch and stretch_secs <= 600
    report("1", ok, f"n=1..5 both backends, slowest {worst:.2f}s; n=6 forms {stretch_secs:.2f}s")
    assert ok


# 2 -------------------------------------------------------------------------

def test_criterion_02_closed_form_n2():
    n = 2
    x, d, u = WeylElement.x(n, 1, 2), WeylElement.d(n, 1, 2), WeylElement.u(n)
    hand = (x * d + d * x + u * u * 2).scale(Fraction(1, 2))
    target = x * d + u * u + WeylElement.const(n, Fraction(1, 2))
    pf = pf_anti(build_phi(n))
    ok = pf == target == hand
    report("2", ok, f"Pf(Phi(u)) = {pf}")
    assert ok


# 3 -------------------------------------------------------------------------

def test_criterion_03_backend_equivalence():
    counts = {}
    ok = True
    for dim in (4, 6, 8):
        rng = seeded(f"c3:{dim}")
        for _ in range(50):
            X = randgen.alternating_opmatrix(rng, 3, dim)
            r = pf_restricted(X)
            ok &= pf_full(X) == r == pf_via_forms_alternating(X)
            counts[dim] = counts.get(dim, 0) + 1
    report("3", ok, "random matrices per size " + ", ".join(f"{d}x{d}: {c}" for d, c in counts.items()))
    assert ok


# 4 -------------------------------------------------------------------------

def _degree_monomial(rng, n, degree):
    exps = {}
    vs = variables(n)
    for _ in range(degree):
        v = rng.choice(vs)
        exps[v] = exps.get(v, 0) + 1
    return AltPoly.monomial(n, exps)


def test_criterion_04_conjugation_formulas():
    rng = seeded("c4")
    checks = 0
    ok = True
    for n in (2, 3, 4):
        full = monomials_up_to(n, 3) if n <= 3 else None
        for _ in range(8):
            g = randgen.invertible(rng, n)
            targets = full or [_degree_monomial(rng, n, deg) for deg in range(4)]
            for f in targets:
                ok &= conjugation_closed_form_check(g, f)
                checks += 1
    report("4", ok, f"24 random g over n=2,3,4, {checks} (g, monomial) pairs, all generators")
    assert ok


# 5 -------------------------------------------------------------------------

def _adjoint_samples():
    rng = seeded("c5")
    return [(n, randgen.invertible(rng, n)) for n in (2, 3, 4) for _ in range(10)]


@pytest.mark.xfail(strict=True, reason="literal statement pairs the display of Phi with iota(g^T); "
                                       "it holds for the block layout or with iota(g^-1)")
def test_criterion_05_adjoint_equivariance_literal():
    samples = _adjoint_samples()
    failures = sum(1 for _, g in samples if not adjoint_equivariance_check(g, "display-literal"))
    ok = failures == 0
    report("5", ok, f"literal form with Phi = Phi~ J fails for {failures}/{len(samples)} random g; "
                    "see corrected-form test")
    assert ok


def test_criterion_05_corrected_forms():
    samples = _adjoint_samples()
    block = all(adjoint_equivariance_check(g, "block") for _, g in samples)
    display = all(adjoint_equivariance_check(g, "display") for _, g in samples)
    ok = block and display
    report("5b", ok, f"block layout with iota(g^T) and Phi~ J with iota(g^-1), {len(samples)} random g each")
    assert ok


# 6 -------------------------------------------------------------------------

def test_criterion_06_pfaffian_equivariance():
    rng = seeded("c6")
    total = 0
    ok = True
    for dim in (4, 6):
        for _ in range(12):
            X = randgen.anti_alternating_opmatrix(rng, 3, dim)
            ok &= pf_equivariance_check(randgen.invertible(rng, dim), X)
            total += 1
    report("6", ok, f"Pf(g X g^) = det(g) Pf(X) on {total} random pairs, 2n in (4, 6)")
    assert ok


# 7 -------------------------------------------------------------------------

def test_criterion_07_invariance():
    ok = all(invariance_check(n) for n in range(1, 6))
    report("7", ok, "[dpi(E_ij), Gamma_k] = [dpi(E_ij), Pf(Phi(u))] = 0 for n <= 5")
    assert ok


# 8 -------------------------------------------------------------------------

def test_criterion_08_commutation_relations():
    ok = all(cr_check(n) for n in range(1, 6))
    report("8", ok, "[tau, Theta_-+] = 0 and [Theta_+, Theta_-] = 2 tau^2 for n <= 5")
    assert ok


# 9 -------------------------------------------------------------------------

def test_criterion_09_expansion_and_recursion():
    expansion = all(expansion_check(n, m) for n in range(1, 5) for m in range(6))
    recursion = all(c_coeff(k, m + 1) == c_coeff(k, m) + (m + 2 - 2 * k) * c_coeff(k - 1, m)
                    for m in range(21) for k in range(-2, m // 2 + 3))
    commutation = all(theta_commutation_check(n, a, b)
                      for n in range(1, 5) for a in range(6) for b in range(6 - a))
    ok = expansion and recursion and commutation
    report("9", ok, f"expansion {expansion}, c_k recursion {recursion}, descending factorial {commutation}")
    assert ok


# 10 ------------------------------------------------------------------------

def test_criterion_10_central_commutator_exponent():
    forms = [central_commutator_forms(m) for m in range(9)]
    printed_fails_at = [m for m, f in enumerate(forms) if not f["printed"]]
    half_holds = all(f["half"] for f in forms)
    # the exponent 2k is refuted from m = 2 on; exponent k holds throughout
    ok = half_holds and printed_fails_at == list(range(2, 9))
    report("10", ok, f"resolved to [A,B]^k; printed [A,B]^2k fails for m in {printed_fails_at[:1]}..8")
    assert ok


# 11 ------------------------------------------------------------------------

def test_criterion_11_hermite_bridge():
    bridge = all(hermite_relation_check(m) for m in range(11))
    monic = all(a_poly(m).degree == m and a_poly(m).coeffs[m] == 1 for m in range(21))
    ok = bridge and monic
    report("11", ok, "a_m(u) = (-i/2)^m H_m(iu) for m <= 10; a_m monic of degree m for m <= 20")
    assert ok


# 12 ------------------------------------------------------------------------

def test_criterion_12_symbol_identity():
    ok = all(symbol_identity_check(n) for n in range(1, 7))
    report("12", ok, "commutative symbol identity for n <= 6")
    assert ok


# 13 ------------------------------------------------------------------------

@pytest.mark.xfail(strict=True, reason="mirror shuffle identity holds iff |I|(n-|I|) is even; "
                                       "only even |I| is used, and the volume reassembly holds for every I")
def test_criterion_13_proof_steps_literal():
    powers = all(theta_power_identity_check(n, r) for n in range(1, 5) for r in range(n // 2 + 1))
    subsets = [I for r in range(5) for I in combinations(range(1, 5), r)]
    bad = [I for I in subsets if shuffle_sign(I, 4) != shuffle_sign(I, 4, mirrored=True)]
    ok = powers and not bad
    report("13", ok, f"Theta powers {powers}; mirror sign differs on {len(bad)}/{len(subsets)} "
                     "subsets of [4] (every odd |I|)")
    assert ok


def test_criterion_13_corrected():
    powers = all(theta_power_identity_check(n, r) for n in range(1, 5) for r in range(n // 2 + 1))
    even = all(shuffle_sign(I, 4) == shuffle_sign(I, 4, mirrored=True)
               for r in range(0, 5, 2) for I in combinations(range(1, 5), r))
    parity = all(shuffle_sign(I, 4) * shuffle_sign(I, 4, mirrored=True) == (-1) ** (len(I) * (4 - len(I)))
                 for r in range(5) for I in combinations(range(1, 5), r))
    reassembly = all(volume_reassembly_check(I, n)
                     for n in range(1, 6) for r in range(n + 1) for I in combinations(range(1, n + 1), r))
    ok = powers and even and parity and reassembly
    report("13b", ok, "Theta powers for 2r <= n <= 4, mirror sign for even |I|, volume reassembly for all I")
    assert ok


# 14 ------------------------------------------------------------------------

def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "skewcapelli", *argv], capture_output=True)


def test_criterion_14_cli_contract(tmp_path, capsys, monkeypatch):
    first, second = _cli("suite", "--seed", "42"), _cli("suite", "--seed", "42")
    deterministic = first.returncode == second.returncode == 0 and first.stdout == second.stdout
    fixture = tmp_path / "phi2.txt"
    fixture.write_text("dim 4\nkind anti\n1 1 u\n1 3 x[1,2]\n2 2 u\n3 1 d[1,2]\n")
    malformed = tmp_path / "bad.txt"
    malformed.write_text("dim 4\n1 2 x[1,2] *\n")
    codes = {
        "verify pass": (_cli("verify", "--n", "2").returncode, 0),
        "expect mismatch": (_cli("pfaffian", str(fixture), "--expect", "u^2").returncode, 1),
        "expect match": (_cli("pfaffian", str(fixture), "--expect", "x[1,2] d[1,2] + u^2 + 1/2").returncode, 0),
        "malformed file": (_cli("pfaffian", str(malformed)).returncode, 2),
        "guard": (_cli("verify", "--n", "9").returncode, 2),
    }
    import skewcapelli.suite as suite_mod

    monkeypatch.setitem(suite_mod.PROPERTIES, "fixture.always_fails", lambda rng: (0, 1))
    codes["failing suite"] = (main(["suite", "--only", "fixture.always_fails"]), 1)
    capsys.readouterr()
    wrong = [k for k, (got, want) in codes.items() if got != want]
    ok = deterministic and not wrong
    report("14", ok, f"suite --seed 42 byte-identical: {deterministic}; exit codes wrong for {wrong or 'none'}")
    assert ok
