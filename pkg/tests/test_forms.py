from itertools import combinations
from math import comb, factorial

import pytest

from skewcapelli import randgen
from skewcapelli.forms import (
    ExtElement,
    FormError,
    WordForm,
    cr_check,
    expansion_check,
    ext_commutator,
    falling,
    label_to_pos,
    mask_labels,
    normal_order_form,
    normal_ordered_binomial,
    omega,
    pf_via_forms,
    pos_to_label,
    shuffle_sign,
    tau,
    theta_commutation_check,
    theta_minus,
    theta_minus_words,
    theta_plus,
    theta_plus_words,
    theta_power_identity_check,
    two_form_of_matrix,
    two_tau_squared,
    volume_coefficient,
    volume_reassembly_check,
    wedge,
    wedge_power,
)
from skewcapelli.opmatrix import OpMatrix, build_phi, phi_transposed_block_form
from skewcapelli.pfaffian import PfaffianError, pf_anti
from skewcapelli.scalars import ScalarMatrix
from skewcapelli.textio import parse_element
from skewcapelli.weyl import WeylElement, c_coeff


def e(n, *labels, coeff=1):
    return ExtElement.basis(n, n, labels, coeff)


def test_label_positions():
    k = 3
    assert [pos_to_label(p, k) for p in range(6)] == [1, 2, 3, -3, -2, -1]
    for p in range(6):
        assert label_to_pos(pos_to_label(p, k), k) == p
    assert mask_labels(0b100101, k) == [1, 3, -1]
    with pytest.raises(FormError):
        label_to_pos(4, k)


def test_wedge_examples():
    n = 2
    assert wedge(e(n, 1), e(n, 2)) == e(n, 1, 2)
    assert wedge(e(n, 2), e(n, 1)) == -e(n, 1, 2)
    a = e(n, 1, coeff=WeylElement.d(n, 1, 2))
    b = e(n, 2, coeff=WeylElement.x(n, 1, 2))
    assert wedge(a, b) == e(n, 1, 2, coeff=parse_element("x[1,2] d[1,2] + 1", n))
    assert wedge(e(n, 1, -1), e(n, -1)).is_zero()


def test_text_form():
    n = 2
    w = e(n, 1, 2, -2, -1, coeff=WeylElement.x(n, 1, 2)) + e(n, 1, -1, coeff=2)
    assert str(w) == "e[1,-1] ⊗ (2)\ne[1,2,-2,-1] ⊗ (x[1,2])"
    assert w.to_json()["terms"][0]["e"] == [1, -1]


def random_form(rng, n, degree, central=False):
    out = ExtElement(n, n)
    labels = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    for _ in range(3):
        coeff = randgen.rational(rng) if central else randgen.weyl_element(rng, n, terms=2)
        out = out + ExtElement.basis(n, n, rng.sample(labels, degree), coeff)
    return out


def test_graded_anticommutativity(rng):
    for _ in range(40):
        n = rng.randint(2, 3)
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        a, b = random_form(rng, n, p, True), random_form(rng, n, q, True)
        assert wedge(a, b) == wedge(b, a).scale((-1) ** (p * q))


def test_wedge_associativity(rng):
    for _ in range(30):
        n = rng.randint(2, 3)
        a, b, c = (random_form(rng, n, rng.randint(0, 2)) for _ in range(3))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_named_two_forms_n2():
    n = 2
    assert theta_minus(n) == e(n, 1, 2, coeff=WeylElement.x(n, 1, 2).scale(2))
    assert theta_plus(n) == e(n, -2, -1, coeff=WeylElement.d(n, 1, 2).scale(2))
    assert tau(n) == e(n, 1, -1) + e(n, 2, -2)
    t2 = wedge(tau(n), tau(n))
    assert t2 == e(n, 1, 2, -2, -1).scale(2)


def test_tau_squared_pattern():
    for n in range(2, 6):
        expected = ExtElement(n, n)
        for i, j in combinations(range(1, n + 1), 2):
            expected = expected + e(n, i, j, -j, -i)
        assert wedge(tau(n), tau(n)) == expected.scale(2)


@pytest.mark.parametrize("n", range(1, 7))
def test_two_form_of_phi_is_omega(n):
    assert two_form_of_matrix(build_phi(n)) == omega(n)


@pytest.mark.parametrize("n", [2, 3])
def test_printed_block_layout_gives_a_different_form(n):
    assert two_form_of_matrix(phi_transposed_block_form(n)) != omega(n)


def test_two_form_small_cases():
    assert two_form_of_matrix(OpMatrix.zeros(2, 4)).is_zero()
    a = WeylElement.x(2, 1, 2) + WeylElement.u(2)
    z = WeylElement.zero(2)
    X = OpMatrix(2, [[a, z], [z, -a]])
    assert two_form_of_matrix(X) == ExtElement.basis(1, 2, (1, -1), a.scale(2))
    assert pf_via_forms(X) == a


def test_volume_coefficient():
    for n in range(1, 7):
        assert volume_coefficient(wedge_power(tau(n), n)) == WeylElement.const(n, factorial(n))
        assert volume_coefficient(ExtElement.one(n, n)).is_zero()
    n = 2
    X = build_phi(n)
    top = volume_coefficient(wedge_power(two_form_of_matrix(X), n))
    assert top == pf_anti(X, "restricted").scale(2 ** n * factorial(n))


@pytest.mark.parametrize("n", range(1, 6))
def test_pf_via_forms_matches_restricted(n):
    assert pf_via_forms(build_phi(n)) == pf_anti(build_phi(n), "restricted")


def test_pf_via_forms_random_anti(rng):
    for _ in range(20):
        dim = rng.choice((4, 6, 8))
        X = randgen.anti_alternating_opmatrix(rng, 3, dim)
        assert pf_via_forms(X) == pf_anti(X, "restricted")


def test_pf_via_forms_edge_cases():
    assert pf_via_forms(OpMatrix.zeros(2, 4)).is_zero()
    with pytest.raises(PfaffianError):
        pf_via_forms(OpMatrix.from_scalar(1, ScalarMatrix([[0, 1], [-1, 0]])))
    with pytest.raises(PfaffianError, match="guard"):
        pf_via_forms(build_phi(8))


@pytest.mark.parametrize("n", range(1, 6))
def test_commutation_relations(n):
    assert cr_check(n)


def test_commutation_n1_degenerate():
    assert theta_minus(1).is_zero() and theta_plus(1).is_zero()
    assert wedge(tau(1), tau(1)).is_zero()


def test_tau_is_central_on_the_span(rng):
    for n in range(1, 6):
        t = tau(n)
        for _ in range(3):
            a, b, c = (randgen.rational(rng) for _ in range(3))
            w = theta_minus(n).scale(a) + theta_plus(n).scale(b) + t.scale(c)
            assert ext_commutator(t, w).is_zero()


def test_theta_power_examples():
    n = 2
    assert wedge_power(theta_minus(n), 1) == e(n, 1, 2, coeff=WeylElement.x(n, 1, 2).scale(2))
    for n in range(0, 5):
        assert theta_power_identity_check(max(n, 1), 0)
    assert theta_power_identity_check(4, 2)
    with pytest.raises(FormError):
        theta_power_identity_check(3, 2)


@pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 5) for r in range(n // 2 + 1)])
def test_theta_power_identities(n, r):
    assert theta_power_identity_check(n, r)


def test_normal_ordering_examples():
    for n in (2, 3):
        tm, tp = theta_minus_words(n), theta_plus_words(n)
        assert normal_order_form(tp.wedge(tm)) == wedge(theta_minus(n), theta_plus(n))
        assert normal_order_form(WordForm.one(n, n)) == ExtElement.one(n, n)
        assert tp.wedge(tm).evaluate() == wedge(theta_plus(n), theta_minus(n))


@pytest.mark.parametrize("n,m", [(n, m) for n in (2, 3) for m in range(5)])
def test_normal_ordered_binomial(n, m):
    expected = ExtElement(n, n)
    for k in range(m + 1):
        expected = expected + wedge(wedge_power(theta_minus(n), k),
                                    wedge_power(theta_plus(n), m - k)).scale(comb(m, k))
    assert normal_ordered_binomial(n, m) == expected


def test_c_coeff_values():
    assert all(c_coeff(0, m) == 1 for m in range(25))
    assert c_coeff(1, 2) == 1
    assert c_coeff(2, 4) == 3
    assert c_coeff(-1, 3) == 0 and c_coeff(2, 3) == 0
    for m in range(21):
        for k in range(-1, m // 2 + 3):
            assert c_coeff(k, m + 1) == c_coeff(k, m) + (m + 2 - 2 * k) * c_coeff(k - 1, m)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 5) for m in range(6)])
def test_expansion(n, m):
    assert expansion_check(n, m)


def test_falling():
    assert falling(5, 0) == 1 and falling(5, 2) == 20 and falling(2, 3) == 0


@pytest.mark.parametrize("n", range(1, 5))
def test_theta_commutation(n):
    for a in range(6):
        for b in range(6 - a):
            assert theta_commutation_check(n, a, b)


def test_theta_commutation_small_explicit():
    n = 2
    lhs = wedge(theta_plus(n), theta_minus(n))
    assert lhs == wedge(theta_minus(n), theta_plus(n)) + two_tau_squared(n)
    with pytest.raises(FormError):
        theta_commutation_check(2, 9, 0)


def test_shuffle_sign_examples():
    assert shuffle_sign(range(1, 5), 4) == 1
    assert shuffle_sign([1], 2) == -1
    assert shuffle_sign([], 3) == 1
    with pytest.raises(FormError):
        shuffle_sign([5], 4)


def test_shuffle_mirror_even_subsets():
    for r in range(0, 5, 2):
        for I in combinations(range(1, 5), r):
            assert shuffle_sign(I, 4) == shuffle_sign(I, 4, mirrored=True)


def test_shuffle_mirror_odd_subsets_differ_by_parity_rule():
    for r in (1, 3):
        for I in combinations(range(1, 5), r):
            ratio = shuffle_sign(I, 4) * shuffle_sign(I, 4, mirrored=True)
            assert ratio == (-1) ** (len(I) * (4 - len(I)))


@pytest.mark.parametrize("n", range(1, 6))
def test_volume_reassembly(n):
    for r in range(n + 1):
        for I in combinations(range(1, n + 1), r):
            assert volume_reassembly_check(I, n)
