import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from skewcapelli import randgen
from skewcapelli.opmatrix import build_phi, is_alternating, is_anti_alternating
from skewcapelli.textio import TextParseError, parse_element, parse_matrix
from skewcapelli.weyl import WeylElement

X, D, U = WeylElement.x, WeylElement.d, WeylElement.u


def test_parse_basic():
    assert parse_element("x[1,2]", 2) == X(2, 1, 2)
    assert parse_element("d[1,2] x[1,2]", 2) == X(2, 1, 2) * D(2, 1, 2) + WeylElement.one(2)
    assert parse_element("-3/4 u^2 + 2", 1) == U(1, 2).scale(Fraction(-3, 4)) + WeylElement.const(1, 2)
    assert parse_element("(x[1,2] + d[1,3])^2", 3) == (X(3, 1, 2) + D(3, 1, 3)) ** 2
    assert parse_element("2 * x[1,2]*x[1,2]", 2) == X(2, 1, 2).scale(2) * X(2, 1, 2)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(1, 4))
def test_render_parse_round_trip(seed, n):
    e = randgen.weyl_element(random.Random(seed), n, terms=4, u_deg=3)
    assert parse_element(str(e), n) == e


@pytest.mark.parametrize("src,col", [
    ("x[1,2] + ", 9),
    ("x[1,2] $ 3", 8),
    ("x[2,1", 6),
    ("1/0", 3),
    ("x[1,5]", 1),
    ("", 1),
])
def test_parse_errors_carry_positions(src, col):
    with pytest.raises(TextParseError) as exc:
        parse_element(src, 3)
    assert exc.value.line == 1 and exc.value.column == col
    assert str(exc.value).startswith(f"line 1, column {col}:")


def test_matrix_file_alternating_completion():
    spec = parse_matrix("# sample\ndim 4\nn 2\n1 2 x[1,2]\n3 4 d[1,2]\n1 4 u\n")
    assert not spec.anti
    X_ = spec.matrix
    assert X_.dim == 4 and X_.n == 2
    assert X_.entry(2, 1) == -X(2, 1, 2) and X_.entry(4, 1) == -U(2)
    assert is_alternating(X_)


def test_matrix_file_anti_completion_rebuilds_phi():
    text = "dim 4\nkind anti\n1 1 u\n1 3 x[1,2]\n2 2 u\n3 1 d[1,2]\n"
    spec = parse_matrix(text)
    assert spec.anti and is_anti_alternating(spec.matrix)
    assert spec.matrix == build_phi(2)


@pytest.mark.parametrize("text,line,col", [
    ("1 2 x[1,2]\n", 1, 1),
    ("dim 4\n1 5 u\n", 2, 3),
    ("dim 4\n1 2 u\n1 2 u\n", 3, 1),
    ("dim 4\n1 2 x[1,2] +\n", 2, 13),
    ("dim four\n", 1, 5),
    ("dim 4\nkind skew\n", 2, 6),
    ("dim 4\n  1 2\n", 2, 3),
    ("", 1, 1),
    ("dim 3\nkind anti\n", 1, 1),
])
def test_matrix_file_errors(text, line, col):
    with pytest.raises(TextParseError) as exc:
        parse_matrix(text)
    assert (exc.value.line, exc.value.column) == (line, col)
