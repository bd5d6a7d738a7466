from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rotiet.exactmath import (LinearSystem, dot, format_rational, in_row_space, nullspace_basis,
                              parse_rational, positive_solution, positivity_obstruction, rank)
from rotiet.lengths import cycle_system
from rotiet.scheme import Scheme


def sigma_rows():
    return cycle_system(Scheme.from_two_row([("gad", "db"), ("b", "ag")], alphabet="abgd"))


def test_trivial_single_variable():
    sys = LinearSystem(("a",), ({"a": 0},))
    assert positive_solution(sys) == {"a": 1}


def test_sigma_rows_have_witness_and_known_vector():
    sys = sigma_rows()
    w = positive_solution(sys)
    assert w is not None and all(x >= 1 for x in w.values())
    assert all(x == 0 for x in sys.evaluate(w))
    assert all(x == 0 for x in sys.evaluate({"a": 1, "b": 2, "g": 1, "d": 1}))


def test_empty_begin_side_row_is_infeasible():
    sys = LinearSystem(("a", "b"), ({"a": 1, "b": 1},))
    assert positive_solution(sys) is None
    assert positivity_obstruction(sys) == {"a": 1, "b": 1}


def test_row_space_examples():
    empty = LinearSystem(("a", "b"), ())
    assert in_row_space({}, empty)
    one = LinearSystem(("a", "b"), ({"a": 1, "b": -1},))
    assert in_row_space({"a": 2, "b": -2}, one)
    assert not in_row_space({"a": 1}, one)
    assert not in_row_space({"a": 1, "b": -1}, sigma_rows())


def test_nullspace_sizes():
    assert len(nullspace_basis(LinearSystem(("a", "b"), ()))) == 2
    basis = nullspace_basis(LinearSystem(("a", "b"), ({"a": 1, "b": -1},)))
    assert len(basis) == 1 and basis[0]["a"] == basis[0]["b"] != 0
    assert len(nullspace_basis(sigma_rows())) == 3


def test_rejects_unknown_variable():
    with pytest.raises(ValueError):
        LinearSystem(("a",), ({"b": 1},))


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-3/6", Fraction(-1, 2)), ("+7/2", Fraction(7, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "1.5", "1/-2", "a", "1/", "1 / 2"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational_canonical():
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    assert format_rational(Fraction(5)) == "5"


rows = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=0, max_size=4)


def _system(raw):
    names = ("p", "q", "r", "s")
    return LinearSystem(names, tuple({n: c for n, c in zip(names, row)} for row in raw))


@settings(max_examples=200, deadline=None)
@given(rows)
def test_rank_and_nullspace_match_sympy(raw):
    sys = _system(raw)
    m = sympy.Matrix(raw) if raw else sympy.zeros(0, 4)
    assert rank(sys) == m.rank()
    basis = nullspace_basis(sys)
    assert len(basis) == 4 - m.rank()
    for z in basis:
        assert all(x == 0 for x in sys.evaluate(z))


@settings(max_examples=200, deadline=None)
@given(rows)
def test_positivity_is_decided_with_a_certificate(raw):
    """Either a witness or a Gordan-type obstruction exists, never both."""
    sys = _system(raw)
    w = positive_solution(sys)
    obstruction = positivity_obstruction(sys)
    assert (w is None) != (obstruction is None)
    if w is not None:
        assert all(x >= 1 for x in w.values())
        assert all(x == 0 for x in sys.evaluate(w))
        for z in nullspace_basis(sys):
            nudged = {k: w[k] + Fraction(1, 1000) * z[k] for k in w}
            assert all(x == 0 for x in sys.evaluate(nudged))
    else:
        assert all(c >= 0 for c in obstruction.values()) and any(c > 0 for c in obstruction.values())
        assert in_row_space(obstruction, sys)


@settings(max_examples=150, deadline=None)
@given(rows, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_row_space_agrees_with_nullspace(raw, target):
    sys = _system(raw)
    t = dict(zip(sys.variables, target))
    assert in_row_space(t, sys) == all(dot(t, z) == 0 for z in nullspace_basis(sys))
