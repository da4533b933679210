from __future__ import annotations

import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from alphaflow import ffield
from alphaflow.errors import CompositeP, DegreeTooLarge, DivisionByZero, EvenP, FieldTooLarge
from alphaflow.ffield import (chi1, delta, eta, field_make, field_of_order, gauss_direct,
                              gauss_formula, is_irreducible, norm, prime_power, trace)

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)]


def test_prime_field_has_no_modulus():
    fp = field_make(5, 1)
    assert fp.q == 5 and fp.modulus is None


def test_f9_modulus_is_x2_plus_1():
    assert field_make(3, 2).modulus == (1, 0, 1)


@pytest.mark.parametrize("p,d,exc", [(4, 1, CompositeP), (2, 3, EvenP), (3, 25, DegreeTooLarge)])
def test_bad_field_parameters(p, d, exc):
    with pytest.raises(exc):
        field_make(p, d)


def test_field_of_order():
    assert field_of_order(9).d == 2
    assert prime_power(12) is None
    with pytest.raises(CompositeP):
        field_of_order(15)


def test_table_cap():
    fp = field_of_order(2053)
    with pytest.raises(FieldTooLarge):
        fp.tables()
    # scalar arithmetic still works without tables
    assert fp.mul(2, fp.inv(2)) == 1


def test_small_arithmetic(f5, f9):
    assert f5(3) + f5(4) == f5(2)
    assert f5(2).inv() == f5(3)
    x = f9((0, 1))
    assert x * x == f9(2)
    assert ffield.mul(x, x) == f9(-1)


def test_inverse_of_zero(f5):
    with pytest.raises(DivisionByZero):
        f5(0).inv()


def test_eta_examples(f5):
    assert eta(f5(0)) == 0
    assert eta(f5(1)) == 1
    assert eta(f5(2)) == -1


def test_trace_examples(f5, f9):
    assert trace(f5(3)) == f5(3)
    assert trace(f9((0, 1))) == f9(0)
    assert trace(f9(0)) == f9(0)


def test_chi1_examples(f5):
    assert chi1(f5(0)) == 1
    assert cmath.isclose(chi1(f5(1)), cmath.exp(2j * math.pi / 5), abs_tol=1e-12)
    assert abs(sum(chi1(x) for x in f5.elements())) < 1e-9


def test_norm_delta(f5):
    assert norm(f5(0)) == 0 and delta(f5(0)) == 1
    assert norm(f5(3)) == 1 and delta(f5(3)) == 0


@pytest.mark.parametrize("q,expected", [
    (5, math.sqrt(5)), (3, 1j * math.sqrt(3)), (9, 3), (7, 1j * math.sqrt(7)), (25, -5), (27, -1j * 27**0.5)])
def test_gauss_formula(q, expected):
    assert abs(gauss_formula(field_of_order(q)) - expected) < 1e-9


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125])
def test_gauss_direct_matches_formula(q):
    fp = field_of_order(q)
    assert abs(gauss_direct(fp) - gauss_formula(fp)) < 1e-6


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_modulus_is_irreducible_and_smallest(p, d):
    fp = field_make(p, d)
    if d == 1:
        return
    assert is_irreducible(fp.modulus, p)
    # no lexicographically smaller monic polynomial of degree d is irreducible
    import itertools
    target = fp.modulus[:d]
    for lower in itertools.product(range(p), repeat=d):
        if lower == target:
            break
        assert not is_irreducible(lower + (1,), p)


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_multiplicative_group_and_squares(p, d):
    fp = field_make(p, d)
    q = fp.q
    nonzero = list(range(1, q))
    # x^(q-1) = 1 for all nonzero x: the reduction really produces a field
    assert all(fp.pow(x, q - 1) == 1 for x in nonzero)
    squares = {fp.mul(x, x) for x in nonzero}
    assert len(squares) == (q - 1) // 2
    assert all(fp.eta(x) == (1 if x in squares else -1) for x in nonzero)
    assert fp.eta_minus_one == (1 if q % 4 == 1 else -1)


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_trace_is_additive_and_onto_prime_field(p, d):
    fp = field_make(p, d)
    values = [fp.trace(x) for x in range(fp.q)]
    assert set(values) == set(range(p))
    assert all(values.count(c) == fp.q // p for c in range(p))


fields = st.sampled_from([field_make(p, d) for p, d in SMALL_FIELDS])


@settings(max_examples=200, deadline=None)
@given(fields, st.data())
def test_field_axioms(fp, data):
    a, b, c = (data.draw(st.integers(0, fp.q - 1)) for _ in range(3))
    assert fp.add(a, b) == fp.add(b, a)
    assert fp.mul(a, b) == fp.mul(b, a)
    assert fp.mul(a, fp.add(b, c)) == fp.add(fp.mul(a, b), fp.mul(a, c))
    assert fp.add(fp.add(a, b), c) == fp.add(a, fp.add(b, c))
    assert fp.mul(fp.mul(a, b), c) == fp.mul(a, fp.mul(b, c))
    assert fp.sub(fp.add(a, b), b) == a
    assert fp.add(a, fp.neg(a)) == 0
    if a:
        assert fp.mul(a, fp.inv(a)) == 1
    assert fp.eta(fp.mul(a, b)) == fp.eta(a) * fp.eta(b)
    assert fp.trace(fp.add(a, b)) == (fp.trace(a) + fp.trace(b)) % fp.p


@settings(max_examples=100, deadline=None)
@given(fields, st.data())
def test_chi1_is_additive_character(fp, data):
    a, b = (fp.from_code(data.draw(st.integers(0, fp.q - 1))) for _ in range(2))
    assert cmath.isclose(chi1(a + b), chi1(a) * chi1(b), abs_tol=1e-9)


@settings(max_examples=100, deadline=None)
@given(fields, st.data())
def test_tables_agree_with_scalar_ops(fp, data):
    t = fp.tables()
    a, b = (data.draw(st.integers(0, fp.q - 1)) for _ in range(2))
    assert t.add[a, b] == fp.add(a, b)
    assert t.sub[a, b] == fp.sub(a, b)
    assert t.mul[a, b] == fp.mul(a, b)
    assert t.eta[a] == fp.eta(a)
    assert t.trace[a] == fp.trace(a)
