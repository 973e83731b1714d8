import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hcg.cyclo import (CycloElem, DivisionByZero, LevelMismatch, NotCoprime, ParseError, cyclotomic_poly,
                       embed, euler_phi, field_arith, format_elem, galois, parse_elem, precision_mode)

LEVELS = [2, 3, 4, 5, 7, 8, 9, 12, 15]

fractions_ = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def elems(draw, N=None):
    N = N or draw(st.sampled_from(LEVELS))
    cs = draw(st.lists(fractions_, min_size=euler_phi(N), max_size=euler_phi(N)))
    return CycloElem(N, cs)


@st.composite
def elem_pairs(draw):
    N = draw(st.sampled_from(LEVELS))
    return draw(elems(N)), draw(elems(N)), draw(elems(N))


def test_euler_phi_small():
    assert [euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


@pytest.mark.parametrize("N", range(1, 31))
def test_cyclotomic_poly_degree_and_roots(N):
    p = cyclotomic_poly(N)
    assert len(p) - 1 == euler_phi(N)
    z = cmath.exp(2j * math.pi / N)
    assert abs(sum(c * z ** k for k, c in enumerate(p))) < 1e-9


def test_cyclotomic_known():
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    # first coefficient of absolute value 2 appears at N = 105
    assert max(abs(c) for c in cyclotomic_poly(105)) == 2


@settings(max_examples=60, deadline=None)
@given(elem_pairs())
def test_field_axioms(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CycloElem.zero(a.N)
    if not b.is_zero():
        assert (a / b) * b == a
        assert b * b.inverse() == CycloElem.one(b.N)


@settings(max_examples=40, deadline=None)
@given(elem_pairs())
def test_embedding_is_a_ring_map(triple):
    a, b, _ = triple
    for k in (1, a.N - 1):
        if math.gcd(k, a.N) != 1:
            continue
        assert abs(embed(a * b, k) - embed(a, k) * embed(b, k)) < 1e-9
        assert abs(embed(a + b, k) - embed(a, k) - embed(b, k)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(elem_pairs())
def test_galois_is_an_automorphism(triple):
    a, b, _ = triple
    N = a.N
    for c in range(1, N + 1):
        if math.gcd(c, N) != 1:
            continue
        assert galois(a * b, c) == galois(a, c) * galois(b, c)
        assert abs(embed(galois(a, c)) - embed(a, c)) < 1e-9


def test_root_powers():
    w = CycloElem.root(7)
    assert w ** 7 == CycloElem.one(7)
    assert sum((w ** k for k in range(7)), CycloElem.zero(7)).is_zero()
    assert galois(w, 3) == w ** 3
    assert CycloElem.root(12, 5) == CycloElem.root(12) ** 5


def test_norm_of_one_minus_root_is_p():
    # prod over conjugates of (1 - w) equals p for prime p
    for p in (3, 5, 7):
        x = CycloElem.one(p) - CycloElem.root(p)
        prod = CycloElem.one(p)
        for c in range(1, p):
            prod = prod * galois(x, c)
        assert prod == CycloElem.rational(p, p)


@settings(max_examples=60, deadline=None)
@given(elems())
def test_format_parse_roundtrip(x):
    assert parse_elem(format_elem(x), x.N) == x


def test_parse_examples():
    assert parse_elem("1/2 + 3*w", 5) == CycloElem.rational(5, Fraction(1, 2)) + 3 * CycloElem.root(5)
    assert parse_elem("-w^2", 5) == -CycloElem.root(5, 2)
    with pytest.raises(ParseError):
        parse_elem("", 5)
    with pytest.raises(ParseError):
        parse_elem("3*", 5)


def test_errors():
    with pytest.raises(LevelMismatch):
        field_arith(CycloElem.one(3), CycloElem.one(5), "add")
    with pytest.raises(DivisionByZero):
        CycloElem.zero(5).inverse()
    with pytest.raises(DivisionByZero):
        field_arith(CycloElem.one(5), CycloElem.zero(5), "div")
    with pytest.raises(NotCoprime):
        galois(CycloElem.root(6), 2)
    with pytest.raises(NotCoprime):
        embed(CycloElem.root(6), 3)


def test_immutable():
    x = CycloElem.one(5)
    with pytest.raises(AttributeError):
        x.N = 3


def test_precision_switch(monkeypatch):
    monkeypatch.setenv("HCG_PRECISION", "extended")
    assert precision_mode() == "extended"
    z = embed(CycloElem.root(7))
    assert abs(complex(z) - cmath.exp(2j * math.pi / 7)) < 1e-15
    monkeypatch.setenv("HCG_PRECISION", "quad")
    with pytest.raises(ValueError):
        precision_mode()
