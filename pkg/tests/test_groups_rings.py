from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbaction.errors import DomainError, ParseError
from gbaction.groups import FiniteGroup, FreeGroup, FreeHomomorphism
from gbaction.rings import INTEGERS, RATIONALS, Ring

F = FreeGroup(["a", "b"])
raw_words = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1])), max_size=8)


def is_reduced(w):
    return all(w[i][0] != w[i + 1][0] or w[i][1] == w[i + 1][1] for i in range(len(w) - 1))


@given(raw_words, raw_words, raw_words)
def test_free_group_axioms(x, y, z):
    u, v, w = F.reduce(x), F.reduce(y), F.reduce(z)
    assert is_reduced(u)
    assert F.mul(F.mul(u, v), w) == F.mul(u, F.mul(v, w))
    assert F.mul(u, F.inv(u)) == F.identity
    assert F.mul(u, F.identity) == u


@given(raw_words)
def test_format_parse_round_trip(x):
    u = F.reduce(x)
    assert F.parse(F.format(u)) == u


def test_elements_and_lengths():
    # reduced words of length <= 2 on two letters: 1 + 4 + 12
    assert len(F.elements(2)) == 17
    assert F.length(F.parse("a b^-1")) == 2


def test_cyclic_group():
    C = FiniteGroup.cyclic(3)
    assert C.mul(2, 2) == 1 and C.inv(1) == 2
    assert C.format(C.parse("2")) == "2"


def test_homomorphism_to_integers():
    Z = FreeGroup(["n"])
    f = FreeHomomorphism(F, Z, {"a": Z.letter("n"), "b": Z.letter("n")})
    assert f(F.parse("a b^-1")) == Z.identity
    assert f(F.parse("a a b")) == Z.positive("nnn")
    with pytest.raises(DomainError):
        FreeHomomorphism(F, Z, {"a": Z.letter("n")})


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(2, 9))
def test_modular_ring(a, b, n):
    R = Ring("mod", n)
    assert R.add(R(a), R(b)) == (a + b) % n
    assert R.mul(R(a), R(b)) == (a * b) % n
    assert R.is_zero(R.add(R(a), R.neg(R(a))))


def test_ring_parsing():
    assert Ring.parse("integers") == INTEGERS
    assert Ring.parse("rationals") == RATIONALS
    assert Ring.parse("mod 7") == Ring("mod", 7)
    with pytest.raises(ParseError):
        Ring.parse("mod:x")
    with pytest.raises(DomainError):
        Ring("mod", 1)
    assert RATIONALS(Fraction(1, 2)) + RATIONALS(Fraction(1, 2)) == 1
