import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbaction.errors import DomainError
from gbaction.gba import (FiniteCofiniteSpace, PowerSpace, generated_subalgebra,
                          ideal_below, is_cover, is_ideal, spanned_dimension, whole_ideal,
                          zero_ideal)
from gbaction.graph_algebra import GraphSemigroup

from conftest import load

ATOMS = list("abcde")
P = PowerSpace(ATOMS)

subsets = st.sets(st.sampled_from(ATOMS))


@given(subsets, subsets, subsets)
def test_power_space_matches_python_sets(a, b, c):
    A, B, C = P.subset(a), P.subset(b), P.subset(c)
    assert set(P.labels(A & B)) == a & b
    assert set(P.labels(A | B)) == a | b
    assert set(P.labels(A - B)) == a - b
    assert (A <= B) == (a <= b)
    # distributivity and relative complement
    assert A & (B | C) == (A & B) | (A & C)
    assert (A - B) | (A & B) == A
    assert (A - B) & B == P.bottom()


def test_power_space_basics():
    assert P.top() == P.subset(ATOMS)
    assert len(P.elements()) == 32
    with pytest.raises(DomainError):
        P.subset(["z"])
    with pytest.raises(DomainError):
        P.subset("a") & PowerSpace(ATOMS).subset("a")


# finite/cofinite: compare against membership on a window of N

WINDOW = 12
finite_sets = st.sets(st.integers(0, 8), max_size=5)
fc_values = st.tuples(finite_sets, st.booleans())


def members(payload):
    s, co = payload
    return {i for i in range(WINDOW) if (i in s) != co}


@given(fc_values, fc_values)
def test_finite_cofinite_matches_window(p, q):
    F = FiniteCofiniteSpace(cofinite=True)
    A = F.co(p[0]) if p[1] else F.finite(p[0])
    B = F.co(q[0]) if q[1] else F.finite(q[0])
    assert members((A & B).payload) == members(p) & members(q)
    assert members((A | B).payload) == members(p) | members(q)
    assert members((A - B).payload) == members(p) - members(q)
    assert (A <= B) == (members(p) <= members(q))


def test_finite_only_mode_has_no_top():
    F = FiniteCofiniteSpace(cofinite=False)
    assert F.top() is None
    with pytest.raises(DomainError):
        F.co([1])
    assert F.finite([1, 2]) | F.finite([3]) == F.finite([1, 2, 3])


def test_cofinite_top():
    F = FiniteCofiniteSpace(cofinite=True)
    assert F.top() == F.co([])
    assert F.co([1]) | F.finite([1]) == F.top()


# cylinder trees, checked against sets of words of a fixed length

ROSE = GraphSemigroup(load("rose2").obj)
TREE = ROSE.tight_model().space
N = 5


def words_with_prefix(prefix):
    return {"".join(w) for w in itertools.product("ef", repeat=N) if "".join(w).startswith(prefix)}


def as_words(a):
    return {"".join(word) for word, _ in TREE.expand(a, N)}


prefixes = st.lists(st.text("ef", max_size=3), max_size=3)


def element(prefs):
    return TREE.from_nodes([(tuple(p), "v") for p in prefs])


def oracle(prefs):
    out = set()
    for p in prefs:
        out |= words_with_prefix(p)
    return out


@given(prefixes, prefixes)
@settings(max_examples=150)
def test_cylinder_ops_match_word_sets(p, q):
    A, B = element(p), element(q)
    assert as_words(A) == oracle(p)
    assert as_words(A & B) == oracle(p) & oracle(q)
    assert as_words(A | B) == oracle(p) | oracle(q)
    assert as_words(A - B) == oracle(p) - oracle(q)
    assert (A <= B) == (oracle(p) <= oracle(q))


@given(prefixes, prefixes)
@settings(max_examples=150)
def test_cylinder_form_is_canonical(p, q):
    assert (element(p) == element(q)) == (oracle(p) == oracle(q))


def test_full_sibling_set_collapses_to_parent():
    both = element(["e", "f"])
    assert both == TREE.top()
    assert TREE.nodes(both) == [((), "v")]


def test_pieces_are_canonical():
    for piece in TREE.pieces(TREE.top(), 2):
        assert TREE.nodes(piece)[0][0] in {("e", "e"), ("e", "f"), ("f", "e"), ("f", "f")}


# ideals and helpers


def test_ideals():
    I = ideal_below(P, [P.subset("ab")])
    assert I.contains(P.subset("a"))
    assert not I.contains(P.subset("c"))
    assert I.top_element() == P.subset("ab")
    assert whole_ideal(P).is_whole and zero_ideal(P).is_zero
    J = I.meet(ideal_below(P, [P.subset("bc")]))
    assert J.top_element() == P.subset("b")
    down = [P.subset(s) for s in ("", "a", "b", "ab")]
    assert is_ideal(P, down)
    assert not is_ideal(P, down[:3])


def test_cover_and_generation():
    assert is_cover(P, [P.subset("a"), P.subset("b")], P.subset("ab"))
    assert not is_cover(P, [P.subset("a")], P.subset("ab"))
    gen = generated_subalgebra(P, [P.subset("ab"), P.subset("bc")])
    # atoms a, b, c of the generated ring give 8 elements
    assert len(gen) == 8


def rank_by_elimination(vectors):
    rows = [list(v) for v in vectors]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


@given(st.lists(subsets, max_size=6))
def test_spanned_dimension_matches_linear_rank(family):
    closed = {frozenset(s) for s in family}
    changed = True
    while changed:
        changed = False
        for x, y in itertools.combinations(list(closed), 2):
            if x & y not in closed:
                closed.add(x & y)
                changed = True
    vectors = [[1.0 if a in s else 0.0 for a in ATOMS] for s in closed]
    assert spanned_dimension(P, [P.subset(s) for s in closed]) == rank_by_elimination(vectors)
