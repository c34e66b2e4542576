import itertools

import pytest

from gbaction.errors import DomainError
from gbaction.fixtures import parse_fixture
from gbaction.inverse_semigroup import ZERO, SemigroupAlgebra, verify_inverse_semigroup
from gbaction.labelled_algebra import (LabelledGraph, LabelledSemigroup, LabelledSpace,
                                       check_atom_singularity, ck_map, delta_set,
                                       generator_products, is_regular, truncated_points,
                                       validate_labelled, validate_labelled_space,
                                       verify_ck_relations)
from gbaction.partial_action import verify_partial_action

from conftest import LABELLED_FIXTURES, load


def space(name):
    return load(name).obj


# -- oracle for relative ranges and triple products ---------------------------

def raw_range(LG, A, word):
    """Vertices reached from the set A along edges spelling ``word``."""
    current = set(A)
    for a in word:
        current = {b for _, s, b, lab in LG.edges if s in current and lab == a}
    return current


def raw_product(L, x, y):
    LG = L.LG
    (alpha, A, beta), (gamma, B, delta) = x, y
    A, B = set(L.vertices_of(A)), set(L.vertices_of(B))
    if gamma[:len(beta)] == beta:
        rest = gamma[len(beta):]
        C = raw_range(LG, A, rest) & B
        return (alpha + rest, frozenset(C), delta) if C else None
    if beta[:len(gamma)] == gamma:
        rest = beta[len(gamma):]
        C = A & raw_range(LG, B, rest)
        return (alpha, frozenset(C), delta + rest) if C else None
    return None


def as_raw(L, a):
    if a is ZERO:
        return None
    alpha, A, beta = a
    return (alpha, frozenset(L.vertices_of(A)), beta)


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_triple_products_match_oracle(name):
    L = space(name)
    S = LabelledSemigroup(L)
    elems = S.nonzero(2)
    for a, b in itertools.product(elems, repeat=2):
        assert as_raw(L, S.mul(a, b)) == raw_product(L, a, b)


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_relative_ranges_match_oracle(name):
    L = space(name)
    for A in L.members:
        for a in L.LG.alphabet:
            expect = raw_range(L.LG, L.vertices_of(A), (a,))
            assert set(L.vertices_of(L.r(A, a))) == expect


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_semigroup_axioms(name):
    assert verify_inverse_semigroup(LabelledSemigroup(space(name)), depth=1).ok


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_fixture_is_valid(name):
    rep = validate_labelled(space(name), 2)
    assert rep.ok, rep.render()


def test_wlr_violation_is_reported_with_witness():
    rep = validate_labelled_space(space("wlr_invalid"))
    assert not rep.ok
    failure = rep.first_failure()
    assert "left-resolving" in failure.name
    assert failure.witness == ("{u}", "{v}", "a")


def test_explicit_family_must_be_closed():
    L = parse_fixture("lvertex u\nlvertex w\nledge e u w a\nfamily set s {u}\n").obj
    assert not validate_labelled_space(L).ok


def test_generated_family_is_closed():
    LG = LabelledGraph(["1", "2", "3"], [("e", "1", "2", "a"), ("f", "1", "3", "a")])
    L = LabelledSpace.generated(LG, [["1"]])
    assert validate_labelled_space(L).ok
    assert L.mask(["2", "3"]) in L.members


def test_regular_and_singular_sets():
    L = space("one_edge")
    u, w = L.mask(["u"]), L.mask(["w"])
    assert is_regular(L, u)
    assert not is_regular(L, w)          # a sink: the singular set
    assert delta_set(L, u) == ["a"]
    assert delta_set(L, w) == []
    assert check_atom_singularity(L).ok


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_ck_relations(name):
    images = ck_map(space(name))
    rep = verify_ck_relations(images)
    assert rep.ok, rep.render()
    assert generator_products(space(name), 3, images.algebra).ok


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_partial_action_axioms(name):
    A = SemigroupAlgebra(LabelledSemigroup(space(name)))
    assert verify_partial_action(A.bundle, 2).ok


@pytest.mark.parametrize("name,N", [("one_edge", 2), ("lumped", 2), ("four_vertex", 2)])
def test_tree_model_matches_truncated_tight_filters(name, N):
    S = LabelledSemigroup(space(name))
    model = S.tight_model()
    for x, minima in truncated_points(S, N).items():
        expected = {(alpha, A) for alpha, A, _ in minima}
        assert model.space.expand(model.V(x), N) == expected, S.format(x)


def test_unknown_vertex():
    L = space("one_edge")
    with pytest.raises(DomainError):
        L.mask(["nope"])
