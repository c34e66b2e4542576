import itertools

import pytest

from gbaction.errors import DomainError
from gbaction.graph_algebra import GraphSemigroup
from gbaction.groups import FiniteGroup, FreeGroup, FreeHomomorphism
from gbaction.inverse_semigroup import (STAR, AntichainSemilattice, FiniteInverseSemigroup,
                                        Grading, SemigroupAlgebra, compute_Eg, compute_Eg_closed,
                                        natural_order, phi_g, regrade,
                                        semigroup_orthogonality_checks, subsemigroup_inclusion,
                                        unitization_report, unitize, verify_inverse_semigroup,
                                        verify_nonvanishing, verify_pure_grading)
from gbaction.labelled_algebra import LabelledSemigroup

from conftest import GRAPH_FIXTURES, LABELLED_FIXTURES, load

MATRIX = load("matrix_units").obj


def test_matrix_units_axioms_and_grading():
    assert verify_inverse_semigroup(MATRIX).ok
    assert MATRIX.star("e12") == "e21"
    assert MATRIX.mul("e12", "e21") == "e11"
    assert verify_pure_grading(MATRIX, MATRIX.canonical_grading()).ok


def test_trivial_grading_of_matrix_units_is_not_pure():
    trivial = Grading(FiniteGroup.trivial(), lambda s: FiniteGroup.trivial().identity)
    rep = verify_pure_grading(MATRIX, trivial)
    assert not rep.ok


def test_non_inverse_table_is_rejected():
    # a left-zero band: every element is its own inverse and also each other's
    names = ["0", "a", "b"]
    table = [[0, 0, 0], [0, 1, 1], [0, 2, 2]]
    S = FiniteInverseSemigroup(names, table, "0")
    rep = verify_inverse_semigroup(S)
    assert not rep.ok


def test_natural_order_on_matrix_units():
    assert natural_order(MATRIX, "e11", "e11")
    assert not natural_order(MATRIX, "e11", "e22")
    assert natural_order(MATRIX, "0", "e12")


def raw_Eg(S, grading, g, depth):
    """Idempotents below s s* for some s of degree g, straight from the products."""
    elems = S.nonzero(depth)
    idem = [x for x in elems if S.mul(x, x) == x]
    out = {S.zero}
    for s in elems:
        if grading(s) != g:
            continue
        top = S.mul(s, S.star(s))
        out.update(x for x in idem if S.mul(x, top) == x)
    return out


def test_Eg_for_matrix_units():
    grading = MATRIX.canonical_grading()
    for g in (0, 1):
        assert compute_Eg(MATRIX, grading, g) == raw_Eg(MATRIX, grading, g, None)
    assert compute_Eg(MATRIX, grading, 1) == {"0", "e11", "e22"}


@pytest.mark.parametrize("name", GRAPH_FIXTURES)
def test_graph_Eg_closed_form_matches_brute_force(name):
    S = GraphSemigroup(load(name).obj)
    grading = S.canonical_grading()
    depth = 2 if name == "rose2" else 3
    for g in S.group.elements(2):
        brute = raw_Eg(S, grading, g, depth)
        assert compute_Eg_closed(S, g, depth) & brute == brute
        assert compute_Eg(S, grading, g, depth) == brute


@pytest.mark.parametrize("name", LABELLED_FIXTURES)
def test_labelled_Eg_closed_form_matches_brute_force(name):
    S = LabelledSemigroup(load(name).obj)
    grading = S.canonical_grading()
    for g in S.group.elements(1):
        brute = raw_Eg(S, grading, g, 2)
        assert compute_Eg_closed(S, g, 2) & brute == brute
        assert compute_Eg(S, grading, g, 2) == brute


def test_phi_on_single_edge():
    S = GraphSemigroup(load("edge_vw").obj)
    grading = S.canonical_grading()
    e = S.group.letter("e")
    assert phi_g(S, grading, e, S.pair("w")) == S.pair("e", "e")
    assert phi_g(S, grading, S.group.inv(e), S.pair("e", "e")) == S.pair("w")
    with pytest.raises(DomainError):
        phi_g(S, grading, e, S.pair("v"))


def test_phi_matches_bundle_on_pieces():
    S = GraphSemigroup(load("toeplitz").obj)
    A = SemigroupAlgebra(S)
    grading = A.grading
    for g in S.group.elements(2):
        for x in compute_Eg(S, grading, S.group.inv(g), 3):
            if S.is_zero(x):
                continue
            y = phi_g(S, grading, g, x, 3)
            assert A.bundle.phi(g)(A.model.V(x)) == A.model.V(y)


@pytest.mark.parametrize("name", GRAPH_FIXTURES + LABELLED_FIXTURES)
def test_orthogonal_and_semi_saturated(name):
    obj = load(name).obj
    S = GraphSemigroup(obj) if name in GRAPH_FIXTURES else LabelledSemigroup(obj)
    flags = semigroup_orthogonality_checks(S, bound=3 if name != "rose2" else 2)
    assert flags.orthogonal and flags.semi_saturated


@pytest.mark.parametrize("name", ["edge_vw", "toeplitz", "one_edge", "matrix_units", "antichain"])
def test_nonvanishing(name):
    fx = load(name)
    obj = fx.obj
    if fx.kind == "graph":
        obj = GraphSemigroup(obj)
    elif fx.kind == "labelled":
        obj = LabelledSemigroup(obj)
    assert verify_nonvanishing(SemigroupAlgebra(obj)).ok


# unitization

def test_unitized_semigroup():
    U = unitize(MATRIX)
    assert U.mul(STAR, "e12") == "e12"
    assert U.star(STAR) is STAR
    assert verify_inverse_semigroup(U).ok


def test_antichain_unitization():
    rep = unitization_report(AntichainSemilattice(), depth=4)
    names = {c.name for c in rep.checks}
    assert rep.ok, rep.render()
    assert {"L(S) non-unital", "inclusion is proper", "image is essential"} <= names


@pytest.mark.parametrize("name", ["finite_chain", "matrix_units"])
def test_finite_unitization_is_equality(name):
    rep = unitization_report(load(name).obj)
    assert rep.ok
    assert "inclusion is an equality" in {c.name for c in rep.checks}


def test_subsemigroup_inclusion_of_chains():
    pair = FiniteInverseSemigroup.from_semilattice(load("pair").obj.build())
    chain = FiniteInverseSemigroup.from_semilattice(load("chain").obj.build())
    result = subsemigroup_inclusion(pair, chain, {"0": "0", "x": "b"})
    assert result.report.ok, result.report.render()
    bad = subsemigroup_inclusion(pair, chain, {"0": "a", "x": "b"})
    assert not bad.report.ok


# regrading

def to_integers(S):
    Z = FreeGroup(["n"])
    return FreeHomomorphism(S.group, Z, {a: Z.letter("n") for a in S.group.alphabet})


@pytest.mark.parametrize("name", ["edge_vw", "loop", "chain3", "toeplitz"])
def test_regrade_to_integers(name):
    S = GraphSemigroup(load(name).obj)
    result = regrade(S, to_integers(S), depth=3, samples=200)
    assert result.report.ok, result.report.render()


def test_regrade_rejects_impure_target():
    S = GraphSemigroup(load("rose2").obj)
    with pytest.raises(DomainError):
        regrade(S, to_integers(S), depth=2, samples=20)
