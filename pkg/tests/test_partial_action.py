from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from gbaction.errors import DomainError
from gbaction.gba import PowerSpace, identity_map, ideal_below
from gbaction.groups import FreeGroup
from gbaction.partial_action import (PartialActionBundle, is_orthogonal, is_semi_saturated,
                                     verify_action_morphism, verify_partial_action)

F = FreeGroup(["x"])


def translation_bundle(points, span, drop=()):
    """Restriction of k -> k + n to the finite set ``points``."""
    P = PowerSpace(sorted(points))
    X = set(points)
    ideals, maps = {}, {}
    for n in range(1, span + 1):
        if n in drop:
            continue
        t = F.positive(["x"] * n)
        fwd_dom = sorted(X & {k - n for k in X})
        ideals[t] = ideal_below(P, [P.subset(k + n for k in fwd_dom)])
        ideals[F.inv(t)] = ideal_below(P, [P.subset(fwd_dom)])

        def fwd(a, n=n):
            return P.subset(k + n for k in P.labels(a))

        def bwd(a, n=n):
            return P.subset(k - n for k in P.labels(a))

        maps[t] = (fwd, bwd)
    return PartialActionBundle.from_tables(F, P, ideals, maps, name="translation")


def test_translation_on_interval_is_a_partial_action():
    B = translation_bundle(range(5), 4)
    rep = verify_partial_action(B, depth=4)
    assert rep.ok, rep.render()
    assert is_semi_saturated(B, 4)
    assert is_orthogonal(B)


@given(st.sets(st.integers(0, 7), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_restricted_translations_are_partial_actions(points):
    B = translation_bundle(points, 7)
    assert verify_partial_action(B, depth=3).ok


def test_missing_ideal_breaks_the_axioms():
    B = translation_bundle(range(5), 4, drop=(2,))
    rep = verify_partial_action(B, depth=3)
    assert not rep.ok
    assert "axiom" in rep.first_failure().name


def test_from_tables_checks_inverses():
    P = PowerSpace([0, 1])
    t = F.letter("x")
    with pytest.raises(DomainError):
        PartialActionBundle.from_tables(
            F, P, {t: ideal_below(P, [P.subset([1])]), F.inv(t): ideal_below(P, [P.subset([0])])},
            {t: (lambda a: P.subset([1]) if a else a, lambda a: a)})


def test_apply_outside_domain():
    B = translation_bundle(range(3), 2)
    P = B.space
    with pytest.raises(DomainError):
        B.apply(F.letter("x"), P.subset([2]))
    assert B.apply(F.letter("x"), P.subset([0])) == P.subset([1])


def test_identity_is_an_action_morphism():
    B = translation_bundle(range(4), 3)
    assert verify_action_morphism(identity_map(B.space), B, B, depth=3).ok


def test_semi_saturation_can_fail():
    # I_x is small but I_xx is everything below the top: not semi-saturated
    P = PowerSpace([0, 1, 2])
    x = F.letter("x")
    xx = F.positive("xx")
    ideals = {x: ideal_below(P, [P.subset([1])]), F.inv(x): ideal_below(P, [P.subset([0])]),
              xx: ideal_below(P, [P.subset([1, 2])]), F.inv(xx): ideal_below(P, [P.subset([0, 1])])}
    swap = {0: 1, 1: 2}
    back = {1: 0, 2: 1}
    maps = {x: (lambda a: P.subset([1]) if a else a, lambda a: P.subset([0]) if a else a),
            xx: (lambda a: P.subset(swap[k] for k in P.labels(a)),
                 lambda a: P.subset(back[k] for k in P.labels(a)))}
    B = PartialActionBundle.from_tables(F, P, ideals, maps, check_inverses=False)
    assert not is_semi_saturated(B, 2)
