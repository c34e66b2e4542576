import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gbaction.errors import BoundExceeded, DomainError
from gbaction.tight_filters import (Inclusion, Semilattice, check_sufficient_conditions,
                                    enumerate_filters, enumerate_filters_bruteforce,
                                    is_filter, is_finite_cover, is_tight_filter,
                                    is_tight_filter_bruteforce, is_ultrafilter,
                                    preserves_finite_covers, preserves_finite_covers_bruteforce,
                                    restrict_filter, tc, tc_inclusion, tight_space)


def close_under_meets(family):
    sets = {frozenset(), *map(frozenset, family)}
    while True:
        extra = {a & b for a in sets for b in sets} - sets
        if not extra:
            return sets
        sets |= extra


@st.composite
def small_semilattices(draw, max_size=8):
    family = draw(st.lists(st.sets(st.integers(0, 4), min_size=1), max_size=6))
    sets = close_under_meets(family)
    assume(len(sets) <= max_size)
    return Semilattice.from_sets(sets)


def maximal_filters(P, filters):
    return {F for F in filters if not any(set(F) < set(G) for G in filters)}


def diamond():
    return Semilattice.from_sets([(), (1,), (2,), (1, 2)], names=["0", "a", "b", "t"])


def test_diamond_counts():
    P = diamond()
    filters = enumerate_filters(P)
    assert len(filters) == 3
    assert sum(is_ultrafilter(P, F) for F in filters) == 2
    assert sum(is_tight_filter(P, F) for F in filters) == 2
    # {t} alone is a filter but neither ultra nor tight
    top = P.idx("t")
    assert not is_tight_filter(P, (top,))


def test_chain_and_pair():
    chain = Semilattice.from_sets([(), (1,), (1, 2)])
    assert [F for F in enumerate_filters(chain) if is_tight_filter(chain, F)] == [(1, 2)]
    pair = Semilattice.from_sets([(), (1,)])
    assert len(tight_space(pair)) == 1


@given(small_semilattices())
@settings(max_examples=200, deadline=None)
def test_filter_enumeration_matches_bruteforce(P):
    assert set(enumerate_filters(P)) == set(enumerate_filters_bruteforce(P))


@given(small_semilattices())
@settings(max_examples=200, deadline=None)
def test_tight_equals_bruteforce_equals_ultra(P):
    filters = enumerate_filters_bruteforce(P)
    ultra = maximal_filters(P, filters)
    for F in filters:
        fast = is_tight_filter(P, F)
        assert fast == is_tight_filter_bruteforce(P, F)
        assert fast == (F in ultra)
        assert is_ultrafilter(P, F) == (F in ultra)


def test_is_filter_rejects_non_filters():
    P = diamond()
    a, b, t = P.idx("a"), P.idx("b"), P.idx("t")
    assert is_filter(P, (a, t))
    assert not is_filter(P, (a,))          # not upward closed
    assert not is_filter(P, (a, b, t))     # meet a ^ b = 0
    assert not is_filter(P, ())


def test_finite_cover():
    P = diamond()
    a, b, t = P.idx("a"), P.idx("b"), P.idx("t")
    assert is_finite_cover(P, t, [a, b])
    assert not is_finite_cover(P, t, [a])


def test_basic_sets():
    P = diamond()
    A = tc(tight_space(P))
    assert A.V("t") == A.V("a") | A.V("b")
    assert A.V("a") & A.V("b") == A.bottom()
    assert A.V("0") == A.bottom()


def test_bound_exceeded():
    P = Semilattice.from_sets([()] + [(i,) for i in range(6)])
    with pytest.raises(BoundExceeded):
        enumerate_filters(P, bound=3)


def test_bad_table_rejected():
    with pytest.raises(DomainError):
        Semilattice(["0", "a", "b"], [[0, 0, 0], [0, 1, 1], [0, 0, 2]], 0)


# inclusions

def power_of_two_points():
    return Semilattice.from_sets([(), (1,), (2,), (1, 2)])


def test_cover_failing_inclusion():
    P2 = power_of_two_points()
    inc = Inclusion(P2, ["{}", "{1}", "{1,2}"])
    assert preserves_finite_covers(inc) is False
    F = tuple(sorted(P2.idx(n) for n in ("{2}", "{1,2}")))
    R = restrict_filter(inc, F)
    assert inc.sub.fmt(R) == "{{1,2}}"
    assert not is_tight_filter(inc.sub, R)
    with pytest.raises(DomainError):
        tc_inclusion(inc)


def test_cover_preserving_inclusion():
    P2 = power_of_two_points()
    inc = Inclusion(P2, ["{}", "{1}", "{2}", "{1,2}"])
    assert preserves_finite_covers(inc)
    result = tc_inclusion(inc)
    assert result.is_tight


def test_inclusion_requires_meet_closure():
    P2 = Semilattice.from_sets([(), (1,), (2,), (1, 2), (2, 3), (1, 2, 3)])
    with pytest.raises(DomainError):
        Inclusion(P2, ["{}", "{1,2}", "{2,3}"])


@st.composite
def inclusions(draw):
    P = draw(small_semilattices())
    chosen = draw(st.sets(st.sampled_from(range(len(P)))))
    members = {P.zero, *chosen}
    # close the chosen subset under meets
    while True:
        extra = {P.meet(x, y) for x in members for y in members} - members
        if not extra:
            break
        members |= extra
    return Inclusion(P, [P.names[i] for i in members])


@given(inclusions())
@settings(max_examples=150, deadline=None)
def test_cover_preservation_matches_bruteforce(inc):
    assert preserves_finite_covers(inc) == preserves_finite_covers_bruteforce(inc)


@given(inclusions())
@settings(max_examples=150, deadline=None)
def test_cover_preservation_keeps_tight_filters(inc):
    if not preserves_finite_covers(inc):
        return
    for F in enumerate_filters(inc.sup):
        if not is_tight_filter(inc.sup, F):
            continue
        R = restrict_filter(inc, F)
        assert R is None or is_tight_filter(inc.sub, R)


def test_sufficient_conditions_on_full_inclusion():
    P2 = power_of_two_points()
    cond = check_sufficient_conditions(Inclusion(P2, P2.names))
    assert cond.downward_closed and cond.lemma_tight_condition
