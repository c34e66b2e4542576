"""Filters on finite meet semilattices with zero and the tight filter space.

A :class:`Semilattice` is given by an element list and a meet table.  Filters
are stored as sorted tuples of element indices.  The tight filters form a
finite discrete space whose power set is the algebra ``Tc(P)`` of compact
open sets; :func:`tc` builds it as a :class:`~gbaction.gba.PowerSpace`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import BoundExceeded, ConsistencyError, DomainError
from .gba import GbaElement, GbaMorphism, PowerSpace, generated_subalgebra, is_ideal

DEFAULT_BOUND = 20

Filter = tuple  # sorted tuple of element indices


class Semilattice:
    """A finite meet semilattice with a least element.

    Parameters
    ----------
    names : sequence of hashable
        Element labels.
    meet : sequence of sequences of int
        ``meet[i][j]`` is the index of the meet of elements ``i`` and ``j``.
    zero : int, optional
        Index of the least element; located automatically when omitted.
    """

    def __init__(self, names: Sequence[Hashable], meet: Sequence[Sequence[int]],
                 zero: int | None = None):
        self.names = list(names)
        n = len(self.names)
        self.table = [list(row) for row in meet]
        if len(set(self.names)) != n:
            raise DomainError("duplicate element names")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise DomainError("meet table has the wrong shape")
        for i in range(n):
            for j in range(n):
                if not 0 <= self.table[i][j] < n:
                    raise DomainError(f"meet table entry out of range at ({i}, {j})")
        self._validate()
        if zero is None:
            zero = next((z for z in range(n) if all(self.table[z][x] == z for x in range(n))), None)
            if zero is None:
                raise DomainError("semilattice has no least element")
        elif any(self.table[zero][x] != zero for x in range(n)):
            raise DomainError("declared zero is not absorbing")
        self.zero = zero
        self.index = {x: i for i, x in enumerate(self.names)}
        self._down = [frozenset(y for y in range(n) if self.table[y][x] == y) for x in range(n)]
        self._up = [frozenset(y for y in range(n) if self.table[x][y] == x) for x in range(n)]

    def _validate(self):
        t = self.table
        rng = range(len(t))
        for i in rng:
            if t[i][i] != i:
                raise DomainError(f"meet is not idempotent at {self.names[i]!r}")
            for j in rng:
                if t[i][j] != t[j][i]:
                    raise DomainError(f"meet is not commutative at {self.names[i]!r}, {self.names[j]!r}")
                for k in rng:
                    if t[t[i][j]][k] != t[i][t[j][k]]:
                        raise DomainError("meet is not associative")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable], names: Sequence | None = None) -> "Semilattice":
        """Semilattice of an intersection-closed family of sets (must contain the empty set)."""
        family = [frozenset(s) for s in sets]
        family = sorted(set(family), key=lambda s: (len(s), sorted(map(repr, s))))
        pos = {s: i for i, s in enumerate(family)}
        table = []
        for a in family:
            row = []
            for b in family:
                if a & b not in pos:
                    raise DomainError("family is not closed under intersection")
                row.append(pos[a & b])
            table.append(row)
        if frozenset() not in pos:
            raise DomainError("family must contain the empty set")
        if names is None:
            names = ["{" + ",".join(sorted(map(str, s))) + "}" for s in family]
        return cls(names, table, pos[frozenset()])

    def __len__(self):
        return len(self.names)

    def idx(self, x) -> int:
        if isinstance(x, int) and x not in self.index and 0 <= x < len(self):
            return x
        try:
            return self.index[x]
        except KeyError:
            raise DomainError(f"unknown element {x!r}") from None

    def meet(self, i: int, j: int) -> int:
        return self.table[i][j]

    def le(self, i: int, j: int) -> bool:
        return self.table[i][j] == i

    def down(self, i: int) -> frozenset:
        """``i^-``: all elements below ``i``."""
        return self._down[i]

    def up(self, i: int) -> frozenset:
        return self._up[i]

    def nonzero(self) -> list[int]:
        return [i for i in range(len(self)) if i != self.zero]

    def atoms(self) -> list[int]:
        return [i for i in self.nonzero() if self._down[i] == {i, self.zero}]

    def fmt(self, F: Iterable[int]) -> str:
        return "{" + ",".join(str(self.names[i]) for i in sorted(F)) + "}"


# ---------------------------------------------------------------------------
# filters


def is_filter(P: Semilattice, F: Iterable[int]) -> bool:
    F = set(F)
    if not F or len(F) == len(P) or P.zero in F:
        return False
    for x in F:
        if not P.up(x) <= F:
            return False
        for y in F:
            if P.meet(x, y) not in F:
                return False
    return True


def enumerate_filters(P: Semilattice, bound: int = DEFAULT_BOUND) -> list[Filter]:
    """All filters of ``P``, ordered by size and then lexicographically.

    In a finite semilattice every filter is principal: it is the up-set of
    the meet of its members.  Enumeration is therefore over nonzero elements.
    """
    if len(P) > bound:
        raise BoundExceeded(f"semilattice has {len(P)} elements (bound {bound})")
    filters = {tuple(sorted(P.up(x))) for x in P.nonzero()}
    return sorted(filters, key=lambda F: (len(F), F))


def is_ultrafilter(P: Semilattice, F: Iterable[int]) -> bool:
    F = set(F)
    for x in range(len(P)):
        if x in F:
            continue
        if not any(P.meet(x, y) == P.zero for y in F):
            return False
    return True


def is_finite_cover(P: Semilattice, x: int, C: Iterable[int]) -> bool:
    """Every nonzero element below ``x`` meets some member of ``C``.

    Returns false when ``C`` is not contained in the down-set of ``x``.
    """
    C = list(C)
    below = P.down(x)
    if any(c not in below for c in C):
        return False
    for y in below:
        if y == P.zero:
            continue
        if not any(P.meet(y, c) != P.zero for c in C):
            return False
    return True


def is_tight_filter(P: Semilattice, F: Iterable[int]) -> bool:
    """Tightness via the largest cover candidate avoiding ``F``.

    A cover of ``x`` avoiding ``F`` exists exactly when the set of all
    nonzero elements below ``x`` and outside ``F`` is itself a cover, since
    enlarging a cover inside ``x^-`` keeps it a cover.
    """
    F = set(F)
    for x in F:
        candidate = P.down(x) - F - {P.zero}
        if is_finite_cover(P, x, candidate):
            return False
    return True


def is_tight_filter_bruteforce(P: Semilattice, F: Iterable[int]) -> bool:
    """Reference check quantifying over every finite cover."""
    F = set(F)
    for x in F:
        below = sorted(P.down(x))
        for r in range(len(below) + 1):
            for C in itertools.combinations(below, r):
                if is_finite_cover(P, x, C) and not any(c in F for c in C):
                    return False
    return True


def enumerate_filters_bruteforce(P: Semilattice) -> list[Filter]:
    """Reference enumeration over all subsets."""
    n = len(P)
    out = []
    for mask in range(1, 1 << n):
        F = tuple(i for i in range(n) if mask >> i & 1)
        if is_filter(P, F):
            out.append(F)
    return sorted(out, key=lambda F: (len(F), F))


# ---------------------------------------------------------------------------
# tight space and its compact-open algebra


class TightSpace:
    """The tight filters of a finite semilattice."""

    def __init__(self, P: Semilattice, filters: Sequence[Filter]):
        self.P = P
        self.filters = list(filters)
        self.position = {F: i for i, F in enumerate(self.filters)}
        self._members = [set(F) for F in self.filters]

    def __len__(self):
        return len(self.filters)

    def basis_indices(self, x: int, excl: Iterable[int] = ()) -> list[int]:
        excl = list(excl)
        return [i for i, F in enumerate(self._members)
                if x in F and not any(e in F for e in excl)]

    def point_label(self, F: Filter) -> str:
        return self.P.fmt(F)


def tight_space(P: Semilattice, bound: int = DEFAULT_BOUND) -> TightSpace:
    """Enumerate tight filters, insisting they coincide with the ultrafilters."""
    filters = enumerate_filters(P, bound)
    tight = [F for F in filters if is_tight_filter(P, F)]
    ultra = [F for F in filters if is_ultrafilter(P, F)]
    if tight != ultra:
        raise ConsistencyError(
            f"tight filters {[P.fmt(F) for F in tight]} differ from ultrafilters "
            f"{[P.fmt(F) for F in ultra]}")
    return TightSpace(P, tight)


@dataclass(frozen=True)
class BasisSet:
    include: int
    exclude: tuple
    points: tuple  # indices into the tight space


def basis_set(T: TightSpace, x, excl: Sequence = ()) -> BasisSet:
    """``V_(x : excl)``: tight filters containing ``x`` and none of ``excl``."""
    P = T.P
    xi = P.idx(x)
    ex = tuple(P.idx(e) for e in excl)
    return BasisSet(xi, ex, tuple(T.basis_indices(xi, ex)))


class TightAlgebra(PowerSpace):
    """``Tc(P)``: the power algebra on the tight filters of ``P``."""

    def __init__(self, T: TightSpace):
        super().__init__([T.point_label(F) for F in T.filters])
        self.tight = T
        self.P = T.P

    def V(self, x, excl: Sequence = ()) -> GbaElement:
        b = basis_set(self.tight, x, excl)
        mask = 0
        for i in b.points:
            mask |= 1 << i
        return self.wrap(mask)

    def point(self, F: Filter) -> GbaElement:
        return self.wrap(1 << self.tight.position[F])

    def points_of(self, a: GbaElement) -> list[Filter]:
        mask = self.own(a).payload
        return [F for i, F in enumerate(self.tight.filters) if mask >> i & 1]


def tc(T: TightSpace) -> TightAlgebra:
    space = TightAlgebra(T)
    basis = [space.V(x) for x in range(len(T.P))]
    if len(generated_subalgebra(space, basis)) != space.size():
        raise ConsistencyError("the basic sets do not generate Tc(P)")
    return space


# ---------------------------------------------------------------------------
# subsemilattices


class Inclusion:
    """A 0-preserving meet-closed subset ``P1`` of a semilattice ``P2``.

    ``sub`` is ``P1`` as a semilattice in its own right and ``embed[i]`` is
    the index in ``P2`` of element ``i`` of ``P1``.
    """

    def __init__(self, sup: Semilattice, members: Iterable):
        idx = sorted({sup.idx(m) for m in members})
        if sup.zero not in idx:
            raise DomainError("subsemilattice must contain zero")
        pos = {x: i for i, x in enumerate(idx)}
        table = []
        for a in idx:
            row = []
            for b in idx:
                m = sup.meet(a, b)
                if m not in pos:
                    raise DomainError(
                        f"not meet-closed: {sup.names[a]!r} ^ {sup.names[b]!r} = {sup.names[m]!r}")
                row.append(pos[m])
            table.append(row)
        self.sup = sup
        self.embed = idx
        self.pos = pos
        self.sub = Semilattice([sup.names[i] for i in idx], table, pos[sup.zero])

    def members(self) -> set:
        return set(self.embed)

    def down_sub(self, x_sup: int) -> list[int]:
        """Elements of ``P1`` (as ``P2`` indices) below ``x_sup``."""
        return [c for c in self.embed if self.sup.le(c, x_sup)]

    def up_sub(self, x_sup: int) -> list[int]:
        return [c for c in self.embed if self.sup.le(x_sup, c)]


def restrict_filter(inc: Inclusion, F: Iterable[int]) -> Filter | None:
    """``F ∩ P1`` re-indexed in ``P1``; ``None`` when the intersection is empty."""
    inter = [inc.pos[x] for x in F if x in inc.pos]
    if not inter:
        return None
    out = tuple(sorted(inter))
    if not is_filter(inc.sub, out):
        raise ConsistencyError(f"restriction {inc.sub.fmt(out)} is not a filter")
    return out


def _is_cover_sup(inc: Inclusion, x: int, C: Iterable[int]) -> bool:
    return is_finite_cover(inc.sup, x, C)


def _is_cover_sub(inc: Inclusion, x: int, C: Iterable[int]) -> bool:
    return is_finite_cover(inc.sub, inc.pos[x], [inc.pos[c] for c in C])


def preserves_finite_covers(inc: Inclusion) -> bool:
    """Whether every finite cover in ``P1`` stays a cover in ``P2``.

    A cover in ``P1`` of ``x`` fails in ``P2`` exactly when some nonzero
    ``y <= x`` of ``P2`` misses all its members; such a cover exists iff
    the set of all ``P1`` elements below ``x`` disjoint from ``y`` is a
    ``P1`` cover of ``x``.
    """
    P2 = inc.sup
    for x in inc.embed:
        below1 = inc.down_sub(x)
        for y in P2.down(x):
            if y == P2.zero:
                continue
            avoid = [c for c in below1 if P2.meet(c, y) == P2.zero]
            if _is_cover_sub(inc, x, avoid):
                return False
    return True


def preserves_finite_covers_bruteforce(inc: Inclusion) -> bool:
    for x in inc.embed:
        below1 = inc.down_sub(x)
        for r in range(len(below1) + 1):
            for C in itertools.combinations(below1, r):
                if _is_cover_sub(inc, x, C) and not _is_cover_sup(inc, x, C):
                    return False
    return True


@dataclass(frozen=True)
class SufficientConditions:
    downward_closed: bool
    lemma_cover_condition: bool
    lemma_tight_condition: bool


def check_sufficient_conditions(inc: Inclusion) -> SufficientConditions:
    P2 = inc.sup
    zero = P2.zero
    members = inc.members()
    downward = all(P2.down(x) <= members for x in members)

    cover_cond = True
    for x in range(len(P2)):
        if not inc.up_sub(x):
            continue
        ok = False
        for y in inc.embed:
            if y == zero:
                continue
            if all(P2.meet(yp, x) != zero for yp in inc.down_sub(y) if yp != zero):
                ok = True
                break
        if not ok:
            cover_cond = False
            break

    tight_cond = preserves_finite_covers(inc)
    if tight_cond:
        for x in range(len(P2)):
            above = inc.up_sub(x)
            if not above:
                continue
            ok = False
            for y in above:
                ys = [c for c in inc.down_sub(y) if P2.meet(c, x) == zero]
                if is_finite_cover(P2, y, ys + [x]):
                    ok = True
                    break
            if not ok:
                tight_cond = False
                break
    return SufficientConditions(downward, cover_cond, tight_cond)


@dataclass
class TcInclusion:
    source: TightAlgebra
    target: TightAlgebra
    morphism: GbaMorphism
    is_tight: bool
    restriction: dict  # target tight filter index -> source tight filter index


def tc_inclusion(inc: Inclusion, bound: int = DEFAULT_BOUND) -> TcInclusion:
    """The injection ``Tc(P1) -> Tc(P2)`` given by preimages of restriction."""
    if not preserves_finite_covers(inc):
        raise DomainError("the inclusion does not preserve finite covers")
    T1 = tight_space(inc.sub, bound)
    T2 = tight_space(inc.sup, bound)
    A1, A2 = tc(T1), tc(T2)
    restriction = {}
    for j, F in enumerate(T2.filters):
        R = restrict_filter(inc, F)
        if R is None:
            continue
        if R not in T1.position:
            raise ConsistencyError(f"restriction of {inc.sup.fmt(F)} is not tight")
        restriction[j] = T1.position[R]

    def fn(a):
        mask = A1.own(a).payload
        out = 0
        for j, i in restriction.items():
            if mask >> i & 1:
                out |= 1 << j
        return A2.wrap(out)

    morphism = GbaMorphism(A1, A2, fn)
    image = {fn(a) for a in A1.elements()}
    return TcInclusion(A1, A2, morphism, is_ideal(A2, list(image)), restriction)
