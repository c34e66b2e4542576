"""Inverse semigroups with zero, gradings, and their Boolean partial actions.

A graded inverse semigroup ``S`` acts partially on the compact open sets of
its tight spectrum: ``I_g`` is generated by the sets ``V_x`` with ``x`` below
some ``s s*`` with ``s`` of degree ``g``, and ``phi_g`` sends ``V_x`` to
``V_{s x s*}``.  :func:`build_partial_action` packages this as a
:class:`~gbaction.partial_action.PartialActionBundle`; :class:`SemigroupAlgebra`
wraps the resulting skew ring.

Handles implement :class:`InverseSemigroup`.  Finite tables are handled
exhaustively; graph and labelled semigroups (see their modules) supply a
cylinder-tree model of the tight spectrum and closed forms for the canonical
grading; other gradings of those fall back to bounded enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import ConsistencyError, DomainError, UnsupportedError
from .gba import (CylinderTreeSpace, FiniteCofiniteSpace, GbaElement, GbaMorphism,
                  GbaSpace, IdealHandle, whole_ideal)
from .groups import FiniteGroup, FreeGroup, FreeHomomorphism
from .partial_action import PartialActionBundle, verify_action_morphism
from .report import Report
from .rings import INTEGERS, Ring
from .skew_algebra import SkewElement, SkewRing, induced_morphism, lc_map
from .tight_filters import Inclusion, Semilattice, preserves_finite_covers, tight_space, tc


class _Zero:
    __slots__ = ()

    def __repr__(self):
        return "0"

    def __reduce__(self):
        return (_zero, ())


def _zero():
    return ZERO


ZERO = _Zero()


class _Star:
    __slots__ = ()

    def __repr__(self):
        return "*"


STAR = _Star()


class Grading:
    """A map from nonzero semigroup elements to a group."""

    def __init__(self, group, fn: Callable, name: str = "grading"):
        self.group = group
        self.fn = fn
        self.name = name

    def __call__(self, s):
        return self.fn(s)


# ---------------------------------------------------------------------------
# handles


class InverseSemigroup:
    """Interface for inverse semigroups with zero."""

    kind = "abstract"
    zero: Hashable = ZERO

    def mul(self, a, b):
        raise NotImplementedError

    def star(self, a):
        raise NotImplementedError

    def nonzero(self, depth: int | None = None) -> list:
        """Nonzero elements (all of them for finite handles, else up to ``depth``)."""
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def canonical_grading(self) -> Grading:
        raise UnsupportedError(f"{self.kind} semigroup has no canonical grading")

    def tight_model(self) -> "TightModel":
        raise UnsupportedError(f"no tight model for {self.kind} semigroups")

    def degree_witness(self, g):
        """Closed form for the canonical grading.

        Returns an element ``s`` of degree ``g`` such that ``E_g`` is the set
        of idempotents below ``s s*`` and ``phi_g(x) = s x s*`` on ``E_g^-1``;
        ``None`` when ``E_g = {0}``; ``NotImplemented`` when the handle has no
        closed form.
        """
        return NotImplemented

    def has_closed_form(self) -> bool:
        return type(self).degree_witness is not InverseSemigroup.degree_witness

    # derived -----------------------------------------------------------
    def is_zero(self, a) -> bool:
        return a == self.zero

    def is_idempotent(self, a) -> bool:
        return self.mul(a, a) == a

    def idempotents(self, depth: int | None = None) -> list:
        return [a for a in self.nonzero(depth) if self.is_idempotent(a)]

    def format(self, a) -> str:
        return repr(a)


def natural_order(S: InverseSemigroup, x, y) -> bool:
    """``x <= y`` in the natural partial order, decided as ``x = (x x*) y``."""
    if S.is_zero(x):
        return True
    return S.mul(S.mul(x, S.star(x)), y) == x


class FiniteInverseSemigroup(InverseSemigroup):
    """A finite inverse semigroup with zero given by a multiplication table.

    Parameters
    ----------
    names : sequence of hashable
        Element names; one of them is the zero.
    table : sequence of sequences
        ``table[i][j]`` is the index (or name) of the product of elements
        ``i`` and ``j``.
    zero : hashable
        Name of the zero element.
    """

    kind = "finite"

    def __init__(self, names: Sequence[Hashable], table, zero):
        self.names = list(names)
        if len(set(self.names)) != len(self.names):
            raise DomainError("duplicate element names")
        self.pos = {x: i for i, x in enumerate(self.names)}
        n = len(self.names)
        if len(table) != n or any(len(r) != n for r in table):
            raise DomainError("multiplication table has the wrong shape")
        self._table = {}
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool):
                    if v not in self.pos:
                        raise DomainError(f"unknown product {v!r}")
                    v = self.pos[v]
                if not 0 <= v < n:
                    raise DomainError(f"product index {v} out of range")
                self._table[self.names[i], self.names[j]] = self.names[v]
        if zero not in self.pos:
            raise DomainError(f"zero {zero!r} is not an element")
        self.zero = zero
        self._star = {}
        self._grading = None
        for a in self.names:
            cands = self._inverses(a)
            if cands:
                self._star[a] = cands[0]

    @classmethod
    def from_semilattice(cls, P: Semilattice) -> "FiniteInverseSemigroup":
        return cls(P.names, [[P.meet(i, j) for j in range(len(P))] for i in range(len(P))],
                   P.names[P.zero])

    @classmethod
    def from_handle(cls, S: InverseSemigroup, depth: int) -> "FiniteInverseSemigroup":
        """Tabulate a structured handle whose nonzero part is finite within ``depth``."""
        elems = list(S.nonzero(depth)) + [S.zero]
        pos = {x: i for i, x in enumerate(elems)}
        table = []
        for a in elems:
            row = []
            for b in elems:
                c = S.mul(a, b)
                if c not in pos:
                    raise DomainError(f"product {S.format(c)} escapes depth {depth}")
                row.append(pos[c])
            table.append(row)
        out = cls(elems, table, S.zero)
        out.format = S.format  # type: ignore[method-assign]
        return out

    def _inverses(self, a):
        return [t for t in self.names
                if self.mul(self.mul(a, t), a) == a and self.mul(self.mul(t, a), t) == t]

    def mul(self, a, b):
        return self._table[a, b]

    def star(self, a):
        try:
            return self._star[a]
        except KeyError:
            raise DomainError(f"{a!r} has no inverse") from None

    def nonzero(self, depth=None):
        return [x for x in self.names if x != self.zero]

    def is_finite(self):
        return True

    def format(self, a) -> str:
        return str(a)

    def set_canonical_grading(self, grading: Grading) -> None:
        self._grading = grading

    def canonical_grading(self):
        if self._grading is None:
            return trivial_grading(self)
        return self._grading

    def tight_model(self):
        if not hasattr(self, "_model"):
            self._model = FiniteTightModel(self)
        return self._model


class AntichainSemilattice(InverseSemigroup):
    """The semilattice ``{0, e_0, e_1, ...}`` with ``e_i e_j = 0`` for ``i != j``.

    Elements are ``0`` and the integers ``i`` standing for ``e_i``.  Its tight
    spectrum is the discrete space ``N``, so the compact open sets are the
    finite subsets of ``N``; there is no largest one.
    """

    kind = "antichain"

    def mul(self, a, b):
        if a is ZERO or b is ZERO or a != b:
            return ZERO
        return a

    def star(self, a):
        return a

    def nonzero(self, depth=None):
        return list(range(depth if depth is not None else 4))

    def canonical_grading(self):
        return trivial_grading(self)

    def tight_model(self):
        if not hasattr(self, "_model"):
            self._model = AntichainModel(FiniteCofiniteSpace(cofinite=False), with_star=False)
        return self._model

    def format(self, a):
        return "0" if a is ZERO else f"e{a}"


class UnitizedSemigroup(InverseSemigroup):
    """``S`` with an identity ``*`` adjoined; ``*`` is graded by the group identity."""

    kind = "unitized"

    def __init__(self, inner: InverseSemigroup):
        self.inner = inner
        self.zero = inner.zero

    def mul(self, a, b):
        if a is STAR:
            return b
        if b is STAR:
            return a
        return self.inner.mul(a, b)

    def star(self, a):
        return STAR if a is STAR else self.inner.star(a)

    def nonzero(self, depth=None):
        return self.inner.nonzero(depth) + [STAR]

    def is_finite(self):
        return self.inner.is_finite()

    def canonical_grading(self):
        inner = self.inner.canonical_grading()
        G = inner.group
        return Grading(G, lambda s: G.identity if s is STAR else inner(s), inner.name + "*")

    def tight_model(self):
        if hasattr(self, "_model"):
            return self._model
        if isinstance(self.inner, AntichainSemilattice):
            self._model = AntichainModel(FiniteCofiniteSpace(cofinite=True), with_star=True)
        elif self.inner.is_finite():
            self._model = FiniteTightModel(self)
        else:
            raise UnsupportedError("unitization of this semigroup kind has no tight model")
        return self._model

    def format(self, a):
        return "*" if a is STAR else self.inner.format(a)


def unitize(S: InverseSemigroup) -> UnitizedSemigroup:
    return UnitizedSemigroup(S)


def trivial_grading(S: InverseSemigroup) -> Grading:
    G = FiniteGroup.trivial()
    return Grading(G, lambda s: G.identity, "trivial")


# ---------------------------------------------------------------------------
# tight spectrum models


class TightModel:
    """The compact-open algebra of the tight spectrum of ``E(S)``.

    ``V(x)`` is the basic set of an idempotent.  Elements decompose into
    disjoint *pieces* (opaque tokens), each of which is ``V(x)`` for a known
    idempotent ``x`` (:meth:`piece_idempotent`); :meth:`refine` splits a
    piece further when possible.
    """

    space: GbaSpace

    def V(self, x) -> GbaElement:
        raise NotImplementedError

    def pieces(self, U: GbaElement) -> list:
        return self.space.pieces(U)

    def piece_idempotent(self, piece):
        raise NotImplementedError

    def refine(self, piece) -> list:
        return []


class FiniteTightModel(TightModel):
    def __init__(self, S: InverseSemigroup):
        E = [S.zero] + S.idempotents()
        table = [[E.index(S.mul(a, b)) for b in E] for a in E]
        self.S = S
        self.E = E
        names = [S.format(x) for x in E]
        if len(set(names)) != len(names):
            names = [str(i) for i in range(len(E))]
        self.P = Semilattice(names, table, 0)
        self.tight = tight_space(self.P, bound=max(len(E), 1))
        self.space = tc(self.tight)
        self._idem = {}
        for i, F in enumerate(self.tight.filters):
            low = F[0]
            for k in F:
                low = self.P.meet(low, k)
            self._idem[1 << i] = E[low]

    def V(self, x):
        return self.space.V(self.E.index(x))

    def piece_idempotent(self, piece):
        return self._idem[piece.payload]

    def points(self):
        """``(index, idempotent)`` for each point of the spectrum."""
        return [(i, self._idem[1 << i]) for i in range(len(self.tight))]


class TreeTightModel(TightModel):
    """Model on a :class:`CylinderTreeSpace`; the handle maps nodes to idempotents."""

    def __init__(self, space: CylinderTreeSpace, V: Callable, node_idempotent: Callable):
        self.space = space
        self._V = V
        self._node_idem = node_idempotent

    def V(self, x):
        return self._V(x)

    # pieces are tree nodes, so refining never re-merges siblings
    def pieces(self, U):
        return self.space.nodes(U)

    def piece_idempotent(self, piece):
        return self._node_idem(piece)

    def refine(self, piece):
        return self.space.structure.children(piece)


class AntichainModel(TightModel):
    def __init__(self, space: FiniteCofiniteSpace, with_star: bool):
        self.space = space
        self.with_star = with_star

    def V(self, x):
        if x is STAR:
            return self.space.top()
        return self.space.finite([x])

    def piece_idempotent(self, piece):
        s, co = piece.payload
        if co:
            return STAR
        (i,) = s
        return i


# ---------------------------------------------------------------------------
# E_g and phi_g


def _witnesses(S: InverseSemigroup, grading: Grading, g, depth) -> list:
    return [s for s in S.nonzero(depth) if grading(s) == g]


def compute_Eg(S: InverseSemigroup, grading: Grading, g, depth: int = 3) -> set:
    """``E_g``: idempotents below ``s s*`` for some ``s`` of degree ``g`` (plus zero).

    Brute force over the elements within ``depth``.
    """
    out = {S.zero}
    wit = _witnesses(S, grading, g, depth)
    for x in S.idempotents(depth):
        if any(natural_order(S, x, S.mul(s, S.star(s))) for s in wit):
            out.add(x)
    return out


def compute_Eg_closed(S: InverseSemigroup, g, depth: int = 3) -> set:
    """``E_g`` for the canonical grading from the handle's closed form."""
    if not S.has_closed_form():
        raise UnsupportedError(f"{S.kind} semigroup has no closed form for E_g")
    idem = S.idempotents(depth)
    if g == S.canonical_grading().group.identity:
        return {S.zero, *idem}
    s = S.degree_witness(g)
    out = {S.zero}
    if s is None:
        return out
    m = S.mul(s, S.star(s))
    return out | {x for x in idem if natural_order(S, x, m)}


def phi_g(S: InverseSemigroup, grading: Grading, g, x, depth: int = 3):
    """``s x s*`` for the first ``s`` of degree ``g`` with ``x <= s* s``."""
    for s in _witnesses(S, grading, g, depth):
        if natural_order(S, x, S.mul(S.star(s), s)):
            return S.mul(S.mul(s, x), S.star(s))
    raise DomainError(f"no element of degree {grading.group.format(g)} admits {S.format(x)}")


def verify_inverse_semigroup(S: InverseSemigroup, depth: int = 2,
                             max_triples: int = 300_000, seed: int = 0) -> Report:
    rep = Report(f"inverse semigroup ({S.kind})")
    elems = list(S.nonzero(depth)) + [S.zero]
    fmt = S.format

    triples = len(elems) ** 3
    ok, witness = True, None
    if triples <= max_triples:
        it = itertools.product(elems, repeat=3)
    else:
        rng = random.Random(seed)
        it = ((rng.choice(elems), rng.choice(elems), rng.choice(elems)) for _ in range(max_triples))
    for a, b, c in it:
        if S.mul(S.mul(a, b), c) != S.mul(a, S.mul(b, c)):
            ok, witness = False, (fmt(a), fmt(b), fmt(c))
            break
    rep.add("associativity", ok, detail=f"{min(triples, max_triples)} triples", witness=witness)

    ok, witness = True, None
    for s in elems:
        try:
            t = S.star(s)
        except DomainError:
            ok, witness = False, f"{fmt(s)} has no inverse"
            break
        if S.mul(S.mul(s, t), s) != s or S.mul(S.mul(t, s), t) != t:
            ok, witness = False, fmt(s)
            break
        others = [u for u in elems if u != t
                  and S.mul(S.mul(s, u), s) == s and S.mul(S.mul(u, s), u) == u]
        if others:
            ok, witness = False, f"{fmt(s)} has inverses {fmt(t)} and {fmt(others[0])}"
            break
    rep.add("unique inverses", ok, witness=witness)

    idem = [x for x in elems if S.is_idempotent(x)]
    ok, witness = True, None
    for x, y in itertools.combinations(idem, 2):
        if S.mul(x, y) != S.mul(y, x):
            ok, witness = False, (fmt(x), fmt(y))
            break
    rep.add("idempotents commute", ok, witness=witness)

    bad = next((fmt(a) for a in elems
                if S.mul(a, S.zero) != S.zero or S.mul(S.zero, a) != S.zero), None)
    rep.add("zero is absorbing", bad is None, witness=bad)
    return rep


def verify_pure_grading(S: InverseSemigroup, grading: Grading, depth: int = 2) -> Report:
    G = grading.group
    rep = Report(f"pure grading {grading.name}")
    elems = S.nonzero(depth)
    ok, witness = True, None
    for a, b in itertools.product(elems, repeat=2):
        ab = S.mul(a, b)
        if S.is_zero(ab):
            continue
        if grading(ab) != G.mul(grading(a), grading(b)):
            ok, witness = False, (S.format(a), S.format(b))
            break
    rep.add("multiplicative on nonzero products", ok, witness=witness)
    bad = next((S.format(s) for s in elems
                if (grading(s) == G.identity) != S.is_idempotent(s)), None)
    rep.add("identity fibre is exactly the nonzero idempotents", bad is None, witness=bad)
    return rep


# ---------------------------------------------------------------------------
# the partial action


def build_partial_action(S: InverseSemigroup, grading: Grading | None = None,
                         depth: int = 6, method: str = "auto") -> PartialActionBundle:
    """The partial action of the grading group on the compact opens of the tight spectrum.

    ``method`` is ``"closed"`` (use the handle's closed forms, canonical
    grading only), ``"brute"`` (enumerate elements up to ``depth``) or
    ``"auto"``.
    """
    model = S.tight_model()
    space = model.space
    if grading is None:
        grading = S.canonical_grading()
        closed = method != "brute" and S.has_closed_form()
    else:
        closed = method == "closed"
    if closed and not S.has_closed_form():
        raise UnsupportedError("closed forms unavailable")
    G = grading.group
    bound_depth = None if S.is_finite() else depth
    witness_cache: dict = {}

    def witnesses(g):
        if g not in witness_cache:
            witness_cache[g] = _witnesses(S, grading, g, bound_depth)
        return witness_cache[g]

    def ideal_fn(g):
        if g == G.identity:
            return whole_ideal(space)
        if closed:
            s = S.degree_witness(g)
            return IdealHandle(space, [] if s is None else [model.V(S.mul(s, S.star(s)))])
        return IdealHandle(space, [model.V(S.mul(s, S.star(s))) for s in witnesses(g)])

    def image_idempotent(g, x):
        cands = [] if closed and S.degree_witness(g) is None else (
            [S.degree_witness(g)] if closed else witnesses(g))
        for s in cands:
            if natural_order(S, x, S.mul(S.star(s), s)):
                return S.mul(S.mul(s, x), S.star(s))
        return None

    def phi_fn(g):
        if g == G.identity:
            return lambda U: U
        cache: dict = {}
        limit = (depth + 2) * 2

        def map_piece(piece, budget):
            x = model.piece_idempotent(piece)
            y = image_idempotent(g, x)
            if y is not None:
                return [model.V(y)]
            kids = model.refine(piece) if budget > 0 else []
            if not kids:
                raise DomainError(f"{piece!r} is outside the domain of phi_{G.format(g)}")
            return [v for k in kids for v in map_piece(k, budget - 1)]

        def phi(U):
            space.own(U)
            hit = cache.get(U)
            if hit is None:
                parts = [v for p in model.pieces(U) for v in map_piece(p, limit)]
                hit = space.join_all(parts)
                cache[U] = hit
            return hit

        return phi

    return PartialActionBundle(G, space, ideal_fn, phi_fn, name=f"{S.kind}/{grading.name}")


class SemigroupAlgebra(SkewRing):
    """``L_R(S, grading)`` with the shorthand ``x delta_g = V_x delta_g``."""

    def __init__(self, S: InverseSemigroup, grading: Grading | None = None,
                 ring: Ring = INTEGERS, depth: int = 6, method: str = "auto"):
        self.S = S
        self.grading = grading or S.canonical_grading()
        self.model = S.tight_model()
        super().__init__(build_partial_action(S, grading, depth, method), ring)

    def xdelta(self, x, g, value=1) -> SkewElement:
        if not self.S.is_idempotent(x):
            raise DomainError(f"{self.S.format(x)} is not an idempotent")
        if self.S.is_zero(x):
            return self.zero()
        V = self.model.V(x)
        if not self.bundle.ideal(g).contains(V):
            raise DomainError(f"{self.S.format(x)} is not in E_{self.group.format(g)}")
        return self.delta(V, g, value)


def algebra(S: InverseSemigroup, grading: Grading | None = None, ring: Ring = INTEGERS,
            depth: int = 6) -> SemigroupAlgebra:
    return SemigroupAlgebra(S, grading, ring, depth)


def verify_nonvanishing(A: SemigroupAlgebra, word_bound: int = 2, depth: int = 2) -> Report:
    """``x delta_g`` is nonzero for every nonzero ``x`` in ``E_g``.

    ``E_g`` is enumerated by brute force over ``S.nonzero(depth)``; degrees are
    the words of length at most ``word_bound`` (all elements for a finite group).
    """
    S, G = A.S, A.group
    rep = Report("nonvanishing of x d_g")
    count = 0
    bad = None
    for g in G.elements(word_bound):
        for x in sorted(compute_Eg(S, A.grading, g, depth), key=S.format):
            if S.is_zero(x):
                continue
            count += 1
            if bad is None and not A.xdelta(x, g):
                bad = (S.format(x), G.format(g))
    rep.add("x d_g != 0 for 0 != x in E_g", bad is None, f"{count} pairs", witness=bad)
    return rep


@dataclass
class OrthogonalityFlags:
    orthogonal: bool
    semi_saturated: bool
    bound: int


def semigroup_orthogonality_checks(S: InverseSemigroup, grading: Grading | None = None,
                                   bound: int = 3, depth: int | None = None) -> OrthogonalityFlags:
    """Orthogonality ``E_a ^ E_b = {0}`` and semi-saturation ``E_st <= E_s``.

    Checked on the idempotents within ``depth`` for words up to ``bound``.
    """
    grading = grading or S.canonical_grading()
    G = grading.group
    if not isinstance(G, FreeGroup):
        raise DomainError("the grading group must be free")
    depth = bound + 1 if depth is None else depth
    cache: dict = {}
    reach = None if S.is_finite() else depth + bound
    by_degree: dict = {}
    for s in S.nonzero(reach):
        by_degree.setdefault(grading(s), []).append(S.mul(s, S.star(s)))
    limit = set(S.idempotents(None if S.is_finite() else depth)) | {S.zero}

    def E(g):
        # same set as compute_Eg at the reach depth, cut down to the idempotents in scope
        if g not in cache:
            tops = by_degree.get(g, [])
            cache[g] = {S.zero} | {x for x in limit if not S.is_zero(x)
                                   and any(natural_order(S, x, m) for m in tops)}
        return cache[g]

    orth = all(E(G.letter(a)) & E(G.letter(b)) == {S.zero}
               for a, b in itertools.combinations(G.alphabet, 2))
    semi = True
    for s, t in itertools.product(G.elements(bound), repeat=2):
        if not s or not t or len(s) + len(t) > bound:
            continue
        st = G.mul(s, t)
        if len(st) == len(s) + len(t) and not E(st) <= E(s):
            semi = False
            break
    return OrthogonalityFlags(orth, semi, bound)


# ---------------------------------------------------------------------------
# change of grading


@dataclass
class RegradeResult:
    sigma: Grading
    source: SemigroupAlgebra
    target: SemigroupAlgebra
    report: Report
    spanning: list = field(default_factory=list)

    def transport(self, x: SkewElement) -> SkewElement:
        return _regrade_element(self.target, self.f, x)


def _regrade_element(target: SemigroupAlgebra, f, x: SkewElement) -> SkewElement:
    acc = target.zero()
    for g, c in x.terms:
        acc = acc + SkewElement(target, {f(g): c})
    return acc


def regrade(S: InverseSemigroup, f: FreeHomomorphism, grading: Grading | None = None,
            ring: Ring = INTEGERS, depth: int = 3, samples: int = 200,
            seed: int = 0) -> RegradeResult:
    """Regrade along ``f`` and compare ``L_R(S, grading)`` with ``L_R(S, f o grading)``.

    The comparison is desk-scale evidence: the map ``x d_g -> x d_f(g)`` is
    checked to be a bijection between the homogeneous spanning elements with
    idempotents within ``depth`` and target degrees of length at most
    ``depth``, and multiplicativity is checked on ``samples`` random pairs.
    """
    grading = grading or S.canonical_grading()
    H = f.target
    sigma = Grading(H, lambda s: f(grading(s)), f"{grading.name}->target")
    horizon = 2 * depth + 3
    pure = verify_pure_grading(S, sigma, depth if not S.is_finite() else None)
    if not pure.ok:
        raise DomainError(f"regraded map is not a pure grading: {pure.first_failure().line()}")
    A = SemigroupAlgebra(S, grading, ring, horizon)
    B = SemigroupAlgebra(S, sigma, ring, horizon, method="brute")
    rep = Report(f"regrade along {grading.name} -> target (bound {depth})")
    rep.note("evidence is a graded bijection on bounded spanning sets plus sampled products")
    # spanning elements are x d_g with x in E_g, i.e. below s s* for one s of degree g
    idem = S.idempotents(None if S.is_finite() else depth)
    reach = None if S.is_finite() else horizon
    src_degrees = {grading(s) for s in S.nonzero(reach)}
    span_src = []
    for g in sorted(src_degrees, key=grading.group.sort_key):
        if H.length(f(g)) > depth:
            continue
        Eg = compute_Eg(S, grading, g, reach)
        span_src.extend((x, g) for x in idem if x in Eg)
    span_tgt = set()
    for h in H.elements(depth):
        Eh = compute_Eg(S, sigma, h, reach)
        span_tgt.update((x, h) for x in idem if x in Eh)
    images = [(x, f(g)) for x, g in span_src]
    injective = len(set(images)) == len(images)
    dup = None
    if not injective:
        seen: dict = {}
        for (x, g), im in zip(span_src, images):
            if im in seen:
                dup = (S.format(x), grading.group.format(seen[im]), grading.group.format(g))
                break
            seen[im] = g
    rep.add("injective on spanning elements", injective, detail=f"{len(images)} elements",
            witness=dup)
    missing = sorted(span_tgt - set(images), key=repr)
    extra = sorted(set(images) - span_tgt, key=repr)
    rep.add("onto the target spanning elements", not missing and not extra,
            detail=f"{len(span_tgt)} elements",
            witness=(missing[:2], extra[:2]) if missing or extra else None)

    rng = random.Random(seed)
    bad = None
    for _ in range(samples if span_src else 0):
        (x, g), (y, h) = rng.choice(span_src), rng.choice(span_src)
        r1, r2 = ring.random(rng), ring.random(rng)
        a, b = A.xdelta(x, g, r1), A.xdelta(y, h, r2)
        lhs = _regrade_element(B, f, a * b)
        rhs = _regrade_element(B, f, a) * _regrade_element(B, f, b)
        if lhs != rhs:
            bad = (S.format(x), grading.group.format(g), S.format(y), grading.group.format(h))
            break
    rep.add("multiplicative on sampled pairs", bad is None,
            detail=f"{samples if span_src else 0} pairs", witness=bad)
    out = RegradeResult(sigma, A, B, rep, span_src)
    out.f = f  # type: ignore[attr-defined]
    return out


# ---------------------------------------------------------------------------
# inclusions and unitization


@dataclass
class InclusionResult:
    report: Report
    morphism: GbaMorphism | None
    embed: Callable | None
    source: SemigroupAlgebra | None = None
    target: SemigroupAlgebra | None = None


def subsemigroup_inclusion(S1: InverseSemigroup, S2: InverseSemigroup,
                           embedding: Callable | Mapping, ring: Ring = INTEGERS,
                           grading1: Grading | None = None, grading2: Grading | None = None,
                           depth: int = 3) -> InclusionResult:
    """Check ``S1 <=_c S2`` for finite handles and build the graded embedding."""
    emb = embedding.__getitem__ if isinstance(embedding, Mapping) else embedding
    rep = Report("subsemigroup inclusion")
    if not (S1.is_finite() and S2.is_finite()):
        raise UnsupportedError("subsemigroup_inclusion needs finite handles")
    elems1 = S1.nonzero() + [S1.zero]
    ok = emb(S1.zero) == S2.zero
    witness = None if ok else "zero not preserved"
    if ok:
        for a, b in itertools.product(elems1, repeat=2):
            if emb(S1.mul(a, b)) != S2.mul(emb(a), emb(b)):
                ok, witness = False, (S1.format(a), S1.format(b))
                break
    if ok and len({emb(a) for a in elems1}) != len(elems1):
        ok, witness = False, "embedding is not injective"
    rep.add("all products preserved", ok, witness=witness)
    if not ok:
        return InclusionResult(rep, None, None)

    m1, m2 = S1.tight_model(), S2.tight_model()
    E2_names = m2.P.names
    members = [m2.E.index(emb(x)) for x in m1.E]
    inc = Inclusion(m2.P, [E2_names[i] for i in members])
    covers = preserves_finite_covers(inc)
    rep.add("idempotents preserve finite covers", covers)
    if not covers:
        return InclusionResult(rep, None, None)

    # point map: restrict each tight filter of E2 to E1 and locate it among E1's
    back = {m2.E.index(emb(x)): x for x in m1.E}
    where = {x: i for i, x in m1.points()}
    restriction: dict = {}
    for j, F in enumerate(m2.tight.filters):
        inter = [back[k] for k in F if k in back]
        if not inter:
            continue
        low = inter[0]
        for x in inter[1:]:
            low = S1.mul(low, x)
        if low not in where:
            raise ConsistencyError(f"restriction to {S1.format(low)} is not a tight filter")
        restriction[j] = where[low]

    def fn(U):
        mask = U.payload
        out = 0
        for j, i in restriction.items():
            if mask >> i & 1:
                out |= 1 << j
        return m2.space.wrap(out)

    morphism = GbaMorphism(m1.space, m2.space, fn)
    A1 = SemigroupAlgebra(S1, grading1, ring)
    A2 = SemigroupAlgebra(S2, grading2, ring)
    rep.extend(verify_action_morphism(morphism, A1.bundle, A2.bundle, depth))
    embed = induced_morphism(morphism, A1, A2, depth) if rep.ok else None
    return InclusionResult(rep, morphism, embed, A1, A2)


def is_essential_ideal(super_alg: SkewRing, in_sub: Callable[[SkewElement], bool],
                       sub_units: Sequence[SkewElement],
                       spanning: Sequence[SkewElement]) -> tuple[bool, bool, object]:
    """Return ``(is_ideal, is_essential, witness)`` within the given scope.

    ``in_sub`` decides membership in the candidate ideal, ``sub_units`` are
    local units of it and ``spanning`` are homogeneous elements of the
    ambient algebra.
    """
    for x in spanning:
        for u in sub_units:
            for p in (u * x, x * u):
                if not in_sub(p):
                    return False, False, ("not an ideal", x, u)
    for x in spanning:
        if not x:
            continue
        if not any(u * x or x * u for u in sub_units):
            return True, False, ("annihilated", x)
    return True, True, None


def unitization_report(S: InverseSemigroup, ring: Ring = INTEGERS, depth: int = 3) -> Report:
    """Compare ``L_R(S)`` with ``L_R(S*)`` for a semilattice-like handle.

    Reports whether ``L_R(S)`` is unital, that ``V_* delta_e`` is a unit of
    ``L_R(S*)``, whether the inclusion is proper and, within scope, whether
    the image is an essential ideal.
    """
    St = unitize(S)
    A1 = SemigroupAlgebra(S, None, ring, depth)
    A2 = SemigroupAlgebra(St, None, ring, depth)
    rep = Report(f"unitization of {S.kind} semigroup")
    rep.note("desk-scale evidence: spanning elements and units within the stated scope")
    unital = A1.unit() is not None
    rep.add("L(S) unital" if unital else "L(S) non-unital", True)
    G = A2.group
    e = G.identity
    u = A2.xdelta(STAR, e)
    spanning2 = []
    for g in A2.bundle.support(depth):
        top = A2.bundle.ideal(g).top_element()
        for U in A2.space.elements_below(top, depth) if top is not None else []:
            if not U.is_bottom():
                spanning2.append(A2.delta(U, g))
    is_unit = all(u * x == x == x * u for x in spanning2)
    rep.add("V_* d_e is a unit of L(S*)", is_unit and u == A2.unit())

    if isinstance(S, AntichainSemilattice):
        s1, s2 = A1.space, A2.space
        morphism = GbaMorphism(s1, s2, lambda a: s2.wrap(a.payload),
                               lambda b: not b.payload[1])
        rep.extend(verify_action_morphism(morphism, A1.bundle, A2.bundle, depth))
        embed = induced_morphism(morphism, A1, A2, depth)
    else:
        res = subsemigroup_inclusion(S, St, lambda x: x, ring, depth=depth)
        rep.extend(res.report)
        morphism, embed = res.morphism, res.embed
        A1, A2 = res.source, res.target
        u = A2.xdelta(STAR, e)
        spanning2 = []
        for g in A2.bundle.support(depth):
            for U in A2.space.elements_below(A2.bundle.ideal(g).top_element(), depth):
                if not U.is_bottom():
                    spanning2.append(A2.delta(U, g))
    if morphism is None:
        return rep

    def in_sub(x: SkewElement) -> bool:
        return all(morphism.image_contains(A) for _, c in x.terms for _, A in c.terms)

    proper = not all(in_sub(x) for x in spanning2)
    rep.add("inclusion is proper" if proper else "inclusion is an equality", True)
    rep.add("equality exactly when L(S) is unital", proper != unital)
    units = [embed(A1.delta(V, e)) for V in _unit_candidates(A1, depth)]
    ideal_ok, essential, witness = is_essential_ideal(A2, in_sub, units, spanning2)
    rep.add("image is an ideal", ideal_ok, witness=witness if not ideal_ok else None)
    rep.add("image is essential", essential, witness=witness if ideal_ok else None)
    return rep


def _unit_candidates(A: SemigroupAlgebra, depth: int) -> list:
    space = A.space
    top = space.top()
    if top is not None:
        return [top]
    return [space.join_all(space.finite([i]) for i in range(k)) for k in range(1, depth + 3)]
