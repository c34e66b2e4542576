"""Partial actions of groups on generalized Boolean algebras.

A bundle assigns to every group element ``t`` an ideal ``I_t`` of a GBA and
an isomorphism ``phi_t`` from ``I_{t^-1}`` onto ``I_t``.  Bundles are built
either from explicit sparse tables (:meth:`PartialActionBundle.from_tables`)
or from callables computing ideals and maps on demand, which is how the
semigroup, graph and labelled modules produce them.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping

from .errors import DomainError
from .gba import GbaElement, GbaMorphism, GbaSpace, IdealHandle, whole_ideal, zero_ideal
from .groups import FreeGroup
from .report import Report

ElementMap = Callable[[GbaElement], GbaElement]


class PartialActionBundle:
    """A family of ideals and partial isomorphisms indexed by a group.

    Parameters
    ----------
    group : FreeGroup or FiniteGroup
    space : GbaSpace
    ideal_fn : callable
        ``t -> IdealHandle`` giving ``I_t``.
    phi_fn : callable
        ``t -> element map`` giving ``phi_t : I_{t^-1} -> I_t``.
    """

    def __init__(self, group, space: GbaSpace, ideal_fn: Callable, phi_fn: Callable,
                 name: str = "bundle"):
        self.group = group
        self.space = space
        self._ideal_fn = ideal_fn
        self._phi_fn = phi_fn
        self.name = name
        self._ideals: dict = {}
        self._maps: dict = {}

    @classmethod
    def from_tables(cls, group, space: GbaSpace, ideals: Mapping, maps: Mapping,
                    name: str = "bundle", check_inverses: bool = True) -> "PartialActionBundle":
        """Build a bundle from sparse tables.

        ``ideals`` maps group elements to :class:`IdealHandle`; missing
        entries are the zero ideal, except the identity which defaults to the
        whole space.  ``maps`` maps ``t`` to a pair ``(forward, backward)``
        where ``forward = phi_t`` and ``backward = phi_{t^-1}``.
        """
        e = group.identity
        table = dict(ideals)
        table.setdefault(e, whole_ideal(space))
        fmap: dict = {}
        for t, (fwd, bwd) in maps.items():
            fmap[t] = fwd
            fmap[group.inv(t)] = bwd
        fmap.setdefault(e, lambda a: a)

        def ideal_fn(t):
            return table.get(t, zero_ideal(space))

        def phi_fn(t):
            if t in fmap:
                return fmap[t]
            return lambda a: _zero_only(space, a)

        bundle = cls(group, space, ideal_fn, phi_fn, name)
        if check_inverses:
            for t in maps:
                for u in (t, group.inv(t)):
                    for x in bundle.ideal(u).pieces(1):
                        back = bundle.phi(group.inv(u))(x)
                        if bundle.phi(u)(back) != x:
                            raise DomainError(
                                f"maps for {group.format(t)} are not mutually inverse at {x!r}")
        return bundle

    def ideal(self, t) -> IdealHandle:
        hit = self._ideals.get(t)
        if hit is None:
            hit = self._ideal_fn(t)
            self._ideals[t] = hit
        return hit

    def phi(self, t) -> ElementMap:
        hit = self._maps.get(t)
        if hit is None:
            hit = self._phi_fn(t)
            self._maps[t] = hit
        return hit

    def apply(self, t, a: GbaElement) -> GbaElement:
        if not self.ideal(self.group.inv(t)).contains(a):
            raise DomainError(f"{a!r} is outside the domain of phi_{self.group.format(t)}")
        return self.phi(t)(a)

    def scope(self, depth: int) -> list:
        return self.group.elements(depth)

    def support(self, depth: int) -> list:
        """Group elements within ``depth`` whose ideal is nonzero."""
        return [t for t in self.scope(depth) if not self.ideal(t).is_zero]


def _zero_only(space, a):
    if not a.is_bottom():
        raise DomainError(f"{a!r} is outside a zero ideal")
    return a


def _image_of_ideal(bundle, s, ideal: IdealHandle) -> IdealHandle:
    """``phi_s`` applied to an ideal contained in ``I_{s^-1}`` (via its bound)."""
    if ideal.is_zero:
        return ideal
    top = ideal.top_element()
    if top is None:
        if bundle.group.length(s) != 0 and bundle.ideal(s).bound is not None:
            raise DomainError("cannot transport an unbounded ideal")
        return ideal
    return IdealHandle(bundle.space, [bundle.phi(s)(top)])


def verify_partial_action(bundle: PartialActionBundle, depth: int = 3,
                          piece_depth: int = 1) -> Report:
    """Check the three partial-action axioms on words of length at most ``depth``.

    Axiom (2) is compared through the bounds of the principal ideals involved;
    axiom (3), inverse consistency and the isomorphism property are checked on
    the depth-``piece_depth`` pieces of the relevant ideals.
    """
    G, space = bundle.group, bundle.space
    rep = Report(f"partial action {bundle.name} (word bound {depth})")
    words = bundle.scope(depth)
    active = [t for t in words if not bundle.ideal(t).is_zero]
    fmt = G.format
    e = G.identity

    # (1) unit
    I_e = bundle.ideal(e)
    unit_ok = I_e.is_whole
    witness = None if unit_ok else f"I_1 = {I_e!r}"
    if unit_ok:
        for x in I_e.pieces(piece_depth):
            if bundle.phi(e)(x) != x:
                unit_ok, witness = False, f"phi_1({x!r}) = {bundle.phi(e)(x)!r}"
                break
    rep.add("axiom 1: I_1 is everything and phi_1 is the identity", unit_ok, witness=witness)

    # (2) ideal compatibility
    ok, witness = True, None
    for s in active:
        s_inv = G.inv(s)
        for t in words:
            st = G.mul(s, t)
            lhs = _image_of_ideal(bundle, s, bundle.ideal(s_inv).meet(bundle.ideal(t)))
            rhs = bundle.ideal(s).meet(bundle.ideal(st))
            if lhs != rhs:
                ok, witness = False, f"s={fmt(s)}, t={fmt(t)}: {lhs!r} vs {rhs!r}"
                break
        if not ok:
            break
    rep.add("axiom 2: phi_s(I_s^-1 ^ I_t) = I_s ^ I_st", ok, witness=witness)

    # (3) composition
    ok, witness = True, None
    checked = 0
    for t, u in itertools.product(active, repeat=2):
        s = G.mul(u, G.inv(t))
        if G.length(s) > depth:
            continue
        dom = bundle.ideal(G.inv(t)).meet(bundle.ideal(G.inv(u)))
        if dom.is_zero:
            continue
        for x in dom.pieces(piece_depth):
            checked += 1
            try:
                a = bundle.phi(s)(bundle.phi(t)(x))
            except DomainError as exc:
                ok, witness = False, f"s={fmt(s)}, t={fmt(t)}, x={x!r}: {exc}"
                break
            b = bundle.phi(u)(x)
            if a != b:
                ok, witness = False, f"s={fmt(s)}, t={fmt(t)}, x={x!r}: {a!r} vs {b!r}"
                break
        if not ok:
            break
    rep.add("axiom 3: phi_s phi_t = phi_st on I_t^-1 ^ I_(st)^-1", ok,
            detail=f"{checked} pieces", witness=witness)

    # inverse consistency and isomorphism on pieces
    ok, witness = True, None
    for t in words:
        if bundle.ideal(t).is_zero != bundle.ideal(G.inv(t)).is_zero:
            ok, witness = False, f"I_{fmt(t)} and its inverse differ in triviality"
            break
    for t in active if ok else []:
        pieces = bundle.ideal(G.inv(t)).pieces(piece_depth)
        phi, back = bundle.phi(t), bundle.phi(G.inv(t))
        if phi(space.bottom()) != space.bottom():
            ok, witness = False, f"phi_{fmt(t)}(0) != 0"
        images = [phi(x) for x in pieces]
        for x, y in zip(pieces, images):
            if not bundle.ideal(t).contains(y) or back(y) != x or y.is_bottom():
                ok, witness = False, f"t={fmt(t)}, x={x!r}"
                break
        for (x1, y1), (x2, y2) in itertools.combinations(zip(pieces, images), 2):
            if not (y1 & y2).is_bottom() or phi(x1 | x2) != y1 | y2:
                ok, witness = False, f"t={fmt(t)}, pieces {x1!r}, {x2!r}"
                break
        if not ok:
            break
    rep.add("each phi_t is an isomorphism with inverse phi_t^-1", ok, witness=witness)
    return rep


def is_orthogonal(bundle: PartialActionBundle) -> bool:
    G = bundle.group
    if not isinstance(G, FreeGroup):
        raise DomainError("orthogonality is defined over free groups")
    for a, b in itertools.combinations(G.alphabet, 2):
        if not bundle.ideal(G.letter(a)).meet(bundle.ideal(G.letter(b))).is_zero:
            return False
    return True


def is_semi_saturated(bundle: PartialActionBundle, bound: int = 3) -> bool:
    G = bundle.group
    if not isinstance(G, FreeGroup):
        raise DomainError("semi-saturation is defined over free groups")
    words = G.elements(bound)
    for s, t in itertools.product(words, repeat=2):
        if not s or not t or len(s) + len(t) > bound:
            continue
        st = G.mul(s, t)
        if len(st) != len(s) + len(t):
            continue
        if not bundle.ideal(st) <= bundle.ideal(s):
            return False
    return True


def verify_action_morphism(f: GbaMorphism, b1: PartialActionBundle, b2: PartialActionBundle,
                           depth: int = 3, piece_depth: int = 1) -> Report:
    """Check that ``f`` is a morphism of partial actions on words up to ``depth``."""
    G = b1.group
    rep = Report(f"action morphism {b1.name} -> {b2.name}")
    s1, s2 = b1.space, b2.space
    if s1.is_finite():
        sample = s1.elements()
    else:
        sample = s1.generators(piece_depth)
    ok, witness = f(s1.bottom()) == s2.bottom(), None
    if ok:
        for a, b in itertools.product(sample, repeat=2):
            fa, fb = f(a), f(b)
            if f(a & b) != fa & fb or f(a | b) != fa | fb or f(a - b) != fa - fb:
                ok, witness = False, f"{a!r}, {b!r}"
                break
    rep.add("GBA morphism", ok, witness=witness)

    ok, witness = True, None
    for t in b1.support(depth):
        top = b1.ideal(t).top_element()
        probes = [top] if top is not None else b1.ideal(t).pieces(piece_depth)
        for p in probes:
            if not b2.ideal(t).contains(f(p)):
                ok, witness = False, f"t={G.format(t)}: f({p!r}) = {f(p)!r}"
                break
        if not ok:
            break
    rep.add("f(I_1,t) inside I_2,t", ok, witness=witness)

    ok, witness = True, None
    for t in b1.support(depth):
        for x in b1.ideal(G.inv(t)).pieces(piece_depth):
            lhs = f(b1.phi(t)(x))
            rhs = b2.phi(t)(f(x))
            if lhs != rhs:
                ok, witness = False, f"t={G.format(t)}, x={x!r}"
                break
        if not ok:
            break
    rep.add("f phi_1,t = phi_2,t f", ok, witness=witness)
    return rep
