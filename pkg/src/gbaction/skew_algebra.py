"""Locally constant functions and partial skew group rings.

An :class:`LcFunction` is a finitely supported ring-valued function on the
points of a GBA, stored as disjoint regions ``(value, support)`` with
distinct nonzero values.  A :class:`SkewRing` is the partial skew group ring
built from such functions and a :class:`~gbaction.partial_action.PartialActionBundle`;
its elements are :class:`SkewElement` values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError
from .gba import GbaElement, GbaMorphism, GbaSpace, IdealHandle
from .partial_action import PartialActionBundle, is_semi_saturated, verify_action_morphism
from .report import Report
from .rings import Ring


@dataclass(frozen=True)
class LcFunction:
    ring: Ring
    terms: tuple  # ((value, support), ...) sorted by value key

    def __bool__(self):
        return bool(self.terms)

    def supports(self) -> list[GbaElement]:
        return [A for _, A in self.terms]

    def domain(self, space: GbaSpace) -> GbaElement:
        return space.join_all(self.supports())

    def value_at(self, point: GbaElement):
        """Value on a point-like element (one meeting exactly one region or none)."""
        for v, A in self.terms:
            if not (A & point).is_bottom():
                return v
        return self.ring.zero

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{self.ring.format(v)}*{A!r}" for v, A in self.terms)


def _collect(ring: Ring, regions: Iterable) -> LcFunction:
    by_value: dict = {}
    for v, A in regions:
        v = ring(v)
        if v == 0 or A.is_bottom():
            continue
        prev = by_value.get(v)
        by_value[v] = A if prev is None else prev | A
    terms = tuple(sorted(by_value.items(), key=lambda t: ring.key(t[0])))
    return LcFunction(ring, terms)


def lc_zero(ring: Ring) -> LcFunction:
    return LcFunction(ring, ())


def indicator(ring: Ring, U: GbaElement, value=1) -> LcFunction:
    return _collect(ring, [(value, U)])


def lc_add(f: LcFunction, g: LcFunction) -> LcFunction:
    if not f.terms:
        return g
    if not g.terms:
        return f
    ring = f.ring
    space = f.terms[0][1].space
    if g.terms[0][1].space is not space:
        raise DomainError("functions live on different spaces")
    dom_f, dom_g = f.domain(space), g.domain(space)
    regions = []
    for r, A in f.terms:
        regions.append((r, A - dom_g))
        for s, B in g.terms:
            regions.append((ring.add(r, s), A & B))
    for s, B in g.terms:
        regions.append((s, B - dom_f))
    return _collect(ring, regions)


def lc_mul(f: LcFunction, g: LcFunction) -> LcFunction:
    ring = f.ring
    return _collect(ring, [(ring.mul(r, s), A & B) for r, A in f.terms for s, B in g.terms])


def lc_scale(r, f: LcFunction) -> LcFunction:
    ring = f.ring
    return _collect(ring, [(ring.mul(r, v), A) for v, A in f.terms])


def lc_neg(f: LcFunction) -> LcFunction:
    return lc_scale(f.ring.neg(f.ring.one), f)


def lc_map(f: LcFunction, phi: Callable[[GbaElement], GbaElement]) -> LcFunction:
    """Transport along a GBA isomorphism (disjointness and values are kept)."""
    return LcFunction(f.ring, tuple((v, phi(A)) for v, A in f.terms))


def lc_normalize(ring: Ring, space: GbaSpace, ideal: IdealHandle | None,
                 raw: Sequence[tuple]) -> LcFunction:
    """Canonical form of a sum of ``value * 1_support`` terms."""
    out = lc_zero(ring)
    for value, support in raw:
        space.own(support)
        if ideal is not None and not ideal.contains(support):
            raise DomainError(f"support {support!r} lies outside the ideal")
        out = lc_add(out, indicator(ring, support, value))
    return out


# ---------------------------------------------------------------------------
# the skew ring


class SkewElement:
    """A finite sum of terms ``f_t delta_t``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "SkewRing", terms: Mapping):
        self.algebra = algebra
        G = algebra.group
        items = [(g, f) for g, f in terms.items() if f.terms]
        items.sort(key=lambda item: G.sort_key(item[0]))
        self.terms = tuple(items)

    def _same(self, other):
        if not isinstance(other, SkewElement) or other.algebra is not self.algebra:
            raise DomainError("elements of different skew rings")

    def __add__(self, other):
        self._same(other)
        return self.algebra.add(self, other)

    def __sub__(self, other):
        self._same(other)
        return self.algebra.add(self, self.algebra.scale(self.algebra.ring.neg(1), other))

    def __neg__(self):
        return self.algebra.scale(self.algebra.ring.neg(1), self)

    def __mul__(self, other):
        if isinstance(other, SkewElement):
            self._same(other)
            return self.algebra.mul(self, other)
        return self.algebra.scale(other, self)

    def __rmul__(self, other):
        return self.algebra.scale(other, self)

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def component(self, g) -> LcFunction:
        for h, f in self.terms:
            if h == g:
                return f
        return lc_zero(self.algebra.ring)

    def degrees(self) -> list:
        return [g for g, _ in self.terms]

    def __repr__(self):
        return self.algebra.format(self)


class SkewRing:
    """The partial skew group ring of a bundle with coefficients in ``ring``."""

    def __init__(self, bundle: PartialActionBundle, ring: Ring):
        self.bundle = bundle
        self.ring = ring
        self.group = bundle.group
        self.space = bundle.space

    # constructors ------------------------------------------------------
    def zero(self) -> SkewElement:
        return SkewElement(self, {})

    def delta(self, U: GbaElement, g, value=1) -> SkewElement:
        """``value * U delta_g``; ``U`` must lie in ``I_g``."""
        self.space.own(U)
        if not self.bundle.ideal(g).contains(U):
            raise DomainError(f"{U!r} is not in I_{self.group.format(g)}")
        return SkewElement(self, {g: indicator(self.ring, U, value)})

    def element(self, terms: Mapping) -> SkewElement:
        for g, f in terms.items():
            for _, A in f.terms:
                if not self.bundle.ideal(g).contains(A):
                    raise DomainError(f"coefficient support {A!r} not in I_{self.group.format(g)}")
        return SkewElement(self, terms)

    def unit(self) -> SkewElement | None:
        top = find_unit(self.bundle)
        return None if top is None else self.delta(top, self.group.identity)

    # arithmetic ----------------------------------------------------------
    def add(self, x: SkewElement, y: SkewElement) -> SkewElement:
        acc = dict(x.terms)
        for g, f in y.terms:
            acc[g] = lc_add(acc[g], f) if g in acc else f
        return SkewElement(self, acc)

    def scale(self, r, x: SkewElement) -> SkewElement:
        r = self.ring(r)
        return SkewElement(self, {g: lc_scale(r, f) for g, f in x.terms})

    def mul(self, x: SkewElement, y: SkewElement) -> SkewElement:
        G, B = self.group, self.bundle
        acc: dict = {}
        for s, a in x.terms:
            back = lc_map(a, B.phi(G.inv(s)))
            for t, b in y.terms:
                c = lc_mul(back, b)
                if not c.terms:
                    continue
                c = lc_map(c, B.phi(s))
                st = G.mul(s, t)
                acc[st] = lc_add(acc[st], c) if st in acc else c
        return SkewElement(self, acc)

    def product(self, *xs: SkewElement) -> SkewElement:
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    # structure -------------------------------------------------------------
    def local_unit_for(self, x: SkewElement) -> GbaElement:
        """An element ``U`` with ``(U delta_e) x = x = x (U delta_e)``."""
        G, B, space = self.group, self.bundle, self.space
        U = space.bottom()
        for g, f in x.terms:
            V = f.domain(space)
            U = U | V | B.phi(G.inv(g))(V)
        return U

    def graded_component(self, x: SkewElement, g) -> LcFunction:
        return x.component(g)

    def format(self, x: SkewElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for g, f in x.terms:
            for v, A in f.terms:
                parts.append(f"{self.ring.format(v)}*{A!r}d[{self.group.format(g)}]")
        return " + ".join(parts)


def find_unit(bundle: PartialActionBundle) -> GbaElement | None:
    """The top of the underlying GBA, or ``None`` when it has none."""
    return bundle.space.top()


def graded_component(x: SkewElement, g) -> LcFunction:
    return x.component(g)


def induced_morphism(f: GbaMorphism, A1: SkewRing, A2: SkewRing, depth: int = 3):
    """The graded ring map ``a delta_t -> (f o a) delta_t``.

    The action morphism is verified first; a failing verification raises
    :class:`DomainError`.
    """
    rep = verify_action_morphism(f, A1.bundle, A2.bundle, depth)
    if not rep.ok:
        raise DomainError(f"not a morphism of partial actions: {rep.first_failure().line()}")

    def apply(x: SkewElement) -> SkewElement:
        if x.algebra is not A1:
            raise DomainError("element of the wrong skew ring")
        return SkewElement(A2, {g: lc_map(c, f) for g, c in x.terms})

    return apply


# ---------------------------------------------------------------------------
# verification suites


def _random_in(space: GbaSpace, ideal: IdealHandle, rng: random.Random, depth: int):
    top = ideal.top_element()
    if top is None:
        return space.random_element(rng, None, depth)
    return space.random_element(rng, top, depth)


def verify_skew_identities(algebra: SkewRing, trials: int = 500, seed: int = 0,
                           depth: int = 2, piece_depth: int = 2) -> Report:
    """Randomized check of the basic computation rules for ``U delta_g``.

    Each trial draws group elements from the words of length at most
    ``depth`` with nonzero ideal and random elements below the relevant
    bounds, and compares a product computed with the general multiplication
    rule against its closed form.
    """
    rng = random.Random(seed)
    B, G, space, R = algebra.bundle, algebra.group, algebra.space, algebra.ring
    e = G.identity
    active = B.support(depth)
    rep = Report(f"skew identities ({trials} trials, seed {seed})")
    names = {
        2: "1_U 1_V = 1_(U^V)",
        3: "phi~_g(1_U) = 1_phi_g(U)",
        4: "(U d_g)(V d_g') = phi_g(V ^ phi_g^-1(U)) d_gg'",
        5: "(U d_e)(V d_g) = (U ^ V) d_g",
        6: "(V d_g)(U d_e) = phi_g(U ^ phi_g^-1(V)) d_g",
        7: "(U' d_e)(V d_g)(U d_e) = (U' ^ phi_g(U ^ phi_g^-1(V))) d_g",
        8: "(U d_g)(V d_e)(phi_g^-1(U) d_g^-1) = phi_g(V ^ phi_g^-1(U)) d_e",
        9: "(U d_g)(phi_g^-1(U) d_g^-1) = U d_e",
        10: "inclusion-exclusion for U = U_1 v ... v U_n",
    }
    failures: dict = {}
    counts = {k: 0 for k in names}

    def anything():
        return _random_in(space, B.ideal(e), rng, piece_depth)

    def inside(g):
        return _random_in(space, B.ideal(g), rng, piece_depth)

    def fail(item, witness):
        failures.setdefault(item, witness)

    for _ in range(trials):
        g = rng.choice(active)
        g2 = rng.choice(active)
        gi = G.inv(g)
        phi, phinv = B.phi(g), B.phi(gi)
        U, V, W = inside(g), inside(g2), anything()
        X, Y = anything(), anything()

        counts[2] += 1
        if lc_mul(indicator(R, X), indicator(R, Y)) != indicator(R, X & Y):
            fail(2, (X, Y))

        counts[3] += 1
        Ui = inside(gi)
        if lc_map(indicator(R, Ui), phi) != indicator(R, phi(Ui)):
            fail(3, (G.format(g), Ui))

        counts[4] += 1
        lhs = algebra.delta(U, g) * algebra.delta(V, g2)
        rhs = algebra.delta(phi(V & phinv(U)), G.mul(g, g2))
        if lhs != rhs:
            fail(4, (G.format(g), G.format(g2), U, V))

        counts[5] += 1
        Vg = inside(g)
        if algebra.delta(X, e) * algebra.delta(Vg, g) != algebra.delta(X & Vg, g):
            fail(5, (X, Vg, G.format(g)))

        counts[6] += 1
        if algebra.delta(Vg, g) * algebra.delta(X, e) != algebra.delta(phi(X & phinv(Vg)), g):
            fail(6, (Vg, X, G.format(g)))

        counts[7] += 1
        lhs = algebra.product(algebra.delta(Y, e), algebra.delta(Vg, g), algebra.delta(X, e))
        if lhs != algebra.delta(Y & phi(X & phinv(Vg)), g):
            fail(7, (Y, Vg, X, G.format(g)))

        counts[8] += 1
        lhs = algebra.product(algebra.delta(U, g), algebra.delta(W, e), algebra.delta(phinv(U), gi))
        if lhs != algebra.delta(phi(W & phinv(U)), e):
            fail(8, (U, W, G.format(g)))

        counts[9] += 1
        if algebra.delta(U, g) * algebra.delta(phinv(U), gi) != algebra.delta(U, e):
            fail(9, (U, G.format(g)))

        counts[10] += 1
        parts = [inside(g) for _ in range(rng.randint(1, 4))]
        total = space.join_all(parts)
        acc = algebra.zero()
        for r in range(1, len(parts) + 1):
            for J in itertools.combinations(parts, r):
                sign = 1 if r % 2 == 1 else -1
                acc = acc + algebra.delta(space.meet_all(J), g, sign)
        if acc != algebra.delta(total, g):
            fail(10, (parts, G.format(g)))

    for k, name in names.items():
        rep.add(f"item {k}: {name}", k not in failures, detail=f"{counts[k]} instances",
                witness=failures.get(k))
    return rep


def verify_local_units(algebra: SkewRing, samples: int = 500, seed: int = 0,
                       depth: int = 2, max_terms: int = 3, piece_depth: int = 2) -> Report:
    """``local_unit_for`` gives two-sided units; ``{U delta_e}`` is closed under meet and join."""
    rng = random.Random(seed)
    B, G, space, R = algebra.bundle, algebra.group, algebra.space, algebra.ring
    e = G.identity
    active = B.support(depth)
    rep = Report(f"local units ({samples} samples, seed {seed})")
    bad_unit = bad_lattice = None
    for _ in range(samples):
        x = algebra.zero()
        for _ in range(rng.randint(1, max_terms)):
            g = rng.choice(active)
            U = _random_in(space, B.ideal(g), rng, piece_depth)
            x = x + algebra.delta(U, g, R.random(rng))
        U = algebra.local_unit_for(x)
        u = algebra.delta(U, e)
        if u * x != x or x * u != x:
            bad_unit = bad_unit or (x, U)
        P = _random_in(space, B.ideal(e), rng, piece_depth)
        Q = _random_in(space, B.ideal(e), rng, piece_depth)
        p, q = algebra.delta(P, e), algebra.delta(Q, e)
        meet_ok = p * q == algebra.delta(P & Q, e) == q * p and p * p == p
        join_ok = p + q - p * q == algebra.delta(P | Q, e)
        if not (meet_ok and join_ok):
            bad_lattice = bad_lattice or (P, Q)
    rep.add("local_unit_for is a two-sided unit", bad_unit is None, witness=bad_unit)
    rep.add("U d_e idempotent, commuting, closed under meet and join", bad_lattice is None,
            witness=bad_lattice)
    return rep


@dataclass
class GeneratorClosure:
    generators: list
    reached: dict  # group element -> set of elements U with U delta_g generated
    missing: list  # (g, U) targets not reached
    report: Report


def generators_semi_saturated(algebra: SkewRing, C: Sequence[GbaElement],
                              covers: Mapping, bound: int = 2, piece_depth: int = 1,
                              check_semi_saturation: bool = True) -> GeneratorClosure:
    """Generators ``{U d_e : U in C} + {V d_a : V in covers[a]}`` and their closure.

    ``covers`` maps letters and inverse letters (as group words) to families
    covering the corresponding ideals.  The closure repeatedly multiplies
    known homogeneous elements ``U d_g`` and forms ``U d_g + V d_g - (U^V) d_g``
    and ``U d_g - (U^V) d_g``, verifying each identity with the ring
    operations, until nothing new appears among the elements below the
    depth-``piece_depth`` pieces of ``I_g`` for ``|g| <= bound``.
    """
    B, G, space = algebra.bundle, algebra.group, algebra.space
    e = G.identity
    if check_semi_saturation and not is_semi_saturated(B, max(bound, 2)):
        raise DomainError("the bundle is not semi-saturated")
    gens = [(U, e) for U in C] + [(V, g) for g, fam in covers.items() for V in fam]
    targets: dict = {}
    for g in B.support(bound):
        targets[g] = set(space.elements_below(B.ideal(g).top_element(), piece_depth))
    known: dict = {g: set() for g in targets}
    for U, g in gens:
        if g in known and U in targets[g]:
            known[g].add(U)
    rep = Report(f"generated subalgebra (word bound {bound})")
    bad = None
    changed = True
    while changed:
        changed = False
        snapshot = [(g, U) for g in known for U in known[g]]
        new: list = []
        for (g, U), (h, V) in itertools.product(snapshot, repeat=2):
            gh = G.mul(g, h)
            if gh not in known:
                continue
            prod = algebra.delta(U, g) * algebra.delta(V, h)
            comps = prod.terms
            if not comps:
                continue
            (deg, f), = comps
            if len(f.terms) != 1 or f.terms[0][0] != algebra.ring.one:
                bad = bad or (U, g, V, h)
                continue
            W = f.terms[0][1]
            if W in targets[gh] and W not in known[gh]:
                new.append((gh, W))
            if g == h and (U & V) in known[g]:
                M = U & V
                join = algebra.delta(U, g) + algebra.delta(V, g) - algebra.delta(M, g)
                if join != algebra.delta(U | V, g):
                    bad = bad or ("join", U, V)
                elif (U | V) in targets[g] and (U | V) not in known[g]:
                    new.append((g, U | V))
                d = algebra.delta(U, g) - algebra.delta(M, g)
                if d != algebra.delta(U - V, g):
                    bad = bad or ("diff", U, V)
                elif (U - V) in targets[g] and (U - V) not in known[g]:
                    new.append((g, U - V))
        for g, W in new:
            if W not in known[g]:
                known[g].add(W)
                changed = True
    missing = []
    for g in sorted(targets, key=G.sort_key):
        for U in sorted(targets[g] - known[g] - {space.bottom()}, key=lambda a: a.sort_key()):
            missing.append((g, U))
    rep.add("closure identities hold", bad is None, witness=bad)
    rep.add("every spanning element within bound is generated", not missing,
            detail=f"{sum(len(t) for t in targets.values())} targets",
            witness=missing[:3] if missing else None)
    return GeneratorClosure([algebra.delta(U, g) for U, g in gens], known, missing, rep)
