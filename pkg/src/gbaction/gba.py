"""Generalized Boolean algebras.

A generalized Boolean algebra (GBA) is a distributive lattice with a bottom
element in which every interval ``[0, a]`` is complemented.  This module
provides a small capability contract (:class:`GbaSpace`) and three concrete
realizations:

* :class:`PowerSpace` -- all subsets of a finite atom list, stored as bitsets;
* :class:`FiniteCofiniteSpace` -- finite (and optionally cofinite) subsets of
  the natural numbers;
* :class:`CylinderTreeSpace` -- compact open sets of the end space of a
  finitely branching rooted forest, stored as finite sets of cylinders.

Elements are :class:`GbaElement` values supporting ``&`` (meet), ``|``
(join), ``-`` (relative complement) and ``<=`` (order).
"""

from __future__ import annotations

import itertools
import random
from functools import reduce
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .errors import BoundExceeded, DomainError, UnsupportedError

#: Exhaustive checks on finite spaces are refused above this many elements.
EXHAUSTIVE_LIMIT = 1 << 12


class GbaElement:
    """An element of a :class:`GbaSpace` in canonical form."""

    __slots__ = ("space", "payload")

    def __init__(self, space: "GbaSpace", payload):
        self.space = space
        self.payload = payload

    def _check(self, other):
        if not isinstance(other, GbaElement) or other.space is not self.space:
            raise DomainError("operands belong to different GBA spaces")

    def __and__(self, other):
        self._check(other)
        return self.space.meet(self, other)

    def __or__(self, other):
        self._check(other)
        return self.space.join(self, other)

    def __sub__(self, other):
        self._check(other)
        return self.space.diff(self, other)

    def __le__(self, other):
        self._check(other)
        return self.space.le(self, other)

    def __ge__(self, other):
        return other.__le__(self)

    def __eq__(self, other):
        if not isinstance(other, GbaElement):
            return NotImplemented
        return self.space is other.space and self.payload == other.payload

    def __hash__(self):
        return hash((id(self.space), self.payload))

    def is_bottom(self) -> bool:
        return self == self.space.bottom()

    def __bool__(self):
        return not self.is_bottom()

    def sort_key(self):
        return self.space.sort_key(self.payload)

    def __repr__(self):
        return self.space.format(self.payload)


class GbaSpace:
    """Capability contract shared by all realizations.

    Subclasses implement the payload-level hooks ``_meet``, ``_join``,
    ``_diff``, ``_bottom`` and optionally ``_top``.
    """

    tag = "abstract"

    # payload hooks -----------------------------------------------------
    def _meet(self, p, q):
        raise NotImplementedError

    def _join(self, p, q):
        raise NotImplementedError

    def _diff(self, p, q):
        raise NotImplementedError

    def _bottom(self):
        raise NotImplementedError

    def _top(self):
        return None

    # element level -----------------------------------------------------
    def wrap(self, payload) -> GbaElement:
        return GbaElement(self, payload)

    def own(self, a: GbaElement) -> GbaElement:
        if not isinstance(a, GbaElement) or a.space is not self:
            raise DomainError(f"{a!r} does not belong to this space")
        return a

    def meet(self, a, b):
        return self.wrap(self._meet(self.own(a).payload, self.own(b).payload))

    def join(self, a, b):
        return self.wrap(self._join(self.own(a).payload, self.own(b).payload))

    def diff(self, a, b):
        return self.wrap(self._diff(self.own(a).payload, self.own(b).payload))

    def lattice_op(self, op: str, a, b):
        if op == "meet":
            return self.meet(a, b)
        if op == "join":
            return self.join(a, b)
        if op == "diff":
            return self.diff(a, b)
        raise DomainError(f"unknown lattice operation {op!r}")

    def bottom(self) -> GbaElement:
        return self.wrap(self._bottom())

    def top(self) -> GbaElement | None:
        t = self._top()
        return None if t is None else self.wrap(t)

    def le(self, a, b) -> bool:
        return self.meet(a, b) == a

    def join_all(self, items: Iterable[GbaElement]) -> GbaElement:
        return reduce(self.join, items, self.bottom())

    def meet_all(self, items: Iterable[GbaElement]) -> GbaElement:
        items = list(items)
        if not items:
            t = self.top()
            if t is None:
                raise DomainError("empty meet in a space without top")
            return t
        return reduce(self.meet, items)

    # enumeration and sampling -----------------------------------------
    def is_finite(self) -> bool:
        return False

    def elements(self) -> list[GbaElement]:
        raise UnsupportedError(f"{self.tag} realization is not finite")

    def pieces(self, a: GbaElement, depth: int = 0) -> list[GbaElement]:
        """Split ``a`` into pairwise disjoint nonzero elements joining to ``a``."""
        raise NotImplementedError

    def generators(self, depth: int = 2) -> list[GbaElement]:
        """A finite family of elements used for non-exhaustive checks."""
        raise NotImplementedError

    def random_element(self, rng: random.Random, below: GbaElement | None = None,
                       depth: int = 2) -> GbaElement:
        if below is None:
            below = self.top()
            if below is None:
                raise UnsupportedError("no top; pass an explicit bound")
        parts = self.pieces(below, depth)
        return self.join_all(p for p in parts if rng.random() < 0.5)

    def elements_below(self, bound: GbaElement, depth: int = 0,
                       limit: int = EXHAUSTIVE_LIMIT) -> list[GbaElement]:
        """All joins of the depth-``depth`` pieces of ``bound``."""
        parts = self.pieces(bound, depth)
        if 2 ** len(parts) > limit:
            raise BoundExceeded(f"{2 ** len(parts)} elements below bound")
        out = []
        for mask in range(2 ** len(parts)):
            out.append(self.join_all(p for i, p in enumerate(parts) if mask >> i & 1))
        return out

    # formatting ---------------------------------------------------------
    def sort_key(self, payload):
        return repr(payload)

    def format(self, payload) -> str:
        return repr(payload)


# ---------------------------------------------------------------------------
# finite power algebra


class PowerSpace(GbaSpace):
    """All subsets of a finite, ordered list of atoms.

    Parameters
    ----------
    atoms : sequence of hashable
        Atom labels; the order fixes the bit positions.

    Examples
    --------
    >>> P = PowerSpace([1, 2, 3])
    >>> P.subset({1, 2}) & P.subset({2, 3})
    {2}
    """

    tag = "finite-power"

    def __init__(self, atoms: Sequence[Hashable]):
        self.atoms = list(atoms)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        if len(self.index) != len(self.atoms):
            raise DomainError("duplicate atom labels")
        self.full = (1 << len(self.atoms)) - 1

    def subset(self, labels: Iterable[Hashable]) -> GbaElement:
        mask = 0
        for a in labels:
            try:
                mask |= 1 << self.index[a]
            except KeyError:
                raise DomainError(f"unknown atom {a!r}") from None
        return self.wrap(mask)

    def atom(self, label) -> GbaElement:
        return self.subset([label])

    def labels(self, a: GbaElement) -> list:
        mask = self.own(a).payload
        return [x for i, x in enumerate(self.atoms) if mask >> i & 1]

    def _meet(self, p, q):
        return p & q

    def _join(self, p, q):
        return p | q

    def _diff(self, p, q):
        return p & ~q

    def _bottom(self):
        return 0

    def _top(self):
        return self.full

    def le(self, a, b):
        return self.own(a).payload & ~self.own(b).payload == 0

    def is_finite(self):
        return True

    def size(self) -> int:
        return 1 << len(self.atoms)

    def elements(self):
        if self.size() > EXHAUSTIVE_LIMIT:
            raise BoundExceeded(f"power algebra has {self.size()} elements")
        return [self.wrap(m) for m in range(self.size())]

    def pieces(self, a, depth=0):
        mask = self.own(a).payload
        return [self.wrap(1 << i) for i in range(len(self.atoms)) if mask >> i & 1]

    def generators(self, depth=2):
        return [self.wrap(1 << i) for i in range(len(self.atoms))] + [self.top()]

    def random_element(self, rng, below=None, depth=2):
        bound = self.full if below is None else self.own(below).payload
        return self.wrap(rng.getrandbits(max(len(self.atoms), 1)) & bound)

    def sort_key(self, payload):
        return (bin(payload).count("1"), payload)

    def format(self, payload):
        names = [str(x) for i, x in enumerate(self.atoms) if payload >> i & 1]
        return "{" + ",".join(names) + "}"


# ---------------------------------------------------------------------------
# finite / cofinite subsets of the naturals


class FiniteCofiniteSpace(GbaSpace):
    """Finite subsets of ``N`` and, when ``cofinite`` is set, their complements.

    With ``cofinite=False`` this is the algebra of finite subsets of a
    countable set, which has no top element.  With ``cofinite=True`` it is
    the finite/cofinite Boolean algebra whose top is the whole of ``N``.
    Payloads are pairs ``(S, flag)`` meaning ``S`` when ``flag`` is false and
    ``N \\ S`` otherwise.
    """

    tag = "finite-cofinite"

    def __init__(self, cofinite: bool = False):
        self.cofinite = cofinite

    def finite(self, items: Iterable[int]) -> GbaElement:
        s = frozenset(items)
        if any(not isinstance(i, int) or i < 0 for i in s):
            raise DomainError("atoms are natural numbers")
        return self.wrap((s, False))

    def co(self, items: Iterable[int]) -> GbaElement:
        """The complement of a finite set."""
        if not self.cofinite:
            raise DomainError("cofinite sets are not members of this algebra")
        return self.wrap((frozenset(items), True))

    def _meet(self, p, q):
        (a, ca), (b, cb) = p, q
        if not ca and not cb:
            return (a & b, False)
        if not ca:
            return (a - b, False)
        if not cb:
            return (b - a, False)
        return (a | b, True)

    def _join(self, p, q):
        (a, ca), (b, cb) = p, q
        if not ca and not cb:
            return (a | b, False)
        if not ca:
            return (b - a, True)
        if not cb:
            return (a - b, True)
        return (a & b, True)

    def _diff(self, p, q):
        b, cb = q
        return self._meet(p, (b, not cb))

    def _bottom(self):
        return (frozenset(), False)

    def _top(self):
        return (frozenset(), True) if self.cofinite else None

    def pieces(self, a, depth=0):
        s, c = self.own(a).payload
        if not c:
            return [self.finite([i]) for i in sorted(s)]
        horizon = max(s, default=-1) + 1 + max(depth, 1)
        singles = [i for i in range(horizon) if i not in s]
        rest = self.wrap((s | frozenset(singles), True))
        return [self.finite([i]) for i in singles] + [rest]

    def generators(self, depth=2):
        gens = [self.finite([i]) for i in range(depth + 2)]
        if self.cofinite:
            gens.append(self.top())
        return gens

    def random_element(self, rng, below=None, depth=2):
        width = 6 + depth
        s = frozenset(i for i in range(width) if rng.random() < 0.4)
        flag = self.cofinite and rng.random() < 0.3
        x = self.wrap((s, flag))
        return x if below is None else x & below

    def sort_key(self, payload):
        s, c = payload
        return (c, len(s), sorted(s))

    def format(self, payload):
        s, c = payload
        body = "{" + ",".join(str(i) for i in sorted(s)) + "}"
        return f"N\\{body}" if c else body


# ---------------------------------------------------------------------------
# cylinder trees


class TreeStructure:
    """A finitely branching rooted forest in which every node has an end.

    Nodes are pairs ``(word, state)``; the children of a node depend only on
    its state, so the subtree below a node is determined by the state.
    Subclasses provide :meth:`roots`, :meth:`child_steps` and
    :meth:`parent`.
    """

    def roots(self) -> list[tuple]:
        raise NotImplementedError

    def child_steps(self, state) -> list[tuple]:
        """Pairs ``(letter, child_state)`` in a fixed order."""
        raise NotImplementedError

    def parent(self, node: tuple) -> tuple:
        raise NotImplementedError

    def children(self, node: tuple) -> list[tuple]:
        word, state = node
        return [(word + (letter,), s) for letter, s in self.child_steps(state)]

    def is_leaf(self, node: tuple) -> bool:
        return not self.child_steps(node[1])

    def node_key(self, node: tuple):
        word, state = node
        return (len(word), tuple(map(str, word)), str(state))

    def format_node(self, node: tuple) -> str:
        return repr(node)


class CylinderTreeSpace(GbaSpace):
    """Compact open subsets of the end space of a :class:`TreeStructure`.

    An end is an infinite branch or a branch stopping at a leaf.  The
    cylinder of a node is the set of ends passing through it.  An element is
    stored as the set of maximal cylinders it contains, which is a finite
    antichain; this form is unique, so equality is structural.  Operations
    expand both operands to a common depth, act on the resulting atoms and
    compress the answer.
    """

    def __init__(self, structure: TreeStructure, tag: str = "symbolic-tree"):
        self.structure = structure
        self.tag = tag
        self._roots = tuple(sorted(structure.roots(), key=structure.node_key))
        self._expand_cache: dict = {}

    # construction ------------------------------------------------------
    def from_nodes(self, nodes: Iterable[tuple]) -> GbaElement:
        nodes = list(nodes)
        if not nodes:
            return self.bottom()
        depth = max(len(n[0]) for n in nodes)
        atoms: set = set()
        for n in nodes:
            atoms.update(self._expand_node(n, depth))
        return self.wrap(self._compress(atoms))

    def cylinder(self, node: tuple) -> GbaElement:
        return self.from_nodes([node])

    def nodes(self, a: GbaElement) -> list[tuple]:
        return sorted(self.own(a).payload, key=self.structure.node_key)

    # expansion -----------------------------------------------------------
    def _suffixes(self, state, k):
        key = (state, k)
        hit = self._expand_cache.get(key)
        if hit is not None:
            return hit
        steps = self.structure.child_steps(state)
        if k == 0 or not steps:
            out = (((), state),)
        else:
            acc = []
            for letter, s in steps:
                for tail, end in self._suffixes(s, k - 1):
                    acc.append(((letter,) + tail, end))
            out = tuple(acc)
        self._expand_cache[key] = out
        return out

    def _expand_node(self, node, depth):
        word, state = node
        k = depth - len(word)
        if k <= 0:
            return [node]
        return [(word + tail, end) for tail, end in self._suffixes(state, k)]

    def expand(self, a: GbaElement, depth: int) -> set:
        """The atoms of ``a`` at the given depth (leaves above it are kept)."""
        out: set = set()
        for n in self.own(a).payload:
            out.update(self._expand_node(n, depth))
        return out

    def _compress(self, atoms: set) -> frozenset:
        st = self.structure
        current = set(atoms)
        if not current:
            return frozenset()
        depth = max(len(n[0]) for n in current)
        for d in range(depth, 0, -1):
            layer = [n for n in current if len(n[0]) == d]
            groups: dict = {}
            for n in layer:
                groups.setdefault(st.parent(n), []).append(n)
            for par, kids in groups.items():
                if len(kids) == len(st.children(par)):
                    current.difference_update(kids)
                    current.add(par)
        return frozenset(current)

    def _depth(self, *payloads):
        return max((len(n[0]) for p in payloads for n in p), default=0)

    def _binary(self, p, q, fn):
        d = self._depth(p, q)
        ea: set = set()
        eb: set = set()
        for n in p:
            ea.update(self._expand_node(n, d))
        for n in q:
            eb.update(self._expand_node(n, d))
        return self._compress(fn(ea, eb))

    def _meet(self, p, q):
        return self._binary(p, q, set.__and__)

    def _join(self, p, q):
        return self._binary(p, q, set.__or__)

    def _diff(self, p, q):
        return self._binary(p, q, set.__sub__)

    def _bottom(self):
        return frozenset()

    def _top(self):
        return self._compress(set(self._roots))

    def max_depth(self, a: GbaElement) -> int:
        return self._depth(self.own(a).payload)

    def pieces(self, a, depth=0):
        d = max(depth, self.max_depth(a))
        atoms = sorted(self.expand(a, d), key=self.structure.node_key)
        return [self.wrap(self._compress({n})) for n in atoms]

    def generators(self, depth=2):
        return self.pieces(self.top(), depth) + [self.top()]

    def sort_key(self, payload):
        return sorted(self.structure.node_key(n) for n in payload)

    def format(self, payload):
        st = self.structure
        inner = ", ".join(st.format_node(n) for n in sorted(payload, key=st.node_key))
        return "{" + inner + "}"


# ---------------------------------------------------------------------------
# ideals, covers, generation, morphisms


class IdealHandle:
    """An ideal of a GBA.

    ``bounds=None`` denotes the whole space; otherwise the ideal consists of
    all elements below the join of ``bounds`` (the empty list gives the zero
    ideal).
    """

    def __init__(self, space: GbaSpace, bounds: Sequence[GbaElement] | None):
        self.space = space
        if bounds is None:
            self.bound = None
        else:
            self.bound = space.join_all(space.own(b) for b in bounds)
        top = space.top()
        if self.bound is not None and top is not None and self.bound == top:
            self.bound = None

    @property
    def is_whole(self) -> bool:
        return self.bound is None

    @property
    def is_zero(self) -> bool:
        return self.bound is not None and self.bound.is_bottom()

    def top_element(self) -> GbaElement | None:
        """The largest member, or ``None`` when the ideal is the whole of a
        space without top."""
        if self.bound is None:
            return self.space.top()
        return self.bound

    def contains(self, a: GbaElement) -> bool:
        self.space.own(a)
        return self.bound is None or a <= self.bound

    __contains__ = contains

    def meet(self, other: "IdealHandle") -> "IdealHandle":
        if self.bound is None:
            return other
        if other.bound is None:
            return self
        return IdealHandle(self.space, [self.bound & other.bound])

    def __le__(self, other: "IdealHandle") -> bool:
        if other.bound is None:
            return True
        if self.bound is None:
            return False
        return self.bound <= other.bound

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.space is other.space and self.bound == other.bound

    def __hash__(self):
        return hash(self.bound)

    def pieces(self, depth: int = 0) -> list[GbaElement]:
        top = self.top_element()
        if top is None:
            return self.space.generators(depth)
        return self.space.pieces(top, depth)

    def __repr__(self):
        return "Ideal(whole)" if self.bound is None else f"Ideal(<= {self.bound!r})"


def ideal_below(space: GbaSpace, bounds: Sequence[GbaElement]) -> IdealHandle:
    """The ideal of all elements below the join of ``bounds``."""
    if not bounds:
        raise DomainError("ideal_below needs at least one bound")
    return IdealHandle(space, list(bounds))


def whole_ideal(space: GbaSpace) -> IdealHandle:
    return IdealHandle(space, None)


def zero_ideal(space: GbaSpace) -> IdealHandle:
    return IdealHandle(space, [])


def is_ideal(space: GbaSpace, subset: Sequence[GbaElement]) -> bool:
    """Check closure under joins of members and meets with anything.

    Exhaustive on finite spaces; otherwise meets are tested against the
    space's generator family.
    """
    members = {space.own(a) for a in subset}
    if not members:
        return False
    for a, b in itertools.product(members, repeat=2):
        if a | b not in members:
            return False
    others = space.elements() if space.is_finite() else space.generators()
    for a in members:
        for x in others:
            if a & x not in members:
                return False
    return True


def is_cover(space: GbaSpace, family: Sequence[GbaElement], probe: GbaElement) -> bool:
    """True when ``probe`` lies below the join of ``family``."""
    return space.own(probe) <= space.join_all(space.own(f) for f in family)


def generated_subalgebra(space: GbaSpace, family: Sequence[GbaElement]) -> set[GbaElement]:
    """Least subset containing ``family`` and bottom closed under the lattice operations."""
    if not space.is_finite():
        raise UnsupportedError("generated_subalgebra needs a finite realization")
    closed = {space.bottom()} | {space.own(f) for f in family}
    frontier = set(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(closed):
                for c in (a & b, a | b, a - b, b - a):
                    if c not in closed:
                        new.add(c)
        closed |= new
        frontier = new
    return closed


def is_gba_morphism(f: Callable[[GbaElement], GbaElement], source: GbaSpace,
                    target: GbaSpace) -> bool:
    """Exhaustively test that ``f`` preserves bottom, meet, join and diff."""
    if f(source.bottom()) != target.bottom():
        return False
    elems = source.elements()
    images = {a: f(a) for a in elems}
    for a in elems:
        if images[a].space is not target:
            return False
    for a, b in itertools.product(elems, repeat=2):
        fa, fb = images[a], images[b]
        if images[a & b] != fa & fb:
            return False
        if images[a | b] != fa | fb:
            return False
        if images[a - b] != fa - fb:
            return False
    return True


class GbaMorphism:
    """A GBA homomorphism together with a membership test for its image."""

    def __init__(self, source: GbaSpace, target: GbaSpace,
                 fn: Callable[[GbaElement], GbaElement],
                 image_contains: Callable[[GbaElement], bool] | None = None):
        self.source = source
        self.target = target
        self.fn = fn
        self._image_contains = image_contains
        self._image: set | None = None

    def __call__(self, a: GbaElement) -> GbaElement:
        return self.fn(self.source.own(a))

    def image_contains(self, b: GbaElement) -> bool:
        if self._image_contains is not None:
            return self._image_contains(b)
        if self._image is None:
            self._image = {self(a) for a in self.source.elements()}
        return b in self._image


def identity_map(space: GbaSpace) -> GbaMorphism:
    return GbaMorphism(space, space, lambda a: a, lambda b: True)


def iter_subsets(items: Sequence[Any]) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def spanned_dimension(space: GbaSpace, family: Iterable[GbaElement]) -> int:
    """Rank of the span of the indicators of a meet-closed family.

    Equal to the number of atoms of the ring of sets the family generates.
    """
    cells: list[GbaElement] = []
    for V in family:
        V = space.own(V)
        nxt = []
        rest = V
        for c in cells:
            inside, outside = c & V, c - V
            if inside:
                nxt.append(inside)
            if outside:
                nxt.append(outside)
            rest = rest - c
        if rest:
            nxt.append(rest)
        cells = nxt
    return len(cells)
