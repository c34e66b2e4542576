"""Graph inverse semigroups and Leavitt path algebras as partial skew rings.

The graph inverse semigroup of a finite directed graph consists of pairs of
paths ``(p, q)`` with a common range, plus a zero.  Its tight spectrum is
the space of boundary paths; compact opens are represented on the tree of
finite paths (:class:`GraphTree`) so that ``V_(p,p)`` is the cylinder of
``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DomainError
from .gba import CylinderTreeSpace, GbaElement, TreeStructure, spanned_dimension
from .groups import FreeGroup
from .inverse_semigroup import (ZERO, Grading, InverseSemigroup, SemigroupAlgebra,
                                TreeTightModel, natural_order, verify_inverse_semigroup,
                                verify_pure_grading)
from .labelled_algebra import LabelledGraph, LabelledSemigroup, LabelledSpace
from .report import Report
from .rings import INTEGERS, Ring
from .skew_algebra import SkewElement


class DirectedGraph:
    """A finite directed graph.

    Parameters
    ----------
    vertices : sequence of str
    edges : sequence of (id, source, range)
    """

    def __init__(self, vertices: Sequence[str], edges: Sequence[tuple]):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex")
        self.edges = [e for e, _, _ in edges]
        if len(set(self.edges)) != len(self.edges):
            raise DomainError("duplicate edge")
        if set(self.edges) & set(self.vertices):
            raise DomainError("edge and vertex identifiers overlap")
        self._src = {}
        self._rng = {}
        for e, a, b in edges:
            for v in (a, b):
                if v not in self.vertices:
                    raise DomainError(f"edge {e!r} uses unknown vertex {v!r}")
            self._src[e], self._rng[e] = a, b
        self._vpos = {v: i for i, v in enumerate(self.vertices)}
        self._epos = {e: i for i, e in enumerate(self.edges)}
        self._out = {v: [e for e in self.edges if self._src[e] == v] for v in self.vertices}

    def s(self, e):
        return self._src[e]

    def r(self, e):
        return self._rng[e]

    def out_edges(self, v) -> list:
        return self._out[v]

    def is_sink(self, v) -> bool:
        return not self._out[v]

    def is_regular(self, v) -> bool:
        return bool(self._out[v])

    def is_acyclic(self) -> bool:
        return self.longest_path() is not None

    def longest_path(self) -> int | None:
        """Length of the longest path, or ``None`` if there is a cycle."""
        memo: dict = {}
        active: set = set()

        def walk(v):
            if v in memo:
                return memo[v]
            if v in active:
                raise _Cycle
            active.add(v)
            best = max((1 + walk(self.r(e)) for e in self._out[v]), default=0)
            active.discard(v)
            memo[v] = best
            return best

        try:
            return max((walk(v) for v in self.vertices), default=0)
        except _Cycle:
            return None

    # paths ---------------------------------------------------------------
    def path(self, start, edges: Iterable = ()) -> "Path":
        edges = tuple(edges)
        if edges:
            start = self.s(edges[0])
            for e, f in zip(edges, edges[1:]):
                if self.r(e) != self.s(f):
                    raise DomainError(f"{e!r} and {f!r} are not composable")
        elif start not in self._vpos:
            raise DomainError(f"unknown vertex {start!r}")
        return Path(start, edges)

    def vertex_path(self, v) -> "Path":
        return self.path(v)

    def range_of(self, p: "Path"):
        return self.r(p.edges[-1]) if p.edges else p.start

    def paths(self, max_len: int) -> list["Path"]:
        out = [Path(v, ()) for v in self.vertices]
        layer = list(out)
        for _ in range(max_len):
            layer = [Path(p.start, p.edges + (e,))
                     for p in layer for e in self._out[self.range_of(p)]]
            out.extend(layer)
        return sorted(out, key=self.path_key)

    def path_key(self, p: "Path"):
        return (len(p.edges), tuple(self._epos[e] for e in p.edges), self._vpos[p.start])

    def concat(self, p: "Path", q: "Path") -> "Path":
        if self.range_of(p) != q.start:
            raise DomainError("paths are not composable")
        return Path(p.start, p.edges + q.edges)

    def strip_prefix(self, p: "Path", q: "Path") -> "Path | None":
        """``q'`` with ``q = p q'``, or ``None`` if ``p`` is not a prefix of ``q``."""
        if p.start != q.start or q.edges[:len(p.edges)] != p.edges:
            return None
        return Path(self.range_of(p), q.edges[len(p.edges):])

    def format_path(self, p: "Path") -> str:
        return ".".join(map(str, p.edges)) if p.edges else str(p.start)


class _Cycle(Exception):
    pass


class Path(NamedTuple):
    start: str
    edges: tuple


# ---------------------------------------------------------------------------
# the graph inverse semigroup


def sg_multiply(G: DirectedGraph, a, b):
    """Product of path pairs by prefix matching."""
    if a is ZERO or b is ZERO:
        return ZERO
    a1, a2 = a
    b1, b2 = b
    tail = G.strip_prefix(a2, b1)
    if tail is not None:
        return (G.concat(a1, tail), b2)
    tail = G.strip_prefix(b1, a2)
    if tail is not None:
        return (a1, G.concat(b2, tail))
    return ZERO


def sg_star(a):
    return a if a is ZERO else (a[1], a[0])


def sg_grading(G: DirectedGraph, group: FreeGroup, a):
    if a is ZERO:
        raise DomainError("the zero element has no degree")
    p, q = a
    return group.mul(group.positive(p.edges), group.inv(group.positive(q.edges)))


class GraphTree(TreeStructure):
    """Finite paths of a graph; the node of a path ``p`` is ``(edges, r(p))``."""

    def __init__(self, G: DirectedGraph):
        self.G = G

    def roots(self):
        return [((), v) for v in self.G.vertices]

    def child_steps(self, state):
        return [(e, self.G.r(e)) for e in self.G.out_edges(state)]

    def parent(self, node):
        word, _ = node
        if len(word) == 1:
            return ((), self.G.s(word[0]))
        return (word[:-1], self.G.r(word[-2]))

    def node_key(self, node):
        return self.G.path_key(self.path_of(node))

    def path_of(self, node) -> Path:
        word, state = node
        return Path(self.G.s(word[0]) if word else state, word)

    def node_of(self, p: Path):
        return (p.edges, self.G.range_of(p))

    def format_node(self, node):
        return self.G.format_path(self.path_of(node))


class GraphSemigroup(InverseSemigroup):
    """The graph inverse semigroup with its canonical grading by the free group on edges."""

    kind = "graph"

    def __init__(self, G: DirectedGraph):
        self.G = G
        self.group = FreeGroup(G.edges)
        self.tree = GraphTree(G)
        self.zero = ZERO
        self._grading = Grading(self.group, lambda a: sg_grading(G, self.group, a), "path")
        self._nonzero: dict = {}

    def mul(self, a, b):
        return sg_multiply(self.G, a, b)

    def star(self, a):
        return sg_star(a)

    def pair(self, p, q=None):
        """Build a pair from paths, edge sequences or vertex names."""
        p = self._coerce(p)
        q = p if q is None else self._coerce(q)
        if self.G.range_of(p) != self.G.range_of(q):
            raise DomainError("paths in a pair must share their range")
        return (p, q)

    def _coerce(self, p):
        if isinstance(p, Path):
            return p
        if isinstance(p, str):
            if p in self.G.vertices:
                return self.G.vertex_path(p)
            return self.G.path(None, p.split(".") if "." in p else [p])
        return self.G.path(None, p)

    def nonzero(self, depth=None):
        depth = 3 if depth is None else depth
        hit = self._nonzero.get(depth)
        if hit is None:
            G = self.G
            paths = G.paths(depth)
            hit = [(p, q) for p in paths for q in paths if G.range_of(p) == G.range_of(q)]
            hit.sort(key=lambda a: (max(len(a[0].edges), len(a[1].edges)),
                                    len(a[0].edges) + len(a[1].edges),
                                    G.path_key(a[0]), G.path_key(a[1])))
            self._nonzero[depth] = hit
        return list(hit)

    def is_idempotent(self, a):
        return a is ZERO or a[0] == a[1]

    def canonical_grading(self):
        return self._grading

    def tight_model(self):
        if not hasattr(self, "_model"):
            space = CylinderTreeSpace(self.tree, "boundary")

            def V(x):
                if x is ZERO:
                    return space.bottom()
                if x[0] != x[1]:
                    raise DomainError(f"{self.format(x)} is not an idempotent")
                return space.cylinder(self.tree.node_of(x[0]))

            def node_idempotent(node):
                p = self.tree.path_of(node)
                return (p, p)

            self._model = TreeTightModel(space, V, node_idempotent)
        return self._model

    def degree_witness(self, g):
        split = self.group.split_positive_negative(g)
        if split is None:
            return None
        p1, p2 = split
        try:
            if p1 and p2:
                return self.pair(self.G.path(None, p1), self.G.path(None, p2))
            if p1:
                a = self.G.path(None, p1)
                return (a, self.G.vertex_path(self.G.range_of(a)))
            if p2:
                b = self.G.path(None, p2)
                return (self.G.vertex_path(self.G.range_of(b)), b)
        except DomainError:
            return None
        raise DomainError("the identity has no single witness")

    def format(self, a):
        if a is ZERO:
            return "0"
        return f"({self.G.format_path(a[0])},{self.G.format_path(a[1])})"


def eg_closed_form(S: GraphSemigroup, g, depth: int = 3) -> set:
    """``E_g``: idempotents ``(p, p)`` with ``p_1`` a prefix of ``p``, within ``depth``."""
    out = {ZERO}
    if g == S.group.identity:
        return out | set(S.idempotents(depth))
    s = S.degree_witness(g)
    if s is None:
        return out
    p1 = s[0]
    for x in S.idempotents(depth):
        if S.G.strip_prefix(p1, x[0]) is not None:
            out.add(x)
    return out


def phi_closed_form(S: GraphSemigroup, g, x):
    """``phi_g`` on an idempotent of ``E_g^-1``: ``(p2 p', p2 p') -> (p1 p', p1 p')``."""
    if g == S.group.identity:
        return x
    s = S.degree_witness(g)
    if s is None or x is ZERO:
        raise DomainError(f"{S.format(x)} is outside E_{S.group.format(S.group.inv(g))}")
    p1, p2 = s
    tail = S.G.strip_prefix(p2, x[0])
    if tail is None or x[0] != x[1]:
        raise DomainError(f"{S.format(x)} is outside E_{S.group.format(S.group.inv(g))}")
    p = S.G.concat(p1, tail)
    return (p, p)


def boundary_ops(op: str, a: GbaElement, b: GbaElement) -> GbaElement:
    return a.space.lattice_op(op, a, b)


# ---------------------------------------------------------------------------
# the Leavitt path algebra


class GraphAlgebra(SemigroupAlgebra):
    def __init__(self, G: DirectedGraph, ring: Ring = INTEGERS):
        self.G = G
        super().__init__(GraphSemigroup(G), None, ring)

    def pair(self, p, q=None):
        return self.S.pair(p, q)


@dataclass
class LeavittImages:
    algebra: GraphAlgebra
    p: dict
    s: dict
    s_star: dict


def leavitt_map(G: DirectedGraph, ring: Ring = INTEGERS,
                algebra: GraphAlgebra | None = None) -> LeavittImages:
    """Images of the Leavitt generators in the partial skew ring."""
    A = algebra or GraphAlgebra(G, ring)
    S, F = A.S, A.S.group
    p = {v: A.xdelta(S.pair(v), F.identity) for v in G.vertices}
    s = {}
    s_star = {}
    for e in G.edges:
        path = G.path(None, [e])
        s[e] = A.xdelta((path, path), F.letter(e))
        r = S.pair(G.r(e))
        s_star[e] = A.xdelta(r, F.letter(e, -1))
    return LeavittImages(A, p, s, s_star)


def verify_ck_relations(images: LeavittImages) -> Report:
    A = images.algebra
    G = A.G
    p, s, s_star = images.p, images.s, images.s_star
    rep = Report("Leavitt relations")
    zero = A.zero()

    bad = None
    for v, w in itertools.product(G.vertices, repeat=2):
        want = p[v] if v == w else zero
        if p[v] * p[w] != want:
            bad = (v, w)
            break
    rep.add("vertex projections are orthogonal idempotents", bad is None, witness=bad)

    bad = next((e for e in G.edges
                if not (p[G.s(e)] * s[e] == s[e] == s[e] * p[G.r(e)]
                        and p[G.r(e)] * s_star[e] == s_star[e] == s_star[e] * p[G.s(e)])), None)
    rep.add("s_e = p_s(e) s_e p_r(e) and s_e* = p_r(e) s_e* p_s(e)", bad is None, witness=bad)

    bad = None
    for e, f in itertools.product(G.edges, repeat=2):
        want = p[G.r(e)] if e == f else zero
        if s_star[e] * s[f] != want:
            bad = (e, f)
            break
    rep.add("s_e* s_f = delta_ef p_r(e)", bad is None, witness=bad)

    bad = None
    for v in G.vertices:
        if not G.is_regular(v):
            continue
        total = zero
        for e in G.out_edges(v):
            total = total + s[e] * s_star[e]
        if total != p[v]:
            bad = v
            break
    rep.add("p_v = sum of s_e s_e* over edges leaving each regular vertex", bad is None,
            witness=bad)
    return rep


def graded_dimensions(A: SemigroupAlgebra, word_bound: int, depth: int) -> dict:
    """Rank of the span of ``V_{s s*} delta_g`` over nonzero ``s`` of degree ``g``.

    ``s`` ranges over ``S.nonzero(depth)`` and only degrees of length at most
    ``word_bound`` are reported.  The family for a fixed degree is closed under
    meets, and ``s -> s*`` matches degree ``g`` with ``g^-1``.
    """
    S, G, grade = A.S, A.group, A.grading.fn
    families: dict = {}
    for s in S.nonzero(depth):
        g = grade(s)
        if G.length(g) > word_bound:
            continue
        families.setdefault(g, []).append(A.model.V(S.mul(s, S.star(s))))
    out = {}
    for g in sorted(families, key=G.sort_key):
        dim = spanned_dimension(A.space, families[g])
        if dim:
            out[g] = dim
    return out


def graded_basis(A: SemigroupAlgebra, degrees: Iterable) -> list[tuple]:
    """``(U, g)`` for the atoms ``U`` of each ideal with a top, degree by degree."""
    out = []
    for g in degrees:
        top = A.bundle.ideal(g).top_element()
        if top is None:
            raise DomainError(f"I_{A.group.format(g)} has no largest element")
        out.extend((U, g) for U in A.space.pieces(top))
    return out


def coordinates(x: SkewElement, basis: Sequence[tuple]) -> list | None:
    """Coefficients of ``x`` in an atomic basis, or ``None`` if ``x`` is outside its span."""
    A = x.algebra
    coeffs = [x.component(g).value_at(U) for U, g in basis]
    rebuilt = A.zero()
    for c, (U, g) in zip(coeffs, basis):
        if not A.ring.is_zero(c):
            rebuilt = rebuilt + A.delta(U, g, c)
    return coeffs if rebuilt == x else None


# ---------------------------------------------------------------------------
# checks and cross-validation


def validate_graph(G: DirectedGraph, depth: int = 3) -> Report:
    S = GraphSemigroup(G)
    rep = Report("graph inverse semigroup")
    rep.extend(verify_inverse_semigroup(S, depth))
    rep.extend(verify_pure_grading(S, S.canonical_grading(), depth))
    bad = None
    for a in S.nonzero(depth):
        if S.mul(S.star(a), a) != (a[1], a[1]) or S.mul(a, S.star(a)) != (a[0], a[0]):
            bad = S.format(a)
            break
    rep.add("s* s = (q,q) and s s* = (p,p)", bad is None, witness=bad)
    return rep


def cylinder_cover_check(S: GraphSemigroup) -> Report:
    """``V_(v,v)`` is the join of ``V_(e,e)`` over edges leaving ``v``."""
    G = S.G
    model = S.tight_model()
    rep = Report("boundary cylinder covers")
    bad = None
    for v in G.vertices:
        if not G.is_regular(v):
            continue
        parts = [model.V(S.pair(G.path(None, [e]))) for e in G.out_edges(v)]
        if model.space.join_all(parts) != model.V(S.pair(v)):
            bad = v
    rep.add("vertex cylinder equals the join of its edge cylinders", bad is None, witness=bad)
    top = model.space.top()
    rep.add("the boundary algebra has a top", top is not None)
    return rep


def adapter_to_labelled(G: DirectedGraph) -> LabelledSpace:
    """The labelled space with the identity labelling and all vertex subsets."""
    LG = LabelledGraph(G.vertices, [(e, G.s(e), G.r(e), e) for e in G.edges])
    return LabelledSpace.powerset(LG)


def to_triple(L: LabelledSpace, G: DirectedGraph, a):
    if a is ZERO:
        return ZERO
    p, q = a
    return (p.edges, L.mask([G.range_of(p)]), q.edges)


def cross_validate(G: DirectedGraph, depth: int = 3) -> Report:
    """Compare path-pair products with labelled-triple products on all pairs to ``depth``."""
    S = GraphSemigroup(G)
    L = adapter_to_labelled(G)
    T = LabelledSemigroup(L)
    rep = Report(f"graph vs labelled adapter (depth {depth})")
    elems = S.nonzero(depth)
    bad = None
    count = 0
    for a, b in itertools.product(elems, repeat=2):
        count += 1
        if to_triple(L, G, S.mul(a, b)) != T.mul(to_triple(L, G, a), to_triple(L, G, b)):
            bad = (S.format(a), S.format(b))
            break
    rep.add("products agree", bad is None, detail=f"{count} pairs", witness=bad)
    bad = next((S.format(a) for a in elems
                if to_triple(L, G, S.star(a)) != T.star(to_triple(L, G, a))), None)
    rep.add("involutions agree", bad is None, witness=bad)
    sg, tg = S.canonical_grading(), T.canonical_grading()
    bad = next((S.format(a) for a in elems
                if sg(a) != tg(to_triple(L, G, a))), None)
    rep.add("gradings agree letter-wise", bad is None, witness=bad)
    return rep


__all__ = [
    "DirectedGraph", "Path", "GraphSemigroup", "GraphTree", "GraphAlgebra", "LeavittImages",
    "sg_multiply", "sg_star", "sg_grading", "eg_closed_form", "phi_closed_form",
    "boundary_ops", "leavitt_map", "verify_ck_relations", "graded_dimensions",
    "graded_basis", "coordinates", "validate_graph", "cylinder_cover_check",
    "adapter_to_labelled", "to_triple", "cross_validate", "natural_order",
]
