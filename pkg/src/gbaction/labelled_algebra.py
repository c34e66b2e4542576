"""Labelled spaces, their inverse semigroups, and labelled Leavitt path algebras.

A labelled space is a finite directed graph whose edges carry labels,
together with a family ``B`` of vertex sets (stored as bitmasks).  The
semigroup consists of triples ``(alpha, A, beta)`` of label paths and a
nonempty set ``A`` in ``B`` below ``r(alpha)`` and ``r(beta)``.

Compact opens of the tight spectrum live on a tree whose nodes are
``(alpha, q)`` with ``q`` an atom of ``B`` below ``r(alpha)``; ``(alpha, q)``
is a leaf exactly when ``q`` emits no labels, which is when ``q`` is
singular.  The leaf cylinders play the role of the leftover pieces
``W(alpha, q)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ConsistencyError, DomainError
from .gba import CylinderTreeSpace, GbaElement, TreeStructure
from .groups import FreeGroup
from .inverse_semigroup import (ZERO, Grading, InverseSemigroup, SemigroupAlgebra,
                                TreeTightModel, verify_inverse_semigroup, verify_pure_grading)
from .report import Report
from .rings import INTEGERS, Ring
from .tight_filters import Semilattice, tight_space


class LabelledGraph:
    """A finite graph with labelled edges ``(id, source, range, label)``."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[tuple]):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex")
        self.vpos = {v: i for i, v in enumerate(self.vertices)}
        self.edges = []
        seen = set()
        for e, a, b, lab in edges:
            if e in seen:
                raise DomainError(f"duplicate edge {e!r}")
            seen.add(e)
            for v in (a, b):
                if v not in self.vpos:
                    raise DomainError(f"edge {e!r} uses unknown vertex {v!r}")
            self.edges.append((e, a, b, lab))
        self.alphabet = list(dict.fromkeys(lab for _, _, _, lab in self.edges))
        self.sinks = 0
        for v in self.vertices:
            if not any(a == v for _, a, _, _ in self.edges):
                self.sinks |= 1 << self.vpos[v]
        self.all_vertices = (1 << len(self.vertices)) - 1


class LabelledSpace:
    """A labelled graph with an accommodating family of vertex sets."""

    def __init__(self, LG: LabelledGraph, members: Iterable[int]):
        self.LG = LG
        self.members = frozenset(members) | {0}
        self.top = 0
        for m in self.members:
            self.top |= m
        self._r: dict = {}
        self._atoms = sorted((m for m in self.members if m and not any(
            0 < k < m and k & m == k for k in self.members if k != m)), key=self._mask_key)
        self._parent: dict = {}

    # constructors ----------------------------------------------------------
    @classmethod
    def powerset(cls, LG: LabelledGraph) -> "LabelledSpace":
        return cls(LG, range(LG.all_vertices + 1))

    @classmethod
    def generated(cls, LG: LabelledGraph, sets: Iterable[Iterable[str]] = ()) -> "LabelledSpace":
        """The smallest family containing ``sets`` and every ``r(a)`` that is
        closed under unions, intersections, relative complements and ``r(., a)``."""
        probe = cls(LG, [])
        fam = {0} | {probe.mask(s) for s in sets}
        fam |= {probe.r_word((a,)) for a in LG.alphabet}
        while True:
            new = set(fam)
            for A, B in itertools.product(fam, repeat=2):
                new.update((A | B, A & B, A & ~B))
            for A in fam:
                new.update(probe.r(A, a) for a in LG.alphabet)
            if new == fam:
                break
            fam = new
        return cls(LG, fam)

    @classmethod
    def explicit(cls, LG: LabelledGraph, sets: Iterable[Iterable[str]]) -> "LabelledSpace":
        probe = cls(LG, [])
        return cls(LG, [probe.mask(s) for s in sets])

    # vertex sets -----------------------------------------------------------
    def mask(self, vertices: Iterable[str]) -> int:
        out = 0
        for v in vertices:
            try:
                out |= 1 << self.LG.vpos[v]
            except KeyError:
                raise DomainError(f"unknown vertex {v!r}") from None
        return out

    def vertices_of(self, A: int) -> list[str]:
        return [v for i, v in enumerate(self.LG.vertices) if A >> i & 1]

    def fmt(self, A: int) -> str:
        return "{" + ",".join(self.vertices_of(A)) + "}"

    def _mask_key(self, A: int):
        return (bin(A).count("1"), [i for i in range(len(self.LG.vertices)) if A >> i & 1])

    def r(self, A: int, a) -> int:
        """Relative range ``r(A, a)``."""
        key = (A, a)
        hit = self._r.get(key)
        if hit is None:
            hit = 0
            vp = self.LG.vpos
            for _, s, t, lab in self.LG.edges:
                if lab == a and A >> vp[s] & 1:
                    hit |= 1 << vp[t]
            self._r[key] = hit
        return hit

    def r_path(self, A: int, alpha: Sequence) -> int:
        for a in alpha:
            if not A:
                return 0
            A = self.r(A, a)
        return A

    def r_word(self, alpha: Sequence) -> int:
        """``r(alpha)``; for the empty word this is the union of the family."""
        if not alpha:
            return self.top
        return self.r_path(self.LG.all_vertices, alpha)

    def delta(self, A: int) -> list:
        return [a for a in self.LG.alphabet if self.r(A, a)]

    def atoms(self) -> list[int]:
        return list(self._atoms)

    def atoms_below(self, A: int) -> list[int]:
        return [q for q in self._atoms if q & A == q]

    def members_below(self, A: int) -> list[int]:
        return sorted((m for m in self.members if m & A == m), key=self._mask_key)

    def is_regular(self, A: int) -> bool:
        if not self.delta(A):
            return False
        sink_part = A & self.LG.sinks
        return not any(m and m & sink_part == m for m in self.members)

    def regular_part(self, alpha: Sequence) -> int:
        """Union of the regular atoms below ``r(alpha)``; the largest regular member there."""
        out = 0
        for q in self.atoms_below(self.r_word(alpha)):
            if self.is_regular(q):
                out |= q
        return out

    def label_paths(self, max_len: int, realizable: bool = True) -> list[tuple]:
        out = [()]
        layer = [()]
        for _ in range(max_len):
            layer = [w + (a,) for w in layer for a in self.LG.alphabet]
            out.extend(w for w in layer if not realizable or self.r_word(w))
        return out

    # tree structure ----------------------------------------------------------
    def parent_atom(self, alpha: tuple, q: int) -> int:
        key = (alpha, q)
        hit = self._parent.get(key)
        if hit is None:
            prefix, a = alpha[:-1], alpha[-1]
            cands = [p for p in self.atoms_below(self.r_word(prefix))
                     if self.r(p, a) & q == q]
            if len(cands) != 1:
                raise ConsistencyError(
                    f"{self.fmt(q)} at {''.join(map(str, alpha))} has {len(cands)} parent atoms")
            hit = cands[0]
            self._parent[key] = hit
        return hit


def relative_range(L: LabelledSpace, A: int, alpha: Sequence) -> int:
    if A not in L.members:
        raise DomainError(f"{L.fmt(A)} is not in the family")
    return L.r_path(A, alpha)


def delta_set(L: LabelledSpace, A: int) -> list:
    if A not in L.members:
        raise DomainError(f"{L.fmt(A)} is not in the family")
    return L.delta(A)


def is_regular(L: LabelledSpace, A: int) -> bool:
    return L.is_regular(A)


def validate_labelled_space(L: LabelledSpace) -> Report:
    rep = Report("labelled space")
    fam = sorted(L.members, key=L._mask_key)
    fmt = L.fmt

    def first(pairs, test):
        for item in pairs:
            if not test(*item):
                return item
        return None

    bad = first(itertools.product(fam, repeat=2),
                lambda A, B: (A | B) in L.members and (A & B) in L.members)
    rep.add("closed under unions and intersections", bad is None,
            witness=bad and (fmt(bad[0]), fmt(bad[1])))
    bad = first(itertools.product(fam, repeat=2), lambda A, B: (A & ~B) in L.members)
    rep.add("closed under relative complements", bad is None,
            witness=bad and (fmt(bad[0]), fmt(bad[1])))
    bad = next((a for a in L.LG.alphabet if L.r_word((a,)) not in L.members), None)
    rep.add("contains r(a) for every label", bad is None, witness=bad)
    bad = first(itertools.product(fam, L.LG.alphabet), lambda A, a: L.r(A, a) in L.members)
    rep.add("closed under relative ranges", bad is None,
            witness=bad and (fmt(bad[0]), bad[1]))
    bad = first(((A, B, a) for A, B in itertools.combinations(fam, 2) for a in L.LG.alphabet),
                lambda A, B, a: L.r(A & B, a) == L.r(A, a) & L.r(B, a))
    rep.add("weakly left-resolving", bad is None,
            witness=bad and (fmt(bad[0]), fmt(bad[1]), bad[2]))
    return rep


# ---------------------------------------------------------------------------
# the semigroup


def sls_multiply(L: LabelledSpace, x, y):
    if x is ZERO or y is ZERO:
        return ZERO
    alpha, A, beta = x
    gamma, B, delta = y
    if gamma[:len(beta)] == beta:
        C = L.r_path(A, gamma[len(beta):]) & B
        return (alpha + gamma[len(beta):], C, delta) if C else ZERO
    if beta[:len(gamma)] == gamma:
        C = A & L.r_path(B, beta[len(gamma):])
        return (alpha, C, delta + beta[len(gamma):]) if C else ZERO
    return ZERO


def sls_star(x):
    return x if x is ZERO else (x[2], x[1], x[0])


def sls_order(L: LabelledSpace, x, y) -> bool:
    """``(alpha, A, alpha) <= (beta, B, beta)`` for idempotent triples."""
    if x is ZERO:
        return True
    if y is ZERO:
        return False
    alpha, A, _ = x
    beta, B, _ = y
    if alpha[:len(beta)] != beta:
        return False
    return A & L.r_path(B, alpha[len(beta):]) == A


class LabelledTree(TreeStructure):
    def __init__(self, L: LabelledSpace):
        self.L = L

    def roots(self):
        return [((), q) for q in self.L.atoms()]

    @lru_cache(maxsize=None)
    def child_steps(self, state):
        L = self.L
        return [(a, q) for a in L.delta(state) for q in L.atoms_below(L.r(state, a))]

    def parent(self, node):
        alpha, q = node
        return (alpha[:-1], self.L.parent_atom(alpha, q))

    def node_key(self, node):
        alpha, q = node
        rank = {a: i for i, a in enumerate(self.L.LG.alphabet)}
        return (len(alpha), tuple(rank[a] for a in alpha), self.L._mask_key(q))

    def format_node(self, node):
        alpha, q = node
        return f"{format_word(alpha)}:{self.L.fmt(q)}"


def format_word(alpha) -> str:
    return ".".join(map(str, alpha)) if alpha else "w"


class LabelledSemigroup(InverseSemigroup):
    kind = "labelled"

    def __init__(self, L: LabelledSpace):
        self.L = L
        self.group = FreeGroup(L.LG.alphabet)
        self.zero = ZERO
        F = self.group
        self._grading = Grading(F, lambda x: F.mul(F.positive(x[0]), F.inv(F.positive(x[2]))),
                                "label")
        self._nonzero: dict = {}

    def mul(self, a, b):
        return sls_multiply(self.L, a, b)

    def star(self, a):
        return sls_star(a)

    def triple(self, alpha, A, beta=None):
        L = self.L
        alpha = tuple(alpha)
        beta = alpha if beta is None else tuple(beta)
        if not isinstance(A, int):
            A = L.mask(A)
        if not A or A not in L.members:
            raise DomainError(f"{L.fmt(A)} is not a nonempty member of the family")
        if A & L.r_word(alpha) != A or A & L.r_word(beta) != A:
            raise DomainError(f"{L.fmt(A)} is not below r({format_word(alpha)}) "
                              f"and r({format_word(beta)})")
        return (alpha, A, beta)

    def nonzero(self, depth=None):
        depth = 2 if depth is None else depth
        hit = self._nonzero.get(depth)
        if hit is None:
            L = self.L
            words = L.label_paths(depth)
            rank = {a: i for i, a in enumerate(L.LG.alphabet)}
            sets = sorted((m for m in L.members if m), key=L._mask_key)
            hit = []
            for alpha, beta in itertools.product(words, repeat=2):
                bound = L.r_word(alpha) & L.r_word(beta)
                hit.extend((alpha, A, beta) for A in sets if A & bound == A)

            def key(x):
                a, A, b = x
                return (max(len(a), len(b)), len(a) + len(b), [rank[c] for c in a],
                        [rank[c] for c in b], L._mask_key(A))

            hit.sort(key=key)
            self._nonzero[depth] = hit
        return list(hit)

    def is_idempotent(self, a):
        return a is ZERO or a[0] == a[2]

    def canonical_grading(self):
        return self._grading

    def tight_model(self):
        if not hasattr(self, "_model"):
            L = self.L
            space = CylinderTreeSpace(LabelledTree(L), "labelled-boundary")

            def V(x):
                if x is ZERO:
                    return space.bottom()
                alpha, A, beta = x
                if alpha != beta:
                    raise DomainError(f"{self.format(x)} is not an idempotent")
                return space.from_nodes([(alpha, q) for q in L.atoms_below(A)])

            self._model = TreeTightModel(space, V, lambda n: (n[0], n[1], n[0]))
        return self._model

    def degree_witness(self, g):
        split = self.group.split_positive_negative(g)
        if split is None:
            return None
        p1, p2 = split
        A = self.L.r_word(p1) & self.L.r_word(p2)
        return (p1, A, p2) if A else None

    def format(self, a):
        if a is ZERO:
            return "0"
        alpha, A, beta = a
        return f"({format_word(alpha)},{self.L.fmt(A)},{format_word(beta)})"


def eg_closed_form(S: LabelledSemigroup, g, depth: int = 2) -> set:
    """``E_g``: idempotents ``(p1 p, A, p1 p)`` with ``A`` below ``r(p1)`` and ``r(p2)`` images."""
    out = {ZERO}
    if g == S.group.identity:
        return out | set(S.idempotents(depth))
    s = S.degree_witness(g)
    if s is None:
        return out
    m = S.mul(s, S.star(s))
    return out | {x for x in S.idempotents(depth) if sls_order(S.L, x, m)}


def phi_closed_form(S: LabelledSemigroup, g, x):
    """``(p2 p, A, p2 p) -> (p1 p, A, p1 p)`` on ``E_g^-1``."""
    if g == S.group.identity:
        return x
    s = S.degree_witness(g)
    if s is None or x is ZERO or not sls_order(S.L, x, S.mul(S.star(s), s)):
        raise DomainError(f"{S.format(x)} is outside E_{S.group.format(S.group.inv(g))}")
    p1, _, p2 = s
    alpha, A, _ = x
    rest = alpha[len(p2):]
    return (p1 + rest, A, p1 + rest)


def leftover(S: LabelledSemigroup, alpha: tuple, A: int) -> GbaElement:
    """``W(alpha, A)``: the part of ``V_(alpha, A, alpha)`` made of paths ending at ``alpha``."""
    model = S.tight_model()
    L = S.L
    nodes = [(alpha, q) for q in L.atoms_below(A) if not L.delta(q)]
    return model.space.from_nodes(nodes)


def leftover_remainder(L: LabelledSpace, alpha: tuple, A: int) -> int:
    """``A`` minus the largest regular member below ``r(alpha)``."""
    return A & ~L.regular_part(alpha)


def labelled_gba_ops(op: str, a: GbaElement, b: GbaElement) -> GbaElement:
    return a.space.lattice_op(op, a, b)


def check_atom_singularity(L: LabelledSpace) -> Report:
    """An atom is singular exactly when it emits no labels."""
    rep = Report("atom singularity")
    bad = next((L.fmt(q) for q in L.atoms() if L.is_regular(q) != bool(L.delta(q))), None)
    rep.add("atom singular iff it emits nothing", bad is None, witness=bad)
    return rep


# ---------------------------------------------------------------------------
# Cuntz-Krieger images


class LabelledAlgebra(SemigroupAlgebra):
    def __init__(self, L: LabelledSpace, ring: Ring = INTEGERS):
        self.L = L
        super().__init__(LabelledSemigroup(L), None, ring)


@dataclass
class CkImages:
    algebra: LabelledAlgebra
    p: dict
    s: dict
    s_star: dict


def ck_map(L: LabelledSpace, ring: Ring = INTEGERS,
           algebra: LabelledAlgebra | None = None) -> CkImages:
    A = algebra or LabelledAlgebra(L, ring)
    S, F = A.S, A.S.group
    p = {}
    for B in L.members:
        p[B] = A.zero() if not B else A.xdelta(((), B, ()), F.identity)
    s, s_star = {}, {}
    for a in L.LG.alphabet:
        ra = L.r_word((a,))
        s[a] = A.xdelta(((a,), ra, (a,)), F.letter(a))
        s_star[a] = A.xdelta(((), ra, ()), F.letter(a, -1))
    return CkImages(A, p, s, s_star)


def verify_ck_relations(images: CkImages) -> Report:
    A, L = images.algebra, images.algebra.L
    p, s, s_star = images.p, images.s, images.s_star
    fam = sorted(L.members, key=L._mask_key)
    letters = L.LG.alphabet
    rep = Report("labelled Cuntz-Krieger relations")
    fmt = L.fmt

    bad = None
    if p[0]:
        bad = "p_{} != 0"
    for X, Y in itertools.product(fam, repeat=2):
        if bad:
            break
        if p[X & Y] != p[X] * p[Y] or p[X | Y] != p[X] + p[Y] - p[X & Y]:
            bad = (fmt(X), fmt(Y))
    rep.add("(1) p_AnB = p_A p_B, p_AuB = p_A + p_B - p_AnB, p_0 = 0", bad is None, witness=bad)

    bad = None
    for X, a in itertools.product(fam, letters):
        rX = L.r(X, a)
        if p[X] * s[a] != s[a] * p[rX] or s_star[a] * p[X] != p[rX] * s_star[a]:
            bad = (fmt(X), a)
            break
    rep.add("(2) p_A s_a = s_a p_r(A,a) and s_a* p_A = p_r(A,a) s_a*", bad is None, witness=bad)

    bad = None
    for a, b in itertools.product(letters, repeat=2):
        want = p[L.r_word((a,))] if a == b else A.zero()
        if s_star[a] * s[b] != want:
            bad = (a, b)
            break
    rep.add("(3) s_a* s_b = delta_ab p_r(a)", bad is None, witness=bad)

    bad = next((a for a in letters
                if s[a] * s_star[a] * s[a] != s[a] or s_star[a] * s[a] * s_star[a] != s_star[a]),
               None)
    rep.add("(4) s_a s_a* s_a = s_a and s_a* s_a s_a* = s_a*", bad is None, witness=bad)

    bad = None
    checked = 0
    for X in fam:
        if not X or not L.is_regular(X):
            continue
        checked += 1
        total = A.zero()
        for a in L.delta(X):
            total = total + s[a] * p[L.r(X, a)] * s_star[a]
        if total != p[X]:
            bad = fmt(X)
            break
    rep.add("(5) p_A = sum over a in Delta_A of s_a p_r(A,a) s_a* for regular A", bad is None,
            detail=f"{checked} regular sets", witness=bad)
    return rep


def generator_products(L: LabelledSpace, depth: int = 3,
                       algebra: LabelledAlgebra | None = None) -> Report:
    """The two inductive product formulas for label paths of length 1..``depth``."""
    A = algebra or LabelledAlgebra(L)
    S, F = A.S, A.S.group
    words = [w for w in L.label_paths(depth) if w]
    rep = Report(f"generator products (depth {depth})")

    def down(alpha):
        ra = L.r_word(alpha)
        if not ra:
            return A.zero()
        return A.xdelta(((), ra, ()), F.inv(F.positive(alpha)))

    def up(alpha):
        ra = L.r_word(alpha)
        if not ra:
            return A.zero()
        return A.xdelta((alpha, ra, alpha), F.positive(alpha))

    bad = None
    for alpha, beta in itertools.product(words, repeat=2):
        if down(alpha) * down(beta) != down(beta + alpha):
            bad = (format_word(alpha), format_word(beta))
            break
    rep.add("(w, r(a), w) d_a^-1 * (w, r(b), w) d_b^-1 = (w, r(ba), w) d_(ba)^-1", bad is None,
            detail=f"{len(words) ** 2} pairs", witness=bad)
    bad = None
    for alpha, beta in itertools.product(words, repeat=2):
        if up(alpha) * up(beta) != up(alpha + beta):
            bad = (format_word(alpha), format_word(beta))
            break
    rep.add("(a, r(a), a) d_a * (b, r(b), b) d_b = (ab, r(ab), ab) d_ab", bad is None,
            detail=f"{len(words) ** 2} pairs", witness=bad)
    return rep


def validate_labelled(L: LabelledSpace, depth: int = 2) -> Report:
    rep = validate_labelled_space(L)
    if not rep.ok:
        return rep
    S = LabelledSemigroup(L)
    rep.extend(verify_inverse_semigroup(S, depth))
    rep.extend(verify_pure_grading(S, S.canonical_grading(), depth))
    rep.extend(check_atom_singularity(L))
    return rep


# ---------------------------------------------------------------------------
# oracle: truncated idempotent semilattice


def truncated_semilattice(S: LabelledSemigroup, N: int) -> tuple[Semilattice, list]:
    """The semilattice of idempotents ``(alpha, A, alpha)`` with ``|alpha| <= N`` plus zero."""
    elems = [ZERO] + S.idempotents(N)
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[S.mul(x, y)] for y in elems] for x in elems]
    return Semilattice([S.format(x) for x in elems], table, 0), elems


def truncated_points(S: LabelledSemigroup, N: int) -> dict:
    """Map each idempotent of the truncation to the minima of the tight filters containing it.

    The minima are idempotents ``(alpha, q, alpha)`` with ``q`` an atom;
    computed from the filter machinery alone, without the tree model.
    """
    P, elems = truncated_semilattice(S, N)
    T = tight_space(P, bound=len(P))
    out: dict = {x: set() for x in elems[1:]}
    for F in T.filters:
        low = F[0]
        for k in F:
            low = P.meet(low, k)
        for k in F:
            out[elems[k]].add(elems[low])
    return out
