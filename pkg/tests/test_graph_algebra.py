import itertools
from fractions import Fraction

import pytest

from gbaction.errors import DomainError
from gbaction.graph_algebra import (DirectedGraph, GraphAlgebra, GraphSemigroup, coordinates,
                                    cross_validate, cylinder_cover_check, graded_basis,
                                    graded_dimensions, leavitt_map, validate_graph,
                                    verify_ck_relations)
from gbaction.inverse_semigroup import ZERO

from conftest import GRAPH_FIXTURES, load
from test_gba import rank_by_elimination


def graph(name):
    return load(name).obj


# -- raw path-pair oracle -------------------------------------------------
# a path is (start vertex, tuple of edges)

def raw_paths(G, max_len):
    out = [(v, ()) for v in G.vertices]
    layer = list(out)
    for _ in range(max_len):
        layer = [(v, w + (e,)) for v, w in layer for e in G.edges
                 if G.s(e) == (G.r(w[-1]) if w else v)]
        out.extend(layer)
    return out


def end(G, path):
    v, w = path
    return G.r(w[-1]) if w else v


def is_prefix(p, q):
    return p[0] == q[0] and q[1][:len(p[1])] == p[1]


def raw_mul(a, b):
    (p1, q1), (p2, q2) = a, b
    if is_prefix(q1, p2):
        return ((p1[0], p1[1] + p2[1][len(q1[1]):]), q2)
    if is_prefix(p2, q1):
        return (p1, (q2[0], q2[1] + q1[1][len(p2[1]):]))
    return None


def raw_pairs(G, depth):
    paths = raw_paths(G, depth)
    return [(p, q) for p in paths for q in paths if end(G, p) == end(G, q)]


def as_raw(a):
    if a is ZERO:
        return None
    p, q = a
    return ((p.start, p.edges), (q.start, q.edges))


@pytest.mark.parametrize("name", GRAPH_FIXTURES)
def test_multiplication_matches_prefix_oracle(name):
    G = graph(name)
    S = GraphSemigroup(G)
    depth = 2
    elems = S.nonzero(depth)
    assert sorted(map(as_raw, elems)) == sorted(raw_pairs(G, depth))
    for a, b in itertools.product(elems, repeat=2):
        assert as_raw(S.mul(a, b)) == raw_mul(as_raw(a), as_raw(b))


# -- spanned dimensions against truncated boundary paths -------------------

def boundary_points(G, N):
    """Boundary paths cut at length N (paths ending at a sink are kept whole)."""
    return [p for p in raw_paths(G, N) if len(p[1]) == N or not G.out_edges(end(G, p))]


def reduced_degree(p, q):
    word = [(e, 1) for e in p[1]] + [(e, -1) for e in reversed(q[1])]
    out = []
    for letter in word:
        if out and out[-1] == (letter[0], -letter[1]):
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def oracle_dimensions(G, depth, N):
    points = boundary_points(G, N)
    families = {}
    for p, q in raw_pairs(G, depth):
        row = [1.0 if is_prefix(p, x) else 0.0 for x in points]
        families.setdefault(reduced_degree(p, q), []).append(row)
    return {g: rank_by_elimination(rows) for g, rows in families.items()}


@pytest.mark.parametrize("name,depth", [("edge_vw", 3), ("loop", 3), ("chain3", 3),
                                        ("toeplitz", 3), ("rose2", 2)])
def test_graded_dimensions_match_boundary_oracle(name, depth):
    G = graph(name)
    A = GraphAlgebra(G)
    dims = graded_dimensions(A, depth, depth)
    oracle = oracle_dimensions(G, depth, 2 * depth + 2)
    assert dims == {g: d for g, d in oracle.items() if d and len(g) <= depth}


def test_frozen_dimensions():
    A = GraphAlgebra(graph("edge_vw"))
    F = A.group
    dims = graded_dimensions(A, 3, 3)
    assert dims == {F.identity: 2, F.letter("e"): 1, F.letter("e", -1): 1}
    loop = GraphAlgebra(graph("loop"))
    F = loop.group
    dims = graded_dimensions(loop, 3, 3)
    assert dims == {F.reduce([("e", k // abs(k))] * abs(k)) if k else F.identity: 1
                    for k in range(-3, 4)}
    toeplitz = GraphAlgebra(graph("toeplitz"))
    F = toeplitz.group
    dims = graded_dimensions(toeplitz, 3, 3)
    frozen = {"1": 5, "e": 3, "e^-1": 3, "f": 1, "f^-1": 1, "e e": 2, "e^-1 e^-1": 2,
              "e f": 1, "f^-1 e^-1": 1, "e e e": 1, "e^-1 e^-1 e^-1": 1, "e e f": 1,
              "f^-1 e^-1 e^-1": 1}
    assert {F.format(g): d for g, d in dims.items()} == frozen


# -- the single edge gives 2x2 matrices ---------------------------------------

def matmul(X, Y):
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def unit_matrix(i, j):
    return tuple(tuple(1 if (r, c) == (i, j) else 0 for c in range(2)) for r in range(2))


def solve(columns, target):
    """Coefficients expressing ``target`` in the independent ``columns`` (exact)."""
    n = len(columns)
    rows = [[Fraction(col[i]) for col in columns] + [Fraction(target[i])]
            for i in range(len(target))]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        assert p is not None, "columns are dependent"
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [x - rows[i][c] * y for x, y in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    assert all(not row[-1] for row in rows[n:]), "target outside the span"
    return [rows[i][-1] for i in range(n)]


def test_single_edge_is_the_matrix_algebra():
    G = graph("edge_vw")
    images = leavitt_map(G)
    A = images.algebra
    F = A.group
    basis = graded_basis(A, [F.identity, F.letter("e"), F.letter("e", -1)])
    assert len(basis) == 4
    gens = {"p_v": images.p["v"], "p_w": images.p["w"],
            "s_e": images.s["e"], "s_e*": images.s_star["e"]}
    model = {"p_v": unit_matrix(0, 0), "p_w": unit_matrix(1, 1),
             "s_e": unit_matrix(0, 1), "s_e*": unit_matrix(1, 0)}
    names = list(gens)
    columns = [coordinates(gens[n], basis) for n in names]
    assert all(c is not None for c in columns)
    for x, y in itertools.product(names, repeat=2):
        coeffs = solve(columns, coordinates(gens[x] * gens[y], basis))
        image = tuple(tuple(sum(c * model[n][i][j] for c, n in zip(coeffs, names))
                            for j in range(2)) for i in range(2))
        assert image == matmul(model[x], model[y]), (x, y)


def test_loop_unit_relations():
    images = leavitt_map(graph("loop"))
    s, s_star, p = images.s["e"], images.s_star["e"], images.p["v"]
    assert s_star * s == p == s * s_star
    assert images.algebra.unit() == p


@pytest.mark.parametrize("name", GRAPH_FIXTURES)
def test_leavitt_relations(name):
    rep = verify_ck_relations(leavitt_map(graph(name)))
    assert rep.ok, rep.render()


@pytest.mark.parametrize("name", GRAPH_FIXTURES)
def test_cross_validation_with_labelled_adapter(name):
    rep = cross_validate(graph(name), depth=3 if name != "rose2" else 2)
    assert rep.ok, rep.render()


@pytest.mark.parametrize("name", GRAPH_FIXTURES)
def test_structural_validation(name):
    G = graph(name)
    assert validate_graph(G, 2).ok
    assert cylinder_cover_check(GraphSemigroup(G)).ok


def test_graph_construction_errors():
    with pytest.raises(DomainError):
        DirectedGraph(["v", "v"], [])
    with pytest.raises(DomainError):
        DirectedGraph(["v"], [("e", "v", "w")])
    G = graph("chain3")
    assert G.is_acyclic() and G.longest_path() == 2
    assert not graph("loop").is_acyclic()
    S = GraphSemigroup(G)
    with pytest.raises(DomainError):
        S.pair("e", "u")


def test_coordinates_reject_elements_outside_basis():
    A = GraphAlgebra(graph("edge_vw"))
    F = A.group
    basis = graded_basis(A, [F.identity])
    x = A.xdelta(A.S.pair("e", "e"), F.letter("e"))
    assert coordinates(x, basis) is None
