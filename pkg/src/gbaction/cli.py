"""Command line front end: load a fixture, run a verification suite, print a report.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .errors import BoundExceeded, DomainError, GbaError, ParseError, UnsupportedError
from .fixtures import Fixture, SemilatticeTable, load_fixture
from .graph_algebra import (GraphSemigroup, cylinder_cover_check, graded_dimensions,
                            leavitt_map, validate_graph, verify_ck_relations)
from .groups import FreeGroup
from .inverse_semigroup import (FiniteInverseSemigroup, SemigroupAlgebra,
                                semigroup_orthogonality_checks, unitization_report,
                                verify_inverse_semigroup, verify_nonvanishing,
                                verify_pure_grading)
from .labelled_algebra import (LabelledSemigroup, ck_map, generator_products,
                               validate_labelled)
from .labelled_algebra import verify_ck_relations as verify_labelled_relations
from .partial_action import is_orthogonal, is_semi_saturated, verify_partial_action
from .report import Report
from .rings import Ring
from .skew_algebra import verify_local_units, verify_skew_identities
from .tight_filters import (enumerate_filters, is_tight_filter, is_ultrafilter,
                            tight_space, tc)

DEFAULTS = {"depth": 3, "trials": 500, "seed": 0}


class UsageError(GbaError):
    pass


def _option(args, fx: Fixture, name):
    value = getattr(args, name)
    if value is not None:
        return value
    return fx.options.get(name, DEFAULTS[name])


def _semigroup(fx: Fixture):
    if fx.kind == "graph":
        return GraphSemigroup(fx.obj)
    if fx.kind == "labelled":
        return LabelledSemigroup(fx.obj)
    if fx.kind == "semilattice":
        return FiniteInverseSemigroup.from_semilattice(fx.obj.build())
    return fx.obj


def _out(text: str = ""):
    print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(fx: Fixture, args) -> bool:
    depth = _option(args, fx, "depth")
    if fx.kind == "graph":
        rep = validate_graph(fx.obj, depth)
        rep.extend(cylinder_cover_check(GraphSemigroup(fx.obj)))
    elif fx.kind == "labelled":
        rep = validate_labelled(fx.obj, min(depth, 2))
    elif fx.kind == "semilattice":
        rep = Report("semilattice")
        try:
            fx.obj.build()
            rep.add("meet table is a semilattice with zero", True)
        except DomainError as exc:
            rep.add("meet table is a semilattice with zero", False, witness=str(exc))
    else:
        S = fx.obj
        rep = verify_inverse_semigroup(S, depth)
        if rep.ok and fx.kind == "semigroup":
            rep.extend(verify_pure_grading(S, S.canonical_grading()))
    _out(rep.render())
    return rep.ok


def _finite_semilattice(fx: Fixture):
    if isinstance(fx.obj, SemilatticeTable):
        return fx.obj.build()
    if fx.kind == "semigroup":
        return fx.obj.tight_model().P
    raise UsageError("tight needs a semilattice or finite semigroup fixture")


def cmd_tight(fx: Fixture, args) -> bool:
    P = _finite_semilattice(fx)
    filters = enumerate_filters(P, bound=max(len(P), 1))
    ultra = [F for F in filters if is_ultrafilter(P, F)]
    tight = [F for F in filters if is_tight_filter(P, F)]
    _out(f"== tight spectrum of {fx.name or 'semilattice'} ==")
    _out(f"filters {len(filters)}, ultra {len(ultra)}, tight {len(tight)}")
    for F in filters:
        tags = [t for t, ok in (("ultra", F in ultra), ("tight", F in tight)) if ok]
        _out(f"  {P.fmt(F)}" + (f" [{', '.join(tags)}]" if tags else ""))
    T = tight_space(P, bound=max(len(P), 1))
    space = tc(T)
    _out("basic sets:")
    for x in range(len(P)):
        _out(f"  V_{P.names[x]} = {space.V(x)!r}")
    return tight == ultra


def cmd_algebra(fx: Fixture, args) -> bool:
    depth = _option(args, fx, "depth")
    trials = _option(args, fx, "trials")
    seed = _option(args, fx, "seed")
    S = _semigroup(fx)
    A = SemigroupAlgebra(S, None, fx.ring)
    G = A.group
    _out(f"== algebra of {fx.name or fx.kind} over {fx.ring!r} ==")
    _out(f"graded spanning dimensions (words up to {depth}):")
    dims = graded_dimensions(A, depth, depth)
    for g in sorted(dims, key=G.sort_key):
        label = "identity" if g == G.identity else G.format(g)
        _out(f"  {label}: {dims[g]}")
    _out(f"  total: {sum(dims.values())}")
    unit = A.unit()
    _out("unital: " + (f"yes, unit {A.format(unit)}" if unit is not None else "no (non-unital)"))
    rng = random.Random(seed)
    support = A.bundle.support(min(depth, 2))
    g = support[rng.randrange(len(support))]
    top = A.bundle.ideal(g).top_element()
    if top is None or not top:
        g = G.identity
        top = A.space.generators(1)[0]
    U = A.space.pieces(top, 1)[0]
    x = A.delta(U, g)
    _out(f"local unit demo: x = {A.format(x)}, unit = {A.local_unit_for(x)!r}")
    rep = verify_skew_identities(A, trials=trials, seed=seed)
    rep.extend(verify_local_units(A, samples=min(trials, 200), seed=seed))
    rep.extend(verify_nonvanishing(A, min(depth, 2), 2))
    _out(rep.render())
    return rep.ok


def cmd_ck(fx: Fixture, args) -> bool:
    depth = _option(args, fx, "depth")
    if fx.kind == "graph":
        rep = verify_ck_relations(leavitt_map(fx.obj, fx.ring))
    elif fx.kind == "labelled":
        check = validate_labelled(fx.obj, 1)
        if not check.ok:
            _out(check.render())
            return False
        images = ck_map(fx.obj, fx.ring)
        rep = verify_labelled_relations(images)
        rep.extend(generator_products(fx.obj, depth, images.algebra))
    else:
        raise UsageError("ck needs a graph or labelled fixture")
    _out(rep.render())
    return rep.ok


def cmd_unitize(fx: Fixture, args) -> bool:
    depth = _option(args, fx, "depth")
    if fx.kind == "graph" and fx.obj.is_acyclic():
        # finitely many nonzero elements: tabulate them
        S = FiniteInverseSemigroup.from_handle(GraphSemigroup(fx.obj), fx.obj.longest_path())
    elif fx.kind in ("semilattice", "semigroup", "antichain"):
        S = _semigroup(fx)
    else:
        raise UsageError("unitize needs a finite semigroup, an acyclic graph or the antichain")
    rep = unitization_report(S, fx.ring, depth)
    _out(rep.render())
    names = {c.name for c in rep.checks}
    if "inclusion is proper" in names:
        essential = any(c.name == "image is essential" and c.passed for c in rep.checks)
        _out("verdict: proper " + ("essential ideal" if essential else "non-essential ideal"))
    elif "inclusion is an equality" in names:
        _out("verdict: equality")
    return rep.ok


def cmd_action_check(fx: Fixture, args) -> bool:
    depth = _option(args, fx, "depth")
    S = _semigroup(fx)
    A = SemigroupAlgebra(S, None, fx.ring)
    rep = verify_partial_action(A.bundle, depth)
    if isinstance(A.group, FreeGroup):
        flags = semigroup_orthogonality_checks(S, bound=depth)
        rep.add("semigroup grading orthogonal", flags.orthogonal)
        rep.add("semigroup grading semi-saturated", flags.semi_saturated)
        rep.add("bundle orthogonal", is_orthogonal(A.bundle))
        rep.add("bundle semi-saturated", is_semi_saturated(A.bundle, depth))
    _out(rep.render())
    return rep.ok


COMMANDS = {
    "validate": cmd_validate,
    "tight": cmd_tight,
    "algebra": cmd_algebra,
    "ck": cmd_ck,
    "unitize": cmd_unitize,
    "action-check": cmd_action_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbaction",
        description="Partial actions on generalized Boolean algebras and their skew rings.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("fixture", help="path to a fixture file")
    parser.add_argument("--depth", type=int, help="depth bound (default 3)")
    parser.add_argument("--trials", type=int, help="randomized trials (default 500)")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--ring", help="integers | rationals | mod:n")
    parser.add_argument("--grading-report", action="store_true",
                        help="accepted for compatibility; the algebra report always lists degrees")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        fx = load_fixture(args.fixture)
        if args.ring:
            fx.ring = Ring.parse(args.ring)
        ok = COMMANDS[args.command](fx, args)
    except (OSError, ParseError, UsageError, UnsupportedError, BoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
