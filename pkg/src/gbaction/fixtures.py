"""Reader for the line-oriented fixture format.

One declaration per line, ``#`` starts a comment::

    ring integers            # or rationals, mod:n
    vertex v                 # graph
    edge e v w
    lvertex u                # labelled space
    ledge e u w a
    family powerset          # or: family generated / family set <name> {u,w}
    kind semilattice         # or semigroup, antichain
    elements 0 a b t
    zero 0
    row a : 0 a 0 0          # row of the meet or product table
    group cyclic 2           # optional grading of a finite semigroup
    grade a 1

The object kind is inferred from the declarations used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, ParseError
from .graph_algebra import DirectedGraph
from .groups import FiniteGroup
from .inverse_semigroup import AntichainSemilattice, FiniteInverseSemigroup, Grading
from .labelled_algebra import LabelledGraph, LabelledSpace
from .rings import INTEGERS, Ring
from .tight_filters import Semilattice


@dataclass
class Fixture:
    kind: str
    obj: object
    ring: Ring = INTEGERS
    name: str = ""
    options: dict = field(default_factory=dict)


_SET = re.compile(r"^\{([^}]*)\}$")


def _parse_set(text: str, lineno: int) -> list[str]:
    m = _SET.match(text.strip())
    if not m:
        raise ParseError("expected a set like {u,w}", lineno)
    return [t.strip() for t in m.group(1).split(",") if t.strip()]


def parse_fixture(text: str, name: str = "") -> Fixture:
    ring = INTEGERS
    kind = None
    vertices, edges = [], []
    lvertices, ledges = [], []
    family = None
    family_sets: list = []
    elements = None
    zero = None
    rows: dict = {}
    group = None
    grades: dict = {}
    options: dict = {}

    def want_kind(k, lineno):
        nonlocal kind
        if kind is not None and kind != k:
            raise ParseError(f"{k} declaration in a {kind} fixture", lineno)
        kind = k

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        args = rest.split()
        try:
            if head == "ring":
                ring = Ring.parse(rest)
            elif head in ("depth", "trials", "seed"):
                options[head] = int(rest)
            elif head == "vertex" and len(args) == 1:
                want_kind("graph", lineno)
                vertices.append(args[0])
            elif head == "edge" and len(args) == 3:
                want_kind("graph", lineno)
                edges.append(tuple(args))
            elif head == "lvertex" and len(args) == 1:
                want_kind("labelled", lineno)
                lvertices.append(args[0])
            elif head == "ledge" and len(args) == 4:
                want_kind("labelled", lineno)
                ledges.append(tuple(args))
            elif head == "family":
                want_kind("labelled", lineno)
                if args and args[0] in ("powerset", "generated"):
                    family = args[0]
                elif args and args[0] == "set" and len(args) >= 3:
                    family = family or "set"
                    family_sets.append(_parse_set(" ".join(args[2:]), lineno))
                else:
                    raise ParseError("bad family declaration", lineno)
            elif head == "kind" and len(args) == 1 and args[0] in (
                    "semilattice", "semigroup", "antichain"):
                want_kind(args[0], lineno)
            elif head == "elements" and args:
                elements = args
            elif head == "zero" and len(args) == 1:
                zero = args[0]
            elif head == "row":
                key, sep, vals = rest.partition(":")
                if not sep:
                    raise ParseError("row needs ':'", lineno)
                rows[key.strip()] = vals.split()
            elif head == "group" and len(args) == 2 and args[0] == "cyclic":
                group = FiniteGroup.cyclic(int(args[1]))
            elif head == "grade" and len(args) == 2:
                grades[args[0]] = args[1]
            else:
                raise ParseError(f"cannot parse {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None

    if kind is None:
        raise ParseError("fixture declares no object")
    try:
        if kind == "graph":
            obj = DirectedGraph(vertices, edges)
        elif kind == "labelled":
            LG = LabelledGraph(lvertices, ledges)
            if family in (None, "powerset"):
                obj = LabelledSpace.powerset(LG)
            elif family == "generated":
                obj = LabelledSpace.generated(LG, family_sets)
            else:
                obj = LabelledSpace.explicit(LG, family_sets)
        elif kind == "antichain":
            obj = AntichainSemilattice()
        else:
            obj = _table_object(kind, elements, zero, rows, group, grades)
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    return Fixture(kind, obj, ring, name, options)


@dataclass
class SemilatticeTable:
    """A meet table as read; axioms are checked when :meth:`build` is called."""

    names: list
    table: list
    zero: int | None

    def build(self) -> Semilattice:
        return Semilattice(self.names, self.table, self.zero)


def _table_object(kind, elements, zero, rows, group, grades):
    if not elements:
        raise ParseError("table fixture needs an elements line")
    missing = [x for x in elements if x not in rows]
    if missing:
        raise ParseError(f"missing rows for {missing}")
    pos = {x: i for i, x in enumerate(elements)}
    table = []
    for x in elements:
        row = rows[x]
        if len(row) != len(elements) or any(v not in pos for v in row):
            raise ParseError(f"bad row for {x!r}")
        table.append([pos[v] for v in row])
    if kind == "semilattice":
        return SemilatticeTable(elements, table, pos[zero] if zero else None)
    if zero is None:
        raise ParseError("semigroup fixture needs a zero line")
    S = FiniteInverseSemigroup(elements, table, zero)
    if group is not None:
        values = {x: group.parse(v) for x, v in grades.items()}
        S.set_canonical_grading(Grading(group, lambda s: values.get(s, group.identity), "table"))
    return S


def load_fixture(path: str | Path) -> Fixture:
    p = Path(path)
    return parse_fixture(p.read_text(encoding="utf-8"), p.stem)
