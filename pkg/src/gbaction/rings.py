"""Commutative unital coefficient rings: the integers, integers mod n, the rationals."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import ConsistencyError, DomainError, ParseError


class Ring:
    """A coefficient ring.  Values are Python ``int`` or ``Fraction``."""

    def __init__(self, kind: str, modulus: int | None = None):
        if kind not in ("integers", "mod", "rationals"):
            raise DomainError(f"unknown ring kind {kind!r}")
        if kind == "mod" and (modulus is None or modulus < 2):
            raise DomainError("modulus must be at least 2")
        self.kind = kind
        self.modulus = modulus if kind == "mod" else None
        self._spot_check()

    @classmethod
    def parse(cls, text: str) -> "Ring":
        text = text.strip()
        if text in ("integers", "Z"):
            return cls("integers")
        if text in ("rationals", "Q"):
            return cls("rationals")
        for prefix in ("mod:", "mod "):
            if text.startswith(prefix):
                try:
                    return cls("mod", int(text[len(prefix):]))
                except ValueError:
                    raise ParseError(f"bad modulus in {text!r}") from None
        raise ParseError(f"unknown ring {text!r}")

    def __repr__(self):
        return f"Z/{self.modulus}" if self.kind == "mod" else ("Z" if self.kind == "integers" else "Q")

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.kind, self.modulus) == (other.kind, other.modulus)

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __call__(self, value):
        """Coerce a Python number into the ring."""
        if self.kind == "integers":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(f"{value} is not an integer")
                value = value.numerator
            return int(value)
        if self.kind == "mod":
            return int(value) % self.modulus
        return Fraction(value)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return self(a + b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def is_zero(self, a) -> bool:
        return self(a) == 0

    def key(self, a):
        if self.kind == "rationals":
            return (a.numerator, a.denominator)
        return a

    def random(self, rng: random.Random, span: int = 3):
        v = rng.randint(-span, span)
        if self.kind == "rationals" and rng.random() < 0.3:
            return Fraction(v, rng.randint(1, 3))
        return self(v)

    def format(self, a) -> str:
        return str(a)

    def _spot_check(self):
        rng = random.Random(0)
        for _ in range(20):
            a, b, c = (self.random(rng) for _ in range(3))
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                raise ConsistencyError("ring fails distributivity")
            if self.mul(a, b) != self.mul(b, a) or self.mul(self.one, a) != a:
                raise ConsistencyError("ring fails commutativity or unit law")


INTEGERS = Ring("integers")
RATIONALS = Ring("rationals")
