"""Finite groups given by tables and free groups on finite alphabets."""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DomainError, ParseError

Word = tuple  # tuple of (letter, +1 | -1)


class FreeGroup:
    """The free group on an ordered alphabet.

    Elements are reduced words, stored as tuples of ``(letter, sign)`` pairs.

    >>> F = FreeGroup("ab")
    >>> F.reduce(["a", ("a", -1), "b"])
    (('b', 1),)
    """

    kind = "free"

    def __init__(self, alphabet: Iterable[Hashable]):
        self.alphabet = list(dict.fromkeys(alphabet))
        self._letters = set(self.alphabet)
        self._rank = {a: i for i, a in enumerate(self.alphabet)}

    identity: Word = ()

    def _token(self, tok):
        if isinstance(tok, tuple):
            letter, sign = tok
        else:
            letter, sign = tok, 1
        if letter not in self._letters:
            raise DomainError(f"unknown generator {letter!r}")
        if sign not in (1, -1):
            raise DomainError(f"bad exponent {sign!r}")
        return (letter, sign)

    def reduce(self, raw: Iterable) -> Word:
        stack: list = []
        for tok in raw:
            letter, sign = self._token(tok)
            if stack and stack[-1] == (letter, -sign):
                stack.pop()
            else:
                stack.append((letter, sign))
        return tuple(stack)

    def letter(self, a, sign: int = 1) -> Word:
        return (self._token((a, sign)),)

    def positive(self, letters: Iterable) -> Word:
        return self.reduce(list(letters))

    def mul(self, u: Word, v: Word) -> Word:
        i = 0
        while i < len(u) and i < len(v):
            lu, su = u[len(u) - 1 - i]
            lv, sv = v[i]
            if lu == lv and su == -sv:
                i += 1
            else:
                break
        return u[:len(u) - i] + v[i:]

    def inv(self, u: Word) -> Word:
        return tuple((a, -s) for a, s in reversed(u))

    def length(self, u: Word) -> int:
        return len(u)

    def elements(self, max_len: int) -> list[Word]:
        """All reduced words of length at most ``max_len`` in a fixed order."""
        out = [()]
        layer = [()]
        toks = [(a, s) for a in self.alphabet for s in (1, -1)]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for t in toks:
                    if w and w[-1] == (t[0], -t[1]):
                        continue
                    nxt.append(w + (t,))
            out.extend(nxt)
            layer = nxt
        return out

    def sort_key(self, u: Word):
        return (len(u), tuple((self._rank[a], -s) for a, s in u))

    def format(self, u: Word) -> str:
        if not u:
            return "1"
        return " ".join(str(a) if s == 1 else f"{a}^-1" for a, s in u)

    def parse(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "1"):
            return ()
        toks = []
        for part in text.split():
            if part.endswith("^-1"):
                toks.append((part[:-3], -1))
            else:
                toks.append((part, 1))
        try:
            return self.reduce(toks)
        except DomainError as exc:
            raise ParseError(str(exc)) from None

    def split_positive_negative(self, u: Word):
        """Write ``u`` as ``p q^-1`` with ``p``, ``q`` positive; ``None`` if impossible."""
        k = 0
        while k < len(u) and u[k][1] == 1:
            k += 1
        if any(s == 1 for _, s in u[k:]):
            return None
        p = tuple(a for a, _ in u[:k])
        q = tuple(a for a, _ in reversed(u[k:]))
        return p, q


class FiniteGroup:
    """A finite group given by names and a multiplication table (verified on load)."""

    kind = "finite"

    def __init__(self, names: Sequence[Hashable], table: Sequence[Sequence[int]]):
        self.names = list(names)
        n = len(self.names)
        self.table = [list(r) for r in table]
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise DomainError("group table has the wrong shape")
        ident = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ident:
            raise DomainError("group table has no identity")
        self._e = ident[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise DomainError("group table is not associative")
        self._inv = {}
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self._e]
            if len(inv) != 1 or self.table[inv[0]][a] != self._e:
                raise DomainError(f"element {self.names[a]!r} has no inverse")
            self._inv[a] = inv[0]
        self.index = {x: i for i, x in enumerate(self.names)}

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(["1"], [[0]])

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)])

    @property
    def identity(self):
        return self._e

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def length(self, a) -> int:
        return 0 if a == self._e else 1

    def elements(self, max_len: int = 0) -> list:
        return list(range(len(self.names)))

    def sort_key(self, a):
        return a

    def format(self, a) -> str:
        return str(self.names[a])

    def parse(self, text: str):
        try:
            return self.index[text.strip()]
        except KeyError:
            raise ParseError(f"unknown group element {text!r}") from None


class FreeHomomorphism:
    """Homomorphism out of a free group fixed by the images of generators."""

    def __init__(self, source: FreeGroup, target, images: Mapping):
        missing = [a for a in source.alphabet if a not in images]
        if missing:
            raise DomainError(f"no image for generators {missing}")
        self.source = source
        self.target = target
        self.images = dict(images)

    def __call__(self, w: Word):
        out = self.target.identity
        for a, s in w:
            img = self.images[a]
            out = self.target.mul(out, img if s == 1 else self.target.inv(img))
        return out
