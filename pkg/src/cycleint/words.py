"""Even words, their SL2(Z) matrices, and exact 2x2 integer matrix arithmetic.

An even word ``(k1, ..., kr)`` is an even-length sequence of positive
integers.  It addresses the purely periodic continued fraction
``[k1, ..., kr, k1, ..., kr, ...]`` and acts through the product of the
continuant matrices ``[[k, 1], [1, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class WordError(ValueError):
    """Raised when a sequence violates the even-word invariants."""


class EvenWord(tuple):
    """Immutable even-length tuple of positive integers.

    The empty word is allowed and is the identity for concatenation.
    """

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for k in entries:
            if isinstance(k, bool) or not isinstance(k, int):
                raise WordError(f"word entries must be integers, got {k!r}")
            if k < 1:
                raise WordError(f"word entries must be >= 1, got {k}")
        if len(entries) % 2:
            raise WordError(f"word {_fmt(entries)} has odd length {len(entries)}")
        return super().__new__(cls, entries)

    def __add__(self, other):
        return EvenWord(tuple(self) + tuple(EvenWord(other)))

    def __mul__(self, n):
        return power(self, n)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return tuple(super().__getitem__(item))
        return super().__getitem__(item)

    def __str__(self):
        return _fmt(self)

    def __repr__(self):
        return f"EvenWord({_fmt(self)})"

    @classmethod
    def parse(cls, text: str) -> "EvenWord":
        """Parse the canonical form ``(k1,k2,...)``; ``()`` is the empty word."""
        s = "".join(text.split())
        if not (s.startswith("(") and s.endswith(")")):
            raise WordError(f"not a word literal: {text!r}")
        body = s[1:-1]
        if not body:
            return cls()
        try:
            return cls(int(t) for t in body.split(","))
        except ValueError as exc:
            if isinstance(exc, WordError):
                raise
            raise WordError(f"not a word literal: {text!r}") from None


def _fmt(entries: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in entries) + ")"


@dataclass(frozen=True)
class Mat2Z:
    """2x2 integer matrix ``[[a, b], [c, d]]`` with Python (unbounded) ints."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2Z":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "Mat2Z") -> "Mat2Z":
        if not isinstance(other, Mat2Z):
            return NotImplemented
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2Z":
        det = self.det
        if det not in (1, -1):
            raise ArithmeticError(f"matrix {self} is not invertible over Z")
        return Mat2Z(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def __pow__(self, n: int) -> "Mat2Z":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = Mat2Z.identity()
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __neg__(self) -> "Mat2Z":
        return Mat2Z(-self.a, -self.b, -self.c, -self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def act(self, z: complex) -> complex:
        """Floating-point Moebius action on a complex number."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


T = Mat2Z(1, 1, 0, 1)
L = Mat2Z(1, 0, 1, 1)
S = Mat2Z(0, -1, 1, 0)


def concat(words: Iterable[Sequence[int]]) -> EvenWord:
    out: list[int] = []
    for w in words:
        out.extend(EvenWord(w))
    return EvenWord(out)


def power(word: Sequence[int], n: int) -> EvenWord:
    if n < 0:
        raise WordError(f"word exponent must be >= 0, got {n}")
    return EvenWord(tuple(word) * n)


def primitive_decomposition(word: Sequence[int]) -> tuple[EvenWord, int]:
    """Return ``(root, N)`` with ``word == root**N`` and ``N`` maximal.

    Only even-length roots count, so ``(1,1)`` is its own root.
    """
    word = EvenWord(word)
    n = len(word)
    if n == 0:
        raise WordError("the empty word has no primitive decomposition")
    for d in range(2, n + 1, 2):
        if n % d == 0 and word[:d] * (n // d) == tuple(word):
            return EvenWord(word[:d]), n // d
    raise AssertionError("unreachable: the word is its own period")


def multiplicity(word: Sequence[int]) -> int:
    return primitive_decomposition(word)[1]


def continuant_matrix(entries: Iterable[int]) -> Mat2Z:
    """Product of ``[[k, 1], [1, 0]]`` over arbitrary integer entries.

    Unlike :func:`gamma_of_word` no word invariants are checked; an odd
    number of factors gives determinant -1.
    """
    p0, q0, p1, q1 = 1, 0, 0, 1
    # columns (p0, p1), (q0, q1) updated by right-multiplication
    for k in entries:
        p0, q0 = k * p0 + q0, p0
        p1, q1 = k * p1 + q1, p1
    return Mat2Z(p0, q0, p1, q1)


def gamma_of_word(word: Sequence[int]) -> Mat2Z:
    return continuant_matrix(EvenWord(word))


def rotate(words: Sequence, i: int) -> list:
    """Rotate a list so that its ``i``-th element (1-based) comes first."""
    if not 1 <= i <= len(words):
        raise IndexError(f"rotation index {i} out of range 1..{len(words)}")
    return list(words[i - 1:]) + list(words[: i - 1])


def ladder(entries: Sequence[int], inverse: bool = False) -> list[tuple[str, int]]:
    """Factor the continuant matrix of an even-length sequence into blocks.

    ``gamma_(k1,k2) = T**k1 @ L**k2``, so a word becomes the block list
    ``[("T", k1), ("L", k2), ...]``.  Entries may be any integers.  With
    ``inverse=True`` the blocks of the inverse matrix are returned.
    """
    if len(entries) % 2:
        raise WordError("ladder needs an even number of entries")
    blocks = [("T" if i % 2 == 0 else "L", int(k)) for i, k in enumerate(entries)]
    if inverse:
        blocks = [(g, -k) for g, k in reversed(blocks)]
    return [(g, k) for g, k in blocks if k != 0]


def ladder_matrix(blocks: Iterable[tuple[str, int]]) -> Mat2Z:
    m = Mat2Z.identity()
    for g, k in blocks:
        m = m @ ((T if g == "T" else L) ** k)
    return m
