"""Finite 0/1 words pinned at absolute integer positions.

A word covers the index range [offset, offset + length); its support is
the set of absolute positions carrying a 1.  Words are stored as
(offset, length, support) so that very long but sparsely supported words
(as produced by the CRT constructions) stay cheap; dense bit strings are
only materialized on demand.

Serialized form is the bit string followed by ``@offset``, e.g.
``0100010@0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import Blowup, MalformedSpec

# longest word that to01()/bits() will materialize densely
MAX_RENDER_LENGTH = 1 << 24


@dataclass(frozen=True)
class Word:
    offset: int
    length: int
    support: frozenset[int]

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("word length must be >= 0")
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))
        for p in self.support:
            if not self.offset <= p <= self.offset + self.length - 1:
                raise ValueError(
                    f"support position {p} outside "
                    f"[{self.offset}, {self.offset + self.length - 1}]"
                )

    @classmethod
    def from_bits(cls, offset: int, bits: str | Iterable[int]) -> "Word":
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise MalformedSpec(f"word bits must be 0/1, got {bits!r}")
            seq = bits
        else:
            seq = "".join("1" if b else "0" for b in bits)
        supp = frozenset(offset + i for i, c in enumerate(seq) if c == "1")
        return cls(offset, len(seq), supp)

    @classmethod
    def from_support(cls, offset: int, length: int, support: Iterable[int]) -> "Word":
        return cls(offset, length, frozenset(support))

    @property
    def end(self) -> int:
        """Absolute position of the last symbol (offset - 1 when empty)."""
        return self.offset + self.length - 1

    def bit(self, n: int) -> int:
        if not self.offset <= n <= self.end:
            raise IndexError(f"position {n} outside [{self.offset}, {self.end}]")
        return 1 if n in self.support else 0

    def to01(self) -> str:
        if self.length > MAX_RENDER_LENGTH:
            raise Blowup(f"refusing to render a word of length {self.length}")
        return "".join(
            "1" if n in self.support else "0"
            for n in range(self.offset, self.offset + self.length)
        )

    def __str__(self) -> str:
        return f"{self.to01()}@{self.offset}"

    def translate(self, t: int) -> "Word":
        return Word(self.offset + t, self.length, frozenset(p + t for p in self.support))

    def restrict(self, a: int, z: int) -> "Word":
        """Subword over the absolute range [a, z] (inclusive; must lie in the span)."""
        if a > z:
            return Word(a, 0, frozenset())
        if a < self.offset or z > self.end:
            raise IndexError(f"[{a}, {z}] not contained in [{self.offset}, {self.end}]")
        return Word(a, z - a + 1, frozenset(p for p in self.support if a <= p <= z))


def parse_word(text: str) -> Word:
    """Parse ``<bits>@<offset>``; a bare bit string means offset 0."""
    text = text.strip()
    if "@" in text:
        bits, _, off = text.rpartition("@")
        try:
            offset = int(off)
        except ValueError:
            raise MalformedSpec(f"bad word offset in {text!r}") from None
    else:
        bits, offset = text, 0
    return Word.from_bits(offset, bits)
