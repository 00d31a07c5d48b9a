"""Sliding block codes over the binary alphabet.

A code of radius r is a total 0/1 function on blocks of width 2r + 1,
applied by sliding the window along a word.  The domain is either every
block of that width or a declared language table; blocks outside a
restricted domain are unmapped.

The structural test used throughout: the offsets t carried by every
1-block of the code.  Any such shared offset t certifies that the image
of a word is dominated by the word shifted by t.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .errors import Blowup, MalformedSpec, NonVanishingAtZero, PartialTable, TooShort
from .sieve import LanguageTable
from .words import Word

DEFAULT_TABLE_CAP = 1 << 26


def all_blocks(width: int):
    for bits in product("01", repeat=width):
        yield "".join(bits)


def block_support(block: str, radius: int) -> frozenset[int]:
    """Offsets of the 1s, indexed -radius .. radius."""
    return frozenset(i - radius for i, c in enumerate(block) if c == "1")


@dataclass(frozen=True)
class Code:
    """radius, the set of blocks mapped to 1, and an optional domain.

    domain None means the full block set of the code's width; otherwise
    ones must be contained in the domain and evaluation outside it is an
    error.
    """

    radius: int
    ones: frozenset[str]
    domain: frozenset[str] | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise MalformedSpec("radius must be >= 0")
        if not isinstance(self.ones, frozenset):
            object.__setattr__(self, "ones", frozenset(self.ones))
        if self.domain is not None and not isinstance(self.domain, frozenset):
            object.__setattr__(self, "domain", frozenset(self.domain))
        w = self.width
        for b in self.ones:
            if len(b) != w or set(b) - {"0", "1"}:
                raise MalformedSpec(f"bad block {b!r} for radius {self.radius}")
        if self.domain is not None:
            for b in self.domain:
                if len(b) != w or set(b) - {"0", "1"}:
                    raise MalformedSpec(f"bad domain block {b!r}")
            if not self.ones <= self.domain:
                raise PartialTable("ones contain blocks outside the declared domain")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @property
    def domain_size(self) -> int:
        return 2**self.width if self.domain is None else len(self.domain)

    def in_domain(self, block: str) -> bool:
        return self.domain is None or block in self.domain

    def phi(self, block: str) -> int:
        if len(block) != self.width:
            raise MalformedSpec(
                f"block of length {len(block)} fed to width-{self.width} code"
            )
        if not self.in_domain(block):
            raise PartialTable(f"block {block!r} outside the code's domain")
        return 1 if block in self.ones else 0

    def iter_domain(self):
        if self.domain is None:
            return all_blocks(self.width)
        return iter(sorted(self.domain))

    def describe(self) -> str:
        return (
            f"radius={self.radius} ones={len(self.ones)} "
            f"domain={'full' if self.domain is None else len(self.domain)}"
        )


def make_code(
    radius: int,
    table: Mapping[str, int],
    domain: Iterable[str] | None = None,
) -> Code:
    """Build a code from an explicit block -> bit mapping.

    The mapping must be total on the domain (the full block set when no
    domain is given).
    """
    dom = None if domain is None else frozenset(domain)
    expected = dom if dom is not None else frozenset(all_blocks(2 * radius + 1))
    missing = expected - set(table)
    if missing:
        raise PartialTable(
            f"table is missing {len(missing)} blocks, e.g. {sorted(missing)[:3]}"
        )
    ones = frozenset(b for b in expected if table[b])
    return Code(radius, ones, dom)


def identity_code() -> Code:
    return Code(0, frozenset({"1"}))


def all_zero_code(radius: int = 0) -> Code:
    return Code(radius, frozenset())


def shift_code(t: int) -> Code:
    """Code computing x(n + t); radius |t|."""
    r = abs(t)
    ones = frozenset(b for b in all_blocks(2 * r + 1) if b[r + t] == "1")
    return Code(r, ones)


def and_mask_code(offsets: Iterable[int], radius: int | None = None) -> Code:
    """Code computing the AND of x(n + j) over the given offsets."""
    offs = sorted(set(offsets))
    if not offs:
        raise MalformedSpec("and_mask needs at least one offset")
    r = max(abs(o) for o in offs) if radius is None else radius
    if any(abs(o) > r for o in offs):
        raise MalformedSpec(f"offsets {offs} exceed radius {r}")
    ones = frozenset(
        b for b in all_blocks(2 * r + 1) if all(b[r + o] == "1" for o in offs)
    )
    return Code(r, ones)


def builtin_code(spec: str) -> Code:
    """Factory by name: identity | all_zero | shift:t | and_mask:j1,j2,..."""
    name, _, arg = spec.partition(":")
    if name == "identity":
        return identity_code()
    if name == "all_zero":
        return all_zero_code(int(arg) if arg else 0)
    if name == "shift":
        return shift_code(int(arg))
    if name == "and_mask":
        return and_mask_code(int(tok) for tok in arg.split(",") if tok.strip())
    raise MalformedSpec(f"unknown builtin code {spec!r}")


def restrict_code(c: Code, lang: LanguageTable) -> Code:
    if lang.block_length != c.width:
        raise MalformedSpec(
            f"domain table has length {lang.block_length}, code width is {c.width}"
        )
    base = lang.blocks if c.domain is None else lang.blocks & c.domain
    return Code(c.radius, c.ones & base, base)


def apply_code(c: Code, w: Word, *, dense_cap: int = 1 << 22) -> Word:
    """Slide the code along w; the output loses radius positions at each end."""
    if w.length < c.width:
        raise TooShort(
            f"word of length {w.length} is shorter than the code width {c.width}"
        )
    if w.length > dense_cap:
        raise Blowup(
            f"word of length {w.length} exceeds the dense cap; "
            "use apply_to_finite_config for sparse configurations"
        )
    text = w.to01()
    out = [c.phi(text[i : i + c.width]) for i in range(w.length - c.width + 1)]
    return Word.from_bits(w.offset + c.radius, out)


def _window_block(support: frozenset[int], center: int, radius: int) -> str:
    return "".join(
        "1" if center + j in support else "0" for j in range(-radius, radius + 1)
    )


def image_support(c: Code, support: frozenset[int]) -> frozenset[int]:
    """Support of the image of a zero-extended configuration.

    Requires the all-zero block to map to 0, so only positions whose
    window touches the input support can light up.
    """
    zero = "0" * c.width
    if c.in_domain(zero) and zero in c.ones:
        raise NonVanishingAtZero(
            "the all-zero block maps to 1; the image has infinite support"
        )
    candidates = {n + j for n in support for j in range(-c.radius, c.radius + 1)}
    return frozenset(
        n
        for n in candidates
        if c.phi(_window_block(support, n, c.radius)) == 1
    )


def apply_to_finite_config(c: Code, w: Word) -> Word:
    """Apply the code to w extended by zeros on both sides.

    The output word spans [offset - radius, end + radius]; everything
    outside is zero because the all-zero block must map to 0.
    """
    supp = image_support(c, w.support)
    return Word(w.offset - c.radius, w.length + 2 * c.radius, supp)


def compose(c1: Code, c2: Code, *, table_cap: int = DEFAULT_TABLE_CAP) -> Code:
    """The code applying c2 first, then c1; radius adds.

    Blocks whose evaluation hits an unmapped sub-block are left out of
    the composite domain, so composing restricted codes yields a
    restricted code.
    """
    r = c1.radius + c2.radius
    width = 2 * r + 1
    if 2**width > table_cap:
        raise Blowup(f"composite table of width {width} exceeds cap {table_cap}")
    ones = set()
    domain: set[str] | None = set()
    restricted = c1.domain is not None or c2.domain is not None
    for v in all_blocks(width):
        try:
            mid = "".join(
                str(c2.phi(v[i : i + c2.width])) for i in range(2 * c1.radius + 1)
            )
            bit = c1.phi(mid)
        except PartialTable:
            continue
        domain.add(v)
        if bit:
            ones.add(v)
    if not restricted:
        domain = None
    return Code(r, frozenset(ones), None if domain is None else frozenset(domain))


def image_block(c: Code, block: str) -> str:
    """Slide the code along a position-free block."""
    if len(block) < c.width:
        raise TooShort(f"block {block!r} shorter than code width {c.width}")
    return "".join(
        str(c.phi(block[i : i + c.width])) for i in range(len(block) - c.width + 1)
    )


def consistency_check(
    c: Code, lang_in: LanguageTable, lang_out: LanguageTable
) -> tuple[tuple[str, str], ...]:
    """Input blocks whose image block leaves lang_out.

    Empty means the code maps the level-n language into itself, a
    necessary condition for defining a map of the subshift.
    """
    if lang_in.block_length != lang_out.block_length + 2 * c.radius:
        raise MalformedSpec(
            f"need input length = output length + {2 * c.radius}, got "
            f"{lang_in.block_length} vs {lang_out.block_length}"
        )
    violations = []
    for w in lang_in.sorted_blocks():
        out = image_block(c, w)
        if out not in lang_out.blocks:
            violations.append((w, out))
    return tuple(violations)


@dataclass(frozen=True)
class WitnessReport:
    """Offsets shared by the supports of every 1-block.

    Nonempty witnesses certify image domination by the corresponding
    shifts; a code with no 1-blocks dominates trivially and reports the
    full window with the all_zero_code flag.  The canonical witness
    minimizes |t|, preferring t >= 0 on ties.
    """

    radius: int
    witnesses: frozenset[int]
    all_zero_code: bool
    canonical: int | None

    @property
    def monotone(self) -> bool:
        return 0 in self.witnesses


def monotone_witness(c: Code) -> WitnessReport:
    window = frozenset(range(-c.radius, c.radius + 1))
    if not c.ones:
        return WitnessReport(c.radius, window, True, 0)
    common = window
    for u in c.ones:
        common &= block_support(u, c.radius)
        if not common:
            break
    canonical = (
        None if not common else min(common, key=lambda t: (abs(t), t < 0))
    )
    return WitnessReport(c.radius, common, False, canonical)


def is_monotone(c: Code) -> bool:
    """True iff every 1-block carries a 1 at its center."""
    return monotone_witness(c).monotone


def code_to_text(c: Code) -> str:
    """Serialize; restricted domains are listed explicitly."""
    lines = [f"radius={c.radius}"]
    if c.domain is None and 2**c.width <= 1 << 16:
        lines.append("table=" + "".join(str(c.phi(b)) for b in all_blocks(c.width)))
    else:
        lines.append("ones=" + ",".join(sorted(c.ones)))
        if c.domain is not None:
            lines.append("domain=" + ",".join(sorted(c.domain)))
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> Code:
    """Parse the ``radius=`` / ``ones=`` | ``table=`` format."""
    kv: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedSpec(f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()
    if "radius" not in kv:
        raise MalformedSpec("code file is missing radius=")
    radius = int(kv["radius"])
    width = 2 * radius + 1
    if "table" in kv:
        bits = kv["table"]
        if len(bits) != 2**width or set(bits) - {"0", "1"}:
            raise PartialTable(
                f"table needs exactly {2 ** width} bits of 0/1, got {len(bits)}"
            )
        ones = frozenset(b for b, bit in zip(all_blocks(width), bits) if bit == "1")
        return Code(radius, ones)
    if "ones" not in kv:
        raise MalformedSpec("code file needs ones= or table=")
    ones = frozenset(tok for tok in kv["ones"].split(",") if tok.strip())
    domain = None
    if "domain" in kv:
        domain = frozenset(tok for tok in kv["domain"].split(",") if tok.strip())
    return Code(radius, ones, domain)
