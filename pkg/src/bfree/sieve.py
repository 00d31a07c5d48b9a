"""Windows of the free characteristic sequence and block languages.

The characteristic sequence eta has a 1 exactly at the integers no
element of B divides.  A word is admissible when its support misses a
residue class modulo every b in B; only b up to the support size can
fail this, which keeps the test exact even for infinite B.

Block languages of one length come from three sources: full admissible
enumeration, factors scanned out of an eta window (a lower
approximation), and hereditary closure of either.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .bset import BSet, DEFAULT_PERIOD_CAP, explicit_bset
from .errors import Blowup, MalformedSpec, PeriodTooLarge
from .words import Word

DEFAULT_TABLE_CAP = 1 << 26
DEFAULT_SAMPLE_WINDOW = 10**6

ADMISSIBLE = "admissible"


def eta_window(B: BSet, a: int, z: int) -> Word:
    """The window [a, z] of the free characteristic sequence.

    Position n carries a 1 iff n != 0 and no enumerated b <= |n| divides
    n (larger b cannot divide n); position 0 is always 0.
    """
    if a > z:
        raise MalformedSpec(f"empty range [{a}, {z}]")
    marked = bytearray(z - a + 1)
    if a <= 0 <= z:
        marked[-a] = 1
    for b in B.enumerate(max(abs(a), abs(z))):
        first = a + (-a) % b
        for n in range(first, z + 1, b):
            marked[n - a] = 1
    support = frozenset(a + i for i, m in enumerate(marked) if not m)
    return Word(a, z - a + 1, support)


def residue_profile(w: Word, b: int) -> frozenset[int]:
    if b < 2:
        raise MalformedSpec("modulus must be >= 2")
    return frozenset(p % b for p in w.support)


def is_admissible(w: Word, B: BSet) -> bool:
    """True iff supp(w) misses a residue class modulo every element of B.

    Only elements b <= |supp(w)| are consulted: a larger b sees at most
    |supp(w)| < b residues and can never be saturated.
    """
    supp = w.support
    size = len(supp)
    if size == 0:
        return True
    for b in B.enumerate(size):
        if len({p % b for p in supp}) == b:
            return False
    return True


def translation_invariance_check(w: Word, t: int, B: BSet) -> bool:
    """Self-test hook: admissibility verdicts agree under translation by t."""
    return is_admissible(w, B) == is_admissible(w.translate(t), B)


@dataclass(frozen=True)
class LanguageTable:
    """All blocks of one length from a declared source, position-free."""

    block_length: int
    blocks: frozenset[str]
    source: str

    def __post_init__(self):
        for b in self.blocks:
            if len(b) != self.block_length:
                raise MalformedSpec(
                    f"block {b!r} has length {len(b)}, table expects {self.block_length}"
                )

    def __contains__(self, block: str) -> bool:
        return block in self.blocks

    def __len__(self) -> int:
        return len(self.blocks)

    def sorted_blocks(self) -> list[str]:
        return sorted(self.blocks)

    def is_hereditary(self) -> bool:
        """Closed under turning any 1 into a 0."""
        for b in self.blocks:
            for i, c in enumerate(b):
                if c == "1" and b[:i] + "0" + b[i + 1 :] not in self.blocks:
                    return False
        return True

    def to_text(self) -> str:
        return "\n".join(self.sorted_blocks()) + "\n"

    def to_bitset_bytes(self) -> bytes:
        """Packed membership table: little-endian bit i = lexicographic block i."""
        out = bytearray((2**self.block_length + 7) // 8)
        for b in self.blocks:
            i = int(b, 2)
            out[i // 8] |= 1 << (i % 8)
        return bytes(out)

    @classmethod
    def from_bitset_bytes(cls, block_length: int, data: bytes, source: str) -> "LanguageTable":
        blocks = set()
        for i in range(2**block_length):
            if data[i // 8] >> (i % 8) & 1:
                blocks.add(format(i, f"0{block_length}b"))
        return cls(block_length, frozenset(blocks), source)


def admissible_blocks(B: BSet, n: int, *, table_cap: int = DEFAULT_TABLE_CAP) -> LanguageTable:
    """Enumerate every admissible block of length n.

    Depth-first over positions, keeping residue profiles for each
    b <= n; a branch dies as soon as some profile saturates, since
    adding 1s never unsaturates it.
    """
    if n < 1:
        raise MalformedSpec("block length must be >= 1")
    moduli = B.enumerate(n)
    counts: dict[int, Counter] = {b: Counter() for b in moduli}
    out: list[str] = []
    prefix: list[str] = []

    def place_one(i: int) -> bool:
        ok = True
        for b, c in counts.items():
            c[i % b] += 1
            if len(c) == b:
                ok = False
        return ok

    def remove_one(i: int):
        for b, c in counts.items():
            r = i % b
            c[r] -= 1
            if not c[r]:
                del c[r]

    def rec(i: int):
        if i == n:
            if len(out) >= table_cap:
                raise Blowup(f"admissible table exceeds cap {table_cap}")
            out.append("".join(prefix))
            return
        prefix.append("0")
        rec(i + 1)
        prefix.pop()
        viable = place_one(i)
        if viable:
            prefix.append("1")
            rec(i + 1)
            prefix.pop()
        remove_one(i)

    rec(0)
    return LanguageTable(n, frozenset(out), ADMISSIBLE)


def eta_factors(
    B: BSet, n: int, window_end: int, *, table_cap: int = DEFAULT_TABLE_CAP
) -> LanguageTable:
    """Length-n factors of the eta window [1, window_end]; a lower
    approximation of the shift-orbit language that only grows with the
    window."""
    if n < 1:
        raise MalformedSpec("block length must be >= 1")
    if window_end < n:
        raise MalformedSpec(f"window [1, {window_end}] shorter than block length {n}")
    text = eta_window(B, 1, window_end).to01()
    blocks = {text[i : i + n] for i in range(len(text) - n + 1)}
    if len(blocks) > table_cap:
        raise Blowup(f"factor table exceeds cap {table_cap}")
    return LanguageTable(n, frozenset(blocks), f"eta[1,{window_end}]")


def hereditary_closure(
    table: LanguageTable, *, table_cap: int = DEFAULT_TABLE_CAP
) -> LanguageTable:
    """Close a table under coordinatewise decrease."""
    closed = set(table.blocks)
    stack = list(table.blocks)
    while stack:
        b = stack.pop()
        for i, c in enumerate(b):
            if c == "1":
                smaller = b[:i] + "0" + b[i + 1 :]
                if smaller not in closed:
                    if len(closed) >= table_cap:
                        raise Blowup(f"hereditary closure exceeds cap {table_cap}")
                    closed.add(smaller)
                    stack.append(smaller)
    return LanguageTable(table.block_length, frozenset(closed), f"hereditary({table.source})")


def language_blocks(
    B: BSet,
    n: int,
    source: str,
    *,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> LanguageTable:
    """Dispatcher: source is 'admissible', 'eta:N', or 'hered:N'
    (hereditary closure of the eta scan over [1, N])."""
    if source == ADMISSIBLE:
        return admissible_blocks(B, n, table_cap=table_cap)
    kind, _, arg = source.partition(":")
    if kind in ("eta", "hered"):
        try:
            window_end = int(arg)
        except ValueError:
            raise MalformedSpec(f"source {source!r} needs an integer window") from None
        scan = eta_factors(B, n, window_end, table_cap=table_cap)
        if kind == "eta":
            return scan
        return hereditary_closure(scan, table_cap=table_cap)
    raise MalformedSpec(f"unknown language source {source!r}")


@dataclass(frozen=True)
class FrequencyReport:
    block: str
    truncation: tuple[int, ...]
    frequency: Fraction
    exact: bool
    period: int | None
    window: int | None


def mirsky_frequency(
    block: str,
    elements,
    *,
    period_cap: int = DEFAULT_PERIOD_CAP,
    sample_window: int = DEFAULT_SAMPLE_WINDOW,
) -> FrequencyReport:
    """Occurrence frequency of a block in the truncated characteristic sequence.

    The sequence for a finite truncation is periodic with period
    lcm(B_K), so counting starts over one period is exact.  If the
    period exceeds the cap the count falls back to a sample window and
    says so.
    """
    if not block or set(block) - {"0", "1"}:
        raise MalformedSpec(f"block must be nonempty 0/1, got {block!r}")
    elems = sorted(set(int(b) for b in elements))
    trunc = explicit_bset(elems) if elems else None
    n = len(block)
    period = math.lcm(*elems) if elems else 1

    def scan(start: int, count: int) -> int:
        end = start + count + n - 2
        text = (
            eta_window(trunc, start, end).to01()
            if trunc is not None
            else _free_text(start, end)
        )
        return sum(1 for i in range(count) if text[i : i + n] == block)

    if period <= period_cap:
        hits = scan(0, period)
        return FrequencyReport(
            block=block,
            truncation=tuple(elems),
            frequency=Fraction(hits, period),
            exact=True,
            period=period,
            window=None,
        )
    hits = scan(1, sample_window)
    return FrequencyReport(
        block=block,
        truncation=tuple(elems),
        frequency=Fraction(hits, sample_window),
        exact=False,
        period=None,
        window=sample_window,
    )


def _free_text(start: int, end: int) -> str:
    # empty truncation: everything nonzero is free
    return "".join("0" if n == 0 else "1" for n in range(start, end + 1))


@dataclass(frozen=True)
class EntropyEntry:
    block_length: int
    block_count: int
    rate: float


@dataclass(frozen=True)
class EntropyReport:
    bset: str
    entries: tuple[EntropyEntry, ...]
    units: str
    density_truncation: tuple[int, ...]
    density_of_ones: Fraction
    prediction: str


def entropy_estimate(
    B: BSet,
    n_max: int,
    *,
    scan_window: int = 4096,
    density_bound: int = 50,
    table_cap: int = DEFAULT_TABLE_CAP,
    period_cap: int = DEFAULT_PERIOD_CAP,
) -> EntropyReport:
    """Block-growth rates log2(count)/n over hereditary closures of eta factors.

    The limit of the rate is the log2-entropy of the hereditary system,
    predicted to equal the density of 1s; the report carries that
    density for the enumerated truncation alongside the series.
    """
    if n_max < 1:
        raise MalformedSpec("n_max must be >= 1")
    entries = []
    for n in range(1, n_max + 1):
        table = hereditary_closure(
            eta_factors(B, n, scan_window, table_cap=table_cap), table_cap=table_cap
        )
        entries.append(EntropyEntry(n, len(table), math.log2(len(table)) / n))
    trunc = B.enumerate(density_bound)
    d = mirsky_frequency("1", trunc, period_cap=period_cap)
    return EntropyReport(
        bset=B.describe(),
        entries=tuple(entries),
        units="log2",
        density_truncation=tuple(trunc),
        density_of_ones=d.frequency,
        prediction=(
            "rates decrease toward the density of 1s "
            f"({d.frequency}) for the truncated system"
        ),
    )


@dataclass(frozen=True)
class MaximalityEntry:
    modulus: int
    residues_hit: int
    residues_hit_double_window: int
    stabilized: bool
    saturated: bool
    flips_tested: int
    flips_all_inadmissible: bool | None


@dataclass(frozen=True)
class MaximalityReport:
    bset: str
    window: int
    entries: tuple[MaximalityEntry, ...]
    note: str


def maximality_audit(B: BSet, N: int, *, modulus_bound: int | None = None) -> MaximalityReport:
    """Audit that 1s cannot be added to an eta window.

    For each enumerated b the support of eta over [-N, N] hits some
    r(b, N) nonzero residue classes mod b.  Once r(b, N) = b - 1, every
    0 -> 1 flip at a position divisible by b adds residue 0 and
    saturates the profile, so the flipped word must fail admissibility
    for {b}; the audit performs each flip and checks exactly that.
    Entries with r(b, N) < r(b, 2N) are flagged as not stabilized
    rather than guessed at.
    """
    if N < 1:
        raise MalformedSpec("window must be >= 1")
    bound = modulus_bound if modulus_bound is not None else N
    wide = eta_window(B, -2 * N, 2 * N)
    narrow = wide.restrict(-N, N)
    entries = []
    for b in B.enumerate(bound):
        prof_n = residue_profile(narrow, b)
        prof_w = residue_profile(wide, b)
        saturated = len(prof_n) == b - 1
        flips_tested = 0
        flips_bad: bool | None = None
        if saturated:
            single = explicit_bset([b])
            flips_bad = True
            for m in range(-N + (N % b), N + 1, b):
                flipped = Word(narrow.offset, narrow.length, narrow.support | {m})
                flips_tested += 1
                if is_admissible(flipped, single):
                    flips_bad = False
        entries.append(
            MaximalityEntry(
                modulus=b,
                residues_hit=len(prof_n),
                residues_hit_double_window=len(prof_w),
                stabilized=len(prof_n) == len(prof_w),
                saturated=saturated,
                flips_tested=flips_tested,
                flips_all_inadmissible=flips_bad,
            )
        )
    return MaximalityReport(
        bset=B.describe(),
        window=N,
        entries=tuple(entries),
        note=(
            "saturated moduli (all nonzero residues hit) certify that no "
            "0 can be flipped to 1 at a multiple of b; unstabilized "
            "entries need a larger window"
        ),
    )
