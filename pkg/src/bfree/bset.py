"""Divisor sets B and the arithmetic of their multiple-free integers.

A divisor set is either an explicit finite list or the k-th powers of
primes (optionally capped).  Everything downstream — windows of the
free characteristic sequence, admissibility, densities — only ever asks
for the elements up to some bound, and those are produced exactly.

Densities of the sets {n : no b in B_K divides n} are exact rationals,
computed two independent ways (inclusion–exclusion over subset lcms and
a residue count over one full period) that must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    ContainsOne,
    EnumerationTooShallow,
    MalformedSpec,
    PeriodTooLarge,
    SubsetBlowup,
    TailUnavailable,
)

EXPLICIT = "explicit"
PRIME_POWERS = "prime_powers"

INCLUSION_EXCLUSION = "inclusion_exclusion"
PERIOD_SIEVE = "period_sieve"

DEFAULT_PERIOD_CAP = 10**9
DEFAULT_SUBSET_CAP = 24
DEFAULT_ENUMERATION_BOUND = 10**7

_SEGMENT = 1 << 22


def _primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            step = bytes(len(range(p * p, n + 1, p)))
            sieve[p * p :: p] = step
    return [i for i, alive in enumerate(sieve) if alive]


def _int_root(n: int, k: int) -> int:
    """Largest r with r**k <= n."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0, k >= 1")
    if k == 1 or n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class BSet:
    """An explicit divisor list or the set {p**exponent : p prime <= prime_bound}.

    Membership and enumeration are exact up to enumeration_bound, which
    is a desk-scale guard, not an approximation: queries beyond it raise
    EnumerationTooShallow rather than silently truncating.
    """

    kind: str
    elements: tuple[int, ...] = ()
    exponent: int = 0
    prime_bound: int | None = None
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND

    def __post_init__(self):
        if self.kind == EXPLICIT:
            elems = tuple(sorted(set(int(b) for b in self.elements)))
            if any(b == 1 for b in elems):
                raise ContainsOne("1 divides everything; no free integers would remain")
            if any(b < 2 for b in elems):
                raise MalformedSpec(f"elements must be >= 2, got {elems}")
            object.__setattr__(self, "elements", elems)
        elif self.kind == PRIME_POWERS:
            if self.exponent < 1:
                raise MalformedSpec("prime power exponent must be >= 1")
            if self.prime_bound is not None and self.prime_bound < 2:
                raise MalformedSpec("prime bound must be >= 2")
        else:
            raise MalformedSpec(f"unknown kind {self.kind!r}")
        if self.enumeration_bound < 2:
            raise MalformedSpec("enumeration bound must be >= 2")

    @property
    def is_infinite(self) -> bool:
        return self.kind == PRIME_POWERS and self.prime_bound is None

    def describe(self) -> str:
        if self.kind == EXPLICIT:
            return "explicit:" + ",".join(str(b) for b in self.elements)
        s = f"prime_powers:k={self.exponent}"
        if self.prime_bound is not None:
            s += f",prime_bound={self.prime_bound}"
        return s

    def _check_bound(self, bound: int):
        if bound > self.enumeration_bound:
            raise EnumerationTooShallow(
                f"bound {bound} exceeds declared enumeration bound "
                f"{self.enumeration_bound} for {self.describe()}"
            )

    def enumerate(self, bound: int) -> list[int]:
        """Exactly the elements <= bound, ascending."""
        self._check_bound(bound)
        if self.kind == EXPLICIT:
            return [b for b in self.elements if b <= bound]
        top = _int_root(bound, self.exponent)
        if self.prime_bound is not None:
            top = min(top, self.prime_bound)
        return [p**self.exponent for p in _primes_up_to(top)]

    def contains(self, n: int) -> bool:
        if n < 2:
            return False
        self._check_bound(n)
        if self.kind == EXPLICIT:
            return n in self.elements
        p = _int_root(n, self.exponent)
        if p**self.exponent != n or not _is_prime(p):
            return False
        return self.prime_bound is None or p <= self.prime_bound

    def first_above(self, threshold: int) -> int:
        """Smallest element strictly above threshold."""
        if self.kind == EXPLICIT:
            for b in self.elements:
                if b > threshold:
                    self._check_bound(b)
                    return b
            raise EnumerationTooShallow(
                f"{self.describe()} has no element above {threshold}"
            )
        p = _int_root(max(threshold, 1), self.exponent) + 1
        while True:
            if self.prime_bound is not None and p > self.prime_bound:
                raise EnumerationTooShallow(
                    f"{self.describe()} has no element above {threshold}"
                )
            if p**self.exponent > self.enumeration_bound:
                raise EnumerationTooShallow(
                    f"element above {threshold} would exceed enumeration bound "
                    f"{self.enumeration_bound}"
                )
            if _is_prime(p) and p**self.exponent > threshold:
                return p**self.exponent
            p += 1

    def first_n(self, count: int) -> list[int]:
        """The first count elements; shorter if the set runs out within bounds."""
        if count <= 0:
            return []
        if self.kind == EXPLICIT:
            return list(self.elements[:count])
        out: list[int] = []
        p = 1
        while len(out) < count:
            p += 1
            if self.prime_bound is not None and p > self.prime_bound:
                break
            if p**self.exponent > self.enumeration_bound:
                break
            if _is_prime(p):
                out.append(p**self.exponent)
        return out

    def is_exhausted_by(self, elements: Sequence[int]) -> bool:
        """True when the given prefix is provably the whole set."""
        if self.kind == EXPLICIT:
            return len(elements) >= len(self.elements)
        if self.prime_bound is None:
            return False
        got = len(elements)
        return got >= len(_primes_up_to(self.prime_bound))


def explicit_bset(elements: Iterable[int], **kw) -> BSet:
    return BSet(EXPLICIT, elements=tuple(elements), **kw)


def prime_powers_bset(exponent: int, prime_bound: int | None = None, **kw) -> BSet:
    return BSet(PRIME_POWERS, exponent=exponent, prime_bound=prime_bound, **kw)


def parse_bset(spec: str) -> BSet:
    """Parse a divisor-set spec.

    Two equivalent forms are accepted: the compact one-liner
    ``explicit:2,3`` / ``prime_powers:k=2,prime_bound=50`` and the
    line-oriented key-value file form (``kind=explicit`` /
    ``elements=2,3`` ...).
    """
    text = spec.strip()
    if not text:
        raise MalformedSpec("empty divisor-set spec")
    if "\n" in text or text.startswith("kind="):
        kv: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise MalformedSpec(f"expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
        kind = kv.pop("kind", None)
        if kind is None:
            raise MalformedSpec("spec file is missing kind=")
        return _bset_from_fields(kind, kv)
    kind, sep, rest = text.partition(":")
    if not sep:
        raise MalformedSpec(f"expected kind:params, got {text!r}")
    kind = kind.strip()
    if kind == EXPLICIT:
        return _bset_from_fields(kind, {"elements": rest})
    fields: dict[str, str] = {}
    for item in rest.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise MalformedSpec(f"expected key=value in {item!r}")
        key, _, value = item.partition("=")
        fields[key.strip()] = value.strip()
    return _bset_from_fields(kind, fields)


def _bset_from_fields(kind: str, fields: dict[str, str]) -> BSet:
    def as_int(key: str, value: str) -> int:
        try:
            return int(value)
        except ValueError:
            raise MalformedSpec(f"{key} must be an integer, got {value!r}") from None

    extra = {}
    if "enumeration_bound" in fields:
        extra["enumeration_bound"] = as_int(
            "enumeration_bound", fields.pop("enumeration_bound")
        )
    if kind == EXPLICIT:
        raw = fields.pop("elements", "")
        if fields:
            raise MalformedSpec(f"unexpected keys {sorted(fields)} for explicit set")
        try:
            elements = tuple(int(tok) for tok in raw.split(",") if tok.strip())
        except ValueError:
            raise MalformedSpec(f"bad element list {raw!r}") from None
        if not elements:
            raise MalformedSpec("explicit set needs at least one element")
        return explicit_bset(elements, **extra)
    if kind == PRIME_POWERS:
        if "k" not in fields:
            raise MalformedSpec("prime_powers needs k=<exponent>")
        exponent = as_int("k", fields.pop("k"))
        prime_bound = None
        if "prime_bound" in fields:
            prime_bound = as_int("prime_bound", fields.pop("prime_bound"))
        if fields:
            raise MalformedSpec(f"unexpected keys {sorted(fields)} for prime_powers")
        return prime_powers_bset(exponent, prime_bound, **extra)
    raise MalformedSpec(f"unknown kind {kind!r}")


def primitivize(B: BSet, bound: int | None = None) -> BSet:
    """Drop elements divisible by another element.

    The surviving set generates the same multiples.  Same-exponent prime
    powers never divide one another, so those sets pass through
    unchanged; for explicit sets the complete list is filtered.
    """
    if B.kind == PRIME_POWERS:
        return B
    elems = B.elements if bound is None else tuple(b for b in B.elements if b <= bound)
    kept = [
        b
        for b in elems
        if not any(d != b and b % d == 0 for d in elems)
    ]
    return explicit_bset(kept, enumeration_bound=B.enumeration_bound)


@dataclass(frozen=True)
class ClassificationReport:
    bset: str
    bound: int
    enumerated: tuple[int, ...]
    primitive: bool
    pairwise_coprime: bool
    thin_partial_sum: Fraction
    contains_one: bool
    erdos_candidate: bool
    notes: str


def classify(B: BSet, bound: int, assume_thin: bool | None = None) -> ClassificationReport:
    """Classify the enumerated part of B up to bound.

    All verdicts are exact for the enumerated elements; erdos_candidate
    additionally needs the set to be of infinite kind and the tail to be
    asserted thin (assume_thin=None auto-asserts it for prime powers
    with exponent >= 2, where sum 1/p**k converges).
    """
    if bound < 2:
        raise MalformedSpec("classification bound must be >= 2")
    elems = B.enumerate(bound)
    primitive = not any(
        a != b and b % a == 0 for a in elems for b in elems
    )
    coprime = all(
        math.gcd(a, b) == 1
        for i, a in enumerate(elems)
        for b in elems[i + 1 :]
    )
    thin_sum = sum((Fraction(1, b) for b in elems), Fraction(0))
    if assume_thin is None:
        assume_thin = B.kind == PRIME_POWERS and B.exponent >= 2
    erdos = primitive and coprime and B.is_infinite and assume_thin
    notes = (
        "verdicts cover elements <= bound only; "
        "erdos_candidate additionally requires an asserted thin tail "
        "and is never claimed for finite kinds"
    )
    return ClassificationReport(
        bset=B.describe(),
        bound=bound,
        enumerated=tuple(elems),
        primitive=primitive,
        pairwise_coprime=coprime,
        thin_partial_sum=thin_sum,
        contains_one=False,  # construction forbids 1
        erdos_candidate=erdos,
        notes=notes,
    )


def _validate_finite(elements: Iterable[int]) -> list[int]:
    out = sorted(set(int(b) for b in elements))
    if any(b < 2 for b in out):
        raise MalformedSpec(f"elements must be >= 2, got {out}")
    return out


def _density_inclusion_exclusion(elements: Sequence[int], subset_cap: int) -> Fraction:
    if len(elements) > subset_cap:
        raise SubsetBlowup(
            f"{len(elements)} elements exceed the inclusion-exclusion cap {subset_cap}"
        )
    # sum over subsets S of (-1)^|S| / lcm(S), grouped by the lcm value
    terms: dict[int, int] = {1: 1}
    for b in elements:
        update: dict[int, int] = {}
        for l, coeff in terms.items():
            nl = math.lcm(l, b)
            update[nl] = update.get(nl, 0) - coeff
        for l, coeff in update.items():
            terms[l] = terms.get(l, 0) + coeff
    return sum((Fraction(c, l) for l, c in terms.items() if c), Fraction(0))


def _count_free_in_period(elements: Sequence[int], period: int) -> int:
    free = 0
    for start in range(0, period, _SEGMENT):
        n = min(_SEGMENT, period - start)
        seg = bytearray(b"\x01") * n
        for b in elements:
            first = (-start) % b
            if first < n:
                hits = len(range(first, n, b))
                seg[first::b] = bytes(hits)
        free += sum(seg)
    return free


def _density_period_sieve(elements: Sequence[int], period_cap: int) -> Fraction:
    period = math.lcm(*elements) if elements else 1
    if period > period_cap:
        raise PeriodTooLarge(f"period {period} exceeds cap {period_cap}")
    return Fraction(_count_free_in_period(elements, period), period)


def density_exact(
    elements: Iterable[int],
    method: str = INCLUSION_EXCLUSION,
    *,
    period_cap: int = DEFAULT_PERIOD_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> Fraction:
    """Exact density of {n : no element of the finite truncation divides n}."""
    elems = _validate_finite(elements)
    if method == INCLUSION_EXCLUSION:
        return _density_inclusion_exclusion(elems, subset_cap)
    if method == PERIOD_SIEVE:
        return _density_period_sieve(elems, period_cap)
    raise MalformedSpec(f"unknown density method {method!r}")


@dataclass(frozen=True)
class DensityReport:
    bset: str
    truncation: tuple[int, ...]
    exact_density: Fraction
    lower_bound: Fraction
    upper_bound: Fraction
    tail_bound: Fraction
    method: str
    complete: bool


def _tail_bound(B: BSet, truncation: Sequence[int]) -> tuple[Fraction, bool]:
    """Over-estimate of sum(1/b) over the elements beyond the truncation.

    For prime powers p**k with k >= 2 and largest enumerated prime m,
    the tail over primes p > m is below sum_{n>m} n**-k, which the
    integral comparison bounds by m**(1-k) / (k-1); with an empty
    truncation the bound from m = 1 is 1/(k-1).
    """
    if B.is_exhausted_by(truncation):
        return Fraction(0), True
    if B.kind == EXPLICIT:
        rest = B.elements[len(truncation) :]
        return sum((Fraction(1, b) for b in rest), Fraction(0)), False
    k = B.exponent
    if k < 2:
        raise TailUnavailable(
            "reciprocal prime sum diverges; no thin tail bound for exponent 1"
        )
    m = _int_root(truncation[-1], k) if truncation else 1
    return Fraction(1, (k - 1) * m ** (k - 1)), False


def density_bounds(
    B: BSet,
    K: int,
    method: str = INCLUSION_EXCLUSION,
    *,
    period_cap: int = DEFAULT_PERIOD_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> DensityReport:
    """Two-sided bounds on the free density of B from its first K elements.

    Dropping elements only enlarges the free set, so the truncated
    density is an upper bound; each discarded b removes at most density
    1/b, so subtracting the tail sum gives the lower bound.
    """
    truncation = B.first_n(K)
    exact = density_exact(
        truncation, method, period_cap=period_cap, subset_cap=subset_cap
    )
    tail, complete = _tail_bound(B, truncation)
    lower = max(Fraction(0), exact - tail)
    return DensityReport(
        bset=B.describe(),
        truncation=tuple(truncation),
        exact_density=exact,
        lower_bound=lower,
        upper_bound=exact,
        tail_bound=tail,
        method=method,
        complete=complete,
    )


@dataclass(frozen=True)
class TautnessEntry:
    element: int
    density_without: Fraction
    strict: bool


@dataclass(frozen=True)
class TautnessReport:
    truncation: tuple[int, ...]
    base_density: Fraction
    entries: tuple[TautnessEntry, ...]
    all_strict: bool
    note: str


def tautness_audit(
    elements: Iterable[int],
    method: str = INCLUSION_EXCLUSION,
    *,
    period_cap: int = DEFAULT_PERIOD_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> TautnessReport:
    """Check, in exact rationals, that removing any element strictly raises the density.

    A redundant (divisible) element shows up as a non-strict entry, so
    the audit doubles as a primitivity witness.  The verdict certifies
    the property for this finite truncation only.
    """
    elems = _validate_finite(elements)
    base = density_exact(elems, method, period_cap=period_cap, subset_cap=subset_cap)
    entries = []
    for b in elems:
        rest = [x for x in elems if x != b]
        without = density_exact(
            rest, method, period_cap=period_cap, subset_cap=subset_cap
        )
        entries.append(TautnessEntry(b, without, without > base))
    return TautnessReport(
        truncation=tuple(elems),
        base_density=base,
        entries=tuple(entries),
        all_strict=all(e.strict for e in entries),
        note="certifies tautness for the listed truncation only",
    )
