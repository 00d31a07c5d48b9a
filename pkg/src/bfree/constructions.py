"""Constructive certificates for codes with no shared 1-block offset.

Two engines.  The first spreads copies of an admissible word u across
almost all residue classes of a chosen modulus b0 while staying
admissible: copies are placed at multiples of the product P of the
smaller set elements, so every other modulus sees the copies in a
single residue pattern, and the placement count is kept below the
remaining moduli.

The second packs one such spread word per 1-block of a code into a
single finite configuration, solving a simultaneous congruence so the
configuration misses residue zero for every modulus in play.  If the
code's 1-blocks share no offset, the image of that configuration hits
every residue class of b0, so the code cannot map the admissible system
into itself.  Both constructions re-verify their postconditions before
returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bset import BSet
from .codes import Code, block_support, image_support
from .errors import (
    CoprimalityFailure,
    InvariantViolation,
    NotAdmissible,
    PreconditionB0,
    WitnessExists,
)
from .sieve import is_admissible
from .words import Word


@dataclass(frozen=True)
class ShiftedCopiesResult:
    word: Word
    positions: tuple[int, ...]
    b0: int
    copies: int
    modulus_product: int
    element_bound: int
    source: Word


@dataclass(frozen=True)
class CounterexamplePlacement:
    block: str
    congruence_solution: int
    placement_index: int
    start: int
    center_residues: tuple[int, ...]


@dataclass(frozen=True)
class CounterexampleResult:
    configuration: Word
    b0: int
    moduli: tuple[int, ...]
    placements: tuple[CounterexamplePlacement, ...]
    image_residues_mod_b0: tuple[int, ...]
    image_cofinite: bool
    note: str


def _normalize_to_one(u: Word) -> Word:
    return u.translate(1 - u.offset)


def shifted_copies(u: Word, b0: int, B: BSet) -> ShiftedCopiesResult:
    """Spread copies of u over all residue classes mod b0 except -supp(u).

    Procedure: with N = |supp(u)|, pick the smallest element bound L
    with L >= N*(b0 - N) whose product P of elements of B below it
    (b0 excluded) exceeds |u|; of the b0 candidates 0, P, 2P, ...,
    keep the b0 - N whose residue mod b0 avoids -supp(u) and lay a copy
    of u after each.  The result misses residue 0 mod b0, inherits u's
    missed residue for every other element up to L, and is too small to
    saturate anything beyond L.
    """
    u = _normalize_to_one(u)
    n_u = len(u.support)
    if n_u == 0:
        raise NotAdmissible("u must have nonempty support")
    if not B.contains(b0):
        raise PreconditionB0(f"{b0} is not an element of {B.describe()}")
    if b0 <= 2 * u.length:
        raise PreconditionB0(f"need b0 > 2*|u| = {2 * u.length}, got {b0}")
    if not is_admissible(u, B):
        raise NotAdmissible(f"word {u} is not admissible for {B.describe()}")

    L = n_u * (b0 - n_u)
    while True:
        factors = [b for b in B.enumerate(L) if b != b0]
        P = math.prod(factors) if factors else 1
        if P > u.length:
            break
        L = B.first_above(L)
    if math.gcd(P, b0) != 1:
        raise CoprimalityFailure(
            f"product {P} of elements up to {L} shares a factor with b0={b0}"
        )

    banned = {(-s) % b0 for s in u.support}
    positions = [n * P for n in range(b0) if (n * P) % b0 not in banned]
    support = frozenset(m + s for m in positions for s in u.support)
    word = Word(1, max(positions) + u.length, support)

    # machine-check all four postconditions before handing the result out
    for m in positions:
        if word.restrict(m + 1, m + u.length).translate(-m) != u:
            raise InvariantViolation(f"copy at {m} does not reproduce u")
    if {m % b0 for m in positions} != set(range(b0)) - banned:
        raise InvariantViolation("placement residues are not the complement of -supp(u)")
    if {p % b0 for p in support} != set(range(1, b0)):
        raise InvariantViolation("support must hit exactly the nonzero residues mod b0")
    if not is_admissible(word, B):
        raise InvariantViolation("constructed word is not admissible")

    return ShiftedCopiesResult(
        word=word,
        positions=tuple(positions),
        b0=b0,
        copies=b0 - n_u,
        modulus_product=P,
        element_bound=L,
        source=u,
    )


def _crt(residues: list[int], moduli: list[int]) -> int:
    x, modulus = 0, 1
    for r, m in zip(residues, moduli):
        inv = pow(modulus % m, -1, m)
        x += modulus * ((r - x) * inv % m)
        modulus *= m
    return x % modulus


def crt_counterexample(c: Code, B: BSet) -> CounterexampleResult:
    """Exhibit an admissible configuration whose image saturates some modulus.

    Preconditions: the 1-blocks of c that are admissible for B must
    share no offset (otherwise WitnessExists: the code is dominated by a
    shift and no counterexample can exist).

    With b0 the first element above twice the code width, each
    admissible 1-block u contributes its spread word w_u; a simultaneous
    congruence places every w_u so the whole configuration misses
    residue 0 for each modulus up to the point where the configuration
    is too small to saturate anything.  Copy centers of u then occupy
    all residues mod b0 except -supp(u), and since the supports share no
    offset, the image hits every residue class mod b0.
    """
    width = c.width
    radius = c.radius
    zero = "0" * width

    if c.in_domain(zero) and zero in c.ones:
        # the empty configuration already works: its image is all of Z
        empty = Word(1, width, frozenset())
        return CounterexampleResult(
            configuration=empty,
            b0=B.first_above(2 * width),
            moduli=(),
            placements=(),
            image_residues_mod_b0=tuple(range(B.first_above(2 * width))),
            image_cofinite=True,
            note=(
                "the all-zero block maps to 1, so the image of the empty "
                "configuration is the all-ones configuration"
            ),
        )

    admissible_ones = sorted(
        u for u in c.ones if is_admissible(Word.from_bits(1, u), B)
    )
    if not admissible_ones:
        raise WitnessExists(
            "no admissible block maps to 1; the code is the zero map on the "
            "subshift, which every shift dominates"
        )
    shared = frozenset(range(-radius, radius + 1))
    for u in admissible_ones:
        shared &= block_support(u, radius)
    if shared:
        raise WitnessExists(
            f"the 1-blocks share the offsets {sorted(shared)}; "
            "the code is dominated by those shifts"
        )

    b0 = B.first_above(2 * width)
    threshold = max(len(admissible_ones) * (b0 - width) * width, b0)
    B.first_above(threshold)  # raises EnumerationTooShallow when B is too small
    moduli = [b0] + [b for b in B.enumerate(threshold) if b != b0]
    for i, m in enumerate(moduli):
        for m2 in moduli[i + 1 :]:
            if math.gcd(m, m2) != 1:
                raise CoprimalityFailure(f"moduli {m} and {m2} share a factor")
    big_product = math.prod(moduli)

    placements = []
    support: set[int] = set()
    for index, u in enumerate(admissible_ones):
        spread = shifted_copies(Word.from_bits(1, u), b0, B)
        missed = []
        for m in moduli:
            hit = {p % m for p in spread.word.support}
            missed.append(min(r for r in range(m) if r not in hit))
        s_u = _crt([(-r) % m for r, m in zip(missed, moduli)], moduli)
        if s_u % b0 != 0:
            raise InvariantViolation("congruence solution must vanish mod b0")
        # stride 3: each placement ends before (3i + 2) * product, so
        # consecutive placements stay disjoint with gaps above b0
        start = 3 * index * big_product + s_u + 1
        support.update(start - 1 + p for p in spread.word.support)
        centers = [start - 1 + m + radius + 1 for m in spread.positions]
        placements.append(
            CounterexamplePlacement(
                block=u,
                congruence_solution=s_u,
                placement_index=3 * index,
                start=start,
                center_residues=tuple(sorted({ctr % b0 for ctr in centers})),
            )
        )

    configuration = Word(1, max(support), frozenset(support))

    if not is_admissible(configuration, B):
        raise InvariantViolation("packed configuration is not admissible")
    image = image_support(c, configuration.support)
    residues = {n % b0 for n in image}
    if residues != set(range(b0)):
        raise InvariantViolation(
            f"image covers {len(residues)} of {b0} residues; construction failed"
        )
    return CounterexampleResult(
        configuration=configuration,
        b0=b0,
        moduli=tuple(moduli),
        placements=tuple(placements),
        image_residues_mod_b0=tuple(sorted(residues)),
        image_cofinite=False,
        note=(
            "the configuration is admissible but its image hits every "
            f"residue class mod {b0}, so the code does not preserve the "
            "admissible system"
        ),
    )
