"""Command-line surface.

Every command prints a deterministic report: JSON with sorted keys,
rationals as p/q, floats with 12 significant digits.  Exit codes:
0 success, 2 precondition violation, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import audit as audit_mod
from . import bset as bset_mod
from . import codes as codes_mod
from . import constructions, sieve
from .errors import BFreeError, CapExceeded, MalformedSpec, PreconditionError
from .reporting import dumps, frac_str, real_str
from .words import parse_word


def _load_bset(value: str) -> bset_mod.BSet:
    if ":" in value or "=" in value:
        return bset_mod.parse_bset(value)
    if os.path.exists(value):
        with open(value, encoding="ascii") as fh:
            return bset_mod.parse_bset(fh.read())
    raise MalformedSpec(f"--bset {value!r} is neither a spec nor a file")


def _load_code(value: str) -> codes_mod.Code:
    if value.startswith("builtin:"):
        return codes_mod.builtin_code(value[len("builtin:") :])
    if os.path.exists(value):
        with open(value, encoding="ascii") as fh:
            return codes_mod.code_from_text(fh.read())
    raise MalformedSpec(f"--code {value!r} is neither builtin:<spec> nor a file")


def _emit(args, report, text_fn):
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(text_fn(report))


def cmd_classify(args) -> int:
    B = _load_bset(args.bset)
    report = bset_mod.classify(B, args.bound)
    sys.stdout.write(dumps(report))
    return 0


def cmd_density(args) -> int:
    B = _load_bset(args.bset)
    K = args.k if args.k is not None else len(B.first_n(args.max_elements))
    report = bset_mod.density_bounds(
        B, K, args.method, period_cap=args.period_cap, subset_cap=args.subset_cap
    )
    if args.format == "json":
        sys.stdout.write(dumps(report))
    elif report.complete:
        sys.stdout.write(frac_str(report.exact_density) + "\n")
    else:
        sys.stdout.write(
            f"{frac_str(report.lower_bound)} <= density <= "
            f"{frac_str(report.upper_bound)}\n"
        )
    return 0


def cmd_taut(args) -> int:
    B = _load_bset(args.bset)
    elems = B.enumerate(args.bound)
    report = bset_mod.tautness_audit(
        elems, args.method, period_cap=args.period_cap, subset_cap=args.subset_cap
    )

    def text(r) -> str:
        lines = [
            f"element {e.element}: {frac_str(r.base_density)} < "
            f"{frac_str(e.density_without)} "
            f"{'strict' if e.strict else 'NOT strict'}"
            for e in r.entries
        ]
        lines.append(f"all_strict={str(r.all_strict).lower()} ({r.note})")
        return "\n".join(lines) + "\n"

    _emit(args, report, text)
    return 0


def cmd_eta(args) -> int:
    B = _load_bset(args.bset)
    a, _, z = args.range.partition(":")
    try:
        lo, hi = int(a), int(z)
    except ValueError:
        raise MalformedSpec(f"--range must be a:z, got {args.range!r}") from None
    sys.stdout.write(str(sieve.eta_window(B, lo, hi)) + "\n")
    return 0


def cmd_lang(args) -> int:
    B = _load_bset(args.bset)
    table = sieve.language_blocks(B, args.n, args.source, table_cap=args.table_cap)
    if args.bitset_out:
        with open(args.bitset_out, "wb") as fh:
            fh.write(table.to_bitset_bytes())
    if args.format == "json":
        sys.stdout.write(
            dumps(
                {
                    "block_length": table.block_length,
                    "source": table.source,
                    "count": len(table),
                    "blocks": table.sorted_blocks(),
                }
            )
        )
    else:
        sys.stdout.write(table.to_text())
    return 0


def cmd_freq(args) -> int:
    B = _load_bset(args.bset)
    elems = B.enumerate(args.bound)
    report = sieve.mirsky_frequency(args.block, elems, period_cap=args.period_cap)
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        suffix = "" if report.exact else f" (sampled over window {report.window})"
        sys.stdout.write(frac_str(report.frequency) + suffix + "\n")
    return 0


def cmd_entropy(args) -> int:
    B = _load_bset(args.bset)
    report = sieve.entropy_estimate(
        B,
        args.nmax,
        scan_window=args.scan_window,
        table_cap=args.table_cap,
        period_cap=args.period_cap,
    )

    def text(r) -> str:
        lines = [
            f"n={e.block_length:3d} blocks={e.block_count:8d} rate={real_str(e.rate)}"
            for e in r.entries
        ]
        lines.append(f"density_of_ones={frac_str(r.density_of_ones)} ({r.units})")
        return "\n".join(lines) + "\n"

    _emit(args, report, text)
    return 0


def cmd_maximality(args) -> int:
    B = _load_bset(args.bset)
    report = sieve.maximality_audit(B, args.N, modulus_bound=args.modulus_bound)
    sys.stdout.write(dumps(report))
    return 0


def cmd_ca(args) -> int:
    code = _load_code(args.code)
    if args.ca_command == "apply":
        w = parse_word(args.word)
        if args.config:
            out = codes_mod.apply_to_finite_config(code, w)
        else:
            out = codes_mod.apply_code(code, w)
        sys.stdout.write(str(out) + "\n")
        return 0
    if args.ca_command == "witness":
        report = codes_mod.monotone_witness(code)
        if args.format == "json":
            sys.stdout.write(dumps(report))
        else:
            witnesses = "{" + ",".join(str(t) for t in sorted(report.witnesses)) + "}"
            canonical = "none" if report.canonical is None else str(report.canonical)
            sys.stdout.write(f"{witnesses} canonical {canonical}\n")
        return 0
    B = _load_bset(args.bset)
    if args.ca_command == "consistency":
        lang_out = sieve.admissible_blocks(B, args.n, table_cap=args.table_cap)
        lang_in = sieve.admissible_blocks(
            B, args.n + 2 * code.radius, table_cap=args.table_cap
        )
        violations = codes_mod.consistency_check(code, lang_in, lang_out)
        sys.stdout.write(
            dumps({"violations": [list(v) for v in violations], "count": len(violations)})
        )
        return 0
    if args.ca_command == "construct-wu":
        result = constructions.shifted_copies(parse_word(args.u), args.b0, B)
        sys.stdout.write(dumps(result))
        return 0
    if args.ca_command == "counterexample":
        result = constructions.crt_counterexample(code, B)
        sys.stdout.write(dumps(result))
        return 0
    if args.ca_command == "audit":
        report = audit_mod.goe_report(code, B, args.n, args.N, table_cap=args.table_cap)
        if args.format == "csv":
            sys.stdout.write(audit_mod.series_csv(report))
        else:
            sys.stdout.write(dumps(report))
        return 0
    raise MalformedSpec(f"unknown ca subcommand {args.ca_command!r}")


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = 0

    def check(name: str, ok: bool):
        nonlocal failures
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
        if not ok:
            failures += 1

    # density methods agree on random truncations
    agree = True
    for _ in range(20):
        elems = sorted(rng.sample(range(2, 40), rng.randint(1, 5)))
        a = bset_mod.density_exact(elems, bset_mod.INCLUSION_EXCLUSION)
        b = bset_mod.density_exact(elems, bset_mod.PERIOD_SIEVE)
        agree = agree and a == b
    check("density methods agree on 20 random truncations", agree)

    # admissibility is translation invariant
    invariant = True
    for _ in range(50):
        bits = "".join(rng.choice("01") for _ in range(rng.randint(1, 12)))
        B = bset_mod.explicit_bset(sorted(rng.sample(range(2, 20), 3)))
        w = parse_word(bits)
        invariant = invariant and sieve.translation_invariance_check(
            w, rng.randint(-50, 50), B
        )
    check("admissibility is translation invariant on 50 random words", invariant)

    # spread-word postconditions are machine-verified on construction
    B = bset_mod.prime_powers_bset(2)
    ok = True
    for _ in range(10):
        length = rng.randint(1, 6)
        bits = [rng.choice("01") for _ in range(length)]
        bits[rng.randrange(length)] = "1"
        u = parse_word("".join(bits))
        if not sieve.is_admissible(u, B):
            continue
        b0 = B.first_above(2 * length)
        try:
            constructions.shifted_copies(u, b0, B)
        except BFreeError:
            ok = False
    check("spread-word construction verifies on 10 random words", ok)

    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfree",
        description="Divisor-free sequences, block languages and code audits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--format", choices=["json", "text", "csv"], default=fmt_default)
        p.add_argument("--period-cap", type=int, default=bset_mod.DEFAULT_PERIOD_CAP)
        p.add_argument("--subset-cap", type=int, default=bset_mod.DEFAULT_SUBSET_CAP)
        p.add_argument("--table-cap", type=int, default=sieve.DEFAULT_TABLE_CAP)

    p = sub.add_parser("classify", help="primitivity, coprimality, partial sums")
    p.add_argument("--bset", required=True)
    p.add_argument("--bound", type=int, default=1000)
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("density", help="exact density bounds for the free integers")
    p.add_argument("--bset", required=True)
    p.add_argument("--k", type=int, default=None, help="truncation size")
    p.add_argument("--max-elements", type=int, default=16)
    p.add_argument(
        "--method",
        choices=[bset_mod.INCLUSION_EXCLUSION, bset_mod.PERIOD_SIEVE],
        default=bset_mod.INCLUSION_EXCLUSION,
    )
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("taut", help="strict density increase when removing elements")
    p.add_argument("--bset", required=True)
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument(
        "--method",
        choices=[bset_mod.INCLUSION_EXCLUSION, bset_mod.PERIOD_SIEVE],
        default=bset_mod.INCLUSION_EXCLUSION,
    )
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_taut)

    p = sub.add_parser("eta", help="window of the free characteristic sequence")
    p.add_argument("--bset", required=True)
    p.add_argument("--range", required=True, help="a:z inclusive")
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_eta)

    p = sub.add_parser("lang", help="block language tables")
    p.add_argument("--bset", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--source", default="admissible", help="admissible | eta:N | hered:N"
    )
    p.add_argument("--bitset-out", default=None, help="also write a packed bitset")
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_lang)

    p = sub.add_parser("freq", help="block frequency in the truncated sequence")
    p.add_argument("--bset", required=True)
    p.add_argument("--block", required=True)
    p.add_argument("--bound", type=int, default=50, help="truncation bound")
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_freq)

    p = sub.add_parser("entropy", help="block-growth rates vs density of ones")
    p.add_argument("--bset", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--scan-window", type=int, default=4096)
    common(p, fmt_default="text")
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("maximality", help="flip audit of the characteristic sequence")
    p.add_argument("--bset", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--modulus-bound", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_maximality)

    p = sub.add_parser("ca", help="sliding block code operations")
    p.add_argument(
        "ca_command",
        choices=[
            "apply",
            "witness",
            "consistency",
            "construct-wu",
            "counterexample",
            "audit",
        ],
    )
    p.add_argument("--code", required=True, help="code file or builtin:<spec>")
    p.add_argument("--bset", default=None)
    p.add_argument("--word", default=None)
    p.add_argument("--config", action="store_true", help="treat word as zero-extended")
    p.add_argument("--u", default=None, help="word to spread (construct-wu)")
    p.add_argument("--b0", type=int, default=None)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--N", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_ca)

    p = sub.add_parser("selftest", help="randomized property smoke tests")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PreconditionError, BFreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
