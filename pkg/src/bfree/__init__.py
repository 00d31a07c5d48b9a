"""Divisor-free sequences, admissible block languages, sliding block
codes and finite-scale audits of their structure."""

from .bset import (
    BSet,
    ClassificationReport,
    DensityReport,
    INCLUSION_EXCLUSION,
    PERIOD_SIEVE,
    TautnessReport,
    classify,
    density_bounds,
    density_exact,
    explicit_bset,
    parse_bset,
    prime_powers_bset,
    primitivize,
    tautness_audit,
)
from .codes import (
    Code,
    WitnessReport,
    all_zero_code,
    and_mask_code,
    apply_code,
    apply_to_finite_config,
    builtin_code,
    code_from_text,
    code_to_text,
    compose,
    consistency_check,
    identity_code,
    image_block,
    image_support,
    is_monotone,
    make_code,
    monotone_witness,
    restrict_code,
    shift_code,
)
from .constructions import (
    CounterexampleResult,
    ShiftedCopiesResult,
    crt_counterexample,
    shifted_copies,
)
from .audit import (
    AuditReport,
    bounded_to_one_evidence,
    goe_report,
    mentzen_filter,
    mentzen_normalize,
    pre_injectivity_audit,
    preimage_search,
    surjectivity_defects,
)
from .sieve import (
    LanguageTable,
    admissible_blocks,
    entropy_estimate,
    eta_factors,
    eta_window,
    hereditary_closure,
    is_admissible,
    language_blocks,
    maximality_audit,
    mirsky_frequency,
    residue_profile,
    translation_invariance_check,
)
from .words import Word, parse_word

__version__ = "0.1.0"
