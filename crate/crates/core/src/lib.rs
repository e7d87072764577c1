//! Exact arithmetic for truncated Newton binomials.
//!
//! A truncated binomial is the expansion of `(a + b)^n` (or `(a + b + c)^n`)
//! with the pure `n`-th powers removed. This crate builds those values in
//! several equivalent forms, measures their divisibility by powers of the
//! prime exponent `n`, decides whether the equations `(a + b)^n = U(a, b)`
//! and `(a + b + c)^n = U(a, b, c)` can hold, and exhaustively scans
//! residue classes to settle divisibility claims modulo `n^k`.

pub mod binomial;
pub mod compatibility;
mod error;
pub mod scan;
pub mod serde_decimal;
pub mod valuation;
pub mod verify;

pub use binomial::{
    binom_coeff, gcd_normalize, truncated2_direct, truncated2_series, truncated3, BinomialPair,
    ExactInt, OddPrime, SeriesForm, TrinomialTriple,
};
pub use compatibility::{
    binomial_equation_verdict, case_a_verdict, case_b_consistency_check, case_b_exponents,
    classify_divisibility_case, necessary_conditions_2, CaseBReport, ConditionReport,
    DivisibilityCase, Evidence, EvidenceValue, ExponentProfile, ParityClass, Tier, TierVerdict,
    Variable, Verdict, VerdictKind,
};
pub use error::{Error, Result};
pub use scan::{
    scan_divisibility, scan_quadratic, u2_mod, QuadraticTable, ScanConstraints, ScanOptions,
    ScanReport, DEFAULT_BUDGET_CELLS,
};
pub use valuation::{
    factored_u2, padic_valuation, quadratic_form_mod, trinomial_rhs_factored, Order, Valuation,
};
