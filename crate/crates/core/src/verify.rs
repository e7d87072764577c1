//! Reproducible checks of every divisibility and compatibility claim.
//!
//! Each [`ClaimId`] is an independent check that returns a [`ClaimOutcome`].
//! Random samples come from a seeded ChaCha generator, so a run is fully
//! determined by its [`SuiteConfig`].

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binomial::{
    truncated2_direct, truncated2_series, truncated3, BinomialPair, OddPrime, SeriesForm,
    TrinomialTriple,
};
use crate::compatibility::{case_a_verdict, case_b_exponents, Tier, VerdictKind};
use crate::scan::{scan_divisibility, scan_quadratic, ScanConstraints, ScanOptions};
use crate::valuation::{factored_u2, padic_valuation, quadratic_form_mod, trinomial_rhs_factored};

pub const IDENTITY_EXPONENTS: [u32; 5] = [3, 5, 7, 11, 13];
pub const MAX_ARG: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimId {
    FormEquivalence,
    ParityAndDivisibility,
    ResidualIdentity,
    FactoredForms,
    ElevenExpansion,
    ElevenScan,
    QuadraticTables,
    CaseARule,
    CaseBAlgebra,
    LiftLaw,
    ScanDeterminism,
}

impl ClaimId {
    pub const ALL: [ClaimId; 11] = [
        ClaimId::FormEquivalence,
        ClaimId::ParityAndDivisibility,
        ClaimId::ResidualIdentity,
        ClaimId::FactoredForms,
        ClaimId::ElevenExpansion,
        ClaimId::ElevenScan,
        ClaimId::QuadraticTables,
        ClaimId::CaseARule,
        ClaimId::CaseBAlgebra,
        ClaimId::LiftLaw,
        ClaimId::ScanDeterminism,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ClaimId::FormEquivalence => "forms",
            ClaimId::ParityAndDivisibility => "parity",
            ClaimId::ResidualIdentity => "residual",
            ClaimId::FactoredForms => "factored",
            ClaimId::ElevenExpansion => "expansion-11",
            ClaimId::ElevenScan => "scan-11",
            ClaimId::QuadraticTables => "quadratic",
            ClaimId::CaseARule => "case-a",
            ClaimId::CaseBAlgebra => "case-b",
            ClaimId::LiftLaw => "lift",
            ClaimId::ScanDeterminism => "determinism",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ClaimId::FormEquivalence => "three series forms equal the direct form",
            ClaimId::ParityAndDivisibility => "U(a,b) is even and divisible by n",
            ClaimId::ResidualIdentity => "(a+b)^n - U(a,b) = a^n + b^n",
            ClaimId::FactoredForms => "factored forms for n = 3, 5, 7",
            ClaimId::ElevenExpansion => "printed n = 11 expansion against the direct form",
            ClaimId::ElevenScan => "no case-A pair has 11^2 | U(a,b)",
            ClaimId::QuadraticTables => "zeros of a^2 + ab + b^2 mod 5 and mod 7",
            ClaimId::CaseARule => "case-A incompatibility for n = 3, 5, 7",
            ClaimId::CaseBAlgebra => "case-B exponent relations",
            ClaimId::LiftLaw => "n | a+b and n prime to ab give n^2 | U(a,b)",
            ClaimId::ScanDeterminism => "scan reports independent of worker count",
        }
    }

    pub fn from_key(key: &str) -> Option<ClaimId> {
        ClaimId::ALL.into_iter().find(|c| c.key() == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Pairs for the identity checks, per exponent.
    pub pair_samples: usize,
    pub triple_samples: usize,
    pub expansion_samples: usize,
    pub audit_samples: usize,
    pub lift_samples: usize,
}

impl SuiteConfig {
    pub fn full(seed: u64) -> Self {
        SuiteConfig {
            seed,
            pair_samples: 10_000,
            triple_samples: 1_000,
            expansion_samples: 1_000,
            audit_samples: 200,
            lift_samples: 1_000,
        }
    }

    pub fn quick(seed: u64) -> Self {
        SuiteConfig {
            seed,
            pair_samples: 500,
            triple_samples: 200,
            expansion_samples: 200,
            audit_samples: 200,
            lift_samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub claim: ClaimId,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

fn prime(n: u32) -> OddPrime {
    OddPrime::new(n).expect("suite exponents are odd primes")
}

/// Per-claim generator, so restricting a run to one claim does not change its sample.
fn rng_for(config: &SuiteConfig, claim: ClaimId) -> ChaCha8Rng {
    let salt = ClaimId::ALL.iter().position(|c| *c == claim).unwrap() as u64;
    ChaCha8Rng::seed_from_u64(config.seed ^ (salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Edge cases first, then uniform pairs with `|a|, |b| <= MAX_ARG`.
pub fn pair_sample(rng: &mut impl Rng, count: usize) -> Vec<(i64, i64)> {
    let edges = [
        (0, 0),
        (0, 5),
        (-7, 0),
        (1, -1),
        (-1, 1),
        (1, 1),
        (-1, -1),
        (MAX_ARG, -MAX_ARG),
        (MAX_ARG, MAX_ARG),
        (-MAX_ARG, -MAX_ARG),
        (MAX_ARG, 1),
    ];
    let mut out: Vec<_> = edges.into_iter().take(count).collect();
    while out.len() < count {
        out.push((
            rng.gen_range(-MAX_ARG..=MAX_ARG),
            rng.gen_range(-MAX_ARG..=MAX_ARG),
        ));
    }
    out
}

fn check_pairs(
    pairs: &[(i64, i64)],
    exponents: &[u32],
    mut check: impl FnMut(&BinomialPair) -> Option<String>,
) -> (bool, String) {
    let mut checked = 0usize;
    for &n in exponents {
        for &(a, b) in pairs {
            let p = BinomialPair::new(a, b, prime(n));
            if let Some(why) = check(&p) {
                return (false, format!("a={a} b={b} n={n}: {why}"));
            }
            checked += 1;
        }
    }
    (true, format!("{checked} (pair, exponent) cases agree"))
}

fn form_equivalence(config: &SuiteConfig) -> (bool, String) {
    let pairs = pair_sample(&mut rng_for(config, ClaimId::FormEquivalence), config.pair_samples);
    check_pairs(&pairs, &IDENTITY_EXPONENTS, |p| {
        let direct = truncated2_direct(p);
        SeriesForm::ALL.into_iter().find_map(|form| {
            let v = truncated2_series(p, form);
            (v != direct).then(|| format!("{} form gives {v}, direct gives {direct}", form.name()))
        })
    })
}

fn parity_and_divisibility(config: &SuiteConfig) -> (bool, String) {
    let pairs = pair_sample(
        &mut rng_for(config, ClaimId::ParityAndDivisibility),
        config.pair_samples,
    );
    check_pairs(&pairs, &IDENTITY_EXPONENTS, |p| {
        let u = truncated2_direct(p);
        if u.is_odd() {
            Some(format!("U = {u} is odd"))
        } else if !(&u % p.n.to_bigint()).is_zero() {
            Some(format!("n does not divide U = {u}"))
        } else {
            None
        }
    })
}

fn residual_identity(config: &SuiteConfig) -> (bool, String) {
    let pairs = pair_sample(&mut rng_for(config, ClaimId::ResidualIdentity), config.pair_samples);
    check_pairs(&pairs, &IDENTITY_EXPONENTS, |p| {
        let e = p.n.get();
        let lhs = p.q().pow(e) - truncated2_direct(p);
        let rhs = p.a.pow(e) + p.b.pow(e);
        (lhs != rhs).then(|| format!("{lhs} != {rhs}"))
    })
}

fn factored_forms(config: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(config, ClaimId::FactoredForms);
    let pairs = pair_sample(&mut rng, config.pair_samples);
    let (ok, detail) = check_pairs(&pairs, &[3, 5, 7], |p| match factored_u2(p) {
        Ok(v) if v == truncated2_direct(p) => None,
        Ok(v) => Some(format!("factored {v} != direct {}", truncated2_direct(p))),
        Err(e) => Some(e.to_string()),
    });
    if !ok {
        return (false, detail);
    }
    let mut triples = 0usize;
    for n in [3u32, 5, 7] {
        let two_n = 2 * i64::from(n);
        for _ in 0..config.triple_samples {
            let a = rng.gen_range(-MAX_ARG..=MAX_ARG);
            let b = rng.gen_range(-MAX_ARG..=MAX_ARG);
            let k = rng.gen_range(-MAX_ARG / two_n..=MAX_ARG / two_n);
            let c = two_n * k - a - b;
            let t = TrinomialTriple::new(a, b, c, prime(n));
            match trinomial_rhs_factored(&t) {
                Ok(v) if v == truncated3(&t) => {}
                Ok(v) => return (false, format!("({a}, {b}, {c}) n={n}: rhs {v} != U(a,b,c)")),
                Err(e) => return (false, format!("({a}, {b}, {c}) n={n}: {e}")),
            }
            triples += 1;
        }
    }
    (true, format!("{detail}; {triples} triples with 2n | a+b+c agree"))
}

/// Result of checking the printed `n = 11` expansion against the direct form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExpansionArbitration {
    Equal {
        checked: usize,
    },
    /// The counterexample with the smallest `|a| + |b|` found.
    Counterexample {
        a: i64,
        b: i64,
        #[serde(with = "crate::serde_decimal")]
        printed: BigInt,
        #[serde(with = "crate::serde_decimal")]
        direct: BigInt,
    },
}

fn eleven_mismatch(a: i64, b: i64) -> Option<(BigInt, BigInt)> {
    let p = BinomialPair::new(a, b, prime(11));
    let printed = factored_u2(&p).expect("n = 11 has a closed form");
    let direct = truncated2_direct(&p);
    (printed != direct).then_some((printed, direct))
}

pub fn arbitrate_eleven_expansion(samples: &[(i64, i64)]) -> ExpansionArbitration {
    // Exhaustive over |a| + |b| <= RADIUS, in order of increasing |a| + |b|,
    // then the random sample.
    const RADIUS: i64 = 40;
    let mut checked = 0usize;
    for r in 0..=RADIUS {
        for a in -r..=r {
            let rest = r - a.abs();
            let bs: &[i64] = if rest == 0 { &[0] } else { &[-rest, rest] };
            for &b in bs {
                checked += 1;
                if let Some((printed, direct)) = eleven_mismatch(a, b) {
                    return ExpansionArbitration::Counterexample { a, b, printed, direct };
                }
            }
        }
    }
    let mut best: Option<(i64, i64, BigInt, BigInt)> = None;
    for &(a, b) in samples {
        checked += 1;
        if let Some((printed, direct)) = eleven_mismatch(a, b) {
            let better = best
                .as_ref()
                .is_none_or(|(ba, bb, ..)| (a.abs() + b.abs(), a, b) < (ba.abs() + bb.abs(), *ba, *bb));
            if better {
                best = Some((a, b, printed, direct));
            }
        }
    }
    match best {
        Some((a, b, printed, direct)) => ExpansionArbitration::Counterexample { a, b, printed, direct },
        None => ExpansionArbitration::Equal { checked },
    }
}

fn eleven_expansion(config: &SuiteConfig) -> (bool, String) {
    let pairs = pair_sample(&mut rng_for(config, ClaimId::ElevenExpansion), config.expansion_samples);
    // A definitive report either way is the pass condition.
    match arbitrate_eleven_expansion(&pairs) {
        ExpansionArbitration::Equal { checked } => {
            (true, format!("EQUAL on {checked} pairs"))
        }
        ExpansionArbitration::Counterexample { a, b, printed, direct } => (
            true,
            format!("COUNTEREXAMPLE a={a} b={b}: printed {printed}, direct {direct}"),
        ),
    }
}

/// `v_11(U(a, b)) >= 2` for the residue pair, in exact arithmetic on a lifted representative.
fn exact_lift_check(a: u64, b: u64, shift_a: i64, shift_b: i64, n: OddPrime, m: u64) -> bool {
    let a = a as i64 + shift_a * m as i64;
    let b = b as i64 + shift_b * m as i64;
    let u = truncated2_direct(&BinomialPair::new(a, b, n));
    padic_valuation(&u, n).divisible_by_power(2)
}

fn eleven_scan(config: &SuiteConfig) -> (bool, String) {
    let n = prime(11);
    let opts = ScanOptions::default();
    let start = Instant::now();
    let constrained = match scan_divisibility(n, 2, ScanConstraints::case_a(), opts) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let elapsed = start.elapsed();
    if !constrained.witnesses.is_empty() {
        return (
            false,
            format!("{} case-A witnesses, first {:?}", constrained.witnesses.len(), constrained.witnesses[0]),
        );
    }
    if elapsed >= Duration::from_secs(1) {
        return (false, format!("constrained scan took {elapsed:?}"));
    }
    let unconstrained = match scan_divisibility(n, 2, ScanConstraints::unconstrained(), opts) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let m = unconstrained.modulus;
    let predicted: Vec<(u64, u64)> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter(|&(a, b)| a % 11 == 0 || b % 11 == 0 || (a + b) % 11 == 0)
        .collect();
    if unconstrained.witnesses != predicted {
        return (
            false,
            format!(
                "unconstrained witnesses ({}) differ from the 11 | a, b or a+b set ({})",
                unconstrained.witnesses.len(),
                predicted.len()
            ),
        );
    }
    let witnesses: BTreeSet<(u64, u64)> = unconstrained.witnesses.iter().copied().collect();
    let mut rng = rng_for(config, ClaimId::ElevenScan);
    for _ in 0..config.audit_samples {
        let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let (sa, sb) = (rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
        if exact_lift_check(a, b, sa, sb, n, m) != witnesses.contains(&(a, b)) {
            return (false, format!("exact audit disagrees at cell ({a}, {b})"));
        }
    }
    (
        true,
        format!(
            "0 of {} case-A cells in {elapsed:?}; unconstrained: {} witnesses = pairs with 11 | a, b or a+b; {} audited cells agree",
            constrained.cells_scanned,
            unconstrained.witnesses.len(),
            config.audit_samples
        ),
    )
}

fn quadratic_tables(_config: &SuiteConfig) -> (bool, String) {
    let mut notes = Vec::new();
    for (n, expect_empty) in [(5u32, true), (7, false)] {
        let p = prime(n);
        let start = Instant::now();
        let table = scan_quadratic(p);
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_millis(1) {
            return (false, format!("n={n} enumeration took {elapsed:?}"));
        }
        if table.is_empty() != expect_empty {
            return (false, format!("n={n} zero-set {:?}", table.zero_set()));
        }
        if !expect_empty && !table.zero_set().contains(&(1, 2)) {
            return (false, format!("n={n} zero-set lacks (1, 2)"));
        }
        // Away from Δa + Δb = n, a zero of the form is exactly an extra factor of n in U.
        for da in 1..u64::from(n) {
            for db in 1..u64::from(n) {
                if da + db == u64::from(n) {
                    continue;
                }
                let zero = quadratic_form_mod(da, db, p) == 0;
                let u = truncated2_direct(&BinomialPair::new(da as i64, db as i64, p));
                let lifted = padic_valuation(&u, p).divisible_by_power(2);
                if zero != lifted {
                    return (false, format!("n={n} ({da}, {db}): residue zero {zero}, v_n(U) >= 2 {lifted}"));
                }
            }
        }
        notes.push(format!(
            "n={n}: {} zeros ({} with Δa+Δb=n) in {elapsed:?}",
            table.zero_set().len(),
            table.zeros_sum_n.len()
        ));
    }
    (true, notes.join("; "))
}

/// A random triple accepted by [`case_a_verdict`], optionally with fixed residues of `a`, `b` mod `n`.
fn case_a_triple(rng: &mut impl Rng, n: u32, residues: Option<(i64, i64)>) -> TrinomialTriple {
    let nn = i64::from(n);
    let two_n = 2 * nn;
    loop {
        let (a, b) = match residues {
            Some((ra, rb)) => (
                nn * rng.gen_range(-MAX_ARG / nn..=MAX_ARG / nn) + ra,
                nn * rng.gen_range(-MAX_ARG / nn..=MAX_ARG / nn) + rb,
            ),
            None => (rng.gen_range(-MAX_ARG..=MAX_ARG), rng.gen_range(-MAX_ARG..=MAX_ARG)),
        };
        let k = rng.gen_range(-MAX_ARG / two_n..=MAX_ARG / two_n);
        let t = TrinomialTriple::new(a, b, two_n * k - a - b, prime(n));
        if case_a_verdict(&t).is_ok() {
            return t;
        }
    }
}

fn case_a_rule(config: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(config, ClaimId::CaseARule);
    for n in [3u32, 5] {
        for _ in 0..config.triple_samples {
            let t = case_a_triple(&mut rng, n, None);
            let v = case_a_verdict(&t).expect("generator yields valid triples");
            if v.tier(Tier::PaperRule).map(|t| t.kind) != Some(VerdictKind::Incompatible) {
                return (false, format!("n={n} ({}, {}, {}): rule tier not incompatible", t.a, t.b, t.c));
            }
        }
    }
    let mut quadratic_hits = 0usize;
    for i in 0..config.triple_samples {
        // every other triple sits in the class a ≡ 1, b ≡ 2 (mod 7), where 7 | a² + ab + b²
        let residues = (i % 2 == 1).then_some((1, 2));
        let t = case_a_triple(&mut rng, 7, residues);
        let quad = &t.a * &t.a + &t.a * &t.b + &t.b * &t.b;
        if (&quad % BigInt::from(7)).is_zero() {
            quadratic_hits += 1;
        }
        let v = case_a_verdict(&t).expect("generator yields valid triples");
        if v.tier(Tier::ExactRefinement).map(|t| t.kind) != Some(VerdictKind::Incompatible) {
            return (false, format!("n=7 ({}, {}, {}): exact tier not incompatible", t.a, t.b, t.c));
        }
    }
    if quadratic_hits == 0 {
        return (false, "n=7 sample never hit 7 | a^2 + ab + b^2".into());
    }
    (
        true,
        format!(
            "{} triples each for n=3, 5 rule-incompatible; {} n=7 triples exact-incompatible ({quadratic_hits} with 7 | a^2+ab+b^2)",
            config.triple_samples, config.triple_samples
        ),
    )
}

fn case_b_algebra(_config: &SuiteConfig) -> (bool, String) {
    let mut checked = 0usize;
    for n in [3u32, 5, 7, 11] {
        let p = prime(n);
        if case_b_exponents(0, p).is_ok() {
            return (false, format!("rho_c = 0 accepted for n={n}"));
        }
        for rho_c in 1..=50u64 {
            match case_b_exponents(rho_c, p) {
                Ok(e) if e.rho_c == rho_c
                    && e.rho_beta == rho_c - 1
                    && e.rho_q == u64::from(n) * rho_c - 1 => checked += 1,
                other => return (false, format!("rho_c={rho_c} n={n}: {other:?}")),
            }
        }
    }
    (true, format!("{checked} profiles satisfy both relations; rho_c = 0 rejected"))
}

fn lift_law(config: &SuiteConfig) -> (bool, String) {
    let mut rng = rng_for(config, ClaimId::LiftLaw);
    let mut checked = 0usize;
    for n in IDENTITY_EXPONENTS {
        let nn = i64::from(n);
        let p = prime(n);
        let mut taken = 0;
        while taken < config.lift_samples {
            let a = rng.gen_range(-MAX_ARG..=MAX_ARG);
            let b = nn * rng.gen_range(-MAX_ARG / nn..=MAX_ARG / nn) - a;
            if a % nn == 0 || b % nn == 0 || b.abs() > MAX_ARG {
                continue;
            }
            taken += 1;
            let u = truncated2_direct(&BinomialPair::new(a, b, p));
            let v = padic_valuation(&u, p);
            if !v.divisible_by_power(2) {
                return (false, format!("a={a} b={b} n={n}: v_n(U) = {}", v.exponent));
            }
            checked += 1;
        }
    }
    (true, format!("{checked} pairs have v_n(U) >= 2"))
}

fn scan_determinism(_config: &SuiteConfig) -> (bool, String) {
    let run = |workers| {
        scan_divisibility(
            prime(13),
            2,
            ScanConstraints::case_a(),
            ScanOptions {
                workers,
                ..ScanOptions::default()
            },
        )
        .map(|r| serde_json::to_vec(&r).expect("scan reports serialize"))
    };
    match (run(1), run(8)) {
        (Ok(one), Ok(eight)) if one == eight => (
            true,
            format!("1 and 8 workers give identical {}-byte reports", one.len()),
        ),
        (Ok(_), Ok(_)) => (false, "reports differ between 1 and 8 workers".into()),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

pub fn run_claim(claim: ClaimId, config: &SuiteConfig) -> ClaimOutcome {
    let start = Instant::now();
    let (passed, detail) = match claim {
        ClaimId::FormEquivalence => form_equivalence(config),
        ClaimId::ParityAndDivisibility => parity_and_divisibility(config),
        ClaimId::ResidualIdentity => residual_identity(config),
        ClaimId::FactoredForms => factored_forms(config),
        ClaimId::ElevenExpansion => eleven_expansion(config),
        ClaimId::ElevenScan => eleven_scan(config),
        ClaimId::QuadraticTables => quadratic_tables(config),
        ClaimId::CaseARule => case_a_rule(config),
        ClaimId::CaseBAlgebra => case_b_algebra(config),
        ClaimId::LiftLaw => lift_law(config),
        ClaimId::ScanDeterminism => scan_determinism(config),
    };
    ClaimOutcome {
        claim,
        title: claim.title().into(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

pub fn run_suite(config: &SuiteConfig, only: Option<ClaimId>) -> Vec<ClaimOutcome> {
    ClaimId::ALL
        .into_iter()
        .filter(|c| only.is_none_or(|o| o == *c))
        .map(|c| run_claim(c, config))
        .collect()
}
