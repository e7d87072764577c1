//! Compatibility verdicts for `(a + b)^n = U(a, b)` and `(a + b + c)^n = U(a, b, c)`.
//!
//! The two-term equation never holds outside the trivial `a = -b`: the two
//! sides differ by `a^n + b^n`. For the three-term equation the analysis
//! splits on whether `n` divides none of the normalized variables (case A)
//! or exactly one of them (case B).
//!
//! In case A the left side `(2βn)^n` has `n`-adic valuation `n·(1 + v(β))`.
//! The rule tier only looks at `v(U(a, b))`: since `U(a + b, c)` is
//! divisible by `n²` whenever `n | a + b + c`, a valuation of 1 for
//! `U(a, b)` pins the right side's valuation to 1 and the equation fails.
//! The exact tier computes the valuation of the whole right side and
//! compares it with the left side; it is a refinement that can decide
//! inputs the rule leaves open.

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::binomial::{
    gcd_normalize, truncated2_direct, BinomialPair, ExactInt, OddPrime, TrinomialTriple,
};
use crate::error::{Error, Result};
use crate::valuation::{padic_valuation, Order, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Incompatible,
    Undetermined,
    TrivialOnly,
}

impl VerdictKind {
    fn decisiveness(self) -> u8 {
        match self {
            VerdictKind::Undetermined => 0,
            VerdictKind::TrivialOnly => 1,
            VerdictKind::Incompatible => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Incompatible => "incompatible",
            VerdictKind::Undetermined => "undetermined",
            VerdictKind::TrivialOnly => "trivial_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum EvidenceValue {
    #[serde(with = "crate::serde_decimal")]
    Integer(ExactInt),
    Order(Order),
    Valuation(Valuation),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub name: String,
    pub value: EvidenceValue,
}

impl Evidence {
    fn integer(name: &str, value: ExactInt) -> Self {
        Evidence {
            name: name.into(),
            value: EvidenceValue::Integer(value),
        }
    }

    fn order(name: &str, value: Order) -> Self {
        Evidence {
            name: name.into(),
            value: EvidenceValue::Order(value),
        }
    }

    fn valuation(name: &str, value: Valuation) -> Self {
        Evidence {
            name: name.into(),
            value: EvidenceValue::Valuation(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    /// Only the stated criterion on `v(U(a, b))`.
    PaperRule,
    /// Full valuation comparison of both sides.
    ExactRefinement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierVerdict {
    pub tier: Tier,
    pub kind: VerdictKind,
    pub reason: String,
}

/// Outcome of a compatibility check.
///
/// `Incompatible` always carries evidence. `tiers` is empty for checks that
/// are decided in one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub reason: String,
    pub evidence: Vec<Evidence>,
    pub tiers: Vec<TierVerdict>,
}

impl Verdict {
    pub fn tier(&self, tier: Tier) -> Option<&TierVerdict> {
        self.tiers.iter().find(|t| t.tier == tier)
    }

    pub fn evidence(&self, name: &str) -> Option<&EvidenceValue> {
        self.evidence.iter().find(|e| e.name == name).map(|e| &e.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityClass {
    BothOdd,
    OneEven,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// The inputs have gcd 1, i.e. they are already in normalized form.
    pub coprime_after_normalization: bool,
    #[serde(with = "crate::serde_decimal")]
    pub gcd: ExactInt,
    pub parity_class: ParityClass,
    pub q_div_2n: bool,
    #[serde(with = "crate::serde_decimal::option")]
    pub beta: Option<ExactInt>,
}

/// Necessary conditions for `(a + b)^n = U(a, b)`: normalized inputs, both odd,
/// and `a + b = 2βn`.
pub fn necessary_conditions_2(p: &BinomialPair) -> Result<ConditionReport> {
    let (_, g) = gcd_normalize(&[p.a.clone(), p.b.clone()])
        .map_err(|_| Error::Precondition("(a, b) must not both be zero".into()))?;
    let parity_class = match (p.a.is_odd(), p.b.is_odd()) {
        (true, true) => ParityClass::BothOdd,
        (true, false) | (false, true) => ParityClass::OneEven,
        (false, false) => ParityClass::Other,
    };
    let two_n = BigInt::from(2 * p.n.as_u64());
    let (quot, rem) = p.q().div_rem(&two_n);
    let q_div_2n = rem.is_zero();
    Ok(ConditionReport {
        coprime_after_normalization: g.is_one(),
        gcd: g,
        parity_class,
        q_div_2n,
        beta: q_div_2n.then_some(quot),
    })
}

/// Decides `(a + b)^n = U(a, b)` from the residual `a^n + b^n`.
pub fn binomial_equation_verdict(p: &BinomialPair) -> Verdict {
    let u = truncated2_direct(p);
    let residual = p.q().pow(p.n.get()) - &u;
    let (kind, reason) = if residual.is_zero() {
        (VerdictKind::TrivialOnly, "trivial-a-eq-neg-b")
    } else {
        (VerdictKind::Incompatible, "nonzero-residual")
    };
    Verdict {
        kind,
        reason: reason.into(),
        evidence: vec![
            Evidence::integer("residual", residual),
            Evidence::integer("U(a,b)", u),
        ],
        tiers: Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    A,
    B,
    C,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::A => "a",
            Variable::B => "b",
            Variable::C => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DivisibilityCase {
    /// `n` divides none of `a`, `b`, `c`.
    CaseA,
    /// `n` divides exactly one variable, to the power `rho`.
    CaseB { variable: Variable, rho: Order },
}

fn is_divisible(x: &ExactInt, n: OddPrime) -> bool {
    (x % n.to_bigint()).is_zero()
}

pub fn classify_divisibility_case(t: &TrinomialTriple) -> Result<DivisibilityCase> {
    let values = [t.a.clone(), t.b.clone(), t.c.clone()];
    let (_, g) = gcd_normalize(&values)
        .map_err(|_| Error::Precondition("a, b, c must not all be zero".into()))?;
    if !g.is_one() {
        return Err(Error::Precondition(format!(
            "gcd(a, b, c) = {g}; normalize the triple first"
        )));
    }
    let vars = [Variable::A, Variable::B, Variable::C];
    let divisible: Vec<Variable> = vars
        .into_iter()
        .zip(&values)
        .filter(|(_, x)| is_divisible(x, t.n))
        .map(|(v, _)| v)
        .collect();
    match divisible.as_slice() {
        [] => Ok(DivisibilityCase::CaseA),
        [var] => {
            let x = &values[vars.iter().position(|v| v == var).unwrap()];
            Ok(DivisibilityCase::CaseB {
                variable: *var,
                rho: padic_valuation(x, t.n).exponent,
            })
        }
        many => Err(Error::Inconsistency(format!(
            "n = {} divides {} of the coprime variables ({})",
            t.n,
            many.len(),
            many.iter().map(|v| v.name()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn exactly_one_even(t: &TrinomialTriple) -> bool {
    [&t.a, &t.b, &t.c].iter().filter(|x| x.is_even()).count() == 1
}

fn lhs_valuation(beta: &ExactInt, n: OddPrime) -> Order {
    match padic_valuation(beta, n).exponent {
        Order::Finite(k) => Order::Finite(n.as_u64() * (1 + k)),
        Order::Infinite => Order::Infinite,
    }
}

/// Case-A verdict for `(a + b + c)^n = U(a, b, c)` with both tiers recorded.
pub fn case_a_verdict(t: &TrinomialTriple) -> Result<Verdict> {
    match classify_divisibility_case(t)? {
        DivisibilityCase::CaseA => {}
        DivisibilityCase::CaseB { variable, .. } => {
            return Err(Error::Precondition(format!(
                "case A requires n to divide none of a, b, c; n divides {}",
                variable.name()
            )))
        }
    }
    let beta = t.beta().ok_or_else(|| {
        Error::Precondition(format!("2n = {} must divide a + b + c", 2 * t.n.as_u64()))
    })?;
    if !exactly_one_even(t) {
        return Err(Error::Precondition(
            "exactly one of a, b, c must be even".into(),
        ));
    }

    let n = t.n;
    let u_head = truncated2_direct(&t.head_pair());
    let u_tail = truncated2_direct(&t.tail_pair());
    let u_sum = &u_head + &u_tail;
    let v_head = padic_valuation(&u_head, n);
    let v_tail = padic_valuation(&u_tail, n);
    let v_sum = padic_valuation(&u_sum, n);
    let v_lhs = lhs_valuation(&beta, n);

    let paper = if v_head.exponent < Order::Finite(2) {
        TierVerdict {
            tier: Tier::PaperRule,
            kind: VerdictKind::Incompatible,
            reason: "u2-valuation-below-2".into(),
        }
    } else {
        TierVerdict {
            tier: Tier::PaperRule,
            kind: VerdictKind::Undetermined,
            reason: "u2-valuation-at-least-2".into(),
        }
    };
    let exact = if v_sum.exponent == v_lhs {
        TierVerdict {
            tier: Tier::ExactRefinement,
            kind: VerdictKind::Undetermined,
            reason: "valuations-agree".into(),
        }
    } else {
        let reason = if v_sum.exponent < Order::Finite(n.as_u64()) {
            "sum-valuation-below-n"
        } else {
            "sum-valuation-mismatch"
        };
        TierVerdict {
            tier: Tier::ExactRefinement,
            kind: VerdictKind::Incompatible,
            reason: reason.into(),
        }
    };

    let decisive = if paper.kind.decisiveness() >= exact.kind.decisiveness() {
        &paper
    } else {
        &exact
    };
    Ok(Verdict {
        kind: decisive.kind,
        reason: decisive.reason.clone(),
        evidence: vec![
            Evidence::integer("U(a,b)", u_head),
            Evidence::integer("U(a+b,c)", u_tail),
            Evidence::valuation("v_n(U(a,b))", v_head),
            Evidence::valuation("v_n(U(a+b,c))", v_tail),
            Evidence::valuation("v_n(U(a,b,c))", v_sum),
            Evidence::integer("beta", beta),
            Evidence::order("v_n(lhs)", v_lhs),
        ],
        tiers: vec![paper, exact],
    })
}

/// `n`-adic exponents of `c`, `β` and `q = a + b` in case B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub rho_c: u64,
    pub rho_beta: u64,
    pub rho_q: u64,
}

/// The exponents forced by `ρ_c`: `ρ_β = ρ_c - 1` and `ρ_q = n·ρ_c - 1`.
pub fn case_b_exponents(rho_c: u64, n: OddPrime) -> Result<ExponentProfile> {
    if rho_c == 0 {
        return Err(Error::Precondition(
            "the case-B exponent relations hold only for rho_c > 0".into(),
        ));
    }
    Ok(ExponentProfile {
        rho_c,
        rho_beta: rho_c - 1,
        rho_q: n.as_u64() * rho_c - 1,
    })
}

/// Instance-level check of the case-B exponent bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBReport {
    /// Position of the `n`-multiple in the input, before it was moved to `c`.
    pub divisible_variable: Variable,
    #[serde(with = "crate::serde_decimal")]
    pub a: ExactInt,
    #[serde(with = "crate::serde_decimal")]
    pub b: ExactInt,
    #[serde(with = "crate::serde_decimal")]
    pub c: ExactInt,
    #[serde(with = "crate::serde_decimal")]
    pub c0: ExactInt,
    #[serde(with = "crate::serde_decimal")]
    pub q0: ExactInt,
    #[serde(with = "crate::serde_decimal")]
    pub beta0: ExactInt,
    pub rho_c: u64,
    pub rho_q: Order,
    pub rho_beta: Order,
    pub expected: ExponentProfile,
    pub rho_q_matches: bool,
    pub rho_beta_matches: bool,
    pub u2_valuation: Order,
    /// `ρ_q + 1`, from the observed `ρ_q`.
    pub u2_expected: Order,
    pub u2_matches: bool,
    pub uqc_valuation: Order,
    /// `ρ_q + 1 + ρ_c(n - 1)`, from the observed `ρ_q`.
    pub uqc_expected: Order,
    pub uqc_matches: bool,
    pub lhs_valuation: Order,
    pub rhs_valuation: Order,
}

impl CaseBReport {
    pub fn exponents_match(&self) -> bool {
        self.rho_q_matches && self.rho_beta_matches
    }
}

pub fn case_b_consistency_check(t: &TrinomialTriple) -> Result<CaseBReport> {
    let (variable, rho) = match classify_divisibility_case(t)? {
        DivisibilityCase::CaseA => {
            return Err(Error::Precondition(
                "case B requires n to divide one of a, b, c".into(),
            ))
        }
        DivisibilityCase::CaseB { variable, rho } => (variable, rho),
    };
    let rho_c = rho.finite().ok_or_else(|| {
        Error::Precondition(format!(
            "{} = 0 has no finite n-adic exponent",
            variable.name()
        ))
    })?;
    let beta = t.beta().ok_or_else(|| {
        Error::Precondition(format!("2n = {} must divide a + b + c", 2 * t.n.as_u64()))
    })?;
    let (a, b, c) = match variable {
        Variable::A => (t.c.clone(), t.b.clone(), t.a.clone()),
        Variable::B => (t.a.clone(), t.c.clone(), t.b.clone()),
        Variable::C => (t.a.clone(), t.b.clone(), t.c.clone()),
    };
    let n = t.n;
    let relabeled = TrinomialTriple::new(a, b, c, n);

    let vc = padic_valuation(&relabeled.c, n);
    let vq = padic_valuation(&relabeled.head_pair().q(), n);
    let vbeta = padic_valuation(&beta, n);
    let expected = case_b_exponents(rho_c, n)?;

    let u_head = truncated2_direct(&relabeled.head_pair());
    let u_tail = truncated2_direct(&relabeled.tail_pair());
    let u2_valuation = padic_valuation(&u_head, n).exponent;
    let uqc_valuation = padic_valuation(&u_tail, n).exponent;
    let rhs_valuation = padic_valuation(&(&u_head + &u_tail), n).exponent;
    let u2_expected = vq.exponent + Order::Finite(1);
    let uqc_expected = vq.exponent + Order::Finite(1 + rho_c * (n.as_u64() - 1));

    Ok(CaseBReport {
        divisible_variable: variable,
        c0: vc.cofactor,
        q0: vq.cofactor,
        beta0: vbeta.cofactor,
        rho_c,
        rho_q: vq.exponent,
        rho_beta: vbeta.exponent,
        expected,
        rho_q_matches: vq.exponent == Order::Finite(expected.rho_q),
        rho_beta_matches: vbeta.exponent == Order::Finite(expected.rho_beta),
        u2_valuation,
        u2_expected,
        u2_matches: u2_valuation == u2_expected,
        uqc_valuation,
        uqc_expected,
        uqc_matches: uqc_valuation == uqc_expected,
        lhs_valuation: lhs_valuation(&beta, n),
        rhs_valuation,
        a: relabeled.a,
        b: relabeled.b,
        c: relabeled.c,
    })
}
