//! Truncated binomials of two and three integers.
//!
//! `U(a, b) = (a + b)^n - a^n - b^n` and
//! `U(a, b, c) = (a + b + c)^n - a^n - b^n - c^n`, for an odd prime `n`.
//! Besides the direct difference of powers, `U(a, b)` can be summed as the
//! mixed terms of the Newton expansion, or expanded in powers of `q = a + b`
//! against `-a` or `-b`. All forms are evaluated exactly, so each one can be
//! used as an oracle for the others and for the modular kernel in [`crate::scan`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer used for every argument and value.
pub type ExactInt = BigInt;

/// An odd prime, used both as the binomial exponent and as a valuation base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct OddPrime(u32);

impl OddPrime {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 || !is_prime(n) {
            return Err(Error::Domain(format!(
                "exponent must be an odd prime >= 3, got {n}"
            )));
        }
        Ok(OddPrime(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_u64(self) -> u64 {
        u64::from(self.0)
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u32> for OddPrime {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        OddPrime::new(n)
    }
}

impl From<OddPrime> for u32 {
    fn from(p: OddPrime) -> u32 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic trial division; exact for every `u32`.
pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let n = u64::from(n);
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The pair `(a, b)` of a two-term truncated binomial with exponent `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPair {
    pub a: ExactInt,
    pub b: ExactInt,
    pub n: OddPrime,
}

impl BinomialPair {
    pub fn new(a: impl Into<ExactInt>, b: impl Into<ExactInt>, n: OddPrime) -> Self {
        BinomialPair {
            a: a.into(),
            b: b.into(),
            n,
        }
    }

    pub fn q(&self) -> ExactInt {
        &self.a + &self.b
    }
}

/// The triple `(a, b, c)` of a three-term truncated binomial with exponent `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialTriple {
    pub a: ExactInt,
    pub b: ExactInt,
    pub c: ExactInt,
    pub n: OddPrime,
}

impl TrinomialTriple {
    pub fn new(
        a: impl Into<ExactInt>,
        b: impl Into<ExactInt>,
        c: impl Into<ExactInt>,
        n: OddPrime,
    ) -> Self {
        TrinomialTriple {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            n,
        }
    }

    /// `s = a + b + c`.
    pub fn sum(&self) -> ExactInt {
        &self.a + &self.b + &self.c
    }

    /// `β = s / (2n)`, present only when `2n` divides `s`.
    pub fn beta(&self) -> Option<ExactInt> {
        let two_n = BigInt::from(2u32) * self.n.to_bigint();
        let (quot, rem) = self.sum().div_rem(&two_n);
        rem.is_zero().then_some(quot)
    }

    /// The leading pair `(a, b)` with the same exponent.
    pub fn head_pair(&self) -> BinomialPair {
        BinomialPair::new(self.a.clone(), self.b.clone(), self.n)
    }

    /// The pair `(a + b, c)` with the same exponent.
    pub fn tail_pair(&self) -> BinomialPair {
        BinomialPair::new(&self.a + &self.b, self.c.clone(), self.n)
    }
}

/// The three summation forms of `U(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesForm {
    /// `Σ C(n,v) a^v b^(n-v)`, `v = 1..n-1`.
    Mixed,
    /// `-Σ C(n,v) q^v (-a)^(n-v)`, `v = 1..n-1`.
    QMinusA,
    /// `-Σ C(n,v) q^v (-b)^(n-v)`, `v = 1..n-1`.
    QMinusB,
}

impl SeriesForm {
    pub const ALL: [SeriesForm; 3] = [SeriesForm::Mixed, SeriesForm::QMinusA, SeriesForm::QMinusB];

    pub fn name(self) -> &'static str {
        match self {
            SeriesForm::Mixed => "mixed",
            SeriesForm::QMinusA => "q_minus_a",
            SeriesForm::QMinusB => "q_minus_b",
        }
    }
}

impl std::str::FromStr for SeriesForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesForm::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Domain(format!("unknown series form {s:?}")))
    }
}

/// Exact binomial coefficient `C(n, v)`.
pub fn binom_coeff(n: u64, v: u64) -> Result<ExactInt> {
    if v > n {
        return Err(Error::Domain(format!(
            "binomial coefficient C({n}, {v}) needs v <= n"
        )));
    }
    let v = v.min(n - v);
    let mut acc = BigInt::one();
    for i in 0..v {
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

/// Row `C(n, 0..=n)` of Pascal's triangle, built by the multiplicative recurrence.
fn coefficient_row(n: u32) -> Vec<BigInt> {
    let n = u64::from(n);
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = BigInt::one();
    row.push(acc.clone());
    for i in 0..n {
        acc = acc * (n - i) / (i + 1);
        row.push(acc.clone());
    }
    row
}

/// `U(a, b) = (a + b)^n - a^n - b^n`.
pub fn truncated2_direct(p: &BinomialPair) -> ExactInt {
    let n = p.n.get();
    p.q().pow(n) - p.a.pow(n) - p.b.pow(n)
}

/// `U(a, b)` summed term by term in the selected form.
pub fn truncated2_series(p: &BinomialPair, form: SeriesForm) -> ExactInt {
    let n = p.n.get();
    let row = coefficient_row(n);
    let (x, y, sign) = match form {
        SeriesForm::Mixed => (p.a.clone(), p.b.clone(), false),
        SeriesForm::QMinusA => (p.q(), -&p.a, true),
        SeriesForm::QMinusB => (p.q(), -&p.b, true),
    };
    let total = (1..n).fold(BigInt::zero(), |acc, v| {
        acc + &row[v as usize] * x.pow(v) * y.pow(n - v)
    });
    if sign {
        -total
    } else {
        total
    }
}

/// `U(a, b, c) = U(a, b) + U(a + b, c)`.
pub fn truncated3(t: &TrinomialTriple) -> ExactInt {
    truncated2_direct(&t.head_pair()) + truncated2_direct(&t.tail_pair())
}

/// Divides every value by the positive gcd of the list, keeping signs.
pub fn gcd_normalize(values: &[ExactInt]) -> Result<(Vec<ExactInt>, ExactInt)> {
    let g = values.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return Err(Error::Domain(
            "gcd normalization needs at least one nonzero value".into(),
        ));
    }
    debug_assert!(g.is_positive());
    let normalized = values.iter().map(|v| v / &g).collect();
    Ok((normalized, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prime(n: u32) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn pair(a: i64, b: i64, n: u32) -> BinomialPair {
        BinomialPair::new(a, b, prime(n))
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Pascal's triangle by repeated addition.
    fn pascal(n: usize) -> Vec<Vec<u128>> {
        let mut rows = vec![vec![1u128]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u128; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn odd_prime_validation() {
        for n in [0, 1, 2, 4, 9, 15, 21, 25, 91] {
            assert!(OddPrime::new(n).is_err(), "{n}");
        }
        for n in [3, 5, 7, 11, 13, 97, 65_521] {
            assert_eq!(OddPrime::new(n).unwrap().get(), n);
        }
        assert!(!is_prime(4_294_967_295));
        assert!(is_prime(4_294_967_291));
    }

    #[test]
    fn binom_coeff_examples() {
        assert_eq!(binom_coeff(7, 0).unwrap(), big(1));
        assert_eq!(binom_coeff(7, 3).unwrap(), big(35));
        assert_eq!(binom_coeff(11, 5).unwrap(), big(462));
        assert!(matches!(binom_coeff(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn binom_coeff_matches_pascal() {
        let rows = pascal(60);
        for (n, row) in rows.iter().enumerate() {
            for (v, &c) in row.iter().enumerate() {
                assert_eq!(binom_coeff(n as u64, v as u64).unwrap(), BigInt::from(c));
            }
        }
    }

    #[test]
    fn direct_examples() {
        assert_eq!(truncated2_direct(&pair(0, 5, 3)), big(0));
        assert_eq!(truncated2_direct(&pair(1, -1, 5)), big(0));
        assert_eq!(truncated2_direct(&pair(1, 1, 3)), big(6));
        assert_eq!(truncated2_direct(&pair(1, 2, 7)), big(2058));
    }

    #[test]
    fn series_examples() {
        assert_eq!(truncated2_series(&pair(1, 1, 3), SeriesForm::Mixed), big(6));
        let p = pair(2, 3, 5);
        assert_eq!(
            truncated2_series(&p, SeriesForm::QMinusA),
            truncated2_direct(&p)
        );
        let p = pair(-4, 7, 11);
        assert_eq!(
            truncated2_series(&p, SeriesForm::QMinusB),
            truncated2_direct(&p)
        );
    }

    #[test]
    fn series_form_names_parse() {
        for form in SeriesForm::ALL {
            assert_eq!(form.name().parse::<SeriesForm>().unwrap(), form);
        }
        assert_eq!("q-minus-a".parse::<SeriesForm>().unwrap(), SeriesForm::QMinusA);
        assert!("direct".parse::<SeriesForm>().is_err());
    }

    #[test]
    fn truncated3_examples() {
        let t = TrinomialTriple::new(1, 1, 4, prime(3));
        assert_eq!(truncated3(&t), big(150));
        let t = TrinomialTriple::new(1, -1, 0, prime(5));
        assert_eq!(truncated3(&t), big(0));
        let t = TrinomialTriple::new(1, 2, 11, prime(7));
        let expected = big(14).pow(7) - 1 - big(2).pow(7) - big(11).pow(7);
        assert_eq!(truncated3(&t), expected);
    }

    #[test]
    fn beta_only_when_two_n_divides_sum() {
        let t = TrinomialTriple::new(1, 1, 4, prime(3));
        assert_eq!(t.beta(), Some(big(1)));
        let t = TrinomialTriple::new(1, 1, 1, prime(3));
        assert_eq!(t.beta(), None);
        let t = TrinomialTriple::new(-5, -3, -4, prime(3));
        assert_eq!(t.beta(), Some(big(-2)));
    }

    #[test]
    fn gcd_normalize_examples() {
        let (v, g) = gcd_normalize(&[big(6), big(10)]).unwrap();
        assert_eq!((v, g), (vec![big(3), big(5)], big(2)));
        let (v, g) = gcd_normalize(&[big(-4), big(8), big(6)]).unwrap();
        assert_eq!((v, g), (vec![big(-2), big(4), big(3)], big(2)));
        let (v, g) = gcd_normalize(&[big(7), big(11)]).unwrap();
        assert_eq!((v, g), (vec![big(7), big(11)], big(1)));
        let (v, g) = gcd_normalize(&[big(0), big(-9)]).unwrap();
        assert_eq!((v, g), (vec![big(0), big(-1)], big(9)));
        assert!(gcd_normalize(&[big(0), big(0)]).is_err());
        assert!(gcd_normalize(&[]).is_err());
    }

    fn exponent() -> impl Strategy<Value = OddPrime> {
        prop::sample::select(vec![3u32, 5, 7, 11, 13]).prop_map(prime)
    }

    fn arg() -> impl Strategy<Value = i64> {
        prop_oneof![
            1 => Just(0i64),
            1 => -3i64..=3,
            6 => -1_000_000i64..=1_000_000,
        ]
    }

    proptest! {
        #[test]
        fn all_forms_agree(a in arg(), b in arg(), n in exponent()) {
            let p = BinomialPair::new(a, b, n);
            let direct = truncated2_direct(&p);
            for form in SeriesForm::ALL {
                prop_assert_eq!(truncated2_series(&p, form), direct.clone());
            }
        }

        #[test]
        fn decomposition_matches_powers(a in arg(), b in arg(), c in arg(), n in exponent()) {
            let t = TrinomialTriple::new(a, b, c, n);
            let e = n.get();
            let expected = t.sum().pow(e) - big(a).pow(e) - big(b).pow(e) - big(c).pow(e);
            prop_assert_eq!(truncated3(&t), expected);
        }

        #[test]
        fn even_divisible_by_n_and_symmetric(a in arg(), b in arg(), n in exponent()) {
            let u = truncated2_direct(&BinomialPair::new(a, b, n));
            prop_assert!(u.is_even());
            prop_assert!((&u % n.to_bigint()).is_zero());
            prop_assert_eq!(truncated2_direct(&BinomialPair::new(b, a, n)), u);
        }

        #[test]
        fn normalization_is_idempotent(xs in prop::collection::vec(-10_000i64..10_000, 1..5)) {
            let values: Vec<BigInt> = xs.iter().copied().map(BigInt::from).collect();
            if let Ok((once, g)) = gcd_normalize(&values) {
                let (twice, g2) = gcd_normalize(&once).unwrap();
                prop_assert_eq!(&twice, &once);
                prop_assert_eq!(g2, big(1));
                for (orig, norm) in values.iter().zip(&once) {
                    prop_assert_eq!(norm * &g, orig.clone());
                }
            }
        }
    }
}
