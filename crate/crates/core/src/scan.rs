//! Exhaustive residue-class scans.
//!
//! `U(a, b)` is a polynomial with integer coefficients, so whether `n^k`
//! divides it depends only on `a` and `b` modulo `n^k`. Enumerating the
//! `n^k × n^k` grid therefore decides a divisibility claim completely.
//!
//! The grid is split into row bands that are scanned in parallel; each band
//! yields its own witness list, and the lists are merged in band order and
//! sorted, so the report never depends on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binomial::OddPrime;
use crate::error::{Error, Result};
use crate::valuation::quadratic_form_mod;

pub const DEFAULT_BUDGET_CELLS: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScanConstraints {
    pub forbid_a_zero: bool,
    pub forbid_b_zero: bool,
    pub forbid_sum_zero_mod_n: bool,
}

impl ScanConstraints {
    /// `a`, `b` and `a + b` all prime to `n`.
    pub fn case_a() -> Self {
        ScanConstraints {
            forbid_a_zero: true,
            forbid_b_zero: true,
            forbid_sum_zero_mod_n: true,
        }
    }

    pub fn unconstrained() -> Self {
        ScanConstraints {
            forbid_a_zero: false,
            forbid_b_zero: false,
            forbid_sum_zero_mod_n: false,
        }
    }

    /// Whether the residue pair is admitted; "zero" means `≡ 0 (mod n)`.
    pub fn admits(&self, a: u64, b: u64, n: u64) -> bool {
        !(self.forbid_a_zero && a % n == 0
            || self.forbid_b_zero && b % n == 0
            || self.forbid_sum_zero_mod_n && (a % n + b % n) % n == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Upper bound on `n^(2k)`.
    pub budget_cells: u128,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            budget_cells: DEFAULT_BUDGET_CELLS,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: OddPrime,
    pub power_k: u32,
    pub modulus: u64,
    pub constraints: ScanConstraints,
    /// Sorted lexicographically.
    pub witnesses: Vec<(u64, u64)>,
    pub cells_scanned: u64,
}

fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((u128::from(x) * u128::from(y)) % u128::from(m)) as u64
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut base = base % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `U(a, b) mod m` in machine arithmetic.
pub fn u2_mod(a_res: u64, b_res: u64, n: OddPrime, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Domain(format!("modulus must be >= 2, got {m}")));
    }
    let (a, b) = (a_res % m, b_res % m);
    let e = n.as_u64();
    let s = pow_mod((a + b) % m, e, m);
    let minus = (pow_mod(a, e, m) + pow_mod(b, e, m)) % m;
    Ok((s + m - minus) % m)
}

fn modulus_for(n: OddPrime, k: u32, budget: u128) -> Result<u64> {
    let n = u128::from(n.as_u64());
    let required = n.checked_pow(2 * k).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget {
            required,
            cap: budget,
        });
    }
    let m = n.pow(k);
    u64::try_from(m).map_err(|_| Error::Budget {
        required,
        cap: budget,
    })
}

/// Finds every admitted residue pair `(a, b)` in `[0, n^k)²` with `n^k | U(a, b)`.
pub fn scan_divisibility(
    n: OddPrime,
    k: u32,
    constraints: ScanConstraints,
    options: ScanOptions,
) -> Result<ScanReport> {
    if k == 0 {
        return Err(Error::Domain("scan power k must be >= 1".into()));
    }
    let m = modulus_for(n, k, options.budget_cells)?;
    let np = n.as_u64();
    let powers: Vec<u64> = (0..m).map(|x| pow_mod(x, np, m)).collect();

    let scan_rows = |rows: std::ops::Range<u64>| {
        let mut witnesses = Vec::new();
        let mut cells = 0u64;
        for a in rows {
            let pa = powers[a as usize];
            for b in 0..m {
                if !constraints.admits(a, b, np) {
                    continue;
                }
                cells += 1;
                let s = a + b;
                let s = if s >= m { s - m } else { s };
                let pb = powers[b as usize];
                // (s^n - a^n - b^n) mod m, kept nonnegative
                let u = (powers[s as usize] + 2 * m - pa - pb) % m;
                if u == 0 {
                    witnesses.push((a, b));
                }
            }
        }
        (witnesses, cells)
    };

    let workers = if options.workers == 0 {
        rayon::current_num_threads()
    } else {
        options.workers
    };
    let band = (m / (4 * workers as u64)).max(1);
    let bands: Vec<std::ops::Range<u64>> = (0..m)
        .step_by(band as usize)
        .map(|start| start..(start + band).min(m))
        .collect();

    let run = || -> Vec<(Vec<(u64, u64)>, u64)> {
        bands.par_iter().cloned().map(scan_rows).collect()
    };
    let partials = if options.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start {} workers: {e}", options.workers)))?
            .install(run)
    };

    let cells_scanned = partials.iter().map(|(_, c)| c).sum();
    let mut witnesses: Vec<(u64, u64)> = partials.into_iter().flat_map(|(w, _)| w).collect();
    witnesses.sort_unstable();
    Ok(ScanReport {
        n,
        power_k: k,
        modulus: m,
        constraints,
        witnesses,
        cells_scanned,
    })
}

/// Zeros of `Δa² + Δa·Δb + Δb² (mod n)` over `Δa, Δb ∈ [1, n-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticTable {
    pub n: OddPrime,
    /// Zeros with `Δa + Δb = n`.
    pub zeros_sum_n: Vec<(u64, u64)>,
    /// Zeros with `Δa + Δb ≠ n`.
    pub zeros_other: Vec<(u64, u64)>,
    pub cells: u64,
}

impl QuadraticTable {
    pub fn zero_set(&self) -> Vec<(u64, u64)> {
        let mut all: Vec<_> = self
            .zeros_sum_n
            .iter()
            .chain(&self.zeros_other)
            .copied()
            .collect();
        all.sort_unstable();
        all
    }

    pub fn is_empty(&self) -> bool {
        self.zeros_sum_n.is_empty() && self.zeros_other.is_empty()
    }
}

pub fn scan_quadratic(n: OddPrime) -> QuadraticTable {
    let np = n.as_u64();
    let mut table = QuadraticTable {
        n,
        zeros_sum_n: Vec::new(),
        zeros_other: Vec::new(),
        cells: 0,
    };
    for da in 1..np {
        for db in 1..np {
            table.cells += 1;
            if quadratic_form_mod(da, db, n) == 0 {
                if da + db == np {
                    table.zeros_sum_n.push((da, db));
                } else {
                    table.zeros_other.push((da, db));
                }
            }
        }
    }
    table
}
