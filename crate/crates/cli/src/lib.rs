//! Batch frontend for `truncbin-core`.
//!
//! Exit codes: 0 ok, 1 verify failure, 2 parse or validation error,
//! 3 failed precondition, 4 `--expect-empty` violated, 5 scan budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};
use truncbin_core::verify::{run_suite, ClaimId, SuiteConfig};
use truncbin_core::{
    binomial_equation_verdict, case_a_verdict, case_b_consistency_check, case_b_exponents,
    classify_divisibility_case, necessary_conditions_2, scan_divisibility, scan_quadratic,
    truncated2_direct, truncated2_series, truncated3, BinomialPair, DivisibilityCase, Error,
    OddPrime, ScanConstraints, ScanOptions, SeriesForm, TrinomialTriple, DEFAULT_BUDGET_CELLS,
};

pub mod report;

use report::{Format, ReportEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_EXPECTATION: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

pub const BUDGET_ENV: &str = "SCAN_BUDGET_CELLS";
pub const DEFAULT_SEED: u64 = 2026;

#[derive(Debug, Parser)]
#[command(name = "truncbin", version, about = "Truncated binomials and their divisibility by the exponent")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate U(a,b) or U(a,b,c)
    Compute(ComputeArgs),
    /// Decide compatibility of the two- and three-term equations
    #[command(subcommand)]
    Verdict(VerdictCommand),
    /// Exhaustive residue-class scans
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Rerun every claim check
    Verify(VerifyArgs),
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s).map_err(|e| format!("not a decimal integer: {e}"))
}

fn parse_prime(s: &str) -> Result<OddPrime, String> {
    let n: u32 = s.parse().map_err(|e| format!("not a machine-size integer: {e}"))?;
    OddPrime::new(n).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub a: BigInt,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub b: BigInt,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub c: Option<BigInt>,
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    /// Also print every series form (two-term) or the decomposition (three-term)
    #[arg(long)]
    pub all_forms: bool,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub a: BigInt,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub b: BigInt,
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub a: BigInt,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub b: BigInt,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
    pub c: BigInt,
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[arg(long)]
    pub rho_c: u64,
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Subcommand)]
pub enum VerdictCommand {
    /// (a + b)^n = U(a, b)
    Eq2(PairArgs),
    /// (a + b + c)^n = U(a, b, c), case A
    Eq3(TripleArgs),
    /// Case-B exponent profile for a given rho_c
    Exponents(ExponentArgs),
    /// Case-B exponent bookkeeping for one triple
    CaseBCheck(TripleArgs),
}

#[derive(Debug, Args)]
pub struct U2ScanArgs {
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Restrict to a, b, a + b all prime to n
    #[arg(long)]
    pub case_a: bool,
    #[arg(long)]
    pub forbid_a_zero: bool,
    #[arg(long)]
    pub forbid_b_zero: bool,
    #[arg(long)]
    pub forbid_sum_zero: bool,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Exit with code 4 when any witness is found
    #[arg(long)]
    pub expect_empty: bool,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct QuadraticScanArgs {
    #[arg(long, value_parser = parse_prime)]
    pub n: OddPrime,
    #[arg(long)]
    pub expect_empty: bool,
    #[command(flatten)]
    pub format: FormatArg,
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    /// Residue pairs (a, b) mod n^k with n^k | U(a, b)
    U2(U2ScanArgs),
    /// Zeros of a^2 + ab + b^2 mod n
    Quadratic(QuadraticScanArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Reduced samples (default)
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Full sample sizes
    #[arg(long)]
    pub full: bool,
    /// Run only one claim
    #[arg(long)]
    pub claim: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub format: FormatArg,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let code = match e {
        Error::Domain(_) => EXIT_USAGE,
        Error::Precondition(_) | Error::Inconsistency(_) => EXIT_PRECONDITION,
        Error::Budget { .. } => EXIT_BUDGET,
    };
    Outcome::fail(code, format!("error: {e}"))
}

struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn new() -> Self {
        Inputs(BTreeMap::new())
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.into(), value.to_string());
        self
    }
}

fn emit(command: &str, inputs: Inputs, result: Value, started: Instant, format: Format) -> Result<String, Outcome> {
    let envelope = ReportEnvelope {
        command: command.into(),
        inputs: inputs.0,
        result,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    match format {
        Format::Json => Ok(report::json(&envelope)),
        Format::Text => Ok(report::text(&envelope)),
        Format::Csv => Err(Outcome::fail(EXIT_USAGE, "error: csv output is only available for `scan u2`")),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payloads serialize")
}

fn cmd_compute(args: ComputeArgs) -> Result<String, Outcome> {
    let started = Instant::now();
    let mut inputs = Inputs::new()
        .with("a", &args.a)
        .with("b", &args.b)
        .with("n", args.n);
    let result = match &args.c {
        None => {
            let p = BinomialPair::new(args.a.clone(), args.b.clone(), args.n);
            let u = truncated2_direct(&p);
            let mut result = json!({ "u": u.to_string() });
            if args.all_forms {
                let mut forms = serde_json::Map::new();
                forms.insert("direct".into(), json!(u.to_string()));
                for form in SeriesForm::ALL {
                    forms.insert(form.name().into(), json!(truncated2_series(&p, form).to_string()));
                }
                result["forms"] = Value::Object(forms);
            }
            result
        }
        Some(c) => {
            inputs = inputs.with("c", c);
            let t = TrinomialTriple::new(args.a.clone(), args.b.clone(), c.clone(), args.n);
            let u = truncated3(&t);
            let mut result = json!({ "u": u.to_string() });
            if args.all_forms {
                let e = args.n.get();
                let powers = t.sum().pow(e) - t.a.pow(e) - t.b.pow(e) - t.c.pow(e);
                result["forms"] = json!({
                    "decomposed": u.to_string(),
                    "power_difference": powers.to_string(),
                    "U(a,b)": truncated2_direct(&t.head_pair()).to_string(),
                    "U(a+b,c)": truncated2_direct(&t.tail_pair()).to_string(),
                });
            }
            result
        }
    };
    emit("compute", inputs, result, started, args.format.format)
}

fn triple_inputs(args: &TripleArgs) -> Inputs {
    Inputs::new()
        .with("a", &args.a)
        .with("b", &args.b)
        .with("c", &args.c)
        .with("n", args.n)
}

fn cmd_verdict(cmd: VerdictCommand) -> Result<String, Outcome> {
    let started = Instant::now();
    match cmd {
        VerdictCommand::Eq2(args) => {
            let p = BinomialPair::new(args.a.clone(), args.b.clone(), args.n);
            let verdict = binomial_equation_verdict(&p);
            let mut result = to_value(&verdict);
            if let Ok(conditions) = necessary_conditions_2(&p) {
                result["conditions"] = to_value(&conditions);
            }
            let inputs = Inputs::new().with("a", &args.a).with("b", &args.b).with("n", args.n);
            emit("verdict eq2", inputs, result, started, args.format.format)
        }
        VerdictCommand::Eq3(args) => {
            let t = TrinomialTriple::new(args.a.clone(), args.b.clone(), args.c.clone(), args.n);
            let case = classify_divisibility_case(&t).map_err(|e| error_outcome(&e))?;
            if let DivisibilityCase::CaseB { variable, .. } = case {
                return Err(Outcome::fail(
                    EXIT_PRECONDITION,
                    format!("error: precondition failed: n divides {}; this is case B, use `verdict case-b-check`", variable.name()),
                ));
            }
            let verdict = case_a_verdict(&t).map_err(|e| error_outcome(&e))?;
            let mut result = to_value(&verdict);
            result["case"] = to_value(&case);
            emit("verdict eq3", triple_inputs(&args), result, started, args.format.format)
        }
        VerdictCommand::Exponents(args) => {
            let profile = case_b_exponents(args.rho_c, args.n).map_err(|e| error_outcome(&e))?;
            let inputs = Inputs::new().with("rho_c", args.rho_c).with("n", args.n);
            emit("verdict exponents", inputs, to_value(&profile), started, args.format.format)
        }
        VerdictCommand::CaseBCheck(args) => {
            let t = TrinomialTriple::new(args.a.clone(), args.b.clone(), args.c.clone(), args.n);
            let report = case_b_consistency_check(&t).map_err(|e| error_outcome(&e))?;
            let mut result = to_value(&report);
            result["exponents_match"] = json!(report.exponents_match());
            emit("verdict case-b-check", triple_inputs(&args), result, started, args.format.format)
        }
    }
}

fn budget_from_env() -> Result<u128, Outcome> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_BUDGET_CELLS),
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Outcome::fail(EXIT_USAGE, format!("error: {BUDGET_ENV}={raw:?} is not a cell count"))
        }),
    }
}

fn cmd_scan(cmd: ScanCommand) -> Result<Outcome, Outcome> {
    let started = Instant::now();
    match cmd {
        ScanCommand::U2(args) => {
            let constraints = if args.case_a {
                ScanConstraints::case_a()
            } else {
                ScanConstraints {
                    forbid_a_zero: args.forbid_a_zero,
                    forbid_b_zero: args.forbid_b_zero,
                    forbid_sum_zero_mod_n: args.forbid_sum_zero,
                }
            };
            let options = ScanOptions { budget_cells: budget_from_env()?, workers: args.workers };
            let report = scan_divisibility(args.n, args.k, constraints, options).map_err(|e| error_outcome(&e))?;
            let stdout = match args.format.format {
                Format::Csv => report::witnesses_csv(&report),
                format => {
                    let inputs = Inputs::new()
                        .with("n", args.n)
                        .with("k", args.k)
                        .with("forbid_a_zero", constraints.forbid_a_zero)
                        .with("forbid_b_zero", constraints.forbid_b_zero)
                        .with("forbid_sum_zero_mod_n", constraints.forbid_sum_zero_mod_n)
                        .with("workers", args.workers);
                    emit("scan u2", inputs, to_value(&report), started, format)?
                }
            };
            let code = if args.expect_empty && !report.witnesses.is_empty() { EXIT_EXPECTATION } else { EXIT_OK };
            let stderr = if code == EXIT_EXPECTATION {
                format!("expectation violated: {} witnesses found\n", report.witnesses.len())
            } else {
                String::new()
            };
            Ok(Outcome { code, stdout, stderr })
        }
        ScanCommand::Quadratic(args) => {
            let table = scan_quadratic(args.n);
            let mut result = to_value(&table);
            result["zero_set"] = to_value(&table.zero_set());
            let stdout = emit("scan quadratic", Inputs::new().with("n", args.n), result, started, args.format.format)?;
            let code = if args.expect_empty && !table.is_empty() { EXIT_EXPECTATION } else { EXIT_OK };
            Ok(Outcome { code, stdout, stderr: String::new() })
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, Outcome> {
    let started = Instant::now();
    let config = if args.full { SuiteConfig::full(args.seed) } else { SuiteConfig::quick(args.seed) };
    let only = match &args.claim {
        None => None,
        Some(key) => Some(ClaimId::from_key(key).ok_or_else(|| {
            let keys: Vec<_> = ClaimId::ALL.iter().map(|c| c.key()).collect();
            Outcome::fail(EXIT_USAGE, format!("error: unknown claim {key:?}; known claims: {}", keys.join(", ")))
        })?),
    };
    let outcomes = run_suite(&config, only);
    let all_passed = outcomes.iter().all(|o| o.passed);
    let code = if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let stdout = match args.format.format {
        Format::Text => {
            let mut out = String::new();
            for o in &outcomes {
                out.push_str(&format!(
                    "{} [{}] {}: {} ({:.1} ms)\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.claim.key(),
                    o.title,
                    o.detail,
                    o.elapsed_ms
                ));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            out.push_str(&format!("{passed}/{} claims passed\n", outcomes.len()));
            out
        }
        format => {
            let inputs = Inputs::new()
                .with("mode", if args.full { "full" } else { "quick" })
                .with("seed", args.seed)
                .with("claim", args.claim.as_deref().unwrap_or("all"));
            let result = json!({ "all_passed": all_passed, "claims": to_value(&outcomes) });
            emit("verify", inputs, result, started, format)?
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(rendered),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args).map(Outcome::ok),
        Command::Verdict(cmd) => cmd_verdict(cmd).map(Outcome::ok),
        Command::Scan(cmd) => cmd_scan(cmd),
        Command::Verify(args) => cmd_verify(args),
    };
    result.unwrap_or_else(|o| o)
}
