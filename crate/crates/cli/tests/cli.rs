use std::process::Command;

use truncbin_cli::report::ReportEnvelope;
use truncbin_cli::{run, Outcome};
use truncbin_core::verify::ClaimOutcome;
use truncbin_core::{
    scan_divisibility, OddPrime, ScanConstraints, ScanOptions, ScanReport, Verdict, VerdictKind,
};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("truncbin").chain(args.iter().copied()))
}

fn envelope(args: &[&str]) -> ReportEnvelope {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--format", "json"]);
    let out = cli(&full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid json envelope")
}

#[test]
fn compute_values() {
    let env = envelope(&["compute", "--a", "1", "--b", "1", "--n", "3"]);
    assert_eq!(env.command, "compute");
    assert_eq!(env.result["u"], "6");
    let env = envelope(&["compute", "--a", "1", "--b", "1", "--c", "4", "--n", "3"]);
    assert_eq!(env.result["u"], "150");
    let env = envelope(&["compute", "--a", "1", "--b", "-1", "--n", "5"]);
    assert_eq!(env.result["u"], "0");
    assert_eq!(env.inputs["b"], "-1");
}

#[test]
fn compute_all_forms_agree() {
    let env = envelope(&["compute", "--a", "-4", "--b", "7", "--n", "11", "--all-forms"]);
    let forms = env.result["forms"].as_object().unwrap();
    assert_eq!(forms.len(), 4);
    for v in forms.values() {
        assert_eq!(v, &env.result["u"]);
    }
}

#[test]
fn big_integers_echo_as_decimal_strings() {
    let a = "123456789012345678901234567890";
    let env = envelope(&["compute", "--a", a, "--b", "1", "--n", "13"]);
    assert_eq!(env.inputs["a"], a);
    assert!(env.result["u"].is_string());
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(cli(&["compute", "--a", "1", "--b", "1", "--n", "9"]).code, 2);
    assert_eq!(cli(&["compute", "--a", "1", "--b", "1", "--n", "2"]).code, 2);
    assert_eq!(cli(&["compute", "--a", "x", "--b", "1", "--n", "3"]).code, 2);
    assert_eq!(cli(&["compute", "--a", "1", "--n", "3"]).code, 2);
    assert_eq!(cli(&["compute", "--a", "1", "--b", "1", "--n", "3", "--format", "csv"]).code, 2);
    assert_eq!(cli(&["verify", "--claim", "no-such-claim"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn verdict_eq2() {
    let env = envelope(&["verdict", "eq2", "--a", "1", "--b", "1", "--n", "3"]);
    let verdict: Verdict = serde_json::from_value({
        let mut v = env.result.clone();
        v.as_object_mut().unwrap().remove("conditions");
        v
    })
    .unwrap();
    assert_eq!(verdict.kind, VerdictKind::Incompatible);
    assert_eq!(env.result["evidence"][0]["value"]["value"], "2");

    let env = envelope(&["verdict", "eq2", "--a", "3", "--b", "-3", "--n", "5"]);
    assert_eq!(env.result["kind"], "trivial_only");
}

#[test]
fn verdict_eq3_case_a() {
    let env = envelope(&["verdict", "eq3", "--a", "1", "--b", "1", "--c", "4", "--n", "3"]);
    assert_eq!(env.result["kind"], "incompatible");
    assert_eq!(env.result["evidence"][2]["name"], "v_n(U(a,b))");
    assert_eq!(env.result["evidence"][2]["value"]["value"]["exponent"], 1);
    assert_eq!(env.result["tiers"].as_array().unwrap().len(), 2);

    let env = envelope(&["verdict", "eq3", "--a", "1", "--b", "2", "--c", "11", "--n", "7"]);
    assert_eq!(env.result["tiers"][0]["kind"], "undetermined");
    assert_eq!(env.result["tiers"][1]["kind"], "incompatible");
}

#[test]
fn verdict_preconditions_exit_3() {
    // not case A: 3 | b
    let out = cli(&["verdict", "eq3", "--a", "1", "--b", "3", "--c", "2", "--n", "3"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("case B"), "{}", out.stderr);
    // 2n does not divide the sum
    assert_eq!(cli(&["verdict", "eq3", "--a", "1", "--b", "1", "--c", "5", "--n", "3"]).code, 3);
    // two multiples of n
    assert_eq!(cli(&["verdict", "eq3", "--a", "3", "--b", "6", "--c", "1", "--n", "3"]).code, 3);
    assert_eq!(cli(&["verdict", "exponents", "--rho-c", "0", "--n", "7"]).code, 3);
    assert_eq!(cli(&["verdict", "case-b-check", "--a", "1", "--b", "1", "--c", "4", "--n", "3"]).code, 3);
}

#[test]
fn verdict_exponents_and_case_b() {
    let env = envelope(&["verdict", "exponents", "--rho-c", "1", "--n", "5"]);
    assert_eq!(
        (env.result["rho_c"].as_u64(), env.result["rho_beta"].as_u64(), env.result["rho_q"].as_u64()),
        (Some(1), Some(0), Some(4))
    );
    let env = envelope(&["verdict", "case-b-check", "--a", "1", "--b", "80", "--c", "81", "--n", "3"]);
    assert_eq!(env.result["exponents_match"], false);
    assert_eq!(env.result["rho_q"], 4);
    assert_eq!(env.result["expected"]["rho_q"], 11);
    let env = envelope(&["verdict", "case-b-check", "--a", "1", "--b", "8", "--c", "3", "--n", "3"]);
    assert_eq!(env.result["exponents_match"], true);
}

#[test]
fn scan_json_round_trips() {
    let env = envelope(&["scan", "u2", "--n", "7", "--k", "2", "--case-a"]);
    let report: ScanReport = serde_json::from_value(env.result).unwrap();
    let direct = scan_divisibility(
        OddPrime::new(7).unwrap(),
        2,
        ScanConstraints::case_a(),
        ScanOptions::default(),
    )
    .unwrap();
    assert_eq!(report, direct);
    assert_eq!(report.witnesses[0], (1, 2));
}

#[test]
fn scan_csv_layout() {
    let out = cli(&["scan", "u2", "--n", "7", "--k", "2", "--case-a", "--format", "csv"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("n,k,a_res,b_res"));
    assert_eq!(lines.next(), Some("7,2,1,2"));
    let empty = cli(&["scan", "u2", "--n", "11", "--k", "2", "--case-a", "--format", "csv"]);
    assert_eq!(empty.stdout, "n,k,a_res,b_res\n");
}

#[test]
fn scan_expectations() {
    assert_eq!(cli(&["scan", "u2", "--n", "11", "--k", "2", "--case-a", "--expect-empty"]).code, 0);
    assert_eq!(cli(&["scan", "u2", "--n", "7", "--k", "2", "--case-a", "--expect-empty"]).code, 4);
    assert_eq!(cli(&["scan", "u2", "--n", "7", "--k", "2", "--case-a"]).code, 0);
    assert_eq!(cli(&["scan", "quadratic", "--n", "5", "--expect-empty"]).code, 0);
    assert_eq!(cli(&["scan", "quadratic", "--n", "7", "--expect-empty"]).code, 4);
    let env = envelope(&["scan", "quadratic", "--n", "5"]);
    assert_eq!(env.result["zero_set"].as_array().unwrap().len(), 0);
}

#[test]
fn scan_budget_exceeded_exits_5() {
    assert_eq!(cli(&["scan", "u2", "--n", "997", "--k", "3"]).code, 5);
}

#[test]
fn verify_single_claim() {
    let out = cli(&["verify", "--claim", "expansion-11"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("EQUAL"), "{}", out.stdout);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 1);
}

#[test]
fn verify_quick_json() {
    let env = envelope(&["verify", "--quick", "--seed", "11"]);
    assert_eq!(env.result["all_passed"], true);
    let claims: Vec<ClaimOutcome> = serde_json::from_value(env.result["claims"].clone()).unwrap();
    assert_eq!(claims.len(), 11);
    assert_eq!(env.inputs["seed"], "11");
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_truncbin"))
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| binary().args(args).output().unwrap().status.code();
    assert_eq!(status(&["compute", "--a", "1", "--b", "1", "--n", "3"]), Some(0));
    assert_eq!(status(&["compute", "--a", "1", "--b", "1", "--n", "4"]), Some(2));
    assert_eq!(status(&["verdict", "exponents", "--rho-c", "0", "--n", "3"]), Some(3));
    assert_eq!(status(&["scan", "u2", "--n", "13", "--case-a", "--expect-empty"]), Some(4));
}

#[test]
fn binary_respects_budget_env() {
    let out = binary()
        .args(["scan", "u2", "--n", "11", "--k", "2"])
        .env("SCAN_BUDGET_CELLS", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("14641"));
    let out = binary()
        .args(["scan", "u2", "--n", "11", "--k", "2"])
        .env("SCAN_BUDGET_CELLS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_prints_text_report() {
    let out = binary().args(["compute", "--a", "1", "--b", "2", "--n", "7"]).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("u: 2058"), "{stdout}");
}
