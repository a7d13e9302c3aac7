use std::path::PathBuf;

use nilseq_cli::{run, Env, Outcome, Report, EXIT_BUDGET, EXIT_OK, EXIT_PRECISION, EXIT_USAGE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn nilseq_with(env: &Env, args: &[&str]) -> Outcome {
    let mut argv = vec!["nilseq"];
    argv.extend_from_slice(args);
    run(argv, env)
}

fn nilseq(args: &[&str]) -> Outcome {
    nilseq_with(&Env::default(), args)
}

fn report(o: &Outcome) -> Report {
    assert_eq!(o.code, EXIT_OK, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{}-{name}", std::process::id()))
}

fn verify(o: &Outcome, name: &str) -> Outcome {
    let path = scratch(name);
    std::fs::write(&path, &o.stdout).unwrap();
    nilseq(&["verify", "--report", path.to_str().unwrap()])
}

#[test]
fn classify_powers_of_two_file() {
    let f = fixture("powers2.aut");
    let r = report(&nilseq(&["sparsity", "classify", "--file", &f]));
    assert_eq!(r.results["classification"], "VerySparse");
    assert_eq!(r.results["rank"], 1);
    assert_eq!(r.certificates.len(), 1);
    assert_eq!(r.certificates[0].kind(), "very_sparse");
}

#[test]
fn gp_file_at_zero() {
    let f = fixture("ex1.gp");
    let r = report(&nilseq(&["gp", "eval", "--expr-file", &f, "--n", "0"]));
    assert_eq!(r.results["exact_integer"], "2");
}

#[test]
fn usage_errors_exit_one() {
    let o = nilseq(&["fib", "--no-such-flag"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stdout.is_empty());
    assert!(o.stderr.contains("Usage"));
    let o = nilseq(&["sparsity", "classify"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.starts_with("error:"));
}

#[test]
fn help_and_version_exit_zero() {
    let o = nilseq(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("demo"));
    let o = nilseq(&["--version"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains(nilseq_cli::VERSION));
}

#[test]
fn max_bits_flag_beats_environment() {
    let env = Env {
        max_bits: Some("300".into()),
    };
    let r = report(&nilseq_with(&env, &["gp", "eval", "--expr", "(sqrt 2)", "--n", "0"]));
    assert_eq!(r.precision.max_bits, 300);
    let r = report(&nilseq_with(
        &env,
        &["--max-bits", "200", "gp", "eval", "--expr", "(sqrt 2)", "--n", "0"],
    ));
    assert_eq!(r.precision.max_bits, 200);
    let r = report(&nilseq(&["gp", "eval", "--expr", "(sqrt 2)", "--n", "0"]));
    assert_eq!(r.precision.max_bits, nilseq_cli::DEFAULT_MAX_BITS);
    let bad = Env {
        max_bits: Some("abc".into()),
    };
    assert_eq!(nilseq_with(&bad, &["fib", "--horizon", "10"]).code, EXIT_USAGE);
}

#[test]
fn undecidable_floor_exits_two() {
    let o = nilseq(&[
        "--max-bits",
        "64",
        "gp",
        "eval",
        "--expr",
        "(floor (- (* (sqrt 2) (sqrt 3)) (sqrt 6)))",
        "--n",
        "0",
    ]);
    assert_eq!(o.code, EXIT_PRECISION);
    assert!(o.stderr.contains("precision exhausted"));
}

#[test]
fn budgets_exit_three() {
    let o = nilseq(&[
        "gp",
        "kernel",
        "--expr",
        "(floor (* (sqrt 2) n))",
        "--modulus",
        "2",
        "--budget",
        "10",
    ]);
    assert_eq!(o.code, EXIT_BUDGET);
    let o = nilseq(&["automaton", "reverse", "--builtin", "thue-morse", "--budget", "1"]);
    assert_eq!(o.code, EXIT_BUDGET);
}

#[test]
fn csv_only_for_series() {
    let o = nilseq(&["--format", "csv", "fib", "--horizon", "100"]);
    assert_eq!(o.code, EXIT_OK);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some("index,term,member,normalized"));
    assert_eq!(lines.next(), Some("0,0,true,0.000000000000"));
    let o = nilseq(&["--format", "csv", "gp", "eval", "--expr", "n", "--n", "3"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn reports_do_not_depend_on_workers() {
    for args in [
        &["fib", "--horizon", "10^4"][..],
        &["orbit", "heis", "--to", "200"],
        &["pisot", "gpset", "--qmax", "2000"],
        &["sparsity", "growth", "--builtin", "baum-sweet", "--j-max", "12"],
    ] {
        let mut one = vec!["--workers", "1"];
        one.extend_from_slice(args);
        let mut two = vec!["--workers", "2"];
        two.extend_from_slice(args);
        let (a, b) = (nilseq(&one), nilseq(&two));
        assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let r = report(&nilseq(&["fib", "--horizon", "100"]));
    assert!(r.timing_ms.is_none());
    let o = nilseq(&["--timing", "fib", "--horizon", "100"]);
    let r = report(&o);
    assert!(r.timing_ms.is_some());
    assert_eq!(r.command, vec!["fib", "--horizon", "100"]);
}

#[test]
fn digest_covers_file_contents() {
    let a = scratch("a.gp");
    std::fs::write(&a, "(floor (* (sqrt 2) n))").unwrap();
    let r1 = report(&nilseq(&["gp", "eval", "--expr-file", a.to_str().unwrap(), "--n", "5"]));
    std::fs::write(&a, "(floor (* (sqrt 3) n))").unwrap();
    let r2 = report(&nilseq(&["gp", "eval", "--expr-file", a.to_str().unwrap(), "--n", "5"]));
    assert_ne!(r1.inputs_digest, r2.inputs_digest);
    assert_eq!(r1.command, r2.command);
}

#[test]
fn verify_round_trip_and_tamper() {
    let o = nilseq(&["pisot", "bestapprox", "--qmax", "5000"]);
    let r = report(&o);
    assert!(!r.certificates.is_empty());
    let v = report(&verify(&o, "best.json"));
    assert_eq!(v.results["failed"], 0);

    let mut doc: Value = serde_json::from_str(&o.stdout).unwrap();
    let records = &mut doc["certificates"][0]["data"]["records"];
    let last = records.as_array().unwrap().len() - 1;
    records[last][1] = Value::from(records[last][1].as_i64().unwrap() + 1);
    let tampered = Outcome {
        code: 0,
        stdout: serde_json::to_string(&doc).unwrap(),
        stderr: String::new(),
    };
    let v = verify(&tampered, "best-tampered.json");
    assert_eq!(v.code, EXIT_USAGE);
    let rep: Report = serde_json::from_str(&v.stdout).unwrap();
    assert_eq!(rep.results["failed"], 1);
    assert_eq!(rep.results["checks"][0]["ok"], false);
}

#[test]
fn missing_report_is_a_usage_error() {
    let o = nilseq(&["verify", "--report", "/nonexistent/report.json"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn subcommand_certificates_verify() {
    let pf = fixture("powers2.aut");
    let gf = fixture("ex1.gp");
    let runs: Vec<Vec<&str>> = vec![
        vec!["automaton", "pump", "--builtin", "powers:2", "--value", "1"],
        vec!["sparsity", "classify", "--builtin", "baum-sweet"],
        vec!["sparsity", "classify", "--file", &pf],
        vec![
            "sparsity",
            "ips",
            "--builtin",
            "baum-sweet",
            "--horizon",
            "500",
            "--depth",
            "6",
        ],
        vec!["sparsity", "ipplus", "--builtin", "contains:2:11", "--depth", "6"],
        vec![
            "sparsity",
            "normalize",
            "--builtin",
            "pattern:2:1 (0)* 1;(1)* 0",
            "--bound",
            "2^12",
        ],
        vec!["gp", "eval", "--expr-file", &gf, "--n", "7"],
        vec![
            "gp",
            "weakper",
            "--expr",
            "(floor (+ (* 3/7 n n) 1/2))",
            "--modulus",
            "5",
            "--q-max",
            "16",
            "--offset-max",
            "64",
            "--horizon",
            "2000",
        ],
        vec!["fib", "--horizon", "10^4"],
        vec!["ip", "check", "--builtin", "avoid:2:11", "--power", "4", "--depth", "8"],
        vec!["ip", "ips", "--depth", "5"],
        vec!["orbit", "heis", "--n", "1234"],
        vec!["orbit", "scan", "--suffix", "101"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let o = nilseq(args);
        let r = report(&o);
        assert!(!r.certificates.is_empty(), "{args:?}");
        let v = verify(&o, &format!("sub-{i}.json"));
        let rep = report(&v);
        assert_eq!(rep.results["failed"], 0, "{args:?}: {}", v.stdout);
    }
}

#[test]
fn demos_run_and_verify() {
    for name in ["fib", "pisot", "heisenberg", "bfree", "dichotomy"] {
        let o = nilseq(&["demo", name]);
        let r = report(&o);
        assert_eq!(r.results["demo"], name);
        let v = report(&verify(&o, &format!("demo-{name}.json")));
        assert_eq!(v.results["failed"], 0, "{name}");
        assert_eq!(v.results["certificates"], r.certificates.len());
    }
}
