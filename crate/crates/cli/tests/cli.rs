use std::path::PathBuf;
use std::process::Command as Process;

use saito_cli::{parse_curve, run_corpus, run_report, CliError, Command};

const CUSP: &str = "\
[curve]
name = cusp
f = y^2 - x^3
precision = 16

[branch]
x = t^2
y = t^3
";

const FAMILY: &str = "\
[curve]
name = family-3-10-2
f = y^3 - x^10 + x^8*y
precision = 24

[branch]
x = t^3
y = t^10 - 1/3*t^14
";

/// Scratch directory that cleans up after itself.
struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("saito-cli-test-{}-{}", tag, std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, content).unwrap();
        path
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn loads_the_family_fixture() {
    let cf = parse_curve(FAMILY, "fallback").unwrap();
    assert_eq!(cf.name, "family-3-10-2");
    assert_eq!(cf.branches.len(), 1);
    assert_eq!(cf.precision, Some(24));
    let f = cf.f.as_ref().unwrap().eval_bi(24);
    assert_eq!(f.multiplicity(), Some(3));
}

#[test]
fn rejects_malformed_files() {
    assert!(matches!(
        parse_curve("[curve]\nf = y^^2\n", "x"),
        Err(CliError::Syntax { .. })
    ));
    assert!(matches!(
        parse_curve("f = y\n", "x"),
        Err(CliError::Syntax { .. })
    ));
    assert!(matches!(parse_curve("# empty\n", "x"), Err(CliError::MissingCurve)));
    assert!(matches!(
        parse_curve("[curve]\nbogus = 1\n", "x"),
        Err(CliError::Syntax { .. })
    ));
}

#[test]
fn missing_branch_is_an_input_error() {
    let cf = parse_curve("[curve]\nf = y^2 - x^3\n", "nobranch").unwrap();
    let err = run_report(&cf, Command::Saito, None).unwrap_err();
    assert!(matches!(err, CliError::MissingBranch { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn incidence_failure_is_detected() {
    let text = "[curve]\nf = y^2 - x^3\n\n[branch]\nx = t^3\ny = t^4\n";
    let cf = parse_curve(text, "bad").unwrap();
    let err = run_report(&cf, Command::Invariants, None).unwrap_err();
    assert!(matches!(err, CliError::IncidenceFailed { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn reports_are_deterministic() {
    let cf = parse_curve(CUSP, "cusp").unwrap();
    let a = run_report(&cf, Command::All, None).unwrap().machine_format();
    let b = run_report(&cf, Command::All, None).unwrap().machine_format();
    assert_eq!(a, b);
    assert!(a.contains("invariants.mu = 2\n"), "{a}");
    assert!(a.contains("invariants.tau = 2\n"));
    assert!(a.contains("semigroup.1.gens = 2,3\n"));
    assert!(a.contains("invariants.lambda.gaps = -\n"));
}

#[test]
fn verify_round_trips_the_printed_basis_and_checks_expectations() {
    let text = "\
[curve]
name = cusp
f = y^2 - x^3
precision = 16
expected.invariants.mu = 2
expected.invariants.tau = 2
expected.invariants.routes.agree = true

[branch]
x = t^2
y = t^3
";
    let cf = parse_curve(text, "cusp").unwrap();
    let report = run_report(&cf, Command::Verify, None).unwrap();
    assert_eq!(report.sections.get("verified").map(String::as_str), Some("true"));

    let corrupted = text.replace("expected.invariants.mu = 2", "expected.invariants.mu = 3");
    let cf = parse_curve(&corrupted, "cusp").unwrap();
    let err = run_report(&cf, Command::Verify, None).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    match err {
        CliError::Mismatch { failures } => {
            assert_eq!(failures.len(), 1);
            assert!(failures[0].contains("invariants.mu"));
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn corpus_counts_failures_as_data() {
    let scratch = Scratch::new("corpus");
    scratch.write(
        "good.curve",
        "[curve]\nf = y^2 - x^3\nprecision = 16\nexpected.invariants.mu = 2\n\n[branch]\nx = t^2\ny = t^3\n",
    );
    scratch.write(
        "corrupt.curve",
        "[curve]\nf = y^2 - x^3\nprecision = 16\nexpected.invariants.mu = 5\n\n[branch]\nx = t^2\ny = t^3\n",
    );
    scratch.write("ignored.txt", "not a curve file");
    let summary = run_corpus(&scratch.0).unwrap();
    assert_eq!(summary.entries.len(), 2);
    assert_eq!(summary.failed(), 1);
    assert_eq!(summary.entries[0].0, "corrupt");
    assert!(summary.entries[0].1.is_err());
    assert_eq!(summary.entries[1].0, "good");
    assert!(summary.entries[1].1.is_ok());
    let machine = summary.machine_format();
    assert!(machine.contains("corpus.good = pass\n"));
    assert!(machine.contains("corpus.total = 2\n"));
}

#[test]
fn corpus_on_an_empty_directory_is_empty_and_ok() {
    let scratch = Scratch::new("empty");
    let summary = run_corpus(&scratch.0).unwrap();
    assert!(summary.entries.is_empty());
    assert_eq!(summary.machine_format(), "corpus.failed = 0\ncorpus.passed = 0\ncorpus.total = 0\n");
}

#[test]
fn binary_reports_and_exit_codes() {
    let scratch = Scratch::new("bin");
    let input = scratch.write("cusp.curve", CUSP);
    let out = Process::new(env!("CARGO_BIN_EXE_saito"))
        .args(["invariants", "--input"])
        .arg(&input)
        .args(["--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("invariants.mu = 2\n"), "{stdout}");
    assert!(!stdout.contains("ms"), "machine format must not carry timings");

    let missing = Process::new(env!("CARGO_BIN_EXE_saito"))
        .args(["invariants", "--input", "/nonexistent/xyz.curve"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let empty = scratch.0.join("emptydir");
    std::fs::create_dir_all(&empty).unwrap();
    let corpus = Process::new(env!("CARGO_BIN_EXE_saito"))
        .args(["corpus", "--dir"])
        .arg(&empty)
        .output()
        .unwrap();
    assert_eq!(corpus.status.code(), Some(0));
}
