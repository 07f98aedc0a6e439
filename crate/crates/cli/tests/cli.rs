use std::path::PathBuf;
use std::process::Command;

use bigalois_cli::{run_args, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_UNDETERMINED};
use bigalois_core::format::{parse_matrix_file, print_matrix_file};
use bigalois_core::scalars::FieldTower;

// (golden file, args). Paths are relative to the package root, which is the
// working directory cargo uses for integration tests.
const GOLDEN: &[(&str, &[&str])] = &[
    ("bigalois_e1_e1.txt", &["bigalois", "tests/fixtures/e1.txt", "tests/fixtures/e1.txt", "--no-maps"]),
    ("bigalois_e1_e1.json", &["--format", "json", "bigalois", "tests/fixtures/e1.txt", "tests/fixtures/e1.txt", "--no-maps"]),
    ("bigalois_diag.txt", &["bigalois", "tests/fixtures/diag_1_m1.txt", "tests/fixtures/diag_1_m1.txt"]),
    ("present_eq2.txt", &["present", "tests/fixtures/eq2.txt"]),
    ("present_trace1_hopf.json", &["--format", "json", "present", "tests/fixtures/trace1.txt", "--hopf"]),
    ("fusion_generic.txt", &["fusion", "U2", "U3"]),
    ("fusion_root5.txt", &["fusion", "--regime", "root5", "U4", "U1"]),
    ("fusion_contradiction.json", &["--format", "json", "fusion", "--regime", "root4", "--contradiction"]),
    ("verify_congruence.txt", &["verify", "--kind", "congruence", "tests/fixtures/id2.txt", "tests/fixtures/sqrt2.txt", "--witness", "tests/fixtures/sqrt2.txt"]),
    ("verify_cqg.txt", &["verify", "--kind", "cqg", "tests/fixtures/e1.txt", "--witness", "tests/fixtures/ie1.txt"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> bigalois_cli::Outcome {
    run_args(std::iter::once("bigalois").chain(args.iter().copied()))
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN {
        let out = run(args);
        assert_ne!(out.code, EXIT_INPUT, "{name}: {}", out.output);
        let path = golden_dir().join(name);
        if update {
            std::fs::write(&path, &out.output).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != out.output {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?} (rerun with UPDATE_GOLDEN=1 after checking)");
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_bigalois");
    let args = ["bigalois", "tests/fixtures/e1.txt", "tests/fixtures/e1.txt", "--no-maps"];
    let a = Command::new(bin).args(args).output().unwrap();
    let b = Command::new(bin).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let golden = std::fs::read(golden_dir().join("bigalois_e1_e1.txt")).unwrap();
    assert_eq!(a.stdout, golden);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["present", "tests/fixtures/singular.txt"], EXIT_INPUT),
        (&["present", "tests/fixtures/missing.txt"], EXIT_INPUT),
        (&["bogus"], EXIT_INPUT),
        (&["bigalois", "tests/fixtures/e1.txt", "tests/fixtures/id2.txt", "--no-maps"], EXIT_NEGATIVE),
        (&["fusion", "--regime", "root5", "U3", "U3"], EXIT_UNDETERMINED),
        (&["fusion", "--regime", "root1", "U1"], EXIT_INPUT),
        (&["verify", "--kind", "congruence", "tests/fixtures/eq2.txt", "tests/fixtures/id2.txt"], EXIT_NEGATIVE),
        (&["verify", "--kind", "congruence", "tests/fixtures/e1.txt", "tests/fixtures/sl2.txt"], EXIT_NEGATIVE),
        (&["verify", "--kind", "congruence", "tests/fixtures/id2.txt", "tests/fixtures/diag_1_2.txt"], EXIT_UNDETERMINED),
        (&["verify", "--kind", "cqg", "tests/fixtures/diag_1_m1.txt", "--witness", "tests/fixtures/id2.txt"], EXIT_NEGATIVE),
        (&["verify", "--kind", "star", "tests/fixtures/e1.txt", "--witness", "tests/fixtures/e1.txt"], EXIT_NEGATIVE),
        (&["verify", "--kind", "automorphism", "tests/fixtures/e1.txt", "--witness", "tests/fixtures/sl2.txt"], EXIT_OK),
        (&["verify", "--kind", "congruence", "tests/fixtures/e1.txt"], EXIT_INPUT),
        (&["verify", "--kind", "cqg", "tests/fixtures/e1.txt"], EXIT_INPUT),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.code, *code, "{args:?}\n{}", out.output);
    }
}

#[test]
fn errors_are_located() {
    let out = run(&["present", "tests/fixtures/singular.txt"]);
    assert!(out.output.contains("line"), "{}", out.output);
}

#[test]
fn matrix_files_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        let base = FieldTower::rationals_with_cap(3);
        let Ok(file) = parse_matrix_file(&src, &base) else { continue };
        let printed = print_matrix_file(&file.matrix);
        let again = parse_matrix_file(&printed, &base).unwrap();
        assert_eq!(again.matrix, file.matrix, "{}", path.display());
        assert_eq!(print_matrix_file(&again.matrix), printed);
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = run(&["--format", "json", "fusion", "U1", "U1"]);
    assert!(!plain.output.contains("elapsed_ms"));
    let timed = run(&["--format", "json", "--timing", "fusion", "U1", "U1"]);
    assert!(timed.output.contains("elapsed_ms"));
}
