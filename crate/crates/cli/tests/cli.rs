use std::path::PathBuf;
use std::process::Command as Proc;

use opt_foundry::report::{parse_report, Format};
use opt_foundry::theory::BackendKind;
use opt_foundry_cli::{parse_args, parse_list, run_command, CliError, Command};

fn circuits() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

fn bin() -> Proc {
    let mut p = Proc::new(env!("CARGO_BIN_EXE_opt-foundry"));
    p.env_remove(opt_foundry_cli::SEED_ENV);
    p
}

#[test]
fn list_syntax() {
    assert_eq!(parse_list("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
    assert_eq!(parse_list("2,3").unwrap(), vec![2, 3]);
    assert_eq!(parse_list("1, 4..=5").unwrap(), vec![1, 4, 5]);
    assert!(parse_list("6..2").is_err());
    assert!(parse_list("two").is_err());
}

#[test]
fn defaults_and_flags() {
    let cfg = parse_args(["opt-foundry", "check-postulates", "--seed", "5"]).unwrap();
    assert_eq!(cfg.command, Command::CheckPostulates);
    assert_eq!(cfg.levels, vec![2, 3]);
    assert_eq!(cfg.seed, 5);
    assert_eq!(cfg.format, Format::Json);

    let cfg = parse_args(["opt-foundry", "steer", "--backend", "real", "--outcomes", "4", "--format", "md"]).unwrap();
    assert_eq!(cfg.command, Command::Steer { outcomes: 4 });
    assert_eq!(cfg.backend, Some(BackendKind::RealQT));
    assert_eq!(cfg.format, Format::Markdown);

    let cfg = parse_args(["opt-foundry", "law-check"]).unwrap();
    assert_eq!(cfg.backend, None);
    assert_eq!(cfg.samples, 50);
}

#[test]
fn bad_flags_are_usage_errors() {
    for args in [
        vec!["opt-foundry", "classify", "--n", "x"],
        vec!["opt-foundry", "purify", "--backend", "octonion"],
        vec!["opt-foundry", "check-postulates", "--levels", "0"],
        vec!["opt-foundry", "check-postulates", "--tol", "1e-3"],
    ] {
        let err = parse_args(args.clone()).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{args:?}");
    }
    let mut cfg = parse_args(["opt-foundry", "purify", "--tol=-1"]).unwrap();
    assert!(matches!(run_command(&cfg), Err(CliError::Usage(_))));
    cfg = parse_args(["opt-foundry", "classify", "--n", "1..3"]).unwrap();
    assert!(matches!(run_command(&cfg), Err(CliError::Usage(_))));
}

#[test]
fn seed_recorded_and_output_stable() {
    let args = ["opt-foundry", "purify", "--backend", "complex", "--samples", "4", "--seed", "11"];
    let a = run_command(&parse_args(args).unwrap()).unwrap();
    let b = run_command(&parse_args(args).unwrap()).unwrap();
    assert_eq!(a.text, b.text);
    let rep = parse_report(&a.text).unwrap();
    assert_eq!(rep.seed, Some(11));
    assert_eq!(rep.runtime_ms, None);
    let timed = run_command(&parse_args(["opt-foundry", "classify", "--timing"]).unwrap()).unwrap();
    assert!(timed.report.runtime_ms.is_some());
    assert_eq!(timed.report.seed, Some(2024));
}

#[test]
fn circuit_eval_prints_bell_probability() {
    let file = circuits().join("bell.optc");
    let bindings = circuits().join("bell.json");
    let cfg = parse_args([
        "opt-foundry".as_ref(),
        "circuit".as_ref(),
        "eval".as_ref(),
        file.as_os_str(),
        "--bindings".as_ref(),
        bindings.as_os_str(),
    ])
    .unwrap();
    let out = run_command(&cfg).unwrap();
    assert!(out.report.passed());
    assert_eq!(out.report.notes, vec!["p = 0.500000000000".to_string()]);
}

#[test]
fn circuit_errors_fail_with_location() {
    let dir = std::env::temp_dir().join(format!("opt-foundry-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("broken.optc");
    std::fs::write(&file, "system A = 2;\nlet q = ;\n").unwrap();
    let cfg = parse_args(["opt-foundry".as_ref(), "circuit".as_ref(), "eval".as_ref(), file.as_os_str()]).unwrap();
    let out = run_command(&cfg).unwrap();
    assert_eq!(out.exit_code(), 1);
    assert_eq!(out.report.witnesses[0].coords, vec![2.0, 9.0]);
    let missing = parse_args(["opt-foundry", "circuit", "eval", "/nonexistent.optc"]).unwrap();
    assert_eq!(run_command(&missing).unwrap_err().exit_code(), 2);
}

#[test]
fn purify_and_steer_quantum_pass_classical_fail() {
    for cmd in ["purify", "steer"] {
        for (b, ok) in [("classical", false), ("real", true), ("complex", true)] {
            let cfg = parse_args(["opt-foundry", cmd, "--backend", b, "--samples", "5"]).unwrap();
            let out = run_command(&cfg).unwrap();
            assert_eq!(out.report.passed(), ok, "{cmd} {b}");
            assert!(out.report.is_well_formed());
        }
    }
}

#[test]
fn law_check_every_backend() {
    let out = run_command(&parse_args(["opt-foundry", "law-check", "--samples", "5"]).unwrap()).unwrap();
    assert!(out.report.passed());
    assert_eq!(out.report.samples, 15);
    assert_eq!(out.report.notes.len(), 15);
}

#[test]
fn binary_exit_codes_and_out_file() {
    let st = bin().args(["classify", "--n", "2..3"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let rep = parse_report(std::str::from_utf8(&st.stdout).unwrap()).unwrap();
    assert_eq!(rep.records.len(), 14);

    let st = bin().args(["steer", "--backend", "classical", "--samples", "1"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));

    let st = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));

    let out = std::env::temp_dir().join(format!("opt-foundry-out-{}.md", std::process::id()));
    let st = bin()
        .args(["classify", "--n", "3", "--format", "md", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(st.stdout.is_empty());
    let md = std::fs::read_to_string(&out).unwrap();
    assert!(md.contains("| 3 | OctHerm3 | 9 | 729 | {45, 81, 153} | yes |"));
}

#[test]
fn seed_from_environment() {
    let st = bin()
        .env(opt_foundry_cli::SEED_ENV, "77")
        .args(["purify", "--samples", "1", "--levels", "2"])
        .output()
        .unwrap();
    let rep = parse_report(std::str::from_utf8(&st.stdout).unwrap()).unwrap();
    assert_eq!(rep.seed, Some(77));
}
