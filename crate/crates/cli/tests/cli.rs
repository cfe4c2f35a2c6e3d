use std::path::Path;
use std::process::Command;

use growth_lab_cli::{parse_scenario, CliError, Constraint};

const MINIMAL: &str = "
market.mu.0 = 0.06
market.sigma.0 = 0.2
p = 0.5
grid.t_max = 10
grid.steps = 20
horizons = 2, 4, 6, 8, 10
n_paths = 400
seed = 1
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_growth-lab"))
}

fn config_message(text: &str) -> String {
    match parse_scenario(text, None) {
        Err(CliError::Config(m)) => m,
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

#[test]
fn minimal_scenario_loads() {
    let s = parse_scenario(MINIMAL, None).unwrap();
    assert_eq!(s.schedule.dim(), 1);
    assert!(matches!(s.constraint, Constraint::None));
    assert_eq!(s.horizons.horizons(), &[2.0, 4.0, 6.0, 8.0, 10.0]);
    assert_eq!(s.tail_fraction, 0.5);
    assert_eq!(s.delta, 0.01);
}

#[test]
fn errors_name_the_key() {
    let m = config_message(&format!("{MINIMAL}constraint = drawdown\ndrawdown.alpha = 1.2\n"));
    assert!(m.starts_with("drawdown.alpha") && m.contains("drawdown bound"), "{m}");
    assert!(config_message(&MINIMAL.replace("p = 0.5", "p = 0")).starts_with("p:"));
    assert!(config_message(&MINIMAL.replace("p = 0.5", "p = 1")).starts_with("p:"));
    assert!(config_message(&MINIMAL.replace("n_paths = 400", "n_paths = 1")).starts_with("n_paths"));
    assert!(config_message(&MINIMAL.replace("horizons = 2, 4", "horizons = 2.1, 4")).starts_with("horizons"));
    assert!(config_message(&MINIMAL.replace("seed = 1", "")).starts_with("seed"));
    assert!(config_message(&format!("{MINIMAL}typo = 3\n")).starts_with("typo"));
    assert!(config_message(&format!("{MINIMAL}seed = 2\n")).contains("duplicate"));
    assert!(config_message(&MINIMAL.replace("market.sigma.0 = 0.2", "market.sigma.0 = 0")).starts_with("market"));
}

#[test]
fn breakpoints_must_be_grid_points() {
    let two = MINIMAL.replace(
        "market.mu.0 = 0.06\nmarket.sigma.0 = 0.2",
        "market.breakpoints = 0, 5, 10\nmarket.mu.0 = 0.06\nmarket.sigma.0 = 0.2\nmarket.mu.1 = 0.03\nmarket.sigma.1 = 0.1",
    );
    assert!(parse_scenario(&two, None).is_ok());
    let m = config_message(
        &two.replace("grid.steps = 20", "grid.steps = 3").replace("horizons = 2, 4, 6, 8, 10", "horizons = 10"),
    );
    assert!(m.starts_with("grid.steps") && m.contains("breakpoint"), "{m}");
}

#[test]
fn constraint_sections_parse() {
    let dd = parse_scenario(&format!("{MINIMAL}constraint = drawdown\ndrawdown.table = 1:0.2, 4:1.5\n"), None).unwrap();
    match dd.constraint {
        Constraint::Drawdown(d) => assert!(!d.linear && (d.alpha() - 0.375).abs() < 1e-15),
        _ => panic!(),
    }
    let fl = format!("{MINIMAL}constraint = floor\nfloor.kind = exponential\nfloor.level = 0.5\nfloor.decay = 0.1\nfloor.epsilon = 0.4\n");
    assert!(matches!(parse_scenario(&fl, None).unwrap().constraint, Constraint::Floor(_)));
    let m = config_message(&fl.replace("floor.level = 0.5", "floor.level = 0.7"));
    assert!(m.starts_with("floor"), "{m}");
}

#[test]
fn hash_tracks_effective_seed_only() {
    let a = parse_scenario(MINIMAL, None).unwrap();
    let b = parse_scenario(&format!("# comment\n{MINIMAL}"), None).unwrap();
    assert_eq!(a.hash(), b.hash());
    let c = parse_scenario(MINIMAL, Some(99)).unwrap();
    assert_ne!(a.hash(), c.hash());
    assert_eq!(c.seed, 99);
}

fn write_scenario(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("scenario.conf");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn value_subcommand_prints_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = write_scenario(tmp.path(), MINIMAL);
    let out = bin().args(["value", "--scenario"]).arg(&sc).arg("--out").arg(tmp.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let expected = format!("{:.12}", 2.0 * 0.45f64.exp());
    assert!(stdout.contains(&format!("T = 10: V = {expected}")), "{stdout}");
    let manifest = std::fs::read_to_string(tmp.path().join("o/manifest.txt")).unwrap();
    assert!(manifest.contains("status=complete"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_scenario(tmp.path(), &MINIMAL.replace("p = 0.5", "p = 0"));
    let st = bin().args(["value", "--scenario"]).arg(&bad).arg("--out").arg(tmp.path().join("a")).status().unwrap();
    assert_eq!(st.code(), Some(1));
    assert!(!tmp.path().join("a").exists(), "no output before validation");

    let st = bin().arg("bogus").status().unwrap();
    assert_eq!(st.code(), Some(1));

    let sc = write_scenario(tmp.path(), &format!("{MINIMAL}constraint = none\n"));
    let st =
        bin().args(["verify-floor", "--scenario"]).arg(&sc).arg("--out").arg(tmp.path().join("b")).status().unwrap();
    assert_eq!(st.code(), Some(1));

    // proportional floor: the scaled reference dominates it exactly
    let viol = format!(
        "{MINIMAL}constraint = floor\nfloor.kind = proportional\nfloor.factor = 0.6\nfloor.reference_p = 0.9\nfloor.epsilon = 0.4\n"
    );
    let sc = write_scenario(tmp.path(), &viol);
    let st =
        bin().args(["verify-floor", "--scenario"]).arg(&sc).arg("--out").arg(tmp.path().join("c")).status().unwrap();
    assert_eq!(st.code(), Some(0));

    assert_eq!(CliError::Violation("x".into()).exit_code(), 2);
    assert_eq!(CliError::Core(growth_lab::Error::NonLinearFit("x".into())).exit_code(), 3);
    assert_eq!(CliError::Core(growth_lab::Error::Domain("x".into())).exit_code(), 1);
}

#[test]
fn refuses_to_overwrite_without_force() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = write_scenario(tmp.path(), MINIMAL);
    let out = tmp.path().join("o");
    let run = |force: bool| {
        let mut c = bin();
        c.args(["value", "--scenario"]).arg(&sc).arg("--out").arg(&out);
        if force {
            c.arg("--force");
        }
        c.status().unwrap().code()
    };
    assert_eq!(run(false), Some(0));
    assert_eq!(run(false), Some(1));
    assert_eq!(run(true), Some(0));
}

#[test]
fn seed_env_overrides_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = write_scenario(tmp.path(), MINIMAL);
    let run = |dir: &str, seed: Option<&str>| {
        let mut c = bin();
        c.args(["cer-sweep", "--scenario"]).arg(&sc).arg("--out").arg(tmp.path().join(dir));
        match seed {
            Some(s) => c.env("GROWTH_LAB_SEED", s),
            None => c.env_remove("GROWTH_LAB_SEED"),
        };
        assert_eq!(c.status().unwrap().code(), Some(0));
        std::fs::read(tmp.path().join(dir).join("sweep.csv")).unwrap()
    };
    let base = run("a", None);
    assert_eq!(base, run("b", Some("1")));
    let other = run("c", Some("2"));
    assert_ne!(base, other);
    assert!(String::from_utf8(other).unwrap().contains("# seed=2"));
}

#[test]
fn sweep_is_byte_identical_across_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = write_scenario(tmp.path(), &format!("{MINIMAL}constraint = drawdown\ndrawdown.alpha = 0.3\n"));
    let files: Vec<Vec<u8>> = ["1", "4", "4"]
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let dir = tmp.path().join(format!("w{i}"));
            let st = bin()
                .args(["cer-sweep", "--workers", w, "--scenario"])
                .arg(&sc)
                .arg("--out")
                .arg(&dir)
                .status()
                .unwrap();
            assert_eq!(st.code(), Some(0));
            std::fs::read(dir.join("sweep.csv")).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}
