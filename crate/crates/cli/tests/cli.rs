use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use sideband::dynamics::Integrator;
use sideband::operators::TwoQubitState;
use sideband::units::RateConvention;
use sideband_cli::config::{parse_config, ConfigError, OutputFormat};
use sideband_cli::report::resonance_table;

fn cfg(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn shipped(name: &str) -> String {
    std::fs::read_to_string(cfg(name)).unwrap()
}

fn sideband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sideband")).args(args).output().unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_then_parse_is_identity(
        base in prop::sample::select(vec!["rc7.cfg", "rc9.cfg"]),
        gamma in prop::array::uniform2(0.0f64..1e3),
        kappa in 0.0f64..1e3,
        dt_exp in 0u32..3,
        n_max in 1usize..5,
        exact in any::<bool>(),
        state in prop::sample::select(TwoQubitState::ALL.to_vec()),
        conv in prop::sample::select(vec![RateConvention::Angular, RateConvention::OverTwoPi]),
        midpoint in any::<bool>(),
        fmt in prop::option::of(prop::sample::select(vec![OutputFormat::Csv, OutputFormat::Json])),
    ) {
        let mut c = parse_config(&shipped(base)).unwrap();
        c.rates.gamma_khz = gamma;
        c.rates.kappa_khz = kappa;
        c.dt_ns = 0.01 / f64::from(1 << dt_exp);
        c.n_max = n_max;
        c.exactify = exact;
        c.initial_state = state;
        c.rates.convention = conv;
        c.integrator = if midpoint { Integrator::ExponentialMidpoint } else { Integrator::Magnus4 };
        c.output_format = fmt;
        c.output_path = fmt.map(|f| PathBuf::from(format!("out.{}", f.key())));
        let again = parse_config(&c.render()).unwrap();
        prop_assert_eq!(again, c);
    }
}

#[test]
fn shipped_configs_keep_tabulated_couplings() {
    let c = parse_config(&shipped("rc9.cfg")).unwrap();
    assert_eq!(c.qubits[0].g_ghz, 0.021);
    assert_eq!(c.qubits[1].g_ghz, 0.023);
    assert!(c.exactify);
    assert_eq!(c.initial_state, TwoQubitState::EE);
    let sys = c.system().unwrap();
    assert!((sys.qubits[0].g / std::f64::consts::TAU - 0.021408720964).abs() < 1e-11);
}

#[test]
fn config_errors_name_the_problem() {
    let base = shipped("rc7.cfg");
    let cases = [
        (base.replace("g1_ghz", "g1"), "unit suffix"),
        (base.replace("omega_c_ghz", "omega_c"), "unit suffix"),
        (format!("{base}kappa = 3\n"), "unit suffix"),
        (format!("{base}dt = 0.01\n"), "unit suffix"),
        (format!("{base}temperature_k = 0.01\n"), "unknown key"),
        (base.replace("w = 13", ""), "missing required key `w`"),
        (format!("{base}m = 40\n"), "duplicate key"),
        (base.replace("p1 = 20", "p1 = twenty"), "invalid value"),
        (format!("{base}rate_convention = hertz\n"), "invalid value"),
        (format!("{base}dt_ns = 0.03\n"), "does not divide"),
    ];
    for (text, needle) in cases {
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains(needle), "{err} lacks {needle}");
    }
}

#[test]
fn off_grid_and_pole_are_rejected() {
    let base = shipped("rc7.cfg");
    let off = base.replace("omega_c_ghz = 7", "omega_c_ghz = 7.01");
    assert!(matches!(parse_config(&off), Err(ConfigError::Invariant(m)) if m.contains("grid condition")));
    // Δ₁ = 1 GHz and W₁ = 2Ω₁ = 1 GHz.
    let pole = base.replace("rabi1_ghz = 0.175", "rabi1_ghz = 0.5");
    assert!(parse_config(&pole).unwrap_err().to_string().contains("W != |Delta|"));
}

#[test]
fn table_lists_nine_conditions() {
    let t = resonance_table();
    let rows: Vec<&str> = t.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[6].starts_with("7 ") && rows[6].contains("Δ1⁻=Δ2⁻") && rows[6].contains("−𝒥(σ₁⁺σ₂⁻+σ₁⁻σ₂⁺)"));
    assert!(rows[6].ends_with("iSWAP"));
    assert!(rows[0].contains("−2𝒥σ₁ᶻσ₂ᶻ") && rows[0].ends_with("Controlled-phase"));
    let out = sideband(&["table"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), t);
}

#[test]
fn check_reports_derived_rows() {
    let out = sideband(&["check", "--config", path_str(&cfg("rc7.cfg"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["delta1_ghz = 1", "delta1_minus_ghz = 0.65", "tau_m_ns = 800", "resonances = rc7", "j_mhz = 0.3125"] {
        assert!(text.lines().any(|l| l == line), "missing `{line}` in\n{text}");
    }
}

#[test]
fn check_rejects_verbatim_couplings_at_tight_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verbatim.cfg");
    std::fs::write(&path, shipped("rc7.cfg").replace("exactify = true", "exactify = false")).unwrap();
    let out = sideband(&["check", "--config", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g2^2/g1^2"));
}

#[test]
fn map_prints_driven_qubit() {
    let out = sideband(&[
        "map", "dqd", "--tunnel-2t-ghz", "10", "--bz-ghz", "8", "--bx-ghz", "0.5", "--g-charge-ghz", "0.04",
        "--drive-amp-ghz", "0.3", "--drive-freq-ghz", "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("omega_ghz = ") && text.contains("rabi_ghz = "));
    let out = sideband(&["map", "rx", "--tunnel-ghz", "1", "--hubbard-gap-ghz", "20", "--g-charge-ghz", "0.1"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("xi = 0.05"));
    let out = sideband(&["map", "rx", "--tunnel-ghz", "1", "--hubbard-gap-ghz", "0", "--g-charge-ghz", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_writes_ranked_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.csv");
    let out = sideband(&[
        "search", "--condition", "rc9", "--qmax", "12", "--pmax", "13", "--mmax", "10", "--eta-ghz", "0.05", "--output",
        path_str(&path),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("# version: ")));
    assert!(csv.lines().any(|l| l.starts_with("# decay rates")));
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("rank,condition,p1,p2,q1,q2,w,m,g1_ghz"));
    assert!(body[1].starts_with("1,rc9,"));
    assert!(body.iter().any(|l| l.contains(",rc9,10,-13,12,11,-2,10,")));
}

#[test]
fn simulate_writes_json_with_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sim.json");
    let out = sideband(&["simulate", "--config", path_str(&cfg("rc9.cfg")), "--output", path_str(&path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["f0"].as_f64().unwrap() - 0.998).abs() < 0.002);
    assert_eq!(v["fidelity"].as_f64(), Some(1.0));
    assert_eq!(v["rate_convention"], "angular");
    assert_eq!(v["n_max"], 2);
    assert!(v["version"].as_str().unwrap().starts_with("0.1.0+"));
    assert!(v["metadata"].as_array().unwrap().iter().any(|l| l.as_str().unwrap().starts_with("decay rates")));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_threads() {
    let config = cfg("rc9.cfg");
    let args = ["sweep", "--config", path_str(&config), "--gamma", "1,10", "--kappa", "10,100"];
    let single = Command::new(env!("CARGO_BIN_EXE_sideband")).args(args).env("SIDEBAND_THREADS", "1").output().unwrap();
    let multi = Command::new(env!("CARGO_BIN_EXE_sideband")).args(args).env("SIDEBAND_THREADS", "3").output().unwrap();
    assert!(single.status.success());
    assert_eq!(single.stdout, multi.stdout);
    let text = String::from_utf8(single.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "gamma_khz,kappa_khz,error");
    assert_eq!(body.len(), 5);
    assert!(body[1].starts_with("1,10,") && body[4].starts_with("10,100,"));
}

#[test]
fn exit_codes() {
    let missing = sideband(&["simulate", "--config", "/nonexistent/x.cfg"]);
    assert_eq!(missing.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, shipped("rc9.cfg").replace("condition = rc9", "condition = rc7")).unwrap();
    let out = sideband(&["simulate", "--config", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not hold"));

    // A coarse step fails the step-halving test.
    let coarse = dir.path().join("coarse.cfg");
    std::fs::write(&coarse, format!("{}dt_ns = 0.5\n", shipped("rc9.cfg"))).unwrap();
    let out = sideband(&["simulate", "--config", path_str(&coarse)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let grid = sideband(&["sweep", "--config", path_str(&cfg("rc9.cfg")), "--gamma", "0.1:50:log4", "--kappa", "1"]);
    assert_eq!(grid.status.code(), Some(2));
    assert_eq!(sideband(&["frobnicate"]).status.code(), Some(2));
}
