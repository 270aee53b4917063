//! Subcommand definitions and drivers.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sideband::dynamics::{gate_fidelity_f0, simulate, sweep_decay, DynamicsError, SimSettings};
use sideband::effective::{
    check_constraints, classify_resonance, fs_analytic, search_parameters, ResonanceCondition, SearchBounds,
};
use sideband::mapping::{map_charge_qubit, map_dqd, map_rx, DqdParams, RxParams, ValidityReport};
use sideband::operators::TwoQubitState;
use sideband::system::DrivenQubitParams;
use sideband::units::{angular_to_ghz, RateConvention};
use thiserror::Error;

use crate::config::{integrator_key, parse_config, RunConfig};
use crate::output::{fmt_sig, parse_grid, Metadata, VERSION};
use crate::report::{resonance_table, validation_report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Convergence { .. } => CliError::Convergence(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "sideband", version = VERSION, about = "Sideband-resonance gates between driven qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the nine resonance conditions.
    Table,
    /// Map physical spin-qubit parameters onto a driven qubit.
    #[command(subcommand)]
    Map(MapCommand),
    /// Validate a configuration and print derived quantities and constraints.
    Check(CheckArgs),
    /// Enumerate integer operating points.
    Search(SearchArgs),
    /// Run the gate and report F0 and F as JSON.
    Simulate(ConfigArgs),
    /// Sweep qubit and cavity decay rates and write a CSV error table.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum MapCommand {
    /// Spin-charge hybrid qubit in a double quantum dot.
    Dqd(DqdArgs),
    /// Resonant-exchange qubit in a triple quantum dot.
    Rx(RxArgs),
}

#[derive(Debug, Args)]
pub struct DqdArgs {
    #[arg(long)]
    pub tunnel_2t_ghz: f64,
    #[arg(long)]
    pub bz_ghz: f64,
    #[arg(long, default_value_t = 0.0)]
    pub bx_ghz: f64,
    #[arg(long)]
    pub g_charge_ghz: f64,
    #[arg(long)]
    pub drive_amp_ghz: f64,
    #[arg(long)]
    pub drive_freq_ghz: f64,
    #[arg(long, default_value_t = 0.0)]
    pub drive_phase_rad: f64,
    /// Treat the dot as a bare charge qubit (ignores the fields).
    #[arg(long)]
    pub charge: bool,
}

#[derive(Debug, Args)]
pub struct RxArgs {
    #[arg(long)]
    pub tunnel_ghz: f64,
    #[arg(long)]
    pub hubbard_gap_ghz: f64,
    #[arg(long)]
    pub g_charge_ghz: f64,
    /// Exchange energies J_l and J_r, overriding the tunnelling estimate.
    #[arg(long, num_args = 2, value_names = ["JL", "JR"])]
    pub exchange_ghz: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; overrides `output_path` in the config. Defaults to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    #[arg(long, default_value_t = 0.01)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// γ grid in kHz, applied to both qubits.
    #[arg(long)]
    pub gamma: String,
    /// κ grid in kHz.
    #[arg(long)]
    pub kappa: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub condition: ResonanceCondition,
    #[arg(long)]
    pub qmax: i64,
    #[arg(long)]
    pub pmax: i64,
    #[arg(long)]
    pub mmax: u32,
    #[arg(long)]
    pub eta_ghz: f64,
    #[arg(long, default_value_t = 7.0)]
    pub omega_c_ghz: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub g_min_ghz: f64,
    #[arg(long, default_value_t = 0.1)]
    pub g_max_ghz: f64,
    #[arg(long, default_value_t = 0.2)]
    pub max_g_over_w: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs a parsed command, writing primary output to `out` unless a file is requested.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    match cli.command {
        Command::Table => emit(None, &resonance_table(), out),
        Command::Map(m) => emit(None, &cmd_map(&m)?, out),
        Command::Check(a) => {
            let cfg = load(&a.common.config)?;
            emit(a.common.output.as_deref(), &cmd_check(&cfg, a.rel_tol)?, out)
        }
        Command::Search(a) => emit(a.output.as_deref(), &cmd_search(&a)?, out),
        Command::Simulate(a) => {
            let cfg = load(&a.config)?;
            let target = a.output.clone().or_else(|| cfg.output_path.clone());
            emit(target.as_deref(), &cmd_simulate(&cfg)?, out)
        }
        Command::Sweep(a) => {
            let cfg = load(&a.common.config)?;
            let gammas = parse_grid(&a.gamma).map_err(|e| validation(format!("--gamma: {e}")))?;
            let kappas = parse_grid(&a.kappa).map_err(|e| validation(format!("--kappa: {e}")))?;
            let target = a.common.output.clone().or_else(|| cfg.output_path.clone());
            emit(target.as_deref(), &cmd_sweep(&cfg, &gammas, &kappas)?, out)
        }
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

fn metadata(cfg: &RunConfig, command: &str) -> Metadata {
    Metadata {
        command: command.to_string(),
        condition: cfg.condition.to_string(),
        convention: cfg.rates.convention,
        dt_ns: cfg.dt_ns,
        n_max: cfg.n_max,
        exactify: cfg.exactify,
    }
}

fn qubit_lines(s: &mut String, q: &DrivenQubitParams) {
    let _ = writeln!(s, "omega_ghz = {}", fmt_sig(angular_to_ghz(q.omega)));
    let _ = writeln!(s, "drive_ghz = {}", fmt_sig(angular_to_ghz(q.omega_d)));
    let _ = writeln!(s, "g_ghz = {}", fmt_sig(angular_to_ghz(q.g)));
    let _ = writeln!(s, "rabi_ghz = {}", fmt_sig(angular_to_ghz(q.rabi)));
    let _ = writeln!(s, "phase_rad = {}", fmt_sig(q.phase));
}

fn report_lines(s: &mut String, r: &ValidityReport) {
    for w in &r.warnings {
        let _ = writeln!(s, "# warning: {w}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "# note: {n}");
    }
}

pub fn cmd_map(m: &MapCommand) -> Result<String, CliError> {
    let mut s = String::new();
    match m {
        MapCommand::Dqd(a) => {
            let p = DqdParams {
                tunnel_2t: a.tunnel_2t_ghz,
                bz: a.bz_ghz,
                bx: a.bx_ghz,
                g_charge: a.g_charge_ghz,
                drive_amp: a.drive_amp_ghz,
                drive_freq: a.drive_freq_ghz,
                drive_phase: a.drive_phase_rad,
                epsilon0: 0.0,
            };
            if a.charge {
                qubit_lines(&mut s, &map_charge_qubit(&p).map_err(validation)?);
            } else {
                let (q, report) = map_dqd(&p).map_err(validation)?;
                qubit_lines(&mut s, &q);
                report_lines(&mut s, &report);
            }
        }
        MapCommand::Rx(a) => {
            let exchange = a.exchange_ghz.as_ref().map(|v| (v[0], v[1]));
            let p = RxParams {
                tunnel: a.tunnel_ghz,
                hubbard_gap: a.hubbard_gap_ghz,
                g_charge: a.g_charge_ghz,
                exchange,
                epsilon0: 0.0,
            };
            let (c, report) = map_rx(&p).map_err(validation)?;
            let _ = writeln!(s, "omega_ghz = {}", fmt_sig(c.omega));
            let _ = writeln!(s, "g_ghz = {}", fmt_sig(c.g));
            let _ = writeln!(s, "xi = {}", fmt_sig(c.xi));
            report_lines(&mut s, &report);
        }
    }
    Ok(s)
}

pub fn cmd_check(cfg: &RunConfig, rel_tol: f64) -> Result<String, CliError> {
    let sys = cfg.system().map_err(validation)?;
    let cond = cfg.condition;
    let mut s = validation_report(&sys, cond).render();
    let matching: Vec<String> =
        classify_resonance(&sys).into_iter().filter(|c| c.holds).map(|c| c.condition.to_string()).collect();
    let _ = writeln!(s, "resonances = {}", matching.join(","));
    let constraints = check_constraints(&sys, cond, rel_tol);
    for c in &constraints.checks {
        let tag = if c.informational { "info" } else if c.passed { "ok" } else { "FAIL" };
        let _ = writeln!(
            s,
            "constraint {} = {} (target {}, residual {}) {tag}",
            c.name,
            fmt_sig(c.lhs),
            fmt_sig(c.rhs),
            fmt_sig(c.residual)
        );
    }
    if [1, 4, 7, 9].contains(&cond.id()) {
        for st in TwoQubitState::ALL {
            if let Ok(f) = fs_analytic(&sys, cond, st, 0) {
                let _ = writeln!(s, "fs_{}_n0 = {}", st.label(), fmt_sig(f));
            }
        }
    }
    if !constraints.all_passed() {
        return Err(CliError::Validation(format!("{s}constraints of {cond} not satisfied at rel_tol {rel_tol}")));
    }
    Ok(s)
}

pub fn cmd_search(a: &SearchArgs) -> Result<String, CliError> {
    let mut bounds = SearchBounds::new(a.qmax, a.pmax, a.mmax, a.eta_ghz);
    bounds.g_min_ghz = a.g_min_ghz;
    bounds.g_max_ghz = a.g_max_ghz;
    bounds.max_g_over_w = a.max_g_over_w;
    let found = search_parameters(a.condition, &bounds).map_err(validation)?;
    let mut s = String::new();
    let meta = Metadata {
        command: "search".into(),
        condition: a.condition.to_string(),
        convention: RateConvention::Angular,
        dt_ns: 0.0,
        n_max: 0,
        exactify: true,
    };
    s.push_str(&meta.csv_header());
    s.push_str(
        "rank,condition,p1,p2,q1,q2,w,m,g1_ghz,g2_ghz,tau_m_ns,j_mhz,chi1_mhz,chi2_mhz,\
         res_g1g2,res_g_ratio,res_chi,res_j_tau_m\n",
    );
    for (rank, c) in found.iter().enumerate() {
        let sys = c.to_system(a.omega_c_ghz, a.eta_ghz, 0).map_err(validation)?;
        let report = check_constraints(&sys, c.condition, 1e-9);
        let res = |name: &str| report.get(name).map_or(f64::NAN, |k| k.residual);
        let chi = if a.condition.id() == 7 { "chi1-chi2" } else { "chi1+chi2" };
        let g = c.grid;
        let cells = [
            (rank + 1).to_string(),
            c.condition.to_string(),
            g.p[0].to_string(),
            g.p[1].to_string(),
            g.q[0].to_string(),
            g.q[1].to_string(),
            g.w.to_string(),
            g.m.to_string(),
            fmt_sig(c.g_ghz[0]),
            fmt_sig(c.g_ghz[1]),
            fmt_sig(c.tau_m_ns),
            fmt_sig(c.j_mhz),
            fmt_sig(c.chi_mhz[0]),
            fmt_sig(c.chi_mhz[1]),
            fmt_sig(res("g1*g2")),
            fmt_sig(res("g2^2/g1^2")),
            fmt_sig(res(chi)),
            fmt_sig(res("J*tau_m")),
        ];
        let _ = writeln!(s, "{}", cells.join(","));
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
pub struct SimulationRecord {
    pub version: String,
    pub condition: String,
    pub initial_state: String,
    pub f0: f64,
    pub f0_unitary: f64,
    pub fidelity: f64,
    pub error: f64,
    pub gamma1_khz: f64,
    pub gamma2_khz: f64,
    pub kappa_khz: f64,
    pub rate_convention: String,
    pub dt_ns: f64,
    pub n_max: usize,
    pub tau_m_ns: f64,
    pub integrator: String,
    pub exactify: bool,
    pub g_ghz: [f64; 2],
    pub metadata: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn simulation_record(cfg: &RunConfig) -> Result<SimulationRecord, CliError> {
    let sys = cfg.system().map_err(validation)?;
    let rates = cfg.rates.to_rates()?;
    let settings = cfg.settings();
    // Step-halving is judged on the unitary F₀; the master equation reuses the accepted step.
    let f0_unitary = gate_fidelity_f0(&sys, cfg.condition, cfg.initial_state, settings)?;
    let outcome = simulate(&sys, cfg.condition, cfg.initial_state, rates, SimSettings { check_convergence: false, ..settings })?;
    Ok(SimulationRecord {
        version: VERSION.to_string(),
        condition: cfg.condition.to_string(),
        initial_state: cfg.initial_state.label().to_string(),
        f0: outcome.f0,
        f0_unitary,
        fidelity: outcome.fidelity,
        error: 1.0 - outcome.fidelity,
        gamma1_khz: cfg.rates.gamma_khz[0],
        gamma2_khz: cfg.rates.gamma_khz[1],
        kappa_khz: cfg.rates.kappa_khz,
        rate_convention: cfg.rates.convention.key().to_string(),
        dt_ns: cfg.dt_ns,
        n_max: cfg.n_max,
        tau_m_ns: sys.tau_m(),
        integrator: integrator_key(cfg.integrator).to_string(),
        exactify: cfg.exactify,
        g_ghz: [angular_to_ghz(sys.qubits[0].g), angular_to_ghz(sys.qubits[1].g)],
        metadata: metadata(cfg, "simulate").lines(),
        warnings: sys.warnings(),
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let record = simulation_record(cfg)?;
    let mut s = serde_json::to_string_pretty(&record).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_sweep(cfg: &RunConfig, gammas: &[f64], kappas: &[f64]) -> Result<String, CliError> {
    let sys = cfg.system().map_err(validation)?;
    let rows = sweep_decay(&sys, cfg.initial_state, gammas, kappas, cfg.rates.convention, cfg.settings())?;
    let mut s = metadata(cfg, "sweep").csv_header();
    let _ = writeln!(s, "# initial_state: {}", cfg.initial_state.label());
    s.push_str("gamma_khz,kappa_khz,error\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fmt_sig(r.gamma_khz), fmt_sig(r.kappa_khz), fmt_sig(r.error));
    }
    Ok(s)
}

/// Entry point shared by the binary: parses `args`, runs, prints errors to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => {
            let _ = lock.flush();
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
