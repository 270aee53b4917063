//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use sideband::dynamics::{DecayRates, DynamicsError, Integrator, SimSettings, DEFAULT_DT};
use sideband::effective::{exactify, EffectiveError, ResonanceCondition};
use sideband::operators::TwoQubitState;
use sideband::system::{DrivenQubitParams, Grid, SystemError, SystemParams};
use sideband::units::{ghz_to_angular, RateConvention};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: frequency key `{key}` needs an explicit unit suffix (use `{key}_{unit}`)")]
    MissingUnit { line: usize, key: String, unit: &'static str },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("key `{key}`: invalid value `{value}` ({reason})")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("invalid configuration: {0}")]
    Invariant(String),
}

impl From<SystemError> for ConfigError {
    fn from(e: SystemError) -> Self {
        ConfigError::Invariant(e.to_string())
    }
}

impl From<EffectiveError> for ConfigError {
    fn from(e: EffectiveError) -> Self {
        ConfigError::Invariant(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err("expected csv or json".into()),
        }
    }
}

impl OutputFormat {
    pub fn key(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// One qubit as configured, frequencies in GHz (ω/2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitConfig {
    pub omega_ghz: f64,
    pub drive_ghz: f64,
    pub g_ghz: f64,
    pub rabi_ghz: f64,
    pub phase_rad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConfig {
    pub gamma_khz: [f64; 2],
    pub kappa_khz: f64,
    pub convention: RateConvention,
}

impl RateConfig {
    pub fn to_rates(&self) -> Result<DecayRates, DynamicsError> {
        DecayRates::from_khz(self.gamma_khz[0], self.gamma_khz[1], self.kappa_khz, self.convention)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub condition: ResonanceCondition,
    pub qubits: [QubitConfig; 2],
    pub omega_c_ghz: f64,
    pub eta_ghz: f64,
    pub grid: Grid,
    pub initial_state: TwoQubitState,
    pub rates: RateConfig,
    pub dt_ns: f64,
    pub n_max: usize,
    pub exactify: bool,
    pub integrator: Integrator,
    pub check_convergence: bool,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

const KEYS: &[&str] = &[
    "condition",
    "omega1_ghz",
    "omega2_ghz",
    "drive1_ghz",
    "drive2_ghz",
    "g1_ghz",
    "g2_ghz",
    "rabi1_ghz",
    "rabi2_ghz",
    "phase1_rad",
    "phase2_rad",
    "omega_c_ghz",
    "eta_ghz",
    "p1",
    "p2",
    "q1",
    "q2",
    "w",
    "m",
    "initial_state",
    "gamma1_khz",
    "gamma2_khz",
    "kappa_khz",
    "rate_convention",
    "dt_ns",
    "n_max",
    "exactify",
    "integrator",
    "check_convergence",
    "output_path",
    "output_format",
];

/// Keys that carry a physical unit and therefore must be suffixed.
const UNIT_KEYS: &[(&str, &str)] = &[
    ("omega1", "ghz"),
    ("omega2", "ghz"),
    ("drive1", "ghz"),
    ("drive2", "ghz"),
    ("g1", "ghz"),
    ("g2", "ghz"),
    ("rabi1", "ghz"),
    ("rabi2", "ghz"),
    ("phase1", "rad"),
    ("phase2", "rad"),
    ("omega_c", "ghz"),
    ("eta", "ghz"),
    ("gamma1", "khz"),
    ("gamma2", "khz"),
    ("kappa", "khz"),
    ("dt", "ns"),
];

pub fn integrator_key(i: Integrator) -> &'static str {
    match i {
        Integrator::Magnus4 => "magnus4",
        Integrator::ExponentialMidpoint => "midpoint",
    }
}

pub fn parse_integrator(s: &str) -> Result<Integrator, String> {
    match s {
        "magnus4" => Ok(Integrator::Magnus4),
        "midpoint" => Ok(Integrator::ExponentialMidpoint),
        _ => Err("expected magnus4 or midpoint".into()),
    }
}

/// Initial state used by the gate analyses when none is configured.
pub fn default_initial_state(cond: ResonanceCondition) -> TwoQubitState {
    if cond.id() == 9 {
        TwoQubitState::EE
    } else {
        TwoQubitState::EG
    }
}

struct Entries(BTreeMap<&'static str, String>);

impl Entries {
    fn take<T: FromStr>(&mut self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.remove(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| ConfigError::InvalidValue {
                key: key.to_string(),
                value: v.clone(),
                reason: e.to_string(),
            }),
        }
    }

    fn require<T: FromStr>(&mut self, key: &'static str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)?.ok_or(ConfigError::MissingKey(key))
    }

    fn parsed<T>(&mut self, key: &'static str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(v) => f(&v)
                .map(Some)
                .map_err(|reason| ConfigError::InvalidValue { key: key.to_string(), value: v.clone(), reason }),
        }
    }
}

fn finite(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::InvalidValue { key: key.into(), value: v.to_string(), reason: "must be finite".into() })
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        if let Some((_, unit)) = UNIT_KEYS.iter().find(|(base, _)| *base == k) {
            return Err(ConfigError::MissingUnit { line, key: k.to_string(), unit });
        }
        let key = KEYS
            .iter()
            .find(|known| **known == k)
            .ok_or_else(|| ConfigError::UnknownKey { line, key: k.to_string() })?;
        if map.insert(*key, v.to_string()).is_some() {
            return Err(ConfigError::Duplicate { line, key: k.to_string() });
        }
    }
    let mut e = Entries(map);

    let condition: ResonanceCondition = e.require("condition")?;
    let mut qubit = |j: usize| -> Result<QubitConfig, ConfigError> {
        let k = |base: &str| -> &'static str {
            KEYS.iter().find(|key| **key == format!("{base}{}_{}", j + 1, suffix(base))).copied().unwrap()
        };
        let omega_ghz = finite(k("omega"), e.require(k("omega"))?)?;
        Ok(QubitConfig {
            omega_ghz,
            drive_ghz: finite(k("drive"), e.take(k("drive"))?.unwrap_or(omega_ghz))?,
            g_ghz: finite(k("g"), e.require(k("g"))?)?,
            rabi_ghz: finite(k("rabi"), e.require(k("rabi"))?)?,
            phase_rad: finite(k("phase"), e.take(k("phase"))?.unwrap_or(0.0))?,
        })
    };
    let qubits = [qubit(0)?, qubit(1)?];
    let grid = Grid {
        p: [e.require("p1")?, e.require("p2")?],
        q: [e.require("q1")?, e.require("q2")?],
        w: e.require("w")?,
        m: e.require("m")?,
    };
    let cfg = RunConfig {
        condition,
        qubits,
        omega_c_ghz: finite("omega_c_ghz", e.require("omega_c_ghz")?)?,
        eta_ghz: finite("eta_ghz", e.require("eta_ghz")?)?,
        grid,
        initial_state: e.take("initial_state")?.unwrap_or_else(|| default_initial_state(condition)),
        rates: RateConfig {
            gamma_khz: [e.take("gamma1_khz")?.unwrap_or(0.0), e.take("gamma2_khz")?.unwrap_or(0.0)],
            kappa_khz: e.take("kappa_khz")?.unwrap_or(0.0),
            convention: e.take("rate_convention")?.unwrap_or(RateConvention::Angular),
        },
        dt_ns: e.take("dt_ns")?.unwrap_or(DEFAULT_DT),
        n_max: e.take("n_max")?.unwrap_or(2),
        exactify: e.take("exactify")?.unwrap_or(false),
        integrator: e.parsed("integrator", parse_integrator)?.unwrap_or_default(),
        check_convergence: e.take("check_convergence")?.unwrap_or(true),
        output_path: e.take::<String>("output_path")?.map(PathBuf::from),
        output_format: e.parsed("output_format", |s| s.parse())?,
    };
    debug_assert!(e.0.is_empty(), "unconsumed keys {:?}", e.0.keys());
    cfg.validate()?;
    Ok(cfg)
}

fn suffix(base: &str) -> &'static str {
    match base {
        "phase" => "rad",
        _ => "ghz",
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        self.rates.to_rates().map_err(|e| ConfigError::Invariant(e.to_string()))?;
        if !(self.dt_ns > 0.0 && self.dt_ns.is_finite()) {
            return Err(ConfigError::Invariant("dt_ns must be positive".into()));
        }
        if self.n_max < 1 {
            return Err(ConfigError::Invariant("n_max must be at least 1".into()));
        }
        let sys = self.configured_system()?;
        let steps = sys.tau_m() / self.dt_ns;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(ConfigError::Invariant(format!(
                "dt_ns = {} does not divide the gate time tau_m = {} ns",
                self.dt_ns,
                sys.tau_m()
            )));
        }
        if !self.condition.holds(sys.grid.p, sys.grid.q) {
            return Err(ConfigError::Invariant(format!(
                "{}: resonance {} does not hold on the grid",
                self.condition,
                self.condition.relation_label()
            )));
        }
        if !self.condition.constraint_holds(sys.grid.q) {
            return Err(ConfigError::Invariant(format!(
                "{}: W-constraint {} violated",
                self.condition,
                self.condition.constraint_label()
            )));
        }
        if self.exactify {
            exactify(&sys, self.condition)?;
        }
        Ok(())
    }

    /// System exactly as configured, with the well-definedness and grid checks.
    pub fn configured_system(&self) -> Result<SystemParams, ConfigError> {
        let q = |c: &QubitConfig| DrivenQubitParams::from_ghz(c.omega_ghz, c.drive_ghz, c.g_ghz, c.rabi_ghz, c.phase_rad);
        let sys = SystemParams::new(
            [q(&self.qubits[0]), q(&self.qubits[1])],
            ghz_to_angular(self.omega_c_ghz),
            ghz_to_angular(self.eta_ghz),
            self.grid,
            self.n_max,
        )?;
        sys.check_well_defined()?;
        sys.check_grid()?;
        Ok(sys)
    }

    /// System used by all analyses: couplings replaced by the exact
    /// constraint solution when `exactify` is set.
    pub fn system(&self) -> Result<SystemParams, ConfigError> {
        let sys = self.configured_system()?;
        if self.exactify {
            Ok(exactify(&sys, self.condition)?)
        } else {
            Ok(sys)
        }
    }

    pub fn settings(&self) -> SimSettings {
        SimSettings { dt: self.dt_ns, integrator: self.integrator, check_convergence: self.check_convergence }
    }

    /// Renders every key explicitly; `parse_config(render())` reproduces `self`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("condition", self.condition.to_string());
        for (j, q) in self.qubits.iter().enumerate() {
            let n = j + 1;
            kv(&format!("omega{n}_ghz"), q.omega_ghz.to_string());
            kv(&format!("drive{n}_ghz"), q.drive_ghz.to_string());
            kv(&format!("g{n}_ghz"), q.g_ghz.to_string());
            kv(&format!("rabi{n}_ghz"), q.rabi_ghz.to_string());
            kv(&format!("phase{n}_rad"), q.phase_rad.to_string());
        }
        kv("omega_c_ghz", self.omega_c_ghz.to_string());
        kv("eta_ghz", self.eta_ghz.to_string());
        kv("p1", self.grid.p[0].to_string());
        kv("p2", self.grid.p[1].to_string());
        kv("q1", self.grid.q[0].to_string());
        kv("q2", self.grid.q[1].to_string());
        kv("w", self.grid.w.to_string());
        kv("m", self.grid.m.to_string());
        kv("initial_state", self.initial_state.label().to_string());
        kv("gamma1_khz", self.rates.gamma_khz[0].to_string());
        kv("gamma2_khz", self.rates.gamma_khz[1].to_string());
        kv("kappa_khz", self.rates.kappa_khz.to_string());
        kv("rate_convention", self.rates.convention.key().to_string());
        kv("dt_ns", self.dt_ns.to_string());
        kv("n_max", self.n_max.to_string());
        kv("exactify", self.exactify.to_string());
        kv("integrator", integrator_key(self.integrator).to_string());
        kv("check_convergence", self.check_convergence.to_string());
        if let Some(p) = &self.output_path {
            kv("output_path", p.display().to_string());
        }
        if let Some(f) = self.output_format {
            kv("output_format", f.key().to_string());
        }
        s
    }
}
