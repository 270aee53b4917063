//! Driven-qubit and two-qubit system parameters.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::units::{angular_to_ghz, ghz_to_angular};

/// Absolute tolerance, in grid units, for `Δ/η` and `W/η` being integers.
pub const GRID_TOL: f64 = 1e-9;
/// Ratio above which a perturbative or rotating-wave condition is flagged.
pub const VALIDITY_RATIO: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("qubit {qubit}: {quantity}/eta = {value:.12} is not the integer {expected} (grid condition)")]
    OffGrid { qubit: usize, quantity: &'static str, value: f64, expected: i64 },
    #[error("qubit {qubit}: precondition {relation} violated")]
    Precondition { qubit: usize, relation: &'static str },
}

/// One parametrically driven qubit. All frequencies are angular (rad/ns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenQubitParams {
    pub omega: f64,
    pub omega_d: f64,
    pub g: f64,
    /// Half drive amplitude Ω.
    pub rabi: f64,
    pub phase: f64,
}

impl DrivenQubitParams {
    /// Builds from frequencies given as ω/2π in GHz.
    pub fn from_ghz(omega: f64, omega_d: f64, g: f64, rabi: f64, phase: f64) -> Self {
        Self {
            omega: ghz_to_angular(omega),
            omega_d: ghz_to_angular(omega_d),
            g: ghz_to_angular(g),
            rabi: ghz_to_angular(rabi),
            phase,
        }
    }

    /// Qubit-drive detuning δ = ω − ω_d.
    pub fn delta(&self) -> f64 {
        self.omega - self.omega_d
    }

    /// Cavity-drive detuning Δ = ω_c − ω_d.
    pub fn cavity_detuning(&self, omega_c: f64) -> f64 {
        omega_c - self.omega_d
    }

    /// Dressed splitting W = √(δ² + 4Ω²).
    pub fn w(&self) -> f64 {
        self.delta().hypot(2.0 * self.rabi)
    }

    /// Mixing angle θ ∈ (0, π) with tan θ = 2Ω/δ.
    pub fn theta(&self) -> f64 {
        (2.0 * self.rabi).atan2(self.delta())
    }
}

/// Quantities of one qubit that the effective theory works with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dressed {
    pub g: f64,
    pub delta: f64,
    pub big_delta: f64,
    pub w: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    pub phase: f64,
}

impl Dressed {
    /// Frequency of the centre line (`s = 0`) or a sideband (`s = ±1`): Δ + sW.
    pub fn line(&self, s: i8) -> f64 {
        self.big_delta + f64::from(s) * self.w
    }

    /// Amplitude multiplying the operator of line `s` inside A(t), in units of g/2.
    pub fn line_amplitude(&self, s: i8) -> f64 {
        match s {
            0 => self.sin_theta,
            1 => -(1.0 - self.cos_theta),
            -1 => 1.0 + self.cos_theta,
            _ => unreachable!("line index must be -1, 0 or 1"),
        }
    }
}

/// Integer operating point: Δⱼ = pⱼη, Wⱼ = qⱼη, τ_m = mτ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    pub p: [i64; 2],
    pub q: [i64; 2],
    pub w: i64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub qubits: [DrivenQubitParams; 2],
    /// Cavity frequency (rad/ns).
    pub omega_c: f64,
    /// Base frequency η (rad/ns).
    pub eta: f64,
    pub grid: Grid,
    pub n_max: usize,
}

impl SystemParams {
    pub fn new(
        qubits: [DrivenQubitParams; 2],
        omega_c: f64,
        eta: f64,
        grid: Grid,
        n_max: usize,
    ) -> Result<Self, SystemError> {
        let sys = Self { qubits, omega_c, eta, grid, n_max };
        sys.check_basic()?;
        Ok(sys)
    }

    fn check_basic(&self) -> Result<(), SystemError> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(SystemError::Invalid("eta must be positive".into()));
        }
        if self.grid.m == 0 {
            return Err(SystemError::Invalid("m must be at least 1".into()));
        }
        for (j, q) in self.qubits.iter().enumerate() {
            let all = [q.omega, q.omega_d, q.g, q.rabi, q.phase];
            if all.iter().any(|x| !x.is_finite()) {
                return Err(SystemError::Invalid(format!("qubit {} has non-finite inputs", j + 1)));
            }
            if q.rabi < 0.0 || q.g < 0.0 {
                return Err(SystemError::Invalid(format!(
                    "qubit {}: g and Omega must be non-negative",
                    j + 1
                )));
            }
            if q.w() <= 0.0 {
                return Err(SystemError::Precondition { qubit: j + 1, relation: "W > 0" });
            }
        }
        Ok(())
    }

    /// Period τ = 2π/η (ns).
    pub fn tau(&self) -> f64 {
        TAU / self.eta
    }

    /// Gate time τ_m = mτ (ns).
    pub fn tau_m(&self) -> f64 {
        f64::from(self.grid.m) * self.tau()
    }

    pub fn dressed(&self, j: usize) -> Dressed {
        let q = &self.qubits[j];
        let theta = q.theta();
        Dressed {
            g: q.g,
            delta: q.delta(),
            big_delta: q.cavity_detuning(self.omega_c),
            w: q.w(),
            sin_theta: theta.sin(),
            cos_theta: theta.cos(),
            phase: q.phase,
        }
    }

    /// Checks Δⱼ = pⱼη and Wⱼ = qⱼη.
    pub fn check_grid(&self) -> Result<(), SystemError> {
        for j in 0..2 {
            let d = self.dressed(j);
            for (quantity, value, expected) in
                [("Delta", d.big_delta, self.grid.p[j]), ("W", d.w, self.grid.q[j])]
            {
                let ratio = value / self.eta;
                if (ratio - expected as f64).abs() > GRID_TOL {
                    return Err(SystemError::OffGrid { qubit: j + 1, quantity, value: ratio, expected });
                }
            }
        }
        Ok(())
    }

    /// Checks Δⱼ ≠ 0, Wⱼ ≠ |Δⱼ|, Wⱼ ≠ |2Δⱼ|.
    pub fn check_well_defined(&self) -> Result<(), SystemError> {
        for j in 0..2 {
            let d = self.dressed(j);
            let scale = d.big_delta.abs().max(d.w);
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * scale;
            if close(d.big_delta, 0.0) {
                return Err(SystemError::Precondition { qubit: j + 1, relation: "Delta != 0" });
            }
            if close(d.w, d.big_delta.abs()) {
                return Err(SystemError::Precondition { qubit: j + 1, relation: "W != |Delta|" });
            }
            if close(d.w, 2.0 * d.big_delta.abs()) {
                return Err(SystemError::Precondition { qubit: j + 1, relation: "W != |2 Delta|" });
            }
        }
        Ok(())
    }

    /// Non-fatal validity flags.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..2 {
            let d = self.dressed(j);
            let ratio = d.g / d.w;
            if ratio > VALIDITY_RATIO {
                out.push(format!(
                    "qubit {}: g/W = {ratio:.3} exceeds {VALIDITY_RATIO} (perturbative expansion)",
                    j + 1
                ));
            }
            let rwa = d.big_delta.abs() / (self.omega_c + self.qubits[j].omega_d);
            if rwa > VALIDITY_RATIO {
                out.push(format!(
                    "qubit {}: |Delta|/(omega_c + omega_d) = {rwa:.3} exceeds {VALIDITY_RATIO} (rotating wave)",
                    j + 1
                ));
            }
        }
        out
    }

    /// Same system with the couplings replaced (values in rad/ns).
    pub fn with_couplings(&self, g1: f64, g2: f64) -> Self {
        let mut s = self.clone();
        s.qubits[0].g = g1;
        s.qubits[1].g = g2;
        s
    }

    /// Builds a resonantly driven (δ = 0) system directly on the grid.
    ///
    /// Frequencies are in GHz; ω_d,j = ω_c − pⱼη and Ωⱼ = qⱼη/2.
    pub fn resonant_on_grid(
        omega_c_ghz: f64,
        eta_ghz: f64,
        grid: Grid,
        g_ghz: [f64; 2],
        n_max: usize,
    ) -> Result<Self, SystemError> {
        let q = |j: usize| {
            let wd = omega_c_ghz - grid.p[j] as f64 * eta_ghz;
            DrivenQubitParams::from_ghz(wd, wd, g_ghz[j], 0.5 * grid.q[j] as f64 * eta_ghz, 0.0)
        };
        Self::new([q(0), q(1)], ghz_to_angular(omega_c_ghz), ghz_to_angular(eta_ghz), grid, n_max)
    }

    pub fn eta_ghz(&self) -> f64 {
        angular_to_ghz(self.eta)
    }
}

/// Reference operating points for the two demonstrated gates.
pub mod presets {
    use super::*;

    /// iSWAP point: q = (7, 4), p = (20, 17), w = 13, m = 40, η/2π = 50 MHz.
    pub fn rc7() -> SystemParams {
        let q1 = DrivenQubitParams::from_ghz(6.0, 6.0, 0.026, 0.175, 0.0);
        let q2 = DrivenQubitParams::from_ghz(6.15, 6.15, 0.031, 0.1, 0.0);
        let grid = Grid { p: [20, 17], q: [7, 4], w: 13, m: 40 };
        SystemParams::new([q1, q2], ghz_to_angular(7.0), ghz_to_angular(0.05), grid, 2)
            .expect("preset is valid")
    }

    /// Double-excitation point: q = (12, 11), p = (10, −13), w = −2, m = 10.
    pub fn rc9() -> SystemParams {
        let q1 = DrivenQubitParams::from_ghz(5.7, 5.7, 0.021, 0.3, 0.0);
        let q2 = DrivenQubitParams::from_ghz(6.85, 6.85, 0.023, 0.275, 0.0);
        let grid = Grid { p: [10, -13], q: [12, 11], w: -2, m: 10 };
        SystemParams::new([q1, q2], ghz_to_angular(6.2), ghz_to_angular(0.05), grid, 2)
            .expect("preset is valid")
    }
}
