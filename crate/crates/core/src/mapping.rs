//! Mapping of double-dot spin qubits and triple-dot RX qubits onto the
//! canonical driven-qubit form.
//!
//! Inputs are energies expressed as frequency/2π in GHz. Only the sweet spot
//! ε₀ = 0 is supported.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use thiserror::Error;

use crate::system::DrivenQubitParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("degenerate spectrum: V = sqrt((2t - Bz)^2 + Bx^2) = 0, two-level reduction breaks down")]
    Degenerate,
    #[error("only the operating point epsilon0 = 0 is supported (got {0})")]
    OperatingPoint(f64),
    #[error("Hubbard gap must be nonzero")]
    ZeroGap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqdParams {
    pub tunnel_2t: f64,
    pub bz: f64,
    pub bx: f64,
    pub g_charge: f64,
    pub drive_amp: f64,
    pub drive_freq: f64,
    pub drive_phase: f64,
    pub epsilon0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqdSpectrum {
    /// Analytic eigenfrequencies ω₀..ω₃ (GHz).
    pub omega: [f64; 4],
    /// Eigenvalues of the 4×4 Hamiltonian from a dense solver, ascending.
    pub numeric: [f64; 4],
    pub w_cal: f64,
    pub v_cal: f64,
    /// Mixing angle Φ with tan Φ = Bˣ/(2t − Bᶻ).
    pub phi: f64,
    /// Companion angle with tan Φ_a = Bˣ/(2t + Bᶻ).
    pub phi_a: f64,
    /// Dipole elements d⁰¹, d⁰², d¹³, d²³ of τˣ between eigenstates.
    pub dipoles: [f64; 4],
}

/// H′_d in the basis {|+↑⟩, |−↓⟩, |+↓⟩, |−↑⟩}.
pub fn dqd_hamiltonian(p: &DqdParams) -> Matrix4<f64> {
    let a = 0.5 * (p.tunnel_2t + p.bz);
    let b = 0.5 * (p.tunnel_2t - p.bz);
    let x = -0.5 * p.bx;
    Matrix4::new(
        a, x, 0.0, 0.0, //
        x, -a, 0.0, 0.0, //
        0.0, 0.0, b, x, //
        0.0, 0.0, x, -b,
    )
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidityReport {
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

fn validate_dqd(p: &DqdParams) -> Result<(), MappingError> {
    let vals = [p.tunnel_2t, p.bz, p.bx, p.g_charge, p.drive_amp, p.drive_freq, p.drive_phase, p.epsilon0];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(MappingError::Invalid("non-finite input".into()));
    }
    if p.epsilon0 != 0.0 {
        return Err(MappingError::OperatingPoint(p.epsilon0));
    }
    if p.tunnel_2t <= 0.0 {
        return Err(MappingError::Invalid("2t must be positive".into()));
    }
    if p.bx < 0.0 {
        return Err(MappingError::Invalid("Bx must be non-negative".into()));
    }
    Ok(())
}

pub fn dqd_spectrum(p: &DqdParams) -> Result<DqdSpectrum, MappingError> {
    validate_dqd(p)?;
    let w_cal = (p.tunnel_2t + p.bz).hypot(p.bx);
    let v_cal = (p.tunnel_2t - p.bz).hypot(p.bx);
    if v_cal == 0.0 {
        return Err(MappingError::Degenerate);
    }
    let phi = p.bx.atan2(p.tunnel_2t - p.bz);
    let phi_a = p.bx.atan2(p.tunnel_2t + p.bz);
    let half = 0.5 * (phi + phi_a);
    let mut numeric: Vec<f64> = dqd_hamiltonian(p).symmetric_eigen().eigenvalues.iter().copied().collect();
    numeric.sort_by(f64::total_cmp);
    Ok(DqdSpectrum {
        omega: [-0.5 * w_cal, -0.5 * v_cal, 0.5 * v_cal, 0.5 * w_cal],
        numeric: [numeric[0], numeric[1], numeric[2], numeric[3]],
        w_cal,
        v_cal,
        phi,
        phi_a,
        dipoles: [half.sin(), half.cos(), half.cos(), -half.sin()],
    })
}

/// Canonical parameters of a spin qubit in a double dot.
///
/// The drive and cavity enter with the factor −sin(Φ/2); a negative factor
/// is absorbed into the drive phase (φ = φ′ + π) and the cavity operator.
pub fn map_dqd(p: &DqdParams) -> Result<(DrivenQubitParams, ValidityReport), MappingError> {
    let s = dqd_spectrum(p)?;
    let factor = -(0.5 * s.phi).sin();
    let omega = 0.5 * (s.w_cal - s.v_cal);
    let mut report = ValidityReport::default();
    let mut phase = p.drive_phase;
    if factor < 0.0 {
        phase = (phase + PI).rem_euclid(2.0 * PI);
        report.notes.push("phase shifted by pi; cavity operator a -> -a (no observable effect)".into());
    }
    if p.tunnel_2t <= p.bz {
        report.warnings.push(format!("2t = {} does not exceed Bz = {} (spin-qubit reduction)", p.tunnel_2t, p.bz));
    }
    let ratio = omega / s.v_cal;
    if ratio > 0.1 {
        report.warnings.push(format!("(W - V)/2V = {ratio:.3} exceeds 0.1 (two-level reduction)"));
    }
    let q = DrivenQubitParams::from_ghz(
        omega,
        p.drive_freq,
        p.g_charge * factor.abs(),
        0.5 * p.drive_amp * factor.abs(),
        phase,
    );
    Ok((q, report))
}

/// Charge-qubit form, valid when Bᶻ = Bˣ = 0: ω = 2t, g = g_c, 2Ω = 𝓕.
pub fn map_charge_qubit(p: &DqdParams) -> Result<DrivenQubitParams, MappingError> {
    validate_dqd(p)?;
    if p.bz != 0.0 || p.bx != 0.0 {
        return Err(MappingError::Invalid("charge-qubit form requires Bz = Bx = 0".into()));
    }
    Ok(DrivenQubitParams::from_ghz(p.tunnel_2t, p.drive_freq, p.g_charge, 0.5 * p.drive_amp, p.drive_phase))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxParams {
    pub tunnel: f64,
    pub hubbard_gap: f64,
    pub g_charge: f64,
    pub exchange: Option<(f64, f64)>,
    pub epsilon0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxCoupling {
    /// Coupling g/2π (GHz).
    pub g: f64,
    /// Qubit frequency ω/2π (GHz).
    pub omega: f64,
    /// Charge admixture ξ = t/Δ.
    pub xi: f64,
}

/// Exchange energies (J_l, J_r) = (t²/(Δ+ε), t²/(Δ−ε)).
pub fn rx_exchange(p: &RxParams, epsilon: f64) -> (f64, f64) {
    let t2 = p.tunnel * p.tunnel;
    (t2 / (p.hubbard_gap + epsilon), t2 / (p.hubbard_gap - epsilon))
}

/// √(J² + 3j²) with J = (J_l + J_r)/2, j = (J_l − J_r)/2.
pub fn rx_frequency(j_l: f64, j_r: f64) -> f64 {
    let big = 0.5 * (j_l + j_r);
    let small = 0.5 * (j_l - j_r);
    (big * big + 3.0 * small * small).sqrt()
}

pub fn map_rx(p: &RxParams) -> Result<(RxCoupling, ValidityReport), MappingError> {
    if p.epsilon0 != 0.0 {
        return Err(MappingError::OperatingPoint(p.epsilon0));
    }
    if p.hubbard_gap == 0.0 {
        return Err(MappingError::ZeroGap);
    }
    let xi = p.tunnel / p.hubbard_gap;
    if !(0.0..1.0).contains(&xi) {
        return Err(MappingError::Invalid(format!("charge admixture xi = {xi} outside [0, 1)")));
    }
    let mut report = ValidityReport::default();
    if xi > 0.3 {
        report.warnings.push(format!("xi = {xi:.3} exceeds 0.3 (perturbative validity)"));
    }
    let (j_l, j_r) = p.exchange.unwrap_or_else(|| rx_exchange(p, 0.0));
    let g = 0.5 * 3f64.sqrt() * xi * xi * p.g_charge;
    Ok((RxCoupling { g, omega: rx_frequency(j_l, j_r), xi }, report))
}
