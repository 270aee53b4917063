//! Time evolution under the interaction-picture coupling.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::effective::{build_vqq, ideal_gate, named_gate, EffectiveError, ResonanceCondition};
use crate::interaction::InteractionModel;
use crate::operators::{basis_state, hermitian_propagator, lift_two_qubit, TwoQubitState};
use crate::system::SystemParams;
use crate::units::RateConvention;

/// Default integration step (ns).
pub const DEFAULT_DT: f64 = 0.01;
/// Largest change of F₀ tolerated when the step is halved.
pub const STEP_HALVING_TOL: f64 = 1e-4;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Effective(#[from] EffectiveError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("step dt = {dt} does not divide duration {duration}")]
    StepMismatch { dt: f64, duration: f64 },
    #[error("not converged: halving dt changed F0 by {change:.3e} (tolerance {tol:.1e})")]
    Convergence { change: f64, tol: f64 },
    #[error("non-physical density matrix: {0}")]
    NonPhysical(String),
    #[error("master equation requires resonant driving (qubit {0} has delta != 0)")]
    DetunedDrive(usize),
}

/// Decay rates entering the master equation (1/ns).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DecayRates {
    pub gamma: [f64; 2],
    pub kappa: f64,
}

impl DecayRates {
    pub fn from_khz(gamma1: f64, gamma2: f64, kappa: f64, conv: RateConvention) -> Result<Self, DynamicsError> {
        if [gamma1, gamma2, kappa].iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(DynamicsError::Invalid("decay rates must be finite and non-negative".into()));
        }
        Ok(Self {
            gamma: [conv.khz_to_per_ns(gamma1), conv.khz_to_per_ns(gamma2)],
            kappa: conv.khz_to_per_ns(kappa),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.gamma == [0.0, 0.0] && self.kappa == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub data: DMatrix<C64>,
    pub time: f64,
}

impl DensityMatrix {
    pub fn pure(psi: &DVector<C64>) -> Self {
        Self { data: psi * psi.adjoint(), time: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.data - self.data.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(DynamicsError::NonPhysical(format!("max |rho - rho^dag| = {herm:.2e}")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(DynamicsError::NonPhysical(format!("trace = {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-8 {
            return Err(DynamicsError::NonPhysical(format!("min eigenvalue = {min:.2e}")));
        }
        Ok(())
    }

    /// Population of cavity level `n` for a composite-space state.
    pub fn photon_population(&self, n: usize, n_max: usize) -> f64 {
        TwoQubitState::ALL
            .iter()
            .map(|s| {
                let i = s.composite_index(n, n_max);
                self.data[(i, i)].re
            })
            .sum()
    }

    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = &self.data - &other.data;
        let h = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
        0.5 * h.symmetric_eigen().eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub final_state: DensityMatrix,
    pub fidelity: f64,
    pub f0: f64,
}

/// Tr[a·b], real part.
pub fn fidelity_trace(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, DynamicsError> {
    if a.dim() != b.dim() {
        return Err(DynamicsError::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let mut acc = ZERO;
    for i in 0..d {
        for k in 0..d {
            acc += a.data[(i, k)] * b.data[(k, i)];
        }
    }
    debug_assert!(acc.im.abs() <= 1e-10 * acc.norm().max(1.0), "imaginary residue {}", acc.im);
    Ok(acc.re)
}

fn step_count(duration: f64, dt: f64) -> Result<usize, DynamicsError> {
    if dt.is_nan() || dt <= 0.0 || duration.is_nan() || duration < 0.0 {
        return Err(DynamicsError::Invalid("dt must be positive and duration non-negative".into()));
    }
    let n = (duration / dt).round();
    if (n * dt - duration).abs() > 1e-9 * duration.max(1.0) {
        return Err(DynamicsError::StepMismatch { dt, duration });
    }
    Ok(n as usize)
}

/// One-step propagator for the Schrödinger equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// e^{−iV(t+dt/2)dt}.
    ExponentialMidpoint,
    /// Fourth-order Magnus step from the two Gauss-Legendre nodes.
    #[default]
    Magnus4,
}

impl Integrator {
    fn step(self, model: &InteractionModel, t: f64, dt: f64) -> DMatrix<C64> {
        match self {
            Integrator::ExponentialMidpoint => hermitian_propagator(&model.at(t + 0.5 * dt), dt),
            Integrator::Magnus4 => {
                let c = 3f64.sqrt() / 6.0;
                let h1 = model.at(t + (0.5 - c) * dt);
                let h2 = model.at(t + (0.5 + c) * dt);
                let comm = &h2 * &h1 - &h1 * &h2;
                let k = (&h1 + &h2) * C64::new(0.5 * dt, 0.0)
                    - comm * C64::new(0.0, 3f64.sqrt() * dt * dt / 12.0);
                hermitian_propagator(&k, 1.0)
            }
        }
    }
}

pub fn propagate_schrodinger(
    psi0: &DVector<C64>,
    sys: &SystemParams,
    duration: f64,
    dt: f64,
) -> Result<DVector<C64>, DynamicsError> {
    propagate_schrodinger_with(psi0, sys, duration, dt, Integrator::default())
}

pub fn propagate_schrodinger_with(
    psi0: &DVector<C64>,
    sys: &SystemParams,
    duration: f64,
    dt: f64,
    integrator: Integrator,
) -> Result<DVector<C64>, DynamicsError> {
    let model = InteractionModel::new(sys);
    if psi0.len() != model.dim() {
        return Err(DynamicsError::DimensionMismatch(psi0.len(), model.dim()));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(DynamicsError::Invalid("initial state is not normalized".into()));
    }
    let steps = step_count(duration, dt)?;
    let mut psi = psi0.clone();
    for k in 0..steps {
        let u = integrator.step(&model, k as f64 * dt, dt);
        psi = u * psi;
    }
    Ok(psi)
}

/// Sparse right-hand side of the master equation on a row-major density matrix.
struct Liouvillian {
    d: usize,
    levels: usize,
    frequencies: Vec<f64>,
    /// Nonzero positions of V(t).
    pattern: Vec<(usize, usize)>,
    /// (pattern index, harmonic, value, conjugated) contributions.
    terms: Vec<(usize, usize, C64, bool)>,
    gamma: [f64; 2],
    kappa: f64,
    flip: [Vec<usize>; 2],
    bits: [Vec<u8>; 2],
    photons: Vec<usize>,
}

impl Liouvillian {
    fn new(model: &InteractionModel, rates: DecayRates) -> Self {
        let d = model.dim();
        let levels = model.basis.fock_levels();
        let mut pattern: Vec<(usize, usize)> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut terms = Vec::new();
        for (k, h) in model.harmonics.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    let b = h.op[(r, c)];
                    if b == ZERO {
                        continue;
                    }
                    for (pos, conj) in [((r, c), false), ((c, r), true)] {
                        let next = pattern.len();
                        let pi = *index.entry(pos).or_insert(next);
                        if pi == next {
                            pattern.push(pos);
                        }
                        terms.push((pi, k, b, conj));
                    }
                }
            }
        }
        let qubit_index = |a: usize| a / levels;
        let flip = [2usize, 1].map(|mask| (0..d).map(|a| (qubit_index(a) ^ mask) * levels + a % levels).collect());
        let bits = [2usize, 1].map(|mask| (0..d).map(|a| u8::from(qubit_index(a) & mask != 0)).collect());
        Self {
            d,
            levels,
            frequencies: model.harmonics.iter().map(|h| h.frequency).collect(),
            pattern,
            terms,
            gamma: rates.gamma,
            kappa: rates.kappa,
            flip,
            bits,
            photons: (0..d).map(|a| a % levels).collect(),
        }
    }

    fn values_at(&self, t: f64, out: &mut [C64]) {
        let phases: Vec<C64> = self.frequencies.iter().map(|nu| C64::from_polar(1.0, nu * t)).collect();
        out.iter_mut().for_each(|v| *v = ZERO);
        for &(pi, k, b, conj) in &self.terms {
            let z = phases[k] * b;
            out[pi] += if conj { z.conj() } else { z };
        }
    }

    /// out = L(ρ) given the values of V on the pattern.
    fn apply(&self, v: &[C64], rho: &[C64], out: &mut [C64]) {
        let d = self.d;
        out.iter_mut().for_each(|x| *x = ZERO);
        let mi = C64::new(0.0, -1.0);
        for (&(r, c), &val) in self.pattern.iter().zip(v) {
            let w = mi * val;
            // −i Vρ: row r gains V[r,c]·ρ[c,:].
            let (src, dst) = (c * d, r * d);
            for k in 0..d {
                out[dst + k] += w * rho[src + k];
            }
            // +i ρV: column c gains ρ[:,r]·V[r,c].
            for k in 0..d {
                out[k * d + c] -= w * rho[k * d + r];
            }
        }
        for j in 0..2 {
            let g = 0.5 * self.gamma[j];
            if g == 0.0 {
                continue;
            }
            let (flip, bits) = (&self.flip[j], &self.bits[j]);
            for a in 0..d {
                for b in 0..d {
                    let mut x = -rho[a * d + b];
                    if bits[a] == bits[b] {
                        x += rho[flip[a] * d + flip[b]];
                    }
                    out[a * d + b] += g * x;
                }
            }
        }
        if self.kappa != 0.0 {
            let k = 0.5 * self.kappa;
            let top = self.levels - 1;
            for a in 0..d {
                let na = self.photons[a];
                for b in 0..d {
                    let nb = self.photons[b];
                    let mut x = -((na + nb) as f64) * rho[a * d + b];
                    if na < top && nb < top {
                        x += 2.0 * (((na + 1) * (nb + 1)) as f64).sqrt() * rho[(a + 1) * d + b + 1];
                    }
                    out[a * d + b] += k * x;
                }
            }
        }
    }
}

fn check_resonant(sys: &SystemParams) -> Result<(), DynamicsError> {
    for (j, q) in sys.qubits.iter().enumerate() {
        if q.delta() != 0.0 {
            return Err(DynamicsError::DetunedDrive(j + 1));
        }
    }
    Ok(())
}

/// Integrates the master equation with classical RK4, calling `observe`
/// every `every` steps (and at the end).
fn lindblad_run(
    rho0: &DensityMatrix,
    sys: &SystemParams,
    rates: DecayRates,
    duration: f64,
    dt: f64,
    every: usize,
    mut observe: impl FnMut(&DensityMatrix),
) -> Result<DensityMatrix, DynamicsError> {
    check_resonant(sys)?;
    rho0.validate()?;
    let model = InteractionModel::new(sys);
    let d = model.dim();
    if rho0.dim() != d {
        return Err(DynamicsError::DimensionMismatch(rho0.dim(), d));
    }
    let steps = step_count(duration, dt)?;
    let lv = Liouvillian::new(&model, rates);
    let n = d * d;
    // Row-major flattening.
    let mut rho: Vec<C64> = (0..n).map(|i| rho0.data[(i / d, i % d)]).collect();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let mut tmp = vec![ZERO; n];
    let np = lv.pattern.len();
    let (mut v0, mut vh, mut v1) = (vec![ZERO; np], vec![ZERO; np], vec![ZERO; np]);
    let to_matrix = |rho: &[C64], t: f64| DensityMatrix {
        data: DMatrix::from_fn(d, d, |i, j| rho[i * d + j]),
        time: t,
    };
    lv.values_at(0.0, &mut v1);
    for s in 0..steps {
        let t = s as f64 * dt;
        std::mem::swap(&mut v0, &mut v1);
        lv.values_at(t + 0.5 * dt, &mut vh);
        lv.values_at(t + dt, &mut v1);
        lv.apply(&v0, &rho, &mut k1);
        axpy(&rho, 0.5 * dt, &k1, &mut tmp);
        lv.apply(&vh, &tmp, &mut k2);
        axpy(&rho, 0.5 * dt, &k2, &mut tmp);
        lv.apply(&vh, &tmp, &mut k3);
        axpy(&rho, dt, &k3, &mut tmp);
        lv.apply(&v1, &tmp, &mut k4);
        let c = dt / 6.0;
        for i in 0..n {
            rho[i] += c * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        if every > 0 && (s + 1) % every == 0 && s + 1 != steps {
            observe(&to_matrix(&rho, t + dt));
        }
    }
    let out = to_matrix(&rho, steps as f64 * dt);
    observe(&out);
    Ok(out)
}

fn axpy(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

pub fn propagate_lindblad(
    rho0: &DensityMatrix,
    sys: &SystemParams,
    rates: DecayRates,
    duration: f64,
    dt: f64,
) -> Result<DensityMatrix, DynamicsError> {
    lindblad_run(rho0, sys, rates, duration, dt, 0, |_| {})
}

/// Master-equation states sampled every `every` steps, ending with the final state.
pub fn lindblad_trajectory(
    rho0: &DensityMatrix,
    sys: &SystemParams,
    rates: DecayRates,
    duration: f64,
    dt: f64,
    every: usize,
) -> Result<Vec<DensityMatrix>, DynamicsError> {
    let mut samples = Vec::new();
    lindblad_run(rho0, sys, rates, duration, dt, every.max(1), |r| samples.push(r.clone()))?;
    Ok(samples)
}

/// Numerical settings shared by the gate-level drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub integrator: Integrator,
    pub check_convergence: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self { dt: DEFAULT_DT, integrator: Integrator::default(), check_convergence: false }
    }
}

/// Ideal final state (U ⊗ I)|ψᵢ, 0⟩ of the gate associated with `cond`.
pub fn ideal_final_state(
    sys: &SystemParams,
    cond: ResonanceCondition,
    initial: TwoQubitState,
) -> Result<DVector<C64>, DynamicsError> {
    let gate = match named_gate(cond) {
        Some(g) => g,
        None => {
            let (_, j) = build_vqq(sys, cond)?;
            ideal_gate(cond, sys.tau_m(), j)
        }
    };
    let lifted = lift_two_qubit(&gate, sys.n_max).map_err(|e| DynamicsError::Invalid(e.to_string()))?;
    Ok(lifted.apply(&basis_state(initial, 0, sys.n_max)))
}

/// F₀ = |⟨ψ_f|ψ(τ_m)⟩|² from unitary evolution of |ψᵢ, 0⟩.
pub fn gate_fidelity_f0(
    sys: &SystemParams,
    cond: ResonanceCondition,
    initial: TwoQubitState,
    settings: SimSettings,
) -> Result<f64, DynamicsError> {
    let target = ideal_final_state(sys, cond, initial)?;
    let psi0 = basis_state(initial, 0, sys.n_max);
    let run = |dt: f64| -> Result<f64, DynamicsError> {
        let psi = propagate_schrodinger_with(&psi0, sys, sys.tau_m(), dt, settings.integrator)?;
        Ok(target.dotc(&psi).norm_sqr())
    };
    let f0 = run(settings.dt)?;
    if settings.check_convergence {
        let finer = run(0.5 * settings.dt)?;
        let change = (finer - f0).abs();
        if change > STEP_HALVING_TOL {
            return Err(DynamicsError::Convergence { change, tol: STEP_HALVING_TOL });
        }
    }
    Ok(f0)
}

/// Noiseless reference ρ⁽⁰⁾(τ_m) from the master equation.
pub fn reference_state(
    sys: &SystemParams,
    initial: TwoQubitState,
    settings: SimSettings,
) -> Result<DensityMatrix, DynamicsError> {
    let rho0 = DensityMatrix::pure(&basis_state(initial, 0, sys.n_max));
    propagate_lindblad(&rho0, sys, DecayRates::default(), sys.tau_m(), settings.dt)
}

/// Full gate simulation: F against the noiseless reference and F₀ of the reference.
pub fn simulate(
    sys: &SystemParams,
    cond: ResonanceCondition,
    initial: TwoQubitState,
    rates: DecayRates,
    settings: SimSettings,
) -> Result<SimOutcome, DynamicsError> {
    let reference = reference_state(sys, initial, settings)?;
    let target = DensityMatrix::pure(&ideal_final_state(sys, cond, initial)?);
    let f0 = fidelity_trace(&target, &reference)?;
    if settings.check_convergence {
        let finer = reference_state(sys, initial, SimSettings { dt: 0.5 * settings.dt, ..settings })?;
        let change = (fidelity_trace(&target, &finer)? - f0).abs();
        if change > STEP_HALVING_TOL {
            return Err(DynamicsError::Convergence { change, tol: STEP_HALVING_TOL });
        }
    }
    // The reference is pure up to integration error, so F = 1 at zero rates by definition.
    if rates.is_zero() {
        return Ok(SimOutcome { final_state: reference, fidelity: 1.0, f0 });
    }
    let rho0 = DensityMatrix::pure(&basis_state(initial, 0, sys.n_max));
    let final_state = propagate_lindblad(&rho0, sys, rates, sys.tau_m(), settings.dt)?;
    let fidelity = fidelity_trace(&reference, &final_state)?;
    Ok(SimOutcome { final_state, fidelity, f0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub gamma_khz: f64,
    pub kappa_khz: f64,
    pub error: f64,
}

/// Worker count: `SIDEBAND_THREADS` if set, otherwise the rayon default.
pub fn worker_threads() -> usize {
    std::env::var("SIDEBAND_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// 1 − F over the (γ, κ) grid, γ applied to both qubits.
///
/// Rows are ordered γ-major, κ-minor regardless of scheduling.
pub fn sweep_decay(
    sys: &SystemParams,
    initial: TwoQubitState,
    gamma_khz: &[f64],
    kappa_khz: &[f64],
    convention: RateConvention,
    settings: SimSettings,
) -> Result<Vec<SweepRecord>, DynamicsError> {
    if gamma_khz.is_empty() || kappa_khz.is_empty() {
        return Err(DynamicsError::Invalid("sweep grids must be nonempty".into()));
    }
    let reference = reference_state(sys, initial, settings)?;
    let rho0 = DensityMatrix::pure(&basis_state(initial, 0, sys.n_max));
    let points: Vec<(f64, f64)> =
        gamma_khz.iter().flat_map(|g| kappa_khz.iter().map(move |k| (*g, *k))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .map_err(|e| DynamicsError::Invalid(e.to_string()))?;
    pool.install(|| {
        points
            .par_iter()
            .map(|&(g, k)| {
                let rates = DecayRates::from_khz(g, g, k, convention)?;
                if rates.is_zero() {
                    return Ok(SweepRecord { gamma_khz: g, kappa_khz: k, error: 0.0 });
                }
                let rho = propagate_lindblad(&rho0, sys, rates, sys.tau_m(), settings.dt)?;
                let f = fidelity_trace(&reference, &rho)?;
                Ok(SweepRecord { gamma_khz: g, kappa_khz: k, error: 1.0 - f })
            })
            .collect()
    })
}

/// (|eg⟩ + |ge⟩)/√2 ⊗ |0⟩, a state with a two-qubit coherence.
pub fn bell_eg_ge(n_max: usize) -> DVector<C64> {
    (basis_state(TwoQubitState::EG, 0, n_max) + basis_state(TwoQubitState::GE, 0, n_max))
        * C64::new(FRAC_1_SQRT_2, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::presets;

    #[test]
    fn zero_duration_is_identity() {
        let sys = presets::rc7();
        let psi = basis_state(TwoQubitState::EG, 0, 2);
        assert_eq!(propagate_schrodinger(&psi, &sys, 0.0, 0.01).unwrap(), psi);
    }

    #[test]
    fn uncoupled_state_is_frozen() {
        let sys = presets::rc7().with_couplings(0.0, 0.0);
        let psi = bell_eg_ge(2);
        let out = propagate_schrodinger(&psi, &sys, 5.0, 0.01).unwrap();
        assert!((out - &psi).norm() < 1e-14);
    }

    #[test]
    fn fidelity_of_mixed_state() {
        let d = 12;
        let rho = DensityMatrix { data: DMatrix::identity(d, d) / C64::new(d as f64, 0.0), time: 0.0 };
        assert!((fidelity_trace(&rho, &rho).unwrap() - 1.0 / d as f64).abs() < 1e-15);
    }

    #[test]
    fn step_must_divide_duration() {
        let sys = presets::rc7();
        let psi = basis_state(TwoQubitState::EG, 0, 2);
        assert!(matches!(
            propagate_schrodinger(&psi, &sys, 1.0, 0.3),
            Err(DynamicsError::StepMismatch { .. })
        ));
    }
}
