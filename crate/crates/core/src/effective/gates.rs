//! Ideal entangling gates and closed-form shift infidelities.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::resonance::{build_vqq, resonant_vqq, GateKind, ResonanceCondition};
use super::shifts::{dispersive_shifts, ShiftCoefficients};
use super::EffectiveError;
use crate::operators::{
    expm, single_qubit, tensor, BasisDescriptor, OperatorMatrix, PauliKind, TwoQubitState,
};
use crate::system::SystemParams;

const I: C64 = C64::new(0.0, 1.0);

fn swap_like(a: usize, b: usize) -> OperatorMatrix {
    let mut m = DMatrix::<C64>::identity(4, 4);
    m[(a, a)] = C64::new(0.0, 0.0);
    m[(b, b)] = C64::new(0.0, 0.0);
    m[(a, b)] = I;
    m[(b, a)] = I;
    OperatorMatrix::new(m, BasisDescriptor::TWO_QUBIT).expect("4x4")
}

/// iSWAP: |eg⟩ ↦ i|ge⟩, |ge⟩ ↦ i|eg⟩.
pub fn iswap() -> OperatorMatrix {
    swap_like(TwoQubitState::EG.index(), TwoQubitState::GE.index())
}

/// Double-excitation gate: |ee⟩ ↦ i|gg⟩, |gg⟩ ↦ i|ee⟩.
pub fn double_excitation() -> OperatorMatrix {
    swap_like(TwoQubitState::EE.index(), TwoQubitState::GG.index())
}

/// Target gate for conditions with a named gate at ideal timing.
pub fn named_gate(cond: ResonanceCondition) -> Option<OperatorMatrix> {
    match cond.gate() {
        GateKind::ISwap if cond.id() == 7 => Some(iswap()),
        GateKind::DoubleExcitation if cond.id() == 9 => Some(double_excitation()),
        _ => None,
    }
}

/// Gate generated by the resonant-drive interaction of `cond` over `tau_m`.
///
/// Condition 1 returns the dressed controlled-phase
/// U_φ = e^{i2𝒥τ} e^{−i2𝒥τσ₁ᶻ} e^{−i2𝒥τσ₂ᶻ} U_m = diag(1, 1, 1, e^{i8𝒥τ}).
pub fn ideal_gate(cond: ResonanceCondition, tau_m: f64, j: f64) -> OperatorMatrix {
    let v = resonant_vqq(cond, j);
    let u = expm(&v, tau_m).expect("interaction is Hermitian");
    if cond.id() != 1 {
        return u;
    }
    let id = OperatorMatrix::identity(BasisDescriptor::SINGLE_QUBIT);
    let z = single_qubit(PauliKind::Z);
    let z1 = tensor(&[&z, &id]).expect("two-qubit layout");
    let z2 = tensor(&[&id, &z]).expect("two-qubit layout");
    let a = 2.0 * j * tau_m;
    let phase = C64::from_polar(1.0, a);
    let r1 = expm(&z1, a).expect("Hermitian");
    let r2 = expm(&z2, a).expect("Hermitian");
    (r1 * r2 * u).scale(phase)
}

/// V_qq + Λ_n on the two-qubit space.
pub fn build_effective_hamiltonian(
    sys: &SystemParams,
    cond: ResonanceCondition,
    n: usize,
) -> Result<OperatorMatrix, EffectiveError> {
    let (v, _) = build_vqq(sys, cond)?;
    let shifts = dispersive_shifts(sys)?;
    Ok(v + shifts.lambda_n(n))
}

/// Overlap |⟨u|U₀†U|u⟩|² for U₀ = e^{−iκτX} and U = e^{−iτ(hZ + κX)} on a
/// two-level block, where `flip` selects the lower state of the block.
fn block_overlap(kappa: f64, hz: f64, tau: f64, flip: bool) -> f64 {
    let hz = if flip { -hz } else { hz };
    let om = hz.hypot(kappa);
    if om == 0.0 {
        return 1.0;
    }
    let (sk, ck) = (kappa * tau).sin_cos();
    let (so, co) = (om * tau).sin_cos();
    let re = ck * co + sk * so * kappa / om;
    let im = ck * so * hz / om;
    re * re + im * im
}

/// F_s = |⟨ψ|U_m†U′_m|ψ⟩|² in the n-photon sector, with U_m generated by V_qq
/// alone and U′_m by V_qq + Λ_n.
pub fn fs_closed_form(
    cond: ResonanceCondition,
    kappa: f64,
    shifts: &ShiftCoefficients,
    tau_m: f64,
    state: TwoQubitState,
    n: usize,
) -> Result<f64, EffectiveError> {
    use TwoQubitState::*;
    let l = n as f64 + 0.5;
    let [a, b] = shifts.lambda;
    let diag = |s: TwoQubitState| match s {
        EE => l * (a + b),
        EG => l * (a - b),
        GE => l * (-a + b),
        GG => l * (-a - b),
    };
    // Pairs (upper, lower, coupling) where V_qq acts as a σˣ-like term.
    let blocks: Vec<(TwoQubitState, TwoQubitState, f64)> = match cond.id() {
        1 => Vec::new(),
        4 => vec![(EE, GE, kappa), (EG, GG, -kappa)],
        7 => vec![(EG, GE, kappa)],
        9 => vec![(EE, GG, kappa)],
        _ => return Err(EffectiveError::UnsupportedCondition(cond)),
    };
    for (u, v, k) in blocks {
        if state == u || state == v {
            let hz = 0.5 * (diag(u) - diag(v));
            return Ok(block_overlap(k, hz, tau_m, state == v));
        }
    }
    Ok(1.0)
}

/// Closed-form F_s for `sys` at its gate time τ_m.
pub fn fs_analytic(
    sys: &SystemParams,
    cond: ResonanceCondition,
    state: TwoQubitState,
    n: usize,
) -> Result<f64, EffectiveError> {
    if ![1, 4, 7, 9].contains(&cond.id()) {
        return Err(EffectiveError::UnsupportedCondition(cond));
    }
    let (v, _) = build_vqq(sys, cond)?;
    let shifts = dispersive_shifts(sys)?;
    let kappa = coupling_strength(&v, cond);
    fs_closed_form(cond, kappa, &shifts, sys.tau_m(), state, n)
}

/// Reads the coupling κ of the σˣ-like block out of a built interaction.
fn coupling_strength(v: &OperatorMatrix, cond: ResonanceCondition) -> f64 {
    use TwoQubitState::*;
    let (r, c) = match cond.id() {
        1 => (EE, EE),
        4 => (EE, GE),
        7 => (EG, GE),
        _ => (EE, GG),
    };
    v.get(r.index(), c.index()).re
}

/// F_s for a superposition under condition 1, where only phases accrue:
/// |Σₖ |cₖ|² e^{−iΛₖτ_m}|².
pub fn fs_phase_only(coeffs: &[C64; 4], shifts: &ShiftCoefficients, tau_m: f64, n: usize) -> f64 {
    let lam = shifts.lambda_n(n);
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let sum: C64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm_sqr() * C64::from_polar(1.0, -lam.get(k, k).re * tau_m))
        .sum();
    (sum / norm).norm_sqr()
}
