//! Drive-induced dispersive shifts and the one-qubit second-order terms.

use std::collections::BTreeSet;

use num_complex::Complex64 as C64;

use super::integrals::h_integral;
use super::EffectiveError;
use crate::operators::{BasisDescriptor, OperatorMatrix};
use crate::system::{Dressed, SystemParams};

/// Coefficients λⱼ of σⱼᶻ(a†a + ½), in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCoefficients {
    pub lambda: [f64; 2],
    /// True for qubits driven on resonance, where λⱼ is the shift χⱼ.
    pub resonant: [bool; 2],
}

impl ShiftCoefficients {
    pub fn chi(&self, j: usize) -> f64 {
        self.lambda[j]
    }

    /// Λ_n = (n+½)·diag(λ₁+λ₂, λ₁−λ₂, −λ₁+λ₂, −λ₁−λ₂) on {ee, eg, ge, gg}.
    pub fn lambda_n(&self, n: usize) -> OperatorMatrix {
        let l = n as f64 + 0.5;
        let [a, b] = self.lambda;
        let d = [a + b, a - b, -a + b, -a - b].map(|x| C64::new(l * x, 0.0));
        OperatorMatrix::from_diagonal(&d, BasisDescriptor::TWO_QUBIT).expect("4 entries")
    }
}

/// λ = −g²(δ² + 2Δδ + W²) / (2W(Δ² − W²)).
pub fn lambda_coefficient(d: &Dressed) -> f64 {
    -d.g * d.g * (d.delta * d.delta + 2.0 * d.big_delta * d.delta + d.w * d.w)
        / (2.0 * d.w * (d.big_delta * d.big_delta - d.w * d.w))
}

/// χ = −g²Ω/(Δ² − 4Ω²), the resonant-drive shift.
pub fn resonant_chi(g: f64, rabi: f64, big_delta: f64) -> f64 {
    -g * g * rabi / (big_delta * big_delta - 4.0 * rabi * rabi)
}

pub fn dispersive_shifts(sys: &SystemParams) -> Result<ShiftCoefficients, EffectiveError> {
    sys.check_well_defined()?;
    let lambda = [0, 1].map(|j| lambda_coefficient(&sys.dressed(j)));
    let resonant = [0, 1].map(|j| sys.qubits[j].delta() == 0.0);
    Ok(ShiftCoefficients { lambda, resonant })
}

/// Roots of δ² + 2Δδ + W² = 0, where the shift of a qubit vanishes.
pub fn shift_free_detuning(big_delta: f64, w: f64) -> Vec<f64> {
    let disc = big_delta * big_delta - w * w;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-big_delta];
    }
    let r = disc.sqrt();
    vec![-big_delta + r, -big_delta - r]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermFamily {
    SigmaPlusA2,
    SigmaMinusAdag2,
    SigmaMinusA2,
    SigmaPlusAdag2,
    SigmaZA2,
    SigmaZAdag2,
    SigmaPlusMinusNumber,
    SigmaPlusMinus,
    SigmaZNumber,
    SigmaZ,
}

/// Which one-qubit operator families survive the period average.
pub fn one_qubit_term_classes(big_delta: f64, w: f64) -> BTreeSet<TermFamily> {
    use TermFamily::*;
    let scale = big_delta.abs().max(w.abs()).max(f64::MIN_POSITIVE);
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * scale;
    let mut out = BTreeSet::from([SigmaZNumber, SigmaZ]);
    if eq(w, 2.0 * big_delta) {
        out.extend([SigmaPlusA2, SigmaMinusAdag2]);
    }
    if eq(w, -2.0 * big_delta) {
        out.extend([SigmaMinusA2, SigmaPlusAdag2]);
    }
    if eq(big_delta, 0.0) {
        out.extend([SigmaZA2, SigmaZAdag2]);
    }
    if eq(w, 0.0) {
        out.extend([SigmaPlusMinusNumber, SigmaPlusMinus]);
    }
    out
}

/// One-qubit second-order coefficients assembled term by term.
///
/// Each field multiplies an operator; hermitian conjugates are implied, so
/// e.g. the full Hamiltonian contains `a2_plus·σ⁺a†² + h.c.`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneQubitTerms {
    pub adag2_plus: C64,
    pub adag2_minus: C64,
    pub adag2_z: C64,
    pub number_plus: C64,
    pub number_minus: C64,
    /// Coefficient of σᶻa†a after adding the conjugate.
    pub number_z: f64,
    pub const_plus: C64,
    pub const_minus: C64,
    /// Coefficient of σᶻ after adding the conjugate.
    pub const_z: f64,
}

impl OneQubitTerms {
    /// Families with a nonzero coefficient above `tol`.
    pub fn families(&self, tol: f64) -> BTreeSet<TermFamily> {
        use TermFamily::*;
        let mut out = BTreeSet::new();
        let mut add = |c: C64, fams: [TermFamily; 2]| {
            if c.norm() > tol {
                out.extend(fams);
            }
        };
        // σ⁺a†² pairs with its conjugate σ⁻a².
        add(self.adag2_plus, [SigmaPlusAdag2, SigmaMinusA2]);
        add(self.adag2_minus, [SigmaMinusAdag2, SigmaPlusA2]);
        add(self.adag2_z, [SigmaZAdag2, SigmaZA2]);
        add(self.number_plus + self.number_minus.conj(), [SigmaPlusMinusNumber, SigmaPlusMinusNumber]);
        add(self.const_plus + self.const_minus.conj(), [SigmaPlusMinus, SigmaPlusMinus]);
        add(C64::new(self.number_z, 0.0), [SigmaZNumber, SigmaZNumber]);
        add(C64::new(self.const_z, 0.0), [SigmaZ, SigmaZ]);
        out
    }
}

/// Assembles the one-qubit terms from nested integrals of line pairs.
///
/// Requires Δ, Δ ± W nonzero.
pub fn one_qubit_terms(d: &Dressed, tau: f64) -> Result<OneQubitTerms, EffectiveError> {
    let (dl, w, s) = (d.big_delta, d.w, d.sin_theta);
    let s2 = (1.0 - d.cos_theta) / 2.0;
    let c2 = (1.0 + d.cos_theta) / 2.0;
    let h = |a: f64, b: f64| h_integral(a, b, tau);
    let g2 = d.g * d.g;

    let adag2_plus = g2 * s * s2 * (h(-dl - w, dl)? - h(-dl, dl + w)?);
    let adag2_minus = g2 * s * c2 * (h(-dl + w, dl)? - h(-dl, dl - w)?);
    let adag2_z = -g2 * s2 * c2 * (h(-dl - w, dl - w)? - h(-dl + w, dl + w)?);

    let number_plus = g2 * (s * s2 * h(-dl - w, -dl)? + s * c2 * h(-dl, -dl + w)?);
    let number_minus = g2 * (s * c2 * h(-dl + w, -dl)? + s * s2 * h(-dl, -dl - w)?);
    let nz = g2 * (s2 * s2 * h(-dl - w, -dl - w)? - c2 * c2 * h(-dl + w, -dl + w)?);

    let k = -g2 / 2.0;
    let const_plus = k * (s * s2 * h(dl, dl + w)? + s * c2 * h(dl - w, dl)?);
    let const_minus = k * (s * s2 * h(dl + w, dl)? + s * c2 * h(dl, dl - w)?);
    let cz = k * (s2 * s2 * h(dl + w, dl + w)? - c2 * c2 * h(dl - w, dl - w)?);

    Ok(OneQubitTerms {
        adag2_plus,
        adag2_minus,
        adag2_z,
        number_plus,
        number_minus,
        number_z: 2.0 * nz.re,
        const_plus,
        const_minus,
        const_z: 2.0 * cz.re,
    })
}
