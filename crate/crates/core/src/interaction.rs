//! Harmonic decomposition of the interaction-picture coupling.
//!
//! V_I(t) = A(t)a† + A†(t)a with
//! Aⱼ(t) = (gⱼ/2)e^{iΔⱼt}[sinθⱼσⱼᶻ − (1−cosθⱼ)e^{iWⱼt}σⱼ⁺ + (1+cosθⱼ)e^{−iWⱼt}σⱼ⁻],
//! stored as a list of terms `e^{iνt}·B` whose conjugates are implied.
//! A drive phase φⱼ multiplies Aⱼ by e^{−iφⱼ}, the dressed basis being
//! defined relative to the drive.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::operators::{cavity_annihilation, pauli, BasisDescriptor, OperatorMatrix, PauliKind};
use crate::system::SystemParams;

#[derive(Debug, Clone)]
pub struct Harmonic {
    pub qubit: usize,
    pub line: i8,
    /// Angular frequency ν of the term.
    pub frequency: f64,
    /// Operator B multiplying e^{iνt}; its adjoint multiplies e^{−iνt}.
    pub op: DMatrix<C64>,
}

#[derive(Debug, Clone)]
pub struct InteractionModel {
    pub harmonics: Vec<Harmonic>,
    pub basis: BasisDescriptor,
}

impl InteractionModel {
    pub fn new(sys: &SystemParams) -> Self {
        let n_max = sys.n_max;
        let adag = cavity_annihilation(n_max).adjoint();
        let mut harmonics = Vec::with_capacity(6);
        for j in 0..2 {
            let d = sys.dressed(j);
            let weight = C64::from_polar(0.5 * d.g, -d.phase);
            for (line, kind) in [(0i8, PauliKind::Z), (1, PauliKind::Plus), (-1, PauliKind::Minus)] {
                let amp = d.line_amplitude(line);
                let coeff = weight * amp;
                let b = (pauli(kind, j + 1, n_max) * &adag).scale(coeff);
                harmonics.push(Harmonic {
                    qubit: j + 1,
                    line,
                    frequency: d.line(line),
                    op: b.into_matrix(),
                });
            }
        }
        Self { harmonics, basis: BasisDescriptor::composite(n_max) }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Dense V_I(t).
    pub fn at(&self, t: f64) -> DMatrix<C64> {
        self.combine(|nu| C64::from_polar(1.0, nu * t))
    }

    /// Σ c(ν)B + h.c. for a per-frequency weight `c`.
    pub fn combine(&self, weight: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let d = self.dim();
        let mut v = DMatrix::<C64>::zeros(d, d);
        for h in &self.harmonics {
            let c = weight(h.frequency);
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for col in 0..d {
                for row in 0..d {
                    let b = h.op[(row, col)];
                    if b != C64::new(0.0, 0.0) {
                        v[(row, col)] += c * b;
                        v[(col, row)] += (c * b).conj();
                    }
                }
            }
        }
        v
    }

    pub fn operator_at(&self, t: f64) -> OperatorMatrix {
        OperatorMatrix::new(self.at(t), self.basis).expect("model dimension")
    }
}
