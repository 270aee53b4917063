//! Period-averaged effective Hamiltonian on the integer frequency grid.

pub mod constraints;
pub mod gates;
pub mod integrals;
pub mod resonance;
pub mod search;
pub mod shifts;

use thiserror::Error;

use crate::interaction::InteractionModel;
use crate::operators::OperatorMatrix;
use crate::system::{SystemError, SystemParams};

pub use constraints::{check_constraints, exact_couplings, exactify, ConstraintCheck, ConstraintReport};
pub use gates::{
    build_effective_hamiltonian, double_excitation, fs_analytic, fs_closed_form, fs_phase_only, ideal_gate,
    iswap, named_gate,
};
pub use integrals::{f_integral, h_integral};
pub use resonance::{
    build_vqq, classify_resonance, exchange_coupling, resonant_vqq, Classification, GateKind, ResonanceCondition,
};
pub use search::{search_parameters, Candidate, SearchBounds};
pub use shifts::{
    dispersive_shifts, lambda_coefficient, one_qubit_term_classes, one_qubit_terms, resonant_chi,
    shift_free_detuning, OneQubitTerms, ShiftCoefficients, TermFamily,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EffectiveError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("nested integral undefined for mu = mu' = 0")]
    UndefinedIntegral,
    #[error("unknown resonance condition `{0}` (expected rc1..rc9)")]
    UnknownCondition(String),
    #[error("{0}: resonance equality does not hold on the grid")]
    ConditionNotSatisfied(ResonanceCondition),
    #[error("{0}: W-constraint {} violated", .0.constraint_label())]
    ConstraintViolated(ResonanceCondition),
    #[error("{0}: resonant detuning is zero, coupling undefined")]
    ZeroResonantDetuning(ResonanceCondition),
    #[error("{0}: operation not supported for this condition")]
    UnsupportedCondition(ResonanceCondition),
    #[error("qubit {0}: nonzero drive phase is not supported by the effective theory")]
    NonzeroPhase(usize),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub(crate) fn require_zero_phase(sys: &SystemParams) -> Result<(), EffectiveError> {
    for (j, q) in sys.qubits.iter().enumerate() {
        if q.phase != 0.0 {
            return Err(EffectiveError::NonzeroPhase(j + 1));
        }
    }
    Ok(())
}

/// First-order term (1/τ)∫₀^τ V_I(t) dt on the composite space.
pub fn first_order_magnus(sys: &SystemParams) -> OperatorMatrix {
    let model = InteractionModel::new(sys);
    let tau = sys.tau();
    let m = model.combine(|nu| f_integral(nu, tau));
    OperatorMatrix::new(m, model.basis).expect("model dimension")
}
