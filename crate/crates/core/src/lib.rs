//! Cavity-mediated entangling gates between parametrically driven qubits.
//!
//! The crate covers the dense operator algebra on the two-qubit plus cavity
//! space, the mapping of physical spin-qubit parameters onto driven qubits,
//! the period-averaged effective Hamiltonian for the nine centre/sideband
//! resonances, and unitary and Lindblad time evolution.

pub mod dynamics;
pub mod effective;
pub mod interaction;
pub mod mapping;
pub mod operators;
pub mod system;
pub mod units;

pub use effective::{EffectiveError, ResonanceCondition};
pub use operators::{OperatorMatrix, TwoQubitState};
pub use system::{DrivenQubitParams, Grid, SystemParams};
