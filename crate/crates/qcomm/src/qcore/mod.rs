//! Dense statevector and density-operator engine for small qubit systems.
//!
//! # Qubit ordering
//!
//! Qubit index 0 is the **leftmost tensor factor**. Equivalently, qubit `q`
//! of an `n`-qubit register corresponds to bit `n - 1 - q` of the
//! computational-basis index, so `|q0 q1 ... q(n-1)⟩` has basis index
//! `q0·2^(n-1) + q1·2^(n-2) + ... + q(n-1)`. This convention is used
//! everywhere in the crate.
//!
//! Systems are hard-capped at [`MAX_QUBITS`] qubits; everything is dense.
//! Global phase is not tracked as an observable — state equality is tested
//! via fidelity.

mod bell;
mod density;
mod error;
mod gates;
mod state;

pub use bell::{bell_decompose, bell_state, BellDecomposition, BellIndex};
pub use density::{fidelity, DensityOperator};
pub use error::QcoreError;
pub use gates::{Gate, PauliString, Phase};
pub use state::StateVector;

/// Hard cap on system size. The largest case this crate needs is the 9-qubit
/// Shor code plus an explicit environment qubit.
pub const MAX_QUBITS: usize = 12;

/// Shorthand for the complex amplitude type used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Tolerance for normalization / trace / hermiticity invariants.
pub(crate) const NORM_TOL: f64 = 1e-12;
