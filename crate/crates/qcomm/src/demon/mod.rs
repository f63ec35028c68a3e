//! The lab-demon analysis of entanglement purification with a noisy
//! apparatus.
//!
//! The demon model replaces the open-system description of Alice's noisy lab
//! by a classical bookkeeper: in every purification step it samples a Pauli
//! pair `(µ, ν)` from the channel distribution, applies
//! `σ_µ^(a1) σ_ν^(a2)` to the two qubits Alice acts on, and records what it
//! did as a per-pair *error flag*. Averaged over the samples this is exactly
//! the correlated two-qubit Pauli channel; resolved by flag value it splits
//! the ensemble into subensembles whose evolution this module tracks.
//!
//! Three representations are provided:
//!
//! - [`FlaggedBinaryState`] — binary pairs (Φ⁺/Ψ⁺ mixtures, spin-flip noise,
//!   one flag bit) with the exact subensemble recurrence, its fixpoints, the
//!   critical noise parameter and the regime classification;
//! - [`FlaggedBellState`] — the 16-parameter generalization (four
//!   Bell-diagonal coefficients per two-bit flag value) with the exact
//!   flagged recurrence;
//! - [`FlaggedPair`] — a Monte Carlo ensemble member carrying a Bell index
//!   and a flag, evolved pairwise with sampled noise.

mod bell_map;
mod binary;
mod monte_carlo;

pub use bell_map::{
    bell_distill, bell_step, flag_update_general, protocol_step_flags, protocol_step_labels,
    write_bell_trajectory_csv, BellTrajectoryPoint, FlaggedBellState,
};
pub use binary::{
    binary_fixpoint, binary_fixpoint_closed_form, binary_step, classify_regime,
    conditional_fidelity, converge_binary, critical_f0, distill_binary, flag_update_binary,
    jacobian_spectral_radius, regime_map_rows, write_binary_trajectory_csv,
    write_regime_map_csv, BinaryConvergence, BinaryTrajectoryPoint, FlaggedBinaryState,
    RegimeLabel, RegimeMapRow, CRITICAL_F0_REFERENCE,
};
pub use monte_carlo::{
    monte_carlo_distill, randomize_ensemble, randomize_ensemble_dense, write_mc_trajectory_csv,
    FlaggedPair, McRound, McTrajectory, NoiseModel,
};

use thiserror::Error;

use crate::channels::ChannelError;
use crate::qcore::QcoreError;

#[derive(Debug, Error)]
pub enum DemonError {
    #[error("flagged state invalid: {reason}")]
    InvalidState { reason: String },

    #[error("success probability vanished; the step is undefined")]
    DegenerateStep,

    #[error("operation requires factorized (uncorrelated) binary noise")]
    NotFactorized,

    #[error("noise parameter {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("iteration did not converge within {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no bracket for the critical-noise search: {details}")]
    BracketFailure { details: String },

    #[error("ensemble must contain an even number of pairs, at least 2 (got {0})")]
    BadEnsembleSize(usize),

    #[error(transparent)]
    Channel(#[from] ChannelError),

    #[error(transparent)]
    Qcore(#[from] QcoreError),
}
