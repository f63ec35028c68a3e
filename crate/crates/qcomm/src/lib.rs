//! Simulation and analysis toolkit for quantum communication under decoherence.
//!
//! The crate is organized around six subsystems:
//!
//! - [`qcore`] — dense statevector / density-operator engine for small qubit
//!   systems (gates, Pauli strings, Bell-basis tools, partial trace, fidelity,
//!   measurement).
//! - [`shor`] — the 9-qubit Shor code: encoding, error injection, stabilizer
//!   syndrome measurement, correction and decoding.
//! - [`channels`] — Pauli and depolarizing noise channels, unreliable (POVM)
//!   measurements, and seeded sampling for Monte Carlo runs.
//! - [`epp`] — two-way entanglement purification: exact Bell-diagonal
//!   recurrence, twirled variant, dense protocol step with noisy apparatus,
//!   distillation driver, fixpoint and threshold analysis.
//! - [`demon`] — flagged-ensemble ("lab demon") analysis of purification with
//!   noisy apparatus: flagged recurrences, critical-noise and regime analysis,
//!   and a Monte Carlo flagged-ensemble simulation.
//! - [`qkd`] — BB84 and E91 key distribution with channel noise and an
//!   intercept-resend eavesdropper, sifting, QBER and CHSH estimation, and
//!   one-time-pad utilities.
//!
//! All stochastic operations take an explicit RNG; nothing draws from global
//! randomness. With a fixed seed every run is reproducible.
//!
//! The `parallel` feature (on by default) enables rayon-based data
//! parallelism for parameter sweeps and Monte Carlo worker partitions. With
//! the feature disabled the same partitioning logic runs sequentially and
//! produces identical results for a fixed (seed, worker-count) configuration.

pub mod channels;
pub mod demon;
pub mod epp;
pub mod qcore;
pub mod qkd;
pub mod shor;
pub mod sweep;
