//! Two-way entanglement purification (2-EPP): the exact Bell-diagonal
//! recurrence, the twirled (Werner) variant, a dense density-matrix protocol
//! step with optional apparatus noise, a distillation driver, and fixpoint /
//! threshold analysis.
//!
//! One protocol step acts on two pairs (source and target). Both parties
//! rotate each of their qubits by a quarter turn about x (in opposite
//! directions), apply a CNOT from their source-pair qubit to their
//! target-pair qubit, and measure the target pair in σ_z. The source pair is
//! kept when the measurement results coincide.

use std::io::Write;

use thiserror::Error;

use crate::channels::{depolarize_after, ApparatusNoise, ChannelError};
use crate::qcore::{
    bell_decompose, bell_state, BellIndex, C64, DensityOperator, Gate, QcoreError,
};

#[derive(Debug, Error)]
pub enum EppError {
    #[error("bell-diagonal coefficients invalid: {reason}")]
    InvalidState { reason: String },

    #[error("success probability vanished; the step is undefined")]
    DegenerateStep,

    #[error("no bracket for the threshold search on {axis}: {details}")]
    ThresholdBracket { axis: &'static str, details: String },

    #[error("fixpoint refinement did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error(transparent)]
    Channel(#[from] ChannelError),

    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// Bell-diagonal coefficients `(A, B, C, D)` of Φ⁺, Ψ⁻, Ψ⁺, Φ⁻ respectively.
/// All nonnegative, summing to 1. The fidelity is `F = A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonal {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BellDiagonal {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, EppError> {
        let s = Self { a, b, c, d };
        for (name, x) in [("A", a), ("B", b), ("C", c), ("D", d)] {
            if !(-1e-12..=1.0 + 1e-12).contains(&x) {
                return Err(EppError::InvalidState {
                    reason: format!("{name} = {x} out of range"),
                });
            }
        }
        let sum = a + b + c + d;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(EppError::InvalidState {
                reason: format!("coefficients sum to {sum}, not 1"),
            });
        }
        Ok(s)
    }

    /// The Werner state `A = F, B = C = D = (1−F)/3`.
    pub fn werner(f: f64) -> Result<Self, EppError> {
        let rest = (1.0 - f) / 3.0;
        Self::new(f, rest, rest, rest)
    }

    /// Fidelity `F = ⟨Φ⁺|ρ|Φ⁺⟩ = A`.
    pub fn fidelity(&self) -> f64 {
        self.a
    }

    /// Coefficients in Bell-index order Φ⁺, Ψ⁺, Φ⁻, Ψ⁻.
    pub fn by_index(&self) -> [f64; 4] {
        [self.a, self.c, self.d, self.b]
    }

    /// The Bell-diagonal density operator with these coefficients.
    pub fn to_density(&self) -> DensityOperator {
        let mut rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        rho.scale(self.a);
        for (w, idx) in [
            (self.b, BellIndex::PSI_MINUS),
            (self.c, BellIndex::PSI_PLUS),
            (self.d, BellIndex::PHI_MINUS),
        ] {
            rho.add_scaled(&DensityOperator::from_state(&bell_state(idx)), w);
        }
        rho
    }
}

/// Outcome of one purification step: the kept pair's state and the success
/// probability (the normalization `N` of the recurrence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub state: BellDiagonal,
    pub p_success: f64,
}

/// One exact protocol step on Bell-diagonal coefficients:
///
/// `A' = (A² + B²)/N, B' = 2CD/N, C' = (C² + D²)/N, D' = 2AB/N`
///
/// with `N = (A+B)² + (C+D)²` equal to the probability that the σ_z results
/// coincide.
pub fn oxford_step(s: &BellDiagonal) -> Result<StepResult, EppError> {
    let n = (s.a + s.b).powi(2) + (s.c + s.d).powi(2);
    if n <= f64::EPSILON {
        return Err(EppError::DegenerateStep);
    }
    let state = BellDiagonal {
        a: (s.a * s.a + s.b * s.b) / n,
        b: 2.0 * s.c * s.d / n,
        c: (s.c * s.c + s.d * s.d) / n,
        d: 2.0 * s.a * s.b / n,
    };
    Ok(StepResult {
        state,
        p_success: n,
    })
}

/// Project onto the Werner line: `(A, B, C, D) → (A, (1−A)/3, (1−A)/3, (1−A)/3)`.
pub fn werner_twirl(s: &BellDiagonal) -> BellDiagonal {
    let rest = (1.0 - s.a) / 3.0;
    BellDiagonal {
        a: s.a,
        b: rest,
        c: rest,
        d: rest,
    }
}

/// The twirled protocol step: twirl, purify, twirl. Restricted to the Werner
/// line this induces the scalar purification curve `F → F'`.
pub fn ibm_step(s: &BellDiagonal) -> Result<StepResult, EppError> {
    let step = oxford_step(&werner_twirl(s))?;
    Ok(StepResult {
        state: werner_twirl(&step.state),
        p_success: step.p_success,
    })
}

/// Which protocol elements are accompanied by noise in [`noisy_step_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoisePlacement {
    /// Depolarize with `p1` after each of the 4 one-qubit rotations.
    pub after_one_qubit: bool,
    /// Depolarize the acting party's qubit pair with `p2` after each of the
    /// 2 CNOTs.
    pub after_two_qubit: bool,
    /// Use the unreliable-detector POVM (η) at the 2 measurements.
    pub at_measurements: bool,
}

impl Default for NoisePlacement {
    fn default() -> Self {
        Self {
            after_one_qubit: true,
            after_two_qubit: true,
            at_measurements: true,
        }
    }
}

// Qubit layout of the dense two-pair register: a1 b1 a2 b2.
const A1: usize = 0;
const B1: usize = 1;
const A2: usize = 2;
const B2: usize = 3;

/// The protocol-step gate list on the two-pair register.
fn step_gates() -> [Gate; 6] {
    [
        Gate::rx_quarter(A1, true),
        Gate::rx_quarter(B1, false),
        Gate::rx_quarter(A2, true),
        Gate::rx_quarter(B2, false),
        Gate::Cnot {
            control: A1,
            target: A2,
        },
        Gate::Cnot {
            control: B1,
            target: B2,
        },
    ]
}

/// Dense protocol step on `ρ_pair ⊗ ρ_pair` with an optionally noisy
/// apparatus. Returns the Bell-diagonal part of the kept pair and the
/// success probability of the coincidence postselection.
pub fn noisy_step_dense(
    rho_pair: &DensityOperator,
    noise: &ApparatusNoise,
    placement: &NoisePlacement,
) -> Result<StepResult, EppError> {
    if rho_pair.n_qubits() != 2 {
        return Err(QcoreError::DimensionMismatch {
            dim: rho_pair.dim(),
            n_qubits: 2,
        }
        .into());
    }
    let rho = rho_pair.kron(rho_pair)?;
    protocol_step_on_register(&rho, noise, placement)
}

/// Dense protocol step on a prepared two-pair register in qubit order
/// `a1 b1 a2 b2` (pair one is kept, pair two is measured). Useful when the
/// four-qubit state is not a simple product, e.g. after correlated noise
/// across the pairs.
pub fn protocol_step_on_register(
    rho4: &DensityOperator,
    noise: &ApparatusNoise,
    placement: &NoisePlacement,
) -> Result<StepResult, EppError> {
    if rho4.n_qubits() != 4 {
        return Err(QcoreError::DimensionMismatch {
            dim: rho4.dim(),
            n_qubits: 4,
        }
        .into());
    }
    let mut rho = rho4.clone();

    let one_qubit_p = if placement.after_one_qubit { noise.p1 } else { 1.0 };
    let two_qubit_p = if placement.after_two_qubit { noise.p2 } else { 1.0 };
    let eta = if placement.at_measurements { noise.eta } else { 1.0 };

    let gates = step_gates();
    // Rotations, each followed by a one-qubit depolarizing channel.
    for g in &gates[..4] {
        let q = g.support()[0];
        rho = depolarize_after(&rho, Some(g), one_qubit_p, &[q])?;
    }
    // CNOTs, each followed by a two-qubit depolarizing channel on the
    // acting party's qubits.
    for g in &gates[4..] {
        let qs = g.support();
        rho = depolarize_after(&rho, Some(g), two_qubit_p, &qs)?;
    }

    // σ_z measurements on the target pair, postselected on coinciding
    // *reported* results. With detector reliability η a true outcome pair
    // (k_A, k_B) produces coinciding reports with probability
    // η² + (1−η)² when k_A = k_B, and 2η(1−η) otherwise.
    let coincide_same = eta * eta + (1.0 - eta) * (1.0 - eta);
    let coincide_diff = 2.0 * eta * (1.0 - eta);

    let mut kept: Option<DensityOperator> = None;
    let mut p_success = 0.0;
    for k_a in 0..2u8 {
        for k_b in 0..2u8 {
            let (w_a, proj_a) = rho.project_z_unnormalized(A2, k_a)?;
            if w_a <= f64::EPSILON * 4.0 {
                continue;
            }
            let _ = w_a;
            let (w_ab, proj_ab) = proj_a.project_z_unnormalized(B2, k_b)?;
            if w_ab <= 0.0 {
                continue;
            }
            let coeff = if k_a == k_b { coincide_same } else { coincide_diff };
            if coeff == 0.0 {
                continue;
            }
            let reduced = proj_ab.partial_trace(&[A1, B1])?;
            p_success += coeff * w_ab;
            match kept.as_mut() {
                Some(acc) => acc.add_scaled(&reduced, coeff),
                None => {
                    let mut r = reduced;
                    r.scale(coeff);
                    kept = Some(r);
                }
            }
        }
    }
    let mut kept = kept.ok_or(EppError::DegenerateStep)?;
    if p_success <= f64::EPSILON {
        return Err(EppError::DegenerateStep);
    }
    kept.scale(1.0 / p_success);
    let dec = bell_decompose(&kept)?;
    Ok(StepResult {
        state: BellDiagonal {
            a: dec.a,
            b: dec.b,
            c: dec.c,
            d: dec.d,
        },
        p_success,
    })
}

/// Noiseless dense protocol step on an arbitrary two-qubit input state.
///
/// For Bell-diagonal input this matches [`oxford_step`]; the Bell-diagonal
/// part of the output never depends on the input's off-diagonal elements.
pub fn oxford_step_dense(rho_pair: &DensityOperator) -> Result<StepResult, EppError> {
    noisy_step_dense(rho_pair, &ApparatusNoise::noiseless(), &NoisePlacement::default())
}

/// Protocol step on Bell-diagonal coefficients with a noisy apparatus
/// (default noise placement).
pub fn noisy_step(s: &BellDiagonal, noise: &ApparatusNoise) -> Result<StepResult, EppError> {
    noisy_step_dense(&s.to_density(), noise, &NoisePlacement::default())
}

/// Same as [`noisy_step`] with an explicit noise placement.
pub fn noisy_step_with(
    s: &BellDiagonal,
    noise: &ApparatusNoise,
    placement: &NoisePlacement,
) -> Result<StepResult, EppError> {
    noisy_step_dense(&s.to_density(), noise, placement)
}

/// One recorded round of a distillation trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub round: usize,
    pub state: BellDiagonal,
    /// Success probability of the step that *produced* this state
    /// (1 for round 0).
    pub p_success: f64,
    /// Expected surviving fraction of the initial ensemble:
    /// `Π_k (p_success,k / 2)` over the rounds so far.
    pub yield_fraction: f64,
}

/// Iterate a stepper from `s0`, recording the state, per-step success
/// probability and cumulative expected yield after each round.
pub fn distill<F>(s0: &BellDiagonal, rounds: usize, mut stepper: F) -> Result<Vec<TrajectoryPoint>, EppError>
where
    F: FnMut(&BellDiagonal) -> Result<StepResult, EppError>,
{
    let mut traj = Vec::with_capacity(rounds + 1);
    traj.push(TrajectoryPoint {
        round: 0,
        state: *s0,
        p_success: 1.0,
        yield_fraction: 1.0,
    });
    let mut state = *s0;
    let mut yield_fraction = 1.0;
    for round in 1..=rounds {
        let step = stepper(&state)?;
        state = step.state;
        yield_fraction *= step.p_success / 2.0;
        traj.push(TrajectoryPoint {
            round,
            state,
            p_success: step.p_success,
            yield_fraction,
        });
    }
    Ok(traj)
}

/// Serialize a trajectory as CSV with header `round,A,B,C,D,F,p_success,yield`.
pub fn write_trajectory_csv<W: Write>(traj: &[TrajectoryPoint], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "round,A,B,C,D,F,p_success,yield")?;
    for p in traj {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.round,
            p.state.a,
            p.state.b,
            p.state.c,
            p.state.d,
            p.state.fidelity(),
            p.p_success,
            p.yield_fraction
        )?;
    }
    Ok(())
}

/// Stability of a fixpoint of a scalar map, classified by `|g'|` at the
/// fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attractive,
    Repulsive,
}

/// A located fixpoint of a scalar purification curve.
#[derive(Debug, Clone)]
pub struct FixpointReport {
    /// Werner-line fidelity of the fixpoint.
    pub location: f64,
    pub stability: Stability,
    /// `|g'(F*)|` from a central difference.
    pub derivative_magnitude: f64,
    /// Nearby starting fidelities and whether 200 iterations converged back
    /// to this fixpoint (within 1e-6).
    pub basin_sample: Vec<(f64, bool)>,
}

/// The scalar Werner-line curve `F → F'` induced by a stepper.
pub fn werner_curve<F>(stepper: F) -> impl Fn(f64) -> Result<f64, EppError>
where
    F: Fn(&BellDiagonal) -> Result<StepResult, EppError>,
{
    move |f: f64| {
        // Raw Werner coefficients; probes marginally outside [0, 1] are
        // permitted because the maps are polynomial in the coefficients.
        let rest = (1.0 - f) / 3.0;
        let s = BellDiagonal {
            a: f,
            b: rest,
            c: rest,
            d: rest,
        };
        Ok(stepper(&werner_twirl(&s))?.state.a)
    }
}

const FIXPOINT_REFINE_TOL: f64 = 1e-10;
const DERIVATIVE_H: f64 = 1e-6;
/// Attractive/repulsive classification tolerance on |g'| − 1.
const STABILITY_TOL: f64 = 1e-8;

/// Locate all fixpoints of a scalar map on `[lo, hi]` by scanning
/// `grid_n` intervals for sign changes of `g(F) − F` and refining each by
/// bisection to 1e-10; classify stability from the numerical derivative.
pub fn fixpoint_scan<G>(g: G, lo: f64, hi: f64, grid_n: usize) -> Result<Vec<FixpointReport>, EppError>
where
    G: Fn(f64) -> Result<f64, EppError>,
{
    let h = |f: f64| -> Result<f64, EppError> { Ok(g(f)? - f) };
    let mut roots: Vec<f64> = Vec::new();
    let step = (hi - lo) / grid_n as f64;
    let mut prev_x = lo;
    let mut prev_v = h(lo)?;
    if prev_v.abs() < 1e-13 {
        roots.push(lo);
    }
    for k in 1..=grid_n {
        let x = lo + step * k as f64;
        let v = h(x)?;
        if v.abs() < 1e-13 {
            roots.push(x);
        } else if prev_v.abs() >= 1e-13 && (prev_v < 0.0) != (v < 0.0) {
            roots.push(bisect(&h, prev_x, x, prev_v)?);
        }
        prev_x = x;
        prev_v = v;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * FIXPOINT_REFINE_TOL);

    let mut reports = Vec::with_capacity(roots.len());
    for root in roots {
        let d = (g(root + DERIVATIVE_H)? - g(root - DERIVATIVE_H)?) / (2.0 * DERIVATIVE_H);
        let mag = d.abs();
        let stability = if mag < 1.0 - STABILITY_TOL {
            Stability::Attractive
        } else if mag > 1.0 + STABILITY_TOL {
            Stability::Repulsive
        } else {
            // Marginal |g'| = 1 (merging fixpoints): report as repulsive,
            // the conservative call for purifiability.
            Stability::Repulsive
        };
        let mut basin_sample = Vec::new();
        for start in [root - 0.02, root + 0.02] {
            if !(lo..=hi).contains(&start) {
                continue;
            }
            let mut x = start;
            let mut converged = false;
            for _ in 0..200 {
                x = g(x)?;
                if (x - root).abs() < 1e-6 {
                    converged = true;
                    break;
                }
                if !(lo - 0.5..=hi + 0.5).contains(&x) {
                    break;
                }
            }
            basin_sample.push((start, converged));
        }
        reports.push(FixpointReport {
            location: root,
            stability,
            derivative_magnitude: mag,
            basin_sample,
        });
    }
    Ok(reports)
}

fn bisect<H>(h: &H, mut lo: f64, mut hi: f64, mut v_lo: f64) -> Result<f64, EppError>
where
    H: Fn(f64) -> Result<f64, EppError>,
{
    let max_iter = 200;
    for _ in 0..max_iter {
        if hi - lo < FIXPOINT_REFINE_TOL {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let v = h(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == (v_lo < 0.0) {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
        }
    }
    Err(EppError::NoConvergence { max_iter })
}

/// Noise axis for [`threshold_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseAxis {
    P1,
    P2,
    Eta,
}

impl NoiseAxis {
    fn name(self) -> &'static str {
        match self {
            NoiseAxis::P1 => "p1",
            NoiseAxis::P2 => "p2",
            NoiseAxis::Eta => "eta",
        }
    }

    fn lower_bound(self) -> f64 {
        match self {
            NoiseAxis::Eta => 0.5,
            _ => 0.0,
        }
    }

    fn with(self, base: &ApparatusNoise, value: f64) -> ApparatusNoise {
        let mut n = *base;
        match self {
            NoiseAxis::P1 => n.p1 = value,
            NoiseAxis::P2 => n.p2 = value,
            NoiseAxis::Eta => n.eta = value,
        }
        n
    }
}

/// Whether the twirled noisy map still purifies: true iff the curve rises
/// above the diagonal anywhere above the trivial fixpoint, i.e. a
/// nontrivial attractive fixpoint above a repulsive one still exists.
pub fn purifiable(noise: &ApparatusNoise) -> Result<bool, EppError> {
    let g = werner_curve(move |s: &BellDiagonal| noisy_step(s, noise));
    // Maximize g(F) − F over (0.26, 0.995): coarse grid plus golden-section
    // refinement around the best point. The margin below keeps us away from
    // the trivial fixpoint at F = 1/4 where g(F) − F = 0 identically.
    let h = |f: f64| -> Result<f64, EppError> { Ok(g(f)? - f) };
    let (lo, hi) = (0.26, 0.995);
    let grid_n = 120;
    let mut best_x = lo;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..=grid_n {
        let x = lo + (hi - lo) * k as f64 / grid_n as f64;
        let v = h(x)?;
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    if best_v > 1e-9 {
        return Ok(true);
    }
    // Refine around the best grid point.
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let span = (hi - lo) / grid_n as f64;
    let (mut a, mut b) = ((best_x - span).max(lo), (best_x + span).min(hi));
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = h(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = h(x1)?;
        }
    }
    Ok(f1.max(f2) > 1e-12)
}

/// Bisect along one apparatus-noise axis (the others held at `base`) for the
/// critical reliability below which purification breaks down. Returns the
/// axis value at the boundary, resolved to `tol` (1e-4 or finer advised).
///
/// The noiseless endpoint must purify and the `lo` endpoint must not,
/// otherwise the bracket is rejected.
pub fn threshold_search(
    axis: NoiseAxis,
    base: &ApparatusNoise,
    lo: f64,
    tol: f64,
) -> Result<f64, EppError> {
    let axis_name = axis.name();
    if lo < axis.lower_bound() || lo >= 1.0 {
        return Err(EppError::ThresholdBracket {
            axis: axis_name,
            details: format!("lower endpoint {lo} outside ({}, 1)", axis.lower_bound()),
        });
    }
    let good_hi = purifiable(&axis.with(base, 1.0))?;
    if !good_hi {
        return Err(EppError::ThresholdBracket {
            axis: axis_name,
            details: "map does not purify even at the noiseless endpoint".into(),
        });
    }
    let good_lo = purifiable(&axis.with(base, lo))?;
    if good_lo {
        return Err(EppError::ThresholdBracket {
            axis: axis_name,
            details: format!("map still purifies at {axis_name} = {lo}; widen the bracket"),
        });
    }
    let (mut bad, mut good) = (lo, 1.0);
    while good - bad > tol {
        let mid = 0.5 * (bad + good);
        if purifiable(&axis.with(base, mid))? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(0.5 * (bad + good))
}

/// Build the density operator of a Bell-diagonal state with extra Bell-basis
/// off-diagonal structure, used by tests; mixes in `|e⟩⟨e|` support across
/// two Bell states with weight `w`.
pub fn bell_diagonal_with_coherence(
    s: &BellDiagonal,
    pair: (BellIndex, BellIndex),
    w: f64,
) -> Result<DensityOperator, EppError> {
    let (i, j) = pair;
    if i == j {
        return Err(EppError::InvalidState {
            reason: "coherence pair must be distinct".into(),
        });
    }
    // Superposition (|B_i⟩ + |B_j⟩)/√2 carries off-diagonal elements between
    // the two Bell states.
    let si = bell_state(i);
    let sj = bell_state(j);
    let amps: Vec<C64> = si
        .amplitudes()
        .iter()
        .zip(sj.amplitudes())
        .map(|(x, y)| (x + y) / C64::new(std::f64::consts::SQRT_2, 0.0))
        .collect();
    let sup = crate::qcore::StateVector::new(2, amps).map_err(EppError::from)?;
    let mut rho = s.to_density();
    rho.scale(1.0 - w);
    rho.add_scaled(&DensityOperator::from_state(&sup), w);
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_pair_is_a_fixpoint_with_unit_success() {
        let s = BellDiagonal::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let out = oxford_step(&s).unwrap();
        assert_eq!(out.state, s);
        assert!((out.p_success - 1.0).abs() < 1e-15);
    }

    #[test]
    fn werner_075_step_matches_direct_evaluation() {
        // Frozen from the recurrence: A' = 41/52, N = 13/18.
        let s = BellDiagonal::werner(0.75).unwrap();
        let out = oxford_step(&s).unwrap();
        assert!((out.p_success - 13.0 / 18.0).abs() < 1e-15);
        assert!((out.state.a - 41.0 / 52.0).abs() < 1e-15);
    }

    #[test]
    fn phi_plus_phi_minus_mixture_stays_put() {
        // (0.5, 0.5, 0, 0): after the bilateral rotation this is a Φ⁺/Φ⁻
        // mixture, so the coincidence test always succeeds and the kept pair
        // stays an even Φ mixture: A' = 0.5, D' = 0.5, N = 1.
        let s = BellDiagonal::new(0.5, 0.5, 0.0, 0.0).unwrap();
        let out = oxford_step(&s).unwrap();
        assert!((out.p_success - 1.0).abs() < 1e-15);
        assert!((out.state.a - 0.5).abs() < 1e-15);
        assert!((out.state.d - 0.5).abs() < 1e-15);
        assert!(out.state.b.abs() < 1e-15 && out.state.c.abs() < 1e-15);
    }

    #[test]
    fn twirl_examples_and_idempotence() {
        let pure = BellDiagonal::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(werner_twirl(&pure), pure);
        let s = BellDiagonal::new(0.7, 0.2, 0.05, 0.05).unwrap();
        let t = werner_twirl(&s);
        assert_eq!(t, BellDiagonal::werner(0.7).unwrap());
        assert_eq!(werner_twirl(&t), t);
    }

    #[test]
    fn ibm_fixpoints_quarter_half_one() {
        for f in [0.25, 0.5, 1.0] {
            let out = ibm_step(&BellDiagonal::werner(f).unwrap()).unwrap();
            assert!(
                (out.state.a - f).abs() < 1e-14,
                "F = {f} must be a fixpoint, got {}",
                out.state.a
            );
        }
    }

    #[test]
    fn noiseless_noisy_step_equals_oxford() {
        let s = BellDiagonal::new(0.72, 0.11, 0.09, 0.08).unwrap();
        let exact = oxford_step(&s).unwrap();
        let dense = noisy_step(&s, &ApparatusNoise::noiseless()).unwrap();
        assert!((dense.state.a - exact.state.a).abs() < 1e-12);
        assert!((dense.state.b - exact.state.b).abs() < 1e-12);
        assert!((dense.state.c - exact.state.c).abs() < 1e-12);
        assert!((dense.state.d - exact.state.d).abs() < 1e-12);
        assert!((dense.p_success - exact.p_success).abs() < 1e-12);
    }

    #[test]
    fn lower_p2_pulls_the_curve_down() {
        let s = BellDiagonal::werner(0.85).unwrap();
        let mut last = f64::INFINITY;
        for p2 in [1.0, 0.99, 0.97, 0.95] {
            let noise = ApparatusNoise::new(1.0, p2, 1.0).unwrap();
            let f_next = noisy_step(&s, &noise).unwrap().state.a;
            assert!(f_next <= last + 1e-12, "p2 = {p2}");
            last = f_next;
        }
    }

    #[test]
    fn severe_p2_noise_kills_purification() {
        let noise = ApparatusNoise::new(1.0, 0.6, 1.0).unwrap();
        assert!(!purifiable(&noise).unwrap());
        assert!(purifiable(&ApparatusNoise::noiseless()).unwrap());
    }

    #[test]
    fn distill_perfect_pairs_yield_halves_each_round() {
        let s = BellDiagonal::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let traj = distill(&s, 5, oxford_step).unwrap();
        assert_eq!(traj.len(), 6);
        for p in &traj {
            assert_eq!(p.state, s);
            assert!((p.yield_fraction - 0.5_f64.powi(p.round as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn oxford_distills_werner_07_to_unity() {
        let traj = distill(&BellDiagonal::werner(0.7).unwrap(), 60, oxford_step).unwrap();
        let fids: Vec<f64> = traj.iter().map(|p| p.state.fidelity()).collect();
        for w in fids.windows(2) {
            assert!(w[1] > w[0] - 1e-12, "fidelity must not decrease");
        }
        assert!(fids.last().unwrap() > &(1.0 - 1e-9));
    }

    #[test]
    fn ibm_depolarizes_werner_04_to_quarter() {
        let traj = distill(&BellDiagonal::werner(0.4).unwrap(), 100, ibm_step).unwrap();
        assert!((traj.last().unwrap().state.fidelity() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn invalid_coefficients_are_rejected() {
        assert!(BellDiagonal::new(0.5, 0.5, 0.5, -0.5).is_err());
        assert!(BellDiagonal::new(0.5, 0.2, 0.2, 0.2).is_err());
    }

    #[test]
    fn trajectory_csv_has_expected_header() {
        let traj = distill(&BellDiagonal::werner(0.8).unwrap(), 2, oxford_step).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("round,A,B,C,D,F,p_success,yield\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
