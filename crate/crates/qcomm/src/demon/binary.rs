//! Binary pairs: Φ⁺/Ψ⁺ mixtures under the two-bit correlated spin-flip
//! channel, resolved by a one-bit error flag.

use std::io::Write;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::DemonError;
use crate::channels::BinaryNoiseSpec;

/// Reference value of the critical noise parameter `f_0^crit` above which
/// the nontrivial fixpoint is an attractor; [`critical_f0`] recomputes it
/// from the recurrence.
pub const CRITICAL_F0_REFERENCE: f64 = 0.77184451;

/// Subensemble coefficients of binary pairs: `A_i` / `B_i` is the weight of
/// Φ⁺ / Ψ⁺ carrying error flag `i`. Alice and Bob, who cannot see the
/// flags, describe the same ensemble by `A = A_0 + A_1`, `B = B_0 + B_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlaggedBinaryState {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl FlaggedBinaryState {
    pub fn new(a0: f64, a1: f64, b0: f64, b1: f64) -> Result<Self, DemonError> {
        for (name, x) in [("A0", a0), ("A1", a1), ("B0", b0), ("B1", b1)] {
            if !(-1e-12..=1.0 + 1e-12).contains(&x) {
                return Err(DemonError::InvalidState {
                    reason: format!("{name} = {x} out of range"),
                });
            }
        }
        let sum = a0 + a1 + b0 + b1;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(DemonError::InvalidState {
                reason: format!("coefficients sum to {sum}, not 1"),
            });
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    /// All flags zero: the demon starts with the same a-priori knowledge as
    /// Alice and Bob.
    pub fn unflagged(fidelity: f64) -> Result<Self, DemonError> {
        Self::new(fidelity, 0.0, 1.0 - fidelity, 0.0)
    }

    /// Alice/Bob fidelity `F = A_0 + A_1`.
    pub fn fidelity(&self) -> f64 {
        self.a0 + self.a1
    }

    /// Conditional fidelity `F^cond = A_0 + B_1`: the fidelity Alice and Bob
    /// would assign if they knew the error flags.
    pub fn conditional_fidelity(&self) -> f64 {
        self.a0 + self.b1
    }

    fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a1, self.b0, self.b1]
    }

    fn max_delta(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// `F^cond = A_0 + B_1`.
pub fn conditional_fidelity(s: &FlaggedBinaryState) -> f64 {
    s.conditional_fidelity()
}

/// The flag-update function: the kept source pair's flag is the logical AND
/// of both parents' (post-noise) flags.
pub fn flag_update_binary(flag_src: u8, flag_tgt: u8) -> u8 {
    flag_src & flag_tgt
}

/// One step of the flagged recurrence without any input validation; also
/// used to probe the Jacobian slightly outside the simplex. Returns the new
/// coefficients and the normalization `N`.
pub(crate) fn binary_step_raw(s: [f64; 4], f: &BinaryNoiseSpec) -> ([f64; 4], f64) {
    let [a0, a1, b0, b1] = s;
    let f00 = f.prob(0, 0);
    let f11 = f.prob(1, 1);
    let fs = f.f_s();
    let a = a0 + a1;
    let b = b0 + b1;
    let n = (f00 + f11) * (a * a + b * b) + 2.0 * fs * a * b;
    let a0p = f00 * (a0 * a0 + 2.0 * a0 * a1)
        + f11 * (b1 * b1 + 2.0 * b0 * b1)
        + fs * (a0 * b1 + a1 * b1 + a0 * b0);
    let a1p = f00 * a1 * a1 + f11 * b0 * b0 + fs * a1 * b0;
    let b0p = f00 * (b0 * b0 + 2.0 * b0 * b1)
        + f11 * (a1 * a1 + 2.0 * a0 * a1)
        + fs * (b0 * a1 + b1 * a1 + b0 * a0);
    let b1p = f00 * b1 * b1 + f11 * a0 * a0 + fs * b1 * a0;
    ([a0p / n, a1p / n, b0p / n, b1p / n], n)
}

/// One purification step on the flagged binary subensembles. Returns the
/// post-step state (conditioned on success) and the success probability `N`.
pub fn binary_step(
    s: &FlaggedBinaryState,
    f: &BinaryNoiseSpec,
) -> Result<(FlaggedBinaryState, f64), DemonError> {
    let (out, n) = binary_step_raw(s.as_array(), f);
    if n <= f64::EPSILON {
        return Err(DemonError::DegenerateStep);
    }
    Ok((FlaggedBinaryState::new(out[0], out[1], out[2], out[3])?, n))
}

/// One recorded round of a flagged binary trajectory.
#[derive(Debug, Clone, Copy)]
pub struct BinaryTrajectoryPoint {
    pub round: usize,
    pub state: FlaggedBinaryState,
    /// Success probability of the step that produced this state (1 at round 0).
    pub p_success: f64,
}

/// Iterate [`binary_step`] for `rounds` rounds, recording every state.
pub fn distill_binary(
    s0: &FlaggedBinaryState,
    f: &BinaryNoiseSpec,
    rounds: usize,
) -> Result<Vec<BinaryTrajectoryPoint>, DemonError> {
    let mut traj = Vec::with_capacity(rounds + 1);
    traj.push(BinaryTrajectoryPoint {
        round: 0,
        state: *s0,
        p_success: 1.0,
    });
    let mut state = *s0;
    for round in 1..=rounds {
        let (next, p) = binary_step(&state, f)?;
        state = next;
        traj.push(BinaryTrajectoryPoint {
            round,
            state,
            p_success: p,
        });
    }
    Ok(traj)
}

/// CSV serialization: `round,A0,A1,B0,B1,F,F_cond,p_success`.
pub fn write_binary_trajectory_csv<W: Write>(
    traj: &[BinaryTrajectoryPoint],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "round,A0,A1,B0,B1,F,F_cond,p_success")?;
    for p in traj {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.round,
            p.state.a0,
            p.state.a1,
            p.state.b0,
            p.state.b1,
            p.state.fidelity(),
            p.state.conditional_fidelity(),
            p.p_success
        )?;
    }
    Ok(())
}

/// Result of iterating the recurrence to (approximate) convergence.
#[derive(Debug, Clone, Copy)]
pub struct BinaryConvergence {
    pub state: FlaggedBinaryState,
    pub iterations: usize,
    /// Largest elementwise change in the final iteration.
    pub residual: f64,
    pub converged: bool,
}

/// Iterate [`binary_step`] from `s0` until the elementwise change drops
/// below `tol` or `max_iter` is reached.
pub fn converge_binary(
    s0: &FlaggedBinaryState,
    f: &BinaryNoiseSpec,
    tol: f64,
    max_iter: usize,
) -> Result<BinaryConvergence, DemonError> {
    let mut state = *s0;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let (next, _) = binary_step(&state, f)?;
        residual = state.max_delta(&next);
        state = next;
        if residual < tol {
            return Ok(BinaryConvergence {
                state,
                iterations: it,
                residual,
                converged: true,
            });
        }
    }
    Ok(BinaryConvergence {
        state,
        iterations: max_iter,
        residual,
        converged: false,
    })
}

fn require_factorized(f: &BinaryNoiseSpec) -> Result<f64, DemonError> {
    f.factorized_f0().ok_or(DemonError::NotFactorized)
}

/// The nontrivial fixpoint of the flagged binary recurrence for factorized
/// noise `f_{µν} = f_µ f_ν` with `f_0 ≥ 3/4`, computed by iterating the
/// recurrence inside its invariant `A_1 = B_0 = 0` plane. Iteration is the
/// ground truth; [`binary_fixpoint_closed_form`] is a cross-check.
pub fn binary_fixpoint(f: &BinaryNoiseSpec) -> Result<FlaggedBinaryState, DemonError> {
    let f0 = require_factorized(f)?;
    if !(0.75..=1.0).contains(&f0) {
        return Err(DemonError::OutOfRange {
            value: f0,
            lo: 0.75,
            hi: 1.0,
        });
    }
    // A_1 = B_0 = 0 is exactly invariant under the recurrence, so a start
    // inside that plane converges to the nontrivial branch.
    let start = FlaggedBinaryState::new(0.99, 0.0, 0.0, 0.01)?;
    let max_iter = 20_000_000;
    let run = converge_binary(&start, f, 1e-13, max_iter)?;
    if !run.converged && run.residual > 1e-9 {
        return Err(DemonError::NoConvergence {
            iterations: run.iterations,
            residual: run.residual,
        });
    }
    debug_assert!(run.state.a1 == 0.0 && run.state.b0 == 0.0);
    Ok(run.state)
}

/// Closed-form location of the nontrivial fixpoint for factorized noise:
///
/// `A_0^∞ = 1/2 + √(f_0 − 3/4) / (2 f_0 − 1)`, `B_1^∞ = 1 − A_0^∞`,
/// `A_1^∞ = B_0^∞ = 0`.
///
/// Note on the denominator: this family is sometimes printed with
/// denominator `f_0 − 1`, which leaves `[0, 1]` for every `f_0 > 3/4` and
/// diverges at `f_0 = 1`; iterating the recurrence is authoritative and
/// matches the `2 f_0 − 1` form above (endpoints: `f_0 = 3/4 → 1/2`,
/// `f_0 = 1 → 1`). Both readings are recorded here on purpose.
pub fn binary_fixpoint_closed_form(f0: f64) -> Result<FlaggedBinaryState, DemonError> {
    if !(0.75..=1.0).contains(&f0) {
        return Err(DemonError::OutOfRange {
            value: f0,
            lo: 0.75,
            hi: 1.0,
        });
    }
    let a0 = 0.5 + (f0 - 0.75).sqrt() / (2.0 * f0 - 1.0);
    FlaggedBinaryState::new(a0, 0.0, 0.0, 1.0 - a0)
}

/// Spectral radius of the Jacobian of the normalized recurrence at `state`,
/// in the three simplex coordinates `(A_0, A_1, B_0)` with
/// `B_1 = 1 − A_0 − A_1 − B_0`, estimated by central differences.
pub fn jacobian_spectral_radius(
    state: &FlaggedBinaryState,
    f: &BinaryNoiseSpec,
) -> Result<f64, DemonError> {
    let g = |x: [f64; 3]| -> [f64; 3] {
        let s = [x[0], x[1], x[2], 1.0 - x[0] - x[1] - x[2]];
        let (out, _) = binary_step_raw(s, f);
        [out[0], out[1], out[2]]
    };
    let x0 = [state.a0, state.a1, state.b0];
    let h = 1e-7;
    let mut jac = DMatrix::<f64>::zeros(3, 3);
    for c in 0..3 {
        let mut xp = x0;
        let mut xm = x0;
        xp[c] += h;
        xm[c] -= h;
        let gp = g(xp);
        let gm = g(xm);
        for r in 0..3 {
            jac[(r, c)] = (gp[r] - gm[r]) / (2.0 * h);
        }
    }
    Ok(jac
        .complex_eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max))
}

/// The critical noise parameter: the smallest `f_0` above which the
/// nontrivial fixpoint of the recurrence is an attractor (Jacobian spectral
/// radius crossing 1), located by bisection to 1e-6.
pub fn critical_f0() -> Result<f64, DemonError> {
    static CACHE: OnceLock<f64> = OnceLock::new();
    if let Some(&v) = CACHE.get() {
        return Ok(v);
    }
    let radius_gap = |f0: f64| -> Result<f64, DemonError> {
        let f = BinaryNoiseSpec::factorized(f0)?;
        let fix = binary_fixpoint(&f)?;
        Ok(jacobian_spectral_radius(&fix, &f)? - 1.0)
    };
    // Bracket by coarse scan: the fixpoint exists for f_0 ≥ 3/4 but is
    // transversally unstable just above it.
    let mut lo = f64::NAN;
    let mut hi = f64::NAN;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=40 {
        let f0 = 0.755 + 0.005 * k as f64;
        let gap = radius_gap(f0)?;
        if let Some((pf, pg)) = prev {
            if pg > 0.0 && gap <= 0.0 {
                lo = pf;
                hi = f0;
                break;
            }
        }
        prev = Some((f0, gap));
    }
    if lo.is_nan() {
        return Err(DemonError::BracketFailure {
            details: "spectral radius never crosses 1 on [0.755, 0.955]".into(),
        });
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if radius_gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let result = 0.5 * (lo + hi);
    Ok(*CACHE.get_or_init(|| result))
}

/// Noise regime of the purification protocol under factorized binary noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// `f_0 < 3/4`: the ensemble converges to the completely mixed binary
    /// state, fidelity 1/2.
    NoPurification,
    /// `3/4 ≤ f_0 ≤ f_0^crit`: the map purifies but the flags never become
    /// strictly correlated with the states.
    Intermediate,
    /// `f_0 > f_0^crit`: the conditional fidelity converges to 1 — every
    /// pair is pure given its flag, so any eavesdropper is factored out.
    Security,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::NoPurification => "no_purification",
            RegimeLabel::Intermediate => "intermediate",
            RegimeLabel::Security => "security",
        }
    }
}

/// Classify the regime of factorized binary noise by its `f_0`.
pub fn classify_regime(f: &BinaryNoiseSpec) -> Result<RegimeLabel, DemonError> {
    let f0 = require_factorized(f)?;
    if f0 < 0.75 {
        return Ok(RegimeLabel::NoPurification);
    }
    if f0 > critical_f0()? {
        Ok(RegimeLabel::Security)
    } else {
        Ok(RegimeLabel::Intermediate)
    }
}

/// One row of the regime map: the empirical attractor of the recurrence at
/// noise `f_0`, starting from the unflagged state with fidelity `start_f`.
#[derive(Debug, Clone, Copy)]
pub struct RegimeMapRow {
    pub f0: f64,
    pub regime: RegimeLabel,
    pub a0_inf: f64,
    pub b1_inf: f64,
    pub f_inf: f64,
    pub f_cond_inf: f64,
}

/// Compute regime-map rows over a grid of `f_0` values.
pub fn regime_map_rows(
    f0_grid: &[f64],
    start_f: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<RegimeMapRow>, DemonError> {
    let point = |&f0: &f64| -> Result<RegimeMapRow, DemonError> {
        if !(0.5..=1.0).contains(&f0) {
            return Err(DemonError::OutOfRange {
                value: f0,
                lo: 0.5,
                hi: 1.0,
            });
        }
        let f = BinaryNoiseSpec::factorized(f0)?;
        let start = FlaggedBinaryState::unflagged(start_f)?;
        let run = converge_binary(&start, &f, tol, max_iter)?;
        Ok(RegimeMapRow {
            f0,
            regime: classify_regime(&f)?,
            a0_inf: run.state.a0,
            b1_inf: run.state.b1,
            f_inf: run.state.fidelity(),
            f_cond_inf: run.state.conditional_fidelity(),
        })
    };
    crate::sweep::try_map(f0_grid, point)
}

/// CSV serialization: `f0,regime,A0_inf,B1_inf,F_inf,F_cond_inf`.
pub fn write_regime_map_csv<W: Write>(rows: &[RegimeMapRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "f0,regime,A0_inf,B1_inf,F_inf,F_cond_inf")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.f0,
            r.regime.as_str(),
            r.a0_inf,
            r.b1_inf,
            r.f_inf,
            r.f_cond_inf
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4_noise() -> BinaryNoiseSpec {
        BinaryNoiseSpec::new([[0.8575, 0.0475], [0.0475, 0.0475]]).unwrap()
    }

    #[test]
    fn noiseless_step_matches_hand_evaluation() {
        // f_00 = 1, (A0, B0) = (0.8, 0.2): A0' = 0.64/0.68, B0' = 0.04/0.68.
        let f = BinaryNoiseSpec::new([[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let s = FlaggedBinaryState::new(0.8, 0.0, 0.2, 0.0).unwrap();
        let (next, p) = binary_step(&s, &f).unwrap();
        assert!((p - 0.68).abs() < 1e-15);
        assert!((next.a0 - 0.64 / 0.68).abs() < 1e-15);
        assert!((next.b0 - 0.04 / 0.68).abs() < 1e-15);
        assert!(next.a1.abs() < 1e-15 && next.b1.abs() < 1e-15);
    }

    #[test]
    fn pure_flag0_state_is_a_noiseless_fixpoint() {
        let f = BinaryNoiseSpec::new([[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let s = FlaggedBinaryState::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let (next, p) = binary_step(&s, &f).unwrap();
        assert_eq!(next, s);
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flag_marginals_never_change_alices_description() {
        // Summing out the flags must reproduce the flag-blind recurrence
        // (all flags zero).
        let f = fig4_noise();
        let s = FlaggedBinaryState::new(0.55, 0.15, 0.2, 0.1).unwrap();
        let (next, p) = binary_step(&s, &f).unwrap();
        let blind = FlaggedBinaryState::new(s.fidelity(), 0.0, 1.0 - s.fidelity(), 0.0).unwrap();
        let (blind_next, blind_p) = binary_step(&blind, &f).unwrap();
        assert!((next.fidelity() - blind_next.fidelity()).abs() < 1e-14);
        assert!((p - blind_p).abs() < 1e-14);
    }

    #[test]
    fn outputs_stay_on_the_simplex_for_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let raw: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
            let sum: f64 = raw.iter().sum();
            let s =
                FlaggedBinaryState::new(raw[0] / sum, raw[1] / sum, raw[2] / sum, raw[3] / sum)
                    .unwrap();
            let t: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
            let tsum: f64 = t.iter().sum();
            let f = BinaryNoiseSpec::new([
                [t[0] / tsum, t[1] / tsum],
                [t[2] / tsum, t[3] / tsum],
            ])
            .unwrap();
            let (next, p) = binary_step(&s, &f).unwrap();
            assert!(p > 0.0 && p <= 1.0 + 1e-12);
            let sum = next.a0 + next.a1 + next.b0 + next.b1;
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fig4_parameters_decay_flag_mismatch_exponentially() {
        let traj = distill_binary(
            &FlaggedBinaryState::unflagged(0.8).unwrap(),
            &fig4_noise(),
            40,
        )
        .unwrap();
        // A1 and B0 shrink by a roughly constant factor per round.
        for w in traj[10..25].windows(2) {
            assert!(w[1].state.a1 < w[0].state.a1);
            assert!(w[1].state.b0 < w[0].state.b0);
        }
        assert!(traj[40].state.conditional_fidelity() > 1.0 - 1e-6);
    }

    #[test]
    fn fixpoint_iteration_matches_closed_form() {
        for f0 in [0.8, 0.85, 0.9, 0.95, 1.0] {
            let f = BinaryNoiseSpec::factorized(f0).unwrap();
            let fix = binary_fixpoint(&f).unwrap();
            let closed = binary_fixpoint_closed_form(f0).unwrap();
            assert!(
                (fix.a0 - closed.a0).abs() < 1e-9,
                "f0 = {f0}: {} vs {}",
                fix.a0,
                closed.a0
            );
            assert!(fix.a1.abs() <= 1e-12 && fix.b0.abs() <= 1e-12);
            assert!((fix.b1 - (1.0 - fix.a0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fixpoint_at_f0_09_matches_frozen_cubic_root() {
        // A0^∞ for f_0 = 0.9 is the root of 1.28x³ − 1.92x² + 0.66x − 0.01
        // near 0.98412.
        let fix = binary_fixpoint(&BinaryNoiseSpec::factorized(0.9).unwrap()).unwrap();
        assert!((fix.a0 - 0.9841229182759271).abs() < 1e-9);
        let x = fix.a0;
        let cubic = 1.28 * x * x * x - 1.92 * x * x + 0.66 * x - 0.01;
        assert!(cubic.abs() < 1e-9);
        assert!((fix.b1 - 0.0158770817240729).abs() < 1e-9);
    }

    #[test]
    fn fixpoint_requires_factorized_noise() {
        assert!(matches!(
            binary_fixpoint(&fig4_noise()),
            Err(DemonError::NotFactorized)
        ));
    }

    #[test]
    fn attractor_property_flips_around_the_critical_point() {
        let stable = BinaryNoiseSpec::factorized(0.80).unwrap();
        let fix = binary_fixpoint(&stable).unwrap();
        assert!(jacobian_spectral_radius(&fix, &stable).unwrap() < 1.0);

        let unstable = BinaryNoiseSpec::factorized(0.76).unwrap();
        let fix = binary_fixpoint(&unstable).unwrap();
        assert!(jacobian_spectral_radius(&fix, &unstable).unwrap() > 1.0);
    }

    #[test]
    fn critical_f0_matches_reference_value() {
        let crit = critical_f0().unwrap();
        assert!(
            (crit - CRITICAL_F0_REFERENCE).abs() < 1e-4,
            "got {crit}, expected {CRITICAL_F0_REFERENCE}"
        );
    }

    #[test]
    fn regime_classification_examples() {
        let regime = |f0: f64| classify_regime(&BinaryNoiseSpec::factorized(f0).unwrap()).unwrap();
        assert_eq!(regime(0.70), RegimeLabel::NoPurification);
        assert_eq!(regime(0.76), RegimeLabel::Intermediate);
        assert_eq!(regime(0.90), RegimeLabel::Security);
    }

    #[test]
    fn no_purification_regime_converges_to_the_mixed_binary_state() {
        let f = BinaryNoiseSpec::factorized(0.70).unwrap();
        let run = converge_binary(
            &FlaggedBinaryState::unflagged(0.8).unwrap(),
            &f,
            1e-13,
            2_000_000,
        )
        .unwrap();
        assert!((run.state.fidelity() - 0.5).abs() < 1e-6);
        // Flag pairs equalize: A0 = B0 and A1 = B1.
        assert!((run.state.a0 - run.state.b0).abs() < 1e-6);
        assert!((run.state.a1 - run.state.b1).abs() < 1e-6);
    }

    #[test]
    fn conditional_fidelity_examples() {
        let s = FlaggedBinaryState::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(conditional_fidelity(&s), 1.0);
        let s = FlaggedBinaryState::new(0.5, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(conditional_fidelity(&s), 1.0);
        let s = FlaggedBinaryState::new(0.25, 0.25, 0.25, 0.25).unwrap();
        assert_eq!(conditional_fidelity(&s), 0.5);
    }

    #[test]
    fn and_is_the_flag_update() {
        assert_eq!(flag_update_binary(0, 0), 0);
        assert_eq!(flag_update_binary(1, 0), 0);
        assert_eq!(flag_update_binary(0, 1), 0);
        assert_eq!(flag_update_binary(1, 1), 1);
    }
}
