//! The 16-parameter flagged Bell-diagonal recurrence.
//!
//! A pair's state is a Bell index, its flag a two-bit label in the same
//! encoding ([`BellIndex`]: high bit = phase, low bit = amplitude). Because
//! every element of the protocol — the sampled Pauli noise, the bilateral
//! quarter rotation, the bilateral CNOT and the σ_z coincidence test — maps
//! Bell products to Bell products, one purification step is an exact
//! transition table on (index, flag) labels, enumerated here over all
//! (source, target, µ, ν) combinations.
//!
//! ## Flag update
//!
//! The demon's flag is its running record of the net Pauli error on a pair.
//! Noise XORs the sampled error's label into the flag, and the deliberate
//! protocol operations relabel it exactly like the state: the rotation
//! applies the same permutation, and the bilateral CNOT XORs the target's
//! phase bit into the source's. The amplitude bit is special: after the
//! coincidence test the demon folds the target's amplitude flag bit into the
//! kept pair's by logical AND. Restricted to binary pairs (no phase bits)
//! this reduces exactly to the AND rule of the one-bit flag.

use std::io::Write;

use super::binary::FlaggedBinaryState;
use super::DemonError;
use crate::channels::PauliNoiseSpec;
use crate::qcore::BellIndex;

/// Relabeling of Bell indices under the bilateral quarter x-rotation:
/// Φ⁺ and Ψ⁺ fixed, Φ⁻ ↔ Ψ⁻ (flip the amplitude bit when the phase bit is
/// set).
#[inline]
pub(crate) fn rotate_label(l: u8) -> u8 {
    l ^ (l >> 1)
}

/// Bilateral-CNOT transition on (source, target) Bell labels: the target's
/// phase bit folds into the source, the source's amplitude bit folds into
/// the target.
#[inline]
pub(crate) fn bcnot_labels(src: u8, tgt: u8) -> (u8, u8) {
    let new_src = (src & 0b01) | ((src ^ tgt) & 0b10);
    let new_tgt = (tgt & 0b10) | ((src ^ tgt) & 0b01);
    (new_src, new_tgt)
}

/// One noiseless protocol step on definite Bell labels: returns whether the
/// σ_z results coincide (the pair is kept) and the kept source label.
pub fn protocol_step_labels(src: BellIndex, tgt: BellIndex) -> (bool, BellIndex) {
    let src_r = rotate_label(src.value());
    let tgt_r = rotate_label(tgt.value());
    let (new_src, new_tgt) = bcnot_labels(src_r, tgt_r);
    let keep = new_tgt & 0b01 == 0;
    (keep, BellIndex::new(new_src).expect("two bits"))
}

/// The two-bit flag-update function applied to the post-noise,
/// post-rotation flags of the two parents: phase bits combine by XOR (exact
/// error propagation through the bilateral CNOT), amplitude bits by AND
/// (the coincidence fold).
pub fn flag_update_general(flag_src: u8, flag_tgt: u8) -> u8 {
    ((flag_src ^ flag_tgt) & 0b10) | (flag_src & flag_tgt & 0b01)
}

/// Flag evolution through one protocol step: rotation relabeling on each
/// parent's flag, then the update fold.
pub fn protocol_step_flags(flag_src: u8, flag_tgt: u8) -> u8 {
    flag_update_general(rotate_label(flag_src), rotate_label(flag_tgt))
}

/// The 16 subensemble coefficients `w[bell][flag]`: Bell-diagonal weight of
/// `|B_bell⟩` within the subensemble carrying error flag `flag`. Both run
/// over the four two-bit labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlaggedBellState {
    w: [[f64; 4]; 4],
}

impl FlaggedBellState {
    pub fn new(w: [[f64; 4]; 4]) -> Result<Self, DemonError> {
        if w.iter().flatten().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
            return Err(DemonError::InvalidState {
                reason: "coefficient out of range".into(),
            });
        }
        let sum: f64 = w.iter().flatten().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(DemonError::InvalidState {
                reason: format!("coefficients sum to {sum}, not 1"),
            });
        }
        Ok(Self { w })
    }

    /// Bell-diagonal coefficients (index order) with every flag set to zero.
    pub fn unflagged(by_index: [f64; 4]) -> Result<Self, DemonError> {
        let mut w = [[0.0; 4]; 4];
        for (bell, &x) in by_index.iter().enumerate() {
            w[bell][0] = x;
        }
        Self::new(w)
    }

    /// Embed a flagged binary state: Φ⁺/Ψ⁺ with flag bit x ↔ flag label
    /// `(0, x)`.
    pub fn from_binary(s: &FlaggedBinaryState) -> Self {
        let mut w = [[0.0; 4]; 4];
        w[BellIndex::PHI_PLUS.value() as usize][0b00] = s.a0;
        w[BellIndex::PHI_PLUS.value() as usize][0b01] = s.a1;
        w[BellIndex::PSI_PLUS.value() as usize][0b00] = s.b0;
        w[BellIndex::PSI_PLUS.value() as usize][0b01] = s.b1;
        Self { w }
    }

    /// Project back onto the binary subspace (weights outside it must vanish).
    pub fn to_binary(&self) -> Result<FlaggedBinaryState, DemonError> {
        let mut outside = 0.0;
        for bell in 0..4 {
            for flag in 0..4 {
                let binary_cell = (bell == 0 || bell == 1) && (flag == 0 || flag == 1);
                if !binary_cell {
                    outside += self.w[bell][flag];
                }
            }
        }
        if outside > 1e-12 {
            return Err(DemonError::InvalidState {
                reason: format!("weight {outside:.3e} outside the binary subspace"),
            });
        }
        FlaggedBinaryState::new(
            self.w[0][0b00],
            self.w[0][0b01],
            self.w[1][0b00],
            self.w[1][0b01],
        )
    }

    pub fn weight(&self, bell: BellIndex, flag: u8) -> f64 {
        self.w[bell.value() as usize][flag as usize]
    }

    pub fn weights(&self) -> &[[f64; 4]; 4] {
        &self.w
    }

    /// Marginal Bell-diagonal coefficients in index order (flags summed out).
    pub fn marginal_by_index(&self) -> [f64; 4] {
        std::array::from_fn(|bell| self.w[bell].iter().sum())
    }

    /// Alice/Bob fidelity `F`: total Φ⁺ weight.
    pub fn fidelity(&self) -> f64 {
        self.w[BellIndex::PHI_PLUS.value() as usize].iter().sum()
    }

    /// Conditional fidelity: total weight on flag-matched cells
    /// (`flag == bell index`), i.e. the fidelity given the demon's records.
    pub fn conditional_fidelity(&self) -> f64 {
        (0..4).map(|k| self.w[k][k]).sum()
    }

    /// Total weight on flag-mismatched cells.
    pub fn mismatched_weight(&self) -> f64 {
        1.0 - self.conditional_fidelity()
    }

    /// Largest flag-mismatched coefficient.
    pub fn max_mismatched(&self) -> f64 {
        let mut m: f64 = 0.0;
        for bell in 0..4 {
            for flag in 0..4 {
                if bell != flag {
                    m = m.max(self.w[bell][flag]);
                }
            }
        }
        m
    }
}

/// One purification step of the 16-parameter flagged recurrence: enumerate
/// all (source bell, source flag, target bell, target flag, µ, ν)
/// combinations, push labels and flags through noise, rotation, bilateral
/// CNOT and the coincidence postselection, and accumulate kept-source
/// probabilities. Returns the success-conditioned state and the success
/// probability.
pub fn bell_step(
    s: &FlaggedBellState,
    f: &PauliNoiseSpec,
) -> Result<(FlaggedBellState, f64), DemonError> {
    let mut out = [[0.0f64; 4]; 4];
    let mut p_success = 0.0;
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            let f_w = f.prob(mu, nu);
            if f_w == 0.0 {
                continue;
            }
            let mu_label = BellIndex::pauli_label(mu);
            let nu_label = BellIndex::pauli_label(nu);
            for src_bell in 0..4u8 {
                for src_flag in 0..4u8 {
                    let w_src = s.w[src_bell as usize][src_flag as usize];
                    if w_src == 0.0 {
                        continue;
                    }
                    let sb = rotate_label(src_bell ^ mu_label);
                    let sf = rotate_label(src_flag ^ mu_label);
                    for tgt_bell in 0..4u8 {
                        for tgt_flag in 0..4u8 {
                            let w = w_src * s.w[tgt_bell as usize][tgt_flag as usize] * f_w;
                            if w == 0.0 {
                                continue;
                            }
                            let tb = rotate_label(tgt_bell ^ nu_label);
                            let tf = rotate_label(tgt_flag ^ nu_label);
                            let (new_src, new_tgt) = bcnot_labels(sb, tb);
                            if new_tgt & 0b01 != 0 {
                                continue; // anticorrelated results: discarded
                            }
                            let new_flag = flag_update_general(sf, tf);
                            out[new_src as usize][new_flag as usize] += w;
                            p_success += w;
                        }
                    }
                }
            }
        }
    }
    if p_success <= f64::EPSILON {
        return Err(DemonError::DegenerateStep);
    }
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x /= p_success;
        }
    }
    Ok((FlaggedBellState::new(out)?, p_success))
}

/// One recorded round of a flagged Bell trajectory.
#[derive(Debug, Clone, Copy)]
pub struct BellTrajectoryPoint {
    pub round: usize,
    pub state: FlaggedBellState,
    pub p_success: f64,
}

/// Iterate [`bell_step`] for `rounds` rounds, recording every state.
pub fn bell_distill(
    s0: &FlaggedBellState,
    f: &PauliNoiseSpec,
    rounds: usize,
) -> Result<Vec<BellTrajectoryPoint>, DemonError> {
    let mut traj = Vec::with_capacity(rounds + 1);
    traj.push(BellTrajectoryPoint {
        round: 0,
        state: *s0,
        p_success: 1.0,
    });
    let mut state = *s0;
    for round in 1..=rounds {
        let (next, p) = bell_step(&state, f)?;
        state = next;
        traj.push(BellTrajectoryPoint {
            round,
            state,
            p_success: p,
        });
    }
    Ok(traj)
}

/// Column order of the 16 coefficients in trajectory CSVs: the A, B, C, D
/// groups (Φ⁺, Ψ⁻, Ψ⁺, Φ⁻) each over flags 00, 01, 10, 11.
pub(crate) const BELL_CSV_GROUPS: [(char, BellIndex); 4] = [
    ('A', BellIndex::PHI_PLUS),
    ('B', BellIndex::PSI_MINUS),
    ('C', BellIndex::PSI_PLUS),
    ('D', BellIndex::PHI_MINUS),
];

pub(crate) fn bell_csv_header() -> String {
    let mut cols = vec!["round".to_string()];
    for (name, _) in BELL_CSV_GROUPS {
        for flag in 0..4 {
            cols.push(format!("{name}{:02b}", flag));
        }
    }
    cols.push("F".into());
    cols.push("F_cond".into());
    cols.join(",")
}

pub(crate) fn bell_csv_row(round: usize, state: &FlaggedBellState) -> String {
    let mut cols = vec![round.to_string()];
    for (_, bell) in BELL_CSV_GROUPS {
        for flag in 0..4u8 {
            cols.push(state.weight(bell, flag).to_string());
        }
    }
    cols.push(state.fidelity().to_string());
    cols.push(state.conditional_fidelity().to_string());
    cols.join(",")
}

/// CSV serialization: `round,A00..A11,B00..B11,C00..C11,D00..D11,F,F_cond`.
pub fn write_bell_trajectory_csv<W: Write>(
    traj: &[BellTrajectoryPoint],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "{}", bell_csv_header())?;
    for p in traj {
        writeln!(out, "{}", bell_csv_row(p.round, &p.state))?;
    }
    Ok(())
}
