//! Monte Carlo flagged-ensemble simulation.
//!
//! After the randomization steps the ensemble is a classical mixture of
//! Bell products, and every protocol element (sampled Pauli noise, bilateral
//! rotation, bilateral CNOT, σ_z coincidence) maps Bell products to Bell
//! products, so each pair is represented by a classical `(BellIndex, flag)`
//! label. The dense cross-checks live in the bell_map and integration tests.
//!
//! The ensemble is split into `workers` partitions with independent RNG
//! streams derived from the root seed; pairing happens inside a partition,
//! so results are reproducible for a fixed (seed, worker-count)
//! configuration regardless of scheduling. The reference configuration is a
//! single worker. A partition with an odd number of survivors discards the
//! last one that round (at most one pair per partition per round).

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::bell_map::{
    bell_csv_header, bell_csv_row, bcnot_labels, flag_update_general, rotate_label,
    FlaggedBellState,
};
use super::DemonError;
use crate::channels::{BinaryNoiseSpec, PauliNoiseSpec};
use crate::qcore::{BellIndex, DensityOperator, Gate, PauliString, QcoreError};

/// One ensemble member: its Bell index and the demon's two-bit error flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlaggedPair {
    pub bell: BellIndex,
    pub flag: u8,
}

/// Noise model driving the demon's sampler.
#[derive(Debug, Clone)]
pub enum NoiseModel {
    /// Two-bit correlated spin-flip channel (µ, ν ∈ {identity, σ_x}).
    Binary(BinaryNoiseSpec),
    /// Correlated two-qubit Pauli channel.
    Pauli(PauliNoiseSpec),
}

impl NoiseModel {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u8, u8) {
        match self {
            NoiseModel::Binary(f) => f.sample_pair(rng),
            NoiseModel::Pauli(f) => f.sample_pair(rng),
        }
    }

    /// Whether trajectories stay within the binary (Φ⁺/Ψ⁺, one flag bit)
    /// subspace for binary initial states.
    pub fn is_binary(&self) -> bool {
        matches!(self, NoiseModel::Binary(_))
    }
}

/// Per-round record: survivor count and the empirical subensemble
/// coefficients among the survivors.
#[derive(Debug, Clone, Copy)]
pub struct McRound {
    pub round: usize,
    pub survivors: usize,
    pub estimate: FlaggedBellState,
}

/// A Monte Carlo distillation record. `truncated` is set when the ensemble
/// was exhausted before the requested number of rounds.
#[derive(Debug, Clone)]
pub struct McTrajectory {
    pub rounds: Vec<McRound>,
    pub truncated: bool,
}

fn sample_initial<R: Rng + ?Sized>(dist: &FlaggedBellState, rng: &mut R) -> FlaggedPair {
    let x: f64 = rng.random();
    let mut acc = 0.0;
    for bell in 0..4u8 {
        for flag in 0..4u8 {
            acc += dist.weight(BellIndex::new(bell).unwrap(), flag);
            if x < acc {
                return FlaggedPair {
                    bell: BellIndex::new(bell).unwrap(),
                    flag,
                };
            }
        }
    }
    FlaggedPair {
        bell: BellIndex::PSI_MINUS,
        flag: 3,
    }
}

/// One sampled purification step on a (source, target) pair of pairs.
/// Returns the kept source pair, or `None` when the coincidence test fails.
fn pair_step<R: Rng + ?Sized>(
    src: FlaggedPair,
    tgt: FlaggedPair,
    noise: &NoiseModel,
    rng: &mut R,
) -> Option<FlaggedPair> {
    let (mu, nu) = noise.sample(rng);
    let mu_label = BellIndex::pauli_label(mu);
    let nu_label = BellIndex::pauli_label(nu);
    let sb = rotate_label(src.bell.value() ^ mu_label);
    let sf = rotate_label(src.flag ^ mu_label);
    let tb = rotate_label(tgt.bell.value() ^ nu_label);
    let tf = rotate_label(tgt.flag ^ nu_label);
    let (new_src, new_tgt) = bcnot_labels(sb, tb);
    if new_tgt & 0b01 != 0 {
        return None;
    }
    Some(FlaggedPair {
        bell: BellIndex::new(new_src).expect("two bits"),
        flag: flag_update_general(sf, tf),
    })
}

fn counts_of(pairs: &[FlaggedPair]) -> [u64; 16] {
    let mut counts = [0u64; 16];
    for p in pairs {
        counts[(p.bell.value() * 4 + p.flag) as usize] += 1;
    }
    counts
}

/// Split `n` into `workers` chunks, each even, as balanced as possible.
fn even_partition(n: usize, workers: usize) -> Vec<usize> {
    let couples = n / 2;
    let base = couples / workers;
    let extra = couples % workers;
    (0..workers)
        .map(|w| 2 * (base + usize::from(w < extra)))
        .collect()
}

/// Run the flagged-ensemble Monte Carlo: `n_pairs` pairs sampled i.i.d.
/// from `initial`, combined two at a time for `rounds` purification rounds
/// under sampled noise. Returns per-round coefficient estimates and
/// survivor counts (round 0 is the initial sample).
pub fn monte_carlo_distill(
    n_pairs: usize,
    initial: &FlaggedBellState,
    noise: &NoiseModel,
    rounds: usize,
    seed: u64,
    workers: usize,
) -> Result<McTrajectory, DemonError> {
    if n_pairs < 2 || n_pairs % 2 != 0 {
        return Err(DemonError::BadEnsembleSize(n_pairs));
    }
    let workers = workers.max(1);

    // counts[round][cell] per worker; workers that run out of pairs
    // contribute zeros from then on.
    let per_worker: Vec<Vec<[u64; 16]>> = {
        let sizes = even_partition(n_pairs, workers);
        crate::sweep::map_workers(workers, |w| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let mut pairs: Vec<FlaggedPair> = (0..sizes[w])
                .map(|_| sample_initial(initial, &mut rng))
                .collect();
            let mut counts = Vec::with_capacity(rounds + 1);
            counts.push(counts_of(&pairs));
            for _ in 1..=rounds {
                let mut kept = Vec::with_capacity(pairs.len() / 2);
                for couple in pairs.chunks_exact(2) {
                    if let Some(p) = pair_step(couple[0], couple[1], noise, &mut rng) {
                        kept.push(p);
                    }
                }
                pairs = kept;
                counts.push(counts_of(&pairs));
            }
            counts
        })
    };

    let mut out = Vec::with_capacity(rounds + 1);
    let mut truncated = false;
    for round in 0..=rounds {
        let mut counts = [0u64; 16];
        for wc in &per_worker {
            for (acc, &c) in counts.iter_mut().zip(&wc[round]) {
                *acc += c;
            }
        }
        let survivors: u64 = counts.iter().sum();
        if survivors == 0 {
            truncated = true;
            break;
        }
        let mut w = [[0.0; 4]; 4];
        for bell in 0..4 {
            for flag in 0..4 {
                w[bell][flag] = counts[bell * 4 + flag] as f64 / survivors as f64;
            }
        }
        out.push(McRound {
            round,
            survivors: survivors as usize,
            estimate: FlaggedBellState::new(w)?,
        });
    }
    Ok(McTrajectory {
        rounds: out,
        truncated,
    })
}

/// CSV serialization. With `binary = true` the columns are
/// `round,survivors,A0,A1,B0,B1,F,F_cond` (the estimates must lie in the
/// binary subspace); otherwise the 16-coefficient layout of
/// [`super::write_bell_trajectory_csv`] plus a survivors column.
pub fn write_mc_trajectory_csv<W: Write>(
    traj: &McTrajectory,
    binary: bool,
    out: &mut W,
) -> Result<(), DemonError> {
    let io_err = |e: std::io::Error| DemonError::InvalidState {
        reason: format!("write failed: {e}"),
    };
    if binary {
        writeln!(out, "round,survivors,A0,A1,B0,B1,F,F_cond").map_err(io_err)?;
        for r in &traj.rounds {
            let b = r.estimate.to_binary()?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.round,
                r.survivors,
                b.a0,
                b.a1,
                b.b0,
                b.b1,
                b.fidelity(),
                b.conditional_fidelity()
            )
            .map_err(io_err)?;
        }
    } else {
        let header = bell_csv_header();
        let (head, rest) = header.split_once(',').expect("header has columns");
        writeln!(out, "{head},survivors,{rest}").map_err(io_err)?;
        for r in &traj.rounds {
            let row = bell_csv_row(r.round, &r.estimate);
            let (head, rest) = row.split_once(',').expect("row has columns");
            writeln!(out, "{head},{},{rest}", r.survivors).map_err(io_err)?;
        }
    }
    Ok(())
}

/// Randomize a labeled ensemble: each pair is independently twirled by a
/// random bilateral Pauli — which fixes every Bell state up to a global
/// phase, so the classical labels are untouched — and the numbering is
/// randomly permuted.
pub fn randomize_ensemble<R: Rng + ?Sized>(pairs: &mut [FlaggedPair], rng: &mut R) {
    pairs.shuffle(rng);
}

/// Dense variant of the randomization on a 2N-qubit register in pair layout
/// `a1 b1 a2 b2 ...`: the exact bilateral-Pauli twirl average per pair
/// (which removes all coherences between different Bell products and all
/// Bell-basis off-diagonals within a pair), followed by a sampled uniform
/// permutation of the pair numbering.
pub fn randomize_ensemble_dense<R: Rng + ?Sized>(
    rho: &DensityOperator,
    rng: &mut R,
) -> Result<DensityOperator, DemonError> {
    if rho.n_qubits() % 2 != 0 {
        return Err(QcoreError::DimensionMismatch {
            dim: rho.dim(),
            n_qubits: rho.n_qubits() + 1,
        }
        .into());
    }
    let n_pairs = rho.n_qubits() / 2;

    // Twirl: average over all 4^N bilateral Pauli assignments.
    let mut acc = rho.clone();
    acc.scale(0.0);
    let assignments = 4usize.pow(n_pairs as u32);
    for code in 0..assignments {
        let mut terms = Vec::with_capacity(2 * n_pairs);
        let mut c = code;
        for pair in 0..n_pairs {
            let k = (c % 4) as u8;
            c /= 4;
            if k != 0 {
                terms.push((2 * pair, k));
                terms.push((2 * pair + 1, k));
            }
        }
        let gate = Gate::Pauli(PauliString::new(terms, crate::qcore::Phase::PlusOne)?);
        let term = rho.apply(&gate)?;
        acc.add_scaled(&term, 1.0 / assignments as f64);
    }

    // Renumber the pairs by a uniformly random permutation.
    let mut perm: Vec<usize> = (0..n_pairs).collect();
    perm.shuffle(rng);
    let mut placement = vec![0usize; rho.n_qubits()];
    for (j, &pj) in perm.iter().enumerate() {
        placement[2 * j] = 2 * pj;
        placement[2 * j + 1] = 2 * pj + 1;
    }
    Ok(crate::channels::permute_qubits(&acc, &placement)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demon::binary::FlaggedBinaryState;
    use crate::qcore::{bell_decompose, bell_state, StateVector, C64};

    fn binary_initial(f: f64) -> FlaggedBellState {
        FlaggedBellState::from_binary(&FlaggedBinaryState::unflagged(f).unwrap())
    }

    #[test]
    fn noiseless_pure_ensemble_stays_pure() {
        let initial = binary_initial(1.0);
        let noise = NoiseModel::Binary(BinaryNoiseSpec::new([[1.0, 0.0], [0.0, 0.0]]).unwrap());
        let traj = monte_carlo_distill(1 << 12, &initial, &noise, 6, 9, 1).unwrap();
        assert!(!traj.truncated);
        for r in &traj.rounds {
            assert!((r.estimate.weight(BellIndex::PHI_PLUS, 0) - 1.0).abs() < 1e-15);
        }
        // Perfect pairs always pass the coincidence test: exact halving.
        for w in traj.rounds.windows(2) {
            assert_eq!(w[1].survivors, w[0].survivors / 2);
        }
    }

    #[test]
    fn fixed_seed_gives_identical_trajectories() {
        let initial = binary_initial(0.8);
        let noise =
            NoiseModel::Binary(BinaryNoiseSpec::new([[0.8575, 0.0475], [0.0475, 0.0475]]).unwrap());
        let a = monte_carlo_distill(10_000, &initial, &noise, 5, 1234, 1).unwrap();
        let b = monte_carlo_distill(10_000, &initial, &noise, 5, 1234, 1).unwrap();
        for (x, y) in a.rounds.iter().zip(&b.rounds) {
            assert_eq!(x.survivors, y.survivors);
            assert_eq!(x.estimate, y.estimate);
        }
        let c = monte_carlo_distill(10_000, &initial, &noise, 5, 1235, 1).unwrap();
        assert_ne!(a.rounds[1].survivors, c.rounds[1].survivors);
    }

    #[test]
    fn worker_partitions_are_deterministic_for_fixed_config() {
        let initial = binary_initial(0.8);
        let noise =
            NoiseModel::Binary(BinaryNoiseSpec::new([[0.8575, 0.0475], [0.0475, 0.0475]]).unwrap());
        let a = monte_carlo_distill(20_000, &initial, &noise, 4, 7, 4).unwrap();
        let b = monte_carlo_distill(20_000, &initial, &noise, 4, 7, 4).unwrap();
        for (x, y) in a.rounds.iter().zip(&b.rounds) {
            assert_eq!(x.survivors, y.survivors);
            assert_eq!(x.estimate, y.estimate);
        }
    }

    #[test]
    fn rejects_odd_or_tiny_ensembles() {
        let initial = binary_initial(0.8);
        let noise = NoiseModel::Binary(BinaryNoiseSpec::factorized(0.9).unwrap());
        assert!(matches!(
            monte_carlo_distill(7, &initial, &noise, 1, 0, 1),
            Err(DemonError::BadEnsembleSize(7))
        ));
        assert!(matches!(
            monte_carlo_distill(0, &initial, &noise, 1, 0, 1),
            Err(DemonError::BadEnsembleSize(0))
        ));
    }

    #[test]
    fn exhaustion_truncates_the_trajectory() {
        let initial = binary_initial(0.6);
        let noise = NoiseModel::Binary(BinaryNoiseSpec::factorized(0.8).unwrap());
        let traj = monte_carlo_distill(4, &initial, &noise, 30, 3, 1).unwrap();
        assert!(traj.truncated);
        assert!(traj.rounds.len() < 31);
    }

    #[test]
    fn randomize_preserves_the_label_multiset() {
        use rand::SeedableRng;
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut pairs: Vec<FlaggedPair> = (0..64u8)
            .map(|k| FlaggedPair {
                bell: BellIndex::new(k % 4).unwrap(),
                flag: (k / 4) % 4,
            })
            .collect();
        let before = {
            let mut v = pairs.clone();
            v.sort_by_key(|p| (p.bell.value(), p.flag));
            v
        };
        randomize_ensemble(&mut pairs, &mut rng);
        let mut after = pairs.clone();
        after.sort_by_key(|p| (p.bell.value(), p.flag));
        assert_eq!(before, after);
    }

    #[test]
    fn dense_randomization_kills_cross_pair_coherences() {
        use rand::SeedableRng;
        // Superposition of Φ⁺Φ⁺ and Ψ⁺Ψ⁺ across two pairs: coherent in the
        // Bell product basis.
        let p1 = bell_state(BellIndex::PHI_PLUS)
            .kron(&bell_state(BellIndex::PHI_PLUS))
            .unwrap();
        let p2 = bell_state(BellIndex::PSI_PLUS)
            .kron(&bell_state(BellIndex::PSI_PLUS))
            .unwrap();
        let amps: Vec<C64> = p1
            .amplitudes()
            .iter()
            .zip(p2.amplitudes())
            .map(|(a, b)| (a + b) / C64::new(std::f64::consts::SQRT_2, 0.0))
            .collect();
        let coherent = DensityOperator::from_state(&StateVector::new(4, amps).unwrap());

        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let out = randomize_ensemble_dense(&coherent, &mut rng).unwrap();

        // Both pair marginals must be exactly Bell diagonal…
        for pair in [[0usize, 1], [2, 3]] {
            let dec = bell_decompose(&out.partial_trace(&pair).unwrap()).unwrap();
            assert!(dec.offdiag_norm < 1e-12);
            assert!((dec.a - 0.5).abs() < 1e-12);
            assert!((dec.c - 0.5).abs() < 1e-12);
        }
        // …and the joint state diagonal in the Bell product basis: its
        // purity drops to that of the classical mixture (1/2).
        assert!((out.purity() - 0.5).abs() < 1e-12);
    }
}
