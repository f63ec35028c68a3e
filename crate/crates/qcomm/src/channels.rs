//! Noise channels: depolarizing accompaniment of unitaries, unreliable POVM
//! measurement, the correlated two-qubit Pauli channel, the two-bit
//! correlated spin-flip channel, and seeded sampling for Monte Carlo runs.
//!
//! Noise is applied at protocol-defined instants only (after gates, at
//! measurements); there is no continuous-time evolution.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{C64, DensityOperator, Gate, PauliString, QcoreError};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("reliability {value} outside [{lo}, {hi}]")]
    ParameterRange { value: f64, lo: f64, hi: f64 },

    #[error("distribution invalid: {reason}")]
    InvalidDistribution { reason: String },

    #[error("channel qubits must be distinct")]
    RepeatedQubit,

    #[error("unitary acts outside the depolarized subsystem")]
    UnitaryOutsideSubsystem,

    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

fn check_distribution(entries: &[f64]) -> Result<(), ChannelError> {
    if entries.iter().any(|&x| x < 0.0) {
        return Err(ChannelError::InvalidDistribution {
            reason: "negative entry".into(),
        });
    }
    let sum: f64 = entries.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(ChannelError::InvalidDistribution {
            reason: format!("entries sum to {sum}, not 1"),
        });
    }
    Ok(())
}

fn sample_categorical<R: Rng + ?Sized>(weights: impl Iterator<Item = f64>, rng: &mut R) -> usize {
    let x: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        acc += w;
        last = i;
        if x < acc {
            return i;
        }
    }
    last
}

/// Distribution `f_{µν}` of the correlated two-qubit Pauli channel
/// `ρ → Σ f_{µν} σ_µ^{(a1)} σ_ν^{(a2)} ρ σ_µ^{(a1)} σ_ν^{(a2)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PauliNoiseSpecRaw", into = "PauliNoiseSpecRaw")]
pub struct PauliNoiseSpec {
    f: [[f64; 4]; 4],
}

#[derive(Serialize, Deserialize)]
struct PauliNoiseSpecRaw {
    f: [[f64; 4]; 4],
}

impl TryFrom<PauliNoiseSpecRaw> for PauliNoiseSpec {
    type Error = ChannelError;
    fn try_from(raw: PauliNoiseSpecRaw) -> Result<Self, ChannelError> {
        Self::new(raw.f)
    }
}

impl From<PauliNoiseSpec> for PauliNoiseSpecRaw {
    fn from(spec: PauliNoiseSpec) -> Self {
        PauliNoiseSpecRaw { f: spec.f }
    }
}

impl PauliNoiseSpec {
    pub fn new(f: [[f64; 4]; 4]) -> Result<Self, ChannelError> {
        let flat: Vec<f64> = f.iter().flatten().cloned().collect();
        check_distribution(&flat)?;
        Ok(Self { f })
    }

    /// Rescale a nonnegative table to unit sum. Accepts tables whose sum is
    /// within `0.01` of 1 (tabulated parameters are often rounded).
    pub fn normalized(mut f: [[f64; 4]; 4]) -> Result<Self, ChannelError> {
        let sum: f64 = f.iter().flatten().sum();
        if f.iter().flatten().any(|&x| x < 0.0) || (sum - 1.0).abs() > 1e-2 {
            return Err(ChannelError::InvalidDistribution {
                reason: format!("table sum {sum} too far from 1"),
            });
        }
        for row in f.iter_mut() {
            for x in row.iter_mut() {
                *x /= sum;
            }
        }
        Ok(Self { f })
    }

    /// The identity channel (`f_00 = 1`).
    pub fn identity() -> Self {
        let mut f = [[0.0; 4]; 4];
        f[0][0] = 1.0;
        Self { f }
    }

    /// Factorized `f_{µν} = g_µ g_ν` from a single-qubit distribution.
    pub fn factorized(g: [f64; 4]) -> Result<Self, ChannelError> {
        check_distribution(&g)?;
        let mut f = [[0.0; 4]; 4];
        for (mu, row) in f.iter_mut().enumerate() {
            for (nu, x) in row.iter_mut().enumerate() {
                *x = g[mu] * g[nu];
            }
        }
        Ok(Self { f })
    }

    pub fn f(&self) -> &[[f64; 4]; 4] {
        &self.f
    }

    pub fn prob(&self, mu: u8, nu: u8) -> f64 {
        self.f[mu as usize][nu as usize]
    }

    /// Sample `(µ, ν)` distributed as `f_{µν}`.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (u8, u8) {
        let k = sample_categorical(self.f.iter().flatten().cloned(), rng);
        ((k / 4) as u8, (k % 4) as u8)
    }
}

/// Distribution of the two-bit correlated spin-flip channel: `f_{µν}` with
/// `µ, ν ∈ {0, 1}` meaning identity / σ_x on the source and target qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BinaryNoiseSpecRaw", into = "BinaryNoiseSpecRaw")]
pub struct BinaryNoiseSpec {
    f: [[f64; 2]; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BinaryNoiseSpecRaw {
    Factorized { f0: f64 },
    Table { f: [[f64; 2]; 2] },
}

impl TryFrom<BinaryNoiseSpecRaw> for BinaryNoiseSpec {
    type Error = ChannelError;
    fn try_from(raw: BinaryNoiseSpecRaw) -> Result<Self, ChannelError> {
        match raw {
            BinaryNoiseSpecRaw::Factorized { f0 } => Self::factorized(f0),
            BinaryNoiseSpecRaw::Table { f } => Self::new(f),
        }
    }
}

impl From<BinaryNoiseSpec> for BinaryNoiseSpecRaw {
    fn from(spec: BinaryNoiseSpec) -> Self {
        BinaryNoiseSpecRaw::Table { f: spec.f }
    }
}

impl BinaryNoiseSpec {
    pub fn new(f: [[f64; 2]; 2]) -> Result<Self, ChannelError> {
        let flat: Vec<f64> = f.iter().flatten().cloned().collect();
        check_distribution(&flat)?;
        Ok(Self { f })
    }

    /// Uncorrelated noise `f_{µν} = f_µ f_ν` with `f_1 = 1 − f_0`.
    pub fn factorized(f0: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&f0) {
            return Err(ChannelError::ParameterRange {
                value: f0,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let f1 = 1.0 - f0;
        Self::new([[f0 * f0, f0 * f1], [f1 * f0, f1 * f1]])
    }

    pub fn f(&self) -> &[[f64; 2]; 2] {
        &self.f
    }

    pub fn prob(&self, mu: u8, nu: u8) -> f64 {
        self.f[mu as usize][nu as usize]
    }

    /// `f_s = f_01 + f_10`.
    pub fn f_s(&self) -> f64 {
        self.f[0][1] + self.f[1][0]
    }

    /// Whether the table factorizes as `f_{µν} = f_µ f_ν` (within 1e-12),
    /// together with the marginal `f_0` when it does.
    pub fn factorized_f0(&self) -> Option<f64> {
        let f0 = self.f[0][0] + self.f[0][1];
        let symmetric = (self.f[0][1] - self.f[1][0]).abs() <= 1e-12;
        let product = (self.f[0][0] * self.f[1][1] - self.f[0][1] * self.f[1][0]).abs() <= 1e-12;
        (symmetric && product).then_some(f0)
    }

    /// Embed into the four-Pauli table (identity ↔ µ=0, spin flip ↔ σ_x).
    pub fn to_pauli_spec(&self) -> PauliNoiseSpec {
        let mut f = [[0.0; 4]; 4];
        for mu in 0..2 {
            for nu in 0..2 {
                f[mu][nu] = self.f[mu][nu];
            }
        }
        PauliNoiseSpec { f }
    }

    /// Sample `(µ, ν)` distributed as `f_{µν}`.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (u8, u8) {
        let k = sample_categorical(self.f.iter().flatten().cloned(), rng);
        ((k / 2) as u8, (k % 2) as u8)
    }
}

/// Reliability parameters of the apparatus: `p1` for one-qubit operations,
/// `p2` for two-qubit operations, `eta ∈ [1/2, 1]` for measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ApparatusNoiseRaw", into = "ApparatusNoiseRaw")]
pub struct ApparatusNoise {
    pub p1: f64,
    pub p2: f64,
    pub eta: f64,
}

#[derive(Serialize, Deserialize)]
struct ApparatusNoiseRaw {
    p1: f64,
    p2: f64,
    eta: f64,
}

impl TryFrom<ApparatusNoiseRaw> for ApparatusNoise {
    type Error = ChannelError;
    fn try_from(raw: ApparatusNoiseRaw) -> Result<Self, ChannelError> {
        Self::new(raw.p1, raw.p2, raw.eta)
    }
}

impl From<ApparatusNoise> for ApparatusNoiseRaw {
    fn from(n: ApparatusNoise) -> Self {
        ApparatusNoiseRaw {
            p1: n.p1,
            p2: n.p2,
            eta: n.eta,
        }
    }
}

impl ApparatusNoise {
    pub fn new(p1: f64, p2: f64, eta: f64) -> Result<Self, ChannelError> {
        for &v in &[p1, p2] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ChannelError::ParameterRange {
                    value: v,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        // Below η = 1/2 relabeling the outcomes is equivalent; rejected for
        // clarity.
        if !(0.5..=1.0).contains(&eta) {
            return Err(ChannelError::ParameterRange {
                value: eta,
                lo: 0.5,
                hi: 1.0,
            });
        }
        Ok(Self { p1, p2, eta })
    }

    /// Perfect apparatus.
    pub fn noiseless() -> Self {
        Self {
            p1: 1.0,
            p2: 1.0,
            eta: 1.0,
        }
    }
}

/// Apply a unitary accompanied by a depolarizing channel on `subsystem`:
///
/// `ρ → p · UρU⁻¹ + ((1−p)/d) · 𝟙_A ⊗ tr_A ρ`, with `d = 2^|A|`.
///
/// `unitary = None` means the identity. The unitary must act within the
/// depolarized subsystem. One- and two-qubit subsystems behave differently
/// (a two-qubit depolarizing channel is not two one-qubit ones); both are
/// supported, as is any larger subsystem.
pub fn depolarize_after(
    rho: &DensityOperator,
    unitary: Option<&Gate>,
    p: f64,
    subsystem: &[usize],
) -> Result<DensityOperator, ChannelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::ParameterRange {
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mut subsystem = subsystem.to_vec();
    subsystem.sort_unstable();
    subsystem.dedup();
    if subsystem.is_empty() {
        return Err(QcoreError::EmptyKeepSet.into());
    }
    if let Some(u) = unitary {
        if !u.support().iter().all(|q| subsystem.contains(q)) {
            return Err(ChannelError::UnitaryOutsideSubsystem);
        }
    }
    let rotated = match unitary {
        Some(u) => rho.apply(u)?,
        None => rho.clone(),
    };
    if p == 1.0 {
        return Ok(rotated);
    }
    let complement: Vec<usize> = (0..rho.n_qubits())
        .filter(|q| !subsystem.contains(q))
        .collect();

    let mixed_part = if complement.is_empty() {
        DensityOperator::maximally_mixed(rho.n_qubits())?
    } else {
        // 𝟙_A/d ⊗ tr_A ρ, re-embedded at A's qubit positions.
        let reduced = rotated.partial_trace(&complement)?;
        let mixed = DensityOperator::maximally_mixed(subsystem.len())?;
        // kron puts `mixed` on leading qubits; permute into place.
        let combined = mixed.kron(&reduced)?;
        let mut order: Vec<usize> = subsystem.clone();
        order.extend(&complement);
        permute_qubits(&combined, &order)?
    };

    let mut out = rotated;
    out.scale(p);
    out.add_scaled(&mixed_part, 1.0 - p);
    Ok(out)
}

/// Reorder qubits: `placement[k]` is the position (in the output register)
/// of the input's qubit `k`.
fn permute_qubits(
    rho: &DensityOperator,
    placement: &[usize],
) -> Result<DensityOperator, ChannelError> {
    let n = rho.n_qubits();
    assert_eq!(placement.len(), n);
    let dim = 1 << n;
    let map_index = |i: usize| -> usize {
        let mut out = 0usize;
        for (k, &pos) in placement.iter().enumerate() {
            if i & (1 << (n - 1 - k)) != 0 {
                out |= 1 << (n - 1 - pos);
            }
        }
        out
    };
    let mut m = nalgebra::DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for r in 0..dim {
        for c in 0..dim {
            m[(map_index(r), map_index(c))] = rho.matrix()[(r, c)];
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(n, m)?)
}

/// Unreliable σ_z measurement via the POVM
/// `M_0 = η|0⟩⟨0| + (1−η)|1⟩⟨1|`, `M_1` symmetric: the detector collapses
/// the state projectively but reports the wrong bit with probability `1−η`.
///
/// Returns the reported bit and the (true-outcome) post-measurement state.
pub fn povm_measure<R: Rng + ?Sized>(
    rho: &DensityOperator,
    qubit: usize,
    eta: f64,
    rng: &mut R,
) -> Result<(u8, DensityOperator), ChannelError> {
    if !(0.5..=1.0).contains(&eta) {
        return Err(ChannelError::ParameterRange {
            value: eta,
            lo: 0.5,
            hi: 1.0,
        });
    }
    let (actual, post) = rho.measure_z(qubit, rng)?;
    let truthful = rng.random::<f64>() < eta;
    let reported = if truthful { actual } else { 1 - actual };
    Ok((reported, post))
}

/// The correlated two-qubit Pauli channel of the noise model:
/// `ρ → Σ_{µν} f_{µν} σ_µ^{(a1)} σ_ν^{(a2)} ρ σ_µ^{(a1)} σ_ν^{(a2)}`.
pub fn correlated_pauli(
    rho: &DensityOperator,
    spec: &PauliNoiseSpec,
    qubits: (usize, usize),
) -> Result<DensityOperator, ChannelError> {
    let (a1, a2) = qubits;
    if a1 == a2 {
        return Err(ChannelError::RepeatedQubit);
    }
    let mut out = rho.clone();
    out.scale(0.0);
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            let w = spec.prob(mu, nu);
            if w == 0.0 {
                continue;
            }
            let p = PauliString::new(vec![(a1, mu), (a2, nu)], crate::qcore::Phase::PlusOne)
                .expect("distinct indices");
            let term = rho.apply(&Gate::Pauli(p))?;
            out.add_scaled(&term, w);
        }
    }
    Ok(out)
}

/// Apply the binary (identity / spin-flip) channel to a density operator.
pub fn binary_channel(
    rho: &DensityOperator,
    spec: &BinaryNoiseSpec,
    qubits: (usize, usize),
) -> Result<DensityOperator, ChannelError> {
    correlated_pauli(rho, &spec.to_pauli_spec(), qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bell_decompose, bell_state, BellIndex, StateVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn depolarize_p1_is_pure_unitary() {
        let rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        let gate = Gate::rx_quarter(0, true);
        let out = depolarize_after(&rho, Some(&gate), 1.0, &[0]).unwrap();
        let direct = rho.apply(&gate).unwrap();
        assert!((out.matrix() - direct.matrix()).norm() < 1e-14);
    }

    #[test]
    fn depolarize_p0_fully_mixes_the_subsystem() {
        let rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        let out = depolarize_after(&rho, None, 0.0, &[0]).unwrap();
        let expect = DensityOperator::maximally_mixed(2).unwrap();
        assert!((out.matrix() - expect.matrix()).norm() < 1e-14);
    }

    #[test]
    fn depolarize_moderate_gives_expected_fidelity() {
        // p = 0.9 on one half of Φ⁺ → A = 0.9 + 0.1/4 = 0.925.
        let rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        let out = depolarize_after(&rho, None, 0.9, &[0]).unwrap();
        let dec = bell_decompose(&out).unwrap();
        assert!((dec.a - 0.925).abs() < 1e-12);
        assert!(dec.offdiag_norm < 1e-12);
    }

    #[test]
    fn depolarize_rejects_invalid_p() {
        let rho = DensityOperator::maximally_mixed(1).unwrap();
        assert!(depolarize_after(&rho, None, 1.5, &[0]).is_err());
    }

    #[test]
    fn depolarize_subsystem_embedding_acts_on_the_right_qubit() {
        // Depolarize qubit 1 of |00⟩: qubit 0 must stay pure.
        let s = StateVector::zero(2).unwrap();
        let rho = DensityOperator::from_state(&s);
        let out = depolarize_after(&rho, None, 0.0, &[1]).unwrap();
        let r0 = out.partial_trace(&[0]).unwrap();
        let r1 = out.partial_trace(&[1]).unwrap();
        assert!((r0.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((r1.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn povm_reports_correctly_with_eta() {
        let rho = DensityOperator::from_state(&StateVector::basis(1, 0).unwrap());
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let n = 200_000;
        let zeros = (0..n)
            .filter(|_| povm_measure(&rho, 0, 0.95, &mut rng).unwrap().0 == 0)
            .count();
        let sigma = (n as f64 * 0.95 * 0.05).sqrt();
        assert!((zeros as f64 - 0.95 * n as f64).abs() < 4.0 * sigma);
    }

    #[test]
    fn povm_eta_one_is_projective() {
        let rho = DensityOperator::from_state(&StateVector::basis(1, 1).unwrap());
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..64 {
            let (bit, _) = povm_measure(&rho, 0, 1.0, &mut rng).unwrap();
            assert_eq!(bit, 1);
        }
    }

    #[test]
    fn povm_on_mixed_state_is_unbiased() {
        let rho = DensityOperator::maximally_mixed(1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let n = 100_000;
        let zeros = (0..n)
            .filter(|_| povm_measure(&rho, 0, 0.7, &mut rng).unwrap().0 == 0)
            .count();
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((zeros as f64 - 0.5 * n as f64).abs() < 4.0 * sigma);
    }

    #[test]
    fn identity_pauli_channel_is_identity() {
        let rho = DensityOperator::from_state(&bell_state(BellIndex::PSI_PLUS));
        let out = correlated_pauli(&rho, &PauliNoiseSpec::identity(), (0, 1)).unwrap();
        assert!((out.matrix() - rho.matrix()).norm() < 1e-14);
    }

    #[test]
    fn correlated_pauli_rejects_equal_qubits() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let err = correlated_pauli(&rho, &PauliNoiseSpec::identity(), (1, 1));
        assert!(matches!(err, Err(ChannelError::RepeatedQubit)));
    }

    #[test]
    fn factorized_channel_equals_sequential_single_qubit_channels() {
        let g = [0.85, 0.05, 0.04, 0.06];
        let spec = PauliNoiseSpec::factorized(g).unwrap();
        let rho = DensityOperator::from_state(
            &bell_state(BellIndex::PHI_PLUS)
                .kron(&bell_state(BellIndex::PSI_MINUS))
                .unwrap(),
        );
        let joint = correlated_pauli(&rho, &spec, (0, 2)).unwrap();

        // Sequential: single-qubit Pauli channel on 0, then on 2.
        let single = |rho: &DensityOperator, q: usize| {
            let mut out = rho.clone();
            out.scale(0.0);
            for (mu, &w) in g.iter().enumerate() {
                let term = rho
                    .apply(&Gate::Pauli(PauliString::single(q, mu as u8)))
                    .unwrap();
                out.add_scaled(&term, w);
            }
            out
        };
        let sequential = single(&single(&rho, 0), 2);
        assert!((joint.matrix() - sequential.matrix()).norm() < 1e-12);
    }

    #[test]
    fn uniform_pauli_channel_depolarizes_both_pairs() {
        let spec = PauliNoiseSpec::new([[1.0 / 16.0; 4]; 4]).unwrap();
        let rho = DensityOperator::from_state(
            &bell_state(BellIndex::PHI_PLUS)
                .kron(&bell_state(BellIndex::PHI_PLUS))
                .unwrap(),
        );
        // Alice's halves are qubits 0 and 2.
        let out = correlated_pauli(&rho, &spec, (0, 2)).unwrap();
        for pair in [[0usize, 1], [2, 3]] {
            let dec = bell_decompose(&out.partial_trace(&pair).unwrap()).unwrap();
            for x in [dec.a, dec.b, dec.c, dec.d] {
                assert!((x - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_matches_distribution() {
        let spec = PauliNoiseSpec::factorized([0.7, 0.1, 0.12, 0.08]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let n = 1_000_000usize;
        let mut counts = [[0u64; 4]; 4];
        for _ in 0..n {
            let (mu, nu) = spec.sample_pair(&mut rng);
            counts[mu as usize][nu as usize] += 1;
        }
        for mu in 0..4 {
            for nu in 0..4 {
                let p = spec.prob(mu as u8, nu as u8);
                let sigma = (n as f64 * p * (1.0 - p)).sqrt().max(1.0);
                assert!(
                    (counts[mu][nu] as f64 - n as f64 * p).abs() < 4.0 * sigma,
                    "cell ({mu},{nu})"
                );
            }
        }
    }

    #[test]
    fn degenerate_distribution_always_samples_identity() {
        let spec = PauliNoiseSpec::identity();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(spec.sample_pair(&mut rng), (0, 0));
        }
    }

    #[test]
    fn fixed_seed_reproduces_sample_sequence() {
        let spec = BinaryNoiseSpec::factorized(0.8).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..64).map(|_| spec.sample_pair(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(123), draw(123));
        assert_ne!(draw(123), draw(124));
    }

    #[test]
    fn binary_spec_json_roundtrip_and_f0_form() {
        let from_f0: BinaryNoiseSpec = serde_json::from_str(r#"{"f0": 0.9}"#).unwrap();
        assert_eq!(from_f0, BinaryNoiseSpec::factorized(0.9).unwrap());
        let from_table: BinaryNoiseSpec =
            serde_json::from_str(r#"{"f": [[0.8575, 0.0475], [0.0475, 0.0475]]}"#).unwrap();
        assert!((from_table.f_s() - 0.095).abs() < 1e-15);
        assert!(from_table.factorized_f0().is_none());
        assert!((from_f0.factorized_f0().unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn apparatus_noise_rejects_low_eta() {
        assert!(ApparatusNoise::new(1.0, 1.0, 0.4).is_err());
        let from_json: Result<ApparatusNoise, _> =
            serde_json::from_str(r#"{"p1": 1.0, "p2": 0.97, "eta": 0.99}"#);
        assert!(from_json.is_ok());
    }
}
