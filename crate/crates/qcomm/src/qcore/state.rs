use rand::Rng;

use super::gates::{apply_gate_to_slice, apply_pauli_string, qubit_mask};
use super::{C64, Gate, PauliString, QcoreError, MAX_QUBITS, NORM_TOL};

/// A pure state of `n_qubits` qubits as a dense amplitude vector of length
/// `2^n_qubits`, normalized to unit L2 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Build a state from raw amplitudes, validating dimension and norm.
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self, QcoreError> {
        if n_qubits > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits });
        }
        if amps.len() != 1 << n_qubits {
            return Err(QcoreError::DimensionMismatch {
                dim: amps.len(),
                n_qubits,
            });
        }
        let state = Self { n_qubits, amps };
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > NORM_TOL {
            return Err(QcoreError::NotNormalized { deviation: dev });
        }
        Ok(state)
    }

    /// The computational-basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QcoreError> {
        if n_qubits > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits });
        }
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(QcoreError::DimensionMismatch { dim: index, n_qubits });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// `|0...0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self, QcoreError> {
        Self::basis(n_qubits, 0)
    }

    /// Single-qubit state `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self, QcoreError> {
        Self::new(1, vec![alpha, beta])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product `self ⊗ other` (self occupies the leading qubits).
    pub fn kron(&self, other: &StateVector) -> Result<StateVector, QcoreError> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits: n });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64, QcoreError> {
        if self.n_qubits != other.n_qubits {
            return Err(QcoreError::DimensionMismatch {
                dim: other.dim(),
                n_qubits: self.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²` — the pure-state fidelity (global phase irrelevant).
    pub fn fidelity_with(&self, other: &StateVector) -> Result<f64, QcoreError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Apply a named gate, returning the transformed state.
    pub fn apply(&self, gate: &Gate) -> Result<StateVector, QcoreError> {
        gate.validate(self.n_qubits)?;
        let mut out = self.clone();
        apply_gate_to_slice(&mut out.amps, self.n_qubits, gate);
        Ok(out)
    }

    /// Apply a sequence of gates in order.
    pub fn apply_all(&self, gates: &[Gate]) -> Result<StateVector, QcoreError> {
        let mut out = self.clone();
        for g in gates {
            g.validate(self.n_qubits)?;
            apply_gate_to_slice(&mut out.amps, self.n_qubits, g);
        }
        Ok(out)
    }

    /// Expectation value `⟨ψ|P|ψ⟩` of a Pauli string.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<C64, QcoreError> {
        if let Some(q) = p.max_qubit() {
            if q >= self.n_qubits {
                return Err(QcoreError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let mut scratch = self.amps.clone();
        apply_pauli_string(&mut scratch, self.n_qubits, p);
        Ok(self
            .amps
            .iter()
            .zip(&scratch)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability that a σ_z measurement of `qubit` yields 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64, QcoreError> {
        if qubit >= self.n_qubits {
            return Err(QcoreError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = qubit_mask(self.n_qubits, qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Project onto the given σ_z outcome of `qubit` and renormalize.
    ///
    /// Errors with [`QcoreError::ZeroProbabilityBranch`] if the branch has
    /// (numerically) zero weight.
    pub fn project_z(&self, qubit: usize, outcome: u8) -> Result<(f64, StateVector), QcoreError> {
        let p1 = self.prob_one(qubit)?;
        let p = if outcome == 0 { 1.0 - p1 } else { p1 };
        if p <= f64::EPSILON {
            return Err(QcoreError::ZeroProbabilityBranch);
        }
        let mask = qubit_mask(self.n_qubits, qubit);
        let scale = C64::new(1.0 / p.sqrt(), 0.0);
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let in_branch = (i & mask != 0) == (outcome == 1);
                if in_branch { a * scale } else { C64::new(0.0, 0.0) }
            })
            .collect();
        Ok((p, StateVector { n_qubits: self.n_qubits, amps }))
    }

    /// Born-rule σ_z measurement of `qubit`: samples the outcome and returns
    /// it together with the projected, renormalized post-measurement state.
    pub fn measure_z<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        rng: &mut R,
    ) -> Result<(u8, StateVector), QcoreError> {
        let p1 = self.prob_one(qubit)?;
        let outcome = u8::from(rng.random::<f64>() < p1);
        let (_, post) = self.project_z(qubit, outcome)?;
        Ok((outcome, post))
    }

    /// Measure a ±1 Pauli observable: samples the eigenvalue by the Born rule
    /// and projects onto the corresponding eigenspace via `(I ± P)/2`.
    ///
    /// Returns `(eigenvalue_bit, post_state)` with bit 0 ↔ eigenvalue +1.
    pub fn measure_pauli_observable<R: Rng + ?Sized>(
        &self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<(u8, StateVector), QcoreError> {
        let expectation = self.pauli_expectation(p)?.re;
        let p_plus = (0.5 * (1.0 + expectation)).clamp(0.0, 1.0);
        let plus_branch = rng.random::<f64>() < p_plus;
        let (bit, weight) = if plus_branch { (0u8, p_plus) } else { (1u8, 1.0 - p_plus) };
        if weight <= f64::EPSILON {
            return Err(QcoreError::ZeroProbabilityBranch);
        }
        let mut scratch = self.amps.clone();
        apply_pauli_string(&mut scratch, self.n_qubits, p);
        let sign = if plus_branch { 1.0 } else { -1.0 };
        let scale = C64::new(0.5 / weight.sqrt(), 0.0);
        let amps: Vec<C64> = self
            .amps
            .iter()
            .zip(&scratch)
            .map(|(a, pa)| (a + sign * pa) * scale)
            .collect();
        Ok((bit, StateVector { n_qubits: self.n_qubits, amps }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn cnot_truth_table_on_basis_states() {
        // CNOT on |10⟩ → |11⟩
        let s = StateVector::basis(2, 0b10).unwrap();
        let out = s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!((out.amplitudes()[0b11] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_makes_plus_state() {
        let s = StateVector::basis(1, 0).unwrap();
        let out = s.apply(&Gate::H(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - c(r)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(r)).norm() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let err = StateVector::new(1, vec![c(1.0), c(1.0)]);
        assert!(matches!(err, Err(QcoreError::NotNormalized { .. })));
    }

    #[test]
    fn out_of_range_qubit_is_an_error() {
        let s = StateVector::zero(2).unwrap();
        assert!(s.apply(&Gate::H(2)).is_err());
    }

    #[test]
    fn measure_z_on_basis_state_is_deterministic() {
        let s = StateVector::basis(1, 0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..32 {
            let (bit, post) = s.measure_z(0, &mut rng).unwrap();
            assert_eq!(bit, 0);
            assert!(post.fidelity_with(&s).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn measure_z_on_plus_state_is_unbiased() {
        let s = StateVector::zero(1).unwrap().apply(&Gate::H(0)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 100_000;
        let ones: u64 = (0..n)
            .map(|_| u64::from(s.measure_z(0, &mut rng).unwrap().0))
            .sum();
        // 4σ binomial window around n/2
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((ones as f64 - n as f64 / 2.0).abs() < 4.0 * sigma);
    }

    #[test]
    fn project_z_zero_probability_branch_errors() {
        let s = StateVector::basis(1, 0).unwrap();
        assert!(matches!(
            s.project_z(0, 1),
            Err(QcoreError::ZeroProbabilityBranch)
        ));
    }

    #[test]
    fn pauli_y_acts_correctly() {
        let s = StateVector::basis(1, 0).unwrap();
        let out = s
            .apply(&Gate::Pauli(PauliString::single(0, 2)))
            .unwrap();
        // σ_y|0⟩ = i|1⟩
        assert!((out.amplitudes()[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
