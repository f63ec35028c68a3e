use nalgebra::DMatrix;
use rand::Rng;

use super::gates::{apply_gate_to_slice, qubit_mask};
use super::{C64, Gate, QcoreError, StateVector, MAX_QUBITS, NORM_TOL};

/// A mixed state of `n_qubits` qubits as a dense `2^n × 2^n` matrix:
/// Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    mat: DMatrix<C64>,
}

impl DensityOperator {
    /// Build from a raw matrix, validating hermiticity, trace and positivity.
    pub fn new(n_qubits: usize, mat: DMatrix<C64>) -> Result<Self, QcoreError> {
        let op = Self::from_matrix_unchecked(n_qubits, mat)?;
        op.validate()?;
        Ok(op)
    }

    /// Build from a raw matrix checking only the dimension. Used internally
    /// where positivity holds by construction.
    pub(crate) fn from_matrix_unchecked(
        n_qubits: usize,
        mat: DMatrix<C64>,
    ) -> Result<Self, QcoreError> {
        if n_qubits > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits });
        }
        let dim = 1 << n_qubits;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(QcoreError::DimensionMismatch {
                dim: mat.nrows(),
                n_qubits,
            });
        }
        Ok(Self { n_qubits, mat })
    }

    /// `|ψ⟩⟨ψ|` of a pure state.
    pub fn from_state(state: &StateVector) -> Self {
        let dim = state.dim();
        let amps = state.amplitudes();
        let mat = DMatrix::from_fn(dim, dim, |r, c| amps[r] * amps[c].conj());
        Self {
            n_qubits: state.n_qubits(),
            mat,
        }
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self, QcoreError> {
        if n_qubits > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits });
        }
        let dim = 1 << n_qubits;
        let mat = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
        Ok(Self { n_qubits, mat })
    }

    /// Check the density-operator invariants: Hermitian and unit trace within
    /// 1e-12, eigenvalues ≥ −1e-10.
    pub fn validate(&self) -> Result<(), QcoreError> {
        let herm_dev = (&self.mat - self.mat.adjoint()).norm();
        if herm_dev > NORM_TOL * self.dim() as f64 {
            return Err(QcoreError::InvalidDensity {
                reason: format!("not Hermitian (deviation {herm_dev:.3e})"),
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(QcoreError::InvalidDensity {
                reason: format!("trace {tr} is not 1"),
            });
        }
        let min_eig = self
            .mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(QcoreError::InvalidDensity {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    /// `tr(ρ²)` — 1 for pure states.
    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                s += (self.mat[(r, c)] * self.mat[(c, r)]).re;
            }
        }
        s
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator, QcoreError> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(QcoreError::TooManyQubits { n_qubits: n });
        }
        Ok(DensityOperator {
            n_qubits: n,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    /// Apply a named gate: `ρ → U ρ U†`. Trace and hermiticity are preserved
    /// by construction.
    pub fn apply(&self, gate: &Gate) -> Result<DensityOperator, QcoreError> {
        gate.validate(self.n_qubits)?;
        // U ρ: apply the gate to every column; then U ρ U† = (U (U ρ)†)†.
        let mut m = self.mat.clone();
        for mut col in m.column_iter_mut() {
            apply_gate_to_slice(col.as_mut_slice(), self.n_qubits, gate);
        }
        let mut m = m.adjoint();
        for mut col in m.column_iter_mut() {
            apply_gate_to_slice(col.as_mut_slice(), self.n_qubits, gate);
        }
        Ok(DensityOperator {
            n_qubits: self.n_qubits,
            mat: m.adjoint(),
        })
    }

    pub fn apply_all(&self, gates: &[Gate]) -> Result<DensityOperator, QcoreError> {
        let mut out = self.clone();
        for g in gates {
            out = out.apply(g)?;
        }
        Ok(out)
    }

    /// Reduced density operator over the qubits in `keep` (ascending order;
    /// the output's qubit `k` is `keep[k]` of the input).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator, QcoreError> {
        if keep.is_empty() {
            return Err(QcoreError::EmptyKeepSet);
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &q in &keep {
            if q >= self.n_qubits {
                return Err(QcoreError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let traced: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let nk = keep.len();
        let kdim = 1 << nk;
        let tdim = 1 << traced.len();

        // Compose a full basis index from kept-part bits and traced-part bits.
        let build_index = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                if kept_bits & (1 << (nk - 1 - pos)) != 0 {
                    idx |= qubit_mask(self.n_qubits, q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if traced_bits & (1 << (traced.len() - 1 - pos)) != 0 {
                    idx |= qubit_mask(self.n_qubits, q);
                }
            }
            idx
        };

        let mut out = DMatrix::from_element(kdim, kdim, C64::new(0.0, 0.0));
        for r in 0..kdim {
            for c in 0..kdim {
                let mut s = C64::new(0.0, 0.0);
                for t in 0..tdim {
                    s += self.mat[(build_index(r, t), build_index(c, t))];
                }
                out[(r, c)] = s;
            }
        }
        Ok(DensityOperator {
            n_qubits: nk,
            mat: out,
        })
    }

    /// Probability that σ_z on `qubit` yields 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64, QcoreError> {
        if qubit >= self.n_qubits {
            return Err(QcoreError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = qubit_mask(self.n_qubits, qubit);
        let mut p = 0.0;
        for i in 0..self.dim() {
            if i & mask != 0 {
                p += self.mat[(i, i)].re;
            }
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Unnormalized projection `P ρ P` onto the σ_z outcome of `qubit`,
    /// together with its weight. The caller decides whether to renormalize.
    pub fn project_z_unnormalized(
        &self,
        qubit: usize,
        outcome: u8,
    ) -> Result<(f64, DensityOperator), QcoreError> {
        if qubit >= self.n_qubits {
            return Err(QcoreError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = qubit_mask(self.n_qubits, qubit);
        let keep = |i: usize| (i & mask != 0) == (outcome == 1);
        let mut m = self.mat.clone();
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if !(keep(r) && keep(c)) {
                    m[(r, c)] = C64::new(0.0, 0.0);
                }
            }
        }
        let weight: f64 = (0..self.dim())
            .filter(|&i| keep(i))
            .map(|i| self.mat[(i, i)].re)
            .sum();
        Ok((
            weight,
            DensityOperator {
                n_qubits: self.n_qubits,
                mat: m,
            },
        ))
    }

    /// Projective σ_z measurement and renormalized collapse.
    pub fn project_z(&self, qubit: usize, outcome: u8) -> Result<(f64, DensityOperator), QcoreError> {
        let (p, mut proj) = self.project_z_unnormalized(qubit, outcome)?;
        if p <= f64::EPSILON {
            return Err(QcoreError::ZeroProbabilityBranch);
        }
        proj.mat /= C64::new(p, 0.0);
        Ok((p, proj))
    }

    /// Born-rule σ_z measurement of `qubit`.
    pub fn measure_z<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        rng: &mut R,
    ) -> Result<(u8, DensityOperator), QcoreError> {
        let p1 = self.prob_one(qubit)?;
        let outcome = u8::from(rng.random::<f64>() < p1);
        let (_, post) = self.project_z(qubit, outcome)?;
        Ok((outcome, post))
    }

    /// Convex mixture `self + w · other` (unnormalized accumulate helper).
    pub(crate) fn add_scaled(&mut self, other: &DensityOperator, w: f64) {
        self.mat += &other.mat * C64::new(w, 0.0);
    }

    pub(crate) fn scale(&mut self, w: f64) {
        self.mat *= C64::new(w, 0.0);
    }
}

/// Overlap `⟨target|ρ|target⟩` of a mixed state with a pure target state.
pub fn fidelity(rho: &DensityOperator, target: &StateVector) -> Result<f64, QcoreError> {
    if rho.n_qubits() != target.n_qubits() {
        return Err(QcoreError::DimensionMismatch {
            dim: target.dim(),
            n_qubits: rho.n_qubits(),
        });
    }
    let amps = target.amplitudes();
    let mut s = C64::new(0.0, 0.0);
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            s += amps[r].conj() * rho.matrix()[(r, c)] * amps[c];
        }
    }
    Ok(s.re)
}
