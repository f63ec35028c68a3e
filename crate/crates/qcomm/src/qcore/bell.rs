use super::{C64, DensityOperator, QcoreError, StateVector};

/// Index of a two-qubit Bell state as two bits `(phase, amplitude)`:
///
/// | value | state |
/// |-------|-------|
/// | `00`  | Φ⁺    |
/// | `01`  | Ψ⁺    |
/// | `10`  | Φ⁻    |
/// | `11`  | Ψ⁻    |
///
/// Equivalently `B_ij ∝ (σ_z^i σ_x^j ⊗ I)|Φ⁺⟩`: the high bit flips the
/// relative phase, the low bit flips the amplitude pattern (|00⟩/|11⟩ vs
/// |01⟩/|10⟩). An Alice-side Pauli therefore acts on the index by XOR with
/// the operator's (z, x) label, see [`BellIndex::apply_alice_pauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const PHI_PLUS: BellIndex = BellIndex(0b00);
    pub const PSI_PLUS: BellIndex = BellIndex(0b01);
    pub const PHI_MINUS: BellIndex = BellIndex(0b10);
    pub const PSI_MINUS: BellIndex = BellIndex(0b11);

    /// All four indices in numeric order Φ⁺, Ψ⁺, Φ⁻, Ψ⁻.
    pub const ALL: [BellIndex; 4] = [
        Self::PHI_PLUS,
        Self::PSI_PLUS,
        Self::PHI_MINUS,
        Self::PSI_MINUS,
    ];

    pub fn new(value: u8) -> Result<Self, QcoreError> {
        if value > 3 {
            return Err(QcoreError::InvalidDensity {
                reason: format!("bell index {value} out of range"),
            });
        }
        Ok(BellIndex(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Phase bit (1 for Φ⁻, Ψ⁻).
    pub fn phase_bit(self) -> u8 {
        self.0 >> 1
    }

    /// Amplitude bit (1 for Ψ±).
    pub fn amp_bit(self) -> u8 {
        self.0 & 1
    }

    /// The `(z, x)` label of a Pauli `σ_mu` (`mu ∈ {0..3}` = I, x, y, z)
    /// packed into Bell-index bit order `(phase ≡ z) << 1 | (amp ≡ x)`.
    pub fn pauli_label(mu: u8) -> u8 {
        match mu {
            0 => 0b00,
            1 => 0b01, // σ_x flips the amplitude bit
            2 => 0b11, // σ_y flips both
            3 => 0b10, // σ_z flips the phase bit
            _ => panic!("pauli index must be in 0..4"),
        }
    }

    /// New index after `σ_mu` acts on one side of the pair (a one-sided
    /// Pauli maps Bell states to Bell states up to a global phase).
    pub fn apply_alice_pauli(self, mu: u8) -> BellIndex {
        BellIndex(self.0 ^ Self::pauli_label(mu))
    }

    pub fn label(self) -> &'static str {
        match self.0 {
            0b00 => "Phi+",
            0b01 => "Psi+",
            0b10 => "Phi-",
            _ => "Psi-",
        }
    }
}

/// The Bell state `|B_index⟩` as a two-qubit state vector.
pub fn bell_state(index: BellIndex) -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let p = C64::new(r, 0.0);
    let m = C64::new(-r, 0.0);
    let amps = match index {
        BellIndex::PHI_PLUS => vec![p, z, z, p],
        BellIndex::PSI_PLUS => vec![z, p, p, z],
        BellIndex::PHI_MINUS => vec![p, z, z, m],
        _ => vec![z, p, m, z],
    };
    StateVector::new(2, amps).expect("bell states are normalized")
}

/// Bell-diagonal elements of a two-qubit density operator, ordered
/// `A ↔ Φ⁺, B ↔ Ψ⁻, C ↔ Ψ⁺, D ↔ Φ⁻`, together with the residual
/// off-diagonal weight in the Bell basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDecomposition {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `sqrt(Σ_{i<j} |ρ̃_ij|²)` over the strict upper triangle of ρ in the
    /// Bell basis (ρ is Hermitian, so each off-diagonal pair is counted once).
    pub offdiag_norm: f64,
}

impl BellDecomposition {
    /// Coefficients in Bell-index order Φ⁺, Ψ⁺, Φ⁻, Ψ⁻.
    pub fn by_index(&self) -> [f64; 4] {
        [self.a, self.c, self.d, self.b]
    }
}

/// Diagonal elements `⟨B_µ|ρ|B_µ⟩` of a two-qubit state in the Bell basis.
pub fn bell_decompose(rho: &DensityOperator) -> Result<BellDecomposition, QcoreError> {
    if rho.n_qubits() != 2 {
        return Err(QcoreError::DimensionMismatch {
            dim: rho.dim(),
            n_qubits: 2,
        });
    }
    // ρ̃ = V† ρ V with V's columns the Bell states in index order.
    let states: Vec<StateVector> = BellIndex::ALL.iter().map(|&b| bell_state(b)).collect();
    let mut tilde = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, sr) in states.iter().enumerate() {
        for (c, sc) in states.iter().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    s += sr.amplitudes()[i].conj() * rho.matrix()[(i, j)] * sc.amplitudes()[j];
                }
            }
            tilde[r][c] = s;
        }
    }
    let mut off = 0.0;
    for r in 0..4 {
        for c in (r + 1)..4 {
            off += tilde[r][c].norm_sqr();
        }
    }
    Ok(BellDecomposition {
        a: tilde[0][0].re,
        c: tilde[1][1].re,
        d: tilde[2][2].re,
        b: tilde[3][3].re,
        offdiag_norm: off.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::Gate;
    use super::super::PauliString;
    use super::*;

    #[test]
    fn bell_states_are_orthonormal() {
        for &i in &BellIndex::ALL {
            for &j in &BellIndex::ALL {
                let ip = bell_state(i).inner(&bell_state(j)).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn alice_pauli_maps_bell_index_by_xor() {
        // Verify the label algebra against the dense engine.
        for &b in &BellIndex::ALL {
            for mu in 0..4u8 {
                let dense = bell_state(b)
                    .apply(&Gate::Pauli(PauliString::single(0, mu)))
                    .unwrap();
                let predicted = bell_state(b.apply_alice_pauli(mu));
                assert!(
                    dense.fidelity_with(&predicted).unwrap() > 1.0 - 1e-12,
                    "bell {b:?} pauli {mu}"
                );
            }
        }
    }

    #[test]
    fn phi_plus_decomposes_to_pure_a() {
        let rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        let dec = bell_decompose(&rho).unwrap();
        assert!((dec.a - 1.0).abs() < 1e-14);
        assert!(dec.b.abs() < 1e-14 && dec.c.abs() < 1e-14 && dec.d.abs() < 1e-14);
        assert!(dec.offdiag_norm < 1e-14);
    }

    #[test]
    fn werner_state_decomposes_to_definition() {
        // A = F, B = C = D = (1−F)/3 at F = 0.7.
        let f = 0.7;
        let rest = (1.0 - f) / 3.0;
        let mut rho = DensityOperator::from_state(&bell_state(BellIndex::PHI_PLUS));
        rho.scale(f);
        for &b in &[BellIndex::PSI_MINUS, BellIndex::PSI_PLUS, BellIndex::PHI_MINUS] {
            rho.add_scaled(&DensityOperator::from_state(&bell_state(b)), rest);
        }
        let dec = bell_decompose(&rho).unwrap();
        assert!((dec.a - 0.7).abs() < 1e-14);
        assert!((dec.b - 0.1).abs() < 1e-14);
        assert!((dec.c - 0.1).abs() < 1e-14);
        assert!((dec.d - 0.1).abs() < 1e-14);
        assert!(dec.offdiag_norm < 1e-14);
    }

    #[test]
    fn product_zero_state_has_half_offdiag() {
        // |00⟩ = (Φ⁺ + Φ⁻)/√2 → diagonal (0.5, 0, 0, 0.5), off-diag 0.5.
        let rho = DensityOperator::from_state(&StateVector::basis(2, 0).unwrap());
        let dec = bell_decompose(&rho).unwrap();
        assert!((dec.a - 0.5).abs() < 1e-14);
        assert!((dec.d - 0.5).abs() < 1e-14);
        assert!(dec.b.abs() < 1e-14 && dec.c.abs() < 1e-14);
        assert!((dec.offdiag_norm - 0.5).abs() < 1e-14);
    }

    #[test]
    fn decompose_rejects_wrong_dimension() {
        let rho = DensityOperator::maximally_mixed(3).unwrap();
        assert!(bell_decompose(&rho).is_err());
    }

    #[test]
    fn bilateral_xx_fixes_phi_plus() {
        let p = PauliString::new(vec![(0, 1), (1, 1)], super::super::Phase::PlusOne).unwrap();
        let s = bell_state(BellIndex::PHI_PLUS);
        let out = s.apply(&Gate::Pauli(p)).unwrap();
        assert!(out.fidelity_with(&s).unwrap() > 1.0 - 1e-12);
    }
}
