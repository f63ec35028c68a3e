use std::f64::consts::FRAC_PI_4;

use super::{C64, QcoreError};

/// Phase prefactor of a Pauli string: one of {+1, +i, −1, −i}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Phase {
    #[default]
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn as_complex(self) -> C64 {
        match self {
            Phase::PlusOne => C64::new(1.0, 0.0),
            Phase::PlusI => C64::new(0.0, 1.0),
            Phase::MinusOne => C64::new(-1.0, 0.0),
            Phase::MinusI => C64::new(0.0, -1.0),
        }
    }
}

/// A tensor product of single-qubit Pauli operators with an overall phase.
///
/// Each term is `(qubit_index, mu)` with `mu ∈ {0,1,2,3}` meaning
/// `I, σ_x, σ_y, σ_z`. Qubit indices must be distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    terms: Vec<(usize, u8)>,
    phase: Phase,
}

impl PauliString {
    pub fn new(terms: Vec<(usize, u8)>, phase: Phase) -> Result<Self, QcoreError> {
        let mut seen = std::collections::HashSet::new();
        for &(q, mu) in &terms {
            assert!(mu < 4, "pauli index must be in 0..4");
            if !seen.insert(q) {
                return Err(QcoreError::DuplicatePauliIndex { qubit: q });
            }
        }
        Ok(Self { terms, phase })
    }

    /// A single Pauli `σ_mu` acting on one qubit.
    pub fn single(qubit: usize, mu: u8) -> Self {
        Self::new(vec![(qubit, mu)], Phase::PlusOne).expect("single index cannot repeat")
    }

    /// The identity string.
    pub fn identity() -> Self {
        Self {
            terms: Vec::new(),
            phase: Phase::PlusOne,
        }
    }

    pub fn terms(&self) -> &[(usize, u8)] {
        &self.terms
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.iter().map(|&(q, _)| q).max()
    }
}

/// Named gates understood by the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Controlled NOT with the given control and target qubits.
    Cnot { control: usize, target: usize },
    /// Hadamard on one qubit.
    H(usize),
    /// Rotation about the x-axis: `exp(−i·angle·σ_x)` on one qubit.
    ///
    /// The purification protocol's quarter rotations use `angle = ±π/4`
    /// (see [`Gate::rx_quarter`]).
    Rx { qubit: usize, angle: f64 },
    /// An arbitrary Pauli string.
    Pauli(PauliString),
}

impl Gate {
    /// The π/4 x-rotation `exp(∓i·π/4·σ_x)` used in the purification step;
    /// `positive = true` gives the `+π/4` angle (Alice's side by convention),
    /// `false` the opposite direction (Bob's side).
    pub fn rx_quarter(qubit: usize, positive: bool) -> Self {
        Gate::Rx {
            qubit,
            angle: if positive { FRAC_PI_4 } else { -FRAC_PI_4 },
        }
    }

    /// Largest qubit index touched by the gate, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        match self {
            Gate::Cnot { control, target } => Some((*control).max(*target)),
            Gate::H(q) => Some(*q),
            Gate::Rx { qubit, .. } => Some(*qubit),
            Gate::Pauli(p) => p.max_qubit(),
        }
    }

    /// Qubit indices the gate acts on (identity Pauli sites excluded).
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::H(q) => vec![*q],
            Gate::Rx { qubit, .. } => vec![*qubit],
            Gate::Pauli(p) => p
                .terms()
                .iter()
                .filter(|&&(_, mu)| mu != 0)
                .map(|&(q, _)| q)
                .collect(),
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<(), QcoreError> {
        if let Gate::Cnot { control, target } = self {
            if control == target {
                return Err(QcoreError::ControlEqualsTarget);
            }
        }
        if let Some(q) = self.max_qubit() {
            if q >= n_qubits {
                return Err(QcoreError::QubitOutOfRange {
                    qubit: q,
                    n_qubits,
                });
            }
        }
        Ok(())
    }
}

/// 2×2 matrix of a single-qubit gate, row-major.
pub(crate) fn single_qubit_matrix(gate: &Gate) -> Option<[[C64; 2]; 2]> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    match gate {
        Gate::H(_) => Some([
            [C64::new(inv_sqrt2, 0.0), C64::new(inv_sqrt2, 0.0)],
            [C64::new(inv_sqrt2, 0.0), C64::new(-inv_sqrt2, 0.0)],
        ]),
        Gate::Rx { angle, .. } => {
            let (s, c) = angle.sin_cos();
            Some([
                [C64::new(c, 0.0), C64::new(0.0, -s)],
                [C64::new(0.0, -s), C64::new(c, 0.0)],
            ])
        }
        _ => None,
    }
}

/// Bit mask selecting qubit `q` of an `n`-qubit basis index
/// (qubit 0 = most significant bit).
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Apply a 2×2 matrix to `qubit` of a dense amplitude slice of length 2^n.
pub(crate) fn apply_single_qubit(amps: &mut [C64], n_qubits: usize, qubit: usize, u: &[[C64; 2]; 2]) {
    let mask = qubit_mask(n_qubits, qubit);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let a0 = amps[i];
            let a1 = amps[j];
            amps[i] = u[0][0] * a0 + u[0][1] * a1;
            amps[j] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

pub(crate) fn apply_cnot(amps: &mut [C64], n_qubits: usize, control: usize, target: usize) {
    let cmask = qubit_mask(n_qubits, control);
    let tmask = qubit_mask(n_qubits, target);
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

pub(crate) fn apply_pauli_string(amps: &mut [C64], n_qubits: usize, p: &PauliString) {
    for &(q, mu) in p.terms() {
        let mask = qubit_mask(n_qubits, q);
        match mu {
            0 => {}
            // σ_x: swap the pair
            1 => {
                for i in 0..amps.len() {
                    if i & mask == 0 {
                        amps.swap(i, i | mask);
                    }
                }
            }
            // σ_y: |0⟩ → i|1⟩, |1⟩ → −i|0⟩
            2 => {
                let plus_i = C64::new(0.0, 1.0);
                let minus_i = C64::new(0.0, -1.0);
                for i in 0..amps.len() {
                    if i & mask == 0 {
                        let j = i | mask;
                        let a0 = amps[i];
                        let a1 = amps[j];
                        amps[i] = minus_i * a1;
                        amps[j] = plus_i * a0;
                    }
                }
            }
            // σ_z: negate the |1⟩ half
            3 => {
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
            _ => unreachable!("pauli index validated at construction"),
        }
    }
    let ph = p.phase().as_complex();
    if ph != C64::new(1.0, 0.0) {
        for a in amps.iter_mut() {
            *a *= ph;
        }
    }
}

/// Apply `gate` in place to a dense amplitude slice.
pub(crate) fn apply_gate_to_slice(amps: &mut [C64], n_qubits: usize, gate: &Gate) {
    match gate {
        Gate::Cnot { control, target } => apply_cnot(amps, n_qubits, *control, *target),
        Gate::Pauli(p) => apply_pauli_string(amps, n_qubits, p),
        g => {
            let u = single_qubit_matrix(g).expect("single-qubit gate");
            let q = match g {
                Gate::H(q) => *q,
                Gate::Rx { qubit, .. } => *qubit,
                _ => unreachable!(),
            };
            apply_single_qubit(amps, n_qubits, q, &u);
        }
    }
}
