use num_complex::Complex64;

use crate::pauli::{PauliOp, PauliString};

/// Dense `2^N` state, basis index bit `q - 1` holding qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<Complex64>,
}

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        assert!(
            qubits <= MAX_QUBITS,
            "{qubits} qubits is too many for a dense state"
        );
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Statevector {
        assert_eq!(
            p.len(),
            self.qubits,
            "string length must match the register"
        );
        let mut flip = 0usize;
        for (q, op) in p.ops().enumerate() {
            if op.flips() {
                flip |= 1 << q;
            }
        }
        let ops: Vec<PauliOp> = p.ops().collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (x, &a) in self.amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut phase = Complex64::new(1.0, 0.0);
            for (q, op) in ops.iter().enumerate() {
                let one = (x >> q) & 1 == 1;
                phase *= match (op, one) {
                    (PauliOp::I | PauliOp::X, _) => Complex64::new(1.0, 0.0),
                    (PauliOp::Y, false) => Complex64::new(0.0, 1.0),
                    (PauliOp::Y, true) => Complex64::new(0.0, -1.0),
                    (PauliOp::Z, false) => Complex64::new(1.0, 0.0),
                    (PauliOp::Z, true) => Complex64::new(-1.0, 0.0),
                };
            }
            out[x ^ flip] += phase * a;
        }
        Statevector {
            qubits: self.qubits,
            amps: out,
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: Complex64, other: &Statevector) -> Statevector {
        Statevector {
            qubits: self.qubits,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Statevector {
        Statevector {
            qubits: self.qubits,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `(P_even + i·P_odd)/2 |0…0⟩`, i.e. the mapped annihilation operator on
/// the all-zero state.
pub fn annihilator_on_zero(even: &PauliString, odd: &PauliString) -> Statevector {
    let zero = Statevector::zero(even.len());
    zero.apply_pauli(even)
        .add_scaled(Complex64::new(0.0, 1.0), &zero.apply_pauli(odd))
        .scale(Complex64::new(0.5, 0.0))
}
