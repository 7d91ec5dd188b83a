//! Gate-level cost model for Pauli-string evolutions.
//!
//! `exp(-iλP)` is realized by a basis change to Z on every non-identity
//! qubit, a CNOT ladder onto the lowest such qubit, `RZ(2λ)` there, and the
//! mirror image of the first half.

use std::fmt;

use crate::error::{Error, Result};
use crate::fermion::{HamiltonianModel, MajoranaSet};
use crate::pauli::{PauliOp, PauliString};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    /// Maps the Y eigenbasis to the Z eigenbasis.
    YBasis(usize),
    YBasisDag(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Rz {
        angle: f64,
        qubit: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::YBasis(q) | Gate::YBasisDag(q) | Gate::Rz { qubit: q, .. } => {
                vec![q]
            }
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::YBasis(q) => Gate::YBasisDag(q),
            Gate::YBasisDag(q) => Gate::YBasis(q),
            Gate::Rz { angle, qubit } => Gate::Rz {
                angle: -angle,
                qubit,
            },
            g => g,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H q{q}"),
            Gate::YBasis(q) => write!(f, "YBASIS q{q}"),
            Gate::YBasisDag(q) => write!(f, "YBASIS_DAG q{q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control} q{target}"),
            Gate::Rz { angle, qubit } => write!(f, "RZ {angle:?} q{qubit}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

/// Gate totals in the usual single / CNOT / total / depth breakdown.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateStats {
    /// Basis changes plus rotations.
    pub single: usize,
    pub basis: usize,
    pub rz: usize,
    pub cnot: usize,
    pub total: usize,
    pub depth: usize,
}

impl fmt::Display for GateStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Single: {}", self.single)?;
        writeln!(f, "CNOT: {}", self.cnot)?;
        writeln!(f, "Total: {}", self.total)?;
        writeln!(f, "Depth: {}", self.depth)
    }
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.qubits().iter().all(|&q| (1..=self.qubits).contains(&q)));
        if let Gate::Cnot { control, target } = g {
            assert_ne!(control, target, "CNOT needs distinct qubits");
        }
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.qubits, other.qubits, "qubit counts differ");
        self.gates.extend_from_slice(&other.gates);
    }

    /// As-soon-as-possible layering, no reordering.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.qubits + 1];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn stats(&self) -> GateStats {
        let mut s = GateStats::default();
        for g in &self.gates {
            match g {
                Gate::H(_) | Gate::YBasis(_) | Gate::YBasisDag(_) => s.basis += 1,
                Gate::Rz { .. } => s.rz += 1,
                Gate::Cnot { .. } => s.cnot += 1,
            }
        }
        s.single = s.basis + s.rz;
        s.total = s.single + s.cnot;
        s.depth = self.depth();
        s
    }

    /// True if the gate list without its rotations reads the same backwards
    /// up to inversion of each gate.
    pub fn is_palindrome_without_rz(&self) -> bool {
        let rest: Vec<&Gate> = self
            .gates
            .iter()
            .filter(|g| !matches!(g, Gate::Rz { .. }))
            .collect();
        let n = rest.len();
        (0..n).all(|i| *rest[i] == rest[n - 1 - i].inverse())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Circuit for `exp(-iλP)`.
pub fn pauli_evolution(p: &PauliString, lambda: f64) -> Result<Circuit> {
    let support: Vec<(usize, PauliOp)> = p
        .ops()
        .enumerate()
        .filter(|(_, op)| !op.is_identity())
        .map(|(i, op)| (i + 1, op))
        .collect();
    let Some(&(target, _)) = support.first() else {
        return Err(Error::InvalidArgument(
            "the identity string has no evolution circuit".into(),
        ));
    };
    let mut c = Circuit::new(p.len());
    for &(q, op) in &support {
        match op {
            PauliOp::X => c.push(Gate::H(q)),
            PauliOp::Y => c.push(Gate::YBasis(q)),
            _ => {}
        }
    }
    let ladder: Vec<Gate> = support[1..]
        .iter()
        .map(|&(q, _)| Gate::Cnot { control: q, target })
        .collect();
    for &g in &ladder {
        c.push(g);
    }
    c.push(Gate::Rz {
        angle: 2.0 * lambda,
        qubit: target,
    });
    for &g in ladder.iter().rev() {
        c.push(g);
    }
    for &(q, op) in support.iter().rev() {
        match op {
            PauliOp::X => c.push(Gate::H(q)),
            PauliOp::Y => c.push(Gate::YBasisDag(q)),
            _ => {}
        }
    }
    Ok(c)
}

/// One Trotter step over every expanded product of `model`, in model order,
/// repeated products included and identity products skipped.
pub fn hamiltonian_circuit(
    enc: &MajoranaSet,
    model: &HamiltonianModel,
    lambda: f64,
) -> Result<(Circuit, GateStats)> {
    if enc.modes() != model.modes {
        return Err(Error::ModeMismatch {
            encoding: enc.modes(),
            model: model.modes,
        });
    }
    let mut c = Circuit::new(enc.modes());
    for product in model.expanded_products() {
        let p = enc.product(product.indices());
        if p.is_identity() {
            continue;
        }
        c.extend(&pauli_evolution(&p, lambda)?);
    }
    let stats = c.stats();
    Ok((c, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::jordan_wigner;
    use crate::fermion::parse_model;
    use proptest::prelude::*;

    fn stats_of(s: &str) -> GateStats {
        pauli_evolution(&s.parse().unwrap(), 1.0).unwrap().stats()
    }

    #[test]
    fn count_examples() {
        let s = stats_of("XZYZ");
        assert_eq!((s.cnot, s.rz, s.basis), (6, 1, 4));
        let s = stats_of("IZ");
        assert_eq!((s.cnot, s.rz, s.basis), (0, 1, 0));
        let s = stats_of("XX");
        assert_eq!((s.cnot, s.rz, s.basis), (2, 1, 4));
        assert!(pauli_evolution(&"II".parse().unwrap(), 1.0).is_err());
    }

    #[test]
    fn text_form() {
        let c = pauli_evolution(&"XY".parse().unwrap(), 1.0).unwrap();
        assert_eq!(
            c.to_string(),
            "YBASIS q1\nH q2\nCNOT q2 q1\nRZ 2.0 q1\nCNOT q2 q1\nH q2\nYBASIS_DAG q1\n"
        );
        assert_eq!(c.depth(), 5);
    }

    #[test]
    fn hamiltonian_examples() {
        let jw = jordan_wigner(2);
        let (c, s) = hamiltonian_circuit(&jw, &parse_model("m 2 mj\n1 2\n").unwrap(), 1.0).unwrap();
        assert_eq!((s.rz, s.cnot, s.depth), (1, 0, 1));
        assert_eq!(c.gates().len(), 1);
        let (_, s) =
            hamiltonian_circuit(&jw, &parse_model("h 2 ac\n1 -1\n").unwrap(), 1.0).unwrap();
        assert_eq!((s.rz, s.cnot, s.basis), (2, 0, 0));
        let h = parse_model("h 3 ac\n1 -1\n").unwrap();
        assert!(hamiltonian_circuit(&jw, &h, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_counts(ops in prop::collection::vec(0usize..4, 1..12)) {
            let p = PauliString::from_ops(ops.iter().map(|&i| PauliOp::ALL[i]));
            prop_assume!(!p.is_identity());
            let c = pauli_evolution(&p, 0.5).unwrap();
            let s = c.stats();
            let k = p.weight();
            let xy = p.ops().filter(|o| o.flips()).count();
            prop_assert_eq!(s.cnot, 2 * (k - 1));
            prop_assert_eq!(s.rz, 1);
            prop_assert_eq!(s.basis, 2 * xy);
            prop_assert!(c.is_palindrome_without_rz());
        }
    }
}
