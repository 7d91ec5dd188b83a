use std::fmt;

use super::gf2::find_dependency;
use super::statevector::annihilator_on_zero;
use crate::fermion::MajoranaSet;
use crate::pauli::PauliString;

/// Registers up to this size are checked on a dense statevector; larger ones
/// use the closed form for a single basis state.
pub const DENSE_VACUUM_LIMIT: usize = 12;

const VACUUM_TOLERANCE: f64 = 1e-12;

/// Outcome of [`verify`]. Empty violation lists mean the check passed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub modes: usize,
    /// Pairs `(p, q)` of 1-based string indices that commute.
    pub commuting_pairs: Vec<(usize, usize)>,
    /// A nonempty subset of 1-based indices whose product is the identity.
    pub dependent_subset: Option<Vec<usize>>,
    /// Whether vacuum preservation was examined.
    pub vacuum_checked: bool,
    /// Modes `j` with `a_j |0…0⟩ ≠ 0`, with the residual norm.
    pub vacuum_violations: Vec<(usize, f64)>,
}

impl VerifyReport {
    pub fn anticommutation_ok(&self) -> bool {
        self.commuting_pairs.is_empty()
    }

    pub fn independence_ok(&self) -> bool {
        self.dependent_subset.is_none()
    }

    pub fn vacuum_ok(&self) -> bool {
        self.vacuum_violations.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        self.anticommutation_ok() && self.independence_ok() && self.vacuum_ok()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "modes: {}", self.modes)?;
        write!(
            f,
            "anticommutativity: {}",
            status(self.anticommutation_ok())
        )?;
        if let Some((p, q)) = self.commuting_pairs.first() {
            write!(
                f,
                " ({} commuting pairs, first P{p} P{q})",
                self.commuting_pairs.len()
            )?;
        }
        writeln!(f)?;
        write!(f, "independence: {}", status(self.independence_ok()))?;
        if let Some(s) = &self.dependent_subset {
            let names: Vec<String> = s.iter().map(|k| format!("P{k}")).collect();
            write!(f, " (product of {} is identity)", names.join(" "))?;
        }
        writeln!(f)?;
        if self.vacuum_checked {
            write!(f, "vacuum: {}", status(self.vacuum_ok()))?;
            if !self.vacuum_violations.is_empty() {
                let modes: Vec<String> = self
                    .vacuum_violations
                    .iter()
                    .map(|(j, r)| format!("a{j} residual {r:.3}"))
                    .collect();
                write!(f, " ({})", modes.join(", "))?;
            }
            writeln!(f)?;
        } else {
            writeln!(f, "vacuum: skipped")?;
        }
        Ok(())
    }
}

pub fn verify(enc: &MajoranaSet, check_vacuum: bool) -> VerifyReport {
    let strings = enc.strings();
    let mut report = VerifyReport {
        modes: enc.modes(),
        vacuum_checked: check_vacuum,
        ..Default::default()
    };
    for p in 0..strings.len() {
        for q in p + 1..strings.len() {
            if !strings[p].anticommutes_unchecked(&strings[q]) {
                report.commuting_pairs.push((p + 1, q + 1));
            }
        }
    }
    report.dependent_subset = dependent_subset(enc);
    if check_vacuum {
        for j in 1..=enc.modes() {
            let residual = vacuum_residual(enc.get(2 * j), enc.get(2 * j - 1));
            if residual >= VACUUM_TOLERANCE {
                report.vacuum_violations.push((j, residual));
            }
        }
    }
    report
}

/// GF(2) dependency among the bit sequences, as 1-based string indices.
pub fn dependent_subset(enc: &MajoranaSet) -> Option<Vec<usize>> {
    let rows: Vec<Vec<u64>> = enc.strings().iter().map(|s| s.symplectic_words()).collect();
    find_dependency(&rows).map(|s| s.into_iter().map(|i| i + 1).collect())
}

/// Literal subset enumeration; exponential, for cross-checking only.
pub fn dependent_subset_by_enumeration(enc: &MajoranaSet) -> Option<Vec<usize>> {
    let m = enc.strings().len();
    assert!(m <= 24, "enumeration over {m} strings is not tractable");
    (1usize..(1 << m)).find_map(|mask| {
        let idx: Vec<usize> = (0..m)
            .filter(|b| (mask >> b) & 1 == 1)
            .map(|b| b + 1)
            .collect();
        enc.product(&idx).is_identity().then_some(idx)
    })
}

/// `‖(P_even + i·P_odd)/2 |0…0⟩‖`.
pub fn vacuum_residual(even: &PauliString, odd: &PauliString) -> f64 {
    if even.len() <= DENSE_VACUUM_LIMIT {
        annihilator_on_zero(even, odd).norm()
    } else {
        basis_vacuum_residual(even, odd)
    }
}

/// Same quantity without a dense state: a Pauli string maps `|0…0⟩` to
/// `i^{#Y}` times the basis state of its flipped qubits.
fn basis_vacuum_residual(even: &PauliString, odd: &PauliString) -> f64 {
    let same_target = even
        .ops()
        .zip(odd.ops())
        .all(|(a, b)| a.flips() == b.flips());
    if !same_target {
        // two orthogonal basis states with amplitudes of modulus 1/2
        return std::f64::consts::FRAC_1_SQRT_2;
    }
    // i^{y_even} + i^{1 + y_odd}
    let phase = |k: usize| match k % 4 {
        0 => (1i32, 0i32),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    let (a, b) = phase(even.y_count());
    let (c, d) = phase(odd.y_count() + 1);
    let (re, im) = ((a + c) as f64 / 2.0, (b + d) as f64 / 2.0);
    (re * re + im * im).sqrt()
}
