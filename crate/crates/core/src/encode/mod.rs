//! Boolean constraint system over Pauli-bit variables and its CNF form.
//!
//! Every string `P_k` (`k = 1..=2N`) on every qubit `i` is two Boolean
//! variables, laid out as in [`BitSequence`](crate::pauli::BitSequence).
//! [`compile`] combines the enabled constraint families into a
//! [`Formula`] and converts it with [`tseitin`].

mod cardinality;
mod constraints;
mod dimacs;
mod formula;
mod tseitin;

use std::fmt;

pub use cardinality::{encode_at_most, CardinalityEncoding};
pub use constraints::{
    add_algebraic_independence, add_anticommutativity, add_symmetry_breaking, add_vacuum,
    add_weight_bound, build_algebraic_independence, build_anticommutativity, build_formula,
    build_vacuum, build_weight_bound,
};
pub use dimacs::{emit_dimacs, parse_dimacs, CnfInstance, CnfStats};
pub use formula::{Assertion, Formula, Gate, NodeRef};
pub use tseitin::{tseitin, tseitin_with_base, COLLAPSE_SUPPORT};

use crate::error::{Error, Result};
use crate::fermion::{HamiltonianModel, MajoranaSet, WeightTable};
use crate::pauli::{PauliOp, PauliString};

/// Which constraint family a clause came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseGroup {
    Anticommutativity,
    Algebraic,
    Vacuum,
    Weight,
    SymmetryBreaking,
    Blocking,
    TseitinAux,
    Other,
}

impl fmt::Display for ClauseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClauseGroup::Anticommutativity => "anticommutativity",
            ClauseGroup::Algebraic => "algebraic",
            ClauseGroup::Vacuum => "vacuum",
            ClauseGroup::Weight => "weight",
            ClauseGroup::SymmetryBreaking => "symmetry",
            ClauseGroup::Blocking => "blocking",
            ClauseGroup::TseitinAux => "tseitin-aux",
            ClauseGroup::Other => "other",
        })
    }
}

/// Maps `(string k, qubit i, bit b)` to DIMACS variables `1..=4N²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarMap {
    modes: usize,
}

impl VarMap {
    pub fn new(modes: usize) -> Self {
        assert!(modes >= 1, "at least one mode");
        VarMap { modes }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn strings(&self) -> usize {
        2 * self.modes
    }

    pub fn problem_vars(&self) -> u32 {
        (4 * self.modes * self.modes) as u32
    }

    /// Variable of bit `b ∈ {1, 2}` of string `k` on qubit `i` (all 1-based).
    pub fn var(&self, k: usize, i: usize, b: usize) -> u32 {
        let n = self.modes;
        debug_assert!((1..=2 * n).contains(&k) && (1..=n).contains(&i) && (b == 1 || b == 2));
        ((k - 1) * 2 * n + 2 * (i - 1) + b) as u32
    }

    /// Literals fixing the problem variables to `enc`.
    pub fn assignment_of(&self, enc: &MajoranaSet) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.problem_vars() as usize);
        for k in 1..=self.strings() {
            let s = enc.get(k);
            for i in 1..=self.modes {
                let (b1, b2) = s.get(i).bits();
                for (b, value) in [(1, b1), (2, b2)] {
                    let v = self.var(k, i, b) as i32;
                    out.push(if value { v } else { -v });
                }
            }
        }
        out
    }
}

/// How vacuum preservation is turned into constraints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VacuumEncoding {
    /// `a_j |0…0⟩ = 0` exactly: both strings of pair `j` flip the same
    /// qubits, and their phases on `|0…0⟩` cancel.
    #[default]
    Exact,
    /// Only require some qubit where `P_{2j}` is X and `P_{2j-1}` is Y.
    /// Necessary but not sufficient.
    PairWitness,
}

impl std::str::FromStr for VacuumEncoding {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(VacuumEncoding::Exact),
            "pair-witness" => Ok(VacuumEncoding::PairWitness),
            other => Err(format!("unknown vacuum encoding {other:?}")),
        }
    }
}

/// What the weight bound counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Objective {
    /// Sum of the weights of all `2N` strings.
    #[default]
    Independent,
    /// Total weight of the model's expanded Majorana products.
    Dependent(HamiltonianModel),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Independent => "independent",
            Objective::Dependent(_) => "dependent",
        }
    }

    /// Value of this objective for `enc`.
    pub fn weight(&self, enc: &MajoranaSet) -> Result<usize> {
        match self {
            Objective::Independent => Ok(enc.independent_weight()),
            Objective::Dependent(model) => WeightTable::new(model).weight(enc),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingConfig {
    pub modes: usize,
    pub algebraic_independence: bool,
    pub vacuum: bool,
    pub vacuum_encoding: VacuumEncoding,
    pub objective: Objective,
    /// `None` leaves the weight unconstrained.
    pub weight_bound: Option<usize>,
    pub cardinality: CardinalityEncoding,
    /// Orders `P_1 < P_2` lexicographically. Only sound with vacuum off.
    pub symmetry_breaking: bool,
}

impl EncodingConfig {
    pub fn new(modes: usize) -> Self {
        EncodingConfig {
            modes,
            algebraic_independence: true,
            vacuum: true,
            vacuum_encoding: VacuumEncoding::default(),
            objective: Objective::Independent,
            weight_bound: None,
            cardinality: CardinalityEncoding::default(),
            symmetry_breaking: false,
        }
    }

    pub fn with_bound(&self, bound: usize) -> Self {
        EncodingConfig {
            weight_bound: Some(bound),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidArgument("modes must be at least 1".into()));
        }
        if let Objective::Dependent(m) = &self.objective {
            if m.modes != self.modes {
                return Err(Error::ModeMismatch {
                    encoding: self.modes,
                    model: m.modes,
                });
            }
        }
        if self.symmetry_breaking && self.vacuum {
            return Err(Error::InvalidArgument(
                "symmetry breaking swaps a Majorana pair and cannot be combined with vacuum".into(),
            ));
        }
        Ok(())
    }
}

/// Builds the formula for `cfg` and converts it to CNF.
pub fn compile(cfg: &EncodingConfig) -> Result<(CnfInstance, VarMap)> {
    cfg.validate()?;
    let vm = VarMap::new(cfg.modes);
    let f = build_formula(&vm, cfg);
    Ok((tseitin(&f, &vm), vm))
}

/// Reads the `2N` strings back out of a solver assignment. Literals for
/// auxiliary variables are ignored.
pub fn decode_assignment(vm: &VarMap, literals: &[i32]) -> Result<MajoranaSet> {
    let pv = vm.problem_vars() as usize;
    let mut value: Vec<Option<bool>> = vec![None; pv + 1];
    for &l in literals {
        let v = l.unsigned_abs() as usize;
        if (1..=pv).contains(&v) {
            value[v] = Some(l > 0);
        }
    }
    let n = vm.modes();
    let mut strings = Vec::with_capacity(vm.strings());
    for k in 1..=vm.strings() {
        let mut s = PauliString::identity(n);
        for i in 1..=n {
            let bit = |b| {
                let v = vm.var(k, i, b);
                value[v as usize].ok_or(Error::MissingVariable(v))
            };
            s.set(i, PauliOp::from_bits(bit(1)?, bit(2)?));
        }
        strings.push(s);
    }
    MajoranaSet::new(strings)
}
