//! Tseitin conversion of a [`Formula`] into an equisatisfiable CNF.
//!
//! Every non-literal node reached from an assertion gets one auxiliary
//! variable constrained to be equivalent to it. Two refinements keep the
//! output small:
//!
//! * AND/OR nodes whose variable support has at most [`COLLAPSE_SUPPORT`]
//!   variables are defined directly from their truth table using a prime
//!   implicant cover of the function and of its complement, instead of one
//!   auxiliary per internal gate.
//! * n-ary XORs are split into 3-input chunks, each defined by its 8 parity
//!   clauses.
//!
//! Top-level AND/OR/XOR assertions are written as plain clauses without an
//! auxiliary for the root.

use super::cardinality::encode_at_most;
use super::dimacs::CnfInstance;
use super::formula::{Assertion, Formula, Gate, NodeRef};
use super::{ClauseGroup, VarMap};

/// Largest support that is encoded straight from a truth table.
pub const COLLAPSE_SUPPORT: usize = 4;

const XOR_CHUNK: usize = 3;

pub fn tseitin(f: &Formula, vm: &VarMap) -> CnfInstance {
    tseitin_with_base(f, vm.problem_vars())
}

/// Tseitin conversion where variables `1..=problem_vars` are problem
/// variables and auxiliaries start above `max(problem_vars, f.max_var())`.
pub fn tseitin_with_base(f: &Formula, problem_vars: u32) -> CnfInstance {
    let base = problem_vars.max(f.max_var());
    let mut enc = Encoder {
        f,
        next: base + 1,
        lits: vec![0; f.len()],
        support: compute_supports(f),
        cnf: CnfInstance::new(problem_vars),
        true_lit: None,
    };
    enc.cnf.reserve_vars(base);
    for (assertion, group) in f.assertions() {
        match assertion {
            Assertion::Holds(n) => enc.assert_node(*n, true, *group),
            Assertion::AtMost {
                inputs,
                bound,
                encoding,
            } => {
                let lits: Vec<i32> = inputs.iter().map(|&n| enc.lit(n)).collect();
                let mut clauses = Vec::new();
                encode_at_most(&lits, *bound, *encoding, &mut enc.next, &mut clauses);
                for c in clauses {
                    enc.cnf.add_clause(c, *group);
                }
            }
        }
    }
    enc.cnf.reserve_vars(enc.next - 1);
    enc.cnf
}

/// Sorted variable support, or `None` once it exceeds [`COLLAPSE_SUPPORT`].
fn compute_supports(f: &Formula) -> Vec<Option<Vec<u32>>> {
    let mut out: Vec<Option<Vec<u32>>> = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        let gate = f.gate(NodeRef::from_index(i));
        let s = match gate {
            Gate::Const(_) => Some(Vec::new()),
            Gate::Var(v) => Some(vec![*v]),
            Gate::Not(c) => out[c.index()].clone(),
            Gate::And(cs) | Gate::Or(cs) | Gate::Xor(cs) => {
                let mut acc: Vec<u32> = Vec::new();
                let mut big = false;
                for c in cs {
                    match &out[c.index()] {
                        Some(s) => acc.extend(s),
                        None => {
                            big = true;
                            break;
                        }
                    }
                }
                acc.sort_unstable();
                acc.dedup();
                if big || acc.len() > COLLAPSE_SUPPORT {
                    None
                } else {
                    Some(acc)
                }
            }
        };
        out.push(s);
    }
    out
}

struct Encoder<'a> {
    f: &'a Formula,
    next: u32,
    /// Literal of each node once encoded; 0 means not yet.
    lits: Vec<i32>,
    support: Vec<Option<Vec<u32>>>,
    cnf: CnfInstance,
    true_lit: Option<i32>,
}

impl Encoder<'_> {
    fn fresh(&mut self) -> i32 {
        let v = self.next;
        self.next += 1;
        v as i32
    }

    fn def(&mut self, clause: Vec<i32>) {
        self.cnf.add_clause(clause, ClauseGroup::TseitinAux);
    }

    fn constant_lit(&mut self, value: bool) -> i32 {
        let t = match self.true_lit {
            Some(t) => t,
            None => {
                let t = self.fresh();
                self.def(vec![t]);
                self.true_lit = Some(t);
                t
            }
        };
        if value {
            t
        } else {
            -t
        }
    }

    fn lit(&mut self, n: NodeRef) -> i32 {
        match self.f.gate(n) {
            Gate::Var(v) => return *v as i32,
            Gate::Not(c) => return -self.lit(*c),
            Gate::Const(b) => return self.constant_lit(*b),
            _ => {}
        }
        if self.lits[n.index()] != 0 {
            return self.lits[n.index()];
        }
        let t = self.define(n);
        self.lits[n.index()] = t;
        t
    }

    fn define(&mut self, n: NodeRef) -> i32 {
        let gate = self.f.gate(n).clone();
        if !matches!(gate, Gate::Xor(_)) {
            if let Some(support) = self.support[n.index()].clone() {
                return self.define_from_truth_table(n, &support);
            }
        }
        match gate {
            Gate::And(cs) => {
                let ls: Vec<i32> = cs.iter().map(|&c| self.lit(c)).collect();
                let t = self.fresh();
                for &l in &ls {
                    self.def(vec![-t, l]);
                }
                let mut big = vec![t];
                big.extend(ls.iter().map(|l| -l));
                self.def(big);
                t
            }
            Gate::Or(cs) => {
                let ls: Vec<i32> = cs.iter().map(|&c| self.lit(c)).collect();
                let t = self.fresh();
                for &l in &ls {
                    self.def(vec![t, -l]);
                }
                let mut big = vec![-t];
                big.extend(ls);
                self.def(big);
                t
            }
            Gate::Xor(cs) => {
                let ls: Vec<i32> = cs.iter().map(|&c| self.lit(c)).collect();
                let ls = self.chunk_xor(ls, XOR_CHUNK);
                let t = self.fresh();
                let mut all = ls;
                all.push(t);
                // t = xor(ls)  <=>  xor(ls, t) = 0
                self.parity_clauses(&all, false, ClauseGroup::TseitinAux);
                t
            }
            Gate::Var(_) | Gate::Not(_) | Gate::Const(_) => {
                unreachable!("literals are not defined")
            }
        }
    }

    /// Replaces leading chunks of `ls` by auxiliaries until at most `keep`
    /// literals remain; the parity of the list is unchanged.
    fn chunk_xor(&mut self, mut ls: Vec<i32>, keep: usize) -> Vec<i32> {
        while ls.len() > keep {
            let mut chunk: Vec<i32> = ls.drain(..XOR_CHUNK).collect();
            let t = self.fresh();
            chunk.push(t);
            self.parity_clauses(&chunk, false, ClauseGroup::TseitinAux);
            ls.insert(0, t);
        }
        ls
    }

    /// Clauses forcing `xor(lits) == odd`.
    fn parity_clauses(&mut self, lits: &[i32], odd: bool, group: ClauseGroup) {
        let m = lits.len();
        if m == 0 {
            if odd {
                self.cnf.add_clause(Vec::new(), group);
            }
            return;
        }
        for pattern in 0u32..(1 << m) {
            // Forbid assignments whose parity is wrong. Bit i of `pattern`
            // is the value of lits[i] in the forbidden assignment.
            if (pattern.count_ones() % 2 == 1) == odd {
                continue;
            }
            let clause = (0..m)
                .map(|i| {
                    if (pattern >> i) & 1 == 1 {
                        -lits[i]
                    } else {
                        lits[i]
                    }
                })
                .collect();
            self.cnf.add_clause(clause, group);
        }
    }

    fn define_from_truth_table(&mut self, n: NodeRef, support: &[u32]) -> i32 {
        let k = support.len();
        let mut table: u32 = 0;
        for m in 0..(1u32 << k) {
            let value = |v: u32| {
                let i = support.binary_search(&v).expect("variable in support");
                (m >> i) & 1 == 1
            };
            if eval_cone(self.f, n, &value) {
                table |= 1 << m;
            }
        }
        let t = self.fresh();
        let full: u32 = if k == 5 {
            u32::MAX
        } else {
            (1u32 << (1u32 << k)) - 1
        };
        let lit_of = |i: usize, positive: bool| {
            let v = support[i] as i32;
            if positive {
                v
            } else {
                -v
            }
        };
        // cube -> t  for cubes covering the on-set
        for cube in prime_cover(table, k) {
            let mut clause = vec![t];
            clause.extend(cube.literals(k).map(|(i, pos)| -lit_of(i, pos)));
            self.def(clause);
        }
        // cube -> !t for cubes covering the off-set
        for cube in prime_cover(!table & full, k) {
            let mut clause = vec![-t];
            clause.extend(cube.literals(k).map(|(i, pos)| -lit_of(i, pos)));
            self.def(clause);
        }
        t
    }

    fn assert_node(&mut self, n: NodeRef, value: bool, group: ClauseGroup) {
        match self.f.gate(n).clone() {
            Gate::Const(b) => {
                if b != value {
                    self.cnf.add_clause(Vec::new(), group);
                }
            }
            Gate::Var(v) => {
                let l = v as i32;
                self.cnf.add_clause(vec![if value { l } else { -l }], group);
            }
            Gate::Not(c) => self.assert_node(c, !value, group),
            Gate::And(cs) if value => {
                for c in cs {
                    self.assert_node(c, true, group);
                }
            }
            Gate::Or(cs) if !value => {
                for c in cs {
                    self.assert_node(c, false, group);
                }
            }
            Gate::And(cs) => {
                let clause = cs.iter().map(|&c| -self.lit(c)).collect();
                self.cnf.add_clause(clause, group);
            }
            Gate::Or(cs) => {
                let clause = cs.iter().map(|&c| self.lit(c)).collect();
                self.cnf.add_clause(clause, group);
            }
            Gate::Xor(cs) => {
                let ls: Vec<i32> = cs.iter().map(|&c| self.lit(c)).collect();
                let ls = self.chunk_xor(ls, XOR_CHUNK + 1);
                self.parity_clauses(&ls, value, group);
            }
        }
    }
}

/// Evaluates `n` reading variables through `value`. Only used on cones with
/// a handful of variables.
fn eval_cone(f: &Formula, n: NodeRef, value: &dyn Fn(u32) -> bool) -> bool {
    match f.gate(n) {
        Gate::Const(b) => *b,
        Gate::Var(v) => value(*v),
        Gate::Not(c) => !eval_cone(f, *c, value),
        Gate::And(cs) => cs.iter().all(|&c| eval_cone(f, c, value)),
        Gate::Or(cs) => cs.iter().any(|&c| eval_cone(f, c, value)),
        Gate::Xor(cs) => cs.iter().fold(false, |a, &c| a ^ eval_cone(f, c, value)),
    }
}

/// A cube over at most 5 variables: the variables in `care` must take the
/// values in `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cube {
    care: u32,
    value: u32,
}

impl Cube {
    fn minterms(self, k: usize) -> impl Iterator<Item = u32> {
        (0..(1u32 << k)).filter(move |m| m & self.care == self.value)
    }

    fn literals(self, k: usize) -> impl Iterator<Item = (usize, bool)> {
        (0..k)
            .filter(move |i| (self.care >> i) & 1 == 1)
            .map(move |i| (i, (self.value >> i) & 1 == 1))
    }
}

/// Greedy cover of the on-set of `table` (bit `m` = f(m)) by prime implicants.
fn prime_cover(table: u32, k: usize) -> Vec<Cube> {
    let contains = |m: u32| (table >> m) & 1 == 1;
    let is_implicant = |c: Cube| c.minterms(k).all(contains);

    let mut primes: Vec<Cube> = Vec::new();
    for care in 0..(1u32 << k) {
        let mut value = care;
        loop {
            let c = Cube { care, value };
            if is_implicant(c) {
                let prime = (0..k).filter(|i| (care >> i) & 1 == 1).all(|i| {
                    let bit = 1 << i;
                    !is_implicant(Cube {
                        care: care & !bit,
                        value: value & !bit,
                    })
                });
                if prime {
                    primes.push(c);
                }
            }
            if value == 0 {
                break;
            }
            value = (value - 1) & care;
        }
    }

    let mut uncovered: Vec<u32> = (0..(1u32 << k)).filter(|&m| contains(m)).collect();
    let mut cover = Vec::new();
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .copied()
            .max_by_key(|c| {
                let gain = uncovered.iter().filter(|&&m| m & c.care == c.value).count();
                (gain, std::cmp::Reverse(c.care.count_ones()))
            })
            .expect("on-set minterms are covered by some prime");
        uncovered.retain(|&m| m & best.care != best.value);
        cover.push(best);
    }
    cover
}
