//! The constraint families, each added to a shared [`Formula`] so that
//! common subterms are built once.

use super::formula::{Formula, NodeRef};
use super::{ClauseGroup, EncodingConfig, Objective, VacuumEncoding, VarMap};
use crate::fermion::HamiltonianModel;

/// Bits `(b1, b2)` of string `k` on qubit `i`.
fn bits(f: &mut Formula, vm: &VarMap, k: usize, i: usize) -> (NodeRef, NodeRef) {
    (f.var(vm.var(k, i, 1)), f.var(vm.var(k, i, 2)))
}

/// Single-qubit anticommutation of `(a1, a2)` and `(b1, b2)`, written as
/// the four-way disjunction over the non-commuting operator pairs.
fn facomm(f: &mut Formula, a: (NodeRef, NodeRef), b: (NodeRef, NodeRef)) -> NodeRef {
    let (a1, a2) = a;
    let (b1, b2) = b;
    let na1 = f.not(a1);
    let na2 = f.not(a2);
    let nb1 = f.not(b1);
    let nb2 = f.not(b2);
    let t1 = f.and(vec![a1, b2, na2]);
    let t2 = f.and(vec![a1, b2, nb1]);
    let t3 = f.and(vec![a2, b1, na1]);
    let t4 = f.and(vec![a2, b1, nb2]);
    f.or(vec![t1, t2, t3, t4])
}

/// Every pair of distinct strings anticommutes.
pub fn add_anticommutativity(f: &mut Formula, vm: &VarMap) {
    let n = vm.modes();
    for p in 1..=vm.strings() {
        for q in p + 1..=vm.strings() {
            let terms: Vec<NodeRef> = (1..=n)
                .map(|i| {
                    let a = bits(f, vm, p, i);
                    let b = bits(f, vm, q, i);
                    facomm(f, a, b)
                })
                .collect();
            let x = f.xor(terms);
            f.assert_true(x, ClauseGroup::Anticommutativity);
        }
    }
}

/// No nonempty subset of the strings multiplies to the identity.
///
/// The XOR of subset `S` at a bit position is built from the XOR of `S`
/// without its largest member, so each subset costs one gate per position.
pub fn add_algebraic_independence(f: &mut Formula, vm: &VarMap) {
    let m = vm.strings();
    assert!(
        m <= 30,
        "algebraic independence over {m} strings is not tractable"
    );
    let n = vm.modes();
    let positions: Vec<(usize, usize)> = (1..=n).flat_map(|i| [(i, 1), (i, 2)]).collect();
    let mut xors: Vec<Vec<NodeRef>> = Vec::with_capacity(1 << m);
    xors.push(Vec::new());
    for mask in 1usize..(1 << m) {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let k = top as usize + 1;
        let row: Vec<NodeRef> = positions
            .iter()
            .enumerate()
            .map(|(p, &(i, b))| {
                let v = f.var(vm.var(k, i, b));
                if rest == 0 {
                    v
                } else {
                    let prev = xors[rest][p];
                    f.xor2(prev, v)
                }
            })
            .collect();
        let any = f.or(row.clone());
        f.assert_true(any, ClauseGroup::Algebraic);
        xors.push(row);
    }
}

/// Every annihilation operator maps `|0…0⟩` to zero.
pub fn add_vacuum(f: &mut Formula, vm: &VarMap, encoding: VacuumEncoding) {
    let n = vm.modes();
    for j in 1..=n {
        let (even, odd) = (2 * j, 2 * j - 1);
        match encoding {
            VacuumEncoding::PairWitness => {
                let witnesses: Vec<NodeRef> = (1..=n)
                    .map(|i| {
                        let a = bits(f, vm, even, i);
                        let b = bits(f, vm, odd, i);
                        x_over_y(f, a, b)
                    })
                    .collect();
                let any = f.or(witnesses);
                f.assert_true(any, ClauseGroup::Vacuum);
            }
            VacuumEncoding::Exact => exact_vacuum(f, vm, even, odd),
        }
    }
}

/// `a` is X and `b` is Y.
fn x_over_y(f: &mut Formula, a: (NodeRef, NodeRef), b: (NodeRef, NodeRef)) -> NodeRef {
    let na1 = f.not(a.0);
    let nb2 = f.not(b.1);
    f.and(vec![na1, a.1, b.0, nb2])
}

/// `P_even |0⟩ = i^{y_even} |f⟩` and `P_odd |0⟩ = i^{y_odd} |f'⟩`. The pair
/// annihilates the vacuum iff `f = f'` and `y_odd - y_even ≡ 1 (mod 4)`.
/// With equal flip patterns the only qubits that change the Y-count
/// difference are (X, Y), contributing +1, and (Y, X), contributing -1.
fn exact_vacuum(f: &mut Formula, vm: &VarMap, even: usize, odd: usize) {
    let n = vm.modes();
    let (mut s0, mut s1) = (f.constant(false), f.constant(false));
    for i in 1..=n {
        let a = bits(f, vm, even, i);
        let b = bits(f, vm, odd, i);
        let same_flip = f.xor(vec![a.0, a.1, b.0, b.1]);
        let same_flip = f.not(same_flip);
        f.assert_true(same_flip, ClauseGroup::Vacuum);

        let up = x_over_y(f, a, b);
        let down = x_over_y(f, b, a);
        let d0 = f.or2(up, down);
        let carry = f.and2(s0, d0);
        let r0 = f.xor2(s0, d0);
        let r1 = f.xor(vec![s1, down, carry]);
        s0 = r0;
        s1 = r1;
    }
    let ns1 = f.not(s1);
    let ok = f.and2(s0, ns1);
    f.assert_true(ok, ClauseGroup::Vacuum);
}

/// Indicators whose count is the objective value, one entry per unit of
/// weight (repeated products appear repeatedly).
fn weight_indicators(f: &mut Formula, vm: &VarMap, objective: &Objective) -> Vec<NodeRef> {
    let n = vm.modes();
    match objective {
        Objective::Independent => {
            let mut out = Vec::with_capacity(vm.strings() * n);
            for k in 1..=vm.strings() {
                for i in 1..=n {
                    let (b1, b2) = bits(f, vm, k, i);
                    out.push(f.or2(b1, b2));
                }
            }
            out
        }
        Objective::Dependent(model) => dependent_indicators(f, vm, model),
    }
}

fn dependent_indicators(f: &mut Formula, vm: &VarMap, model: &HamiltonianModel) -> Vec<NodeRef> {
    let mut out = Vec::new();
    for (product, mult) in model.weighted_products() {
        for i in 1..=vm.modes() {
            let mut x1 = Vec::with_capacity(product.len());
            let mut x2 = Vec::with_capacity(product.len());
            for &k in product.indices() {
                let (b1, b2) = bits(f, vm, k, i);
                x1.push(b1);
                x2.push(b2);
            }
            let x1 = f.xor(x1);
            let x2 = f.xor(x2);
            let ind = f.or2(x1, x2);
            out.extend(std::iter::repeat_n(ind, mult));
        }
    }
    out
}

/// Objective value at most `bound`.
pub fn add_weight_bound(f: &mut Formula, vm: &VarMap, cfg: &EncodingConfig, bound: usize) {
    let inputs = weight_indicators(f, vm, &cfg.objective);
    f.assert_at_most(inputs, bound, cfg.cardinality, ClauseGroup::Weight);
}

/// `P_1 < P_2` comparing bit sequences from position 1.
pub fn add_symmetry_breaking(f: &mut Formula, vm: &VarMap) {
    let n = vm.modes();
    let mut lt = f.constant(false);
    for i in (1..=n).rev() {
        for b in [2, 1] {
            let x = f.var(vm.var(1, i, b));
            let y = f.var(vm.var(2, i, b));
            let nx = f.not(x);
            let here = f.and2(nx, y);
            let diff = f.xor2(x, y);
            let eq = f.not(diff);
            let later = f.and2(eq, lt);
            lt = f.or2(here, later);
        }
    }
    f.assert_true(lt, ClauseGroup::SymmetryBreaking);
}

pub fn build_anticommutativity(vm: &VarMap) -> Formula {
    let mut f = Formula::new();
    add_anticommutativity(&mut f, vm);
    f
}

pub fn build_algebraic_independence(vm: &VarMap) -> Formula {
    let mut f = Formula::new();
    add_algebraic_independence(&mut f, vm);
    f
}

pub fn build_vacuum(vm: &VarMap, encoding: VacuumEncoding) -> Formula {
    let mut f = Formula::new();
    add_vacuum(&mut f, vm, encoding);
    f
}

/// Weight constraint alone; unconstrained when `cfg.weight_bound` is `None`.
pub fn build_weight_bound(vm: &VarMap, cfg: &EncodingConfig) -> Formula {
    let mut f = Formula::new();
    if let Some(w) = cfg.weight_bound {
        add_weight_bound(&mut f, vm, cfg, w);
    }
    f
}

/// Conjunction of every family enabled in `cfg`.
pub fn build_formula(vm: &VarMap, cfg: &EncodingConfig) -> Formula {
    let mut f = Formula::new();
    add_anticommutativity(&mut f, vm);
    if cfg.algebraic_independence {
        add_algebraic_independence(&mut f, vm);
    }
    if cfg.vacuum {
        add_vacuum(&mut f, vm, cfg.vacuum_encoding);
    }
    if cfg.symmetry_breaking {
        add_symmetry_breaking(&mut f, vm);
    }
    if let Some(w) = cfg.weight_bound {
        add_weight_bound(&mut f, vm, cfg, w);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::Assertion;
    use crate::fermion::{parse_model, MajoranaSet};
    use crate::pauli::{PauliOp, PauliString};

    fn holds(f: &Formula, vm: &VarMap, enc: &MajoranaSet) -> bool {
        let lits = vm.assignment_of(enc);
        f.satisfied_by(|v| lits[v as usize - 1] > 0)
    }

    fn set(strings: &[&str]) -> MajoranaSet {
        MajoranaSet::new(strings.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    /// All `2N`-tuples of `N`-qubit strings.
    fn all_tuples(n: usize) -> Vec<MajoranaSet> {
        let singles: Vec<PauliString> = (0..4usize.pow(n as u32))
            .map(|mut c| {
                PauliString::from_ops((0..n).map(|_| {
                    let op = PauliOp::ALL[c % 4];
                    c /= 4;
                    op
                }))
            })
            .collect();
        let m = 2 * n;
        let total = singles.len().pow(m as u32);
        (0..total)
            .map(|mut c| {
                let strings = (0..m)
                    .map(|_| {
                        let s = singles[c % singles.len()].clone();
                        c /= singles.len();
                        s
                    })
                    .collect();
                MajoranaSet::new(strings).unwrap()
            })
            .collect()
    }

    fn pairwise_anticommute(e: &MajoranaSet) -> bool {
        let s = e.strings();
        (0..s.len()).all(|i| (i + 1..s.len()).all(|j| s[i].anticommutes(&s[j]).unwrap()))
    }

    fn independent(e: &MajoranaSet) -> bool {
        let m = e.strings().len();
        (1usize..(1 << m)).all(|mask| {
            let idx: Vec<usize> = (0..m)
                .filter(|b| (mask >> b) & 1 == 1)
                .map(|b| b + 1)
                .collect();
            !e.product(&idx).is_identity()
        })
    }

    #[test]
    fn group_counts() {
        for (n, pairs) in [(1, 1), (2, 6), (3, 15)] {
            let f = build_anticommutativity(&VarMap::new(n));
            assert_eq!(f.assertions().len(), pairs);
        }
        let f = build_algebraic_independence(&VarMap::new(2));
        assert_eq!(f.assertions().len(), 15);
    }

    #[test]
    fn jw_satisfies_all_families() {
        let vm = VarMap::new(2);
        let jw = set(&["IY", "IX", "YZ", "XZ"]);
        assert!(holds(&build_anticommutativity(&vm), &vm, &jw));
        assert!(holds(&build_algebraic_independence(&vm), &vm, &jw));
        for enc in [VacuumEncoding::Exact, VacuumEncoding::PairWitness] {
            assert!(holds(&build_vacuum(&vm, enc), &vm, &jw));
        }
    }

    #[test]
    fn pair_witness_rejects_no_x() {
        let vm = VarMap::new(2);
        let e = set(&["ZZ", "ZZ", "YZ", "XZ"]);
        assert!(!holds(
            &build_vacuum(&vm, VacuumEncoding::PairWitness),
            &vm,
            &e
        ));
    }

    #[test]
    fn exact_vacuum_is_stricter_than_pair_witness() {
        // P2 = XX, P1 = YI has an XY pair but P1 and P2 flip different qubits.
        let vm = VarMap::new(2);
        let e = set(&["YI", "XX", "YZ", "XZ"]);
        assert!(holds(
            &build_vacuum(&vm, VacuumEncoding::PairWitness),
            &vm,
            &e
        ));
        assert!(!holds(&build_vacuum(&vm, VacuumEncoding::Exact), &vm, &e));
    }

    #[test]
    fn n1_algebraic_examples() {
        let vm = VarMap::new(1);
        let f = build_algebraic_independence(&vm);
        assert!(holds(&f, &vm, &set(&["X", "Y"])));
        assert!(!holds(&f, &vm, &set(&["X", "X"])));
        assert!(!holds(&f, &vm, &set(&["I", "Y"])));
        assert!(!holds(
            &build_anticommutativity(&vm),
            &vm,
            &set(&["X", "X"])
        ));
    }

    #[test]
    fn formulas_match_brute_force_for_small_n() {
        for n in 1..=2 {
            let vm = VarMap::new(n);
            let anti = build_anticommutativity(&vm);
            let alg = build_algebraic_independence(&vm);
            for e in all_tuples(n) {
                let ac = pairwise_anticommute(&e);
                assert_eq!(holds(&anti, &vm, &e), ac, "{e}");
                if ac || n == 1 {
                    assert_eq!(holds(&alg, &vm, &e), independent(&e), "{e}");
                }
            }
        }
    }

    #[test]
    fn dependent_indicator_count_matches_weight() {
        let model = parse_model("h 2 ac\n1 -1\n").unwrap();
        let vm = VarMap::new(2);
        let jw = set(&["IY", "IX", "YZ", "XZ"]);
        let mut f = Formula::new();
        let inds = dependent_indicators(&mut f, &vm, &model);
        let lits = vm.assignment_of(&jw);
        let values = f.evaluate_all(|v| lits[v as usize - 1] > 0);
        let count = inds.iter().filter(|n| values[n.index()]).count();
        assert_eq!(count, 2);
    }

    #[test]
    fn weight_bound_n1() {
        let vm = VarMap::new(1);
        let mut cfg = EncodingConfig::new(1);
        cfg.weight_bound = Some(1);
        let f = build_weight_bound(&vm, &cfg);
        assert!(matches!(
            f.assertions()[0].0,
            Assertion::AtMost { bound: 1, .. }
        ));
        let anti = build_anticommutativity(&vm);
        let ok = |w: usize| {
            let cfg = cfg.with_bound(w);
            let f = build_weight_bound(&vm, &cfg);
            all_tuples(1)
                .iter()
                .any(|e| holds(&anti, &vm, e) && holds(&f, &vm, e))
        };
        assert!(!ok(1));
        assert!(ok(2));
    }

    #[test]
    fn symmetry_breaking_orders_first_pair() {
        let vm = VarMap::new(2);
        let mut f = Formula::new();
        add_symmetry_breaking(&mut f, &vm);
        let a = set(&["IY", "IX", "YZ", "XZ"]);
        let b = set(&["IX", "IY", "YZ", "XZ"]);
        assert_ne!(holds(&f, &vm, &a), holds(&f, &vm, &b));
    }
}
