//! Reference encodings, the exact verifier and an exhaustive optimum.

pub mod gf2;
mod statevector;
mod verify;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use statevector::{annihilator_on_zero, Statevector};
pub use verify::{
    dependent_subset, dependent_subset_by_enumeration, vacuum_residual, verify, VerifyReport,
    DENSE_VACUUM_LIMIT,
};

use crate::fermion::MajoranaSet;
use crate::pauli::{PauliOp, PauliString};

/// `P_{2j-1} = Y_j Z_{<j}`, `P_{2j} = X_j Z_{<j}`.
pub fn jordan_wigner(modes: usize) -> MajoranaSet {
    assert!(modes >= 1, "at least one mode");
    let mut strings = Vec::with_capacity(2 * modes);
    for j in 1..=modes {
        for top in [PauliOp::Y, PauliOp::X] {
            let mut s = PauliString::identity(modes);
            for i in 1..j {
                s.set(i, PauliOp::Z);
            }
            s.set(j, top);
            strings.push(s);
        }
    }
    MajoranaSet::new(strings).expect("well-formed by construction")
}

/// Binary-tree transformation matrix: qubit `i` stores the parity of the
/// modes `j` with `beta[i][j]`. Built for the next power of two and
/// truncated; the matrix is lower triangular so truncation is harmless.
fn bk_beta(modes: usize) -> Vec<Vec<bool>> {
    let mut size = 1;
    let mut beta = vec![vec![true]];
    while size < modes {
        let mut next = vec![vec![false; 2 * size]; 2 * size];
        for i in 0..size {
            for j in 0..size {
                next[i][j] = beta[i][j];
                next[size + i][size + j] = beta[i][j];
            }
        }
        for j in 0..size {
            next[2 * size - 1][j] = true;
        }
        beta = next;
        size *= 2;
    }
    beta.truncate(modes);
    for row in &mut beta {
        row.truncate(modes);
    }
    beta
}

/// Inverse of a unit lower-triangular GF(2) matrix.
fn invert_lower(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut inv = vec![vec![false; n]; n];
    for col in 0..n {
        // forward substitution for column `col`
        for row in 0..n {
            let mut v = row == col;
            for k in 0..row {
                v ^= m[row][k] && inv[k][col];
            }
            inv[row][col] = v;
        }
    }
    inv
}

/// Bravyi-Kitaev encoding from update, parity and flip sets:
/// `P_{2j} = X_{U(j)} X_j Z_{P(j)}`, `P_{2j-1} = X_{U(j)} Y_j Z_{P(j) Δ F(j)}`.
pub fn bravyi_kitaev(modes: usize) -> MajoranaSet {
    assert!(modes >= 1, "at least one mode");
    let beta = bk_beta(modes);
    let inv = invert_lower(&beta);
    let mut strings = Vec::with_capacity(2 * modes);
    for j in 0..modes {
        let update: Vec<usize> = (0..modes).filter(|&i| i != j && beta[i][j]).collect();
        let parity: Vec<bool> = (0..modes)
            .map(|i| (0..j).fold(false, |acc, k| acc ^ inv[k][i]))
            .collect();
        let flip: Vec<bool> = (0..modes).map(|i| i != j && inv[j][i]).collect();

        let mut even = PauliString::identity(modes);
        let mut odd = PauliString::identity(modes);
        for &u in &update {
            even.set(u + 1, PauliOp::X);
            odd.set(u + 1, PauliOp::X);
        }
        for i in 0..modes {
            if parity[i] {
                even.set(i + 1, PauliOp::Z);
            }
            if parity[i] ^ flip[i] {
                odd.set(i + 1, PauliOp::Z);
            }
        }
        even.set(j + 1, PauliOp::X);
        odd.set(j + 1, PauliOp::Y);
        strings.push(odd);
        strings.push(even);
    }
    MajoranaSet::new(strings).expect("well-formed by construction")
}

/// All `4^N` strings on `N` qubits, qubit 1 varying fastest.
fn all_strings(n: usize) -> Vec<PauliString> {
    (0..4usize.pow(n as u32))
        .map(|mut c| {
            PauliString::from_ops((0..n).map(|_| {
                let op = PauliOp::ALL[c % 4];
                c /= 4;
                op
            }))
        })
        .collect()
}

/// Minimum independent weight over all valid encodings, by exhaustive
/// depth-first search over tuples of strings. Only feasible for `N <= 2`.
pub fn exhaustive_optimum(modes: usize, vacuum: bool) -> Option<(usize, MajoranaSet)> {
    assert!(
        modes <= 2,
        "exhaustive search beyond 2 modes is not tractable"
    );
    let pool: Vec<PauliString> = all_strings(modes)
        .into_iter()
        .filter(|s| !s.is_identity())
        .collect();
    let mut best: Option<(usize, MajoranaSet)> = None;
    let mut chosen: Vec<PauliString> = Vec::new();
    search(&pool, 2 * modes, vacuum, &mut chosen, &mut best);
    best
}

fn search(
    pool: &[PauliString],
    target: usize,
    vacuum: bool,
    chosen: &mut Vec<PauliString>,
    best: &mut Option<(usize, MajoranaSet)>,
) {
    if chosen.len() == target {
        let enc = MajoranaSet::new(chosen.clone()).expect("even count");
        if verify(&enc, vacuum).is_clean() {
            let w = enc.independent_weight();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                *best = Some((w, enc));
            }
        }
        return;
    }
    for s in pool {
        if chosen.iter().all(|c| c.anticommutes_unchecked(s)) {
            chosen.push(s.clone());
            search(pool, target, vacuum, chosen, best);
            chosen.pop();
        }
    }
}

/// Fraction of random nonempty subsets whose product is the identity on
/// qubits `1..=n`, pooled over `samples` with `subsets_per_sample` draws each.
pub fn ak_event_rate(
    samples: &[MajoranaSet],
    n: usize,
    subsets_per_sample: usize,
    seed: u64,
) -> f64 {
    assert!(!samples.is_empty(), "need at least one sample");
    if n == 0 {
        return 1.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut total = 0usize;
    for enc in samples {
        assert!(n <= enc.modes(), "n = {n} exceeds {} modes", enc.modes());
        let m = enc.strings().len();
        for _ in 0..subsets_per_sample {
            let subset: Vec<usize> = loop {
                let s: Vec<usize> = (1..=m).filter(|_| rng.random::<bool>()).collect();
                if !s.is_empty() {
                    break s;
                }
            };
            let p = enc.product(&subset);
            if (1..=n).all(|q| p.get(q).is_identity()) {
                hits += 1;
            }
            total += 1;
        }
    }
    hits as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jw_examples() {
        let jw2: Vec<String> = jordan_wigner(2)
            .strings()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(jw2, ["IY", "IX", "YZ", "XZ"]);
        let jw1: Vec<String> = jordan_wigner(1)
            .strings()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(jw1, ["Y", "X"]);
        for n in 1..=16 {
            assert_eq!(jordan_wigner(n).independent_weight(), n * (n + 1));
        }
    }

    #[test]
    fn jw_passes_verify_with_vacuum() {
        for n in 1..=10 {
            let r = verify(&jordan_wigner(n), true);
            assert!(r.is_clean(), "N={n}\n{r}");
        }
    }

    #[test]
    fn bk_small_cases() {
        assert_eq!(bravyi_kitaev(1), jordan_wigner(1));
        let s: Vec<String> = bravyi_kitaev(2)
            .strings()
            .iter()
            .map(|s| s.to_string())
            .collect();
        // qubit 2 stores n1 + n2
        assert_eq!(s, ["XY", "XX", "YI", "XZ"]);
    }

    #[test]
    fn bk_is_valid() {
        for n in 1..=16 {
            let r = verify(&bravyi_kitaev(n), n <= 12);
            assert!(r.is_clean(), "N={n}\n{r}");
        }
    }

    #[test]
    fn bk_grows_logarithmically() {
        let avg = |e: MajoranaSet| e.independent_weight() as f64 / (2 * e.modes()) as f64;
        for n in [4, 8, 16] {
            let bk = avg(bravyi_kitaev(n));
            let jw = avg(jordan_wigner(n));
            assert!(bk <= (n as f64).log2() + 1.0, "N={n} bk={bk}");
            assert!((jw - (n as f64 + 1.0) / 2.0).abs() < 1e-12);
        }
        assert!(avg(bravyi_kitaev(16)) < avg(jordan_wigner(16)));
    }

    #[test]
    fn exhaustive_optima() {
        assert_eq!(exhaustive_optimum(1, false).unwrap().0, 2);
        assert_eq!(exhaustive_optimum(1, true).unwrap().0, 2);
        assert_eq!(exhaustive_optimum(2, false).unwrap().0, 6);
        assert_eq!(exhaustive_optimum(2, true).unwrap().0, 6);
    }

    #[test]
    fn ak_rate_edge_cases() {
        let s = vec![jordan_wigner(3)];
        assert_eq!(ak_event_rate(&s, 0, 10, 1), 1.0);
        let r = ak_event_rate(&s, 1, 4000, 1);
        assert!((r - 0.25).abs() < 0.05, "{r}");
    }
}
