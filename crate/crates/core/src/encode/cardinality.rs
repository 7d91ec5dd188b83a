//! "At most k of these literals are true" as CNF.
//!
//! Both encodings only emit the upward implications needed for an upper
//! bound, so any assignment that respects the bound extends to a model.

/// Which counting circuit realizes an at-most constraint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CardinalityEncoding {
    /// Balanced totalizer with outputs capped at `k + 1`.
    #[default]
    Totalizer,
    /// Sinz sequential counter; `O(n·k)` auxiliaries and clauses.
    SequentialCounter,
}

impl std::str::FromStr for CardinalityEncoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "totalizer" => Ok(CardinalityEncoding::Totalizer),
            "seqcounter" | "sequential-counter" => Ok(CardinalityEncoding::SequentialCounter),
            other => Err(format!("unknown cardinality encoding {other:?}")),
        }
    }
}

/// Appends clauses forcing at most `bound` of `lits` to be true. Fresh
/// variables are taken from `next_var`, which is advanced past them.
pub fn encode_at_most(
    lits: &[i32],
    bound: usize,
    encoding: CardinalityEncoding,
    next_var: &mut u32,
    clauses: &mut Vec<Vec<i32>>,
) {
    if bound >= lits.len() {
        return;
    }
    if bound == 0 {
        clauses.extend(lits.iter().map(|&l| vec![-l]));
        return;
    }
    match encoding {
        CardinalityEncoding::Totalizer => totalizer(lits, bound, next_var, clauses),
        CardinalityEncoding::SequentialCounter => {
            sequential_counter(lits, bound, next_var, clauses)
        }
    }
}

fn fresh(next_var: &mut u32) -> i32 {
    let v = *next_var;
    *next_var += 1;
    v as i32
}

/// Unary count outputs of a totalizer subtree: `out[i]` is implied by "at
/// least `i + 1` inputs are true". Capped at `cap` outputs.
fn totalizer_node(
    lits: &[i32],
    cap: usize,
    next_var: &mut u32,
    clauses: &mut Vec<Vec<i32>>,
) -> Vec<i32> {
    if lits.len() == 1 {
        return vec![lits[0]];
    }
    let mid = lits.len() / 2;
    let left = totalizer_node(&lits[..mid], cap, next_var, clauses);
    let right = totalizer_node(&lits[mid..], cap, next_var, clauses);
    let width = (left.len() + right.len()).min(cap);
    let out: Vec<i32> = (0..width).map(|_| fresh(next_var)).collect();
    for i in 0..=left.len() {
        for j in 0..=right.len() {
            let sum = i + j;
            if sum == 0 || sum > width {
                continue;
            }
            let mut clause = Vec::with_capacity(3);
            if i > 0 {
                clause.push(-left[i - 1]);
            }
            if j > 0 {
                clause.push(-right[j - 1]);
            }
            clause.push(out[sum - 1]);
            clauses.push(clause);
        }
    }
    out
}

fn totalizer(lits: &[i32], bound: usize, next_var: &mut u32, clauses: &mut Vec<Vec<i32>>) {
    let out = totalizer_node(lits, bound + 1, next_var, clauses);
    clauses.push(vec![-out[bound]]);
}

fn sequential_counter(lits: &[i32], bound: usize, next_var: &mut u32, clauses: &mut Vec<Vec<i32>>) {
    let n = lits.len();
    let k = bound;
    // s[i][j]: at least j+1 of the first i+1 inputs are true.
    let s: Vec<Vec<i32>> = (0..n - 1)
        .map(|_| (0..k).map(|_| fresh(next_var)).collect())
        .collect();
    clauses.push(vec![-lits[0], s[0][0]]);
    for j in 1..k {
        clauses.push(vec![-s[0][j]]);
    }
    for i in 1..n - 1 {
        clauses.push(vec![-lits[i], s[i][0]]);
        clauses.push(vec![-s[i - 1][0], s[i][0]]);
        for j in 1..k {
            clauses.push(vec![-lits[i], -s[i - 1][j - 1], s[i][j]]);
            clauses.push(vec![-s[i - 1][j], s[i][j]]);
        }
        clauses.push(vec![-lits[i], -s[i - 1][k - 1]]);
    }
    clauses.push(vec![-lits[n - 1], -s[n - 2][k - 1]]);
}
