//! Dense GF(2) elimination over packed `u64` rows.

/// Incremental row-echelon basis that remembers which input rows each basis
/// vector is made of, so a dependency can be reported as a subset.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    /// (pivot bit, reduced row, combination of input rows)
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

fn pivot(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], b: usize) -> bool {
    (v[b / 64] >> (b % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl Gf2Basis {
    pub fn new() -> Self {
        Gf2Basis::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the next input row. Returns the indices (0-based, in insertion
    /// order) of a subset of inputs XOR-ing to zero if `row` is dependent
    /// on the rows before it; the basis is left unchanged in that case.
    pub fn insert(&mut self, row: &[u64]) -> Option<Vec<usize>> {
        let index = self.inserted;
        self.inserted += 1;
        let mut v = row.to_vec();
        let mut combo = vec![0u64; (index + 1).div_ceil(64).max(1)];
        combo[index / 64] |= 1 << (index % 64);
        for (p, r, c) in &self.rows {
            if bit(&v, *p) {
                xor_into(&mut v, r);
                if combo.len() < c.len() {
                    combo.resize(c.len(), 0);
                }
                xor_into(&mut combo, c);
            }
        }
        match pivot(&v) {
            Some(p) => {
                self.rows.push((p, v, combo));
                None
            }
            None => Some(
                (0..=index)
                    .filter(|&i| i / 64 < combo.len() && bit(&combo, i))
                    .collect(),
            ),
        }
    }
}

/// Rank of the given rows.
pub fn rank(rows: &[Vec<u64>]) -> usize {
    let mut b = Gf2Basis::new();
    for r in rows {
        b.insert(r);
    }
    b.rank()
}

/// Some nonempty subset of `rows` (0-based indices) summing to zero, if any.
pub fn find_dependency(rows: &[Vec<u64>]) -> Option<Vec<usize>> {
    let mut b = Gf2Basis::new();
    rows.iter().find_map(|r| b.insert(r))
}
