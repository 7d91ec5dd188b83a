//! Fermionic Hamiltonian models and Majorana encodings.
//!
//! A model only carries term structure. Coefficients never influence Pauli
//! weight, so they are not represented.
//!
//! Model files look like:
//!
//! ```text
//! h2 2 ac
//! 1 -1
//! 2 -2
//! ```
//!
//! The header names the model, the number of modes and the operator format.
//! In `ac` models positive integers are creation operators and negative ones
//! annihilation operators; in `mj` models every integer is a Majorana index in
//! `1..=2N`. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelFormat {
    /// Creation/annihilation operators.
    Ac,
    /// Majorana operators.
    Mj,
}

impl fmt::Display for ModelFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelFormat::Ac => "ac",
            ModelFormat::Mj => "mj",
        })
    }
}

impl FromStr for ModelFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ac" => Ok(ModelFormat::Ac),
            "mj" => Ok(ModelFormat::Mj),
            other => Err(Error::parse(1, format!("unknown model format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianModel {
    pub name: String,
    pub modes: usize,
    pub format: ModelFormat,
    pub terms: Vec<Vec<i32>>,
}

impl HamiltonianModel {
    pub fn new(
        name: impl Into<String>,
        modes: usize,
        format: ModelFormat,
        terms: Vec<Vec<i32>>,
    ) -> Result<Self> {
        let model = HamiltonianModel {
            name: name.into(),
            modes,
            format,
            terms,
        };
        for (i, term) in model.terms.iter().enumerate() {
            model.check_term(term).map_err(|m| Error::parse(i + 2, m))?;
        }
        if modes == 0 {
            return Err(Error::parse(1, "model must have at least one mode"));
        }
        Ok(model)
    }

    fn check_term(&self, term: &[i32]) -> std::result::Result<(), String> {
        if term.is_empty() {
            return Err("empty term".into());
        }
        let n = self.modes as i64;
        for &v in term {
            let v = v as i64;
            match self.format {
                ModelFormat::Ac if v == 0 => return Err("zero index in ac term".into()),
                ModelFormat::Ac if v.abs() > n => {
                    return Err(format!("index {v} out of range for {n} modes"))
                }
                ModelFormat::Mj if v <= 0 => return Err(format!("nonpositive Majorana index {v}")),
                ModelFormat::Mj if v > 2 * n => {
                    return Err(format!("Majorana index {v} out of range 1..={}", 2 * n))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Every Majorana product the model expands to, in term order, with
    /// repetitions and empty products kept.
    pub fn expanded_products(&self) -> Vec<MajoranaProduct> {
        let mut out = Vec::new();
        for term in &self.terms {
            match self.format {
                ModelFormat::Ac => out.extend(expand_term(term)),
                ModelFormat::Mj => {
                    out.push(MajoranaProduct::reduce(term.iter().map(|&v| v as usize)))
                }
            }
        }
        out
    }

    /// Non-empty products with their multiplicities, in first-seen order.
    pub fn weighted_products(&self) -> Vec<(MajoranaProduct, usize)> {
        let mut index: BTreeMap<MajoranaProduct, usize> = BTreeMap::new();
        let mut out: Vec<(MajoranaProduct, usize)> = Vec::new();
        for p in self.expanded_products() {
            if p.is_empty() {
                continue;
            }
            match index.get(&p) {
                Some(&i) => out[i].1 += 1,
                None => {
                    index.insert(p.clone(), out.len());
                    out.push((p, 1));
                }
            }
        }
        out
    }
}

pub fn parse_model(text: &str) -> Result<HamiltonianModel> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::parse(
            hline,
            "header must be `<name> <modes> <ac|mj>`",
        ));
    }
    let modes: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(hline, format!("invalid mode count {:?}", fields[1])))?;
    if modes == 0 {
        return Err(Error::parse(hline, "model must have at least one mode"));
    }
    let format: ModelFormat = fields[2]
        .parse()
        .map_err(|_| Error::parse(hline, format!("unknown model format {:?}", fields[2])))?;
    let mut model = HamiltonianModel {
        name: fields[0].to_string(),
        modes,
        format,
        terms: Vec::new(),
    };
    for (line, body) in lines {
        let term = body
            .split_whitespace()
            .map(|t| {
                t.parse::<i32>()
                    .map_err(|_| Error::parse(line, format!("invalid integer {t:?}")))
            })
            .collect::<Result<Vec<i32>>>()?;
        model.check_term(&term).map_err(|m| Error::parse(line, m))?;
        model.terms.push(term);
    }
    Ok(model)
}

pub fn format_model(model: &HamiltonianModel) -> String {
    model.to_string()
}

impl fmt::Display for HamiltonianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.name, self.modes, self.format)?;
        for term in &self.terms {
            let parts: Vec<String> = term.iter().map(i32::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for HamiltonianModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_model(s)
    }
}

/// Four-body SYK structure: one term per 4-subset of the `2N` Majoranas.
pub fn gen_syk(modes: usize) -> Result<HamiltonianModel> {
    if modes < 2 {
        return Err(Error::InvalidArgument(
            "SYK model needs at least 2 modes".into(),
        ));
    }
    let m = 2 * modes as i32;
    let mut terms = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                for l in k + 1..=m {
                    terms.push(vec![i, j, k, l]);
                }
            }
        }
    }
    HamiltonianModel::new(format!("syk{modes}"), modes, ModelFormat::Mj, terms)
}

/// 1-D periodic Fermi-Hubbard chain with `sites` sites.
///
/// Mode `2m-1` is site `m` spin up and mode `2m` is site `m` spin down.
pub fn gen_hubbard(sites: usize) -> Result<HamiltonianModel> {
    if sites < 2 {
        return Err(Error::InvalidArgument(
            "Hubbard chain needs at least 2 sites".into(),
        ));
    }
    let up = |m: usize| (2 * m - 1) as i32;
    let down = |m: usize| (2 * m) as i32;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for m in 1..=sites {
        let next = m % sites + 1;
        let edge = (m.min(next), m.max(next));
        if !edges.contains(&edge) {
            edges.push(edge);
        }
    }

    let mut terms = Vec::new();
    for &(a, b) in &edges {
        for mode in [up, down] {
            let (i, j) = (mode(a), mode(b));
            terms.push(vec![i, -j]);
            terms.push(vec![j, -i]);
        }
    }
    for m in 1..=sites {
        terms.push(vec![up(m), -up(m), down(m), -down(m)]);
    }
    HamiltonianModel::new(format!("hubbard{sites}"), 2 * sites, ModelFormat::Ac, terms)
}

/// Experimental electronic-structure skeleton: every `a†_i a_j` and every
/// `a†_i a†_j a_k a_l` with pairwise distinct indices. Real molecules keep only
/// a subset of these terms.
pub fn gen_electronic(modes: usize) -> Result<HamiltonianModel> {
    if modes == 0 {
        return Err(Error::InvalidArgument(
            "electronic model needs at least 1 mode".into(),
        ));
    }
    let n = modes as i32;
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            terms.push(vec![i, -j]);
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let idx = [i, j, k, l];
                    let distinct = (0..4).all(|a| (a + 1..4).all(|b| idx[a] != idx[b]));
                    if distinct {
                        terms.push(vec![i, j, -k, -l]);
                    }
                }
            }
        }
    }
    HamiltonianModel::new(format!("electronic{modes}"), modes, ModelFormat::Ac, terms)
}

/// A product of Majorana operators with even multiplicities cancelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MajoranaProduct(Vec<usize>);

impl MajoranaProduct {
    pub fn reduce<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        let mut out = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j < v.len() && v[j] == v[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(v[i]);
            }
            i = j;
        }
        MajoranaProduct(out)
    }

    /// Sorted, distinct 1-based Majorana indices.
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// Expands a creation/annihilation product into its `2^d` Majorana products.
///
/// Each operator on mode `m` contributes either `M_{2m}` or `M_{2m-1}`; the
/// first operator varies slowest and `M_{2m}` comes before `M_{2m-1}`.
pub fn expand_term(term: &[i32]) -> Vec<MajoranaProduct> {
    let d = term.len();
    let mut out = Vec::with_capacity(1 << d);
    for choice in 0..(1usize << d) {
        let indices = term.iter().enumerate().map(|(pos, &v)| {
            let m = v.unsigned_abs() as usize;
            let odd = (choice >> (d - 1 - pos)) & 1 == 1;
            if odd {
                2 * m - 1
            } else {
                2 * m
            }
        });
        out.push(MajoranaProduct::reduce(indices));
    }
    out
}

/// `2N` Pauli strings `P_1..P_2N`, paired so that
/// `a_j = (P_{2j} + i P_{2j-1}) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MajoranaSet {
    modes: usize,
    strings: Vec<PauliString>,
}

impl MajoranaSet {
    pub fn new(strings: Vec<PauliString>) -> Result<Self> {
        if strings.is_empty() || strings.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "a Majorana set needs an even, nonzero number of strings, got {}",
                strings.len()
            )));
        }
        let modes = strings.len() / 2;
        for s in &strings {
            if s.len() != modes {
                return Err(Error::LengthMismatch {
                    left: s.len(),
                    right: modes,
                });
            }
        }
        Ok(MajoranaSet { modes, strings })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    /// `P_k` for 1-based `k`.
    pub fn get(&self, k: usize) -> &PauliString {
        &self.strings[k - 1]
    }

    /// Sum of the weights of all `2N` strings.
    pub fn independent_weight(&self) -> usize {
        self.strings.iter().map(PauliString::weight).sum()
    }

    /// Exchanges the Majorana pairs of modes `x` and `y` (both 1-based).
    pub fn swap_modes(&mut self, x: usize, y: usize) -> Result<()> {
        let n = self.modes;
        for v in [x, y] {
            if v == 0 || v > n {
                return Err(Error::InvalidArgument(format!(
                    "mode {v} out of range 1..={n}"
                )));
            }
        }
        self.strings.swap(2 * x - 1, 2 * y - 1);
        self.strings.swap(2 * x - 2, 2 * y - 2);
        Ok(())
    }

    /// Phaseless product of the listed strings (1-based indices).
    pub fn product(&self, indices: &[usize]) -> PauliString {
        let mut acc = PauliString::identity(self.modes);
        for &k in indices {
            acc.mul_assign_unchecked(self.get(k));
        }
        acc
    }

    /// Parses the encoding file format: `modes N` followed by `2N` strings.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `modes N` header"))?;
        let modes = header
            .strip_prefix("modes")
            .map(str::trim)
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::parse(hline, "header must be `modes N`"))?;
        let mut strings = Vec::with_capacity(2 * modes);
        for (line, body) in lines {
            let s: PauliString = body.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(line, message),
                other => other,
            })?;
            if s.len() != modes {
                return Err(Error::parse(
                    line,
                    format!("string {body} has length {}, expected {modes}", s.len()),
                ));
            }
            strings.push(s);
        }
        if strings.len() != 2 * modes {
            return Err(Error::parse(
                hline,
                format!("expected {} strings, found {}", 2 * modes, strings.len()),
            ));
        }
        MajoranaSet::new(strings)
    }
}

impl fmt::Display for MajoranaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modes {}", self.modes)?;
        for s in &self.strings {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for MajoranaSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MajoranaSet::parse(s)
    }
}

/// Precomputed product table for repeated weight evaluation of one model.
#[derive(Clone, Debug)]
pub struct WeightTable {
    modes: usize,
    products: Vec<(Vec<usize>, usize)>,
}

impl WeightTable {
    pub fn new(model: &HamiltonianModel) -> Self {
        WeightTable {
            modes: model.modes,
            products: model
                .weighted_products()
                .into_iter()
                .map(|(p, m)| (p.indices().to_vec(), m))
                .collect(),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn weight(&self, enc: &MajoranaSet) -> Result<usize> {
        if enc.modes() != self.modes {
            return Err(Error::ModeMismatch {
                encoding: enc.modes(),
                model: self.modes,
            });
        }
        Ok(self
            .products
            .iter()
            .map(|(idx, mult)| enc.product(idx).weight() * mult)
            .sum())
    }
}

/// Total Pauli weight of `model` under `enc`, counting every expanded
/// product as often as it occurs.
pub fn hamiltonian_weight(enc: &MajoranaSet, model: &HamiltonianModel) -> Result<usize> {
    WeightTable::new(model).weight(enc)
}
