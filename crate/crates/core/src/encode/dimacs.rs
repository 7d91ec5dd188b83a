use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{self, Write};

use super::ClauseGroup;
use crate::error::{Error, Result};

/// A CNF instance in DIMACS literal convention with per-clause provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfInstance {
    var_count: u32,
    problem_vars: u32,
    clauses: Vec<Vec<i32>>,
    tags: Vec<ClauseGroup>,
}

impl CnfInstance {
    pub fn new(problem_vars: u32) -> Self {
        CnfInstance {
            var_count: problem_vars,
            problem_vars,
            ..Default::default()
        }
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    /// Variables `1..=problem_vars` are the Pauli bits; everything above is
    /// auxiliary.
    pub fn problem_vars(&self) -> u32 {
        self.problem_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn tags(&self) -> &[ClauseGroup] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Raises the declared variable count (auxiliaries that ended up in no
    /// clause still count).
    pub fn reserve_vars(&mut self, count: u32) {
        self.var_count = self.var_count.max(count);
    }

    pub fn add_clause(&mut self, clause: Vec<i32>, group: ClauseGroup) {
        debug_assert!(clause.iter().all(|&l| l != 0), "zero literal in clause");
        if let Some(m) = clause.iter().map(|l| l.unsigned_abs()).max() {
            self.var_count = self.var_count.max(m);
        }
        self.clauses.push(clause);
        self.tags.push(group);
    }

    /// True iff `assignment` (indexed by variable, slot 0 unused) satisfies
    /// every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize] == (l > 0))
        })
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "p cnf {} {}", self.var_count, self.clauses.len())?;
        let mut line = String::new();
        for c in &self.clauses {
            line.clear();
            for l in c {
                let _ = write!(line, "{l} ");
            }
            line.push('0');
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn stats(&self) -> CnfStats {
        let mut per_group: BTreeMap<ClauseGroup, usize> = BTreeMap::new();
        for t in &self.tags {
            *per_group.entry(*t).or_default() += 1;
        }
        let literals: usize = self.clauses.iter().map(Vec::len).sum();
        CnfStats {
            vars: self.var_count as usize,
            clauses: self.clauses.len(),
            avg_vars_per_clause: if self.clauses.is_empty() {
                0.0
            } else {
                literals as f64 / self.clauses.len() as f64
            },
            per_group,
        }
    }
}

pub fn emit_dimacs(cnf: &CnfInstance) -> String {
    let mut buf = Vec::new();
    cnf.write_dimacs(&mut buf)
        .expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

/// Parses DIMACS CNF text. All clauses are tagged [`ClauseGroup::Other`] and
/// every variable is treated as a problem variable.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(u32, usize)> = None;
    let mut cnf = CnfInstance::default();
    let mut current: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 3 || f[0] != "cnf" {
                return Err(Error::parse(i + 1, "malformed `p cnf` header"));
            }
            let vars = f[1]
                .parse()
                .map_err(|_| Error::parse(i + 1, "bad variable count"))?;
            let clauses = f[2]
                .parse()
                .map_err(|_| Error::parse(i + 1, "bad clause count"))?;
            header = Some((vars, clauses));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| Error::parse(i + 1, "clause before header"))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad literal {tok:?}")))?;
            if l == 0 {
                cnf.add_clause(std::mem::take(&mut current), ClauseGroup::Other);
            } else {
                if l.unsigned_abs() > vars {
                    return Err(Error::parse(i + 1, format!("literal {l} exceeds {vars}")));
                }
                current.push(l);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        cnf.add_clause(current, ClauseGroup::Other);
    }
    if cnf.len() != count {
        return Err(Error::parse(
            0,
            format!("header declares {count} clauses, found {}", cnf.len()),
        ));
    }
    cnf.var_count = vars;
    cnf.problem_vars = vars;
    Ok(cnf)
}

/// Size summary in the shape of the usual vars / clauses / literals-per-clause
/// report.
#[derive(Clone, Debug, PartialEq)]
pub struct CnfStats {
    pub vars: usize,
    pub clauses: usize,
    pub avg_vars_per_clause: f64,
    pub per_group: BTreeMap<ClauseGroup, usize>,
}

impl fmt::Display for CnfStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#Vars: {}", self.vars)?;
        writeln!(f, "#Clauses: {}", self.clauses)?;
        writeln!(f, "Average #Vars/#Clauses: {:.2}", self.avg_vars_per_clause)?;
        for (g, n) in &self.per_group {
            writeln!(f, "  {g}: {n}")?;
        }
        Ok(())
    }
}
