//! Descending weight search on top of an external CNF solver.

mod external;

use std::path::PathBuf;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

pub use external::{ExternalSolver, SOLVER_ENV};

use crate::baselines::{bravyi_kitaev, verify};
use crate::encode::{
    compile, decode_assignment, emit_dimacs, ClauseGroup, CnfInstance, EncodingConfig, Objective,
    VacuumEncoding, VarMap,
};
use crate::error::{Error, Result, SolverError};
use crate::fermion::MajoranaSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Literals of a satisfying assignment.
    Sat(Vec<i32>),
    Unsat,
    Timeout,
}

/// Anything that decides a [`CnfInstance`].
pub trait SatBackend: Send + Sync {
    fn solve(
        &self,
        cnf: &CnfInstance,
        seed: Option<u64>,
    ) -> std::result::Result<SolveOutcome, SolverError>;

    /// Human-readable description recorded in run manifests.
    fn identity(&self) -> String;

    /// Whether `seed` actually influences the search.
    fn supports_seed(&self) -> bool {
        false
    }
}

pub fn run_solver(
    backend: &dyn SatBackend,
    cnf: &CnfInstance,
) -> std::result::Result<SolveOutcome, SolverError> {
    backend.solve(cnf, None)
}

/// Parses SAT-competition style output. Exit codes 10 and 20 stand in for a
/// missing status line.
pub fn parse_solver_output(
    text: &str,
    exit_code: Option<i32>,
) -> std::result::Result<SolveOutcome, SolverError> {
    let mut status: Option<&str> = None;
    let mut lits = Vec::new();
    let mut saw_values = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim());
        } else if let Some(rest) = line.strip_prefix('v') {
            saw_values = true;
            for tok in rest.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| SolverError::Malformed(format!("bad value literal {tok:?}")))?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    let status = match (status, exit_code) {
        (Some(s), _) => s,
        (None, Some(10)) => "SATISFIABLE",
        (None, Some(20)) => "UNSATISFIABLE",
        (None, code) => {
            return Err(SolverError::Malformed(format!(
                "no status line (exit code {code:?})"
            )))
        }
    };
    match status {
        "SATISFIABLE" if saw_values => Ok(SolveOutcome::Sat(lits)),
        "SATISFIABLE" => Err(SolverError::Malformed("SAT without a model".into())),
        "UNSATISFIABLE" => Ok(SolveOutcome::Unsat),
        "UNKNOWN" | "INDETERMINATE" => Ok(SolveOutcome::Timeout),
        other => Err(SolverError::Malformed(format!("unknown status {other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentStatus {
    /// The solver refuted `weight - 1`.
    ProvenOptimal,
    /// The solver gave up at this bound; the optimum may be lower.
    TimedOutAtBound(usize),
}

#[derive(Clone, Debug)]
pub struct DescentOptions {
    /// Starting bound; defaults to the Bravyi-Kitaev weight.
    pub initial_bound: Option<usize>,
    /// Largest bound tried while relaxing an infeasible start; defaults to
    /// the largest possible objective value.
    pub relax_cap: Option<usize>,
    /// Wall-clock budget checked between solver calls.
    pub time_budget: Option<Duration>,
    pub seed: Option<u64>,
    /// Directory that receives every instance as `step-<i>-bound-<w>.cnf`.
    pub emit_cnf_dir: Option<PathBuf>,
    /// Known valid encoding. The search starts one below its weight, ignoring
    /// `initial_bound`, and falls back to it if the solver finds nothing
    /// better.
    pub incumbent: Option<MajoranaSet>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            initial_bound: None,
            relax_cap: None,
            time_budget: None,
            seed: Some(0),
            emit_cnf_dir: None,
            incumbent: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub best: MajoranaSet,
    pub weight: usize,
    pub status: DescentStatus,
    /// Solver calls made.
    pub iterations: usize,
    pub wall_time: Duration,
    /// Accepted weights, strictly decreasing.
    pub history: Vec<usize>,
    pub seed: Option<u64>,
    /// False when the backend ignores seeds.
    pub deterministic: bool,
}

/// Upper limit of the objective for `cfg`.
fn max_objective(cfg: &EncodingConfig) -> usize {
    let n = cfg.modes;
    match &cfg.objective {
        Objective::Independent => 2 * n * n,
        Objective::Dependent(m) => m.weighted_products().iter().map(|(_, k)| k * n).sum(),
    }
}

/// Checks a decoded encoding against the families enabled in `cfg`.
pub fn check_solution(enc: &MajoranaSet, cfg: &EncodingConfig) -> Result<()> {
    let vacuum = cfg.vacuum && cfg.vacuum_encoding == VacuumEncoding::Exact;
    let report = verify(enc, vacuum);
    let independence_required = cfg.algebraic_independence;
    if !report.anticommutation_ok()
        || (independence_required && !report.independence_ok())
        || !report.vacuum_ok()
    {
        return Err(Error::Verification(report.to_string()));
    }
    Ok(())
}

/// Solves at decreasing bounds until the solver refutes one.
pub fn descent_solve(
    cfg: &EncodingConfig,
    backend: &dyn SatBackend,
    opts: &DescentOptions,
) -> Result<DescentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let mut bound = match opts.initial_bound {
        Some(b) => b,
        None => cfg.objective.weight(&bravyi_kitaev(cfg.modes))?,
    };
    let mut best: Option<(MajoranaSet, usize)> = None;
    let mut history = Vec::new();
    if let Some(enc) = &opts.incumbent {
        if enc.modes() != cfg.modes {
            return Err(Error::InvalidArgument(
                "incumbent has the wrong mode count".into(),
            ));
        }
        check_solution(enc, cfg)?;
        let w = cfg.objective.weight(enc)?;
        history.push(w);
        if w == 0 {
            return Ok(DescentResult {
                best: enc.clone(),
                weight: 0,
                status: DescentStatus::ProvenOptimal,
                iterations: 0,
                wall_time: start.elapsed(),
                history,
                seed: opts.seed,
                deterministic: backend.supports_seed(),
            });
        }
        bound = w - 1;
        best = Some((enc.clone(), w));
    }
    let cap = opts
        .relax_cap
        .unwrap_or_else(|| max_objective(cfg))
        .max(bound);
    let mut iterations = 0;
    if let Some(dir) = &opts.emit_cnf_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }

    let finish = |best: (MajoranaSet, usize), status, iterations, history| DescentResult {
        best: best.0,
        weight: best.1,
        status,
        iterations,
        wall_time: start.elapsed(),
        history,
        seed: opts.seed,
        deterministic: backend.supports_seed(),
    };

    loop {
        if let (Some(budget), Some(b)) = (opts.time_budget, &best) {
            if start.elapsed() >= budget {
                return Ok(finish(
                    b.clone(),
                    DescentStatus::TimedOutAtBound(bound),
                    iterations,
                    history,
                ));
            }
        }
        let (cnf, vm) = compile(&cfg.with_bound(bound))?;
        if let Some(dir) = &opts.emit_cnf_dir {
            let path = dir.join(format!("step-{iterations}-bound-{bound}.cnf"));
            std::fs::write(&path, emit_dimacs(&cnf)).map_err(|e| Error::io(&path, e))?;
        }
        iterations += 1;
        match backend.solve(&cnf, opts.seed)? {
            SolveOutcome::Sat(lits) => {
                let enc = decode_assignment(&vm, &lits)?;
                check_solution(&enc, cfg)?;
                let w = cfg.objective.weight(&enc)?;
                if w > bound {
                    return Err(Error::Verification(format!(
                        "solver model has weight {w} above bound {bound}"
                    )));
                }
                history.push(w);
                best = Some((enc, w));
                if w == 0 {
                    let b = best.take().expect("just set");
                    return Ok(finish(b, DescentStatus::ProvenOptimal, iterations, history));
                }
                bound = w - 1;
            }
            SolveOutcome::Unsat => match best.take() {
                Some(b) => return Ok(finish(b, DescentStatus::ProvenOptimal, iterations, history)),
                None => {
                    if bound >= cap {
                        return Err(Error::Infeasible { bound });
                    }
                    bound = (bound + 2 * cfg.modes).min(cap);
                }
            },
            SolveOutcome::Timeout => match best.take() {
                Some(b) => {
                    return Ok(finish(
                        b,
                        DescentStatus::TimedOutAtBound(bound),
                        iterations,
                        history,
                    ))
                }
                None => return Err(SolverError::TimedOutWithoutModel.into()),
            },
        }
    }
}

/// Runs one descent per seed concurrently and keeps the lowest weight; ties
/// go to whichever run finished first. Fails only if every run fails.
pub fn portfolio_descent(
    cfg: &EncodingConfig,
    backend: &dyn SatBackend,
    opts: &DescentOptions,
    seeds: &[u64],
) -> Result<DescentResult> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "portfolio needs at least one seed".into(),
        ));
    }
    let (tx, rx) = mpsc::channel();
    thread::scope(|scope| {
        for &seed in seeds {
            let tx = tx.clone();
            let opts = DescentOptions {
                seed: Some(seed),
                emit_cnf_dir: opts
                    .emit_cnf_dir
                    .as_ref()
                    .map(|d| d.join(format!("seed-{seed}"))),
                ..opts.clone()
            };
            scope.spawn(move || {
                let _ = tx.send(descent_solve(cfg, backend, &opts));
            });
        }
    });
    drop(tx);
    let mut best: Option<DescentResult> = None;
    let mut first_err: Option<Error> = None;
    for r in rx {
        match r {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.weight < b.weight) {
                    best = Some(r);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.expect("at least one run"))
}

/// Up to `limit` distinct solutions of `cfg`, each excluded from later
/// solver calls by a clause over all problem variables.
pub fn enumerate_solutions(
    cfg: &EncodingConfig,
    backend: &dyn SatBackend,
    limit: usize,
    seed: Option<u64>,
) -> Result<Vec<MajoranaSet>> {
    let (mut cnf, vm) = compile(cfg)?;
    let mut out = Vec::new();
    while out.len() < limit {
        match backend.solve(&cnf, seed)? {
            SolveOutcome::Sat(lits) => {
                let enc = decode_assignment(&vm, &lits)?;
                cnf.add_clause(blocking_clause(&vm, &enc), ClauseGroup::Blocking);
                out.push(enc);
            }
            SolveOutcome::Unsat => break,
            SolveOutcome::Timeout if out.is_empty() => {
                return Err(SolverError::TimedOutWithoutModel.into())
            }
            SolveOutcome::Timeout => break,
        }
    }
    Ok(out)
}

/// Clause violated exactly by the assignment that encodes `enc`.
pub fn blocking_clause(vm: &VarMap, enc: &MajoranaSet) -> Vec<i32> {
    vm.assignment_of(enc).into_iter().map(|l| -l).collect()
}
