#![allow(dead_code)]

use std::time::Duration;

use fermenc::encode::CnfInstance;
use fermenc::solve::{SatBackend, SolveOutcome};
use fermenc::SolverError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// CaDiCaL linked into the test binary. A nonzero seed shuffles the clause
/// order before solving.
pub struct InProcess {
    pub timeout: Option<Duration>,
}

impl InProcess {
    pub fn new() -> Self {
        InProcess { timeout: None }
    }
}

impl SatBackend for InProcess {
    fn solve(&self, cnf: &CnfInstance, seed: Option<u64>) -> Result<SolveOutcome, SolverError> {
        let mut solver: cadical::Solver = cadical::Solver::new();
        let mut order: Vec<usize> = (0..cnf.len()).collect();
        if let Some(s) = seed.filter(|&s| s != 0) {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
        }
        for i in order {
            solver.add_clause(cnf.clauses()[i].iter().copied());
        }
        if let Some(t) = self.timeout {
            solver.set_callbacks(Some(cadical::Timeout::new(t.as_secs_f32())));
        }
        Ok(match solver.solve() {
            Some(true) => {
                let lits = (1..=cnf.var_count() as i32)
                    .map(|v| if solver.value(v) == Some(true) { v } else { -v })
                    .collect();
                SolveOutcome::Sat(lits)
            }
            Some(false) => SolveOutcome::Unsat,
            None => SolveOutcome::Timeout,
        })
    }

    fn identity(&self) -> String {
        "in-process cadical".into()
    }

    fn supports_seed(&self) -> bool {
        true
    }
}
