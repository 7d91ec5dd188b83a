//! Minimal DIMACS front end to the bundled CaDiCaL library.
//!
//! Usage: `fermenc-cadical [--seed N] [--time-limit SECONDS] FILE.cnf`
//!
//! Prints `s SATISFIABLE` with `v` lines (exit 10), `s UNSATISFIABLE`
//! (exit 20) or `s UNKNOWN` (exit 0). A nonzero seed shuffles the clause
//! order before solving.

use std::process::ExitCode;

use clap::Parser;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fermenc::encode::parse_dimacs;

#[derive(Parser)]
#[command(name = "fermenc-cadical", version)]
struct Args {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    time_limit: Option<f32>,
    cnf: std::path::PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.cnf) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.cnf.display());
            return ExitCode::from(1);
        }
    };
    let cnf = match parse_dimacs(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", args.cnf.display());
            return ExitCode::from(1);
        }
    };

    let mut solver: cadical::Solver = cadical::Solver::new();
    println!("c {}", solver.signature());
    let mut order: Vec<usize> = (0..cnf.len()).collect();
    if args.seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(args.seed));
    }
    for i in order {
        solver.add_clause(cnf.clauses()[i].iter().copied());
    }
    if let Some(t) = args.time_limit {
        solver.set_callbacks(Some(cadical::Timeout::new(t)));
    }

    match solver.solve() {
        Some(true) => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for v in 1..=cnf.var_count() as i32 {
                let l = if solver.value(v) == Some(false) {
                    -v
                } else {
                    v
                };
                line.push_str(&format!(" {l}"));
                if line.len() > 70 {
                    println!("{line}");
                    line = String::from("v");
                }
            }
            println!("{line} 0");
            ExitCode::from(10)
        }
        Some(false) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        None => {
            println!("s UNKNOWN");
            ExitCode::SUCCESS
        }
    }
}
