use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fermenc::anneal::{anneal_restarts, AnnealConfig, RNG_ALGORITHM};
use fermenc::baselines::{bravyi_kitaev, jordan_wigner, verify};
use fermenc::circuit::hamiltonian_circuit;
use fermenc::encode::{compile, CardinalityEncoding, EncodingConfig, Objective, VacuumEncoding};
use fermenc::fermion::{
    gen_electronic, gen_hubbard, gen_syk, hamiltonian_weight, parse_model, HamiltonianModel,
    MajoranaSet,
};
use fermenc::solve::{
    descent_solve, portfolio_descent, DescentOptions, DescentStatus, ExternalSolver, SatBackend,
    SOLVER_ENV,
};
use fermenc::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_INFEASIBLE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "fermenc",
    version,
    about = "Minimum-weight Fermion-to-qubit encodings"
)]
struct Cli {
    /// Write the run manifest here instead of to stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveKind {
    Independent,
    Dependent,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Jw,
    Bk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelType {
    Syk,
    Hubbard,
    Electronic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CircuitFormat {
    Gates,
    Stats,
}

#[derive(Args, Clone, Debug)]
struct ConstraintArgs {
    #[arg(long)]
    modes: usize,
    /// Model file; implies the dependent objective.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    objective: Option<ObjectiveKind>,
    #[arg(long, value_enum, default_value = "on")]
    algebraic: Switch,
    #[arg(long, value_enum, default_value = "on")]
    vacuum: Switch,
    /// `exact` or `pair-witness`.
    #[arg(long, default_value = "exact")]
    vacuum_encoding: VacuumEncoding,
    /// `totalizer` or `seqcounter`.
    #[arg(long, default_value = "totalizer")]
    cardinality: CardinalityEncoding,
    /// Order P1 < P2; only allowed with `--vacuum off`.
    #[arg(long)]
    symmetry_breaking: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Descending SAT search for a minimum-weight encoding.
    Solve {
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// Solver command template (`{cnf}`, `{seed}` placeholders).
        #[arg(long)]
        solver: Option<String>,
        /// Per-call solver timeout in seconds.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        /// Overall wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run this many seeds concurrently and keep the best.
        #[arg(long, default_value_t = 1)]
        portfolio: u64,
        /// Starting bound instead of the Bravyi-Kitaev weight.
        #[arg(long)]
        initial_bound: Option<usize>,
        /// Encoding file to start from; the search only looks below its weight.
        #[arg(long)]
        incumbent: Option<PathBuf>,
        /// Give up relaxing an infeasible start beyond this bound.
        #[arg(long)]
        relax_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_cnf: Option<PathBuf>,
    },
    /// Improve the mode pairing of an encoding for a model.
    Anneal {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long, default_value_t = 100.0)]
        t0: f64,
        #[arg(long, default_value_t = 0.0)]
        t1: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jordan-Wigner or Bravyi-Kitaev reference encoding.
    Baseline {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independent weight, or Hamiltonian weight with `--model`.
    Weight {
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Check anticommutation, independence and optionally the vacuum.
    Verify {
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        vacuum: bool,
    },
    /// Write a benchmark model.
    GenModel {
        #[arg(long = "type", value_enum)]
        kind: ModelType,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate list or gate statistics of one Trotter step.
    Circuit {
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "gates")]
        format: CircuitFormat,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Size of the CNF instance for a configuration.
    CnfStats {
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// Weight bound; defaults to the Bravyi-Kitaev weight.
        #[arg(long)]
        bound: Option<usize>,
        /// Also write the instance in DIMACS form.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidArgument(_) => EXIT_USAGE,
            Error::Parse { .. }
            | Error::Io { .. }
            | Error::LengthMismatch { .. }
            | Error::ModeMismatch { .. } => EXIT_PARSE,
            Error::Solver(_) | Error::MissingVariable(_) => EXIT_SOLVER,
            Error::Verification(_) => EXIT_VERIFY,
            Error::Infeasible { .. } => EXIT_INFEASIBLE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: EXIT_PARSE,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> CliResult<HamiltonianModel> {
    Ok(parse_model(&read(path)?)?)
}

fn load_encoding(path: &Path) -> CliResult<MajoranaSet> {
    Ok(MajoranaSet::parse(&read(path)?)?)
}

fn encoding_config(c: &ConstraintArgs) -> CliResult<EncodingConfig> {
    let model = c.model.as_deref().map(load_model).transpose()?;
    let objective = match (c.objective, model) {
        (Some(ObjectiveKind::Dependent), None) => {
            return Err(usage("--objective dependent needs --model"))
        }
        (Some(ObjectiveKind::Independent), _) => Objective::Independent,
        (_, Some(m)) => Objective::Dependent(m),
        (None, None) => Objective::Independent,
    };
    let cfg = EncodingConfig {
        modes: c.modes,
        algebraic_independence: c.algebraic.on(),
        vacuum: c.vacuum.on(),
        vacuum_encoding: c.vacuum_encoding,
        objective,
        weight_bound: None,
        cardinality: c.cardinality,
        symmetry_breaking: c.symmetry_breaking,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn config_json(cfg: &EncodingConfig, c: &ConstraintArgs) -> Value {
    json!({
        "modes": cfg.modes,
        "objective": cfg.objective.name(),
        "model": c.model.as_ref().map(|p| p.display().to_string()),
        "algebraic_independence": cfg.algebraic_independence,
        "vacuum": cfg.vacuum,
        "vacuum_encoding": format!("{:?}", cfg.vacuum_encoding),
        "cardinality": format!("{:?}", cfg.cardinality),
        "symmetry_breaking": cfg.symmetry_breaking,
    })
}

/// Solver next to this executable, else on `PATH`.
fn default_solver() -> String {
    let name = if cfg!(windows) {
        "fermenc-cadical.exe"
    } else {
        "fermenc-cadical"
    };
    std::env::current_exe()
        .ok()
        .and_then(|p| p.parent().map(|d| d.join(name)))
        .filter(|p| p.exists())
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| name.to_owned())
}

fn solver_backend(flag: Option<&str>, timeout: f64) -> CliResult<ExternalSolver> {
    if !(timeout > 0.0) {
        return Err(usage("--timeout must be positive"));
    }
    let solver = match flag {
        Some(t) => ExternalSolver::new(t),
        None => ExternalSolver::from_env_or(&format!("{} --seed {{seed}}", default_solver())),
    };
    Ok(solver.with_timeout(Some(Duration::from_secs_f64(timeout))))
}

fn status_json(s: &DescentStatus) -> Value {
    match s {
        DescentStatus::ProvenOptimal => json!("proven-optimal"),
        DescentStatus::TimedOutAtBound(b) => json!({"timed-out-at-bound": b}),
    }
}

fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Solve {
            constraints,
            solver,
            timeout,
            time_budget,
            seed,
            portfolio,
            initial_bound,
            incumbent,
            relax_cap,
            out,
            emit_cnf,
        } => {
            let cfg = encoding_config(constraints)?;
            let backend = solver_backend(solver.as_deref(), *timeout)?;
            let opts = DescentOptions {
                initial_bound: *initial_bound,
                relax_cap: *relax_cap,
                time_budget: time_budget.map(Duration::from_secs_f64),
                seed: Some(*seed),
                emit_cnf_dir: emit_cnf.clone(),
                incumbent: incumbent.as_deref().map(load_encoding).transpose()?,
            };
            let seeds: Vec<u64> = (0..(*portfolio).max(1)).map(|i| seed + i).collect();
            let r = if seeds.len() == 1 {
                descent_solve(&cfg, &backend, &opts)?
            } else {
                portfolio_descent(&cfg, &backend, &opts, &seeds)?
            };
            write_or_print(out.as_deref(), &r.best.to_string())?;
            let status = match r.status {
                DescentStatus::ProvenOptimal => "proven optimal".to_owned(),
                DescentStatus::TimedOutAtBound(b) => format!("timed out at bound {b}"),
            };
            eprintln!(
                "weight {} ({status}) after {} solver calls in {:.2}s",
                r.weight,
                r.iterations,
                r.wall_time.as_secs_f64()
            );
            Ok(json!({
                "config": config_json(&cfg, constraints),
                "seeds": seeds,
                "solver": backend.identity(),
                "rng": RNG_ALGORITHM,
                "solver_timeout_s": timeout,
                "deterministic": r.deterministic,
                "result": {
                    "weight": r.weight,
                    "status": status_json(&r.status),
                    "iterations": r.iterations,
                    "history": r.history,
                    "seed": r.seed,
                },
                "outputs": {
                    "encoding": out.as_ref().map(|p| p.display().to_string()),
                    "cnf_dir": emit_cnf.as_ref().map(|p| p.display().to_string()),
                },
            }))
        }
        Command::Anneal {
            model,
            encoding,
            t0,
            t1,
            alpha,
            iters,
            k,
            seed,
            restarts,
            out,
        } => {
            let m = load_model(model)?;
            let enc = load_encoding(encoding)?;
            let cfg = AnnealConfig {
                t0: *t0,
                t1: *t1,
                alpha: *alpha,
                iters: *iters,
                k: *k,
                seed: *seed,
            };
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            let r = anneal_restarts(&enc, &m, &cfg, *restarts)?;
            write_or_print(out.as_deref(), &r.best.to_string())?;
            eprintln!("weight {} (from {})", r.weight, r.initial_weight);
            Ok(json!({
                "config": {"t0": t0, "t1": t1, "alpha": alpha, "iters": iters, "k": k,
                           "restarts": restarts, "model": model.display().to_string(),
                           "encoding": encoding.display().to_string()},
                "seeds": (0..(*restarts).max(1) as u64).map(|r| seed.wrapping_add(r)).collect::<Vec<_>>(),
                "rng": RNG_ALGORITHM,
                "result": {"weight": r.weight, "initial_weight": r.initial_weight,
                           "winning_seed": r.seed, "accepted": r.accepted, "proposed": r.proposed},
                "outputs": {"encoding": out.as_ref().map(|p| p.display().to_string())},
            }))
        }
        Command::Baseline { method, modes, out } => {
            if *modes == 0 {
                return Err(usage("--modes must be at least 1"));
            }
            let enc = match method {
                Method::Jw => jordan_wigner(*modes),
                Method::Bk => bravyi_kitaev(*modes),
            };
            write_or_print(out.as_deref(), &enc.to_string())?;
            Ok(json!({
                "config": {"method": format!("{method:?}").to_lowercase(), "modes": modes},
                "result": {"independent_weight": enc.independent_weight()},
                "outputs": {"encoding": out.as_ref().map(|p| p.display().to_string())},
            }))
        }
        Command::Weight { encoding, model } => {
            let enc = load_encoding(encoding)?;
            let w = match model {
                Some(m) => hamiltonian_weight(&enc, &load_model(m)?)?,
                None => enc.independent_weight(),
            };
            println!("{w}");
            Ok(json!({
                "config": {"encoding": encoding.display().to_string(),
                           "model": model.as_ref().map(|p| p.display().to_string())},
                "result": {"weight": w},
            }))
        }
        Command::Verify { encoding, vacuum } => {
            let enc = load_encoding(encoding)?;
            let report = verify(&enc, *vacuum);
            print!("{report}");
            if !report.is_clean() {
                return Err(Failure {
                    code: EXIT_VERIFY,
                    message: "verification failed".into(),
                });
            }
            Ok(json!({
                "config": {"encoding": encoding.display().to_string(), "vacuum": vacuum},
                "result": {"clean": true},
            }))
        }
        Command::GenModel {
            kind,
            modes,
            sites,
            out,
        } => {
            let model = match (kind, modes, sites) {
                (ModelType::Syk, Some(n), None) => gen_syk(*n)?,
                (ModelType::Electronic, Some(n), None) => gen_electronic(*n)?,
                (ModelType::Hubbard, None, Some(s)) => gen_hubbard(*s)?,
                (ModelType::Hubbard, _, _) => return Err(usage("hubbard takes --sites only")),
                _ => return Err(usage("syk and electronic take --modes only")),
            };
            write_or_print(out.as_deref(), &model.to_string())?;
            Ok(json!({
                "config": {"type": format!("{kind:?}").to_lowercase(), "modes": modes, "sites": sites},
                "result": {"modes": model.modes, "terms": model.terms.len()},
                "outputs": {"model": out.as_ref().map(|p| p.display().to_string())},
            }))
        }
        Command::Circuit {
            encoding,
            model,
            format,
            lambda,
        } => {
            let enc = load_encoding(encoding)?;
            let m = load_model(model)?;
            let (c, stats) = hamiltonian_circuit(&enc, &m, *lambda)?;
            match format {
                CircuitFormat::Gates => print!("{c}"),
                CircuitFormat::Stats => print!("{stats}"),
            }
            Ok(json!({
                "config": {"encoding": encoding.display().to_string(),
                           "model": model.display().to_string(), "lambda": lambda},
                "result": {"single": stats.single, "cnot": stats.cnot,
                           "total": stats.total, "depth": stats.depth},
            }))
        }
        Command::CnfStats {
            constraints,
            bound,
            emit,
        } => {
            let cfg = encoding_config(constraints)?;
            let bound = match bound {
                Some(b) => *b,
                None => cfg.objective.weight(&bravyi_kitaev(cfg.modes))?,
            };
            let (cnf, _) = compile(&cfg.with_bound(bound))?;
            let stats = cnf.stats();
            print!("{stats}");
            if let Some(p) = emit {
                let mut f = fs::File::create(p).map_err(|e| {
                    Failure::from(Error::Io {
                        path: p.clone(),
                        source: e,
                    })
                })?;
                cnf.write_dimacs(&mut f).map_err(|e| {
                    Failure::from(Error::Io {
                        path: p.clone(),
                        source: e,
                    })
                })?;
            }
            Ok(json!({
                "config": config_json(&cfg, constraints),
                "result": {"bound": bound, "vars": stats.vars, "clauses": stats.clauses,
                           "avg_vars_per_clause": stats.avg_vars_per_clause},
                "outputs": {"cnf": emit.as_ref().map(|p| p.display().to_string())},
            }))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve { .. } => "solve",
        Command::Anneal { .. } => "anneal",
        Command::Baseline { .. } => "baseline",
        Command::Weight { .. } => "weight",
        Command::Verify { .. } => "verify",
        Command::GenModel { .. } => "gen-model",
        Command::Circuit { .. } => "circuit",
        Command::CnfStats { .. } => "cnf-stats",
    }
}

fn emit_manifest(cli: &Cli, mut manifest: Value, started: Instant) -> CliResult<()> {
    let obj = manifest.as_object_mut().expect("manifest is an object");
    obj.insert("command".into(), json!(command_name(&cli.command)));
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("wall_time_s".into(), json!(started.elapsed().as_secs_f64()));
    obj.insert("solver_env".into(), json!(std::env::var(SOLVER_ENV).ok()));
    let text = manifest.to_string();
    match &cli.manifest {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure {
            code: EXIT_PARSE,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            eprintln!("manifest: {text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    match run(&cli).and_then(|m| emit_manifest(&cli, m, started)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
