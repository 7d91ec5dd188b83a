use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{parse_solver_output, SatBackend, SolveOutcome};
use crate::encode::CnfInstance;
use crate::error::SolverError;

/// Environment variable that overrides the solver command template.
pub const SOLVER_ENV: &str = "FERMENC_SOLVER";

const POLL: Duration = Duration::from_millis(5);

/// A solver executable driven through a DIMACS file.
///
/// The command template is split on whitespace. `{cnf}` is replaced by the
/// instance path and `{seed}` by the seed; without a `{cnf}` token the path
/// is appended as the last argument.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    template: Vec<String>,
    timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(template: &str) -> Self {
        ExternalSolver {
            template: template.split_whitespace().map(str::to_owned).collect(),
            timeout: None,
        }
    }

    /// `$FERMENC_SOLVER` if set and nonempty, else `default`.
    pub fn from_env_or(default: &str) -> Self {
        match std::env::var(SOLVER_ENV) {
            Ok(t) if !t.trim().is_empty() => ExternalSolver::new(&t),
            _ => ExternalSolver::new(default),
        }
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn timeout(&self) -> Option<Duration> {
        self.timeout
    }

    pub fn template(&self) -> String {
        self.template.join(" ")
    }

    fn command_line(&self, cnf: &str, seed: Option<u64>) -> Vec<String> {
        let seed = seed.unwrap_or(0).to_string();
        let mut args: Vec<String> = self
            .template
            .iter()
            .map(|t| t.replace("{cnf}", cnf).replace("{seed}", &seed))
            .collect();
        if !self.template.iter().any(|t| t.contains("{cnf}")) {
            args.push(cnf.to_owned());
        }
        args
    }
}

impl SatBackend for ExternalSolver {
    fn solve(&self, cnf: &CnfInstance, seed: Option<u64>) -> Result<SolveOutcome, SolverError> {
        if self.template.is_empty() {
            return Err(SolverError::Malformed("empty solver command".into()));
        }
        let file = tempfile::Builder::new()
            .prefix("fermenc-")
            .suffix(".cnf")
            .tempfile()?;
        {
            let f: &File = file.as_file();
            let mut w = BufWriter::new(f);
            cnf.write_dimacs(&mut w)?;
            w.flush()?;
        }
        let path = file.path().to_string_lossy().into_owned();
        let args = self.command_line(&path, seed);

        let mut child = Command::new(&args[0])
            .args(&args[1..])
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Spawn {
                command: args.join(" "),
                source,
            })?;
        let mut stdout = child.stdout.take().expect("stdout is piped");
        let reader = thread::spawn(move || {
            let mut text = String::new();
            stdout.read_to_string(&mut text).map(|_| text)
        });

        let start = Instant::now();
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break Some(status);
            }
            if self.timeout.is_some_and(|t| start.elapsed() >= t) {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            thread::sleep(POLL);
        };
        let text = reader
            .join()
            .map_err(|_| SolverError::Malformed("stdout reader panicked".into()))??;
        match status {
            None => Ok(SolveOutcome::Timeout),
            Some(status) => parse_solver_output(&text, status.code()),
        }
    }

    fn identity(&self) -> String {
        format!("external:{}", self.template())
    }

    fn supports_seed(&self) -> bool {
        self.template.iter().any(|t| t.contains("{seed}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_substitution() {
        let s = ExternalSolver::new("solver --seed={seed} {cnf} -q");
        assert_eq!(
            s.command_line("/tmp/a.cnf", Some(7)),
            ["solver", "--seed=7", "/tmp/a.cnf", "-q"]
        );
        assert!(s.supports_seed());
        let t = ExternalSolver::new("kissat -q");
        assert_eq!(t.command_line("x.cnf", None), ["kissat", "-q", "x.cnf"]);
        assert!(!t.supports_seed());
    }

    #[test]
    fn missing_executable_is_a_spawn_error() {
        let s = ExternalSolver::new("/nonexistent/solver-binary");
        let cnf = CnfInstance::new(1);
        assert!(matches!(
            s.solve(&cnf, None),
            Err(SolverError::Spawn { .. })
        ));
    }

    #[cfg(unix)]
    fn script(dir: &std::path::Path, name: &str, body: &str) -> ExternalSolver {
        use std::os::unix::fs::PermissionsExt;
        let path = dir.join(name);
        std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        ExternalSolver::new(path.to_str().unwrap())
    }

    #[cfg(unix)]
    #[test]
    fn scripted_solvers() {
        let dir = tempfile::tempdir().unwrap();
        let cnf = CnfInstance::new(1);

        let sat = script(
            dir.path(),
            "sat",
            "echo 's SATISFIABLE'; echo 'v 1 0'; exit 10",
        );
        assert_eq!(sat.solve(&cnf, None).unwrap(), SolveOutcome::Sat(vec![1]));

        let unsat = script(dir.path(), "unsat", "exit 20");
        assert_eq!(unsat.solve(&cnf, None).unwrap(), SolveOutcome::Unsat);

        let reads = script(
            dir.path(),
            "reads",
            "grep -q 'p cnf 1 0' \"$1\" && echo 's UNSATISFIABLE'",
        );
        assert_eq!(reads.solve(&cnf, None).unwrap(), SolveOutcome::Unsat);

        let garbage = script(dir.path(), "garbage", "echo hello");
        assert!(matches!(
            garbage.solve(&cnf, None),
            Err(SolverError::Malformed(_))
        ));

        let slow = script(dir.path(), "slow", "exec sleep 5")
            .with_timeout(Some(Duration::from_millis(100)));
        let t0 = Instant::now();
        assert_eq!(slow.solve(&cnf, None).unwrap(), SolveOutcome::Timeout);
        assert!(t0.elapsed() < Duration::from_secs(4));
    }
}
