mod common;

use std::time::Duration;

use common::InProcess;
use fermenc::baselines::{bravyi_kitaev, exhaustive_optimum, jordan_wigner, verify};
use fermenc::encode::{ClauseGroup, CnfInstance, EncodingConfig, Objective};
use fermenc::fermion::{gen_syk, hamiltonian_weight, parse_model, MajoranaSet};
use fermenc::solve::{
    descent_solve, enumerate_solutions, portfolio_descent, run_solver, DescentOptions,
    DescentStatus, SolveOutcome,
};
use fermenc::Error;

fn config(n: usize, algebraic: bool, vacuum: bool) -> EncodingConfig {
    EncodingConfig {
        algebraic_independence: algebraic,
        vacuum,
        ..EncodingConfig::new(n)
    }
}

#[test]
fn trivial_instances() {
    let b = InProcess::new();
    let mut unit = CnfInstance::new(1);
    unit.add_clause(vec![1], ClauseGroup::Other);
    assert_eq!(run_solver(&b, &unit).unwrap(), SolveOutcome::Sat(vec![1]));
    unit.add_clause(vec![-1], ClauseGroup::Other);
    assert_eq!(run_solver(&b, &unit).unwrap(), SolveOutcome::Unsat);
}

#[test]
fn small_optima_match_exhaustive_search() {
    let b = InProcess::new();
    for n in 1..=2 {
        for algebraic in [true, false] {
            for vacuum in [true, false] {
                let r = descent_solve(
                    &config(n, algebraic, vacuum),
                    &b,
                    &DescentOptions::default(),
                )
                .unwrap();
                let (opt, _) = exhaustive_optimum(n, vacuum).unwrap();
                assert_eq!(r.weight, opt, "N={n} alg={algebraic} vac={vacuum}");
                assert_eq!(r.status, DescentStatus::ProvenOptimal);
                assert!(verify(&r.best, vacuum).is_clean());
                assert!(r.history.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }
}

#[test]
fn weight_history_descends_from_below_the_start_bound() {
    let b = InProcess::new();
    let opts = DescentOptions {
        initial_bound: Some(18),
        ..DescentOptions::default()
    };
    let r = descent_solve(&config(3, true, true), &b, &opts).unwrap();
    assert!(r.history[0] <= 18);
    assert!(r.history.windows(2).all(|w| w[0] > w[1]));
    assert_eq!(*r.history.last().unwrap(), r.weight);
    assert_eq!(r.iterations, r.history.len() + 1);
}

#[test]
fn symmetry_breaking_keeps_the_optimum() {
    let b = InProcess::new();
    let mut cfg = config(3, false, false);
    let plain = descent_solve(&cfg, &b, &DescentOptions::default()).unwrap();
    cfg.symmetry_breaking = true;
    let sym = descent_solve(&cfg, &b, &DescentOptions::default()).unwrap();
    assert_eq!(plain.weight, sym.weight);
}

#[test]
fn dependent_syk3_is_no_worse_than_bk() {
    let b = InProcess::new();
    let model = gen_syk(3).unwrap();
    let cfg = EncodingConfig {
        objective: Objective::Dependent(model.clone()),
        ..EncodingConfig::new(3)
    };
    let r = descent_solve(&cfg, &b, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::ProvenOptimal);
    assert_eq!(r.weight, hamiltonian_weight(&r.best, &model).unwrap());
    assert!(r.weight <= hamiltonian_weight(&bravyi_kitaev(3), &model).unwrap());
}

#[test]
fn infeasible_start_is_relaxed() {
    let b = InProcess::new();
    let opts = DescentOptions {
        initial_bound: Some(0),
        ..DescentOptions::default()
    };
    let r = descent_solve(&config(2, true, true), &b, &opts).unwrap();
    assert_eq!(r.weight, 6);

    let capped = DescentOptions {
        initial_bound: Some(0),
        relax_cap: Some(3),
        ..DescentOptions::default()
    };
    assert!(matches!(
        descent_solve(&config(2, true, true), &b, &capped),
        Err(Error::Infeasible { .. })
    ));
}

#[test]
fn dependent_model_must_match_modes() {
    let model = parse_model("h 2 ac\n1 -1\n").unwrap();
    let cfg = EncodingConfig {
        objective: Objective::Dependent(model),
        ..EncodingConfig::new(3)
    };
    assert!(descent_solve(&cfg, &InProcess::new(), &DescentOptions::default()).is_err());
}

#[test]
fn solver_timeout_is_reported() {
    let b = InProcess {
        timeout: Some(Duration::ZERO),
    };
    let cfg = config(4, true, true);
    match descent_solve(&cfg, &b, &DescentOptions::default()) {
        Err(Error::Solver(_)) => {}
        Ok(r) => assert!(matches!(r.status, DescentStatus::TimedOutAtBound(_))),
        Err(e) => panic!("unexpected {e}"),
    }
}

#[test]
fn enumerated_solutions_are_distinct_and_valid() {
    let b = InProcess::new();
    let cfg = config(3, false, false).with_bound(12);
    let sols = enumerate_solutions(&cfg, &b, 20, None).unwrap();
    assert_eq!(sols.len(), 20);
    for (i, s) in sols.iter().enumerate() {
        assert!(s.independent_weight() <= 12);
        assert!(verify(s, false).is_clean());
        assert!(sols[..i].iter().all(|t| t != s));
    }
}

#[test]
fn portfolio_picks_an_optimum() {
    let b = InProcess::new();
    let r = portfolio_descent(
        &config(3, true, true),
        &b,
        &DescentOptions::default(),
        &[1, 2, 3],
    )
    .unwrap();
    let single = descent_solve(&config(3, true, true), &b, &DescentOptions::default()).unwrap();
    assert_eq!(r.weight, single.weight);
    assert!(r.deterministic);
}

#[test]
fn incumbent_is_kept_or_improved() {
    let b = InProcess::new();
    let cfg = config(3, true, true);
    let jw = jordan_wigner(3);
    let opts = DescentOptions {
        incumbent: Some(jw.clone()),
        ..DescentOptions::default()
    };
    let r = descent_solve(&cfg, &b, &opts).unwrap();
    assert_eq!(r.history[0], 12);
    assert_eq!(r.weight, 11);
    assert_eq!(r.status, DescentStatus::ProvenOptimal);

    let stuck = InProcess {
        timeout: Some(Duration::ZERO),
    };
    let r = descent_solve(
        &config(4, true, true),
        &stuck,
        &DescentOptions {
            incumbent: Some(jordan_wigner(4)),
            ..DescentOptions::default()
        },
    )
    .unwrap();
    assert!(r.weight <= 20);

    let bad = MajoranaSet::parse("modes 1\nX\nX\n").unwrap();
    let opts = DescentOptions {
        incumbent: Some(bad),
        ..DescentOptions::default()
    };
    assert!(descent_solve(&config(1, true, true), &b, &opts).is_err());
}
