use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fermenc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermenc"))
        .args(args)
        .env_remove("FERMENC_SOLVER")
        .output()
        .expect("fermenc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn manifest(o: &Output) -> Value {
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err
        .lines()
        .find_map(|l| l.strip_prefix("manifest: "))
        .expect("manifest line on stderr");
    serde_json::from_str(line).expect("manifest is JSON")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = p(dir, name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn jw_baseline_listing() {
    let o = fermenc(&["baseline", "--method", "jw", "--modes", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "modes 2\nIY\nIX\nYZ\nXZ\n");
    assert_eq!(manifest(&o)["command"], "baseline");
}

#[test]
fn baseline_file_verifies_and_weighs() {
    let dir = TempDir::new().unwrap();
    let jw = p(&dir, "jw2.txt");
    assert_eq!(
        code(&fermenc(&[
            "baseline", "--method", "jw", "--modes", "2", "--out", &jw
        ])),
        0
    );

    let o = fermenc(&["verify", "--encoding", &jw, "--vacuum"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let h2 = write(&dir, "h2.ac", "h2 2 ac\n1 -1\n2 -2\n");
    let o = fermenc(&["weight", "--encoding", &jw, "--model", &h2]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "4");

    let o = fermenc(&["weight", "--encoding", &jw]);
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn verify_failure_exits_4() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "modes 1\nX\nX\n");
    let o = fermenc(&["verify", "--encoding", &bad]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(code(&fermenc(&[])), 1);
    assert_eq!(code(&fermenc(&["solve"])), 1);
    assert_eq!(
        code(&fermenc(&["baseline", "--method", "xx", "--modes", "2"])),
        1
    );
    assert_eq!(code(&fermenc(&["--help"])), 0);
    assert_eq!(code(&fermenc(&["--version"])), 0);

    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "g.txt", "modes 2\nIY\nQQ\n");
    assert_eq!(code(&fermenc(&["weight", "--encoding", &garbage])), 2);
    assert_eq!(
        code(&fermenc(&["weight", "--encoding", &p(&dir, "missing")])),
        2
    );

    let jw = p(&dir, "jw2.txt");
    fermenc(&["baseline", "--method", "jw", "--modes", "2", "--out", &jw]);
    let h3 = write(&dir, "h3.ac", "h3 3 ac\n1 -1\n");
    assert_eq!(
        code(&fermenc(&["weight", "--encoding", &jw, "--model", &h3])),
        2
    );
}

#[test]
fn solve_reaches_known_optimum() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "opt.txt");
    let cnf_dir = dir.path().join("cnf");
    fs::create_dir(&cnf_dir).unwrap();
    let o = fermenc(&[
        "solve",
        "--modes",
        "2",
        "--timeout",
        "30",
        "--out",
        &out,
        "--emit-cnf",
        cnf_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&o);
    assert_eq!(m["result"]["weight"], 6);
    assert_eq!(m["result"]["status"], "proven-optimal");
    assert_eq!(m["seeds"][0], 0);
    assert!(m["solver"].as_str().unwrap().contains("fermenc-cadical"));
    assert!(fs::read_dir(&cnf_dir).unwrap().count() >= 2);
    assert_eq!(
        code(&fermenc(&["verify", "--encoding", &out, "--vacuum"])),
        0
    );
}

#[test]
fn solve_with_model_and_manifest_file() {
    let dir = TempDir::new().unwrap();
    let model = p(&dir, "h2.txt");
    assert_eq!(
        code(&fermenc(&[
            "gen-model",
            "--type",
            "hubbard",
            "--sites",
            "2",
            "--out",
            &model
        ])),
        0
    );
    let out = p(&dir, "enc.txt");
    let man = p(&dir, "run.json");
    let o = fermenc(&[
        "--manifest",
        &man,
        "solve",
        "--modes",
        "4",
        "--model",
        &model,
        "--timeout",
        "60",
        "--time-budget",
        "60",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m: Value = serde_json::from_str(&fs::read_to_string(&man).unwrap()).unwrap();
    assert_eq!(m["config"]["objective"], "dependent");
    let w = m["result"]["weight"].as_u64().unwrap();
    let o = fermenc(&["weight", "--encoding", &out, "--model", &model]);
    assert_eq!(stdout(&o).trim().parse::<u64>().unwrap(), w);
}

#[test]
fn infeasible_bound_exits_5() {
    let o = fermenc(&[
        "solve",
        "--modes",
        "1",
        "--initial-bound",
        "0",
        "--relax-cap",
        "1",
        "--timeout",
        "10",
    ]);
    assert_eq!(code(&o), 5, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn broken_solver_exits_3() {
    let o = fermenc(&[
        "solve",
        "--modes",
        "2",
        "--solver",
        "/nonexistent/solver",
        "--timeout",
        "5",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn anneal_never_worse() {
    let dir = TempDir::new().unwrap();
    let model = p(&dir, "syk.txt");
    fermenc(&[
        "gen-model",
        "--type",
        "syk",
        "--modes",
        "3",
        "--out",
        &model,
    ]);
    let bk = p(&dir, "bk.txt");
    fermenc(&["baseline", "--method", "bk", "--modes", "3", "--out", &bk]);
    let before: u64 = stdout(&fermenc(&["weight", "--encoding", &bk, "--model", &model]))
        .trim()
        .parse()
        .unwrap();
    let out = p(&dir, "ann.txt");
    let o = fermenc(&[
        "anneal",
        "--model",
        &model,
        "--encoding",
        &bk,
        "--t0",
        "5",
        "--iters",
        "50",
        "--restarts",
        "2",
        "--seed",
        "7",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0);
    let m = manifest(&o);
    assert_eq!(m["rng"], "chacha8");
    let after: u64 = stdout(&fermenc(&["weight", "--encoding", &out, "--model", &model]))
        .trim()
        .parse()
        .unwrap();
    assert!(after <= before);
    assert_eq!(m["result"]["weight"].as_u64().unwrap(), after);
    assert_eq!(
        code(&fermenc(&["verify", "--encoding", &out, "--vacuum"])),
        0
    );
}

#[test]
fn circuit_and_cnf_stats_reports() {
    let dir = TempDir::new().unwrap();
    let jw = p(&dir, "jw2.txt");
    fermenc(&["baseline", "--method", "jw", "--modes", "2", "--out", &jw]);
    let mj = write(&dir, "m.mj", "m 2 mj\n1 2\n");
    let o = fermenc(&["circuit", "--encoding", &jw, "--model", &mj]);
    assert_eq!(stdout(&o), "RZ 2.0 q1\n");
    let o = fermenc(&[
        "circuit",
        "--encoding",
        &jw,
        "--model",
        &mj,
        "--format",
        "stats",
    ]);
    assert_eq!(stdout(&o), "Single: 1\nCNOT: 0\nTotal: 1\nDepth: 1\n");

    let cnf = p(&dir, "i.cnf");
    let o = fermenc(&[
        "cnf-stats",
        "--modes",
        "3",
        "--algebraic",
        "off",
        "--vacuum",
        "off",
        "--emit",
        &cnf,
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("#Vars: "));
    let vars: u64 = text.lines().next().unwrap()[7..].parse().unwrap();
    let header = fs::read_to_string(&cnf).unwrap();
    assert!(header.starts_with(&format!("p cnf {vars} ")));
    assert_eq!(manifest(&o)["result"]["bound"], 11);
}

#[test]
fn encoding_round_trips_unchanged() {
    let dir = TempDir::new().unwrap();
    let bk = p(&dir, "bk.txt");
    fermenc(&["baseline", "--method", "bk", "--modes", "5", "--out", &bk]);
    let model = write(&dir, "empty.mj", "e 5 mj\n");
    let out = p(&dir, "same.txt");
    fermenc(&[
        "anneal",
        "--model",
        &model,
        "--encoding",
        &bk,
        "--out",
        &out,
    ]);
    assert_eq!(
        fs::read_to_string(&bk).unwrap(),
        fs::read_to_string(Path::new(&out)).unwrap()
    );
}
