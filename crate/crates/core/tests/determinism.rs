mod common;

use std::path::Path;
use std::process::Command;

use common::random_suite;
use gridsearch::harness::{gen_random, runs_csv, RunRow};
use gridsearch::{run_on_grid, EngineConfig, PartialGrid, SideParam, StrategyTrace};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gridsearch"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn seeded_grid_is_stable() {
    let a = gen_random(42, 20, 20, 0.7).unwrap().to_text();
    let b = gen_random(42, 20, 20, 0.7).unwrap().to_text();
    assert_eq!(a, b);
    assert_ne!(a, gen_random(43, 20, 20, 0.7).unwrap().to_text());
    assert_eq!(PartialGrid::parse(&a).unwrap().to_text(), a);
}

#[test]
fn traces_and_csv_are_stable() {
    let rows = |_: ()| -> (Vec<String>, String) {
        let mut traces = Vec::new();
        let mut rows = Vec::new();
        for inst in random_suite(12) {
            let side = SideParam::from_node_bound(inst.grid.node_count() as u64);
            let run = run_on_grid(&inst.grid, side, &EngineConfig::default()).unwrap();
            let text = run.trace.to_text();
            assert_eq!(StrategyTrace::parse(&text).unwrap(), run.trace);
            traces.push(text);
            rows.push(RunRow::from_run(&inst.name, inst.grid.node_count(), &run));
        }
        (traces, runs_csv(&rows).unwrap())
    };
    assert_eq!(rows(()), rows(()));
}

#[test]
fn cli_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (g1, g2) = (dir.path().join("g1.txt"), dir.path().join("g2.txt"));
    for g in [&g1, &g2] {
        let (code, _) = run_cli(&["gen-random", "--seed", "42", "--width", "20", "--height", "20", "--p", "0.7", "--out", s(g)]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&g1).unwrap(), std::fs::read(&g2).unwrap());
    let (t1, t2) = (dir.path().join("t1.txt"), dir.path().join("t2.txt"));
    let (c1, c2) = (dir.path().join("c1.csv"), dir.path().join("c2.csv"));
    for (t, c) in [(&t1, &c1), (&t2, &c2)] {
        let (code, _) = run_cli(&["run", "--grid", s(&g1), "--trace", s(t), "--csv", s(c)]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&t1).unwrap(), std::fs::read(&t2).unwrap());
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
    let (code, out) = run_cli(&["verify", "--grid", s(&g1), "--trace", s(&t1)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("monotone true connected true complete true"));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(run_cli(&["oracle", "--grid", s(&missing)]).0, 2);
    let claw = dir.path().join("claw.txt");
    std::fs::write(&claw, "gridsearch-grid v1\nhomebase 0 0\nnode 0 0\nnode 1 0\nnode 2 0\nnode 1 1\nedge 0 0 1 0\nedge 1 0 2 0\nedge 1 0 1 1\n").unwrap();
    assert_eq!(run_cli(&["oracle", "--grid", s(&claw)]), (0, "2\n".to_string()));
    assert_eq!(run_cli(&["oracle", "--grid", s(&claw), "--kmax", "1"]), (0, "infeasible\n".to_string()));
    // one searcher walking into the claw cannot finish
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "gridsearch-trace v1\nk 1\nslide 0 0 0 1 0\nslide 0 1 0 2 0\n").unwrap();
    assert_eq!(run_cli(&["verify", "--grid", s(&claw), "--trace", s(&bad)]).0, 1);
    assert_eq!(run_cli(&["gen-random", "--width", "2", "--height", "2", "--p", "1.5"]).0, 2);
    let (code, out) = run_cli(&["stats"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn generated_files_reload() {
    let dir = tempfile::tempdir().unwrap();
    let adv = dir.path().join("adv.txt");
    assert_eq!(run_cli(&["gen-adversary", "--l", "6", "--mirrored", "--out", s(&adv)]).0, 0);
    let g = PartialGrid::parse(&std::fs::read_to_string(&adv).unwrap()).unwrap();
    assert_eq!(g.node_count(), 2 * 28 - 1);
    let poly = dir.path().join("p.txt");
    std::fs::write(&poly, "gridsearch-polygon v1\nr 1\norigin 0 0\nouter -2.5 -2.5 2.5 -2.5 2.5 2.5 -2.5 2.5\n").unwrap();
    let out = dir.path().join("pg.txt");
    assert_eq!(run_cli(&["from-polygon", "--in", s(&poly), "--out", s(&out)]).0, 0);
    let g = PartialGrid::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.node_count(), 25);
    let (code, csv) = run_cli(&["stats", "--grid", s(&out), s(&adv)]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 3);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((row[1], row[2], row[7]), ("25", "5", "234"));
}
