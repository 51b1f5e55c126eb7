mod common;

use std::collections::BTreeSet;

use common::{c, fixtures, lattice, path, random_suite};
use gridsearch::engine::ledger::Ledger;
use gridsearch::strip::strip_peak_bound;
use gridsearch::trace::Annotation;
use gridsearch::{run_on_grid, validate_grid, verify_trace, Coord, Edge, EngineConfig, PartialGrid, SideParam};

fn side_for(g: &PartialGrid) -> SideParam {
    SideParam::from_node_bound(g.node_count() as u64)
}

fn check_run(name: &str, g: &PartialGrid, side: SideParam) -> Ledger {
    let cfg = EngineConfig::default();
    let run = run_on_grid(g, side, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
    let rep = verify_trace(g, &run.trace);
    assert!(rep.ok(), "{name}: {:?}", &rep.failures[..rep.failures.len().min(3)]);
    assert_eq!(rep.peak_searchers, run.metrics.peak_total, "{name}");
    assert_eq!(run.state.fog_violations(), 0, "{name}");
    assert!(run.lemma_suite_pass(), "{name}\n{}", run.lemmas);
    assert!(run.bounds.all_pass(), "{name}\n{}", run.bounds);
    assert!(run.metrics.peak_total <= 46 * side.get() as usize + 4, "{name}");
    for s in &run.strips {
        assert!(s.peak_cleaners <= strip_peak_bound(6, 4, s.depth), "{name}: strip at depth {}", s.depth);
    }
    run.ledger
}

#[test]
fn fixtures_clear() {
    for (name, g) in fixtures() {
        check_run(&name, &g, side_for(&g));
    }
}

#[test]
fn random_grids_clear() {
    for inst in random_suite(40).into_iter().filter(|i| i.seed % 3 == 0) {
        check_run(&inst.name, &inst.grid, side_for(&inst.grid));
    }
}

#[test]
fn single_node_is_trivial() {
    let g = PartialGrid::single_node();
    let run = run_on_grid(&g, SideParam::new(1).unwrap(), &EngineConfig::default()).unwrap();
    assert_eq!((run.trace.moves.len(), run.trace.k, run.metrics.phases), (0, 1, 0));
}

#[test]
fn path_of_fifty_with_side_eight() {
    let g = path(50, 0);
    let ledger = check_run("path50", &g, SideParam::new(8).unwrap());
    assert!(ledger.phases.iter().any(|p| p.upgraded));
    let run = run_on_grid(&g, SideParam::new(8).unwrap(), &EngineConfig::default()).unwrap();
    assert!(run.metrics.peak_total <= 372);
    // the initial relay alone places s + 1 searchers on the row
    assert_eq!(run.metrics.peak_total, 9);
}

fn moves_before_first_step(g: &PartialGrid, s: i64) -> (usize, BTreeSet<Edge>, usize) {
    let run = run_on_grid(g, SideParam::new(s).unwrap(), &EngineConfig::default()).unwrap();
    let end = run
        .trace
        .annotations
        .iter()
        .find(|(_, a)| *a == Annotation::Step(0))
        .map_or(run.trace.moves.len(), |(at, _)| *at);
    let moves = &run.trace.moves[..end];
    let edges: BTreeSet<Edge> = moves.iter().map(|m| Edge::new(m.from, m.to)).collect();
    let placed = moves.iter().map(|m| m.searcher).collect::<BTreeSet<_>>().len() + 1;
    (run.ledger.initial_guards, edges, placed)
}

#[test]
fn initial_checkpoint_on_a_full_row() {
    let g = lattice(10, 2, c(0, 0));
    let (guards, edges, placed) = moves_before_first_step(&g, 9);
    assert_eq!((guards, edges.len(), placed), (10, 9, 10));
}

#[test]
fn initial_checkpoint_stops_at_a_gap() {
    let full = lattice(10, 2, c(0, 0));
    let edges = full.edges().filter(|e| *e != Edge::new(c(3, 0), c(4, 0))).map(|e| e.endpoints());
    let g = validate_grid(full.nodes(), edges, c(0, 0)).unwrap();
    let (guards, edges, _) = moves_before_first_step(&g, 9);
    assert_eq!((guards, edges.len()), (4, 3));
}

#[test]
fn isolated_homebase_row() {
    let g = lattice(1, 5, c(0, 0));
    let (guards, edges, _) = moves_before_first_step(&g, 3);
    assert_eq!((guards, edges.len()), (1, 0));
}

fn line(a: Coord, b: Coord) -> Vec<(Coord, Coord)> {
    let (dx, dy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
    let mut out = Vec::new();
    let mut p = a;
    while p != b {
        let q = c(p.x + dx, p.y + dy);
        out.push((p, q));
        p = q;
    }
    out
}

/// Corridors leaving the first phase's last rectangle through six
/// different frontiers.
fn six_exit_grid() -> PartialGrid {
    let mut edges = line(c(0, 0), c(12, 0));
    edges.extend(line(c(6, -15), c(6, 15)));
    edges.extend(line(c(-15, 6), c(27, 6)));
    edges.extend(line(c(-6, 6), c(-6, -15)));
    edges.extend(line(c(18, 6), c(18, -15)));
    let nodes: BTreeSet<Coord> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    validate_grid(nodes, edges, c(0, 0)).unwrap()
}

#[test]
fn first_upgrade_creates_six_checkpoints() {
    let g = six_exit_grid();
    assert_eq!(g.node_count(), 127);
    let side = SideParam::new(12).unwrap();
    let ledger = check_run("six-exits", &g, side);
    let first = &ledger.phases[0];
    assert!(first.upgraded);
    assert_eq!(first.born.len(), 6);
    assert_eq!(first.died.len(), 1);
}
