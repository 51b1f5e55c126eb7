mod common;

use std::time::{Duration, Instant};

use common::{c, lattice, naive_mcs, path, rehome};
use gridsearch::harness::gen_random;
use gridsearch::oracle::{mcs_exact, mcs_lower_check, OracleConfig, OracleError};
use gridsearch::{run_on_grid, validate_grid, Coord, EngineConfig, PartialGrid, SideParam};
use proptest::prelude::*;

fn star_from_leaf() -> PartialGrid {
    validate_grid(
        [c(0, 0), c(1, 0), c(2, 0), c(1, 1)],
        [(c(0, 0), c(1, 0)), (c(1, 0), c(2, 0)), (c(1, 0), c(1, 1))],
        c(0, 0),
    )
    .unwrap()
}

fn timed(g: &PartialGrid) -> Option<usize> {
    let t = Instant::now();
    let v = mcs_exact(g, 6, &OracleConfig::default()).unwrap();
    assert!(t.elapsed() < Duration::from_secs(10));
    v
}

#[test]
fn paths_need_one_from_an_end() {
    for len in 1..=8 {
        let g = path(len, 0);
        assert_eq!(timed(&g), Some(1));
        assert_eq!(naive_mcs(&g, 3), Some(1));
    }
}

#[test]
fn path_from_inside_needs_two() {
    let g = path(6, 2);
    assert_eq!(timed(&g), Some(2));
    assert_eq!(naive_mcs(&g, 3), Some(2));
}

#[test]
fn claw_from_a_leaf_needs_two() {
    let g = star_from_leaf();
    assert_eq!(timed(&g), Some(2));
    assert_eq!(naive_mcs(&g, 3), Some(2));
}

#[test]
fn four_cycle_needs_two() {
    let g = lattice(2, 2, c(0, 0));
    assert_eq!(timed(&g), Some(2));
    assert_eq!(naive_mcs(&g, 3), Some(2));
}

#[test]
fn three_by_three_values() {
    let corner = lattice(3, 3, c(0, 0));
    let centre = lattice(3, 3, c(1, 1));
    assert_eq!(timed(&corner), naive_mcs(&corner, 4));
    assert_eq!(timed(&centre), naive_mcs(&centre, 4));
    assert_eq!(timed(&corner), Some(4));
    assert_eq!(timed(&centre), Some(4));
}

#[test]
fn caps_are_reported() {
    let g = lattice(4, 4, c(0, 0));
    assert!(matches!(
        mcs_exact(&g, 3, &OracleConfig::default()),
        Err(OracleError::TooManyEdges { edges: 24, cap: 16 })
    ));
    let tight = OracleConfig {
        edge_cap: 24,
        state_cap: 10,
    };
    assert!(matches!(
        mcs_exact(&g, 4, &tight),
        Err(OracleError::StateSpaceExceeded { cap: 10 })
    ));
}

#[test]
fn engine_never_beats_the_optimum() {
    for (w, h) in [(2, 2), (3, 2), (3, 3), (5, 1)] {
        let g = lattice(w, h, c(0, 0));
        let run = run_on_grid(&g, SideParam::from_node_bound(g.node_count() as u64), &EngineConfig::default()).unwrap();
        assert!(mcs_lower_check(&g, &run.trace, &OracleConfig::default()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_oracle_matches_explicit_search(seed in 0u64..10_000, w in 1u32..=3, h in 1u32..=3, p in 0.4f64..1.0, pick in 0usize..9) {
        let g = gen_random(seed, w, h, p).unwrap();
        let nodes: Vec<Coord> = g.nodes().collect();
        let g = rehome(&g, nodes[pick % nodes.len()]);
        let fast = mcs_exact(&g, 4, &OracleConfig::default()).unwrap();
        prop_assert_eq!(fast, naive_mcs(&g, 4));
    }
}
