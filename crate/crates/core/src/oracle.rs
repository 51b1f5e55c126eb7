//! Exact monotone connected search number of small grids from a fixed
//! homebase, by breadth-first search over clean edge sets.
//!
//! In a monotone connected strategy every node that has both a clean and a
//! contaminated edge is occupied, and any other searcher can walk anywhere in
//! the clean region without recontaminating it. So a state is determined by
//! its clean edge set: the guarded nodes follow from it and the remaining
//! searchers are interchangeable. Clearing edge `pq` from `p` needs the
//! guards other than `p`, the mover, and a second searcher on `p` when `p`
//! still has a contaminated edge afterwards.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::grid::{Coord, PartialGrid};
use crate::trace::StrategyTrace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{edges} edges exceed the oracle cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("more than {cap} states explored")]
    StateSpaceExceeded { cap: usize },
    #[error("no monotone connected strategy with at most {k_max} searchers")]
    Infeasible { k_max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub edge_cap: usize,
    pub state_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            edge_cap: 16,
            state_cap: 4_000_000,
        }
    }
}

struct Game {
    ends: Vec<(usize, usize)>,
    incident: Vec<u64>,
    home: usize,
    full: u64,
}

impl Game {
    fn new(grid: &PartialGrid) -> Self {
        let nodes: Vec<Coord> = grid.nodes().collect();
        let index = |c: Coord| nodes.binary_search(&c).expect("edge endpoint is a node");
        let mut incident = vec![0u64; nodes.len()];
        let mut ends = Vec::new();
        for (k, e) in grid.edges().enumerate() {
            let (a, b) = e.endpoints();
            let (a, b) = (index(a), index(b));
            incident[a] |= 1 << k;
            incident[b] |= 1 << k;
            ends.push((a, b));
        }
        let full = if ends.len() == 64 { u64::MAX } else { (1u64 << ends.len()) - 1 };
        Game {
            ends,
            incident,
            home: index(grid.homebase()),
            full,
        }
    }

    fn guarded(&self, clean: u64, v: usize) -> bool {
        let inc = self.incident[v];
        inc & clean != 0 && inc & !clean & self.full != 0
    }

    fn guard_count(&self, clean: u64) -> usize {
        (0..self.incident.len()).filter(|&v| self.guarded(clean, v)).count()
    }

    fn in_region(&self, clean: u64, v: usize) -> bool {
        if clean == 0 {
            v == self.home
        } else {
            self.incident[v] & clean != 0
        }
    }

    /// Successor clean sets reachable with at most `k` searchers.
    fn moves(&self, clean: u64, k: usize, out: &mut Vec<u64>) {
        out.clear();
        let g = self.guard_count(clean);
        for (bit, &(a, b)) in self.ends.iter().enumerate() {
            let e = 1u64 << bit;
            if clean & e != 0 {
                continue;
            }
            let next = clean | e;
            for p in [a, b] {
                if !self.in_region(clean, p) {
                    continue;
                }
                let others = g - usize::from(self.guarded(clean, p));
                let need = others + 1 + usize::from(self.guarded(next, p));
                if need <= k {
                    out.push(next);
                    break;
                }
            }
        }
    }

    fn feasible(&self, k: usize, cfg: &OracleConfig) -> Result<bool, OracleError> {
        let mut seen: HashSet<u64> = HashSet::from([0]);
        let mut queue = VecDeque::from([0u64]);
        let mut next = Vec::new();
        while let Some(c) = queue.pop_front() {
            if c == self.full {
                return Ok(true);
            }
            self.moves(c, k, &mut next);
            for &n in &next {
                if seen.insert(n) {
                    if seen.len() > cfg.state_cap {
                        return Err(OracleError::StateSpaceExceeded { cap: cfg.state_cap });
                    }
                    queue.push_back(n);
                }
            }
        }
        Ok(false)
    }
}

/// Smallest `k <= k_max` admitting a monotone connected search from the
/// homebase, or `None` when there is none.
pub fn mcs_exact(grid: &PartialGrid, k_max: usize, cfg: &OracleConfig) -> Result<Option<usize>, OracleError> {
    let edges = grid.edge_count();
    if edges > cfg.edge_cap.min(64) {
        return Err(OracleError::TooManyEdges {
            edges,
            cap: cfg.edge_cap,
        });
    }
    let game = Game::new(grid);
    for k in 1..=k_max {
        if game.feasible(k, cfg)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// True iff the trace does not claim fewer searchers than the exact optimum.
pub fn mcs_lower_check(grid: &PartialGrid, trace: &StrategyTrace, cfg: &OracleConfig) -> Result<bool, OracleError> {
    Ok(mcs_exact(grid, trace.k, cfg)?.is_some())
}
