//! Adaptive lower-bound trees: staircase trees grown one diagonal at a time,
//! committing each branch point at the moment the searchers first reach the
//! current deepest diagonal.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::crew::EngineError;
use crate::engine::{grid_searching, EngineConfig};
use crate::geometry::SideParam;
use crate::greedy::greedy_search;
use crate::grid::{validate_grid, Coord, Dir, Edge, PartialGrid, Ports};
use crate::oracle::{mcs_exact, OracleConfig, OracleError};
use crate::state::Terrain;
use crate::trace::{verify_trace, StrategyTrace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("branch index {i} outside 0..={depth}")]
    IndexOutOfRange { i: i64, depth: i64 },
    #[error("sequence entry {entry} is not on diagonal {diagonal}")]
    OffDiagonal { entry: Coord, diagonal: i64 },
    #[error("algorithm made no progress within {moves} moves")]
    AlgorithmStalled { moves: usize },
    #[error("algorithm stopped with only diagonals 0..={depth} committed")]
    Incomplete { depth: i64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A member of the staircase family of depth `depth`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdversaryTree {
    depth: i64,
    edges: BTreeSet<Edge>,
    sequence: Vec<Coord>,
}

pub fn family_node_count(depth: i64) -> usize {
    ((depth + 1) * (depth + 2) / 2) as usize
}

impl AdversaryTree {
    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn sequence(&self) -> &[Coord] {
        &self.sequence
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..=self.depth).flat_map(|d| (0..=d).map(move |j| Coord::new(j, d - j)))
    }

    /// Adds diagonal `depth + 1`; node `(i, depth - i)` branches.
    pub fn extend_at(&mut self, i: i64) -> Result<(), AdversaryError> {
        let d = self.depth;
        if !(0..=d).contains(&i) {
            return Err(AdversaryError::IndexOutOfRange { i, depth: d });
        }
        for j in 0..=i {
            self.edges.insert(Edge::new(Coord::new(j, d - j), Coord::new(j, d - j + 1)));
        }
        for j in i..=d {
            self.edges.insert(Edge::new(Coord::new(j, d - j), Coord::new(j + 1, d - j)));
        }
        self.sequence.push(Coord::new(i, d - i));
        self.depth += 1;
        Ok(())
    }

    /// Rebuilds a tree from its branch points; entry `k` lies on diagonal `k`.
    pub fn from_sequence(seq: &[Coord]) -> Result<Self, AdversaryError> {
        let mut t = AdversaryTree::default();
        for (k, &c) in seq.iter().enumerate() {
            if c.x + c.y != k as i64 || c.x < 0 || c.y < 0 {
                return Err(AdversaryError::OffDiagonal {
                    entry: c,
                    diagonal: k as i64,
                });
            }
            t.extend_at(c.x)?;
        }
        Ok(t)
    }

    pub fn node_count(&self) -> usize {
        family_node_count(self.depth)
    }

    pub fn degrees(&self) -> BTreeMap<Coord, usize> {
        let mut deg: BTreeMap<Coord, usize> = self.nodes().map(|c| (c, 0)).collect();
        for e in &self.edges {
            let (a, b) = e.endpoints();
            *deg.get_mut(&a).expect("node") += 1;
            *deg.get_mut(&b).expect("node") += 1;
        }
        deg
    }

    /// Nodes of degree one other than the root.
    pub fn leaf_count(&self) -> usize {
        if self.depth == 0 {
            return 1;
        }
        self.degrees()
            .iter()
            .filter(|(c, d)| **d == 1 && **c != Coord::ORIGIN)
            .count()
    }

    pub fn is_tree(&self) -> bool {
        let g = self.to_grid();
        self.edges.len() + 1 == self.node_count() && g.component_of(Coord::ORIGIN).len() == self.node_count()
    }

    pub fn ports(&self, c: Coord) -> Ports {
        Dir::ALL
            .iter()
            .filter(|d| self.edges.contains(&Edge::new(c, c.step(**d))))
            .fold(Ports::NONE, |p, d| p.with(*d))
    }

    pub fn to_grid(&self) -> PartialGrid {
        validate_grid(self.nodes(), self.edges.iter().map(|e| e.endpoints()), Coord::ORIGIN).expect("family member is a valid grid")
    }

    /// The tree together with a copy rotated by 180 degrees about the root.
    pub fn mirrored_grid(&self) -> PartialGrid {
        let rot = |c: Coord| Coord::new(-c.x, -c.y);
        let nodes: BTreeSet<Coord> = self.nodes().flat_map(|c| [c, rot(c)]).collect();
        let edges: Vec<(Coord, Coord)> = self
            .edges
            .iter()
            .flat_map(|e| {
                let (a, b) = e.endpoints();
                [(a, b), (rot(a), rot(b))]
            })
            .collect();
        validate_grid(nodes, edges, Coord::ORIGIN).expect("mirrored tree is a valid grid")
    }
}

/// Terrain that grows an adversary tree up to depth `target` as it is explored.
#[derive(Debug, Clone)]
pub struct AdaptiveTerrain {
    pub tree: AdversaryTree,
    pub target: i64,
    /// `(reveal index, committed branch point)` in commit order.
    pub commits: Vec<(usize, Coord)>,
    reveals: usize,
}

impl AdaptiveTerrain {
    pub fn new(target: i64) -> Self {
        AdaptiveTerrain {
            tree: AdversaryTree::default(),
            target,
            commits: Vec::new(),
            reveals: 0,
        }
    }
}

impl Terrain for AdaptiveTerrain {
    fn reveal(&mut self, node: Coord) -> Ports {
        let d = node.x + node.y;
        if d == self.tree.depth && d < self.target {
            self.tree.extend_at(node.x).expect("node on the deepest diagonal");
            self.commits.push((self.reveals, node));
        }
        self.reveals += 1;
        self.tree.ports(node)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Engine,
    Greedy,
}

#[derive(Debug)]
pub struct Attack {
    pub l: i64,
    pub tree: AdversaryTree,
    pub commits: Vec<(usize, Coord)>,
    pub peak: usize,
    pub trace: StrategyTrace,
    pub verified: bool,
}

impl Attack {
    /// `ceil((l + 1) / 2)`.
    pub fn lower_bound(&self) -> usize {
        (self.l as usize + 2) / 2
    }
}

pub fn move_cap(l: i64) -> usize {
    100 * family_node_count(l).pow(2)
}

/// Plays the adaptive game of depth `l` against an online algorithm.
pub fn adaptive_adversary(alg: Algorithm, l: i64, config: &EngineConfig) -> Result<Attack, AdversaryError> {
    let terrain = AdaptiveTerrain::new(l);
    let cap = move_cap(l);
    let (terrain, peak, trace) = match alg {
        Algorithm::Engine => {
            let side = SideParam::from_node_bound(family_node_count(l) as u64);
            let run = grid_searching(terrain, side, config)?;
            (run.state.into_terrain(), run.metrics.peak_total, run.trace)
        }
        Algorithm::Greedy => {
            let run = greedy_search(terrain, None, cap).map_err(|e| match e {
                EngineError::Invariant(_) => AdversaryError::AlgorithmStalled { moves: cap },
                other => other.into(),
            })?;
            (run.state.into_terrain(), run.peak, run.trace)
        }
    };
    if trace.moves.len() > cap {
        return Err(AdversaryError::AlgorithmStalled { moves: cap });
    }
    if terrain.tree.depth() < l {
        return Err(AdversaryError::Incomplete {
            depth: terrain.tree.depth(),
        });
    }
    let verified = verify_trace(&terrain.tree.to_grid(), &trace).ok();
    Ok(Attack {
        l,
        tree: terrain.tree,
        commits: terrain.commits,
        peak,
        trace,
        verified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRecord {
    pub l: i64,
    pub nodes: usize,
    pub peak: usize,
    pub mcs: usize,
    pub ratio: f64,
}

/// Peak of the algorithm on its adversarial tree over the tree's exact
/// search number from the same homebase.
pub fn ratio_experiment(alg: Algorithm, l: i64, config: &EngineConfig, oracle: &OracleConfig) -> Result<RatioRecord, AdversaryError> {
    let attack = adaptive_adversary(alg, l, config)?;
    let grid = attack.tree.to_grid();
    let mcs = mcs_exact(&grid, attack.peak, oracle)?.ok_or(OracleError::Infeasible { k_max: attack.peak })?;
    Ok(RatioRecord {
        l,
        nodes: grid.node_count(),
        peak: attack.peak,
        mcs,
        ratio: attack.peak as f64 / mcs as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_extension() {
        let mut t = AdversaryTree::default();
        t.extend_at(0).unwrap();
        let e: Vec<Edge> = t.edges().collect();
        assert_eq!(
            e,
            vec![
                Edge::new(Coord::new(0, 0), Coord::new(0, 1)),
                Edge::new(Coord::new(0, 0), Coord::new(1, 0))
            ]
        );
        assert_eq!(t.node_count(), 3);
        assert!(t.extend_at(2).is_err());
    }

    #[test]
    fn figure_sequence_reconstructs_depth_eight() {
        let seq: Vec<Coord> = [(0, 0), (1, 0), (1, 1), (0, 3), (3, 1), (2, 3), (1, 5), (6, 1)]
            .into_iter()
            .map(Coord::from)
            .collect();
        let t = AdversaryTree::from_sequence(&seq).unwrap();
        assert_eq!(t.depth(), 8);
        assert_eq!(t.node_count(), 45);
        assert_eq!(t.leaf_count(), 9);
        assert!(t.is_tree());
        assert_eq!(t.sequence(), &seq[..]);
        assert!(AdversaryTree::from_sequence(&[Coord::new(1, 0)]).is_err());
    }

    #[test]
    fn mirrored_doubles() {
        let t = AdversaryTree::from_sequence(&[Coord::new(0, 0), Coord::new(1, 0)]).unwrap();
        let g = t.mirrored_grid();
        assert_eq!(g.node_count(), 2 * t.node_count() - 1);
        assert_eq!(g.edge_count(), 2 * t.edges().count());
    }
}
