//! Edge contamination state machine and the fog-of-war view onto it.

use std::cell::Cell;
use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::grid::{Coord, Dir, Edge, PartialGrid, Ports};

pub type SearcherId = usize;

/// A single slide of one searcher along an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub searcher: SearcherId,
    pub from: Coord,
    pub to: Coord,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("illegal move of searcher {searcher} from {from} to {to}: {reason}")]
    IllegalMove {
        searcher: SearcherId,
        from: Coord,
        to: Coord,
        reason: &'static str,
    },
    #[error("no clean path from {from} to {to}")]
    NoCleanPath { from: Coord, to: Coord },
}

/// Source of node ports, queried exactly once per node at its first visit.
///
/// A static grid answers from its edge set; the adversary commits structure
/// lazily as nodes are reached.
pub trait Terrain {
    fn reveal(&mut self, node: Coord) -> Ports;
}

impl Terrain for &PartialGrid {
    fn reveal(&mut self, node: Coord) -> Ports {
        self.ports(node).unwrap_or(Ports::NONE)
    }
}

/// Contamination state of a partially explored grid.
///
/// Only visited nodes have known ports. An edge is clean iff it is in the
/// clean set; every other edge (known or not) is contaminated.
#[derive(Debug)]
pub struct SearchState<T> {
    terrain: T,
    homebase: Coord,
    ports: HashMap<Coord, Ports>,
    visit_order: Vec<Coord>,
    clean: HashSet<Edge>,
    clean_degree: HashMap<Coord, u8>,
    positions: Vec<Coord>,
    occupants: HashMap<Coord, Vec<SearcherId>>,
    dirty_nodes: usize,
    move_count: usize,
    recontaminations: usize,
    fog_queries: Cell<u64>,
}

impl<T: Terrain> SearchState<T> {
    /// Fresh state: every edge contaminated, no searcher introduced yet,
    /// homebase visited.
    pub fn new(terrain: T, homebase: Coord) -> Self {
        let mut st = SearchState {
            terrain,
            homebase,
            ports: HashMap::new(),
            visit_order: Vec::new(),
            clean: HashSet::new(),
            clean_degree: HashMap::new(),
            positions: Vec::new(),
            occupants: HashMap::new(),
            dirty_nodes: 0,
            move_count: 0,
            recontaminations: 0,
            fog_queries: Cell::new(0),
        };
        st.visit(homebase);
        st
    }

    /// Places a new searcher on the homebase and returns its id.
    pub fn introduce(&mut self) -> SearcherId {
        let id = self.positions.len();
        self.positions.push(self.homebase);
        self.occupants.entry(self.homebase).or_default().push(id);
        id
    }

    fn visit(&mut self, node: Coord) {
        if self.ports.contains_key(&node) {
            return;
        }
        let p = self.terrain.reveal(node);
        self.ports.insert(node, p);
        self.visit_order.push(node);
        if p.count() > 0 {
            self.dirty_nodes += 1;
        }
    }

    fn contaminated_degree_raw(&self, v: Coord) -> usize {
        match self.ports.get(&v) {
            Some(p) => p.count() - *self.clean_degree.get(&v).unwrap_or(&0) as usize,
            None => 0,
        }
    }

    fn set_clean(&mut self, e: Edge, clean: bool) {
        let changed = if clean { self.clean.insert(e) } else { self.clean.remove(&e) };
        if !changed {
            return;
        }
        let (a, b) = e.endpoints();
        for v in [a, b] {
            let before = self.contaminated_degree_raw(v);
            let d = self.clean_degree.entry(v).or_insert(0);
            if clean {
                *d += 1;
            } else {
                *d -= 1;
            }
            let after = self.contaminated_degree_raw(v);
            if before > 0 && after == 0 {
                self.dirty_nodes -= 1;
            } else if before == 0 && after > 0 {
                self.dirty_nodes += 1;
            }
        }
    }

    /// Slides a searcher and applies the recontamination fixpoint.
    /// Returns the edges that were recontaminated (empty when monotone).
    pub fn apply_slide(&mut self, m: Move) -> Result<Vec<Edge>, StateError> {
        let illegal = |reason| StateError::IllegalMove {
            searcher: m.searcher,
            from: m.from,
            to: m.to,
            reason,
        };
        match self.positions.get(m.searcher) {
            None => return Err(illegal("unknown searcher")),
            Some(p) if *p != m.from => return Err(illegal("searcher is not at the source node")),
            _ => {}
        }
        let dir = m.from.dir_to(m.to).ok_or_else(|| illegal("nodes are not adjacent"))?;
        if !self.ports[&m.from].has(dir) {
            return Err(illegal("no such edge"));
        }
        self.visit(m.to);
        let occ = self.occupants.get_mut(&m.from).expect("occupied source");
        occ.retain(|s| *s != m.searcher);
        if occ.is_empty() {
            self.occupants.remove(&m.from);
        }
        let dest = self.occupants.entry(m.to).or_default();
        let at = dest.partition_point(|s| *s < m.searcher);
        dest.insert(at, m.searcher);
        self.positions[m.searcher] = m.to;
        self.set_clean(Edge::new(m.from, m.to), true);
        self.move_count += 1;
        let report = self.recontaminate_from(m.from);
        self.recontaminations += report.len();
        Ok(report)
    }

    fn violates(&self, v: Coord) -> bool {
        !self.is_occupied(v)
            && *self.clean_degree.get(&v).unwrap_or(&0) > 0
            && self.contaminated_degree_raw(v) > 0
    }

    fn recontaminate_from(&mut self, start: Coord) -> Vec<Edge> {
        let mut report = Vec::new();
        let mut work = VecDeque::from([start]);
        while let Some(v) = work.pop_front() {
            if !self.violates(v) {
                continue;
            }
            let ports = self.ports[&v];
            for d in ports.iter() {
                let e = Edge::new(v, v.step(d));
                if self.clean.contains(&e) {
                    self.set_clean(e, false);
                    report.push(e);
                    work.push_back(e.other(v));
                }
            }
        }
        report.sort();
        report
    }

    /// Moves a searcher along a clean path; every slide must be monotone.
    pub fn walk(&mut self, searcher: SearcherId, path: &[Coord]) -> Result<Vec<Move>, StateError> {
        let mut moves = Vec::new();
        for w in path.windows(2) {
            let m = Move {
                searcher,
                from: w[0],
                to: w[1],
            };
            self.apply_slide(m)?;
            moves.push(m);
        }
        Ok(moves)
    }
}

impl<T> SearchState<T> {
    pub fn homebase(&self) -> Coord {
        self.homebase
    }

    pub fn terrain(&self) -> &T {
        &self.terrain
    }

    pub fn into_terrain(self) -> T {
        self.terrain
    }

    pub fn is_visited(&self, v: Coord) -> bool {
        self.ports.contains_key(&v)
    }

    /// Visited nodes in the order they were first reached.
    pub fn visited(&self) -> &[Coord] {
        &self.visit_order
    }

    pub fn is_clean(&self, e: Edge) -> bool {
        self.clean.contains(&e)
    }

    pub fn clean_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.clean.iter().copied()
    }

    pub fn clean_edge_count(&self) -> usize {
        self.clean.len()
    }

    pub fn clean_degree(&self, v: Coord) -> usize {
        *self.clean_degree.get(&v).unwrap_or(&0) as usize
    }

    /// Known contaminated edges at a visited node; 0 for unvisited nodes.
    pub fn contaminated_degree(&self, v: Coord) -> usize {
        match self.ports.get(&v) {
            Some(p) => p.count() - self.clean_degree(v),
            None => 0,
        }
    }

    pub fn searcher_count(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, s: SearcherId) -> Coord {
        self.positions[s]
    }

    pub fn occupants(&self, v: Coord) -> &[SearcherId] {
        self.occupants.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_occupied(&self, v: Coord) -> bool {
        self.occupants.contains_key(&v)
    }

    pub fn move_count(&self) -> usize {
        self.move_count
    }

    pub fn recontamination_count(&self) -> usize {
        self.recontaminations
    }

    /// True iff `v` is an endpoint of a clean edge and of a contaminated edge.
    pub fn needs_guard(&self, v: Coord) -> bool {
        self.clean_degree(v) > 0 && self.contaminated_degree(v) > 0
    }

    /// Visited node with a contaminated incident edge. Equals `needs_guard`
    /// except on the homebase before the first edge is cleared.
    pub fn requires_guard(&self, v: Coord) -> bool {
        self.contaminated_degree(v) > 0
    }

    /// No visited node has a contaminated edge: the explored graph is clean.
    pub fn all_clean(&self) -> bool {
        self.dirty_nodes == 0
    }

    /// Ports of a visited node. Querying an unvisited node is a fog-of-war
    /// violation; it is counted and answered with `None`.
    pub fn ports(&self, v: Coord) -> Option<Ports> {
        let p = self.ports.get(&v).copied();
        if p.is_none() {
            self.fog_queries.set(self.fog_queries.get() + 1);
        }
        p
    }

    pub fn fog_violations(&self) -> u64 {
        self.fog_queries.get()
    }

    pub fn view(&self) -> ExploredView<'_, T> {
        ExploredView { state: self }
    }

    /// Known contaminated edges at a visited node, as neighbour coordinates.
    pub fn contaminated_neighbors(&self, v: Coord) -> Vec<Coord> {
        match self.ports.get(&v) {
            Some(p) => p
                .iter()
                .map(|d| v.step(d))
                .filter(|w| !self.clean.contains(&Edge::new(v, *w)))
                .collect(),
            None => Vec::new(),
        }
    }

    fn clean_neighbors(&self, v: Coord) -> impl Iterator<Item = Coord> + '_ {
        let p = self.ports.get(&v).copied().unwrap_or(Ports::NONE);
        p.iter()
            .map(move |d: Dir| v.step(d))
            .filter(move |w| self.clean.contains(&Edge::new(v, *w)))
    }

    /// Breadth-first search over clean edges from `start` to the nearest node
    /// satisfying `goal`. Returns the path from `start` to that node.
    pub fn clean_path_to(&self, start: Coord, goal: impl Fn(Coord) -> bool) -> Option<Vec<Coord>> {
        if goal(start) {
            return Some(vec![start]);
        }
        let mut parent: HashMap<Coord, Coord> = HashMap::from([(start, start)]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in self.clean_neighbors(u) {
                if parent.contains_key(&v) {
                    continue;
                }
                parent.insert(v, u);
                if goal(v) {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != start {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
        None
    }

    /// Slides along a shortest clean path taking `searcher` to `target`.
    /// The moves are computed but not applied.
    pub fn relocate(&self, searcher: SearcherId, target: Coord) -> Result<Vec<Move>, StateError> {
        let from = self.positions[searcher];
        let path = self
            .clean_path_to(from, |c| c == target)
            .ok_or(StateError::NoCleanPath { from, to: target })?;
        Ok(path
            .windows(2)
            .map(|w| Move {
                searcher,
                from: w[0],
                to: w[1],
            })
            .collect())
    }
}

/// Read-only window exposing only what searchers have observed.
pub struct ExploredView<'s, T> {
    state: &'s SearchState<T>,
}

impl<T> ExploredView<'_, T> {
    pub fn homebase(&self) -> Coord {
        self.state.homebase()
    }

    pub fn is_visited(&self, v: Coord) -> bool {
        self.state.is_visited(v)
    }

    /// Port directions of a visited node; `None` (and a logged violation)
    /// for anything not yet visited.
    pub fn ports(&self, v: Coord) -> Option<Ports> {
        self.state.ports(v)
    }

    pub fn is_clean(&self, e: Edge) -> bool {
        self.state.is_clean(e)
    }

    pub fn occupants(&self, v: Coord) -> &[SearcherId] {
        self.state.occupants(v)
    }
}
