//! The strip cleaner: clears the contaminated component of one guarded node
//! inside a filled frontier rectangle, growing a connected clean set in a
//! band sweep outward from the start node.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::crew::{Crew, EngineError, Role};
use crate::geometry::{Frontier, Rect};
use crate::grid::{Coord, Dir, Edge};
use crate::state::{SearcherId, Terrain};

/// Default constants of the per-call cleaner bound `a * i + b`.
pub const STRIP_A: usize = 6;
pub const STRIP_B: usize = 4;

pub fn strip_peak_bound(a: usize, b: usize, depth: i64) -> usize {
    a * depth.max(0) as usize + b
}

#[derive(Debug, Clone)]
pub struct StripTask {
    pub frontier: Frontier,
    pub depth: i64,
    pub start: Coord,
    /// Hard cap on simultaneously working cleaners; `None` only measures.
    pub cleaner_budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripReport {
    pub frontier: Frontier,
    pub depth: i64,
    pub start: Coord,
    pub peak_cleaners: usize,
    pub explorers_placed: usize,
    pub cleared_nodes: BTreeSet<Coord>,
    pub moves_emitted: usize,
}

type Key = (Reverse<usize>, i64, i64);

struct Sweep {
    region: Rect,
    frontier: Frontier,
    start: Coord,
    budget: Option<usize>,
    depth: i64,
    touched: HashSet<Coord>,
    idle: HashMap<Coord, BTreeSet<SearcherId>>,
    idle_count: usize,
    working: usize,
    peak: usize,
    explorers: Vec<SearcherId>,
    queue: BTreeSet<(Key, Coord)>,
    keys: HashMap<Coord, Key>,
}

/// Runs one strip call. The start node must be guarded.
pub fn clean_component<T: Terrain>(crew: &mut Crew<T>, task: &StripTask) -> Result<StripReport, EngineError> {
    let region = task
        .frontier
        .rect(task.depth)
        .map_err(|e| EngineError::Invariant(e.to_string()))?;
    if !crew.state().requires_guard(task.start) || crew.post(task.start).is_none() {
        return Err(EngineError::Invariant(format!("strip start {} is not a guarded node", task.start)));
    }
    let moves_before = crew.trace().moves.len();
    let mut sw = Sweep {
        region,
        frontier: task.frontier,
        start: task.start,
        budget: task.cleaner_budget,
        depth: task.depth,
        touched: HashSet::from([task.start]),
        idle: HashMap::new(),
        idle_count: 0,
        working: 0,
        peak: 0,
        explorers: Vec::new(),
        queue: BTreeSet::new(),
        keys: HashMap::new(),
    };
    sw.refresh(crew, &[task.start]);
    while let Some((_, u)) = sw.queue.pop_first() {
        sw.keys.remove(&u);
        sw.add(crew, u)?;
    }
    let explorers_placed = sw.explorers.len();
    sw.finish(crew)?;
    let mut cleared: BTreeSet<Coord> = sw.touched.into_iter().collect();
    cleared.insert(task.start);
    Ok(StripReport {
        frontier: task.frontier,
        depth: task.depth,
        start: task.start,
        peak_cleaners: sw.peak,
        explorers_placed,
        cleared_nodes: cleared,
        moves_emitted: crew.trace().moves.len() - moves_before,
    })
}

impl Sweep {
    fn inside_dirty<T: Terrain>(&self, crew: &Crew<T>, y: Coord) -> Vec<Coord> {
        crew.state()
            .contaminated_neighbors(y)
            .into_iter()
            .filter(|w| self.region.contains(*w))
            .collect()
    }

    /// Touched neighbours of `u` joined to it by a contaminated edge.
    fn attachments<T: Terrain>(&self, crew: &Crew<T>, u: Coord) -> Vec<Coord> {
        let st = crew.state();
        let mut ys: Vec<Coord> = Dir::ALL
            .iter()
            .map(|d| u.step(*d))
            .filter(|y| self.touched.contains(y))
            .filter(|y| {
                let d = y.dir_to(u).expect("adjacent");
                st.ports(*y).is_some_and(|p| p.has(d)) && !st.is_clean(Edge::new(*y, u))
            })
            .collect();
        ys.sort();
        ys
    }

    fn key<T: Terrain>(&self, crew: &Crew<T>, u: Coord) -> Key {
        let closing = self
            .attachments(crew, u)
            .iter()
            .filter(|y| crew.state().contaminated_degree(**y) == 1)
            .count();
        let f = &self.frontier;
        (
            Reverse(closing),
            (f.long_axis(u) - f.long_axis(self.start)).abs(),
            (f.short_axis(u) - f.short_axis(self.start)).abs(),
        )
    }

    /// Recomputes queue keys for every candidate next to the given touched nodes.
    fn refresh<T: Terrain>(&mut self, crew: &Crew<T>, around: &[Coord]) {
        let mut cands = BTreeSet::new();
        for &y in around {
            for w in self.inside_dirty(crew, y) {
                if !self.touched.contains(&w) {
                    cands.insert(w);
                }
            }
        }
        for u in cands {
            if let Some(old) = self.keys.remove(&u) {
                self.queue.remove(&(old, u));
            }
            let k = self.key(crew, u);
            self.keys.insert(u, k);
            self.queue.insert((k, u));
        }
    }

    fn hire(&mut self) -> Result<(), EngineError> {
        self.working += 1;
        self.peak = self.peak.max(self.working);
        if let Some(b) = self.budget {
            if self.working > b {
                return Err(EngineError::StripBudgetExceeded {
                    depth: self.depth,
                    needed: self.working,
                    budget: b,
                });
            }
        }
        Ok(())
    }

    fn park(&mut self, s: SearcherId, at: Coord) {
        self.idle.entry(at).or_default().insert(s);
        self.idle_count += 1;
    }

    fn unpark(&mut self, s: SearcherId, at: Coord) {
        let set = self.idle.get_mut(&at).expect("idle cleaner indexed");
        set.remove(&s);
        if set.is_empty() {
            self.idle.remove(&at);
        }
        self.idle_count -= 1;
    }

    /// A searcher standing on `y` that may leave while `y` stays guarded.
    fn spare<T: Terrain>(&mut self, crew: &mut Crew<T>, y: Coord) -> Result<SearcherId, EngineError> {
        if self.idle_count > 0 {
            let idle = &self.idle;
            if let Some(mut path) = crew.state().clean_path_to(y, |c| idle.contains_key(&c)) {
                let at = *path.last().expect("non-empty path");
                let s = *self.idle[&at].iter().next().expect("idle cleaner");
                self.unpark(s, at);
                path.reverse();
                crew.walk(s, &path)?;
                return Ok(s);
            }
        }
        let s = crew.acquire(y, Role::Cleaner)?;
        self.hire()?;
        Ok(s)
    }

    /// A searcher on `y` to clear its last contaminated edge.
    fn last_mover<T: Terrain>(&mut self, crew: &mut Crew<T>, y: Coord) -> Result<SearcherId, EngineError> {
        if let Some(&s) = self.idle.get(&y).and_then(|set| set.iter().next()) {
            self.unpark(s, y);
            return Ok(s);
        }
        let g = crew
            .vacate_post(y)
            .ok_or_else(|| EngineError::Invariant(format!("guarded node {y} has no post")))?;
        match crew.role(g) {
            Role::Cleaner => {}
            Role::Guard => {
                crew.set_role(g, Role::Cleaner);
                self.hire()?;
            }
            r => return Err(EngineError::Invariant(format!("post {y} held by {r:?} cannot leave"))),
        }
        Ok(g)
    }

    fn arrive<T: Terrain>(&mut self, crew: &mut Crew<T>, s: SearcherId, u: Coord) {
        if crew.state().requires_guard(u) && crew.post(u).is_none() {
            let leaves = crew
                .state()
                .contaminated_neighbors(u)
                .iter()
                .any(|w| !self.region.contains(*w));
            if leaves {
                crew.assign_post(u, s, Role::Explorer);
                self.working -= 1;
                self.explorers.push(s);
            } else {
                crew.assign_post(u, s, Role::Cleaner);
            }
        } else {
            self.park(s, u);
        }
    }

    fn depart<T: Terrain>(&mut self, crew: &mut Crew<T>, y: Coord) -> Result<(), EngineError> {
        if crew.state().requires_guard(y) {
            return Ok(());
        }
        if let Some(g) = crew.vacate_post(y) {
            match crew.role(g) {
                Role::Guard => crew.set_role(g, Role::Free),
                Role::Cleaner => self.park(g, y),
                r => return Err(EngineError::Invariant(format!("{r:?} released from clean node {y}"))),
            }
        }
        Ok(())
    }

    fn add<T: Terrain>(&mut self, crew: &mut Crew<T>, u: Coord) -> Result<(), EngineError> {
        let ys = self.attachments(crew, u);
        debug_assert!(!ys.is_empty());
        for &y in &ys {
            let mover = if crew.state().contaminated_degree(y) > 1 {
                self.spare(crew, y)?
            } else {
                self.last_mover(crew, y)?
            };
            crew.slide(mover, u)?;
            self.arrive(crew, mover, u);
            self.depart(crew, y)?;
        }
        self.depart(crew, u)?;
        self.touched.insert(u);
        let mut around = ys;
        around.push(u);
        self.refresh(crew, &around);
        Ok(())
    }

    fn finish<T: Terrain>(&mut self, crew: &mut Crew<T>) -> Result<(), EngineError> {
        for (_, set) in std::mem::take(&mut self.idle) {
            for s in set {
                crew.set_role(s, Role::Free);
                self.working -= 1;
            }
        }
        self.idle_count = 0;
        if self.working != 0 {
            return Err(EngineError::Invariant(format!(
                "{} cleaner(s) still posted inside the region",
                self.working
            )));
        }
        for s in std::mem::take(&mut self.explorers) {
            crew.set_role(s, Role::Guard);
        }
        for &u in &self.touched {
            if crew.state().requires_guard(u)
                && crew
                    .state()
                    .contaminated_neighbors(u)
                    .iter()
                    .all(|w| self.region.contains(*w))
            {
                return Err(EngineError::Invariant(format!("node {u} left dirty inside the region")));
            }
        }
        Ok(())
    }
}
