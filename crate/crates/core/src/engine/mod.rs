//! The online searcher: checkpoints expanded one rectangle at a time, with
//! per-step weight bookkeeping and the resulting lemma checks.

pub mod collection;
pub mod ledger;
pub mod unknown;

use std::collections::BTreeSet;

use crate::crew::{Crew, EngineError, Role};
use crate::geometry::{Frontier, SideParam};
use crate::grid::{Coord, Dir, PartialGrid};
use crate::state::{SearchState, Terrain};
use crate::strip::{clean_component, strip_peak_bound, StripReport, StripTask, STRIP_A, STRIP_B};
use crate::trace::{Annotation, StrategyTrace};

use collection::CheckpointCollection;
use ledger::{assert_lemma_suite, Check, Ledger, LemmaReport, PhaseRecord, StepRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub strip_a: usize,
    pub strip_b: usize,
    /// Total searchers that may be introduced; `None` is unlimited.
    pub budget: Option<usize>,
    /// Abort a strip call that exceeds `a * i + b` cleaners instead of only recording it.
    pub enforce_strip_bound: bool,
    pub max_steps: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            strip_a: STRIP_A,
            strip_b: STRIP_B,
            budget: None,
            enforce_strip_bound: false,
            max_steps: 5_000_000,
        }
    }
}

impl EngineConfig {
    /// `(40 + a) * s + b`: guards, explorers and cleaners together.
    pub fn peak_bound(&self, side: i64) -> usize {
        (40 + self.strip_a) * side as usize + self.strip_b
    }

    /// Coefficient of `s` in the peak bound, used for team sizing.
    pub fn team_constant(&self) -> usize {
        40 + self.strip_a
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metrics {
    pub peak_total: usize,
    pub peak_guards: usize,
    pub peak_cleaners: usize,
    pub peak_explorers: usize,
    pub bound: usize,
    pub phases: usize,
    pub steps: usize,
    pub moves: usize,
    pub strip_calls: usize,
}

#[derive(Debug)]
pub struct EngineRun<T> {
    pub side: i64,
    pub trace: StrategyTrace,
    pub ledger: Ledger,
    pub lemmas: LemmaReport,
    /// Decomposition of the peak into explorers, cleaners and guards.
    pub bounds: LemmaReport,
    pub metrics: Metrics,
    pub strips: Vec<StripReport>,
    pub state: SearchState<T>,
}

impl<T> EngineRun<T> {
    pub fn lemma_suite_pass(&self) -> bool {
        self.lemmas.all_pass()
    }
}

/// Runs the searcher on a static grid whose homebase is the origin.
pub fn run_on_grid<'g>(
    grid: &'g PartialGrid,
    side: SideParam,
    config: &EngineConfig,
) -> Result<EngineRun<&'g PartialGrid>, EngineError> {
    if grid.homebase() != Coord::ORIGIN {
        return Err(EngineError::Invariant("homebase must be the origin".into()));
    }
    grid_searching(grid, side, config)
}

struct Engine<T> {
    crew: Crew<T>,
    cc: CheckpointCollection,
    ledger: Ledger,
    strips: Vec<StripReport>,
    side: SideParam,
    config: EngineConfig,
}

/// The searcher, run on any terrain whose homebase is the origin.
pub fn grid_searching<T: Terrain>(
    terrain: T,
    side: SideParam,
    config: &EngineConfig,
) -> Result<EngineRun<T>, EngineError> {
    let mut e = Engine {
        crew: Crew::new(terrain, Coord::ORIGIN, config.budget),
        cc: CheckpointCollection::default(),
        ledger: Ledger::default(),
        strips: Vec::new(),
        side,
        config: config.clone(),
    };
    e.crew.annotate(Annotation::Phase(0));
    e.initialize()?;
    e.main_loop()?;
    Ok(e.finish())
}

impl<T: Terrain> Engine<T> {
    fn guarded(&self) -> BTreeSet<Coord> {
        let st = self.crew.state();
        st.visited().iter().copied().filter(|v| st.requires_guard(*v)).collect()
    }

    fn check_partition(&self) -> Result<(), EngineError> {
        if let Some(msg) = self.cc.partition_error(&self.guarded()) {
            return Err(EngineError::Invariant(msg));
        }
        self.crew.check_posts()
    }

    /// Clears the homebase's component along the homebase frontier and
    /// makes it the initial checkpoint.
    fn initialize(&mut self) -> Result<(), EngineError> {
        let s = self.side.get();
        let mut nodes = vec![Coord::ORIGIN];
        let mut placed = vec![self.crew.introduce(Role::Guard)?];
        for k in 1..=s {
            let prev = Coord::new(k - 1, 0);
            let open = self.crew.state().ports(prev).is_some_and(|p| p.has(Dir::Right));
            if !open {
                break;
            }
            let sid = self.crew.introduce(Role::Guard)?;
            self.crew.send(sid, prev)?;
            let next = Coord::new(k, 0);
            self.crew.slide(sid, next)?;
            nodes.push(next);
            placed.push(sid);
        }
        let seeds: BTreeSet<Coord> = nodes.iter().copied().collect();
        let id = self.cc.create(Frontier::homebase(self.side), seeds);
        for (&v, &sid) in nodes.iter().zip(&placed) {
            if self.crew.state().requires_guard(v) {
                self.crew.assign_post(v, sid, Role::Guard);
                self.cc.claim(v, id);
            } else {
                self.crew.set_role(sid, Role::Free);
            }
        }
        if self.cc.weight(id) == 0 {
            self.cc.remove(id);
        }
        self.ledger.initial_guards = self.crew.post_count();
        self.check_partition()
    }

    fn main_loop(&mut self) -> Result<(), EngineError> {
        let s = self.side.get();
        let mut phase = 0;
        let mut phase_first = 0;
        let mut upgraded: Vec<u64> = Vec::new();
        let mut has_successor: BTreeSet<u64> = BTreeSet::new();
        let mut enders: BTreeSet<u64> = BTreeSet::new();
        loop {
            if self.crew.state().all_clean() || self.cc.is_empty() {
                break;
            }
            let step = self.ledger.steps.len();
            if step >= self.config.max_steps {
                return Err(EngineError::Invariant(format!("no termination after {step} steps")));
            }
            let active = self.cc.select_max().expect("non-empty collection");
            let weights = self.cc.weights();
            self.crew.annotate(Annotation::Step(step));
            let depth = self.cc.get(active).expect("live").checkpoint.expansions_done + 1;
            let rec = self.clean_expansion(active, depth)?;
            *self.ledger.explored_by.entry(active).or_insert(0) += rec.explored;
            self.ledger.steps.push(StepRecord {
                step,
                phase,
                active,
                depth,
                weights,
                guards_after: self.crew.post_count(),
                free_after: self.crew.free_count(),
                searchers_after: self.crew.searcher_count(),
                ..rec
            });
            self.check_partition()?;
            if depth < s {
                continue;
            }
            let preds: Vec<u64> = upgraded
                .iter()
                .copied()
                .filter(|c| *c != active && !has_successor.contains(c) && !enders.contains(c))
                .collect();
            has_successor.extend(preds.iter().copied());
            if upgraded.contains(&active) {
                self.ledger.predecessors.insert(active, preds);
            }
            enders.insert(active);
            let (born, died) = self.upgrade(active)?;
            upgraded.extend(born.iter().copied());
            self.ledger.phases.push(PhaseRecord {
                phase,
                first_step: phase_first,
                last_step: step,
                active,
                upgraded: true,
                born,
                died,
            });
            self.check_partition()?;
            phase += 1;
            phase_first = step + 1;
            self.crew.annotate(Annotation::Phase(phase));
        }
        let steps = self.ledger.steps.len();
        if steps > phase_first {
            let active = self.ledger.steps[steps - 1].active;
            self.ledger.phases.push(PhaseRecord {
                phase,
                first_step: phase_first,
                last_step: steps - 1,
                active,
                upgraded: false,
                born: Vec::new(),
                died: Vec::new(),
            });
        }
        self.ledger.terminal_weights = self.cc.weights();
        if !self.crew.state().all_clean() {
            return Err(EngineError::Invariant("checkpoints exhausted before the graph was clean".into()));
        }
        Ok(())
    }

    /// One step: strip calls from every guarded node the checkpoint owns.
    fn clean_expansion(&mut self, id: u64, depth: i64) -> Result<StepRecord, EngineError> {
        let live = self.cc.get(id).expect("live");
        let frontier = live.checkpoint.frontier;
        let prev: Vec<Coord> = live.owned.iter().copied().collect();
        let visited_before = self.crew.state().visited().len();
        let bound = strip_peak_bound(self.config.strip_a, self.config.strip_b, depth);
        let mut touched = BTreeSet::new();
        let (mut calls, mut peak_c, mut peak_e) = (0, 0, 0);
        for v in prev {
            if !self.crew.state().requires_guard(v) {
                continue;
            }
            let task = StripTask {
                frontier,
                depth,
                start: v,
                cleaner_budget: self.config.enforce_strip_bound.then_some(bound),
            };
            let rep = clean_component(&mut self.crew, &task)?;
            calls += 1;
            peak_c = peak_c.max(rep.peak_cleaners);
            peak_e = peak_e.max(rep.explorers_placed);
            touched.extend(rep.cleared_nodes.iter().copied());
            self.strips.push(rep);
        }
        for t in touched {
            if self.crew.state().requires_guard(t) {
                self.cc.claim(t, id);
            } else {
                self.cc.disown(t);
            }
        }
        self.cc.get_mut(id).expect("live").checkpoint.expansions_done = depth;
        Ok(StepRecord {
            step: 0,
            phase: 0,
            active: id,
            depth,
            weights: Default::default(),
            strip_calls: calls,
            explored: self.crew.state().visited().len() - visited_before,
            peak_cleaners: peak_c,
            peak_explorers: peak_e,
            guards_after: 0,
            free_after: 0,
            searchers_after: 0,
        })
    }

    /// Replaces a checkpoint that finished its last expansion by checkpoints
    /// on the ten frontiers of its outer rectangle.
    fn upgrade(&mut self, id: u64) -> Result<(Vec<u64>, Vec<u64>), EngineError> {
        let dying = self.cc.remove(id).expect("live");
        let mut died = vec![id];
        let mut born = Vec::new();
        let mut assigned = BTreeSet::new();
        for f in dying.checkpoint.frontier.frontiers_on_rectangle() {
            let st = self.crew.state();
            let seeds: BTreeSet<Coord> = f.points().into_iter().filter(|p| st.requires_guard(*p)).collect();
            if seeds.is_empty() {
                continue;
            }
            let transfer: Vec<Coord> = seeds
                .iter()
                .copied()
                .filter(|v| dying.owned.contains(v) && !assigned.contains(v))
                .collect();
            let new = match self.cc.fresh_on(&f) {
                Some(old) => {
                    let old_live = self.cc.remove(old).expect("live");
                    died.push(old);
                    born.retain(|b| *b != old);
                    let mut union = old_live.checkpoint.seed_nodes.clone();
                    union.extend(seeds.iter().copied());
                    let new = self.cc.create(f, union);
                    for v in old_live.owned {
                        self.cc.claim(v, new);
                    }
                    new
                }
                None => self.cc.create(f, seeds),
            };
            for v in transfer {
                self.cc.claim(v, new);
                assigned.insert(v);
            }
            born.push(new);
        }
        if assigned.len() != dying.owned.len() {
            let lost = dying.owned.iter().find(|v| !assigned.contains(v));
            return Err(EngineError::Invariant(format!("upgrade lost guarded node {lost:?}")));
        }
        let empty: Vec<u64> = self.cc.ids().filter(|c| self.cc.weight(*c) == 0).collect();
        for c in empty {
            self.cc.remove(c);
            if let Some(pos) = born.iter().position(|b| *b == c) {
                born.remove(pos);
            } else {
                died.push(c);
            }
        }
        Ok((born, died))
    }

    fn finish(self) -> EngineRun<T> {
        let s = self.side.get();
        let lemmas = assert_lemma_suite(&self.ledger, s);
        let cfg = &self.config;
        let mut explorers = Check::new("explorers-per-call");
        let mut cleaners = Check::new("cleaners-per-call");
        for r in &self.strips {
            if r.explorers_placed > 10 * s as usize {
                explorers.fail(|| format!("call at {} depth {}: {}", r.start, r.depth, r.explorers_placed));
            }
            let b = strip_peak_bound(cfg.strip_a, cfg.strip_b, r.depth);
            if r.peak_cleaners > b {
                cleaners.fail(|| format!("call at {} depth {}: {} > {b}", r.start, r.depth, r.peak_cleaners));
            }
        }
        let mut guards = Check::new("guards-per-step");
        for r in &self.ledger.steps {
            if r.guards_after > 30 * s as usize {
                guards.fail(|| format!("step {}: {}", r.step, r.guards_after));
            }
        }
        let bound = cfg.peak_bound(s);
        let peak_total = self.crew.searcher_count();
        let mut total = Check::new("peak-total");
        if peak_total > bound {
            total.fail(|| format!("{peak_total} > {bound}"));
        }
        let metrics = Metrics {
            peak_total,
            peak_guards: self.ledger.peak_guards(),
            peak_cleaners: self.strips.iter().map(|r| r.peak_cleaners).max().unwrap_or(0),
            peak_explorers: self.strips.iter().map(|r| r.explorers_placed).max().unwrap_or(0),
            bound,
            phases: self.ledger.phases.iter().filter(|p| p.upgraded).count(),
            steps: self.ledger.steps.len(),
            moves: self.crew.trace().moves.len(),
            strip_calls: self.strips.len(),
        };
        let (state, trace) = self.crew.into_parts();
        EngineRun {
            side: s,
            trace,
            ledger: self.ledger,
            lemmas,
            bounds: LemmaReport {
                checks: vec![explorers, cleaners, guards, total],
            },
            metrics,
            strips: self.strips,
            state,
        }
    }
}
