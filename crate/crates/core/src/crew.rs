//! Searcher bookkeeping shared by the online algorithms: roles, the free
//! pool, guard posts, lazy introduction and the recorded move list.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::grid::Coord;
use crate::state::{Move, SearchState, SearcherId, StateError, Terrain};
use crate::trace::{Annotation, StrategyTrace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("searcher budget of {budget} exhausted")]
    BudgetExceeded { budget: usize },
    #[error("strip call at depth {depth} needed {needed} cleaners, budget {budget}")]
    StripBudgetExceeded { depth: i64, needed: usize, budget: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// In the free pool.
    Free,
    /// Holding a guard post between strip calls.
    Guard,
    /// Working for the current strip call.
    Cleaner,
    /// Left on a ring node with a contaminated edge leaving the region.
    Explorer,
}

#[derive(Debug)]
pub struct Crew<T> {
    state: SearchState<T>,
    trace: StrategyTrace,
    roles: Vec<Role>,
    free_at: HashMap<Coord, BTreeSet<SearcherId>>,
    free_count: usize,
    posts: HashMap<Coord, SearcherId>,
    budget: Option<usize>,
}

impl<T: Terrain> Crew<T> {
    pub fn new(terrain: T, homebase: Coord, budget: Option<usize>) -> Self {
        Crew {
            state: SearchState::new(terrain, homebase),
            trace: StrategyTrace::default(),
            roles: Vec::new(),
            free_at: HashMap::new(),
            free_count: 0,
            posts: HashMap::new(),
            budget,
        }
    }

    pub fn state(&self) -> &SearchState<T> {
        &self.state
    }

    pub fn trace(&self) -> &StrategyTrace {
        &self.trace
    }

    pub fn annotate(&mut self, a: Annotation) {
        self.trace.annotate(a);
    }

    pub fn into_parts(mut self) -> (SearchState<T>, StrategyTrace) {
        self.trace.k = self.state.searcher_count();
        (self.state, self.trace)
    }

    pub fn role(&self, s: SearcherId) -> Role {
        self.roles[s]
    }

    pub fn set_role(&mut self, s: SearcherId, role: Role) {
        let old = self.roles[s];
        if old == role {
            return;
        }
        let at = self.state.position(s);
        if old == Role::Free {
            let set = self.free_at.get_mut(&at).expect("free searcher indexed");
            set.remove(&s);
            if set.is_empty() {
                self.free_at.remove(&at);
            }
            self.free_count -= 1;
        }
        if role == Role::Free {
            self.free_at.entry(at).or_default().insert(s);
            self.free_count += 1;
        }
        self.roles[s] = role;
    }

    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn searcher_count(&self) -> usize {
        self.state.searcher_count()
    }

    /// Brings a new searcher onto the homebase, subject to the budget.
    pub fn introduce(&mut self, role: Role) -> Result<SearcherId, EngineError> {
        if let Some(b) = self.budget {
            if self.state.searcher_count() >= b {
                return Err(EngineError::BudgetExceeded { budget: b });
            }
        }
        let s = self.state.introduce();
        self.roles.push(Role::Guard);
        self.set_role(s, role);
        Ok(s)
    }

    /// Slides `s` to the neighbour `to`. Recontamination is a hard error.
    pub fn slide(&mut self, s: SearcherId, to: Coord) -> Result<(), EngineError> {
        let from = self.state.position(s);
        let m = Move { searcher: s, from, to };
        let free = self.roles[s] == Role::Free;
        if free {
            self.set_role(s, Role::Guard);
        }
        let report = self.state.apply_slide(m)?;
        if !report.is_empty() {
            return Err(EngineError::Invariant(format!(
                "move {from}->{to} of searcher {s} recontaminated {} edge(s)",
                report.len()
            )));
        }
        if free {
            self.set_role(s, Role::Free);
        }
        self.trace.moves.push(m);
        Ok(())
    }

    pub fn walk(&mut self, s: SearcherId, path: &[Coord]) -> Result<(), EngineError> {
        debug_assert_eq!(path.first().copied(), Some(self.state.position(s)));
        for &c in path.iter().skip(1) {
            self.slide(s, c)?;
        }
        Ok(())
    }

    /// Walks `s` along a shortest clean path to `target`.
    pub fn send(&mut self, s: SearcherId, target: Coord) -> Result<(), EngineError> {
        let from = self.state.position(s);
        let path = self
            .state
            .clean_path_to(from, |c| c == target)
            .ok_or(StateError::NoCleanPath { from, to: target })?;
        self.walk(s, &path)
    }

    /// Takes the free searcher nearest to `target` (or a new one when the
    /// pool is empty), gives it `role` and walks it to `target`.
    pub fn acquire(&mut self, target: Coord, role: Role) -> Result<SearcherId, EngineError> {
        if self.free_count > 0 {
            if let Some(mut path) = self.state.clean_path_to(target, |c| self.free_at.contains_key(&c)) {
                let at = *path.last().expect("non-empty path");
                let s = *self.free_at[&at].iter().next().expect("free searcher");
                self.set_role(s, role);
                path.reverse();
                self.walk(s, &path)?;
                return Ok(s);
            }
        }
        let s = self.introduce(role)?;
        self.send(s, target)?;
        Ok(s)
    }

    /// Searcher currently holding the guard post at `v`.
    pub fn post(&self, v: Coord) -> Option<SearcherId> {
        self.posts.get(&v).copied()
    }

    pub fn posts(&self) -> impl Iterator<Item = (Coord, SearcherId)> + '_ {
        self.posts.iter().map(|(c, s)| (*c, *s))
    }

    pub fn post_count(&self) -> usize {
        self.posts.len()
    }

    pub fn assign_post(&mut self, v: Coord, s: SearcherId, role: Role) {
        debug_assert_eq!(self.state.position(s), v);
        debug_assert!(!self.posts.contains_key(&v));
        self.posts.insert(v, s);
        self.set_role(s, role);
    }

    pub fn vacate_post(&mut self, v: Coord) -> Option<SearcherId> {
        self.posts.remove(&v)
    }

    /// Checks that every node that must stay occupied holds a guard post.
    pub fn check_posts(&self) -> Result<(), EngineError> {
        for &v in self.state.visited() {
            if self.state.requires_guard(v) && !self.posts.contains_key(&v) {
                return Err(EngineError::Invariant(format!("node {v} needs a guard but has no post")));
            }
        }
        for (&v, &s) in &self.posts {
            if self.state.position(s) != v {
                return Err(EngineError::Invariant(format!("post {v} holder {s} has wandered off")));
            }
        }
        Ok(())
    }
}
