use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::geometry::{Checkpoint, Frontier};
use crate::grid::Coord;

/// A checkpoint in the collection together with the guarded nodes it owns.
#[derive(Debug, Clone)]
pub struct LiveCheckpoint {
    pub checkpoint: Checkpoint,
    pub owned: BTreeSet<Coord>,
}

#[derive(Debug, Default)]
pub struct CheckpointCollection {
    live: BTreeMap<u64, LiveCheckpoint>,
    owner: HashMap<Coord, u64>,
    next_id: u64,
}

impl CheckpointCollection {
    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.live.keys().copied()
    }

    pub fn get(&self, id: u64) -> Option<&LiveCheckpoint> {
        self.live.get(&id)
    }

    pub fn get_mut(&mut self, id: u64) -> Option<&mut LiveCheckpoint> {
        self.live.get_mut(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &LiveCheckpoint)> {
        self.live.iter().map(|(id, c)| (*id, c))
    }

    pub fn weight(&self, id: u64) -> usize {
        self.live.get(&id).map_or(0, |c| c.owned.len())
    }

    pub fn weights(&self) -> BTreeMap<u64, usize> {
        self.live.iter().map(|(id, c)| (*id, c.owned.len())).collect()
    }

    pub fn owner_of(&self, v: Coord) -> Option<u64> {
        self.owner.get(&v).copied()
    }

    pub fn owned_total(&self) -> usize {
        self.owner.len()
    }

    /// Adds a checkpoint with no owned nodes and returns its id.
    pub fn create(&mut self, frontier: Frontier, seeds: BTreeSet<Coord>) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.live.insert(
            id,
            LiveCheckpoint {
                checkpoint: Checkpoint::new(id, frontier, seeds),
                owned: BTreeSet::new(),
            },
        );
        id
    }

    pub fn remove(&mut self, id: u64) -> Option<LiveCheckpoint> {
        let c = self.live.remove(&id)?;
        for v in &c.owned {
            if self.owner.get(v) == Some(&id) {
                self.owner.remove(v);
            }
        }
        Some(c)
    }

    /// Gives `v` to `id`, taking it from its previous owner.
    pub fn claim(&mut self, v: Coord, id: u64) {
        if let Some(prev) = self.owner.insert(v, id) {
            if prev != id {
                if let Some(c) = self.live.get_mut(&prev) {
                    c.owned.remove(&v);
                }
            }
        }
        self.live.get_mut(&id).expect("claiming checkpoint is live").owned.insert(v);
    }

    pub fn disown(&mut self, v: Coord) {
        if let Some(prev) = self.owner.remove(&v) {
            if let Some(c) = self.live.get_mut(&prev) {
                c.owned.remove(&v);
            }
        }
    }

    /// Checkpoint of maximum weight, ties to the smallest id.
    pub fn select_max(&self) -> Option<u64> {
        let mut best: Option<(usize, u64)> = None;
        for (&id, c) in &self.live {
            let w = c.owned.len();
            if best.is_none_or(|(bw, _)| w > bw) {
                best = Some((w, id));
            }
        }
        best.map(|(_, id)| id)
    }

    /// The checkpoint on `frontier` that is still in its 0-th expansion.
    pub fn fresh_on(&self, frontier: &Frontier) -> Option<u64> {
        self.live
            .iter()
            .find(|(_, c)| c.checkpoint.frontier == *frontier && c.checkpoint.expansions_done == 0)
            .map(|(id, _)| *id)
    }

    /// Owned sets must partition `guarded` exactly.
    pub fn partition_error(&self, guarded: &BTreeSet<Coord>) -> Option<String> {
        let mut seen = 0usize;
        for (id, c) in &self.live {
            for v in &c.owned {
                if self.owner.get(v) != Some(id) {
                    return Some(format!("node {v} listed by {id} but owned by {:?}", self.owner.get(v)));
                }
                if !guarded.contains(v) {
                    return Some(format!("checkpoint {id} owns unguarded node {v}"));
                }
                seen += 1;
            }
        }
        if seen != guarded.len() || self.owner.len() != guarded.len() {
            let orphan = guarded.iter().find(|v| !self.owner.contains_key(v));
            return Some(format!(
                "{} guarded node(s) but {seen} owned; first orphan {orphan:?}",
                guarded.len()
            ));
        }
        None
    }
}
