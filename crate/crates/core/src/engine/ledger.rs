use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One iteration of the inner loop: a single expansion of the active checkpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step: usize,
    pub phase: usize,
    pub active: u64,
    pub depth: i64,
    /// Weights of all present checkpoints at the beginning of the step.
    pub weights: BTreeMap<u64, usize>,
    pub strip_calls: usize,
    pub explored: usize,
    pub peak_cleaners: usize,
    pub peak_explorers: usize,
    pub guards_after: usize,
    pub free_after: usize,
    pub searchers_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseRecord {
    pub phase: usize,
    pub first_step: usize,
    pub last_step: usize,
    /// Active checkpoint of the last step.
    pub active: u64,
    /// Whether the phase ended with an upgrade (false only for the final one).
    pub upgraded: bool,
    pub born: Vec<u64>,
    pub died: Vec<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    pub steps: Vec<StepRecord>,
    pub phases: Vec<PhaseRecord>,
    /// Weights after the last step.
    pub terminal_weights: BTreeMap<u64, usize>,
    pub explored_by: BTreeMap<u64, usize>,
    pub predecessors: BTreeMap<u64, Vec<u64>>,
    /// Guarded node count after initialization.
    pub initial_guards: usize,
}

impl Ledger {
    /// `w(C, t)`; `t == steps.len()` reads the terminal snapshot.
    pub fn weight(&self, id: u64, t: usize) -> usize {
        let snap = if t < self.steps.len() {
            &self.steps[t].weights
        } else {
            &self.terminal_weights
        };
        snap.get(&id).copied().unwrap_or(0)
    }

    pub fn present(&self, id: u64, t: usize) -> bool {
        let snap = if t < self.steps.len() {
            &self.steps[t].weights
        } else {
            &self.terminal_weights
        };
        snap.contains_key(&id)
    }

    /// Minimum weight over the steps in which the checkpoint is present.
    pub fn bottleneck(&self, id: u64) -> usize {
        self.steps
            .iter()
            .filter_map(|r| r.weights.get(&id).copied())
            .min()
            .unwrap_or(0)
    }

    pub fn peak_guards(&self) -> usize {
        self.steps
            .iter()
            .map(|r| r.guards_after)
            .max()
            .unwrap_or(0)
            .max(self.initial_guards)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub violations: usize,
    pub first: Option<String>,
}

impl Check {
    pub fn new(name: &'static str) -> Self {
        Check {
            name,
            violations: 0,
            first: None,
        }
    }

    pub fn fail(&mut self, detail: impl FnOnce() -> String) {
        if self.first.is_none() {
            self.first = Some(detail());
        }
        self.violations += 1;
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: Vec<Check>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.first {
                None => writeln!(f, "{:<28} pass", c.name)?,
                Some(d) => writeln!(f, "{:<28} FAIL x{} (first: {d})", c.name, c.violations)?,
            }
        }
        Ok(())
    }
}

/// Re-checks the weight lemmas against a finished run's ledger.
pub fn assert_lemma_suite(ledger: &Ledger, side: i64) -> LemmaReport {
    let s = side.max(1) as usize;
    let t_end = ledger.steps.len();

    let mut inactive = Check::new("inactive-non-growth");
    for (t, r) in ledger.steps.iter().enumerate() {
        for (&id, &w) in &r.weights {
            if id != r.active && ledger.weight(id, t + 1) > w {
                inactive.fail(|| format!("checkpoint {id} step {t}: {w} -> {}", ledger.weight(id, t + 1)));
            }
        }
    }

    let mut interval = Check::new("active-interval-non-growth");
    let mut t = 0;
    while t < t_end {
        let id = ledger.steps[t].active;
        let mut end = t;
        while end + 1 < t_end && ledger.steps[end + 1].active == id {
            end += 1;
        }
        let (w0, w1) = (ledger.weight(id, t), ledger.weight(id, end + 1));
        if w1 > w0 {
            interval.fail(|| format!("checkpoint {id} steps {t}..={end}: {w0} -> {w1}"));
        }
        t = end + 1;
    }

    let mut phase_end = Check::new("phase-non-growth");
    let mut total = Check::new("phase-end-total-weight");
    let mut explored = Check::new("explored-vs-bottleneck");
    for p in &ledger.phases {
        for (&id, &w) in &ledger.steps[p.first_step].weights {
            let after = ledger.weight(id, p.last_step + 1);
            if after > w {
                phase_end.fail(|| format!("phase {} checkpoint {id}: {w} -> {after}", p.phase));
            }
        }
        let snap = &ledger.steps[p.last_step].weights;
        let sum: usize = snap.values().sum();
        let lim = ledger.weight(p.active, p.last_step) + 10 * s;
        if sum > lim {
            total.fail(|| format!("phase {}: total {sum} > {lim}", p.phase));
        }
        if p.upgraded {
            let b = ledger.bottleneck(p.active);
            let e = ledger.explored_by.get(&p.active).copied().unwrap_or(0);
            if e < b * s {
                explored.fail(|| format!("checkpoint {} explored {e} < {b}*{s}", p.active));
            }
        }
    }

    let mut preds = Check::new("predecessors-at-most-10");
    for (id, ps) in &ledger.predecessors {
        if ps.len() > 10 {
            preds.fail(|| format!("checkpoint {id} has {} predecessors", ps.len()));
        }
    }
    let mut successors: BTreeSet<u64> = BTreeSet::new();
    for ps in ledger.predecessors.values() {
        for p in ps {
            if !successors.insert(*p) {
                preds.fail(|| format!("checkpoint {p} has two successors"));
            }
        }
    }

    LemmaReport {
        checks: vec![inactive, interval, phase_end, explored, preds, total],
    }
}
