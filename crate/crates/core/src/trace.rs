//! Replayable strategy traces and the independent verifier.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{Coord, Edge, PartialGrid};
use crate::state::{Move, SearchState, StateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annotation {
    Phase(usize),
    Step(usize),
}

/// A connected `k`-search strategy: all `k` searchers start on the homebase.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrategyTrace {
    pub k: usize,
    pub moves: Vec<Move>,
    /// `(index of the next move, marker)` pairs; ignored by the verifier.
    pub annotations: Vec<(usize, Annotation)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl StrategyTrace {
    pub fn annotate(&mut self, a: Annotation) {
        self.annotations.push((self.moves.len(), a));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("gridsearch-trace v1\n");
        let _ = writeln!(out, "k {}", self.k);
        let mut notes = self.annotations.iter().peekable();
        for (i, m) in self.moves.iter().enumerate() {
            while let Some((_, a)) = notes.next_if(|(at, _)| *at == i) {
                write_annotation(&mut out, a);
            }
            let _ = writeln!(
                out,
                "slide {} {} {} {} {}",
                m.searcher, m.from.x, m.from.y, m.to.x, m.to.y
            );
        }
        for (_, a) in notes {
            write_annotation(&mut out, a);
        }
        out
    }

    pub fn parse(text: &str) -> Result<StrategyTrace, TraceError> {
        let err = |line, msg: String| TraceError::Parse { line, msg };
        let mut trace = StrategyTrace::default();
        let mut header = false;
        let mut have_k = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() == 2 {
                    if let Ok(n) = f[1].parse::<usize>() {
                        match f[0] {
                            "phase" => trace.annotate(Annotation::Phase(n)),
                            "step" => trace.annotate(Annotation::Step(n)),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            if !header {
                if l != "gridsearch-trace v1" {
                    return Err(err(line, format!("expected header, found `{l}`")));
                }
                header = true;
                continue;
            }
            let f: Vec<&str> = l.split_whitespace().collect();
            match f[0] {
                "k" if f.len() == 2 => {
                    trace.k = f[1].parse().map_err(|_| err(line, "bad k".into()))?;
                    have_k = true;
                }
                "slide" if f.len() == 6 => {
                    let n: Vec<i64> = f[1..]
                        .iter()
                        .map(|x| x.parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| err(line, "bad integer".into()))?;
                    if n[0] < 0 {
                        return Err(err(line, "negative searcher id".into()));
                    }
                    trace.moves.push(Move {
                        searcher: n[0] as usize,
                        from: Coord::new(n[1], n[2]),
                        to: Coord::new(n[3], n[4]),
                    });
                }
                _ => return Err(err(line, format!("malformed record `{l}`"))),
            }
        }
        if !header {
            return Err(err(1, "empty trace".into()));
        }
        if !have_k {
            return Err(err(0, "missing `k` record".into()));
        }
        Ok(trace)
    }
}

fn write_annotation(out: &mut String, a: &Annotation) {
    let _ = match a {
        Annotation::Phase(i) => writeln!(out, "# phase {i}"),
        Annotation::Step(i) => writeln!(out, "# step {i}"),
    };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureKind {
    Illegal(String),
    Recontaminated(Vec<Edge>),
    Disconnected,
    SearcherOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveFailure {
    pub index: usize,
    pub kind: FailureKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub monotone: bool,
    pub connected: bool,
    pub complete: bool,
    pub legal: bool,
    pub peak_searchers: usize,
    pub failures: Vec<MoveFailure>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.monotone && self.connected && self.complete && self.legal
    }
}

fn clean_subgraph_connected<T>(st: &SearchState<T>) -> bool {
    let mut adj: HashMap<Coord, Vec<Coord>> = HashMap::new();
    for e in st.clean_edges() {
        let (a, b) = e.endpoints();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(&start) = adj.keys().next() else {
        return true;
    };
    let mut seen = HashSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(u) = q.pop_front() {
        for v in &adj[&u] {
            if seen.insert(*v) {
                q.push_back(*v);
            }
        }
    }
    seen.len() == adj.len()
}

/// Replays `trace` from all `k` searchers on the homebase and checks
/// monotonicity, connectivity after every move, and final completeness.
/// Illegal moves are reported and skipped.
pub fn verify_trace(grid: &PartialGrid, trace: &StrategyTrace) -> VerificationReport {
    let mut st = SearchState::new(grid, grid.homebase());
    for _ in 0..trace.k {
        st.introduce();
    }
    let mut failures = Vec::new();
    let mut monotone = true;
    let mut connected = true;
    let mut legal = true;
    let mut currently_connected = true;
    for (index, m) in trace.moves.iter().enumerate() {
        if m.searcher >= trace.k {
            legal = false;
            failures.push(MoveFailure {
                index,
                kind: FailureKind::SearcherOutOfRange,
            });
            continue;
        }
        let e = Edge::new(m.from, m.to);
        let was_clean = st.is_clean(e);
        let attaches = st.clean_edge_count() == 0
            || st.clean_degree(m.from) > 0
            || st.clean_degree(m.to) > 0;
        match st.apply_slide(*m) {
            Err(StateError::IllegalMove { reason, .. }) => {
                legal = false;
                failures.push(MoveFailure {
                    index,
                    kind: FailureKind::Illegal(reason.to_string()),
                });
                continue;
            }
            Err(other) => {
                legal = false;
                failures.push(MoveFailure {
                    index,
                    kind: FailureKind::Illegal(other.to_string()),
                });
                continue;
            }
            Ok(report) => {
                let recontaminated = !report.is_empty();
                if recontaminated {
                    monotone = false;
                    failures.push(MoveFailure {
                        index,
                        kind: FailureKind::Recontaminated(report),
                    });
                }
                currently_connected = if recontaminated || !currently_connected {
                    clean_subgraph_connected(&st)
                } else {
                    was_clean || attaches
                };
                if !currently_connected {
                    connected = false;
                    failures.push(MoveFailure {
                        index,
                        kind: FailureKind::Disconnected,
                    });
                }
            }
        }
    }
    VerificationReport {
        monotone,
        connected,
        complete: st.clean_edge_count() == grid.edge_count(),
        legal,
        peak_searchers: trace.k,
        failures,
    }
}
