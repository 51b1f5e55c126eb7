//! Instance generation and metrics tables.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::engine::EngineRun;
use crate::grid::{component_grid, Coord, GridError, PartialGrid};
use crate::strip::{strip_peak_bound, StripReport};

/// Stream id of the random-grid generator; other consumers use other streams.
pub const STREAM_GEN_RANDOM: u64 = 0x6772_6964;
pub const MAX_GEN_ATTEMPTS: u64 = 16;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("origin isolated after {attempts} attempts")]
    EmptyComponent { attempts: u64 },
    #[error("width and height must be at least 1")]
    EmptyLattice,
    #[error("edge keep probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The origin's component of a `w x h` lattice from which every edge was
/// kept independently with probability `p`.
pub fn gen_random(seed: u64, w: u32, h: u32, p: f64) -> Result<PartialGrid, HarnessError> {
    if w == 0 || h == 0 {
        return Err(HarnessError::EmptyLattice);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(HarnessError::BadProbability(p));
    }
    let (w, h) = (w as i64, h as i64);
    for attempt in 0..MAX_GEN_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STREAM_GEN_RANDOM + attempt);
        let mut edges = Vec::new();
        for x in 0..w {
            for y in 0..h {
                let c = Coord::new(x, y);
                if x + 1 < w && rng.gen_bool(p) {
                    edges.push((c, Coord::new(x + 1, y)));
                }
                if y + 1 < h && rng.gen_bool(p) {
                    edges.push((c, Coord::new(x, y + 1)));
                }
            }
        }
        let all = (0..w).flat_map(|x| (0..h).map(move |y| Coord::new(x, y)));
        let g = component_grid(all, edges, Coord::ORIGIN)?;
        if g.node_count() == 1 && w * h > 1 {
            continue;
        }
        return Ok(g);
    }
    Err(HarnessError::EmptyComponent {
        attempts: MAX_GEN_ATTEMPTS,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunRow {
    pub name: String,
    pub n_nodes: usize,
    pub side: i64,
    pub peak_total: usize,
    pub peak_guards: usize,
    pub peak_cleaners: usize,
    pub peak_explorers: usize,
    pub bound: usize,
    pub phases: usize,
    pub steps: usize,
    pub moves: usize,
    pub lemma_suite_pass: bool,
    pub verified: Option<bool>,
    pub l: Option<u32>,
    pub lower_bound: Option<u32>,
    pub oracle_mcs: Option<usize>,
    pub ratio: Option<f64>,
}

impl RunRow {
    pub fn from_run<T>(name: &str, n_nodes: usize, run: &EngineRun<T>) -> Self {
        let m = &run.metrics;
        RunRow {
            name: name.to_string(),
            n_nodes,
            side: run.side,
            peak_total: m.peak_total,
            peak_guards: m.peak_guards,
            peak_cleaners: m.peak_cleaners,
            peak_explorers: m.peak_explorers,
            bound: m.bound,
            phases: m.phases,
            steps: m.steps,
            moves: m.moves,
            lemma_suite_pass: run.lemma_suite_pass(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripRow {
    pub frontier_anchor: String,
    pub orientation: String,
    pub depth_i: i64,
    pub peak_cleaners: usize,
    pub bound: usize,
    pub explorers: usize,
}

impl StripRow {
    pub fn from_report(r: &StripReport, a: usize, b: usize) -> Self {
        let anchor = r.frontier.anchor();
        StripRow {
            frontier_anchor: format!("{} {}", anchor.x, anchor.y),
            orientation: r.frontier.orientation().to_string(),
            depth_i: r.depth,
            peak_cleaners: r.peak_cleaners,
            bound: strip_peak_bound(a, b, r.depth),
            explorers: r.explorers_placed,
        }
    }
}

/// Writes rows as CSV with a header, even when `rows` is empty.
pub fn write_csv<W: Write, R: Serialize>(out: W, rows: &[R], header: &[&str]) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const RUN_HEADER: &[&str] = &[
    "name",
    "n_nodes",
    "side",
    "peak_total",
    "peak_guards",
    "peak_cleaners",
    "peak_explorers",
    "bound",
    "phases",
    "steps",
    "moves",
    "lemma_suite_pass",
    "verified",
    "l",
    "lower_bound",
    "oracle_mcs",
    "ratio",
];

pub const STRIP_HEADER: &[&str] = &[
    "frontier_anchor",
    "orientation",
    "depth_i",
    "peak_cleaners",
    "bound",
    "explorers",
];

pub fn runs_csv(rows: &[RunRow]) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, RUN_HEADER)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}
