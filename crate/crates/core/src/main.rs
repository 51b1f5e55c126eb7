use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use gridsearch::adversary::{adaptive_adversary, Algorithm};
use gridsearch::engine::unknown::{mod_grid_searching, round_bound};
use gridsearch::harness::{gen_random, runs_csv, write_csv, RunRow, StripRow, STRIP_HEADER};
use gridsearch::oracle::{mcs_exact, OracleConfig};
use gridsearch::polygon::{build_grid, covers_check, parse_polygon, DEFAULT_DENSITY};
use gridsearch::{run_on_grid, verify_trace, EngineConfig, PartialGrid, SideParam, StrategyTrace};

#[derive(Parser)]
#[command(name = "gridsearch", version, about = "Monotone connected searching of partial grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Engine,
    Greedy,
}

#[derive(Subcommand)]
enum Cmd {
    /// Random partial grid: keep each lattice edge with probability p.
    GenRandom {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
        #[arg(long, default_value_t = 0.7)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adversarial tree fixed by playing the adaptive game.
    GenAdversary {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        mirrored: bool,
        #[arg(long, value_enum, default_value_t = Alg::Engine)]
        algorithm: Alg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid of a polygon file.
    FromPolygon {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: u32,
    },
    /// Run the searcher with a fixed side.
    Run {
        #[arg(long)]
        grid: PathBuf,
        /// Defaults to ceil(sqrt(n)).
        #[arg(long)]
        side: Option<i64>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 6)]
        a: usize,
        #[arg(long, default_value_t = 4)]
        b: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        strips: Option<PathBuf>,
    },
    /// Run without knowing n, doubling the guess each round.
    RunUnknown {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Adaptive lower-bound game.
    Attack {
        #[arg(long)]
        l: i64,
        #[arg(long, value_enum, default_value_t = Alg::Engine)]
        algorithm: Alg,
        /// Also compute the exact search number of the resulting tree.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 24)]
        edge_cap: usize,
    },
    /// Replay a trace against a grid.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Exact monotone connected search number.
    Oracle {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long, default_value_t = 16)]
        edge_cap: usize,
    },
    /// One CSV row per grid file, searcher run with side ceil(sqrt(n)).
    Stats {
        #[arg(long, num_args = 0..)]
        grid: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_grid(path: &Path) -> Result<PartialGrid, CliError> {
    PartialGrid::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn default_side(g: &PartialGrid) -> SideParam {
    SideParam::from_node_bound(g.node_count() as u64)
}

fn algorithm(a: Alg) -> Algorithm {
    match a {
        Alg::Engine => Algorithm::Engine,
        Alg::Greedy => Algorithm::Greedy,
    }
}

fn csv_string(rows: &[RunRow]) -> Result<String, CliError> {
    runs_csv(rows).map_err(input)
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::GenRandom { seed, width, height, p, out } => {
            let g = gen_random(seed, width, height, p).map_err(input)?;
            emit(out.as_ref(), &g.to_text())
        }
        Cmd::GenAdversary { l, mirrored, algorithm: a, out } => {
            let attack = adaptive_adversary(algorithm(a), l, &EngineConfig::default()).map_err(input)?;
            let g = if mirrored {
                attack.tree.mirrored_grid()
            } else {
                attack.tree.to_grid()
            };
            emit(out.as_ref(), &g.to_text())
        }
        Cmd::FromPolygon { input: path, out, density } => {
            let file = parse_polygon::<f64>(&read(&path)?).map_err(input)?;
            let (g, diag) = build_grid(&file.env, file.origin).map_err(input)?;
            let cover = covers_check(&g, &file.env, file.origin, density);
            eprintln!(
                "nodes {} of {} lattice nodes, discarded components {:?}, covered {}, worst gap {:.4}",
                g.node_count(),
                diag.lattice_nodes,
                diag.discarded_components,
                cover.covered,
                cover.worst_gap
            );
            emit(out.as_ref(), &g.to_text())
        }
        Cmd::Run { grid, side, budget, a, b, trace, csv, strips } => {
            let g = load_grid(&grid)?;
            let side = match side {
                Some(s) => SideParam::new(s).map_err(input)?,
                None => default_side(&g),
            };
            let cfg = EngineConfig {
                strip_a: a,
                strip_b: b,
                budget,
                ..EngineConfig::default()
            };
            let r = run_on_grid(&g, side, &cfg).map_err(|e| CliError::Failed(e.to_string()))?;
            let verified = verify_trace(&g, &r.trace).ok();
            let mut row = RunRow::from_run(&grid.display().to_string(), g.node_count(), &r);
            row.verified = Some(verified);
            if let Some(p) = trace {
                emit(Some(&p), &r.trace.to_text())?;
            }
            if let Some(p) = strips {
                let rows: Vec<StripRow> = r.strips.iter().map(|s| StripRow::from_report(s, a, b)).collect();
                let f = fs::File::create(&p).map_err(input)?;
                write_csv(f, &rows, STRIP_HEADER).map_err(input)?;
            }
            emit(csv.as_ref(), &csv_string(&[row])?)?;
            if !verified || !r.lemma_suite_pass() || !r.bounds.all_pass() {
                return Err(CliError::Failed(format!("{}\n{}", r.lemmas, r.bounds)));
            }
            Ok(())
        }
        Cmd::RunUnknown { grid, c, trace } => {
            let g = load_grid(&grid)?;
            let cfg = EngineConfig::default();
            let c = c.unwrap_or(cfg.team_constant() + cfg.strip_b);
            let max_rounds = round_bound(g.node_count() as u64) + 1;
            let r = mod_grid_searching(&g, c, &cfg, max_rounds).map_err(|e| CliError::Failed(e.to_string()))?;
            println!("round,side,team,introduced,outcome");
            for rec in &r.rounds {
                println!("{},{},{},{},{:?}", rec.round, rec.side, rec.team, rec.introduced, rec.outcome);
            }
            if let Some(p) = trace {
                emit(Some(&p), &r.last.trace.to_text())?;
            }
            if !verify_trace(&g, &r.last.trace).ok() {
                return Err(CliError::Failed("final round does not verify".into()));
            }
            Ok(())
        }
        Cmd::Attack { l, algorithm: a, oracle, edge_cap } => {
            let attack = adaptive_adversary(algorithm(a), l, &EngineConfig::default()).map_err(input)?;
            let g = attack.tree.to_grid();
            let mut row = RunRow {
                name: format!("attack-l{l}"),
                n_nodes: g.node_count(),
                peak_total: attack.peak,
                verified: Some(attack.verified),
                l: Some(l as u32),
                lower_bound: Some(attack.lower_bound() as u32),
                ..RunRow::default()
            };
            if oracle {
                let cfg = OracleConfig {
                    edge_cap,
                    ..OracleConfig::default()
                };
                let mcs = mcs_exact(&g, attack.peak, &cfg).map_err(input)?;
                row.oracle_mcs = mcs;
                row.ratio = mcs.map(|m| attack.peak as f64 / m as f64);
            }
            emit(None, &csv_string(&[row])?)?;
            if !attack.verified || attack.peak < attack.lower_bound() {
                return Err(CliError::Failed("attack run failed its checks".into()));
            }
            Ok(())
        }
        Cmd::Verify { grid, trace } => {
            let g = load_grid(&grid)?;
            let t = StrategyTrace::parse(&read(&trace)?).map_err(input)?;
            let rep = verify_trace(&g, &t);
            println!(
                "monotone {} connected {} complete {} legal {} peak {}",
                rep.monotone, rep.connected, rep.complete, rep.legal, rep.peak_searchers
            );
            for f in rep.failures.iter().take(10) {
                println!("move {}: {:?}", f.index, f.kind);
            }
            if rep.ok() {
                Ok(())
            } else {
                Err(CliError::Failed("trace rejected".into()))
            }
        }
        Cmd::Oracle { grid, kmax, edge_cap } => {
            let g = load_grid(&grid)?;
            let cfg = OracleConfig {
                edge_cap,
                ..OracleConfig::default()
            };
            match mcs_exact(&g, kmax, &cfg).map_err(input)? {
                Some(k) => println!("{k}"),
                None => println!("infeasible"),
            }
            Ok(())
        }
        Cmd::Stats { grid, out } => {
            let mut rows = Vec::new();
            for path in &grid {
                let g = load_grid(path)?;
                let r = run_on_grid(&g, default_side(&g), &EngineConfig::default())
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                let mut row = RunRow::from_run(&path.display().to_string(), g.node_count(), &r);
                row.verified = Some(verify_trace(&g, &r.trace).ok());
                rows.push(row);
            }
            emit(out.as_ref(), &csv_string(&rows)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Failed(_) => ExitCode::from(1),
                CliError::Input(_) => ExitCode::from(2),
            }
        }
    }
}
