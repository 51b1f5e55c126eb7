//! Size-oblivious wrapper: guess `n = 2^i` for growing `i`, giving each
//! round a fresh team sized for its guess.

use crate::crew::EngineError;
use crate::geometry::SideParam;
use crate::state::Terrain;

use super::{grid_searching, EngineConfig, EngineRun};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundOutcome {
    Cleared,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: u32,
    pub side: i64,
    pub team: usize,
    pub introduced: usize,
    pub outcome: RoundOutcome,
}

#[derive(Debug)]
pub struct UnknownRun<T> {
    pub c: usize,
    pub rounds: Vec<RoundRecord>,
    /// The successful last round; its trace is self-contained.
    pub last: EngineRun<T>,
}

impl<T> UnknownRun<T> {
    /// Searchers brought in over all rounds, counting every team in full.
    pub fn team_total(&self) -> usize {
        self.rounds.iter().map(|r| r.team).sum()
    }

    /// Searchers actually introduced over all rounds.
    pub fn introduced_total(&self) -> usize {
        self.rounds.iter().map(|r| r.introduced).sum()
    }
}

pub fn round_side(i: u32) -> SideParam {
    SideParam::from_node_bound(1u64 << i)
}

/// Rounds needed in the worst case: `max(1, ceil(log2 n))`.
pub fn round_bound(n: u64) -> u32 {
    let mut m = 0;
    while (1u64 << m) < n {
        m += 1;
    }
    m.max(1)
}

/// `(sqrt2 * c / (sqrt2 - 1)) * (sqrt(2n) - 1)`.
pub fn team_total_bound(c: usize, n: u64) -> f64 {
    let r2 = std::f64::consts::SQRT_2;
    r2 * c as f64 / (r2 - 1.0) * ((2.0 * n as f64).sqrt() - 1.0)
}

/// Runs rounds `i = 1, 2, ...` until one clears the graph. Each round starts
/// from an all-contaminated graph; earlier teams stay where they stopped and
/// take no further part.
pub fn mod_grid_searching<T: Terrain + Clone>(
    terrain: T,
    c: usize,
    config: &EngineConfig,
    max_rounds: u32,
) -> Result<UnknownRun<T>, EngineError> {
    let mut rounds = Vec::new();
    for i in 1..=max_rounds {
        let side = round_side(i);
        let team = c * side.get() as usize;
        let cfg = EngineConfig {
            budget: Some(team),
            ..config.clone()
        };
        match grid_searching(terrain.clone(), side, &cfg) {
            Ok(run) => {
                rounds.push(RoundRecord {
                    round: i,
                    side: side.get(),
                    team,
                    introduced: run.metrics.peak_total,
                    outcome: RoundOutcome::Cleared,
                });
                return Ok(UnknownRun { c, rounds, last: run });
            }
            Err(EngineError::BudgetExceeded { .. }) | Err(EngineError::StripBudgetExceeded { .. }) => {
                rounds.push(RoundRecord {
                    round: i,
                    side: side.get(),
                    team,
                    introduced: team,
                    outcome: RoundOutcome::BudgetExceeded,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Err(EngineError::Invariant(format!("no round up to {max_rounds} cleared the graph")))
}
