//! Naive online baseline: clear edges depth-first from the most recently
//! reached guarded node, calling in a free searcher whenever the node must
//! stay guarded.

use crate::crew::{Crew, EngineError, Role};
use crate::grid::{Coord, Dir};
use crate::state::{SearchState, Terrain};
use crate::trace::StrategyTrace;

#[derive(Debug)]
pub struct GreedyRun<T> {
    pub trace: StrategyTrace,
    pub peak: usize,
    pub state: SearchState<T>,
}

pub fn greedy_search<T: Terrain>(terrain: T, budget: Option<usize>, max_moves: usize) -> Result<GreedyRun<T>, EngineError> {
    let mut crew = Crew::new(terrain, Coord::ORIGIN, budget);
    let first = crew.introduce(Role::Guard)?;
    let mut stack = vec![Coord::ORIGIN];
    if crew.state().requires_guard(Coord::ORIGIN) {
        crew.assign_post(Coord::ORIGIN, first, Role::Guard);
    } else {
        crew.set_role(first, Role::Free);
    }
    while !crew.state().all_clean() {
        if crew.trace().moves.len() > max_moves {
            return Err(EngineError::Invariant(format!("greedy search stalled after {max_moves} moves")));
        }
        while let Some(&top) = stack.last() {
            if crew.state().requires_guard(top) {
                break;
            }
            stack.pop();
        }
        let v = *stack
            .last()
            .ok_or_else(|| EngineError::Invariant("dirty graph but no guarded node".into()))?;
        let ports = crew.state().ports(v).expect("visited");
        let u = Dir::ALL
            .iter()
            .filter(|d| ports.has(**d))
            .map(|d| v.step(*d))
            .find(|u| !crew.state().is_clean(crate::grid::Edge::new(v, *u)))
            .expect("contaminated edge at guarded node");
        let mover = if crew.state().contaminated_degree(v) == 1 {
            crew.vacate_post(v).expect("guarded node holds a post")
        } else {
            crew.acquire(v, Role::Guard)?
        };
        crew.slide(mover, u)?;
        if crew.state().requires_guard(u) && crew.post(u).is_none() {
            crew.assign_post(u, mover, Role::Guard);
            stack.push(u);
        } else {
            crew.set_role(mover, Role::Free);
        }
        if !crew.state().requires_guard(u) {
            if let Some(g) = crew.vacate_post(u) {
                crew.set_role(g, Role::Free);
            }
        }
    }
    let peak = crew.searcher_count();
    let (state, trace) = crew.into_parts();
    Ok(GreedyRun { trace, peak, state })
}
