//! Monotone connected searching of partial grids under fog of war.

pub mod adversary;
pub mod crew;
pub mod engine;
pub mod geometry;
pub mod greedy;
pub mod grid;
pub mod harness;
pub mod oracle;
pub mod polygon;
pub mod state;
pub mod strip;
pub mod trace;

pub use crew::EngineError;
pub use engine::{grid_searching, run_on_grid, EngineConfig, EngineRun};
pub use geometry::{Checkpoint, Frontier, SideParam};
pub use grid::{validate_grid, Coord, Edge, GridError, PartialGrid};
pub use state::{Move, SearchState, Terrain};
pub use trace::{verify_trace, StrategyTrace, VerificationReport};

pub type PolygonEnvF64 = polygon::PolygonEnv<f64>;
pub type PolygonEnvF32 = polygon::PolygonEnv<f32>;
pub type PointF64 = polygon::Point<f64>;
pub type PointF32 = polygon::Point<f32>;
