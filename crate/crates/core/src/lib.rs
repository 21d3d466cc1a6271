//! Square War: a rules engine, a forced-win prover for the first player and
//! an independent checker for the proofs it emits.
//!
//! Black opens at the center, answers White's first stone next to it and then
//! either follows a fixed forcing line or, when White's second stone lands in
//! the danger set `W`, a searched line stored in a [`book::StrategyBook`].

pub mod board;
pub mod coord;
pub mod geometry;
pub mod symmetry;

pub use board::{completed_square, winning_points, Board, Color, GameStatus, Grid, MoveError, Win};
pub use coord::{Coord, CoordError, DEFAULT_SIZE};
pub use geometry::{build_w, iso_right_completions, squares_through, Square, WSet};
pub use symmetry::{canonicalize_reply, SymmetryTransform};
pub mod book;
pub mod solver;
pub mod tactic;

pub use book::{DomainMode, ProofNode, StrategyBook};
pub use solver::{solve_all, solve_case, SolveReport, SolverConfig};
pub mod engine;

pub use engine::{EngineError, EngineMode, EngineSession};
pub mod verify;
