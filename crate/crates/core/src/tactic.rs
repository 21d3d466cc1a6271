//! Black's opening and the fixed forcing line used when White's stone 4
//! lands outside `W`.
//!
//! Everything here works in the canonical frame: stone 1 at the center,
//! stone 2 in the canonical domain, stone 3 directly left of the center.

use serde::Serialize;
use thiserror::Error;

use crate::board::{Board, Color};
use crate::coord::Coord;
use crate::geometry::{build_w, from_center};
use crate::symmetry::canonicalize_reply;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("it is not black's turn")]
    NotBlacksTurn,
    #[error("the opening is over")]
    TooLate,
    #[error("stone 4 at {0} is inside W; the position needs the strategy book")]
    OutOfScript(Coord),
    #[error("position is not a canonical opening")]
    NotCanonical,
    #[error("scripted point {0} is not available")]
    ScriptBroken(Coord),
}

/// Black's stone 3 in the canonical frame, `(I,10)` on 19x19.
pub fn canonical_stone3(n: u8) -> Coord {
    from_center(n, -1, 0)
}

/// Stone 1 at the center; stone 3 next to it, chosen in the frame where
/// White's stone 2 is canonical.
pub fn opening_move(board: &Board) -> Result<Coord, TacticError> {
    if board.to_move() != Color::Black {
        return Err(TacticError::NotBlacksTurn);
    }
    let n = board.size();
    match board.history() {
        [] => Ok(Coord::center(n)),
        [_, stone2] => {
            let (frame, _) = canonicalize_reply(*stone2, n).map_err(|_| TacticError::NotCanonical)?;
            Ok(frame.inverse().apply(canonical_stone3(n), n))
        }
        _ => Err(TacticError::TooLate),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseClass {
    OutsideW,
    InsideW,
}

pub fn classify_case(stone2: Coord, stone4: Coord, n: u8) -> CaseClass {
    match build_w(stone2, n) {
        Ok(w) if w.contains(stone4) => CaseClass::InsideW,
        _ => CaseClass::OutsideW,
    }
}

/// Which scripted Black stone comes next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    Stone5,
    Stone7,
    Stone9,
    /// Stone 11: the double threat must be cashed in.
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ScriptState {
    pub stage: Stage,
    /// The single point White has to take after the last scripted stone.
    pub expected_block: Option<Coord>,
}

impl ScriptState {
    pub fn start() -> Self {
        ScriptState {
            stage: Stage::Stone5,
            expected_block: None,
        }
    }
}

impl Default for ScriptState {
    fn default() -> Self {
        ScriptState::start()
    }
}

/// `(stone, threat it creates)` offsets from the center for stones 5, 7, 9.
const SCRIPT: [((i32, i32), Option<(i32, i32)>); 3] = [
    ((-1, 1), Some((0, 1))),  // I11, threat J11
    ((-2, 0), Some((-2, 1))), // H10, threat H11
    ((-1, -1), None),         // I9, threats J9 and H9
];

fn check_canonical_opening(board: &Board) -> Result<(Coord, Coord), TacticError> {
    let n = board.size();
    let h = board.history();
    if h.len() < 4 || h[0] != Coord::center(n) || h[2] != canonical_stone3(n) {
        return Err(TacticError::NotCanonical);
    }
    Ok((h[1], h[3]))
}

/// Next Black stone on the forcing line, or an immediate win whenever one is
/// available (White skipped a block, or the double threat is ready).
pub fn scripted_black_move(board: &Board, state: ScriptState) -> Result<(Coord, ScriptState), TacticError> {
    if board.to_move() != Color::Black {
        return Err(TacticError::NotBlacksTurn);
    }
    let n = board.size();
    let (stone2, stone4) = check_canonical_opening(board)?;
    if classify_case(stone2, stone4, n) == CaseClass::InsideW {
        return Err(TacticError::OutOfScript(stone4));
    }
    let done = ScriptState {
        stage: Stage::Done,
        expected_block: None,
    };
    if let Some(&win) = board.winning_points(Color::Black).first() {
        return Ok((win, done));
    }
    let (idx, next_stage) = match state.stage {
        Stage::Stone5 => (0, Stage::Stone7),
        Stage::Stone7 => (1, Stage::Stone9),
        Stage::Stone9 => (2, Stage::Done),
        Stage::Done => return Err(TacticError::ScriptBroken(Coord::center(n))),
    };
    let ((dc, dr), threat) = SCRIPT[idx];
    let stone = from_center(n, dc, dr);
    if board.get(stone).is_some() {
        return Err(TacticError::ScriptBroken(stone));
    }
    Ok((
        stone,
        ScriptState {
            stage: next_stage,
            expected_block: threat.map(|(dc, dr)| from_center(n, dc, dr)),
        },
    ))
}
