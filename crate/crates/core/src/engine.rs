//! Black's full-game player: opening, scripted line or book line, and
//! punishment of any White deviation.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::board::{Board, Color, MoveError};
use crate::book::{ProofNode, StrategyBook};
use crate::coord::Coord;
use crate::symmetry::{canonicalize_reply, SymmetryTransform};
use crate::tactic::{classify_case, opening_move, scripted_black_move, CaseClass, ScriptState, TacticError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("it is not black's turn")]
    NotBlacksTurn,
    #[error("it is not white's turn")]
    NotWhitesTurn,
    #[error("the game is over")]
    GameOver,
    #[error("position is not covered by the strategy book: {0}")]
    BookMiss(String),
    #[error(transparent)]
    Illegal(#[from] MoveError),
    #[error(transparent)]
    Tactic(#[from] TacticError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EngineMode {
    Opening,
    Scripted { state: ScriptState },
    /// `path` lists the canonical White blocks followed from the case root.
    Booked { stone2: Coord, stone4: Coord, path: Vec<Coord> },
    Punish,
    Finished,
}

/// A game with the engine playing Black. The board is kept in the real
/// orientation; book and script moves live in the canonical frame fixed by
/// White's first stone.
#[derive(Debug, Clone)]
pub struct EngineSession {
    board: Board,
    frame: Option<SymmetryTransform>,
    mode: EngineMode,
    book: Arc<StrategyBook>,
}

impl EngineSession {
    pub fn new(book: Arc<StrategyBook>) -> Result<Self, EngineError> {
        Ok(EngineSession {
            board: Board::new(book.meta.n)?,
            frame: None,
            mode: EngineMode::Opening,
            book,
        })
    }

    /// Rebuild a session from a move list, accepting it only if every Black
    /// stone is the one the engine would have played.
    pub fn from_history(book: Arc<StrategyBook>, moves: &[Coord]) -> Result<Self, EngineError> {
        let mut session = EngineSession::new(book)?;
        for &m in moves {
            if session.board.to_move() == Color::Black {
                let ours = session.play_black()?;
                if ours != m {
                    return Err(EngineError::BookMiss(format!(
                        "stone {} at {m} is not the engine's move {ours}",
                        session.board.stone_count()
                    )));
                }
            } else {
                session.play_white(m)?;
            }
        }
        Ok(session)
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn frame(&self) -> Option<SymmetryTransform> {
        self.frame
    }

    pub fn mode(&self) -> &EngineMode {
        &self.mode
    }

    pub fn book(&self) -> &Arc<StrategyBook> {
        &self.book
    }

    fn to_canonical(&self, at: Coord) -> Coord {
        let t = self.frame.unwrap_or(SymmetryTransform::Identity);
        t.apply(at, self.board.size())
    }

    fn to_actual(&self, at: Coord) -> Coord {
        let t = self.frame.unwrap_or(SymmetryTransform::Identity);
        t.inverse().apply(at, self.board.size())
    }

    /// The game so far as seen in the canonical frame.
    pub fn canonical_board(&self) -> Board {
        let moves: Vec<Coord> = self.board.history().iter().map(|&m| self.to_canonical(m)).collect();
        Board::from_moves(self.board.size(), &moves).expect("symmetries preserve legality")
    }

    /// Stone 4 classification once it is on the board.
    pub fn case_class(&self) -> Option<CaseClass> {
        let h = self.board.history();
        (h.len() >= 4).then(|| classify_case(self.to_canonical(h[1]), self.to_canonical(h[3]), self.board.size()))
    }

    fn book_node(&self, stone2: Coord, stone4: Coord, path: &[Coord]) -> Result<&ProofNode, EngineError> {
        let mut node = self
            .book
            .get(stone2, stone4)
            .ok_or_else(|| EngineError::BookMiss(format!("no case for stone 2 {stone2}, stone 4 {stone4}")))?;
        for y in path {
            node = node
                .replies
                .get(y)
                .ok_or_else(|| EngineError::BookMiss(format!("no reply {y} in case {stone2}/{stone4}")))?;
        }
        Ok(node)
    }

    /// Choose Black's move without changing the session.
    pub fn black_move(&self) -> Result<(Coord, EngineSession), EngineError> {
        let mut next = self.clone();
        let m = next.play_black()?;
        Ok((m, next))
    }

    /// Choose Black's move and play it.
    pub fn play_black(&mut self) -> Result<Coord, EngineError> {
        if self.board.status().is_over() {
            return Err(EngineError::GameOver);
        }
        if self.board.to_move() != Color::Black {
            return Err(EngineError::NotBlacksTurn);
        }
        let canonical = self.canonical_board();
        let wins = canonical.winning_points(Color::Black);
        let (mv, mode) = if let Some(&win) = wins.first() {
            (win, EngineMode::Finished)
        } else {
            match self.mode.clone() {
                EngineMode::Opening if canonical.stone_count() < 4 => {
                    (opening_move(&canonical)?, EngineMode::Opening)
                }
                EngineMode::Opening => {
                    let h = canonical.history();
                    let (stone2, stone4) = (h[1], h[3]);
                    match classify_case(stone2, stone4, canonical.size()) {
                        CaseClass::OutsideW => {
                            let (m, state) = scripted_black_move(&canonical, ScriptState::start())?;
                            (m, EngineMode::Scripted { state })
                        }
                        CaseClass::InsideW => {
                            let root = self.book_node(stone2, stone4, &[])?;
                            (root.black, EngineMode::Booked { stone2, stone4, path: Vec::new() })
                        }
                    }
                }
                EngineMode::Scripted { state } => {
                    let (m, state) = scripted_black_move(&canonical, state)?;
                    (m, EngineMode::Scripted { state })
                }
                EngineMode::Booked { stone2, stone4, mut path } => {
                    let node = self.book_node(stone2, stone4, &path)?;
                    let last = *canonical.history().last().expect("white has moved");
                    let child = node.replies.get(&last).ok_or_else(|| {
                        EngineError::BookMiss(format!("white reply {last} leaves no black win and no book line"))
                    })?;
                    path.push(last);
                    (child.black, EngineMode::Booked { stone2, stone4, path })
                }
                EngineMode::Punish | EngineMode::Finished => {
                    return Err(EngineError::BookMiss("deviation left no winning point".into()));
                }
            }
        };
        let actual = self.to_actual(mv);
        self.board.play(actual)?;
        self.mode = if self.board.status().is_over() { EngineMode::Finished } else { mode };
        Ok(actual)
    }

    /// Record White's move (real orientation).
    pub fn play_white(&mut self, at: Coord) -> Result<(), EngineError> {
        if self.board.status().is_over() {
            return Err(EngineError::GameOver);
        }
        if self.board.to_move() != Color::White {
            return Err(EngineError::NotWhitesTurn);
        }
        self.board.play(at)?;
        if self.board.stone_count() == 2 {
            let (frame, _) = canonicalize_reply(at, self.board.size()).map_err(|e| EngineError::BookMiss(e.to_string()))?;
            self.frame = Some(frame);
        }
        if self.board.status().is_over() {
            self.mode = EngineMode::Finished;
            return Ok(());
        }
        let expected = self.expected_blocks();
        let canonical_move = self.to_canonical(at);
        if let Some(expected) = expected {
            if !expected.contains(&canonical_move) && !self.board.winning_points(Color::Black).is_empty() {
                self.mode = EngineMode::Punish;
            }
        }
        Ok(())
    }

    /// Canonical points White was forced to take on its last turn, if the
    /// current line prescribes any.
    fn expected_blocks(&self) -> Option<BTreeSet<Coord>> {
        match &self.mode {
            EngineMode::Scripted { state } => state.expected_block.map(|b| BTreeSet::from([b])),
            EngineMode::Booked { stone2, stone4, path } => self
                .book_node(*stone2, *stone4, path)
                .ok()
                .map(|node| node.replies.keys().copied().collect()),
            _ => None,
        }
    }

    /// Every empty point while White is to move; nothing once the game is over.
    pub fn legal_white_moves(&self) -> Result<BTreeSet<Coord>, EngineError> {
        if self.board.status().is_over() {
            return Ok(BTreeSet::new());
        }
        if self.board.to_move() != Color::White {
            return Err(EngineError::NotWhitesTurn);
        }
        Ok(self.board.grid().empty_points().collect())
    }
}
