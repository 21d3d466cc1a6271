//! Independent checks of the forcing line and of strategy books.
//!
//! Nothing here calls into the search: positions are rebuilt from the rules
//! and every claim is re-derived with [`winning_points`].

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{has_winning_point, winning_points, Board, Color, GameStatus};
use crate::book::{DomainMode, ProofNode, StrategyBook};
use crate::coord::Coord;
use crate::engine::EngineSession;
use crate::geometry::{build_w, from_center};
use crate::symmetry::{canonical_domain, in_canonical_domain};
use crate::tactic::{canonical_stone3, scripted_black_move, ScriptState};

/// A failed check with the canonical move sequence that exposes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stone2: Coord,
    pub stone4: Coord,
    pub line: Vec<Coord>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptReport {
    pub cases: usize,
    pub max_win_stone: usize,
    pub failures: Vec<Failure>,
}

/// Play the forcing line for every canonical stone 2 and every empty stone 4
/// outside `W`, checking at each White turn that White has no winning point,
/// that Black's threats are the expected ones, and that any other White
/// reply loses at once.
pub fn verify_script_all(n: u8) -> ScriptReport {
    let center = Coord::center(n);
    let stone3 = canonical_stone3(n);
    let per_stone2: Vec<ScriptReport> = canonical_domain(n)
        .into_par_iter()
        .map(|s2| {
            let w = build_w(s2, n).expect("stone 2 is canonical");
            let mut report = ScriptReport::default();
            for i in 0..usize::from(n) * usize::from(n) {
                let s4 = Coord::from_index(i, n);
                if s4 == center || s4 == stone3 || s4 == s2 || w.contains(s4) {
                    continue;
                }
                report.cases += 1;
                match check_script_case(s2, s4, n) {
                    Ok(stone) => report.max_win_stone = report.max_win_stone.max(stone),
                    Err(f) => report.failures.push(f),
                }
            }
            report
        })
        .collect();
    per_stone2.into_iter().fold(ScriptReport::default(), |mut acc, r| {
        acc.cases += r.cases;
        acc.max_win_stone = acc.max_win_stone.max(r.max_win_stone);
        acc.failures.extend(r.failures);
        acc
    })
}

/// Expected Black threat sets after stones 5, 7 and 9.
fn expected_threats(n: u8) -> [BTreeSet<Coord>; 3] {
    [
        BTreeSet::from([from_center(n, 0, 1)]),
        BTreeSet::from([from_center(n, -2, 1)]),
        BTreeSet::from([from_center(n, 0, -1), from_center(n, -2, -1)]),
    ]
}

pub fn check_script_case(stone2: Coord, stone4: Coord, n: u8) -> Result<usize, Failure> {
    let fail = |board: &Board, reason: String| Failure {
        stone2,
        stone4,
        line: board.history().to_vec(),
        reason,
    };
    let mut board = Board::from_moves(n, &[Coord::center(n), stone2, canonical_stone3(n), stone4])
        .map_err(|e| Failure { stone2, stone4, line: Vec::new(), reason: e.to_string() })?;
    let mut state = ScriptState::start();
    for expected in expected_threats(n) {
        let (mv, next) = scripted_black_move(&board, state).map_err(|e| fail(&board, e.to_string()))?;
        state = next;
        board.play(mv).map_err(|e| fail(&board, e.to_string()))?;
        if board.status().is_over() {
            return Err(fail(&board, "scripted stone ended the game early".into()));
        }
        if has_winning_point(board.grid(), Color::White) {
            return Err(fail(&board, "white has a winning point".into()));
        }
        let threats = winning_points(board.grid(), Color::Black);
        if threats != expected {
            return Err(fail(&board, format!("black threats {threats:?}, expected {expected:?}")));
        }
        // every White reply other than a lone block must leave a Black win
        let block = (expected.len() == 1).then(|| *expected.first().unwrap());
        let empties: Vec<Coord> = board.grid().empty_points().collect();
        for y in empties {
            if Some(y) == block {
                continue;
            }
            board.play(y).expect("empty point");
            let punished = board.status() == GameStatus::InProgress && has_winning_point(board.grid(), Color::Black);
            board.undo();
            if !punished {
                return Err(fail(&board, format!("white reply {y} is not punished")));
            }
        }
        let reply = block.unwrap_or_else(|| *expected.first().unwrap());
        board.play(reply).map_err(|e| fail(&board, e.to_string()))?;
        if state.expected_block != block {
            return Err(fail(&board, "script state disagrees with the threat".into()));
        }
    }
    let (mv, _) = scripted_black_move(&board, state).map_err(|e| fail(&board, e.to_string()))?;
    board.play(mv).map_err(|e| fail(&board, e.to_string()))?;
    match board.status() {
        GameStatus::BlackWin(win) if win.stone == 11 => Ok(win.stone),
        other => Err(fail(&board, format!("expected a black win at stone 11, got {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BookCheckError {
    #[error("structural error: {0}")]
    StructuralError(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookReport {
    pub cases: usize,
    pub valid: usize,
    pub nodes: usize,
    pub failures: Vec<Failure>,
}

impl BookReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.valid == self.cases
    }
}

/// Check every case of a book against all White replies at every node.
pub fn validate_book(book: &StrategyBook) -> Result<BookReport, BookCheckError> {
    let n = book.meta.n;
    if !(7..=25).contains(&n) || n % 2 == 0 {
        return Err(BookCheckError::StructuralError(format!("unsupported board size {n}")));
    }
    let mut seen = HashSet::new();
    let mut duplicate = Vec::new();
    for case in &book.cases {
        if !seen.insert((case.stone2, case.stone4)) {
            duplicate.push(Failure {
                stone2: case.stone2,
                stone4: case.stone4,
                line: Vec::new(),
                reason: "duplicate case".into(),
            });
        }
    }
    let results: Vec<Result<usize, Failure>> = book
        .cases
        .par_iter()
        .map(|case| check_case(book, case.stone2, case.stone4, &case.root))
        .collect();
    let mut report = BookReport {
        cases: book.cases.len(),
        ..BookReport::default()
    };
    for r in results {
        match r {
            Ok(nodes) => {
                report.valid += 1;
                report.nodes += nodes;
            }
            Err(f) => report.failures.push(f),
        }
    }
    if !duplicate.is_empty() {
        report.valid -= duplicate.len().min(report.valid);
        report.failures.extend(duplicate);
    }
    Ok(report)
}

fn stone2_allowed(stone2: Coord, mode: DomainMode, n: u8) -> bool {
    let mid = n / 2;
    in_canonical_domain(stone2, n) || (mode == DomainMode::Extended && stone2.col == mid && stone2.row < mid)
}

fn check_case(book: &StrategyBook, stone2: Coord, stone4: Coord, root: &ProofNode) -> Result<usize, Failure> {
    let n = book.meta.n;
    let fail = |line: &[Coord], reason: String| Failure {
        stone2,
        stone4,
        line: line.to_vec(),
        reason,
    };
    if !stone2.in_bounds(n) || !stone2_allowed(stone2, book.meta.mode, n) {
        return Err(fail(&[], format!("stone 2 {stone2} outside the {:?} domain", book.meta.mode)));
    }
    let w = build_w(stone2, n).map_err(|e| fail(&[], e.to_string()))?;
    if !w.contains(stone4) {
        return Err(fail(&[], format!("stone 4 {stone4} is not in W")));
    }
    let mut board = Board::from_moves(n, &[Coord::center(n), stone2, canonical_stone3(n), stone4])
        .map_err(|e| fail(&[], e.to_string()))?;
    let mut checker = Checker { max_stone: book.meta.m, nodes: 0 };
    checker
        .node(&mut board, root)
        .map_err(|(line, reason)| fail(&line, reason))?;
    Ok(checker.nodes)
}

struct Checker {
    max_stone: usize,
    nodes: usize,
}

type CheckResult = Result<(), (Vec<Coord>, String)>;

impl Checker {
    fn node(&mut self, board: &mut Board, node: &ProofNode) -> CheckResult {
        self.nodes += 1;
        let err = |board: &Board, reason: String| Err((board.history().to_vec(), reason));
        let stone = board.next_stone();
        if board.to_move() != Color::Black {
            return err(board, "node reached on white's turn".into());
        }
        if let Err(e) = board.play(node.black) {
            return err(board, format!("black move {}: {e}", node.black));
        }
        let result = self.after_black(board, node, stone);
        board.undo();
        result
    }

    fn after_black(&mut self, board: &mut Board, node: &ProofNode, stone: usize) -> CheckResult {
        let err = |board: &Board, reason: String| Err((board.history().to_vec(), reason));
        if let GameStatus::BlackWin(win) = board.status() {
            if node.win_at != Some(win.stone) || node.threats != [node.black] || !node.replies.is_empty() {
                return err(board, "immediate win recorded inconsistently".into());
            }
            if win.stone > self.max_stone {
                return err(board, format!("win at stone {} exceeds {}", win.stone, self.max_stone));
            }
            return Ok(());
        }
        if has_winning_point(board.grid(), Color::White) {
            return err(board, "white can complete a square".into());
        }
        let threats: Vec<Coord> = winning_points(board.grid(), Color::Black).into_iter().collect();
        if threats.is_empty() {
            return err(board, "black move makes no threat".into());
        }
        if node.threats != threats {
            return err(board, format!("recorded threats {:?} differ from {:?}", node.threats, threats));
        }
        let double = threats.len() >= 2;
        if double {
            if node.win_at != Some(stone + 2) || !node.replies.is_empty() {
                return err(board, "double threat recorded inconsistently".into());
            }
            if stone + 2 > self.max_stone {
                return err(board, format!("win at stone {} exceeds {}", stone + 2, self.max_stone));
            }
        } else {
            let keys: Vec<Coord> = node.replies.keys().copied().collect();
            if node.win_at.is_some() || keys != threats {
                return err(board, "forced node must list exactly its block".into());
            }
        }
        let replies: Vec<Coord> = board.grid().empty_points().collect();
        for y in replies {
            board.play(y).expect("empty point");
            let result = if board.status().is_over() {
                err(board, format!("white reply {y} ends the game"))
            } else if let Some(child) = node.replies.get(&y) {
                self.node(board, child)
            } else if has_winning_point(board.grid(), Color::Black) {
                Ok(())
            } else {
                err(board, format!("white reply {y} leaves black without a win"))
            };
            board.undo();
            result?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplayStats {
    pub games: usize,
    pub black_wins: usize,
    pub max_stone: usize,
    pub mean_stone: f64,
    /// Hash of every transcript, for comparing runs.
    pub digest: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

/// Engine as Black against a uniformly random White.
pub fn replay_random(book: Arc<StrategyBook>, games: usize, seed: u64) -> ReplayStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hasher = DefaultHasher::new();
    let mut stats = ReplayStats::default();
    let mut total = 0usize;
    for g in 0..games {
        stats.games += 1;
        match play_random_game(book.clone(), &mut rng) {
            Ok(session) => {
                session.board().history().hash(&mut hasher);
                match session.board().status() {
                    GameStatus::BlackWin(win) => {
                        stats.black_wins += 1;
                        stats.max_stone = stats.max_stone.max(win.stone);
                        total += win.stone;
                    }
                    other => stats.failures.push(format!("game {g}: {other:?}")),
                }
            }
            Err(e) => stats.failures.push(format!("game {g}: {e}")),
        }
    }
    if stats.black_wins > 0 {
        stats.mean_stone = total as f64 / stats.black_wins as f64;
    }
    stats.digest = hasher.finish();
    stats
}

fn play_random_game(book: Arc<StrategyBook>, rng: &mut ChaCha8Rng) -> Result<EngineSession, crate::engine::EngineError> {
    let mut session = EngineSession::new(book)?;
    loop {
        session.play_black()?;
        if session.board().status().is_over() {
            return Ok(session);
        }
        let moves: Vec<Coord> = session.legal_white_moves()?.into_iter().collect();
        let pick = moves[rng.random_range(0..moves.len())];
        session.play_white(pick)?;
        if session.board().status().is_over() {
            return Ok(session);
        }
    }
}

/// Combined report as written by `verify`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub script_cases: usize,
    pub script_failures: Vec<Failure>,
    pub book_cases: usize,
    pub book_failures: Vec<Failure>,
}
