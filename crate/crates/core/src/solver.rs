//! Depth-first search for a forced Black win when White's stone 4 lands in
//! `W`.
//!
//! Black only plays moves that threaten to complete a square on the next
//! turn, built from two of its own stones on a common grid line at distance
//! one to three. A single threat forces White's reply; two threats at once
//! win. A move that leaves White a winning point is refuted.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{has_winning_point, Board, Color, Grid};
use crate::book::{BookMeta, DomainMode, ProofNode, StrategyBook};
use crate::coord::{Coord, DEFAULT_SIZE};
use crate::geometry::build_w;
use crate::symmetry::canonical_domain;
use crate::tactic::canonical_stone3;

/// Largest distance between the two supporting stones of a candidate.
pub const MAX_SUPPORT_DISTANCE: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

/// A threatening Black move: playing `play` next to the `support` pair leaves
/// `threat` as the fourth corner of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CandidateMove {
    pub play: Coord,
    pub threat: Coord,
    pub support: (Coord, Coord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateOrder {
    /// Pairs by insertion order of the supporting stones.
    #[default]
    Insertion,
    /// Same candidates, stably sorted by the played point in row-major order.
    RowMajor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub n: u8,
    /// Largest stone number Black may win with.
    pub max_stone: usize,
    pub mode: DomainMode,
    pub order: CandidateOrder,
    /// Worker threads for `solve_all`; `None` uses every core.
    pub jobs: Option<usize>,
    /// Re-run the depth-first search with stone bounds 5, 7, ... up to
    /// `max_stone` and keep the first bound that proves the case. Without it
    /// the search runs once at `max_stone` and tends to use all of it.
    pub deepening: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: DEFAULT_SIZE,
            max_stone: 31,
            mode: DomainMode::Paper,
            order: CandidateOrder::Insertion,
            jobs: None,
            deepening: true,
        }
    }
}

impl SolverConfig {
    /// Stone-2 positions searched in this mode, row-major.
    pub fn stone2_domain(&self) -> Vec<Coord> {
        let mut domain = canonical_domain(self.n);
        if self.mode == DomainMode::Extended {
            // the center column below the center; only the diagonal
            // reflections bring these into the canonical domain
            let mid = self.n / 2;
            domain.extend((0..mid).map(|row| Coord::new(mid, row)));
            domain.sort();
        }
        domain
    }

    /// Every `(stone2, stone4)` case in row-major order.
    pub fn cases(&self) -> Vec<(Coord, Coord)> {
        let n = self.n;
        let center = Coord::center(n);
        let stone3 = canonical_stone3(n);
        self.stone2_domain()
            .into_iter()
            .flat_map(|s2| {
                let w = build_w(s2, n).expect("stone 2 is never (J,11) or (H,11)");
                w.all
                    .into_iter()
                    .filter(move |&s4| s4 != center && s4 != stone3 && s4 != s2)
                    .map(move |s4| (s2, s4))
            })
            .collect()
    }
}

/// Threat moves for Black in the given order.
pub fn candidate_moves(grid: &Grid, order: CandidateOrder) -> Vec<CandidateMove> {
    let n = grid.size();
    let stones = grid.stones(Color::Black);
    let mut out = Vec::new();
    for (i, &p) in stones.iter().enumerate() {
        for &q in &stones[i + 1..] {
            let horizontal = p.row == q.row;
            if !horizontal && p.col != q.col {
                continue;
            }
            let d = i32::from(p.col.abs_diff(q.col) + p.row.abs_diff(q.row));
            if d > i32::from(MAX_SUPPORT_DISTANCE) {
                continue;
            }
            for sign in [1, -1] {
                let (oc, or) = if horizontal { (0, sign * d) } else { (sign * d, 0) };
                let (Some(p2), Some(q2)) = (p.offset(oc, or, n), q.offset(oc, or, n)) else {
                    continue;
                };
                if !grid.is_empty_at(p2) || !grid.is_empty_at(q2) {
                    continue;
                }
                out.push(CandidateMove { play: q2, threat: p2, support: (p, q) });
                out.push(CandidateMove { play: p2, threat: q2, support: (p, q) });
            }
        }
    }
    if order == CandidateOrder::RowMajor {
        out.sort_by_key(|c| c.play);
    }
    out
}

/// The position after stones 1-4 in the canonical frame.
pub fn opening_board(stone2: Coord, stone4: Coord, n: u8) -> Result<Board, SolverError> {
    Board::from_moves(n, &[Coord::center(n), stone2, canonical_stone3(n), stone4])
        .map_err(|e| SolverError::PreconditionViolation(e.to_string()))
}

struct Search {
    max_stone: usize,
    order: CandidateOrder,
    nodes: u64,
}

impl Search {
    fn black_node(&mut self, board: &mut Board) -> Option<ProofNode> {
        self.nodes += 1;
        let stone = board.next_stone();
        if stone > self.max_stone {
            return None;
        }
        if let Some(&win) = board.winning_points(Color::Black).first() {
            return Some(ProofNode::immediate(win, stone));
        }
        if stone + 2 > self.max_stone {
            return None;
        }
        let mut tried: Vec<Coord> = Vec::new();
        for cand in candidate_moves(board.grid(), self.order) {
            // the same point reached through another pair leads to the same position
            if tried.contains(&cand.play) {
                continue;
            }
            tried.push(cand.play);
            #[cfg(debug_assertions)]
            let before = board.clone();

            board.play(cand.play).expect("candidate points are empty");
            let result = self.after_black(board, cand.play, stone);
            board.undo();

            #[cfg(debug_assertions)]
            debug_assert_eq!(*board, before, "undo must restore the position");
            if result.is_some() {
                return result;
            }
        }
        None
    }

    fn after_black(&mut self, board: &mut Board, played: Coord, stone: usize) -> Option<ProofNode> {
        if has_winning_point(board.grid(), Color::White) {
            return None;
        }
        let threats: Vec<Coord> = board.winning_points(Color::Black).into_iter().collect();
        match threats.as_slice() {
            [] => None,
            [block] => {
                let block = *block;
                board.play(block).expect("threat points are empty");
                let child = self.black_node(board);
                board.undo();
                child.map(|child| ProofNode::forced(played, block, child))
            }
            _ => Some(ProofNode::double_threat(played, threats, stone + 2)),
        }
    }
}

/// Outcome of one case, with the number of Black nodes visited.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub stone2: Coord,
    pub stone4: Coord,
    pub proof: Option<ProofNode>,
    pub nodes: u64,
}

pub fn solve_case(stone2: Coord, stone4: Coord, config: &SolverConfig) -> Result<Option<ProofNode>, SolverError> {
    solve_case_counted(stone2, stone4, config).map(|r| r.proof)
}

pub fn solve_case_counted(stone2: Coord, stone4: Coord, config: &SolverConfig) -> Result<CaseResult, SolverError> {
    let n = config.n;
    let w = build_w(stone2, n).map_err(|e| SolverError::PreconditionViolation(e.to_string()))?;
    if !w.contains(stone4) {
        return Err(SolverError::PreconditionViolation(format!(
            "stone 4 at {stone4} is outside W for stone 2 at {stone2}"
        )));
    }
    let mut board = opening_board(stone2, stone4, n)?;
    let first_bound = if config.deepening { board.next_stone() } else { config.max_stone };
    let mut search = Search {
        max_stone: first_bound,
        order: config.order,
        nodes: 0,
    };
    let mut proof = None;
    while search.max_stone <= config.max_stone {
        proof = search.black_node(&mut board);
        if proof.is_some() {
            break;
        }
        search.max_stone += 2;
    }
    Ok(CaseResult {
        stone2,
        stone4,
        proof,
        nodes: search.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub c_e: usize,
    pub c_w: usize,
    pub w_a: bool,
    pub max_win_stone: usize,
    /// Winning stone number -> number of cases.
    pub histogram: BTreeMap<usize, usize>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unproved: Vec<(Coord, Coord)>,
}

impl SolveReport {
    pub fn summary_line(&self) -> String {
        format!(
            "C_e={} C_w={} W_a={} max_win_stone<={}",
            self.c_e, self.c_w, self.w_a, self.max_win_stone
        )
    }
}

pub fn solve_all(config: &SolverConfig) -> (SolveReport, StrategyBook) {
    let start = Instant::now();
    let cases = config.cases();
    let run = || -> Vec<CaseResult> {
        cases
            .par_iter()
            .map(|&(s2, s4)| solve_case_counted(s2, s4, config).expect("cases satisfy the precondition"))
            .collect()
    };
    let results = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };

    let mut book = StrategyBook::new(BookMeta {
        n: config.n,
        mode: config.mode,
        m: config.max_stone,
        version: env!("CARGO_PKG_VERSION").to_string(),
    });
    let mut histogram = BTreeMap::new();
    let mut unproved = Vec::new();
    for r in results {
        match r.proof {
            Some(root) => {
                *histogram.entry(root.max_win_stone()).or_insert(0) += 1;
                book.insert(r.stone2, r.stone4, root);
            }
            None => unproved.push((r.stone2, r.stone4)),
        }
    }
    let c_e = cases.len();
    let c_w = book.len();
    let report = SolveReport {
        c_e,
        c_w,
        w_a: c_e == c_w,
        max_win_stone: histogram.keys().copied().max().unwrap_or(0),
        histogram,
        elapsed_ms: start.elapsed().as_millis() as u64,
        unproved,
    };
    (report, book)
}
