//! Board state, move legality and square detection.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::{Coord, DEFAULT_SIZE, MAX_SIZE};
use crate::geometry::Square;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opponent(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    /// Color of the stone with the given 1-based number: odd stones are Black.
    pub fn of_stone(number: usize) -> Color {
        if number % 2 == 1 {
            Color::Black
        } else {
            Color::White
        }
    }

    fn slot(self) -> usize {
        match self {
            Color::Black => 0,
            Color::White => 1,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{0} is occupied")]
    Occupied(Coord),
    #[error("{0} is off the board")]
    OutOfBounds(Coord),
    #[error("black's second stone {attempted} must be orthogonally adjacent to {first}")]
    Rule4Violation { first: Coord, attempted: Coord },
    #[error("the game is over")]
    GameOver,
    #[error("unsupported board size {0} (odd, 7..=25)")]
    InvalidSize(u8),
}

/// Stones on the board without any rule bookkeeping. Stone lists keep
/// insertion order per color.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    n: u8,
    cells: Vec<Option<Color>>,
    stones: [Vec<Coord>; 2],
}

impl Grid {
    pub fn new(n: u8) -> Self {
        Grid {
            n,
            cells: vec![None; usize::from(n) * usize::from(n)],
            stones: [Vec::new(), Vec::new()],
        }
    }

    pub fn size(&self) -> u8 {
        self.n
    }

    pub fn get(&self, at: Coord) -> Option<Color> {
        if at.in_bounds(self.n) {
            self.cells[at.index(self.n)]
        } else {
            None
        }
    }

    pub fn is_empty_at(&self, at: Coord) -> bool {
        at.in_bounds(self.n) && self.cells[at.index(self.n)].is_none()
    }

    /// Stones of `color` in the order they were put down.
    pub fn stones(&self, color: Color) -> &[Coord] {
        &self.stones[color.slot()]
    }

    pub fn stone_count(&self) -> usize {
        self.stones[0].len() + self.stones[1].len()
    }

    /// Put a stone on an in-bounds empty point. Callers check legality.
    pub fn put(&mut self, at: Coord, color: Color) {
        let idx = at.index(self.n);
        debug_assert!(self.cells[idx].is_none(), "{at} already occupied");
        self.cells[idx] = Some(color);
        self.stones[color.slot()].push(at);
    }

    /// Remove the most recent stone of `color`, which must be at `at`.
    pub fn take(&mut self, at: Coord, color: Color) {
        let popped = self.stones[color.slot()].pop();
        debug_assert_eq!(popped, Some(at));
        self.cells[at.index(self.n)] = None;
    }

    pub fn empty_points(&self) -> impl Iterator<Item = Coord> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, cell)| cell.is_none())
            .map(move |(i, _)| Coord::from_index(i, self.n))
    }

    pub fn from_stones(n: u8, black: &[Coord], white: &[Coord]) -> Self {
        let mut grid = Grid::new(n);
        for &b in black {
            grid.put(b, Color::Black);
        }
        for &w in white {
            grid.put(w, Color::White);
        }
        grid
    }
}

/// Calls `f` with the two other vertices of every in-bounds axis-aligned
/// square having `a` and `b` as vertices.
#[inline]
pub(crate) fn for_each_square_partner(a: Coord, b: Coord, n: u8, mut f: impl FnMut(Coord, Coord)) {
    let dc = i32::from(b.col) - i32::from(a.col);
    let dr = i32::from(b.row) - i32::from(a.row);
    if dc == 0 || dr == 0 {
        let d = dc.abs() + dr.abs();
        if d == 0 {
            return;
        }
        for sign in [1, -1] {
            let (oc, or) = if dr == 0 { (0, sign * d) } else { (sign * d, 0) };
            if let (Some(a2), Some(b2)) = (a.offset(oc, or, n), b.offset(oc, or, n)) {
                f(a2, b2);
            }
        }
    } else if dc.abs() == dr.abs() {
        f(Coord::new(a.col, b.row), Coord::new(b.col, a.row));
    }
}

fn square_of(points: [Coord; 4]) -> Square {
    let col = points.iter().map(|p| p.col).min().unwrap_or(0);
    let row = points.iter().map(|p| p.row).min().unwrap_or(0);
    let side = points.iter().map(|p| p.col).max().unwrap_or(0) - col;
    Square::new(Coord::new(col, row), side)
}

/// A square of `color` stones with a vertex at `at`, smallest side first and
/// then lowest corner in row-major order.
pub fn completed_square(grid: &Grid, at: Coord, color: Color) -> Option<Square> {
    if grid.get(at) != Some(color) {
        return None;
    }
    let n = grid.size();
    let mut best: Option<Square> = None;
    for &q in grid.stones(color) {
        if q == at {
            continue;
        }
        for_each_square_partner(at, q, n, |x, y| {
            if grid.get(x) == Some(color) && grid.get(y) == Some(color) {
                let sq = square_of([at, q, x, y]);
                if best.is_none_or(|b| (sq.side, sq.corner) < (b.side, b.corner)) {
                    best = Some(sq);
                }
            }
        });
    }
    best
}

/// Empty points where a `color` stone would complete a square.
pub fn winning_points(grid: &Grid, color: Color) -> BTreeSet<Coord> {
    let mut out = BTreeSet::new();
    let stones = grid.stones(color);
    let n = grid.size();
    for (i, &p) in stones.iter().enumerate() {
        for &q in &stones[i + 1..] {
            for_each_square_partner(p, q, n, |x, y| match (grid.get(x), grid.get(y)) {
                (Some(cx), None) if cx == color => {
                    out.insert(y);
                }
                (None, Some(cy)) if cy == color => {
                    out.insert(x);
                }
                _ => {}
            });
        }
    }
    out
}

/// Whether `color` has at least one winning point, without collecting them.
pub fn has_winning_point(grid: &Grid, color: Color) -> bool {
    let stones = grid.stones(color);
    let n = grid.size();
    let mut found = false;
    for (i, &p) in stones.iter().enumerate() {
        for &q in &stones[i + 1..] {
            for_each_square_partner(p, q, n, |x, y| {
                let (gx, gy) = (grid.get(x), grid.get(y));
                if (gx == Some(color) && gy.is_none()) || (gx.is_none() && gy == Some(color)) {
                    found = true;
                }
            });
            if found {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Win {
    pub square: Square,
    /// 1-based number of the stone that completed the square.
    pub stone: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GameStatus {
    InProgress,
    BlackWin(Win),
    WhiteWin(Win),
}

impl GameStatus {
    pub fn is_over(&self) -> bool {
        !matches!(self, GameStatus::InProgress)
    }

    pub fn winner(&self) -> Option<(Color, Win)> {
        match *self {
            GameStatus::InProgress => None,
            GameStatus::BlackWin(w) => Some((Color::Black, w)),
            GameStatus::WhiteWin(w) => Some((Color::White, w)),
        }
    }
}

/// A game in progress: stones, the move history and the outcome so far.
///
/// The grid is always the fold of `history`; colors alternate from Black and
/// stones are never removed except through [`Board::undo`], which the search
/// uses to backtrack.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    grid: Grid,
    history: Vec<Coord>,
    status: GameStatus,
}

impl Board {
    pub fn new(n: u8) -> Result<Self, MoveError> {
        if n < 7 || n > MAX_SIZE || n % 2 == 0 {
            return Err(MoveError::InvalidSize(n));
        }
        Ok(Board {
            grid: Grid::new(n),
            history: Vec::new(),
            status: GameStatus::InProgress,
        })
    }

    pub fn standard() -> Self {
        Board::new(DEFAULT_SIZE).expect("19 is a valid size")
    }

    pub fn from_moves(n: u8, moves: &[Coord]) -> Result<Self, MoveError> {
        let mut board = Board::new(n)?;
        for &m in moves {
            board.play(m)?;
        }
        Ok(board)
    }

    pub fn size(&self) -> u8 {
        self.grid.size()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn history(&self) -> &[Coord] {
        &self.history
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    pub fn get(&self, at: Coord) -> Option<Color> {
        self.grid.get(at)
    }

    pub fn stone_count(&self) -> usize {
        self.history.len()
    }

    /// Number the next stone will carry.
    pub fn next_stone(&self) -> usize {
        self.history.len() + 1
    }

    pub fn to_move(&self) -> Color {
        Color::of_stone(self.next_stone())
    }

    pub fn winning_points(&self, color: Color) -> BTreeSet<Coord> {
        winning_points(&self.grid, color)
    }

    pub fn check(&self, at: Coord) -> Result<(), MoveError> {
        if self.status.is_over() {
            return Err(MoveError::GameOver);
        }
        if !at.in_bounds(self.size()) {
            return Err(MoveError::OutOfBounds(at));
        }
        if self.grid.get(at).is_some() {
            return Err(MoveError::Occupied(at));
        }
        if self.history.len() == 2 {
            let first = self.history[0];
            if !first.is_orthogonally_adjacent(at) {
                return Err(MoveError::Rule4Violation { first, attempted: at });
            }
        }
        Ok(())
    }

    /// Successor board with the side to move placing a stone at `at`.
    pub fn place(&self, at: Coord) -> Result<Board, MoveError> {
        let mut next = self.clone();
        next.play(at)?;
        Ok(next)
    }

    /// In-place variant of [`Board::place`].
    pub fn play(&mut self, at: Coord) -> Result<(), MoveError> {
        self.check(at)?;
        let color = self.to_move();
        self.grid.put(at, color);
        self.history.push(at);
        if let Some(square) = completed_square(&self.grid, at, color) {
            let win = Win {
                square,
                stone: self.history.len(),
            };
            self.status = match color {
                Color::Black => GameStatus::BlackWin(win),
                Color::White => GameStatus::WhiteWin(win),
            };
        }
        Ok(())
    }

    /// Take back the last stone.
    pub fn undo(&mut self) -> Option<Coord> {
        let at = self.history.pop()?;
        let color = Color::of_stone(self.history.len() + 1);
        self.grid.take(at, color);
        self.status = GameStatus::InProgress;
        Some(at)
    }

    /// ASCII diagram, row 19 at the top, `X` black and `O` white.
    pub fn render(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        let header: String = (0..n).map(|c| format!(" {}", (b'A' + c) as char)).collect();
        out.push_str(&format!("   {header}\n"));
        for row in (0..n).rev() {
            out.push_str(&format!("{:>2} ", u32::from(row) + 1));
            for col in 0..n {
                let ch = match self.grid.get(Coord::new(col, row)) {
                    Some(Color::Black) => 'X',
                    Some(Color::White) => 'O',
                    None => '.',
                };
                out.push(' ');
                out.push(ch);
            }
            out.push_str(&format!(" {:>2}\n", u32::from(row) + 1));
        }
        out.push_str(&format!("   {header}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::c;
    use crate::geometry::squares_through;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn moves(text: &str) -> Vec<Coord> {
        text.split_whitespace().map(c).collect()
    }

    fn black(stones: &str) -> Grid {
        Grid::from_stones(19, &moves(stones), &[])
    }

    #[test]
    fn first_stone_at_center() {
        let b = Board::standard().place(c("J10")).unwrap();
        assert_eq!(b.get(c("J10")), Some(Color::Black));
        assert_eq!(b.history(), &[c("J10")]);
        assert_eq!(b.status(), GameStatus::InProgress);
        assert_eq!(b.to_move(), Color::White);
    }

    #[test]
    fn rule4_checked_on_blacks_second_stone() {
        let b = Board::from_moves(19, &moves("J10 A1")).unwrap();
        assert_eq!(
            b.place(c("M10")),
            Err(MoveError::Rule4Violation { first: c("J10"), attempted: c("M10") })
        );
        assert!(matches!(b.place(c("K11")), Err(MoveError::Rule4Violation { .. })));
        assert!(b.place(c("I10")).is_ok());
        assert!(b.place(c("J11")).is_ok());
        // white is unrestricted
        assert!(Board::from_moves(19, &moves("J10 A1 I10 S19")).is_ok());
    }

    #[test]
    fn occupied_out_of_bounds_and_game_over() {
        let b = Board::from_moves(19, &moves("J10")).unwrap();
        assert_eq!(b.place(c("J10")), Err(MoveError::Occupied(c("J10"))));
        assert_eq!(b.place(Coord::new(19, 0)), Err(MoveError::OutOfBounds(Coord::new(19, 0))));
        let won = Board::from_moves(19, &moves("I10 A1 H10 A2 I9 A4 H9")).unwrap();
        assert!(matches!(won.status(), GameStatus::BlackWin(_)));
        assert_eq!(won.place(c("S19")), Err(MoveError::GameOver));
    }

    #[test]
    fn black_completes_square() {
        let b = Board::from_moves(19, &moves("I10 A1 H10 A3 I9 A5")).unwrap();
        let b = b.place(c("H9")).unwrap();
        match b.status() {
            GameStatus::BlackWin(win) => {
                assert_eq!(win.square, Square::new(c("H9"), 1));
                assert_eq!(win.stone, 7);
                let mut v = win.square.vertices().to_vec();
                v.sort();
                let mut expect = moves("I10 H10 I9 H9");
                expect.sort();
                assert_eq!(v, expect);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn white_win_detected() {
        let b = Board::from_moves(19, &moves("J10 A1 I10 A2 S19 B1 S17 B2")).unwrap();
        assert!(matches!(b.status(), GameStatus::WhiteWin(Win { stone: 8, .. })));
    }

    #[test]
    fn undo_restores_state() {
        let before = Board::from_moves(19, &moves("J10 Q5 I10")).unwrap();
        let mut b = before.clone();
        b.play(c("C3")).unwrap();
        b.play(c("I11")).unwrap();
        b.undo();
        b.undo();
        assert_eq!(b, before);
    }

    #[test]
    fn completed_square_examples() {
        let g = black("J10 I10 I11 J11");
        assert_eq!(completed_square(&g, c("J11"), Color::Black), Some(Square::new(c("I10"), 1)));
        assert_eq!(completed_square(&black("J10"), c("J10"), Color::Black), None);
        let g = black("J10 I10 I9 J9");
        assert_eq!(completed_square(&g, c("J9"), Color::Black), Some(Square::new(c("I9"), 1)));
        assert_eq!(completed_square(&g, c("J9"), Color::White), None);
    }

    #[test]
    fn winning_points_examples() {
        let g = black("J10 I10 I11");
        assert_eq!(winning_points(&g, Color::Black), [c("J11")].into());
        let g = black("J10 I10 I9 H10");
        let w = winning_points(&g, Color::Black);
        assert!(w.contains(&c("J9")) && w.contains(&c("H9")));
        assert!(winning_points(&Grid::new(19), Color::Black).is_empty());
        assert!(!has_winning_point(&Grid::new(19), Color::White));
    }

    fn random_grid(rng: &mut ChaCha8Rng, n: u8, stones: usize) -> Grid {
        let mut g = Grid::new(n);
        let mut placed = 0;
        while placed < stones {
            let at = Coord::new(rng.random_range(0..n), rng.random_range(0..n));
            if g.is_empty_at(at) {
                let color = if rng.random_bool(0.5) { Color::Black } else { Color::White };
                g.put(at, color);
                placed += 1;
            }
        }
        g
    }

    /// Brute force: try every empty point and scan every square through it.
    pub(crate) fn brute_winning_points(g: &Grid, color: Color) -> BTreeSet<Coord> {
        let n = g.size();
        g.empty_points()
            .filter(|&e| {
                squares_through(e, n).iter().any(|sq| {
                    sq.vertices().iter().all(|&v| v == e || g.get(v) == Some(color))
                })
            })
            .collect()
    }

    #[test]
    fn winning_points_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..300 {
            let g = random_grid(&mut rng, 19, 10 + i % 40);
            for color in [Color::Black, Color::White] {
                let fast = winning_points(&g, color);
                assert_eq!(fast, brute_winning_points(&g, color));
                assert_eq!(has_winning_point(&g, color), !fast.is_empty());
            }
        }
    }

    /// All 4-subsets of `color` stones through `at` that form a square.
    fn brute_squares(g: &Grid, at: Coord, color: Color) -> Vec<Square> {
        let s: Vec<Coord> = g.stones(color).to_vec();
        let mut out = Vec::new();
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                for c in b + 1..s.len() {
                    for d in c + 1..s.len() {
                        let pts = [s[a], s[b], s[c], s[d]];
                        if !pts.contains(&at) {
                            continue;
                        }
                        let sq = square_of(pts);
                        let mut v = sq.vertices();
                        let mut p = pts;
                        v.sort();
                        p.sort();
                        if sq.side > 0 && v == p {
                            out.push(sq);
                        }
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn completed_square_matches_subset_scan(seed in any::<u64>(), stones in 4usize..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_grid(&mut rng, 7, stones);
            for color in [Color::Black, Color::White] {
                for &at in g.stones(color) {
                    let all = brute_squares(&g, at, color);
                    let got = completed_square(&g, at, color);
                    prop_assert_eq!(got, all.iter().copied().min_by_key(|s| (s.side, s.corner)));
                }
            }
        }

        #[test]
        fn placement_never_removes_stones(idx in proptest::collection::vec(0usize..361, 1..40)) {
            let mut b = Board::standard();
            for i in idx {
                let before = b.clone();
                if b.play(Coord::from_index(i, 19)).is_ok() {
                    for p in before.grid().stones(Color::Black) {
                        prop_assert_eq!(b.get(*p), Some(Color::Black));
                    }
                    for p in before.grid().stones(Color::White) {
                        prop_assert_eq!(b.get(*p), Some(Color::White));
                    }
                    prop_assert_eq!(b.history().len(), before.history().len() + 1);
                    for (k, &m) in b.history().iter().enumerate() {
                        prop_assert_eq!(b.get(m), Some(Color::of_stone(k + 1)));
                    }
                }
            }
        }
    }
}
