//! Board coordinates and their text notation (`J10`, `A1`, ...).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default board size, the standard Go board.
pub const DEFAULT_SIZE: u8 = 19;

/// Largest board size whose columns can be lettered with a single letter.
pub const MAX_SIZE: u8 = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("invalid column `{0}`")]
    InvalidColumn(char),
    #[error("invalid row `{0}`")]
    InvalidRow(String),
    #[error("malformed coordinate `{0}`")]
    MalformedInput(String),
}

/// An intersection on the board. Column 0 is rendered `A`, row 0 is rendered `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub col: u8,
    pub row: u8,
}

impl Coord {
    pub const fn new(col: u8, row: u8) -> Self {
        Coord { col, row }
    }

    /// Center of an `n`x`n` board, `(J,10)` on 19x19.
    pub const fn center(n: u8) -> Self {
        Coord::new(n / 2, n / 2)
    }

    pub fn in_bounds(self, n: u8) -> bool {
        self.col < n && self.row < n
    }

    /// Offset by a signed delta, `None` when the result leaves the board.
    pub fn offset(self, dcol: i32, drow: i32, n: u8) -> Option<Coord> {
        let col = i32::from(self.col) + dcol;
        let row = i32::from(self.row) + drow;
        let n = i32::from(n);
        if (0..n).contains(&col) && (0..n).contains(&row) {
            Some(Coord::new(col as u8, row as u8))
        } else {
            None
        }
    }

    /// Row-major index (`row * n + col`).
    pub fn index(self, n: u8) -> usize {
        usize::from(self.row) * usize::from(n) + usize::from(self.col)
    }

    pub fn from_index(idx: usize, n: u8) -> Coord {
        let n = usize::from(n);
        Coord::new((idx % n) as u8, (idx / n) as u8)
    }

    pub fn column_letter(self) -> char {
        (b'A' + self.col) as char
    }

    /// Orthogonal neighbours at distance one share a grid line.
    pub fn is_orthogonally_adjacent(self, other: Coord) -> bool {
        let dc = self.col.abs_diff(other.col);
        let dr = self.row.abs_diff(other.row);
        dc + dr == 1
    }

    /// Parse `<letter><number>` such as `J10` (letter case-insensitive).
    pub fn parse(text: &str, n: u8) -> Result<Coord, CoordError> {
        let text = text.trim();
        let mut chars = text.chars();
        let letter = chars
            .next()
            .ok_or_else(|| CoordError::MalformedInput(text.to_string()))?;
        if !letter.is_ascii_alphabetic() {
            return Err(CoordError::MalformedInput(text.to_string()));
        }
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CoordError::MalformedInput(text.to_string()));
        }
        let letter = letter.to_ascii_uppercase();
        let col = letter as u8 - b'A';
        if col >= n {
            return Err(CoordError::InvalidColumn(letter));
        }
        let row: u32 = digits
            .parse()
            .map_err(|_| CoordError::InvalidRow(digits.to_string()))?;
        if row == 0 || row > u32::from(n) {
            return Err(CoordError::InvalidRow(digits.to_string()));
        }
        Ok(Coord::new(col, (row - 1) as u8))
    }

    /// Parse against the largest supported board; bounds are checked later.
    pub fn parse_any(text: &str) -> Result<Coord, CoordError> {
        Coord::parse(text, MAX_SIZE)
    }
}

// Row-major: row first, then column.
impl Ord for Coord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.column_letter(), u32::from(self.row) + 1)
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Coord::parse_any(&text).map_err(serde::de::Error::custom)
    }
}

/// Parse a whitespace-separated move list in play order.
pub fn parse_move_list(text: &str, n: u8) -> Result<Vec<Coord>, CoordError> {
    text.split_whitespace().map(|t| Coord::parse(t, n)).collect()
}

/// Shorthand for tests and fixed tables: panics on bad input.
pub fn c(text: &str) -> Coord {
    Coord::parse(text, DEFAULT_SIZE).unwrap_or_else(|e| panic!("{e}"))
}
