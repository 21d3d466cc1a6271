//! The eight symmetries of the square board and canonicalization of White's
//! first stone.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryTransform {
    Identity,
    /// Mirror about the center column (J on 19x19).
    ReflectColumn,
    /// Mirror about the center row (10 on 19x19).
    ReflectRow,
    Rotate180,
    /// `(col,row) -> (row,col)`.
    MainDiagonal,
    /// `(col,row) -> (n-1-row, n-1-col)`.
    AntiDiagonal,
    /// Counter-clockwise quarter turn.
    Rotate90,
    Rotate270,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("the center {0} cannot be canonicalized")]
    CenterNotCanonicalizable(Coord),
}

impl SymmetryTransform {
    /// Tie-break order used by [`canonicalize_reply`].
    pub const ALL: [SymmetryTransform; 8] = [
        SymmetryTransform::Identity,
        SymmetryTransform::ReflectColumn,
        SymmetryTransform::ReflectRow,
        SymmetryTransform::Rotate180,
        SymmetryTransform::MainDiagonal,
        SymmetryTransform::AntiDiagonal,
        SymmetryTransform::Rotate90,
        SymmetryTransform::Rotate270,
    ];

    pub fn apply(self, at: Coord, n: u8) -> Coord {
        let m = n - 1;
        let Coord { col, row } = at;
        let (c, r) = match self {
            SymmetryTransform::Identity => (col, row),
            SymmetryTransform::ReflectColumn => (m - col, row),
            SymmetryTransform::ReflectRow => (col, m - row),
            SymmetryTransform::Rotate180 => (m - col, m - row),
            SymmetryTransform::MainDiagonal => (row, col),
            SymmetryTransform::AntiDiagonal => (m - row, m - col),
            SymmetryTransform::Rotate90 => (m - row, col),
            SymmetryTransform::Rotate270 => (row, m - col),
        };
        Coord::new(c, r)
    }

    pub fn inverse(self) -> SymmetryTransform {
        match self {
            SymmetryTransform::Rotate90 => SymmetryTransform::Rotate270,
            SymmetryTransform::Rotate270 => SymmetryTransform::Rotate90,
            t => t,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: SymmetryTransform) -> SymmetryTransform {
        // Identify the composite by its action on a point with a trivial stabilizer.
        let n = 7;
        let probe = Coord::new(1, 0);
        let target = self.apply(other.apply(probe, n), n);
        SymmetryTransform::ALL
            .into_iter()
            .find(|t| t.apply(probe, n) == target)
            .expect("the dihedral group is closed")
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryTransform::Identity => "identity",
            SymmetryTransform::ReflectColumn => "reflect-column",
            SymmetryTransform::ReflectRow => "reflect-row",
            SymmetryTransform::Rotate180 => "rotate-180",
            SymmetryTransform::MainDiagonal => "main-diagonal",
            SymmetryTransform::AntiDiagonal => "anti-diagonal",
            SymmetryTransform::Rotate90 => "rotate-90",
            SymmetryTransform::Rotate270 => "rotate-270",
        }
    }
}

impl fmt::Display for SymmetryTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical domain for White's stone 2: columns right of center, rows up to
/// and including the center row (`{K..S} x {1..10}` on 19x19).
pub fn in_canonical_domain(at: Coord, n: u8) -> bool {
    let mid = n / 2;
    at.col > mid && at.col < n && at.row <= mid
}

/// All canonical stone-2 points in row-major order.
pub fn canonical_domain(n: u8) -> Vec<Coord> {
    let mut out: Vec<Coord> = (0..n)
        .flat_map(|row| (0..n).map(move |col| Coord::new(col, row)))
        .filter(|&p| in_canonical_domain(p, n))
        .collect();
    out.sort();
    out
}

/// First transform (in [`SymmetryTransform::ALL`] order) mapping `stone2`
/// into the canonical domain, with the image.
pub fn canonicalize_reply(stone2: Coord, n: u8) -> Result<(SymmetryTransform, Coord), SymmetryError> {
    if stone2 == Coord::center(n) {
        return Err(SymmetryError::CenterNotCanonicalizable(stone2));
    }
    Ok(SymmetryTransform::ALL
        .into_iter()
        .map(|t| (t, t.apply(stone2, n)))
        .find(|&(_, img)| in_canonical_domain(img, n))
        .expect("every non-center point has a canonical image"))
}
