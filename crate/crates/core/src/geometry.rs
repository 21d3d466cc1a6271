//! Axis-aligned squares, grid-aligned right isosceles triangles and the
//! stone-4 danger set `W`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::coord::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate input: both points are {0}")]
    DegenerateInput(Coord),
}

/// A square whose edges lie on grid lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Square {
    /// Vertex with the lowest column and row.
    pub corner: Coord,
    pub side: u8,
}

impl Square {
    pub fn new(corner: Coord, side: u8) -> Self {
        Square { corner, side }
    }

    /// Vertices as lower-left, lower-right, upper-left, upper-right.
    pub fn vertices(&self) -> [Coord; 4] {
        let Coord { col, row } = self.corner;
        let s = self.side;
        [
            Coord::new(col, row),
            Coord::new(col + s, row),
            Coord::new(col, row + s),
            Coord::new(col + s, row + s),
        ]
    }

    pub fn in_bounds(&self, n: u8) -> bool {
        self.side >= 1 && u16::from(self.corner.col) + u16::from(self.side) < u16::from(n)
            && u16::from(self.corner.row) + u16::from(self.side) < u16::from(n)
    }

    pub fn contains(&self, at: Coord) -> bool {
        self.vertices().contains(&at)
    }
}

/// Every in-bounds square with `at` as a vertex, by side ascending and then
/// corner in row-major order.
pub fn squares_through(at: Coord, n: u8) -> Vec<Square> {
    let mut out = Vec::new();
    for side in 1..n {
        let s = i32::from(side);
        let mut corners: Vec<Coord> = [(0, 0), (-s, 0), (0, -s), (-s, -s)]
            .iter()
            .filter_map(|&(dc, dr)| at.offset(dc, dr, n))
            .filter(|&corner| Square::new(corner, side).in_bounds(n))
            .collect();
        corners.sort();
        out.extend(corners.into_iter().map(|corner| Square::new(corner, side)));
    }
    out
}

/// Points `u` such that `a`, `b`, `u` form a right isosceles triangle whose
/// legs lie on grid lines. Occupancy is not considered.
pub fn iso_right_completions(a: Coord, b: Coord, n: u8) -> Result<BTreeSet<Coord>, GeometryError> {
    if a == b {
        return Err(GeometryError::DegenerateInput(a));
    }
    let dc = i32::from(b.col) - i32::from(a.col);
    let dr = i32::from(b.row) - i32::from(a.row);
    let mut out = BTreeSet::new();
    if dc == 0 || dr == 0 {
        // `ab` is a leg: the right angle sits at `a` or at `b`
        let d = dc.abs() + dr.abs();
        for p in [a, b] {
            for sign in [1, -1] {
                let (oc, or) = if dr == 0 { (0, sign * d) } else { (sign * d, 0) };
                out.extend(p.offset(oc, or, n));
            }
        }
    } else if dc.abs() == dr.abs() {
        // `ab` is the hypotenuse
        out.insert(Coord::new(a.col, b.row));
        out.insert(Coord::new(b.col, a.row));
    }
    Ok(out)
}

/// Offsets from the board center of the nine fixed members of `W`:
/// (I,11) (J,11) (H,10) (H,11) (I,9) (J,9) (H,9) (H,13) (J,13) on 19x19.
const W_BASE_OFFSETS: [(i32, i32); 9] = [
    (-1, 1),
    (0, 1),
    (-2, 0),
    (-2, 1),
    (-1, -1),
    (0, -1),
    (-2, -1),
    (-2, 3),
    (0, 3),
];

/// The set of White stone-4 points against which the scripted line is not
/// guaranteed: nine fixed points plus the triangle completions `U` (with the
/// stone-5 threat point) and `V` (with the stone-7 threat point).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WSet {
    pub stone2: Coord,
    pub base: Vec<Coord>,
    pub u_set: BTreeSet<Coord>,
    pub v_set: BTreeSet<Coord>,
    pub all: BTreeSet<Coord>,
}

impl WSet {
    pub fn contains(&self, at: Coord) -> bool {
        self.all.contains(&at)
    }
}

/// Offset from the center, panicking if it leaves the board (only used for
/// points that fit on every supported size).
pub(crate) fn from_center(n: u8, dcol: i32, drow: i32) -> Coord {
    Coord::center(n)
        .offset(dcol, drow, n)
        .expect("board too small for the opening pattern")
}

pub fn build_w(stone2: Coord, n: u8) -> Result<WSet, GeometryError> {
    let base: Vec<Coord> = W_BASE_OFFSETS
        .iter()
        .map(|&(dc, dr)| from_center(n, dc, dr))
        .collect();
    let u_set = iso_right_completions(stone2, from_center(n, 0, 1), n)?;
    let v_set = iso_right_completions(stone2, from_center(n, -2, 1), n)?;
    let all = base
        .iter()
        .chain(u_set.iter())
        .chain(v_set.iter())
        .copied()
        .collect();
    Ok(WSet {
        stone2,
        base,
        u_set,
        v_set,
        all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::c;

    /// Brute-force triangle predicate: some vertex is the right angle, and the
    /// two legs from it are axis-aligned, perpendicular and equally long.
    pub(crate) fn is_grid_iso_right(a: Coord, b: Coord, u: Coord) -> bool {
        if a == b || a == u || b == u {
            return false;
        }
        let pts = [a, b, u];
        (0..3).any(|i| {
            let v = pts[i];
            let w1 = pts[(i + 1) % 3];
            let w2 = pts[(i + 2) % 3];
            let l1 = (i32::from(w1.col) - i32::from(v.col), i32::from(w1.row) - i32::from(v.row));
            let l2 = (i32::from(w2.col) - i32::from(v.col), i32::from(w2.row) - i32::from(v.row));
            let axis1 = l1.0 == 0 || l1.1 == 0;
            let axis2 = l2.0 == 0 || l2.1 == 0;
            let perp = l1.0 * l2.0 + l1.1 * l2.1 == 0;
            let equal = l1.0.abs() + l1.1.abs() == l2.0.abs() + l2.1.abs();
            axis1 && axis2 && perp && equal
        })
    }

    fn brute_completions(a: Coord, b: Coord, n: u8) -> BTreeSet<Coord> {
        (0..usize::from(n) * usize::from(n))
            .map(|i| Coord::from_index(i, n))
            .filter(|&u| is_grid_iso_right(a, b, u))
            .collect()
    }

    #[test]
    fn squares_through_corner() {
        let sq = squares_through(c("A1"), 19);
        assert_eq!(sq.len(), 18);
        assert!(sq.iter().all(|s| s.corner == c("A1")));
        assert_eq!(squares_through(Coord::new(0, 0), 2), vec![Square::new(Coord::new(0, 0), 1)]);
    }

    #[test]
    fn squares_through_center_matches_enumeration() {
        let at = c("J10");
        let n = 19;
        let mut brute = Vec::new();
        for side in 1..n {
            for row in 0..n {
                for col in 0..n {
                    let sq = Square::new(Coord::new(col, row), side);
                    if sq.in_bounds(n) && sq.contains(at) {
                        brute.push(sq);
                    }
                }
            }
        }
        let got = squares_through(at, n);
        assert_eq!(got.len(), brute.len());
        // sides 1..=9 fit in all four roles, 10..=18 in none
        assert_eq!(got.len(), 36);
        let mut sorted = got.clone();
        sorted.sort_by_key(|s| (s.side, s.corner));
        assert_eq!(got, sorted);
        for s in &brute {
            assert!(got.contains(s));
        }
    }

    #[test]
    fn completions_examples() {
        let set = |v: &[&str]| v.iter().map(|s| c(s)).collect::<BTreeSet<_>>();
        assert_eq!(iso_right_completions(c("M8"), c("J11"), 19).unwrap(), set(&["M11", "J8"]));
        assert_eq!(
            iso_right_completions(c("N11"), c("J11"), 19).unwrap(),
            set(&["N7", "N15", "J7", "J15"])
        );
        assert!(iso_right_completions(c("K1"), c("J11"), 19).unwrap().is_empty());
        assert_eq!(
            iso_right_completions(c("J10"), c("J10"), 19),
            Err(GeometryError::DegenerateInput(c("J10")))
        );
    }

    #[test]
    fn completions_match_brute_force_on_sub_board() {
        let n = 19;
        let pts: Vec<Coord> = (6..13)
            .flat_map(|col| (6..13).map(move |row| Coord::new(col, row)))
            .collect();
        for &a in &pts {
            for &b in &pts {
                if a == b {
                    continue;
                }
                let got = iso_right_completions(a, b, n).unwrap();
                assert_eq!(got, brute_completions(a, b, n), "{a} {b}");
                assert_eq!(got, iso_right_completions(b, a, n).unwrap());
            }
        }
    }

    #[test]
    fn completions_clip_at_edges() {
        let n = 7;
        for i in 0..49 {
            for j in 0..49 {
                let (a, b) = (Coord::from_index(i, n), Coord::from_index(j, n));
                if a != b {
                    assert_eq!(iso_right_completions(a, b, n).unwrap(), brute_completions(a, b, n));
                }
            }
        }
    }

    #[test]
    fn w_examples() {
        let w = build_w(c("M8"), 19).unwrap();
        assert_eq!(w.all.len(), 11);
        assert!(w.contains(c("M11")) && w.contains(c("J8")));
        let w = build_w(c("K1"), 19).unwrap();
        assert_eq!(w.all.len(), 9);
        assert_eq!(w.all, w.base.iter().copied().collect());
        let w = build_w(c("K10"), 19).unwrap();
        assert_eq!(w.all.len(), 11);
        assert!(w.contains(c("K11")) && w.contains(c("J10")));
    }

    #[test]
    fn w_base_is_the_listed_points() {
        let w = build_w(c("Q5"), 19).unwrap();
        let listed: Vec<Coord> = ["I11", "J11", "H10", "H11", "I9", "J9", "H9", "H13", "J13"]
            .iter()
            .map(|s| c(s))
            .collect();
        assert_eq!(w.base, listed);
    }

    #[test]
    fn w_size_bounds_over_canonical_domain() {
        for col in 10..19 {
            for row in 0..10 {
                let w = build_w(Coord::new(col, row), 19).unwrap();
                assert!((9..=17).contains(&w.all.len()));
                assert!(w.base.iter().all(|p| w.all.contains(p)));
                assert!(w.all.iter().all(|p| p.in_bounds(19)));
            }
        }
    }
}
