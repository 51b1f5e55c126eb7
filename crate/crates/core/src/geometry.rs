//! Frontiers, their nested rectangles, checkpoints and expansions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::grid::{Coord, PartialGrid};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("rectangle index {index} outside 0..={side}")]
    IndexOutOfRange { index: i64, side: i64 },
    #[error("frontier anchor {0} is not aligned to the side length")]
    MisalignedAnchor(Coord),
    #[error("side length must be at least 1")]
    ZeroSide,
}

/// Frontier side length (the square root of the node bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SideParam(i64);

impl SideParam {
    pub fn new(s: i64) -> Result<Self, GeometryError> {
        if s < 1 {
            Err(GeometryError::ZeroSide)
        } else {
            Ok(SideParam(s))
        }
    }

    /// Smallest `s` with `s * s >= n`; a bound of 0 or 1 gives `s = 1`.
    pub fn from_node_bound(n: u64) -> Self {
        let mut s = (n as f64).sqrt() as u64;
        while s * s < n {
            s += 1;
        }
        while s > 1 && (s - 1) * (s - 1) >= n {
            s -= 1;
        }
        SideParam(s.max(1) as i64)
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
        })
    }
}

/// Closed axis-aligned lattice rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub lo: Coord,
    pub hi: Coord,
}

impl Rect {
    pub fn contains(&self, p: Coord) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    pub fn on_boundary(&self, p: Coord) -> bool {
        self.contains(p)
            && (p.x == self.lo.x || p.x == self.hi.x || p.y == self.lo.y || p.y == self.hi.y)
    }

    pub fn width(&self) -> i64 {
        self.hi.x - self.lo.x
    }

    pub fn height(&self) -> i64 {
        self.hi.y - self.lo.y
    }

    /// Lattice points on the boundary, each listed once, in lexicographic order.
    pub fn boundary_points(&self) -> Vec<Coord> {
        let mut pts = BTreeSet::new();
        for x in self.lo.x..=self.hi.x {
            pts.insert(Coord::new(x, self.lo.y));
            pts.insert(Coord::new(x, self.hi.y));
        }
        for y in self.lo.y..=self.hi.y {
            pts.insert(Coord::new(self.lo.x, y));
            pts.insert(Coord::new(self.hi.x, y));
        }
        pts.into_iter().collect()
    }
}

/// Axis-parallel segment of length `s` whose anchor coordinates are multiples of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frontier {
    anchor: Coord,
    orientation: Orientation,
    side: SideParam,
}

impl Frontier {
    pub fn new(anchor: Coord, orientation: Orientation, side: SideParam) -> Result<Self, GeometryError> {
        let s = side.get();
        if anchor.x.rem_euclid(s) != 0 || anchor.y.rem_euclid(s) != 0 {
            return Err(GeometryError::MisalignedAnchor(anchor));
        }
        Ok(Frontier {
            anchor,
            orientation,
            side,
        })
    }

    /// The frontier from the origin to `(s, 0)`.
    pub fn homebase(side: SideParam) -> Self {
        Frontier {
            anchor: Coord::ORIGIN,
            orientation: Orientation::Horizontal,
            side,
        }
    }

    pub fn anchor(&self) -> Coord {
        self.anchor
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn side(&self) -> SideParam {
        self.side
    }

    pub fn end(&self) -> Coord {
        let s = self.side.get();
        match self.orientation {
            Orientation::Horizontal => self.anchor.translate(s, 0),
            Orientation::Vertical => self.anchor.translate(0, s),
        }
    }

    pub fn contains_point(&self, p: Coord) -> bool {
        self.rect_unchecked(0).contains(p)
    }

    /// Lattice points of the segment, from anchor to end.
    pub fn points(&self) -> Vec<Coord> {
        let s = self.side.get();
        (0..=s)
            .map(|k| match self.orientation {
                Orientation::Horizontal => self.anchor.translate(k, 0),
                Orientation::Vertical => self.anchor.translate(0, k),
            })
            .collect()
    }

    fn check_index(&self, i: i64) -> Result<(), GeometryError> {
        if i < 0 || i > self.side.get() {
            Err(GeometryError::IndexOutOfRange {
                index: i,
                side: self.side.get(),
            })
        } else {
            Ok(())
        }
    }

    fn rect_unchecked(&self, i: i64) -> Rect {
        let (a, b) = (self.anchor, self.end());
        Rect {
            lo: Coord::new(a.x - i, a.y - i),
            hi: Coord::new(b.x + i, b.y + i),
        }
    }

    /// The `i`-th rectangle as a closed region.
    pub fn rect(&self, i: i64) -> Result<Rect, GeometryError> {
        self.check_index(i)?;
        Ok(self.rect_unchecked(i))
    }

    /// Corner vertices of the `i`-th rectangle, listed as in the defining
    /// formulas for horizontal and vertical frontiers.
    pub fn rectangle_corners(&self, i: i64) -> Result<[Coord; 4], GeometryError> {
        self.check_index(i)?;
        let (a, b) = (self.anchor, self.end());
        Ok(match self.orientation {
            Orientation::Horizontal => [
                Coord::new(a.x - i, a.y - i),
                Coord::new(a.x - i, a.y + i),
                Coord::new(b.x + i, b.y - i),
                Coord::new(b.x + i, b.y + i),
            ],
            Orientation::Vertical => [
                Coord::new(a.x - i, a.y - i),
                Coord::new(a.x + i, a.y - i),
                Coord::new(b.x - i, b.y + i),
                Coord::new(b.x + i, b.y + i),
            ],
        })
    }

    /// True iff `p` lies on or inside the `i`-th rectangle, i.e. on one of
    /// the rings `0..=i`.
    pub fn region_contains(&self, i: i64, p: Coord) -> Result<bool, GeometryError> {
        Ok(self.rect(i)?.contains(p))
    }

    /// Grid nodes on the boundary of the `i`-th rectangle.
    pub fn ring_nodes(&self, i: i64, grid: &PartialGrid) -> Result<BTreeSet<Coord>, GeometryError> {
        let rect = self.rect(i)?;
        Ok(rect
            .boundary_points()
            .into_iter()
            .filter(|p| grid.contains(*p))
            .collect())
    }

    /// The ten frontiers tiling the boundary of the `s`-th rectangle.
    pub fn frontiers_on_rectangle(&self) -> Vec<Frontier> {
        let s = self.side.get();
        let a = self.anchor;
        let mk = |x: i64, y: i64, o: Orientation| Frontier {
            anchor: Coord::new(x, y),
            orientation: o,
            side: self.side,
        };
        use Orientation::*;
        match self.orientation {
            Horizontal => {
                let mut v = Vec::with_capacity(10);
                for k in -1..=1 {
                    v.push(mk(a.x + k * s, a.y - s, Horizontal));
                }
                for k in -1..=1 {
                    v.push(mk(a.x + k * s, a.y + s, Horizontal));
                }
                for k in -1..=0 {
                    v.push(mk(a.x - s, a.y + k * s, Vertical));
                }
                for k in -1..=0 {
                    v.push(mk(a.x + 2 * s, a.y + k * s, Vertical));
                }
                v
            }
            Vertical => {
                let mut v = Vec::with_capacity(10);
                for k in -1..=1 {
                    v.push(mk(a.x - s, a.y + k * s, Vertical));
                }
                for k in -1..=1 {
                    v.push(mk(a.x + s, a.y + k * s, Vertical));
                }
                for k in -1..=0 {
                    v.push(mk(a.x + k * s, a.y - s, Horizontal));
                }
                for k in -1..=0 {
                    v.push(mk(a.x + k * s, a.y + 2 * s, Horizontal));
                }
                v
            }
        }
    }

    /// Short and long axis offsets of `p`, used for sweep ordering.
    pub fn long_axis(&self, p: Coord) -> i64 {
        match self.orientation {
            Orientation::Horizontal => p.x,
            Orientation::Vertical => p.y,
        }
    }

    pub fn short_axis(&self, p: Coord) -> i64 {
        match self.orientation {
            Orientation::Horizontal => p.y,
            Orientation::Vertical => p.x,
        }
    }
}

impl fmt::Display for Frontier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.anchor, self.orientation)
    }
}

/// Set of grid nodes on one frontier from which the search expands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub id: u64,
    pub frontier: Frontier,
    pub seed_nodes: BTreeSet<Coord>,
    pub expansions_done: i64,
}

impl Checkpoint {
    pub fn new(id: u64, frontier: Frontier, seed_nodes: BTreeSet<Coord>) -> Self {
        debug_assert!(seed_nodes.iter().all(|p| frontier.contains_point(*p)));
        Checkpoint {
            id,
            frontier,
            seed_nodes,
            expansions_done: 0,
        }
    }
}

/// Ground-truth expansions `E_0, ..., E_upto` computed from the full grid.
pub fn expansions(
    grid: &PartialGrid,
    frontier: &Frontier,
    seeds: &BTreeSet<Coord>,
    upto: i64,
) -> Result<Vec<BTreeSet<Coord>>, GeometryError> {
    frontier.check_index(upto)?;
    let mut levels: Vec<BTreeSet<Coord>> = vec![seeds.iter().copied().filter(|c| grid.contains(*c)).collect()];
    let mut seen: BTreeSet<Coord> = levels[0].clone();
    for i in 1..=upto {
        let rect = frontier.rect_unchecked(i);
        let prev = &levels[(i - 1) as usize];
        let mut reach: BTreeSet<Coord> = prev.clone();
        let mut queue: VecDeque<Coord> = prev.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for v in grid.neighbors(u) {
                if rect.contains(v) && reach.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        let level: BTreeSet<Coord> = reach.into_iter().filter(|v| !seen.contains(v)).collect();
        seen.extend(level.iter().copied());
        levels.push(level);
    }
    Ok(levels)
}

/// The `i`-th expansion of the checkpoint in `grid`.
pub fn expansion(
    checkpoint: &Checkpoint,
    i: i64,
    grid: &PartialGrid,
) -> Result<BTreeSet<Coord>, GeometryError> {
    let mut levels = expansions(grid, &checkpoint.frontier, &checkpoint.seed_nodes, i)?;
    Ok(levels.pop().unwrap_or_default())
}
