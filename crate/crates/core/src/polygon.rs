//! Polygons with holes turned into partial grids of pitch `r`, and a
//! sampled check that the grid covers the polygon.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Float;
use thiserror::Error;

use crate::grid::{component_grid, Coord, GridError, PartialGrid};

#[derive(Debug, Error, PartialEq)]
pub enum PolygonError {
    #[error("origin is not strictly inside the polygon")]
    OriginOutside,
    #[error("no lattice node next to the origin lies in the polygon")]
    NoLatticeNodeNearOrigin,
    #[error("pitch must be positive and finite")]
    BadPitch,
    #[error("ring with fewer than 3 vertices")]
    DegenerateRing,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<F> {
    pub x: F,
    pub y: F,
}

impl<F: Float> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Point { x, y }
    }

    fn dist(self, o: Point<F>) -> F {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonEnv<F> {
    pub outer: Vec<Point<F>>,
    pub holes: Vec<Vec<Point<F>>>,
    pub r: F,
}

fn orient<F: Float>(a: Point<F>, b: Point<F>, c: Point<F>) -> F {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn within<F: Float>(a: Point<F>, b: Point<F>, p: Point<F>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn on_segment<F: Float>(a: Point<F>, b: Point<F>, p: Point<F>) -> bool {
    orient(a, b, p) == F::zero() && within(a, b, p)
}

/// Closed segments `ab` and `cd` share at least one point.
fn segments_meet<F: Float>(a: Point<F>, b: Point<F>, c: Point<F>, d: Point<F>) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    let z = F::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

impl<F: Float> PolygonEnv<F> {
    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point<F>>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point<F>, Point<F>)> + '_ {
        self.rings()
            .flat_map(|ring| (0..ring.len()).map(move |k| (ring[k], ring[(k + 1) % ring.len()])))
    }

    fn on_boundary(&self, p: Point<F>) -> bool {
        self.segments().any(|(a, b)| on_segment(a, b, p))
    }

    /// Strict interior under the even-odd rule over all rings.
    pub fn contains(&self, p: Point<F>) -> bool {
        if self.on_boundary(p) {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.segments() {
            if (a.y > p.y) != (b.y > p.y) {
                let t = (p.y - a.y) / (b.y - a.y);
                let x = a.x + t * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// A unit lattice segment is kept iff its midpoint is inside and it
    /// meets no ring segment.
    pub fn segment_inside(&self, a: Point<F>, b: Point<F>) -> bool {
        let two = F::one() + F::one();
        let mid = Point::new((a.x + b.x) / two, (a.y + b.y) / two);
        self.contains(mid) && !self.segments().any(|(c, d)| segments_meet(a, b, c, d))
    }

    fn bbox(&self) -> (Point<F>, Point<F>) {
        let mut lo = self.outer[0];
        let mut hi = self.outer[0];
        for p in self.rings().flatten() {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    fn validate(&self) -> Result<(), PolygonError> {
        if !(self.r > F::zero() && self.r.is_finite()) {
            return Err(PolygonError::BadPitch);
        }
        if self.rings().any(|r| r.len() < 3) {
            return Err(PolygonError::DegenerateRing);
        }
        Ok(())
    }
}

/// What the lattice lost while building the grid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub lattice_nodes: usize,
    pub lattice_edges: usize,
    /// Sizes of node components not connected to the origin, largest first.
    pub discarded_components: Vec<usize>,
}

fn lattice_point<F: Float>(origin: Point<F>, r: F, c: Coord) -> Point<F> {
    let f = |v: i64| F::from(v).expect("lattice index fits the scalar");
    Point::new(origin.x + f(c.x) * r, origin.y + f(c.y) * r)
}

fn index_range<F: Float>(lo: F, hi: F, o: F, r: F) -> (i64, i64) {
    let a = ((lo - o) / r).floor().to_i64().unwrap_or(0);
    let b = ((hi - o) / r).ceil().to_i64().unwrap_or(0);
    (a, b)
}

/// Grid of pitch `r` anchored at `origin`; node `(i, j)` sits at
/// `origin + r * (i, j)`. Returns the origin's component.
pub fn build_grid<F: Float>(env: &PolygonEnv<F>, origin: Point<F>) -> Result<(PartialGrid, Diagnostics), PolygonError> {
    env.validate()?;
    if !env.contains(origin) {
        return Err(PolygonError::OriginOutside);
    }
    let (lo, hi) = env.bbox();
    let (x0, x1) = index_range(lo.x, hi.x, origin.x, env.r);
    let (y0, y1) = index_range(lo.y, hi.y, origin.y, env.r);
    let mut nodes = BTreeSet::new();
    for i in x0..=x1 {
        for j in y0..=y1 {
            let c = Coord::new(i, j);
            if env.contains(lattice_point(origin, env.r, c)) {
                nodes.insert(c);
            }
        }
    }
    let mut edges = Vec::new();
    for &c in &nodes {
        for n in [Coord::new(c.x + 1, c.y), Coord::new(c.x, c.y + 1)] {
            if nodes.contains(&n)
                && env.segment_inside(lattice_point(origin, env.r, c), lattice_point(origin, env.r, n))
            {
                edges.push((c, n));
            }
        }
    }
    let grid = component_grid(nodes.iter().copied(), edges.iter().copied(), Coord::ORIGIN)?;
    if grid.node_count() == 1 {
        return Err(PolygonError::NoLatticeNodeNearOrigin);
    }
    let kept: HashSet<Coord> = grid.nodes().collect();
    let mut comps = component_sizes(nodes.iter().copied().filter(|c| !kept.contains(c)), &edges);
    comps.sort_unstable_by(|a, b| b.cmp(a));
    let diag = Diagnostics {
        lattice_nodes: nodes.len(),
        lattice_edges: edges.len(),
        discarded_components: comps,
    };
    Ok((grid, diag))
}

fn component_sizes(nodes: impl Iterator<Item = Coord>, edges: &[(Coord, Coord)]) -> Vec<usize> {
    let mut parent: BTreeMap<Coord, Coord> = nodes.map(|c| (c, c)).collect();
    fn find(p: &mut BTreeMap<Coord, Coord>, c: Coord) -> Coord {
        let mut r = c;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(c, r);
        r
    }
    for &(a, b) in edges {
        if parent.contains_key(&a) && parent.contains_key(&b) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent.insert(ra, rb);
        }
    }
    let keys: Vec<Coord> = parent.keys().copied().collect();
    let mut sizes: BTreeMap<Coord, usize> = BTreeMap::new();
    for c in keys {
        let r = find(&mut parent, c);
        *sizes.entry(r).or_insert(0) += 1;
    }
    sizes.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverReport<F> {
    pub covered: bool,
    pub connected: bool,
    pub worst_gap: F,
    pub samples: usize,
}

pub const DEFAULT_DENSITY: u32 = 4;

/// Samples the interior at pitch `r / density` (anchored at the origin)
/// plus every ring vertex, and measures the distance to the nearest node.
pub fn covers_check<F: Float>(grid: &PartialGrid, env: &PolygonEnv<F>, origin: Point<F>, density: u32) -> CoverReport<F> {
    let density = density.max(1);
    let step = env.r / F::from(density).expect("density fits the scalar");
    let nodes: HashSet<Coord> = grid.nodes().collect();
    let (lo, hi) = env.bbox();
    let (x0, x1) = index_range(lo.x, hi.x, origin.x, step);
    let (y0, y1) = index_range(lo.y, hi.y, origin.y, step);
    let mut samples: Vec<Point<F>> = Vec::new();
    for i in x0..=x1 {
        for j in y0..=y1 {
            let p = lattice_point(origin, step, Coord::new(i, j));
            if env.contains(p) {
                samples.push(p);
            }
        }
    }
    samples.extend(env.rings().flatten().copied());
    let span = (x1 - x0).max(y1 - y0) / density as i64 + 2;
    let mut worst = F::zero();
    for &p in &samples {
        let g = nearest_gap(&nodes, origin, env.r, p, span);
        if g > worst {
            worst = g;
        }
    }
    let connected = grid.component_of(grid.homebase()).len() == grid.node_count();
    let tol = env.r * F::from(1e-9).expect("tolerance fits the scalar");
    CoverReport {
        covered: connected && worst <= env.r + tol,
        connected,
        worst_gap: worst,
        samples: samples.len(),
    }
}

fn nearest_gap<F: Float>(nodes: &HashSet<Coord>, origin: Point<F>, r: F, p: Point<F>, span: i64) -> F {
    let ci = ((p.x - origin.x) / r).round().to_i64().unwrap_or(0);
    let cj = ((p.y - origin.y) / r).round().to_i64().unwrap_or(0);
    let mut best = F::infinity();
    for k in 0..=span {
        let rf = F::from(k).expect("ring index fits the scalar");
        if best <= (rf - F::one()) * r {
            break;
        }
        for i in ci - k..=ci + k {
            for j in cj - k..=cj + k {
                if (i - ci).abs() != k && (j - cj).abs() != k {
                    continue;
                }
                let c = Coord::new(i, j);
                if nodes.contains(&c) {
                    best = best.min(lattice_point(origin, r, c).dist(p));
                }
            }
        }
    }
    best
}

/// Polygon with pitch and origin as read from a polygon file.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonFile<F> {
    pub env: PolygonEnv<F>,
    pub origin: Point<F>,
}

pub fn parse_polygon<F: Float>(text: &str) -> Result<PolygonFile<F>, PolygonError> {
    let err = |line: usize, msg: &str| PolygonError::Parse {
        line,
        msg: msg.to_string(),
    };
    let num = |line: usize, s: &str| -> Result<F, PolygonError> {
        let v: f64 = s.parse().map_err(|_| err(line, "bad number"))?;
        F::from(v).ok_or_else(|| err(line, "number out of range"))
    };
    let mut header = false;
    let (mut r, mut origin, mut outer) = (None, None, None);
    let mut holes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if !header {
            if l != "gridsearch-polygon v1" {
                return Err(err(line, "expected header `gridsearch-polygon v1`"));
            }
            header = true;
            continue;
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        let nums = |from: usize| -> Result<Vec<F>, PolygonError> { f[from..].iter().map(|s| num(line, s)).collect() };
        match f[0] {
            "r" if f.len() == 2 => r = Some(num(line, f[1])?),
            "origin" if f.len() == 3 => origin = Some(Point::new(num(line, f[1])?, num(line, f[2])?)),
            "outer" | "hole" => {
                let v = nums(1)?;
                if v.len() % 2 != 0 {
                    return Err(err(line, "odd coordinate count"));
                }
                let ring: Vec<Point<F>> = v.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
                if f[0] == "outer" {
                    if outer.is_some() {
                        return Err(err(line, "second outer ring"));
                    }
                    outer = Some(ring);
                } else {
                    holes.push(ring);
                }
            }
            _ => return Err(err(line, "malformed record")),
        }
    }
    let missing = |what: &str| err(0, &format!("missing `{what}`"));
    Ok(PolygonFile {
        env: PolygonEnv {
            outer: outer.ok_or_else(|| missing("outer"))?,
            holes,
            r: r.ok_or_else(|| missing("r"))?,
        },
        origin: origin.ok_or_else(|| missing("origin"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(h: f64) -> Vec<Point<f64>> {
        vec![Point::new(-h, -h), Point::new(h, -h), Point::new(h, h), Point::new(-h, h)]
    }

    #[test]
    fn strict_interior() {
        let env = PolygonEnv { outer: sq(1.0), holes: vec![], r: 1.0 };
        assert!(env.contains(Point::new(0.0, 0.0)));
        assert!(!env.contains(Point::new(1.0, 0.0)));
        assert!(!env.contains(Point::new(1.0, 1.0)));
        assert!(!env.contains(Point::new(2.0, 0.0)));
    }

    #[test]
    fn touching_segments_meet() {
        let p = |x, y| Point::new(x, y);
        assert!(segments_meet(p(0.0, 0.0), p(1.0, 0.0), p(1.0, -1.0), p(1.0, 1.0)));
        assert!(segments_meet(p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)));
        assert!(!segments_meet(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)));
    }

    #[test]
    fn sliver_has_no_neighbour() {
        let env = PolygonEnv {
            outer: vec![Point::new(-0.4, -0.1), Point::new(0.4, -0.1), Point::new(0.4, 0.1), Point::new(-0.4, 0.1)],
            holes: vec![],
            r: 1.0,
        };
        assert_eq!(build_grid(&env, Point::new(0.0, 0.0)).unwrap_err(), PolygonError::NoLatticeNodeNearOrigin);
        assert_eq!(build_grid(&env, Point::new(3.0, 0.0)).unwrap_err(), PolygonError::OriginOutside);
    }

    #[test]
    fn parse_roundtrip_fields() {
        let text = "gridsearch-polygon v1\nr 0.5\norigin 0 0\nouter -2 -2 2 -2 2 2 -2 2\nhole -1 -1 -1 1 1 1 1 -1\n";
        let p: PolygonFile<f32> = parse_polygon(text).unwrap();
        assert_eq!(p.env.r, 0.5);
        assert_eq!(p.env.holes.len(), 1);
        assert_eq!(p.env.outer.len(), 4);
        assert!(parse_polygon::<f64>("r 1\n").is_err());
        assert!(parse_polygon::<f64>("gridsearch-polygon v1\nr 1\norigin 0 0\n").is_err());
    }
}
