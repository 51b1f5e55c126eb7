//! Partial grids: lattice nodes joined only by unit-length edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Integer lattice point. Ordered lexicographically by `x`, then `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }

    pub fn step(self, dir: Dir) -> Coord {
        let (dx, dy) = dir.delta();
        Coord::new(self.x + dx, self.y + dy)
    }

    /// Direction from `self` to a unit-distance neighbour, if any.
    pub fn dir_to(self, other: Coord) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| self.step(*d) == other)
    }

    pub fn manhattan(self, other: Coord) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn translate(self, dx: i64, dy: i64) -> Coord {
        Coord::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Coord {
    fn from((x, y): (i64, i64)) -> Self {
        Coord::new(x, y)
    }
}

/// Port labels of a partial grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Left,
    Right,
    Down,
    Up,
}

impl Dir {
    /// Listed in the order that yields lexicographically increasing neighbours.
    pub const ALL: [Dir; 4] = [Dir::Left, Dir::Down, Dir::Up, Dir::Right];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::Left => (-1, 0),
            Dir::Right => (1, 0),
            Dir::Down => (0, -1),
            Dir::Up => (0, 1),
        }
    }

    fn bit(self) -> u8 {
        match self {
            Dir::Left => 1,
            Dir::Right => 2,
            Dir::Down => 4,
            Dir::Up => 8,
        }
    }
}

/// The set of directions in which a node has an incident edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Ports(u8);

impl Ports {
    pub const NONE: Ports = Ports(0);

    pub fn has(self, dir: Dir) -> bool {
        self.0 & dir.bit() != 0
    }

    pub fn with(self, dir: Dir) -> Ports {
        Ports(self.0 | dir.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = Dir> {
        Dir::ALL.into_iter().filter(move |d| self.has(*d))
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }
}

/// Undirected edge, stored with its endpoints in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Coord,
    b: Coord,
}

impl Edge {
    pub fn new(u: Coord, v: Coord) -> Self {
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(self) -> (Coord, Coord) {
        (self.a, self.b)
    }

    pub fn other(self, end: Coord) -> Coord {
        if end == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(self, c: Coord) -> bool {
        self.a == c || self.b == c
    }

    pub fn is_unit(self) -> bool {
        self.a.manhattan(self.b) == 1
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("edge {0} does not have unit length")]
    NonUnitEdge(Edge),
    #[error("edge {0} has an endpoint that is not a node")]
    DanglingEdge(Edge),
    #[error("graph is not connected ({reached} of {total} nodes reachable from the homebase)")]
    Disconnected { reached: usize, total: usize },
    #[error("homebase {0} is not a node")]
    HomebaseMissing(Coord),
    #[error("duplicate node {0}")]
    DuplicateNode(Coord),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Connected partial grid with its homebase translated to the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGrid {
    ports: BTreeMap<Coord, Ports>,
    edges: BTreeSet<Edge>,
    homebase: Coord,
}

/// Checks the raw description and returns the grid translated so that the
/// homebase sits at `(0, 0)`.
/// Keeps the connected component of `root` and validates it, translating
/// `root` to the origin.
pub fn component_grid<N, E>(nodes: N, edges: E, root: Coord) -> Result<PartialGrid, GridError>
where
    N: IntoIterator<Item = Coord>,
    E: IntoIterator<Item = (Coord, Coord)>,
{
    let nodes: BTreeSet<Coord> = nodes.into_iter().collect();
    let edges: Vec<(Coord, Coord)> = edges.into_iter().collect();
    let mut adj: BTreeMap<Coord, Vec<Coord>> = BTreeMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = BTreeSet::new();
    if nodes.contains(&root) {
        seen.insert(root);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in adj.get(&u).into_iter().flatten() {
                if nodes.contains(&v) && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
    }
    let kept: Vec<(Coord, Coord)> = edges
        .into_iter()
        .filter(|(a, b)| seen.contains(a) && seen.contains(b))
        .collect();
    if seen.is_empty() {
        return Err(GridError::HomebaseMissing(root));
    }
    validate_grid(seen, kept, root)
}

pub fn validate_grid<N, E>(nodes: N, edges: E, homebase: Coord) -> Result<PartialGrid, GridError>
where
    N: IntoIterator<Item = Coord>,
    E: IntoIterator<Item = (Coord, Coord)>,
{
    let nodes: BTreeSet<Coord> = nodes.into_iter().collect();
    let edges: Vec<Edge> = edges.into_iter().map(|(u, v)| Edge::new(u, v)).collect();
    if !nodes.contains(&homebase) {
        return Err(GridError::HomebaseMissing(homebase));
    }
    for e in &edges {
        if !e.is_unit() {
            return Err(GridError::NonUnitEdge(*e));
        }
    }
    for e in &edges {
        let (a, b) = e.endpoints();
        if !nodes.contains(&a) || !nodes.contains(&b) {
            return Err(GridError::DanglingEdge(*e));
        }
    }
    let (dx, dy) = (-homebase.x, -homebase.y);
    let mut ports: BTreeMap<Coord, Ports> = nodes
        .iter()
        .map(|c| (c.translate(dx, dy), Ports::NONE))
        .collect();
    let mut edge_set = BTreeSet::new();
    for e in edges {
        let (a, b) = e.endpoints();
        let (a, b) = (a.translate(dx, dy), b.translate(dx, dy));
        let dir = a.dir_to(b).expect("unit edge");
        let opp = b.dir_to(a).expect("unit edge");
        ports.entry(a).and_modify(|p| *p = p.with(dir));
        ports.entry(b).and_modify(|p| *p = p.with(opp));
        edge_set.insert(Edge::new(a, b));
    }
    let grid = PartialGrid {
        ports,
        edges: edge_set,
        homebase: Coord::ORIGIN,
    };
    let reached = grid.component_of(Coord::ORIGIN).len();
    if reached != grid.node_count() {
        return Err(GridError::Disconnected {
            reached,
            total: grid.node_count(),
        });
    }
    Ok(grid)
}

impl PartialGrid {
    pub fn single_node() -> Self {
        validate_grid([Coord::ORIGIN], [], Coord::ORIGIN).expect("trivial grid")
    }

    pub fn homebase(&self) -> Coord {
        self.homebase
    }

    pub fn node_count(&self) -> usize {
        self.ports.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.ports.contains_key(&c)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Coord> + '_ {
        self.ports.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: Coord, v: Coord) -> bool {
        match (self.ports.get(&u), u.dir_to(v)) {
            (Some(p), Some(d)) => p.has(d),
            _ => false,
        }
    }

    pub fn ports(&self, c: Coord) -> Option<Ports> {
        self.ports.get(&c).copied()
    }

    pub fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        let p = self.ports.get(&c).copied().unwrap_or(Ports::NONE);
        p.iter().map(move |d| c.step(d))
    }

    /// Nodes reachable from `start`, in BFS order.
    pub fn component_of(&self, start: Coord) -> Vec<Coord> {
        if !self.contains(start) {
            return Vec::new();
        }
        let mut seen = BTreeSet::from([start]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if seen.insert(v) {
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        order
    }

    /// Bounding box as `(min, max)` corners.
    pub fn bounds(&self) -> (Coord, Coord) {
        let mut lo = Coord::ORIGIN;
        let mut hi = Coord::ORIGIN;
        for c in self.nodes() {
            lo.x = lo.x.min(c.x);
            lo.y = lo.y.min(c.y);
            hi.x = hi.x.max(c.x);
            hi.y = hi.y.max(c.y);
        }
        (lo, hi)
    }

    /// Serializes to the line-based `gridsearch-grid v1` format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("gridsearch-grid v1\n");
        out.push_str(&format!("homebase {} {}\n", self.homebase.x, self.homebase.y));
        for c in self.nodes() {
            out.push_str(&format!("node {} {}\n", c.x, c.y));
        }
        for e in self.edges() {
            let (a, b) = e.endpoints();
            out.push_str(&format!("edge {} {} {} {}\n", a.x, a.y, b.x, b.y));
        }
        out
    }

    pub fn parse(text: &str) -> Result<PartialGrid, GridError> {
        parse_grid(text)
    }
}

fn parse_ints(fields: &[&str], want: usize, line: usize) -> Result<Vec<i64>, GridError> {
    if fields.len() != want {
        return Err(GridError::Parse {
            line,
            msg: format!("expected {want} integers, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<i64>().map_err(|_| GridError::Parse {
                line,
                msg: format!("bad integer `{f}`"),
            })
        })
        .collect()
}

/// Parses the grid file format. Duplicate records are rejected.
pub fn parse_grid(text: &str) -> Result<PartialGrid, GridError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "gridsearch-grid v1")) => {}
        Some((line, other)) => {
            return Err(GridError::Parse {
                line,
                msg: format!("expected header `gridsearch-grid v1`, found `{other}`"),
            })
        }
        None => {
            return Err(GridError::Parse {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut homebase = None;
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields[0] {
            "node" => {
                let v = parse_ints(&fields[1..], 2, line)?;
                let c = Coord::new(v[0], v[1]);
                if !nodes.insert(c) {
                    return Err(GridError::DuplicateNode(c));
                }
            }
            "edge" => {
                let v = parse_ints(&fields[1..], 4, line)?;
                let e = Edge::new(Coord::new(v[0], v[1]), Coord::new(v[2], v[3]));
                if !edges.insert(e) {
                    return Err(GridError::DuplicateEdge(e));
                }
            }
            "homebase" => {
                let v = parse_ints(&fields[1..], 2, line)?;
                if homebase.replace(Coord::new(v[0], v[1])).is_some() {
                    return Err(GridError::Parse {
                        line,
                        msg: "homebase given more than once".into(),
                    });
                }
            }
            other => {
                return Err(GridError::Parse {
                    line,
                    msg: format!("unknown record `{other}`"),
                })
            }
        }
    }
    let homebase = homebase.ok_or(GridError::Parse {
        line: 0,
        msg: "missing homebase record".into(),
    })?;
    validate_grid(nodes, edges.into_iter().map(Edge::endpoints), homebase)
}
