#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use gridsearch::harness::gen_random;
use gridsearch::{validate_grid, Coord, Edge, PartialGrid};

pub fn c(x: i64, y: i64) -> Coord {
    Coord::new(x, y)
}

pub fn lattice(w: i64, h: i64, home: Coord) -> PartialGrid {
    let nodes: Vec<Coord> = (0..w).flat_map(|x| (0..h).map(move |y| c(x, y))).collect();
    let mut edges = Vec::new();
    for &n in &nodes {
        if n.x + 1 < w {
            edges.push((n, c(n.x + 1, n.y)));
        }
        if n.y + 1 < h {
            edges.push((n, c(n.x, n.y + 1)));
        }
    }
    validate_grid(nodes, edges, home).unwrap()
}

pub fn path(len: i64, home: i64) -> PartialGrid {
    lattice(len, 1, c(home, 0))
}

pub fn rehome(g: &PartialGrid, home: Coord) -> PartialGrid {
    validate_grid(g.nodes(), g.edges().map(|e| e.endpoints()), home).unwrap()
}

pub struct Instance {
    pub name: String,
    pub seed: u64,
    pub grid: PartialGrid,
}

/// The seeded random suite: lattices from 3x3 up to 60x60, keep
/// probabilities 0.5 to 1.0, and every other grid rehomed to a middle node.
pub fn random_suite(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let w = 3 + (seed * 37 % 58) as u32;
            let h = 3 + (seed * 23 % 58) as u32;
            let p = 0.5 + (seed % 6) as f64 * 0.1;
            let g = gen_random(seed, w, h, p).unwrap();
            let g = if seed % 2 == 1 {
                let nodes: Vec<Coord> = g.nodes().collect();
                rehome(&g, nodes[nodes.len() / 2])
            } else {
                g
            };
            Instance {
                name: format!("rand-{seed}-{w}x{h}"),
                seed,
                grid: g,
            }
        })
        .collect()
}

/// Hand-built fixtures: paths, full lattices, combs, a ring and a spiral.
pub fn fixtures() -> Vec<(String, PartialGrid)> {
    let mut out = vec![
        ("path50-end".to_string(), path(50, 0)),
        ("path50-mid".to_string(), path(50, 25)),
        ("lattice8".to_string(), lattice(8, 8, c(0, 0))),
        ("lattice9-centre".to_string(), lattice(9, 9, c(4, 4))),
        ("lattice30x4".to_string(), lattice(30, 4, c(15, 0))),
        ("single".to_string(), PartialGrid::single_node()),
    ];
    // comb: spine along y = 0, teeth upward from every second node
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    for x in 0..20 {
        nodes.insert(c(x, 0));
        if x > 0 {
            edges.push((c(x - 1, 0), c(x, 0)));
        }
        if x % 2 == 0 {
            for y in 1..8 {
                nodes.insert(c(x, y));
                edges.push((c(x, y - 1), c(x, y)));
            }
        }
    }
    out.push(("comb".into(), validate_grid(nodes, edges, c(10, 0)).unwrap()));
    // square ring of width 1
    let ring: Vec<Coord> = (0..12)
        .map(|i| c(i, 0))
        .chain((1..12).map(|i| c(11, i)))
        .chain((0..11).rev().map(|i| c(i, 11)))
        .chain((1..11).rev().map(|i| c(0, i)))
        .collect();
    let mut redges: Vec<(Coord, Coord)> = ring.windows(2).map(|w| (w[0], w[1])).collect();
    redges.push((*ring.last().unwrap(), ring[0]));
    out.push(("ring12".into(), validate_grid(ring.clone(), redges, c(5, 0)).unwrap()));
    // spiral corridor
    let mut cur = c(0, 0);
    let mut sp = vec![cur];
    let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    'outer: for (turn, len) in (0..).zip(1..) {
        let (dx, dy) = dirs[turn % 4];
        for _ in 0..len * 2 {
            cur = c(cur.x + dx, cur.y + dy);
            sp.push(cur);
            if sp.len() >= 200 {
                break 'outer;
            }
        }
    }
    let spe: Vec<(Coord, Coord)> = sp.windows(2).map(|w| (w[0], w[1])).collect();
    out.push(("spiral".into(), validate_grid(sp.clone(), spe, c(0, 0)).unwrap()));
    out
}

/// Edges of `g` turned dirty by a naive global fixpoint: a clean edge is
/// recontaminated while it touches an unoccupied node that also touches a
/// dirty edge.
pub fn naive_fixpoint(g: &PartialGrid, clean: &mut BTreeSet<Edge>, occupied: &HashSet<Coord>) {
    loop {
        let dirty_at: HashSet<Coord> = g
            .edges()
            .filter(|e| !clean.contains(e))
            .flat_map(|e| {
                let (a, b) = e.endpoints();
                [a, b]
            })
            .collect();
        let before = clean.len();
        clean.retain(|e| {
            let (a, b) = e.endpoints();
            !([a, b].iter().any(|v| !occupied.contains(v) && dirty_at.contains(v)))
        });
        if clean.len() == before {
            return;
        }
    }
}

fn clean_connected(clean: &BTreeSet<Edge>) -> bool {
    let mut adj: std::collections::HashMap<Coord, Vec<Coord>> = Default::default();
    for e in clean {
        let (a, b) = e.endpoints();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(&s) = adj.keys().next() else { return true };
    let mut seen = HashSet::from([s]);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in &adj[&u] {
            if seen.insert(*v) {
                q.push_back(*v);
            }
        }
    }
    seen.len() == adj.len()
}

/// Exhaustive search over explicit searcher positions and clean sets:
/// can `k` searchers starting on the homebase clear `g` monotonically with
/// a connected clean set after every slide?
pub fn naive_feasible(g: &PartialGrid, k: usize) -> bool {
    type State = (Vec<Coord>, BTreeSet<Edge>);
    let all = g.edge_count();
    let start: State = (vec![g.homebase(); k], BTreeSet::new());
    let mut seen: HashSet<State> = HashSet::from([start.clone()]);
    let mut q = VecDeque::from([start]);
    while let Some((pos, clean)) = q.pop_front() {
        if clean.len() == all {
            return true;
        }
        for i in 0..k {
            if i > 0 && pos[i] == pos[i - 1] {
                continue;
            }
            let from = pos[i];
            for to in g.neighbors(from) {
                let mut np = pos.clone();
                np[i] = to;
                let mut nc = clean.clone();
                nc.insert(Edge::new(from, to));
                let occupied: HashSet<Coord> = np.iter().copied().collect();
                let size = nc.len();
                naive_fixpoint(g, &mut nc, &occupied);
                if nc.len() < size || !clean.is_subset(&nc) || !clean_connected(&nc) {
                    continue;
                }
                np.sort();
                let s = (np, nc);
                if seen.insert(s.clone()) {
                    q.push_back(s);
                }
            }
        }
    }
    false
}

pub fn naive_mcs(g: &PartialGrid, k_max: usize) -> Option<usize> {
    (1..=k_max).find(|&k| naive_feasible(g, k))
}
