use gridsearch::polygon::{build_grid, covers_check, parse_polygon, Point, PolygonEnv, DEFAULT_DENSITY};
use gridsearch::{validate_grid, Coord, PolygonEnvF32, PolygonEnvF64};

fn square(h: f64) -> Vec<Point<f64>> {
    vec![Point::new(-h, -h), Point::new(h, -h), Point::new(h, h), Point::new(-h, h)]
}

fn origin() -> Point<f64> {
    Point::new(0.0, 0.0)
}

fn revalidates(g: &gridsearch::PartialGrid) {
    validate_grid(g.nodes(), g.edges().map(|e| e.endpoints()), g.homebase()).unwrap();
}

#[test]
fn three_r_square() {
    for r in [1.0, 0.25, 7.5] {
        let env: PolygonEnvF64 = PolygonEnv {
            outer: square(1.5 * r),
            holes: vec![],
            r,
        };
        let (g, diag) = build_grid(&env, origin()).unwrap();
        // the boundary points at +-1.5r are excluded, leaving a 3x3 block
        assert_eq!((g.node_count(), g.edge_count()), (9, 12));
        assert!(diag.discarded_components.is_empty());
        revalidates(&g);
        let cov = covers_check(&g, &env, origin(), DEFAULT_DENSITY);
        assert!(cov.covered);
        assert!(cov.worst_gap <= r * std::f64::consts::SQRT_2 / 2.0 + 1e-9 * r);
    }
}

#[test]
fn square_with_hole() {
    let r = 1.0;
    let env: PolygonEnvF64 = PolygonEnv {
        outer: square(2.5),
        holes: vec![square(0.75)],
        r,
    };
    let o = Point::new(-2.0, 0.0);
    let (g, _) = build_grid(&env, o).unwrap();
    assert_eq!(g.node_count(), 24);
    assert_eq!(g.edge_count(), 36);
    revalidates(&g);
    // the centre lattice point (x = 0) lies in the hole
    assert!(!g.contains(Coord::new(2, 0)));
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let mid = Point::new(-2.0 + (a.x + b.x) as f64 / 2.0, (a.y + b.y) as f64 / 2.0);
        assert!(env.contains(mid));
    }
    assert!(covers_check(&g, &env, o, DEFAULT_DENSITY).covered);
}

fn alcove() -> PolygonEnvF64 {
    let pts = [
        (-1.5, -1.5),
        (1.5, -1.5),
        (1.5, 0.3),
        (4.5, 0.3),
        (4.5, 0.7),
        (1.5, 0.7),
        (1.5, 1.5),
        (-1.5, 1.5),
    ];
    PolygonEnv {
        outer: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        holes: vec![],
        r: 1.0,
    }
}

#[test]
fn blind_alcove_is_not_covered() {
    let env = alcove();
    let (g, _) = build_grid(&env, origin()).unwrap();
    assert_eq!(g.node_count(), 9);
    revalidates(&g);
    let cov = covers_check(&g, &env, origin(), DEFAULT_DENSITY);
    assert!(!cov.covered);
    assert!(cov.worst_gap > env.r);
    assert!(cov.connected);
}

#[test]
fn disc_containing_polygon_is_covered() {
    let n = 16;
    let outer: Vec<Point<f64>> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            Point::new(3.0 * t.cos(), 3.0 * t.sin())
        })
        .collect();
    let env = PolygonEnv { outer, holes: vec![], r: 1.0 };
    let (g, _) = build_grid(&env, origin()).unwrap();
    assert!(covers_check(&g, &env, origin(), DEFAULT_DENSITY).covered);
}

#[test]
fn denser_sampling_never_uncovers_less() {
    for env in [alcove(), PolygonEnv { outer: square(1.5), holes: vec![], r: 1.0 }] {
        let (g, _) = build_grid(&env, origin()).unwrap();
        let mut prev = covers_check(&g, &env, origin(), 1);
        for d in [2, 4, 8, 16] {
            let cur = covers_check(&g, &env, origin(), d);
            assert!(prev.covered || !cur.covered);
            assert!(cur.worst_gap >= prev.worst_gap - 1e-12);
            prev = cur;
        }
    }
}

#[test]
fn disconnected_pieces_are_diagnosed() {
    // two rooms joined by a corridor too thin to carry a lattice edge
    let pts = [
        (-1.5, -1.5),
        (1.5, -1.5),
        (1.5, 0.3),
        (4.5, 0.3),
        (4.5, -1.5),
        (7.5, -1.5),
        (7.5, 1.5),
        (4.5, 1.5),
        (4.5, 0.7),
        (1.5, 0.7),
        (1.5, 1.5),
        (-1.5, 1.5),
    ];
    let env = PolygonEnv {
        outer: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        holes: vec![],
        r: 1.0,
    };
    let (g, diag) = build_grid(&env, origin()).unwrap();
    assert_eq!(g.node_count(), 9);
    assert_eq!(diag.discarded_components, vec![9]);
    assert!(!covers_check(&g, &env, origin(), DEFAULT_DENSITY).covered);
}

#[test]
fn single_precision_agrees() {
    let text = "gridsearch-polygon v1\nr 1\norigin -2 0\nouter -2.5 -2.5 2.5 -2.5 2.5 2.5 -2.5 2.5\nhole -0.75 -0.75 0.75 -0.75 0.75 0.75 -0.75 0.75\n";
    let p32 = parse_polygon::<f32>(text).unwrap();
    let p64 = parse_polygon::<f64>(text).unwrap();
    let env32: PolygonEnvF32 = p32.env.clone();
    let (g32, _) = build_grid(&env32, p32.origin).unwrap();
    let (g64, _) = build_grid(&p64.env, p64.origin).unwrap();
    assert_eq!(g32, g64);
    assert!(covers_check(&g32, &env32, p32.origin, DEFAULT_DENSITY).covered);
}
