use billiard_lab::geometry::point::Vec2;
use billiard_lab::surface_flow::{
    first_return, product_exact, rotation_decomposition, saddle_connections, straight_line_flow, straight_line_flow_dir, FlowError, Mat2,
    ReturnOptions, Transversal,
};
use billiard_lab::unfolding::{regular_octagon_surface, square_torus, TranslationSurface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn slope_dir(rho: f64) -> Vec2 {
    Vec2::new(rho, 1.0).normalized()
}

#[test]
fn torus_unit_horizontal_flow() {
    let t = square_torus();
    let tr = straight_line_flow(&t, 0.0, 0, Vec2::new(0.25, 0.5), 1.0, 100).unwrap();
    assert!((tr.holonomy() - Vec2::new(1.0, 0.0)).norm() < 1e-14);
    assert!(tr.end.dist(Vec2::new(0.25, 0.5)) < 1e-14);
    assert_eq!(tr.hit_cone_point, None);
}

#[test]
fn holonomy_equals_time_times_direction() {
    let o = regular_octagon_surface();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let start = Vec2::new(rng.gen_range(0.3..0.7), rng.gen_range(0.5..1.5));
        let tr = straight_line_flow(&o, theta, 0, start, 40.0, 100_000).unwrap();
        let expect = Vec2::from_angle(theta) * tr.total_time;
        assert!((tr.holonomy() - expect).norm() < 1e-9);
    }
}

#[test]
fn golden_torus_equidistributes() {
    let t = square_torus();
    let d = Vec2::new(1.0, GOLDEN).normalized();
    let mut counts = [[0u32; 10]; 10];
    let (mut cell, mut p) = (0, Vec2::new(0.123, 0.456));
    let dt = 0.1;
    let steps = 100_000;
    for _ in 0..steps {
        let tr = straight_line_flow_dir(&t, d, cell, p, dt, 100).unwrap();
        cell = tr.end_cell;
        p = tr.end;
        let (i, j) = (((p.x * 10.0) as usize).min(9), ((p.y * 10.0) as usize).min(9));
        counts[i][j] += 1;
    }
    let disc = counts.iter().flatten().map(|&c| (c as f64 / steps as f64 - 0.01).abs()).fold(0.0, f64::max);
    assert!(disc < 0.05 * 0.01 * 100.0, "discrepancy {disc}");
}

#[test]
fn torus_rotation_iet() {
    let t = square_torus();
    for rho in [GOLDEN, 2.0f64.sqrt() - 1.0, 1.0 + 1.0 / std::f64::consts::PI] {
        let j = Transversal::new(&t, 0, Vec2::new(1.0, 0.0), 1.0).unwrap();
        let r = first_return(&t, slope_dir(rho), &j, &ReturnOptions::default()).unwrap();
        let f = rho.fract();
        assert_eq!(r.iet.d(), 2);
        assert!((r.iet.lengths[0] - (1.0 - f)).abs() < 1e-12);
        assert!((r.iet.lengths[1] - f).abs() < 1e-12);
        assert_eq!(r.iet.bottom, vec![1, 0]);
        let h = (1.0 + rho * rho).sqrt();
        for &x in &r.iet.heights {
            assert!((x - h).abs() < 1e-12);
        }
    }
}

#[test]
fn periodic_direction_is_non_minimal() {
    let t = square_torus();
    let j = Transversal::new(&t, 0, Vec2::new(1.0, 0.0), 1.0).unwrap();
    let e = first_return(&t, slope_dir(0.5), &j, &ReturnOptions::default()).unwrap_err();
    assert!(matches!(e, FlowError::NonMinimal { .. }), "{e:?}");
}

fn area_identity(s: &TranslationSurface, seed: u64, count: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..count {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let flow = Vec2::from_angle(theta);
        let j = Transversal::perpendicular(s, flow, 0, 0.3).unwrap();
        match first_return(s, flow, &j, &ReturnOptions::default()) {
            Ok(r) => {
                assert!((r.swept_area() - s.area()).abs() < 1e-9, "θ = {theta}: {} vs {}", r.swept_area(), s.area());
                assert!(r.iet.is_irreducible());
                checked += 1;
            }
            Err(e) => panic!("θ = {theta}: {e}"),
        }
    }
    checked
}

#[test]
fn octagon_area_identity() {
    let o = regular_octagon_surface();
    assert_eq!(area_identity(&o, 11, 20), 20);
}

#[test]
fn iet_iterates_match_flow_returns() {
    let o = regular_octagon_surface();
    let flow = Vec2::from_angle(0.4321);
    let j = Transversal::perpendicular(&o, flow, 0, 0.5).unwrap();
    let r = first_return(&o, flow, &j, &ReturnOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut x: f64 = rng.gen_range(0.0..0.5);
        let (cell, p) = j.point(x);
        let mut tr_cell = cell;
        let mut pos = p;
        for _ in 0..3 {
            let (y, label) = r.iet.map(&x).unwrap();
            let h = r.iet.heights[label];
            let tr = straight_line_flow_dir(&o, flow, tr_cell, pos, h, 100_000).unwrap();
            let (jc, jp) = j.point(y);
            // same point of the surface: either same cell chart, or identified by a gluing
            let same =
                (tr.end_cell == jc && tr.end.dist(jp) < 1e-8) || (tr.end.dist(jp) < 1e-8 || on_glued_edge(&o, tr.end_cell, tr.end, jc, jp));
            assert!(same, "return point mismatch");
            x = y;
            tr_cell = jc;
            pos = jp;
        }
    }
}

fn on_glued_edge(s: &TranslationSurface, c: usize, p: Vec2, jc: usize, jp: Vec2) -> bool {
    (0..s.cell(c).len()).any(|e| {
        let (pc, _, tr) = s.partner(c, e);
        pc == jc && (p + tr).dist(jp) < 1e-8
    })
}

fn lattice_vectors(max_len: f64) -> BTreeSet<(i64, i64)> {
    let r = max_len.ceil() as i64;
    let mut out = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            if (x, y) != (0, 0) && num_integer::gcd(x, y) == 1 && ((x * x + y * y) as f64).sqrt() <= max_len {
                out.insert((x, y));
            }
        }
    }
    out
}

#[test]
fn square_torus_saddle_connections() {
    let t = square_torus();
    for l in [1.5, 4.0] {
        let found: Vec<(i64, i64)> =
            saddle_connections(&t, l).iter().map(|c| (c.holonomy.x.round() as i64, c.holonomy.y.round() as i64)).collect();
        let set: BTreeSet<_> = found.iter().copied().collect();
        assert_eq!(set.len(), found.len(), "duplicates");
        assert_eq!(set, lattice_vectors(l));
    }
    assert_eq!(saddle_connections(&t, 1.5).len(), 8);
}

/// Candidates are small integer combinations of the edge vectors (holonomies of saddle connections
/// lie in their span); each is confirmed by flowing from every singular corner whose wedge contains it.
fn brute_force_saddles(s: &TranslationSurface, max_len: f64, coeff: i64) -> Vec<Vec2> {
    let mut basis: Vec<Vec2> = Vec::new();
    for c in 0..s.cell_count() {
        for e in 0..s.cell(c).len() {
            let (a, b) = s.edge(c, e);
            let v = b - a;
            if !basis.iter().any(|w| w.dist(v) < 1e-9 || w.dist(-v) < 1e-9) {
                basis.push(v);
            }
        }
    }
    assert!(basis.len() <= 5);
    let mut cands: Vec<Vec2> = Vec::new();
    let k = basis.len() as u32;
    let span = (2 * coeff + 1) as usize;
    for code in 0..span.pow(k) {
        let mut x = Vec2::ZERO;
        let mut r = code;
        for b in &basis {
            x += *b * ((r % span) as i64 - coeff) as f64;
            r /= span;
        }
        if x.norm() > 1e-9 && x.norm() <= max_len + 1e-9 && !cands.iter().any(|c| c.dist(x) < 1e-9) {
            cands.push(x);
        }
    }
    let mut out = Vec::new();
    for cp in s.cone_points() {
        for &(c0, v0) in &cp.corners {
            let cell = s.cell(c0);
            let n0 = cell.len();
            let p0 = cell[v0];
            let lo = cell[(v0 + 1) % n0] - p0;
            let hi = cell[(v0 + n0 - 1) % n0] - p0;
            // convex corners only: half-open wedge [lo, hi)
            assert!(lo.cross(hi) > 0.0);
            for &x in &cands {
                if !(lo.cross(x) >= -1e-12 * x.norm() && x.cross(hi) > 1e-12 * x.norm()) {
                    continue;
                }
                let dir = x.normalized();
                let eps = 1e-7;
                let tr = straight_line_flow_dir(s, dir, c0, p0 + dir * eps, max_len + 1.0, 1_000_000).unwrap();
                if tr.hit_cone_point.is_some() && (tr.total_time + eps - x.norm()).abs() < 1e-7 {
                    out.push(x);
                }
            }
        }
    }
    out
}

fn sorted(mut v: Vec<Vec2>) -> Vec<Vec2> {
    v.sort_by(|a, b| (a.x * 1e6).round().total_cmp(&(b.x * 1e6).round()).then((a.y * 1e6).round().total_cmp(&(b.y * 1e6).round())));
    v
}

#[test]
fn octagon_saddle_connections_match_brute_force() {
    let o = regular_octagon_surface();
    let fast = sorted(saddle_connections(&o, 2.0).iter().map(|c| c.holonomy).collect());
    let slow = sorted(brute_force_saddles(&o, 2.0, 4));
    assert_eq!(fast.len(), slow.len(), "fast {fast:?}\nslow {slow:?}");
    for (a, b) in fast.iter().zip(&slow) {
        assert!(a.dist(*b) < 1e-9, "{a:?} vs {b:?}");
    }
}

#[test]
fn rotation_decomposition_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let theta = -std::f64::consts::PI + (i as f64 + 0.5) * std::f64::consts::TAU / 1000.0;
        let (a, b, c) = rotation_decomposition(theta).unwrap();
        worst = worst.max(product_exact(&[a, b, c]).max_abs_diff(&Mat2::rotation(theta)));
    }
    assert!(worst <= 1e-14, "{worst}");
}
