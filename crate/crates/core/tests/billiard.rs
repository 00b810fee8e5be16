use billiard_lab::billiard::{
    flow, flow_exact, liouville_sample, shadowing_experiment, step, ExactState, ShadowingBounds, Termination, Trajectory,
};
use billiard_lab::geometry::point::{RatPoint, Vec2};
use billiard_lab::geometry::polygon::{polygon_from_tuples, triangle_from_angles, unit_square};
use billiard_lab::geometry::{perturb, validate_rational_polygon, Polygon};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn tables() -> Vec<Polygon> {
    vec![
        unit_square(),
        triangle_from_angles(PI / 4.0, PI / 4.0).unwrap(),
        triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap(),
        polygon_from_tuples(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]).unwrap(),
        triangle_from_angles(1.0, 0.7).unwrap(),
    ]
}

fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}

/// `∠(−in, e) + ∠(out, e) − π` per collision.
fn reflection_defect(p: &Polygon, tr: &Trajectory) -> f64 {
    tr.events
        .iter()
        .map(|ev| {
            let (a, b) = p.edge(ev.edge);
            let e = b - a;
            (angle_between(-Vec2::from_angle(ev.theta_in), e) + angle_between(Vec2::from_angle(ev.theta_out), e) - PI).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn reflection_law_and_speed() {
    for (k, p) in tables().iter().enumerate() {
        for s in liouville_sample(p, 50, k as u64) {
            let tr = flow(p, &s, 1e9, 300);
            assert!(reflection_defect(p, &tr) < 1e-10);
            // each straight piece is traversed at unit speed
            let mut prev = (0.0, s.position);
            for ev in &tr.events {
                assert!(((ev.position - prev.1).norm() - (ev.time - prev.0)).abs() < 1e-10);
                prev = (ev.time, ev.position);
            }
        }
    }
}

#[test]
fn float_time_reversal() {
    for (k, p) in tables().iter().enumerate() {
        for s in liouville_sample(p, 40, 100 + k as u64) {
            let tr = flow(p, &s, 1e9, 500);
            let Ok(next) = step(p, &tr.final_state) else { continue };
            let t = tr.total_time + 0.5 * next.dt;
            let there = flow(p, &s, t, 1000);
            let back = flow(p, &there.final_state.reversed(), t, 1000);
            assert_eq!(back.events.len(), there.events.len());
            let err = back.final_state.position.dist(s.position) + (back.final_state.direction + s.direction).norm();
            assert!(err < 1e-9, "{err}");
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_tables() -> Vec<Polygon> {
    let pts = |v: &[(i64, i64)]| validate_rational_polygon(v.iter().map(|&(x, y)| RatPoint::from_ints(x, y)).collect()).unwrap();
    vec![unit_square(), pts(&[(0, 0), (1, 0), (0, 1)]), pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])]
}

fn random_exact_state(p: &Polygon, rng: &mut ChaCha8Rng) -> ExactState {
    loop {
        let q = rng.gen_range(7..40);
        let x = RatPoint::new(rat(rng.gen_range(1..2 * q), q), rat(rng.gen_range(1..2 * q), q));
        if !p.contains(x.to_f64(), 0.0) || p.boundary_distance(x.to_f64()) == 0.0 {
            continue;
        }
        let d = RatPoint::new(rat(rng.gen_range(-20..=20), rng.gen_range(1..9)), rat(rng.gen_range(-20..=20), rng.gen_range(1..9)));
        if d.x.is_zero() && d.y.is_zero() {
            continue;
        }
        return ExactState::new(x, d);
    }
}

#[test]
fn exact_reflection_and_reversal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in exact_tables() {
        let v = p.exact_vertices().unwrap().to_vec();
        let mut checked = 0;
        for _ in 0..20 {
            let s = random_exact_state(&p, &mut rng);
            let h = rat(rng.gen_range(20..60), 7);
            let Ok(tr) = flow_exact(&p, &s, &h, 200) else { continue };
            if tr.termination != Termination::Completed {
                continue;
            }
            let mut d_in = s.direction.clone();
            for c in &tr.collisions {
                let k = c.edge.unwrap();
                let e = v[(k + 1) % v.len()].sub(&v[k]);
                // tangential part kept, normal part flipped, speed kept: all exact
                assert_eq!(c.direction.dot(&e), d_in.dot(&e));
                assert_eq!(c.direction.cross(&e), -d_in.cross(&e));
                assert_eq!(c.direction.dot(&c.direction), d_in.dot(&d_in));
                d_in = c.direction.clone();
            }
            let back = flow_exact(&p, &tr.final_state.reversed(), &h, 200).unwrap();
            assert_eq!(back.final_state.position, s.position);
            assert_eq!(back.final_state.direction, s.direction.neg());
            checked += 1;
        }
        assert!(checked >= 10, "{checked}");
    }
}

#[test]
fn shadowing_is_monotone() {
    let sq = unit_square();
    let reports: Vec<_> = [1e-3, 5e-4]
        .iter()
        .map(|&d| shadowing_experiment(&perturb(&sq, d, 1).unwrap(), 100, 20.0, 1.0, 2, ShadowingBounds::default()))
        .collect();
    for r in &reports {
        assert!(r.exceptional_fraction.windows(2).all(|w| w[0] <= w[1]));
    }
    let (big, small) = (&reports[0], &reports[1]);
    assert!(big.exceptional_fraction.iter().zip(&small.exceptional_fraction).all(|(a, b)| a >= b));
}
