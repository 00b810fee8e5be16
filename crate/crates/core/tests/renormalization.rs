use billiard_lab::geometry::point::Vec2;
use billiard_lab::geometry::polygon::triangle_from_angles;
use billiard_lab::geometry::{reflection_group_info, RationalityBounds};
use billiard_lab::renormalization::{
    bits_for_time, dist_to_integer_lattice, eigenvalue_reparametrization_check, kz_product, kz_steps, lift_precision, lyapunov_spectrum,
    norm_growth_rate, rauzy_step, veech_test_dir, zorich_accelerate, IntMatrix, RenormError, VeechOptions, Verdict,
};
use billiard_lab::surface_flow::{first_return, transversal_sequence, Iet, ReturnOptions, Transversal};
use billiard_lab::unfolding::{parallelogram_torus, regular_octagon_surface, square_torus, unfold, TranslationSurface};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const G: f64 = 0.618_033_988_749_894_8;

fn golden_rotation() -> Iet {
    Iet::new(vec![G, 1.0 - G], vec![0, 1], vec![1, 0], vec![1.0, 1.0]).unwrap()
}

/// Golden rotation with lengths exact to `bits` binary digits.
fn golden_rotation_exact(bits: u64) -> Iet<BigRational> {
    let one = BigInt::from(1);
    let scale = &one << bits;
    let root5 = (BigInt::from(5) * &scale * &scale).sqrt();
    let g = BigRational::new(root5 - &scale, &scale << 1);
    let h = BigRational::from_integer(one);
    Iet::new(vec![g.clone(), BigRational::from_integer(1.into()) - g], vec![0, 1], vec![1, 0], vec![h.clone(), h]).unwrap()
}

fn fib_power(n: usize) -> IntMatrix {
    let f = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
    (0..n).fold(IntMatrix::identity(2), |acc, _| acc.mul(&f))
}

#[test]
fn golden_product_is_fibonacci_power() {
    let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    for n in 1..=30 {
        let (p, _) = kz_steps(&golden_rotation(), n).unwrap();
        let expect = if n % 2 == 1 { fib_power(n).mul(&swap) } else { fib_power(n) };
        assert_eq!(p.matrix, expect, "n = {n}");
    }
}

#[test]
fn golden_zorich_steps_are_elementary() {
    let mut i = golden_rotation();
    for _ in 0..25 {
        let (next, p) = zorich_accelerate(&i, 100).unwrap();
        assert_eq!(p.steps, 1);
        i = next;
    }
}

#[test]
fn zorich_groups_partial_quotient() {
    for k in 2..7 {
        let a = 1.0 / (k as f64 + G);
        let i = Iet::new(vec![1.0, a], vec![0, 1], vec![1, 0], vec![1.0, 1.0]).unwrap();
        let (_, p) = zorich_accelerate(&i, 100).unwrap();
        assert_eq!(p.steps, k, "k = {k}");
    }
}

#[test]
fn rational_rotation_hits_connection() {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut i = Iet::new(vec![r(5, 13), r(8, 13)], vec![0, 1], vec![1, 0], vec![r(1, 1), r(1, 1)]).unwrap();
    let mut steps = 0;
    let err = loop {
        match rauzy_step(&i) {
            Ok(s) => i = s.iet,
            Err(e) => break e,
        }
        steps += 1;
        assert!(steps < 100);
    };
    assert_eq!(err, RenormError::Connection);
}

#[test]
fn heights_dual_to_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let lengths: Vec<f64> = (0..4).map(|_| rng.gen_range(0.1..1.0)).collect();
    let i = Iet::new(lengths, vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![1.0, 1.3, 0.7, 2.0]).unwrap();
    let (p, end) = kz_steps(&i, 30).unwrap();
    let b = p.matrix.to_f64();
    for r in 0..4 {
        let lam: f64 = (0..4).map(|c| b[r][c] * end.lengths[c]).sum();
        assert!((lam - i.lengths[r]).abs() < 1e-9 * i.total_length().max(1.0) * 1e3);
        let h: f64 = (0..4).map(|c| b[c][r] * i.heights[c]).sum();
        assert!((h - end.heights[r]).abs() < 1e-9 * h);
    }
}

#[test]
fn torus_top_exponent_is_one() {
    let est = lyapunov_spectrum(&golden_rotation_exact(bits_for_time(50.0)), 50.0, 2, 1).unwrap();
    assert!((est.exponents[0] - 1.0).abs() < 0.05, "{:?}", est.exponents);
    assert!((est.exponents[1] + 1.0).abs() < 0.05, "{:?}", est.exponents);
    assert!(est.symmetry_defect.unwrap() < 0.05);
}

#[test]
fn norm_growth_bounded_for_torus() {
    let i = lift_precision(&Iet::rotation(2f64.sqrt() - 1.0).unwrap(), bits_for_time(50.0), 3);
    for t in [10.0, 20.0, 30.0, 50.0] {
        let rate = norm_growth_rate(&i, t).unwrap();
        assert!(rate <= 1.1, "T = {t}: {rate}");
        if t <= 30.0 {
            assert!((rate - 1.0).abs() <= 0.1, "T = {t}: {rate}");
        }
    }
}

fn surface_iet(s: &TranslationSurface, theta: f64, len: f64) -> Iet {
    let flow = Vec2::from_angle(theta);
    let j = Transversal::perpendicular(s, flow, 0, len).unwrap();
    first_return(s, flow, &j, &ReturnOptions::default()).unwrap().iet
}

#[test]
fn cocycle_is_symplectic_and_unimodular() {
    let tri = triangle_from_angles(std::f64::consts::PI / 8.0, 3.0 * std::f64::consts::PI / 8.0).unwrap();
    let unfolded = unfold(&tri, &reflection_group_info(&tri, RationalityBounds::default())).unwrap();
    for (s, theta) in [(square_torus(), 1.234), (regular_octagon_surface(), 0.777), (unfolded, 0.4321)] {
        let i = lift_precision(&surface_iet(&s, theta, 0.3), 4000, 5);
        let (p, _) = kz_steps(&i, 1000).unwrap();
        let c = p.checks();
        assert!(c.unimodular && c.symplectic, "{c:?}");
        assert_eq!(c.absolute_rank, 2 * s.genus() as usize);
    }
}

#[test]
fn octagon_second_exponent_strictly_between() {
    let i = lift_precision(&surface_iet(&regular_octagon_surface(), 0.777, 0.3), bits_for_time(200.0), 6);
    let est = lyapunov_spectrum(&i, 200.0, i.d(), 4).unwrap();
    assert!((est.exponents[0] - 1.0).abs() < 0.05, "{:?}", est.exponents);
    assert!(est.exponents[1] > 0.0 && est.exponents[1] < 1.0, "{:?}", est.exponents);
    assert!(est.symmetry_defect.unwrap() < 0.05, "{:?}", est.exponents);
}

#[test]
fn kz_product_time_zero_is_identity() {
    let (p, _) = kz_product(&golden_rotation(), 0.0, 10).unwrap();
    assert_eq!(p.matrix, IntMatrix::identity(2));
    assert_eq!(p.matrix.determinant(), BigInt::from(1));
}

#[test]
fn lattice_distance_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let d = rng.gen_range(1..5);
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut best = f64::INFINITY;
        for code in 0..3usize.pow(d as u32) {
            let mut c = code;
            let dist: f64 = v
                .iter()
                .map(|x| {
                    let z = x.floor() + (c % 3) as f64 - 0.0;
                    c /= 3;
                    (x - z).powi(2).min((x - z + 1.0).powi(2))
                })
                .sum::<f64>();
            best = best.min(dist.sqrt());
        }
        assert!((dist_to_integer_lattice(&v) - best).abs() < 1e-12);
        let shifted: Vec<f64> = v.iter().map(|x| x + 5.0).collect();
        assert!((dist_to_integer_lattice(&shifted) - dist_to_integer_lattice(&v)).abs() < 1e-12);
        assert!(dist_to_integer_lattice(&v) <= (d as f64).sqrt() / 2.0 + 1e-12);
    }
}

fn slope(rho: f64) -> Vec2 {
    Vec2::new(rho, 1.0).normalized()
}

#[test]
fn veech_trivial_frequency() {
    let t = square_torus();
    let r = veech_test_dir(&t, slope(G), 0.0, &VeechOptions::default()).unwrap();
    assert!(r.values.iter().all(|&v| v == 0.0));
    assert_eq!(r.verdict, Verdict::NotExcluded);
}

#[test]
fn veech_torus_eigenfrequency_and_generic() {
    let t = square_torus();
    let d = slope(G);
    let eigen = 2.0 * d.x - d.y;
    let r = veech_test_dir(&t, d, eigen, &VeechOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::NotExcluded, "{:?}", r.values);
    assert!(r.values.last().unwrap() < &0.05);
    let r = veech_test_dir(&t, d, 2f64.sqrt() * 0.37, &VeechOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Excluded, "{:?}", r.values);
}

#[test]
fn reparametrization_at_zero_is_identical() {
    let t = square_torus();
    let p = eigenvalue_reparametrization_check(&t, 0.0, 0.731, &VeechOptions::default());
    // θ = 0 is the vertical direction of the square torus: periodic
    assert!(p.is_err());
    let skew = parallelogram_torus(Vec2::new(1.0, 0.0), Vec2::new(G, 1.0));
    let p = eigenvalue_reparametrization_check(&skew, 0.0, 0.731, &VeechOptions::default()).unwrap();
    assert_eq!(p.direct.values, p.sheared.values);
    assert!(p.agree);
}

#[test]
fn reparametrization_torus_pi_over_six() {
    let t = square_torus();
    let theta = std::f64::consts::PI / 6.0;
    let d = billiard_lab::renormalization::veech_direction(theta);
    let p = eigenvalue_reparametrization_check(&t, theta, 0.5f64.sqrt() * 1.1, &VeechOptions::default()).unwrap();
    assert_eq!(p.direct.verdict, Verdict::Excluded);
    assert!(p.agree);
    let eigen = d.x + 2.0 * d.y;
    let p = eigenvalue_reparametrization_check(&t, theta, eigen, &VeechOptions::default()).unwrap();
    assert_eq!(p.direct.verdict, Verdict::NotExcluded);
    assert!(p.agree);
}

#[test]
fn golden_return_times_follow_fibonacci() {
    let s = square_torus();
    let flow = slope(G);
    let speed = Vec2::new(G, 1.0).norm();
    let base = Transversal::new(&s, 0, Vec2::new(1.0, 0.0), 0.9).unwrap();
    let lengths: Vec<f64> = (2..14).map(|n| G.powi(n) * 1.01).collect();
    let stages = transversal_sequence(&s, flow, &base, &lengths, &ReturnOptions::default()).unwrap();
    let fib: Vec<u64> = std::iter::successors(Some((1u64, 2u64)), |&(a, b)| Some((b, a + b))).take(40).map(|p| p.0).collect();
    let mut minima = Vec::new();
    for (_, st) in &stages {
        let mut ks: Vec<u64> = st
            .iet
            .heights
            .iter()
            .map(|h| {
                let k = h / speed;
                assert!((k - k.round()).abs() < 1e-6, "non-integer winding {k}");
                k.round() as u64
            })
            .collect();
        ks.sort_unstable();
        ks.dedup();
        assert!(ks.len() <= 3 && ks.iter().all(|k| fib.contains(k)), "{ks:?}");
        minima.push(ks[0]);
    }
    for w in minima.windows(3) {
        assert_eq!(w[2], w[1] + w[0], "{minima:?}");
    }
}
