use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::UnitTangentState;
use crate::geometry::Polygon;

/// Draws `n` i.i.d. phase points from the normalized Liouville measure:
/// uniform position (rejection from the bounding box) times uniform angle.
pub fn liouville_sample(p: &Polygon, n: usize, seed: u64) -> Vec<UnitTangentState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(p, n, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(p: &Polygon, n: usize, rng: &mut R) -> Vec<UnitTangentState> {
    let (lo, hi) = p.bounding_box();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = crate::geometry::Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if !p.contains(x, 0.0) || p.boundary_distance(x) == 0.0 {
            continue;
        }
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        out.push(UnitTangentState::new(x, theta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::unit_square;

    #[test]
    fn reproducible() {
        let a = liouville_sample(&unit_square(), 1, 99);
        let b = liouville_sample(&unit_square(), 1, 99);
        assert_eq!(a, b);
    }

    #[test]
    fn mean_position_centered() {
        let s = liouville_sample(&unit_square(), 100_000, 5);
        let n = s.len() as f64;
        let mx = s.iter().map(|x| x.position.x).sum::<f64>() / n;
        let my = s.iter().map(|x| x.position.y).sum::<f64>() / n;
        // CLT: sd of the mean is sqrt(1/12 / 1e5) ≈ 9.1e-4
        assert!((mx - 0.5).abs() < 0.01 && (my - 0.5).abs() < 0.01);
    }

    #[test]
    fn angle_histogram_uniform() {
        let s = liouville_sample(&unit_square(), 100_000, 6);
        let mut bins = [0usize; 8];
        for x in &s {
            bins[((x.theta / std::f64::consts::TAU * 8.0) as usize).min(7)] += 1;
        }
        let n = s.len() as f64;
        let (p, q) = (1.0 / 8.0, 7.0 / 8.0);
        let sigma = (n * p * q).sqrt();
        for b in bins {
            assert!((b as f64 - n * p).abs() < 3.0 * sigma, "{bins:?}");
        }
    }
}
