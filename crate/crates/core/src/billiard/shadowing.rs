//! Orbit shadowing between a polygon and a δ-perturbation of it.
//!
//! For sampled `(x, θ)` the billiards in `P` from `(x, θ)` and in `Q` from `(φ(x), θ)` are run
//! side by side; at each grid time the `Q` position is pulled back by `φ⁻¹` and compared.
//! A sample is *close* at time `t` when the pulled-back distance is at most
//! `c4 (c1 t + c2)² δ` and the directions differ by at most `c5 (c1 t + c2) δ`; it is
//! *near the boundary* when both positions lie within `c6 (c1 t + c2)² δ` of their
//! boundaries. Otherwise, or after a vertex hit, the sample is exceptional from then on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{flow, liouville_sample, Termination, UnitTangentState};
use crate::geometry::point::angle_distance;
use crate::geometry::PerturbationMap;
use crate::numerics::least_squares;

/// Constants of the shadowing bounds. They depend on the table and are never given in
/// closed form; the defaults are working values for unit-size tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowingBounds {
    pub c1: f64,
    pub c2: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for ShadowingBounds {
    fn default() -> Self {
        ShadowingBounds { c1: 1.0, c2: 1.0, c4: 1.0, c5: 4.0, c6: 1.0 }
    }
}

/// Absolute slack added to every bound (rounding of the piecewise-affine map).
const ABS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowingReport {
    pub delta: f64,
    pub horizon: f64,
    pub grid_step: f64,
    pub samples: usize,
    pub seed: u64,
    pub bounds: ShadowingBounds,
    pub times: Vec<f64>,
    /// Max pulled-back distance over samples not yet exceptional, per grid time.
    pub envelope: Vec<f64>,
    /// Mean pulled-back distance over samples not yet exceptional.
    pub mean_distance: Vec<f64>,
    /// Fraction of samples exceptional at some time up to each grid time.
    pub exceptional_fraction: Vec<f64>,
    pub vertex_hits: usize,
    /// Least-squares coefficients `(a, b)` of `envelope ≈ a·tδ + b·t²δ`.
    pub fit: (f64, f64),
}

struct SampleSeries {
    dist: Vec<f64>,
    /// First grid index at which the sample is exceptional.
    exceptional_from: Option<usize>,
    vertex_hit: bool,
}

fn run_sample(
    m: &PerturbationMap,
    inv: &PerturbationMap,
    s: &UnitTangentState,
    horizon: f64,
    times: &[f64],
    b: &ShadowingBounds,
) -> SampleSeries {
    let delta = m.delta();
    let max_steps = usize::MAX;
    let tp = flow(m.source(), s, horizon, max_steps);
    let start_q = match m.map_point(s.position) {
        Ok(y) => UnitTangentState::new(y, s.theta),
        Err(_) => return SampleSeries { dist: vec![f64::NAN; times.len()], exceptional_from: Some(0), vertex_hit: false },
    };
    let tq = flow(m.target(), &start_q, horizon, max_steps);
    let vertex_hit = tp.termination == Termination::HitVertex || tq.termination == Termination::HitVertex;
    let mut dist = Vec::with_capacity(times.len());
    let mut exceptional_from = None;
    for (j, &t) in times.iter().enumerate() {
        if t > tp.total_time || t > tq.total_time {
            exceptional_from.get_or_insert(j);
            dist.push(f64::NAN);
            continue;
        }
        let sp = tp.state_at(t);
        let sq = tq.state_at(t);
        let pulled = inv.map_point(sq.position).ok();
        let d = pulled.map_or(f64::INFINITY, |x| x.dist(sp.position));
        dist.push(d);
        let scale = b.c1 * t + b.c2;
        let close = d <= b.c4 * scale * scale * delta + ABS_SLACK && angle_distance(sp.theta, sq.theta) <= b.c5 * scale * delta + ABS_SLACK;
        let wall = b.c6 * scale * scale * delta + ABS_SLACK;
        let near_boundary = m.source().boundary_distance(sp.position) <= wall && m.target().boundary_distance(sq.position) <= wall;
        if !close && !near_boundary {
            exceptional_from.get_or_insert(j);
        }
    }
    SampleSeries { dist, exceptional_from, vertex_hit }
}

/// Runs the shadowing comparison on Liouville samples of the source table.
pub fn shadowing_experiment(
    m: &PerturbationMap,
    samples: usize,
    horizon: f64,
    grid_step: f64,
    seed: u64,
    bounds: ShadowingBounds,
) -> ShadowingReport {
    let steps = (horizon / grid_step).round() as usize;
    let times: Vec<f64> = (0..=steps).map(|j| j as f64 * grid_step).collect();
    let states = liouville_sample(m.source(), samples, seed);
    let inv = m.inverse();
    let series: Vec<SampleSeries> = states.par_iter().map(|s| run_sample(m, &inv, s, horizon, &times, &bounds)).collect();

    let mut envelope = vec![0.0; times.len()];
    let mut mean_distance = vec![0.0; times.len()];
    let mut exceptional_fraction = vec![0.0; times.len()];
    for j in 0..times.len() {
        let mut n_ok = 0usize;
        let mut sum = 0.0;
        let mut n_exc = 0usize;
        for s in &series {
            if s.exceptional_from.is_some_and(|k| k <= j) {
                n_exc += 1;
            } else {
                n_ok += 1;
                sum += s.dist[j];
                envelope[j] = f64::max(envelope[j], s.dist[j]);
            }
        }
        mean_distance[j] = if n_ok > 0 { sum / n_ok as f64 } else { f64::NAN };
        exceptional_fraction[j] = n_exc as f64 / samples.max(1) as f64;
    }
    let delta = m.delta();
    let (rows, ys): (Vec<Vec<f64>>, Vec<f64>) =
        times.iter().zip(&envelope).filter(|(t, _)| **t > 0.0).map(|(t, e)| (vec![t * delta, t * t * delta], *e)).unzip();
    let fit = if delta > 0.0 { least_squares(&rows, &ys).map_or((f64::NAN, f64::NAN), |c| (c[0], c[1])) } else { (0.0, 0.0) };
    ShadowingReport {
        delta,
        horizon,
        grid_step,
        samples,
        seed,
        bounds,
        times,
        envelope,
        mean_distance,
        exceptional_fraction,
        vertex_hits: series.iter().filter(|s| s.vertex_hit).count(),
        fit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{perturb, polygon::unit_square};

    #[test]
    fn zero_delta_shadows_exactly() {
        let m = perturb(&unit_square(), 0.0, 1).unwrap();
        let r = shadowing_experiment(&m, 50, 20.0, 1.0, 3, ShadowingBounds::default());
        assert!(r.envelope.iter().all(|&d| d <= 1e-12), "{:?}", r.envelope);
        assert!(r.exceptional_fraction.iter().all(|&f| f == 0.0));
    }

    #[test]
    fn fraction_is_cumulative() {
        let m = perturb(&unit_square(), 1e-3, 1).unwrap();
        let r = shadowing_experiment(&m, 100, 20.0, 1.0, 4, ShadowingBounds::default());
        assert!(r.exceptional_fraction.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.envelope.iter().all(|&d| d >= 0.0));
    }
}
