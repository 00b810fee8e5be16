//! Weak-mixing statistics: Cesàro correlations, the finite-sample certificate and the
//! Lipschitz transfer check.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::averages::{step_budget, QUAD_TOL};
use super::functions::{signed_area, tent_grid, TestFunction};
use super::orbit::{product_integral, Orbit};
use super::ErgodicError;
use crate::billiard::sample::sample_with;
use crate::billiard::UnitTangentState;
use crate::geometry::point::{angle_distance, Vec2};
use crate::geometry::{reflection_group_info, RationalityBounds};
use crate::geometry::{PerturbationMap, Polygon};
use crate::numerics::{compensated_sum, derive_seed, mean, std_dev};
use crate::unfolding::direction_orbit;
use crate::unfolding::TranslationSurface;

/// Uniform point of a surface: cell chosen by area, position by rejection.
pub fn sample_surface_point<R: Rng>(s: &TranslationSurface, rng: &mut R) -> (usize, Vec2) {
    let areas: Vec<f64> = s.cells().iter().map(|c| signed_area(c)).collect();
    let total: f64 = areas.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    let mut cell = areas.len() - 1;
    for (i, a) in areas.iter().enumerate() {
        if u < *a {
            cell = i;
            break;
        }
        u -= a;
    }
    let v = s.cell(cell);
    let lo = v.iter().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |m, p| Vec2::new(m.x.min(p.x), m.y.min(p.y)));
    let hi = v.iter().fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| Vec2::new(m.x.max(p.x), m.y.max(p.y)));
    loop {
        let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        let on_edge = (0..v.len()).any(|i| crate::geometry::polygon::point_segment_distance(p, v[i], v[(i + 1) % v.len()]) == 0.0);
        if !on_edge && s.cell_contains(cell, p, 0.0) {
            return (cell, p);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingOptions {
    pub samples: usize,
    /// Midpoint grid size on `[0, T]`.
    pub time_points: usize,
    pub seed: u64,
}

impl Default for MixingOptions {
    fn default() -> Self {
        MixingOptions { samples: 2000, time_points: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingStatistic {
    /// `(1/T) ∫₀ᵀ |corr_t(f, g)| dt` on the time grid.
    pub value: f64,
    /// Mean Monte Carlo standard error of the sampled correlations.
    pub std_error: f64,
    pub times: Vec<f64>,
    pub correlations: Vec<f64>,
    /// Samples lost to cone points.
    pub dropped: usize,
    pub options: MixingOptions,
}

/// Cesàro mean of `|∫ f∘F^t · g − ∫f ∫g|` for the linear flow in direction `theta`,
/// correlations estimated by space sampling at each grid time.
pub fn weak_mixing_statistic(
    s: &TranslationSurface,
    theta: f64,
    f: &TestFunction,
    g: &TestFunction,
    t: f64,
    opts: &MixingOptions,
) -> Result<MixingStatistic, ErgodicError> {
    if !(t > 0.0) || opts.samples < 2 || opts.time_points == 0 {
        return Err(ErgodicError::InvalidInput("need T > 0, at least 2 samples and 1 time point".into()));
    }
    let d = Vec2::from_angle(theta);
    let n = opts.time_points;
    let times: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) * t / n as f64).collect();
    let (mf, mg) = (f.mean_at_direction(s.cells(), theta), g.mean_at_direction(s.cells(), theta));
    let rows: Vec<Option<Vec<f64>>> = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, k as u64));
            let (cell, x) = sample_surface_point(s, &mut rng);
            let orbit = Orbit::surface(s, d, cell, x, t, usize::MAX).ok()?;
            if !orbit.complete {
                return None;
            }
            let g0 = g.eval(x, theta);
            times.iter().map(|&u| orbit.state_at(u).map(|(y, th)| f.eval(y, th) * g0)).collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().flatten().collect();
    let dropped = opts.samples - rows.len();
    let m = rows.len();
    let mut correlations = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    for k in 0..n {
        let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        correlations.push(mean(&col) - mf * mg);
        errors.push(std_dev(&col) / (m.max(1) as f64).sqrt());
    }
    let value = if m == 0 { f64::NAN } else { compensated_sum(correlations.iter().map(|c| c.abs())) / n as f64 };
    Ok(MixingStatistic { value, std_error: mean(&errors), times, correlations, dropped, options: *opts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateOptions {
    /// Grid size `k` of the tent family (`k³` tents per factor).
    pub grid: usize,
    /// Draw the second copy's direction from the billiard orbit of the first one's, so both
    /// copies live on the same invariant surface. Needs a rational polygon.
    pub restrict_directions: bool,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { grid: 3, restrict_directions: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WMCertificate {
    pub polygon: Vec<Vec2>,
    pub epsilon: f64,
    pub horizon: f64,
    pub grid: usize,
    /// Index pairs into the tent grid; each test function is `t_a(x,θ) t_b(y,ψ) / L`.
    pub functions: Vec<(usize, usize)>,
    /// Monte Carlo value of the functional per sampled function.
    pub values: Vec<f64>,
    pub value: f64,
    pub pass: bool,
    pub samples: usize,
    /// Sample pairs dropped because an orbit hit a vertex.
    pub excluded: usize,
    pub seed: u64,
}

/// Largest, over a seeded sample of `n_funcs` tent products of Lipschitz constant 1, of the
/// Monte Carlo estimate of `∫ |(1/T)∫₀ᵀ f(F^t × F^t) dt − ∫f|`. A finite-sample surrogate for
/// membership in the weak-mixing open set; `pass` iff the value is below `eps`.
pub fn wm_certificate(
    p: &Polygon,
    eps: f64,
    t: f64,
    n_funcs: usize,
    samples: usize,
    seed: u64,
    opts: &CertificateOptions,
) -> Result<WMCertificate, ErgodicError> {
    if !(t > 0.0) || n_funcs == 0 || samples == 0 {
        return Err(ErgodicError::InvalidInput("need T > 0, n_funcs > 0 and samples > 0".into()));
    }
    let cells = vec![p.vertices().to_vec()];
    let family = tent_grid(&cells, opts.grid);
    let means: Vec<f64> = family.iter().map(|f| f.liouville_mean(&cells)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let functions: Vec<(usize, usize)> = (0..n_funcs).map(|_| (rng.gen_range(0..family.len()), rng.gen_range(0..family.len()))).collect();
    let scale: Vec<f64> = functions
        .iter()
        .map(|&(a, b)| 1.0 / family[a].lipschitz().unwrap_or(1.0).max(family[b].lipschitz().unwrap_or(1.0)).max(1e-300))
        .collect();
    let order = if opts.restrict_directions {
        let info = reflection_group_info(p, RationalityBounds::default());
        Some(info.rotation_order.ok_or_else(|| ErgodicError::InvalidInput("restricted directions need a rational polygon".into()))?)
    } else {
        None
    };
    let base = (p.vertices()[1] - p.vertices()[0]).angle();
    let budget = step_budget(t, p.diameter());
    let rows: Vec<Option<Vec<f64>>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed ^ 0x5eed, k as u64));
            let mut pts = sample_with(p, 2, &mut rng);
            // On a single invariant surface the reference measure averages over the direction orbit.
            let local: Option<Vec<f64>> = order.map(|m| {
                let orbit = direction_orbit(pts[0].theta, m, base);
                pts[1] = UnitTangentState::new(pts[1].position, orbit[rng.gen_range(0..orbit.len())]);
                family.iter().map(|f| mean(&orbit.iter().map(|&d| f.mean_at_direction(&cells, d)).collect::<Vec<_>>())).collect()
            });
            let means = local.as_ref().unwrap_or(&means);
            let a = Orbit::billiard(p, &pts[0], t, budget);
            let b = Orbit::billiard(p, &pts[1], t, budget);
            if !a.complete || !b.complete {
                return None;
            }
            Some(
                functions
                    .iter()
                    .zip(&scale)
                    .map(|(&(i, j), &c)| {
                        let (fi, fj) = (&family[i], &family[j]);
                        let avg = product_integral(&a, &b, &|x, th, y, ps| fi.eval(x, th) * fj.eval(y, ps), QUAD_TOL) / t;
                        c * (avg - means[i] * means[j]).abs()
                    })
                    .collect(),
            )
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().flatten().collect();
    let values: Vec<f64> = (0..functions.len()).map(|k| mean(&rows.iter().map(|r| r[k]).collect::<Vec<_>>())).collect();
    let value = values.iter().copied().fold(0.0, f64::max);
    Ok(WMCertificate {
        polygon: p.vertices().to_vec(),
        epsilon: eps,
        horizon: t,
        grid: opts.grid,
        functions,
        values,
        value,
        pass: value < eps,
        samples,
        excluded: samples - rows.len(),
        seed,
    })
}

/// Slack allowed over the bound 1 in [`lipschitz_transfer_check`].
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzTransferReport {
    pub declared: Option<f64>,
    /// Largest sampled difference quotient of `f ∘ φ` on the source.
    pub empirical: f64,
    /// Largest sampled difference quotient of `f` itself on the same pairs.
    pub reference: f64,
    pub pairs: usize,
    pub pass: bool,
    pub seed: u64,
}

/// Image of a phase point under the piecewise-affine map: position by the triangle map,
/// direction by its linear part.
fn map_phase(m: &PerturbationMap, x: Vec2, theta: f64) -> Option<(Vec2, f64)> {
    let (tri, _) = m.triangulation().locate(m.source().vertices(), x, 1e-12)?;
    let y = m.map_point_in_triangle(tri, x);
    let d = m.map_point_in_triangle(tri, x + Vec2::from_angle(theta)) - y;
    Some((y, d.angle()))
}

/// Empirical Lipschitz constant of `f ∘ φ` over `pairs` nearby pairs of phase points of the
/// source polygon, in the metric `|x − y| + dist_S¹(θ, ψ)`.
pub fn lipschitz_transfer_check(m: &PerturbationMap, f: &TestFunction, pairs: usize, seed: u64) -> LipschitzTransferReport {
    let p = m.source();
    let reach = 0.05 * p.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut empirical, mut reference) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < pairs {
        let a = sample_with(p, 1, &mut rng)[0];
        let y = a.position + Vec2::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach));
        let psi = a.theta + rng.gen_range(-0.05..0.05) * TAU;
        if !p.contains(y, 0.0) {
            continue;
        }
        let d = a.position.dist(y) + angle_distance(a.theta, psi);
        if d == 0.0 {
            continue;
        }
        let (Some((fa, ta)), Some((fb, tb))) = (map_phase(m, a.position, a.theta), map_phase(m, y, psi)) else {
            continue;
        };
        empirical = empirical.max((f.eval(fa, ta) - f.eval(fb, tb)).abs() / d);
        reference = reference.max((f.eval(a.position, a.theta) - f.eval(y, psi)).abs() / d);
        done += 1;
    }
    LipschitzTransferReport { declared: f.lipschitz(), empirical, reference, pairs, pass: empirical <= 1.0 + LIPSCHITZ_SLACK, seed }
}
