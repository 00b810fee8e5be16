//! Birkhoff averages, product equidistribution and twisted averages.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::functions::TestFunction;
use super::orbit::{overlap, product_integral, Orbit};
use super::ErgodicError;
use crate::billiard::sample::sample_with;
use crate::billiard::UnitTangentState;
use crate::geometry::point::Vec2;
use crate::geometry::Polygon;
use crate::numerics::{derive_seed, mean, std_dev};
use crate::unfolding::TranslationSurface;

/// Default absolute quadrature tolerance per unit time.
pub const QUAD_TOL: f64 = 1e-10;
/// Collision or crossing budget per unit of flow time.
const STEPS_PER_TIME: f64 = 64.0;

pub(crate) fn step_budget(t: f64, diam: f64) -> usize {
    ((t.max(1.0) * STEPS_PER_TIME / diam.max(1e-3)).ceil() as usize).max(1000)
}

/// A time average; `partial` when the orbit stopped before the horizon, in which case the
/// average is over the time actually covered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BirkhoffAverage {
    pub value: f64,
    pub time: f64,
    pub partial: bool,
}

fn average_over(orbit: &Orbit, burn_in: f64, t: f64, f: &TestFunction) -> BirkhoffAverage {
    let w = orbit.window(burn_in, burn_in + t);
    let value = if w.time > 0.0 { w.integral(f, QUAD_TOL) / w.time } else { f64::NAN };
    BirkhoffAverage { value, time: w.time, partial: !orbit.complete }
}

/// `(1/T) ∫_{b}^{b+T} f(F^t s) dt` for the billiard flow.
pub fn birkhoff_average(
    p: &Polygon,
    s: &UnitTangentState,
    f: &TestFunction,
    t: f64,
    burn_in: f64,
) -> Result<BirkhoffAverage, ErgodicError> {
    check_horizon(t, burn_in)?;
    let orbit = Orbit::billiard(p, s, burn_in + t, step_budget(burn_in + t, p.diameter()));
    Ok(average_over(&orbit, burn_in, t, f))
}

/// The same for the linear flow in direction `theta` on a surface, from `(cell, x)`.
pub fn surface_birkhoff_average(
    s: &TranslationSurface,
    theta: f64,
    cell: usize,
    x: Vec2,
    f: &TestFunction,
    t: f64,
    burn_in: f64,
) -> Result<BirkhoffAverage, ErgodicError> {
    check_horizon(t, burn_in)?;
    let orbit = Orbit::surface(s, Vec2::from_angle(theta), cell, x, burn_in + t, usize::MAX)?;
    Ok(average_over(&orbit, burn_in, t, f))
}

fn check_horizon(t: f64, burn_in: f64) -> Result<(), ErgodicError> {
    if !(t > 0.0) || !(burn_in >= 0.0) || !(t + burn_in).is_finite() {
        return Err(ErgodicError::InvalidInput(format!("need T > 0 and burn-in ≥ 0, got T = {t}, burn-in = {burn_in}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistributionReport {
    pub f: TestFunction,
    pub g: TestFunction,
    pub horizon: f64,
    pub samples: usize,
    /// Pairs dropped because an orbit ran into a vertex.
    pub excluded: usize,
    pub frequencies: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    /// `∫f · ∫g` for the normalized Liouville measure.
    pub target: f64,
    /// `|mean − target| / target` (absolute when the target is 0).
    pub deviation: f64,
    pub seed: u64,
}

/// Joint time average `(1/T) ∫ f(F^t(p,θ)) g(F^t(p′,ψ)) dt` for `samples` independent
/// Liouville-random pairs. Indicator pairs are integrated exactly.
pub fn product_equidistribution(
    p: &Polygon,
    f: &TestFunction,
    g: &TestFunction,
    samples: usize,
    t: f64,
    seed: u64,
) -> Result<EquidistributionReport, ErgodicError> {
    check_horizon(t, 0.0)?;
    let budget = step_budget(t, p.diameter());
    let results: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
            let pts = sample_with(p, 2, &mut rng);
            let a = Orbit::billiard(p, &pts[0], t, budget);
            let b = Orbit::billiard(p, &pts[1], t, budget);
            if !a.complete || !b.complete {
                return None;
            }
            let joint = if f.is_indicator() && g.is_indicator() {
                overlap(&a.sojourn_intervals(f), &b.sojourn_intervals(g))
            } else {
                product_integral(&a, &b, &|x, th, y, ps| f.eval(x, th) * g.eval(y, ps), QUAD_TOL)
            };
            Some(joint / t)
        })
        .collect();
    let frequencies: Vec<f64> = results.iter().flatten().copied().collect();
    let cells = vec![p.vertices().to_vec()];
    let target = f.liouville_mean(&cells) * g.liouville_mean(&cells);
    let m = mean(&frequencies);
    let sd = std_dev(&frequencies);
    let deviation = if target != 0.0 { (m - target).abs() / target.abs() } else { (m - target).abs() };
    Ok(EquidistributionReport {
        f: f.clone(),
        g: g.clone(),
        horizon: t,
        samples,
        excluded: samples - frequencies.len(),
        std_error: sd / (frequencies.len().max(1) as f64).sqrt(),
        frequencies,
        mean: m,
        std_dev: sd,
        target,
        deviation,
        seed,
    })
}

/// `|(1/T) ∫₀ᵀ e^{−2πiαt} f(F^t x) dt|` for the linear flow in direction `theta`; with
/// `mean_zero` the invariant-measure mean of `f` is subtracted first.
pub fn twisted_birkhoff(
    s: &TranslationSurface,
    theta: f64,
    alpha: f64,
    f: &TestFunction,
    cell: usize,
    x: Vec2,
    t: f64,
    mean_zero: bool,
) -> Result<f64, ErgodicError> {
    twisted_birkhoff_dir(s, Vec2::from_angle(theta), alpha, f, cell, x, t, mean_zero)
}

/// As [`twisted_birkhoff`] with an explicit flow direction.
#[allow(clippy::too_many_arguments)]
pub fn twisted_birkhoff_dir(
    s: &TranslationSurface,
    direction: Vec2,
    alpha: f64,
    f: &TestFunction,
    cell: usize,
    x: Vec2,
    t: f64,
    mean_zero: bool,
) -> Result<f64, ErgodicError> {
    check_horizon(t, 0.0)?;
    let orbit = Orbit::surface(s, direction, cell, x, t, usize::MAX)?;
    if !orbit.complete {
        return Err(ErgodicError::Singular { time: orbit.time });
    }
    let (mut re, mut im) = orbit.twisted_integral(f, alpha, QUAD_TOL);
    if mean_zero {
        let m = f.mean_at_direction(s.cells(), direction.angle());
        let w = std::f64::consts::TAU * alpha;
        // subtract m ∫₀ᵀ e^{−iwt} dt
        let (cr, ci) = if (w * t).abs() < 1e-12 { (t, 0.0) } else { ((w * t).sin() / w, ((w * t).cos() - 1.0) / w) };
        re -= m * cr;
        im -= m * ci;
    }
    Ok(re.hypot(im) / t)
}
