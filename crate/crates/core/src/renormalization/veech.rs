//! Eigenvalue exclusion from return-time vectors of shrinking transversals.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use super::RenormError;
use crate::geometry::point::Vec2;
use crate::surface_flow::{transversal_sequence, Mat2, ReturnOptions, Transversal};
use crate::unfolding::TranslationSurface;

/// Euclidean distance from `v` to the nearest integer vector.
pub fn dist_to_integer_lattice(v: &[f64]) -> f64 {
    v.iter().map(|x| (x - x.round()).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Excluded,
    NotExcluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VeechOptions {
    pub stages: usize,
    /// First transversal length, in units of `sqrt(area)`.
    pub initial_length: f64,
    /// Ratio of successive lengths.
    pub ratio: f64,
    pub threshold: f64,
    /// Number of qualifying stages at or above the threshold needed to exclude.
    pub min_stages: usize,
    /// Lower bound on the balance and disjointness constants for a stage to qualify.
    pub c_min: f64,
    /// Cone point the transversals are anchored at.
    pub anchor: usize,
    pub returns: ReturnOptions,
}

impl Default for VeechOptions {
    fn default() -> Self {
        VeechOptions {
            stages: 16,
            initial_length: 0.05,
            ratio: 0.75,
            threshold: 0.1,
            min_stages: 5,
            c_min: 0.01,
            anchor: 0,
            returns: ReturnOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VeechTestReport {
    pub alpha: f64,
    pub direction: Vec2,
    pub lengths: Vec<f64>,
    /// `log(ℓ_0 / ℓ_i)`.
    pub times: Vec<f64>,
    /// `‖α r_i‖_ℤ` per stage.
    pub values: Vec<f64>,
    /// `min λ / max λ` per stage.
    pub balance: Vec<f64>,
    /// `ℓ_i · s_i / area`, where `s_i` is the longest time the transversal can be flowed
    /// while staying embedded and away from cone points.
    pub disjoint: Vec<f64>,
    pub qualifying: Vec<bool>,
    pub return_times: Vec<Vec<f64>>,
    pub exceedances: usize,
    pub verdict: Verdict,
    pub options: VeechOptions,
}

/// Unit vector making angle `θ` with the vertical, turning clockwise: `(sin θ, cos θ)`.
/// This is the direction whose flow is the vertical flow of `r_θ ω`.
pub fn veech_direction(theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(s, c)
}

pub fn veech_test(s: &TranslationSurface, theta: f64, alpha: f64, opts: &VeechOptions) -> Result<VeechTestReport, RenormError> {
    veech_test_dir(s, veech_direction(theta), alpha, opts)
}

/// Runs the stage sequence for the unit-speed flow in direction `flow`.
pub fn veech_test_dir(s: &TranslationSurface, flow: Vec2, alpha: f64, opts: &VeechOptions) -> Result<VeechTestReport, RenormError> {
    if opts.stages == 0 || !(opts.ratio > 0.0 && opts.ratio < 1.0) || !(opts.initial_length > 0.0) {
        return Err(RenormError::InvalidInput("need stages ≥ 1, 0 < ratio < 1, positive initial length".into()));
    }
    let scale = s.area().sqrt();
    let lengths: Vec<f64> = (0..opts.stages).map(|i| opts.initial_length * scale * opts.ratio.powi(i as i32)).collect();
    let base = Transversal::perpendicular(s, flow, opts.anchor, lengths[0])?;
    let seq = transversal_sequence(s, flow, &base, &lengths, &opts.returns)?;
    let mut r = VeechTestReport {
        alpha,
        direction: flow.normalized(),
        lengths: lengths.clone(),
        times: lengths.iter().map(|l| (lengths[0] / l).ln()).collect(),
        values: Vec::new(),
        balance: Vec::new(),
        disjoint: Vec::new(),
        qualifying: Vec::new(),
        return_times: Vec::new(),
        exceedances: 0,
        verdict: Verdict::NotExcluded,
        options: *opts,
    };
    for ((_, fr), &l) in seq.iter().zip(&lengths) {
        let scaled: Vec<f64> = fr.iet.heights.iter().map(|h| alpha * h).collect();
        let value = dist_to_integer_lattice(&scaled);
        let balance = fr.balance();
        let disjoint = l * fr.disjoint_time() / s.area();
        let q = balance >= opts.c_min && disjoint >= opts.c_min;
        if q && value >= opts.threshold {
            r.exceedances += 1;
        }
        r.values.push(value);
        r.balance.push(balance);
        r.disjoint.push(disjoint);
        r.qualifying.push(q);
        r.return_times.push(fr.iet.heights.clone());
    }
    if r.exceedances >= opts.min_stages {
        r.verdict = Verdict::Excluded;
    }
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairedVeechReport {
    pub theta: f64,
    pub direct: VeechTestReport,
    /// Vertical flow of the sheared surface `h_{-tan θ} ω` at frequency `α sec θ`.
    pub sheared: VeechTestReport,
    pub agree: bool,
}

/// Runs the test for direction `θ` and for the vertical direction of the sheared surface.
pub fn eigenvalue_reparametrization_check(
    s: &TranslationSurface,
    theta: f64,
    alpha: f64,
    opts: &VeechOptions,
) -> Result<PairedVeechReport, RenormError> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(RenormError::InvalidInput("need |θ| < π/2".into()));
    }
    let direct = veech_test(s, theta, alpha, opts)?;
    let sheared_surface = s.apply_linear(Mat2::shear(-theta.tan())).map_err(|e| RenormError::InvalidInput(e.to_string()))?;
    let sheared = veech_test_dir(&sheared_surface, Vec2::new(0.0, 1.0), alpha / theta.cos(), opts)?;
    let agree = direct.verdict == sheared.verdict;
    Ok(PairedVeechReport { theta, direct, sheared, agree })
}
