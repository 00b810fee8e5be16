//! Large-deviation survey of cocycle growth over a family of directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ErgodicError;
use crate::geometry::point::Vec2;
use crate::numerics::{derive_seed, least_squares};
use crate::renormalization::{bits_for_time, lift_precision, rauzy_step};
use crate::surface_flow::{first_return, ReturnOptions, Scalar, Transversal};
use crate::unfolding::TranslationSurface;

/// The vector pushed through the cocycle for each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurveyVector {
    /// Coordinates `⟨hol γ_a, e⟩` of the class of `⟨ω, e⟩`, `e = (cos φ, sin φ)`, on the
    /// return cycles `γ_a` of the first-return map.
    Tautological { angle: f64 },
    /// Seeded Gaussian vector in label coordinates, the same for every direction.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyOptions {
    pub directions: usize,
    /// Increasing horizons.
    pub times: Vec<f64>,
    pub eps_prime: f64,
    pub seed: u64,
    pub transversal_length: f64,
    pub bootstrap: usize,
    pub vector: SurveyVector,
    pub max_steps: usize,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            directions: 1000,
            times: vec![5.0, 10.0, 20.0],
            eps_prime: 0.3,
            seed: 0,
            transversal_length: 0.5,
            bootstrap: 1000,
            vector: SurveyVector::Tautological { angle: 0.0 },
            max_steps: 10_000_000,
        }
    }
}

/// One sampled direction: horocycle parameter `s`, flow direction `(−s, 1)/|·|`, and
/// `log(|Bᵀ(T) v| / |v|)` at each horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionGrowth {
    pub s: f64,
    pub log_growth: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthSurvey {
    pub options: SurveyOptions,
    pub records: Vec<DirectionGrowth>,
    /// Directions skipped (connection, non-minimal, step budget).
    pub excluded: usize,
    /// Median of `log_growth / T` at the largest horizon.
    pub lambda_hat: f64,
    pub fractions: Vec<f64>,
    pub counts: Vec<usize>,
    /// Fitted `c` in `fraction ≈ A e^{−cT}`.
    pub rate: f64,
    /// Bootstrap 95% percentile interval for `rate`.
    pub rate_ci: (f64, f64),
}

impl GrowthSurvey {
    /// Counts of records growing slower than `e^{(λ̂ − ε′)T}` at each horizon.
    pub fn counts_for(&self, eps_prime: f64) -> Vec<usize> {
        slow_counts(&self.records, &self.options.times, self.lambda_hat, eps_prime)
    }
}

fn slow_counts(records: &[DirectionGrowth], times: &[f64], lambda: f64, eps: f64) -> Vec<usize> {
    times.iter().enumerate().map(|(k, &t)| records.iter().filter(|r| r.log_growth[k] < (lambda - eps) * t).count()).collect()
}

/// `c` from a least-squares fit of `log((count + ½)/(n + 1))` against `T`.
fn fit_rate(counts: &[usize], n: usize, times: &[f64]) -> f64 {
    let rows: Vec<Vec<f64>> = times.iter().map(|&t| vec![1.0, t]).collect();
    let y: Vec<f64> = counts.iter().map(|&c| ((c as f64 + 0.5) / (n as f64 + 1.0)).ln()).collect();
    least_squares(&rows, &y).map_or(f64::NAN, |b| -b[1])
}

fn direction_growth(s: &TranslationSurface, h: f64, opts: &SurveyOptions, index: u64) -> Result<DirectionGrowth, ErgodicError> {
    let flow = Vec2::new(-h, 1.0).normalized();
    let j = Transversal::perpendicular(s, flow, 0, opts.transversal_length)?;
    let fr = first_return(s, flow, &j, &ReturnOptions::default())?;
    let t_max = opts.times.last().copied().unwrap_or(0.0);
    let iet = lift_precision(&fr.iet, bits_for_time(t_max), derive_seed(opts.seed, index));
    let mut v: Vec<f64> = match opts.vector {
        SurveyVector::Tautological { angle } => {
            let e = Vec2::from_angle(angle);
            let (a, b) = (flow.dot(e), j.direction().dot(e));
            fr.iet.heights.iter().zip(fr.iet.translations()).map(|(h, d)| h * a - d * b).collect()
        }
        SurveyVector::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0bad_5eed);
            (0..iet.d()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
        }
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let v0 = norm(&v);
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(opts.times.len());
    let (mut time, mut steps) = (0.0, 0usize);
    let mut cur = iet;
    for &target in &opts.times {
        while time < target {
            if steps >= opts.max_steps {
                return Err(crate::renormalization::RenormError::Budget(opts.max_steps).into());
            }
            let st = rauzy_step(&cur)?;
            v[st.loser] += v[st.winner];
            time += st.contraction;
            steps += 1;
            cur = st.iet;
            let total = cur.total_length();
            if total.to_f64() < 1e-100 {
                for l in &mut cur.lengths {
                    *l = l.clone() / total.clone();
                }
            }
            let n = norm(&v);
            if n > 1e100 {
                v.iter_mut().for_each(|x| *x /= n);
                log_scale += n.ln();
            }
        }
        out.push(log_scale + (norm(&v) / v0).ln());
    }
    Ok(DirectionGrowth { s: h, log_growth: out })
}

/// Samples horocycle parameters `s ∈ [−1, 1]`, runs the induction cocycle of the flow in
/// direction `(−s, 1)` and tabulates the fraction of directions with slow growth.
pub fn cocycle_growth_survey(s: &TranslationSurface, opts: &SurveyOptions) -> Result<GrowthSurvey, ErgodicError> {
    if opts.directions == 0 || opts.times.is_empty() || opts.times.windows(2).any(|w| w[1] <= w[0]) || !(opts.times[0] > 0.0) {
        return Err(ErgodicError::InvalidInput("need directions > 0 and increasing positive horizons".into()));
    }
    let results: Vec<Option<DirectionGrowth>> = (0..opts.directions)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, k as u64));
            let h = rng.gen_range(-1.0..=1.0);
            direction_growth(s, h, opts, k as u64).ok()
        })
        .collect();
    let records: Vec<DirectionGrowth> = results.into_iter().flatten().collect();
    let excluded = opts.directions - records.len();
    let n = records.len();
    if n == 0 {
        return Err(ErgodicError::InvalidInput("every sampled direction was excluded".into()));
    }
    let t_max = *opts.times.last().expect("nonempty");
    let mut rates: Vec<f64> = records.iter().map(|r| r.log_growth[r.log_growth.len() - 1] / t_max).collect();
    rates.sort_by(f64::total_cmp);
    let lambda_hat = if n % 2 == 1 { rates[n / 2] } else { (rates[n / 2 - 1] + rates[n / 2]) / 2.0 };
    let counts = slow_counts(&records, &opts.times, lambda_hat, opts.eps_prime);
    let fractions = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let rate = fit_rate(&counts, n, &opts.times);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xb007);
    let slow: Vec<Vec<bool>> = records
        .iter()
        .map(|r| opts.times.iter().enumerate().map(|(k, &t)| r.log_growth[k] < (lambda_hat - opts.eps_prime) * t).collect())
        .collect();
    let mut boot: Vec<f64> = (0..opts.bootstrap)
        .map(|_| {
            let mut c = vec![0usize; opts.times.len()];
            for _ in 0..n {
                for (acc, &f) in c.iter_mut().zip(&slow[rng.gen_range(0..n)]) {
                    *acc += usize::from(f);
                }
            }
            fit_rate(&c, n, &opts.times)
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let q = |p: f64| if boot.is_empty() { f64::NAN } else { boot[((p * (boot.len() - 1) as f64).round() as usize).min(boot.len() - 1)] };
    Ok(GrowthSurvey { options: opts.clone(), records, excluded, lambda_hat, fractions, counts, rate, rate_ci: (q(0.025), q(0.975)) })
}
