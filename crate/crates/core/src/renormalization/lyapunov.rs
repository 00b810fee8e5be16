//! Lyapunov exponents of the induction cocycle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cocycle::kz_product;
use super::rauzy::rauzy_step;
use super::RenormError;
use crate::surface_flow::{Iet, Scalar};

#[derive(Debug, Clone, Serialize)]
pub struct LyapunovEstimate {
    /// Estimates per unit of induction time, in Gram–Schmidt order (decreasing once converged).
    pub exponents: Vec<f64>,
    /// Estimates over the first half of the window.
    pub half_window: Vec<f64>,
    pub time: f64,
    pub steps: usize,
    /// Successive window estimates differ by more than 10%.
    pub insufficient_horizon: bool,
    /// `max |λ_i + λ_{k+1-i}|` when all `d` exponents are requested.
    pub symmetry_defect: Option<f64>,
}

/// Orthonormalizes `vs` in place (modified Gram–Schmidt) and returns the log of each pivot.
fn gram_schmidt(vs: &mut [Vec<f64>]) -> Vec<f64> {
    let mut logs = Vec::with_capacity(vs.len());
    for i in 0..vs.len() {
        for j in 0..i {
            let p: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
            let vj = vs[j].clone();
            for (a, b) in vs[i].iter_mut().zip(&vj) {
                *a -= p * b;
            }
        }
        let n = vs[i].iter().map(|x| x * x).sum::<f64>().sqrt();
        for a in &mut vs[i] {
            *a /= n;
        }
        logs.push(n.ln());
    }
    logs
}

/// Top `k` exponents of `h ↦ Θᵀ h` along the induction orbit of `i`, up to time `t`.
pub fn lyapunov_spectrum<S: Scalar>(i: &Iet<S>, t: f64, k: usize, seed: u64) -> Result<LyapunovEstimate, RenormError> {
    let d = i.d();
    if k == 0 || k > d {
        return Err(RenormError::InvalidInput(format!("need 1 ≤ k ≤ {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vs: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    gram_schmidt(&mut vs);
    let mut sums = vec![0.0; k];
    let mut half: Option<Vec<f64>> = None;
    let mut time = 0.0;
    let mut steps = 0usize;
    let mut cur = i.clone();
    while time < t {
        let s = rauzy_step(&cur)?;
        for v in &mut vs {
            v[s.loser] += v[s.winner];
        }
        time += s.contraction;
        steps += 1;
        cur = s.iet;
        let total = cur.total_length();
        if total.to_f64() < 1e-100 {
            for l in &mut cur.lengths {
                *l = l.clone() / total.clone();
            }
        }
        if steps.is_multiple_of(8) || time >= t {
            for (acc, l) in sums.iter_mut().zip(gram_schmidt(&mut vs)) {
                *acc += l;
            }
        }
        if half.is_none() && time >= t / 2.0 {
            for (acc, l) in sums.iter_mut().zip(gram_schmidt(&mut vs)) {
                *acc += l;
            }
            half = Some(sums.iter().map(|x| x / time).collect());
        }
        if steps > 100_000_000 {
            return Err(RenormError::Budget(steps));
        }
    }
    let exponents: Vec<f64> = sums.iter().map(|x| x / time.max(f64::MIN_POSITIVE)).collect();
    let half_window = half.unwrap_or_else(|| exponents.clone());
    let scale = exponents.first().map_or(1.0, |x| x.abs()).max(1e-3);
    let insufficient_horizon = exponents.iter().zip(&half_window).any(|(a, b)| (a - b).abs() > 0.1 * a.abs().max(0.1 * scale));
    let symmetry_defect = (k == d).then(|| (0..d).map(|j| (exponents[j] + exponents[d - 1 - j]).abs()).fold(0.0, f64::max));
    Ok(LyapunovEstimate { exponents, half_window, time, steps, insufficient_horizon, symmetry_defect })
}

/// `log ‖B(T)‖ / T` for the product up to time `T`.
pub fn norm_growth_rate<S: Scalar>(i: &Iet<S>, t: f64) -> Result<f64, RenormError> {
    let (p, _) = kz_product(i, t, 100_000_000)?;
    Ok(p.matrix.log_norm() / p.time)
}
