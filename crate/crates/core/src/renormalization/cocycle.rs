//! Products of induction matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::rauzy::{rauzy_step, StepKind};
use super::RenormError;
use crate::surface_flow::{Iet, Scalar};

/// Square matrix with arbitrary-precision integer entries (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        IntMatrix { n, data: rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(<[BigInt]>::to_vec).collect()
    }

    /// Right multiplication by `I + E[w][l]`: column `l` += column `w`.
    pub fn mul_elementary(&mut self, w: usize, l: usize) {
        for i in 0..self.n {
            let add = self.data[i * self.n + w].clone();
            self.data[i * self.n + l] += add;
        }
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * &o.data[k * n + j];
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        IntMatrix { n, data: (0..n * n).map(|k| self.data[(k % n) * n + k / n].clone()).collect() }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows().iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Spectral norm estimated in floating point (power iteration on `MᵀM`).
    pub fn operator_norm(&self) -> f64 {
        let n = self.n;
        let scale = self.data.iter().map(|x| x.abs()).max().unwrap_or_default();
        let bits = scale.bits().saturating_sub(900) as i32;
        let m: Vec<f64> = self.data.iter().map(|x| (x >> bits as usize).to_f64().unwrap_or(0.0)).collect();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut norm = 0.0;
        for _ in 0..200 {
            let mv: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect();
            let w: Vec<f64> = (0..n).map(|j| (0..n).map(|i| m[i * n + j] * mv[i]).sum()).collect();
            let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if wn == 0.0 {
                return 0.0;
            }
            let next = wn.sqrt();
            v = w.iter().map(|x| x / wn).collect();
            if (next - norm).abs() <= 1e-14 * next {
                norm = next;
                break;
            }
            norm = next;
        }
        norm * 2f64.powi(bits)
    }

    /// `log ‖M‖` without overflow.
    pub fn log_norm(&self) -> f64 {
        let scale = self.data.iter().map(|x| x.abs()).max().unwrap_or_default();
        let bits = scale.bits().saturating_sub(900);
        let shifted = IntMatrix { n: self.n, data: self.data.iter().map(|x| x >> bits as usize).collect() };
        shifted.operator_norm().ln() + bits as f64 * std::f64::consts::LN_2
    }

    pub fn to_csv(&self) -> String {
        self.rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",") + "\n").collect()
    }
}

/// `B = Θ_1 Θ_2 ⋯ Θ_n` with accumulated time `t = Σ log(length contraction)`.
#[derive(Debug, Clone)]
pub struct CocycleProduct {
    pub matrix: IntMatrix,
    pub steps: usize,
    pub time: f64,
    /// Permutation rows at the start and at the end of the product.
    pub start: (Vec<usize>, Vec<usize>),
    pub end: (Vec<usize>, Vec<usize>),
    pub kinds: Vec<StepKind>,
}

fn omega(top: &[usize], bottom: &[usize]) -> IntMatrix {
    let i = Iet::<f64> { lengths: vec![1.0; top.len()], top: top.to_vec(), bottom: bottom.to_vec(), heights: vec![1.0; top.len()] };
    IntMatrix::from_rows(&i.intersection_matrix())
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleChecks {
    pub integer: bool,
    pub determinant: String,
    pub unimodular: bool,
    /// `Bᵀ Ω_start B = Ω_end` exactly.
    pub symplectic: bool,
    /// Rank of `Ω_start` (twice the genus of the suspension).
    pub absolute_rank: usize,
}

impl CocycleProduct {
    pub fn identity<S: Scalar>(i: &Iet<S>) -> Self {
        let p = (i.top.clone(), i.bottom.clone());
        CocycleProduct { matrix: IntMatrix::identity(i.d()), steps: 0, time: 0.0, start: p.clone(), end: p, kinds: Vec::new() }
    }

    pub fn omega_start(&self) -> IntMatrix {
        omega(&self.start.0, &self.start.1)
    }

    pub fn omega_end(&self) -> IntMatrix {
        omega(&self.end.0, &self.end.1)
    }

    /// Exact integrality, determinant and intersection-form checks.
    pub fn checks(&self) -> CocycleChecks {
        let det = self.matrix.determinant();
        let transported = self.matrix.transpose().mul(&self.omega_start()).mul(&self.matrix);
        CocycleChecks {
            integer: true,
            unimodular: det.abs().is_one(),
            determinant: det.to_string(),
            symplectic: transported == self.omega_end(),
            absolute_rank: rank(&self.omega_start()),
        }
    }

    fn push(&mut self, kind: StepKind, w: usize, l: usize, contraction: f64, end: (Vec<usize>, Vec<usize>)) {
        self.matrix.mul_elementary(w, l);
        self.steps += 1;
        self.time += contraction;
        self.kinds.push(kind);
        self.end = end;
    }
}

/// Rank over ℚ via fraction-free elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let n = m.size();
    let mut a = m.rows();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let (f, g) = (a[i][c].clone(), a[r][c].clone());
                for j in 0..n {
                    a[i][j] = &a[i][j] * &g - &a[r][j] * &f;
                }
            }
        }
        r += 1;
    }
    r
}

fn renormalized<S: Scalar>(mut i: Iet<S>) -> Iet<S> {
    let total = i.total_length();
    if total.to_f64() < 1e-100 {
        for l in &mut i.lengths {
            *l = l.clone() / total.clone();
        }
    }
    i
}

/// Elementary steps until the accumulated time reaches `t` (or `max_steps`).
pub fn kz_product<S: Scalar>(i: &Iet<S>, t: f64, max_steps: usize) -> Result<(CocycleProduct, Iet<S>), RenormError> {
    let mut prod = CocycleProduct::identity(i);
    let mut cur = i.clone();
    while prod.time < t {
        if prod.steps >= max_steps {
            return Err(RenormError::Budget(max_steps));
        }
        let s = rauzy_step(&cur)?;
        prod.push(s.kind, s.winner, s.loser, s.contraction, (s.iet.top.clone(), s.iet.bottom.clone()));
        cur = renormalized(s.iet);
    }
    Ok((prod, cur))
}

/// Exactly `n` elementary steps.
pub fn kz_steps<S: Scalar>(i: &Iet<S>, n: usize) -> Result<(CocycleProduct, Iet<S>), RenormError> {
    let mut prod = CocycleProduct::identity(i);
    let mut cur = i.clone();
    for _ in 0..n {
        let s = rauzy_step(&cur)?;
        prod.push(s.kind, s.winner, s.loser, s.contraction, (s.iet.top.clone(), s.iet.bottom.clone()));
        cur = renormalized(s.iet);
    }
    Ok((prod, cur))
}

/// One Zorich step: the maximal run of elementary steps of the same kind.
pub fn zorich_accelerate<S: Scalar>(i: &Iet<S>, max_elementary: usize) -> Result<(Iet<S>, CocycleProduct), RenormError> {
    let mut prod = CocycleProduct::identity(i);
    let first = super::rauzy::step_kind(i)?;
    let mut cur = i.clone();
    loop {
        if prod.steps >= max_elementary {
            return Err(RenormError::Budget(max_elementary));
        }
        let s = rauzy_step(&cur)?;
        prod.push(s.kind, s.winner, s.loser, s.contraction, (s.iet.top.clone(), s.iet.bottom.clone()));
        cur = renormalized(s.iet);
        match super::rauzy::step_kind(&cur) {
            Ok(k) if k == first => continue,
            // a connection right after a completed run ends the run; the caller sees it on the next call
            _ => break,
        }
    }
    Ok((cur, prod))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.determinant(), BigInt::from(4));
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn identity_at_time_zero() {
        let i = Iet::rotation(0.3).unwrap();
        let (p, _) = kz_product(&i, 0.0, 10).unwrap();
        assert_eq!(p.matrix, IntMatrix::identity(2));
        assert_eq!(p.steps, 0);
    }

    #[test]
    fn norm_of_fibonacci_matrix() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((m.operator_norm() - g).abs() < 1e-12);
        assert!((m.log_norm() - g.ln()).abs() < 1e-12);
    }

    #[test]
    fn rank_of_rotation_form() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]]);
        assert_eq!(rank(&m), 2);
    }
}
