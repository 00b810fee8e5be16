//! Interval exchange transformations with heights (suspension data).

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;

use super::FlowError;

/// Number type carried by an IET: `f64` or exact rationals.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync {
    fn to_f64(&self) -> f64;
    fn from_f64(x: f64) -> Option<Self>;
    fn from_u64(n: u64) -> Self;
    /// Equality test used to detect connections during induction.
    fn tie(a: &Self, b: &Self) -> bool;
}

/// Relative tolerance for float ties.
pub const FLOAT_TIE_TOL: f64 = 1e-13;

impl Scalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn tie(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= FLOAT_TIE_TOL * a.abs().max(b.abs())
    }
}

impl Scalar for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn from_u64(n: u64) -> Self {
        <BigRational as FromPrimitive>::from_u64(n).expect("integers are rational")
    }
    fn tie(a: &Self, b: &Self) -> bool {
        a == b
    }
}

/// Lengths and heights are indexed by label; `top` and `bottom` list labels left to right
/// before and after the exchange.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iet<S: Scalar = f64> {
    pub lengths: Vec<S>,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    pub heights: Vec<S>,
}

fn is_permutation(p: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    p.len() == d && p.iter().all(|&x| x < d && !std::mem::replace(&mut seen[x], true))
}

impl<S: Scalar> Iet<S> {
    pub fn new(lengths: Vec<S>, top: Vec<usize>, bottom: Vec<usize>, heights: Vec<S>) -> Result<Self, FlowError> {
        let d = lengths.len();
        if d < 2 || heights.len() != d || !is_permutation(&top, d) || !is_permutation(&bottom, d) {
            return Err(FlowError::InvalidIet("need d ≥ 2 labels with matching permutations and heights".into()));
        }
        if lengths.iter().chain(&heights).any(|x| !x.is_positive()) {
            return Err(FlowError::InvalidIet("lengths and heights must be positive".into()));
        }
        Ok(Iet { lengths, top, bottom, heights })
    }

    pub fn d(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_length(&self) -> S {
        self.lengths.iter().fold(S::zero(), |a, x| a + x.clone())
    }

    /// `Σ λ_i h_i`: the area of the suspension.
    pub fn area(&self) -> S {
        self.lengths.iter().zip(&self.heights).fold(S::zero(), |a, (l, h)| a + l.clone() * h.clone())
    }

    /// No proper prefix of `top` and `bottom` consists of the same labels.
    pub fn is_irreducible(&self) -> bool {
        let d = self.d();
        let mut in_top = vec![false; d];
        let mut in_bottom = vec![false; d];
        for k in 0..d - 1 {
            in_top[self.top[k]] = true;
            in_bottom[self.bottom[k]] = true;
            if in_top == in_bottom {
                return false;
            }
        }
        true
    }

    /// Left endpoint of each label's interval in the top row.
    pub fn top_left(&self) -> Vec<S> {
        Self::lefts(&self.top, &self.lengths)
    }

    /// Left endpoint of each label's image in the bottom row.
    pub fn bottom_left(&self) -> Vec<S> {
        Self::lefts(&self.bottom, &self.lengths)
    }

    fn lefts(order: &[usize], lengths: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); lengths.len()];
        let mut acc = S::zero();
        for &l in order {
            out[l] = acc.clone();
            acc = acc + lengths[l].clone();
        }
        out
    }

    /// Translation applied to each label.
    pub fn translations(&self) -> Vec<S> {
        let (t, b) = (self.top_left(), self.bottom_left());
        t.into_iter().zip(b).map(|(t, b)| b - t).collect()
    }

    /// Label of the interval containing `x` (half-open intervals).
    pub fn label_at(&self, x: &S) -> Option<usize> {
        let mut acc = S::zero();
        for &l in &self.top {
            let next = acc.clone() + self.lengths[l].clone();
            if *x >= acc && *x < next {
                return Some(l);
            }
            acc = next;
        }
        None
    }

    /// The exchange map on `[0, total_length)`.
    pub fn map(&self, x: &S) -> Option<(S, usize)> {
        let l = self.label_at(x)?;
        let tr = self.translations();
        Some((x.clone() + tr[l].clone(), l))
    }

    pub fn to_f64(&self) -> Iet<f64> {
        Iet {
            lengths: self.lengths.iter().map(Scalar::to_f64).collect(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            heights: self.heights.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Rauzy class invariant: the monodromy permutation `σ(i) = bottom position of top[i]`.
    pub fn monodromy(&self) -> Vec<usize> {
        let d = self.d();
        let mut pos_bottom = vec![0; d];
        for (i, &l) in self.bottom.iter().enumerate() {
            pos_bottom[l] = i;
        }
        self.top.iter().map(|&l| pos_bottom[l]).collect()
    }

    /// Antisymmetric intersection matrix `Ω`: `Ω[a][b] = +1` when `a` precedes `b` on top
    /// and follows it on the bottom, `-1` in the opposite case.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let d = self.d();
        let (mut pt, mut pb) = (vec![0; d], vec![0; d]);
        for i in 0..d {
            pt[self.top[i]] = i;
            pb[self.bottom[i]] = i;
        }
        let mut m = vec![vec![0i64; d]; d];
        for a in 0..d {
            for b in 0..d {
                if pt[a] < pt[b] && pb[a] > pb[b] {
                    m[a][b] = 1;
                } else if pt[a] > pt[b] && pb[a] < pb[b] {
                    m[a][b] = -1;
                }
            }
        }
        m
    }
}

impl Iet<f64> {
    /// Exact copy (lengths and heights converted bit-exactly).
    pub fn to_rational(&self) -> Iet<BigRational> {
        let conv = |v: &[f64]| v.iter().map(|&x| BigRational::from_float(x).unwrap_or_else(BigRational::zero)).collect();
        Iet { lengths: conv(&self.lengths), top: self.top.clone(), bottom: self.bottom.clone(), heights: conv(&self.heights) }
    }

    /// Rotation `x ↦ x + α mod 1` as a two-interval exchange with unit heights.
    pub fn rotation(alpha: f64) -> Result<Self, FlowError> {
        let a = alpha.rem_euclid(1.0);
        Iet::new(vec![1.0 - a, a], vec![0, 1], vec![1, 0], vec![1.0, 1.0])
    }
}

/// Export format `{lengths, permutation_top, permutation_bottom, heights}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IetRecord {
    pub lengths: Vec<f64>,
    pub permutation_top: Vec<usize>,
    pub permutation_bottom: Vec<usize>,
    pub heights: Vec<f64>,
}

impl<S: Scalar> From<&Iet<S>> for IetRecord {
    fn from(i: &Iet<S>) -> Self {
        IetRecord {
            lengths: i.lengths.iter().map(Scalar::to_f64).collect(),
            permutation_top: i.top.clone(),
            permutation_bottom: i.bottom.clone(),
            heights: i.heights.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl IetRecord {
    pub fn to_iet(&self) -> Result<Iet<f64>, FlowError> {
        Iet::new(self.lengths.clone(), self.permutation_top.clone(), self.permutation_bottom.clone(), self.heights.clone())
    }
}
