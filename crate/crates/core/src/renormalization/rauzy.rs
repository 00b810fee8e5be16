//! Rauzy–Veech induction steps.

use serde::Serialize;

use super::RenormError;
use crate::surface_flow::{Iet, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// The last top interval is longer.
    Top,
    /// The last bottom interval is longer.
    Bottom,
}

/// One elementary step. The matrix is `I + E[winner][loser]`: old lengths are this matrix
/// times new lengths, new heights are its transpose times old heights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RauzyStep<S: Scalar = f64> {
    pub kind: StepKind,
    pub winner: usize,
    pub loser: usize,
    pub iet: Iet<S>,
    /// `log(old total length / new total length)`.
    pub contraction: f64,
}

impl<S: Scalar> RauzyStep<S> {
    /// Dense elementary matrix.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let d = self.iet.d();
        let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        m[self.winner][self.loser] = 1;
        m
    }
}

/// Kind of the next step without performing it.
pub fn step_kind<S: Scalar>(i: &Iet<S>) -> Result<StepKind, RenormError> {
    let d = i.d();
    let (t, b) = (i.top[d - 1], i.bottom[d - 1]);
    let (lt, lb) = (&i.lengths[t], &i.lengths[b]);
    if S::tie(lt, lb) {
        return Err(RenormError::Connection);
    }
    Ok(if lt > lb { StepKind::Top } else { StepKind::Bottom })
}

/// Induces `i` on its initial segment of length `|I| - min(λ_top-last, λ_bottom-last)`.
pub fn rauzy_step<S: Scalar>(i: &Iet<S>) -> Result<RauzyStep<S>, RenormError> {
    let kind = step_kind(i)?;
    let d = i.d();
    let (t, b) = (i.top[d - 1], i.bottom[d - 1]);
    let (winner, loser) = match kind {
        StepKind::Top => (t, b),
        StepKind::Bottom => (b, t),
    };
    let total = i.total_length().to_f64();
    let mut next = i.clone();
    next.lengths[winner] = next.lengths[winner].clone() - next.lengths[loser].clone();
    next.heights[loser] = next.heights[loser].clone() + next.heights[winner].clone();
    let row = match kind {
        StepKind::Top => &mut next.bottom,
        StepKind::Bottom => &mut next.top,
    };
    row.pop();
    let pos = row.iter().position(|&x| x == winner).expect("winner present in both rows");
    row.insert(pos + 1, loser);
    let contraction = -(-i.lengths[loser].to_f64() / total).ln_1p();
    Ok(RauzyStep { kind, winner, loser, iet: next, contraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn golden_rotation_step() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        // λ = (φ − 1, 2 − φ) with φ the golden ratio
        let i = Iet::new(vec![g, 1.0 - g], vec![0, 1], vec![1, 0], vec![1.0, 1.0]).unwrap();
        let s = rauzy_step(&i).unwrap();
        assert_eq!(s.kind, StepKind::Bottom);
        assert_eq!((s.winner, s.loser), (0, 1));
        assert!((s.iet.lengths[0] - (2.0 * g - 1.0)).abs() < 1e-15);
        assert_eq!(s.matrix(), vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(s.iet.heights, vec![1.0, 2.0]);
    }

    #[test]
    fn tie_is_connection() {
        let i = Iet::new(vec![0.5, 0.5], vec![0, 1], vec![1, 0], vec![1.0, 1.0]).unwrap();
        assert_eq!(rauzy_step(&i).unwrap_err(), RenormError::Connection);
    }

    #[test]
    fn exact_area_preserved() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let mut i = Iet::new(
            vec![r(3, 7), r(2, 11), r(5, 13), r(1, 3)],
            vec![0, 1, 2, 3],
            vec![3, 2, 1, 0],
            vec![r(1, 1), r(2, 1), r(3, 2), r(5, 4)],
        )
        .unwrap();
        let area = i.area();
        for _ in 0..20 {
            match rauzy_step(&i) {
                Ok(s) => i = s.iet,
                Err(_) => break,
            }
            assert_eq!(i.area(), area);
        }
    }
}
