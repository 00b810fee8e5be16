//! Diagonal triangulation by ear clipping.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::point::Vec2;
use super::polygon::Polygon;

/// Vertex-index triples, each counterclockwise; every edge is a side or an interior diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Diagonals used, as sorted index pairs (polygon sides excluded).
    pub fn diagonals(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]));
                let side = b == a + 1 || (a == 0 && b == n - 1);
                if !side && !out.contains(&(a, b)) {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Signed areas of the triangles over the given coordinates.
    pub fn signed_areas(&self, v: &[Vec2]) -> Vec<f64> {
        self.triangles.iter().map(|t| 0.5 * (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]])).collect()
    }

    /// Exact area sum, when exact coordinates are available.
    pub fn exact_area(&self, p: &Polygon) -> Option<BigRational> {
        let e = p.exact_vertices()?;
        let two = BigRational::from_integer(2.into());
        Some(self.triangles.iter().fold(BigRational::zero(), |acc, t| acc + e[t[1]].sub(&e[t[0]]).cross(&e[t[2]].sub(&e[t[0]])) / &two))
    }

    /// Index of a triangle containing `p` (barycentric test with tolerance) and its coordinates.
    pub fn locate(&self, v: &[Vec2], p: Vec2, tol: f64) -> Option<(usize, [f64; 3])> {
        self.triangles.iter().enumerate().find_map(|(i, t)| {
            let b = barycentric(v[t[0]], v[t[1]], v[t[2]], p);
            b.iter().all(|&w| w >= -tol).then_some((i, b))
        })
    }
}

pub fn barycentric(a: Vec2, b: Vec2, c: Vec2, p: Vec2) -> [f64; 3] {
    let det = (b - a).cross(c - a);
    let l1 = (b - p).cross(c - p) / det;
    let l2 = (c - p).cross(a - p) / det;
    [l1, l2, 1.0 - l1 - l2]
}

/// Ear clipping with the polygon's orientation predicate (exact in rational mode).
pub fn triangulate(p: &Polygon) -> Triangulation {
    let n = p.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut triangles = Vec::with_capacity(n.saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let a = idx[(k + m - 1) % m];
            let b = idx[k];
            let c = idx[(k + 1) % m];
            if p.orient_idx(a, b, c) <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&q| {
                q != a && q != b && q != c && p.orient_idx(a, b, q) >= 0 && p.orient_idx(b, c, q) >= 0 && p.orient_idx(c, a, q) >= 0
            });
            if !blocked {
                triangles.push([a, b, c]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        // a simple polygon always has an ear; this only guards float-mode near-degeneracy
        assert!(clipped, "ear clipping failed on a validated polygon");
    }
    triangles.push([idx[0], idx[1], idx[2]]);
    Triangulation { triangles }
}
