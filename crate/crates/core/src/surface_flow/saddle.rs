//! Saddle connections by wedge-and-window search over a triangulation of the cells.

use serde::Serialize;

use crate::geometry::point::Vec2;
use crate::geometry::polygon::point_segment_distance;
use crate::unfolding::TranslationSurface;

/// Straight segment between two cone points with no cone point in its interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub holonomy: Vec2,
    pub start: usize,
    pub end: usize,
}

impl SaddleConnection {
    pub fn length(&self) -> f64 {
        self.holonomy.norm()
    }
}

struct Tri {
    /// Vertex positions in the cell's coordinates.
    p: [Vec2; 3],
    /// Cone point of each vertex.
    cone: [usize; 3],
    /// Across edge `k` (from `p[k]` to `p[k+1]`): `(triangle, edge, translation)`.
    nbr: [(usize, usize, Vec2); 3],
}

/// Ear clipping of a counterclockwise cell; collinear boundary vertices are allowed.
fn ear_clip(v: &[Vec2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (v[idx[(i + m - 1) % m]], v[idx[i]], v[idx[(i + 1) % m]]);
            if (b - a).cross(c - b) <= 1e-14 {
                return false;
            }
            idx.iter().all(|&k| {
                let q = v[k];
                if q == a || q == b || q == c {
                    return true;
                }
                !((b - a).cross(q - a) >= 0.0 && (c - b).cross(q - b) >= 0.0 && (a - c).cross(q - c) >= 0.0)
            })
        });
        let i = ear.expect("simple polygon has an ear");
        out.push([idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]]);
        idx.remove(i);
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

fn triangulate_surface(s: &TranslationSurface) -> Vec<Tri> {
    let mut tris = Vec::new();
    // (cell, vertex a, vertex b) -> (triangle, edge) for every triangle edge
    let mut by_edge = std::collections::HashMap::new();
    let mut ranges = Vec::new();
    for c in 0..s.cell_count() {
        let v = s.cell(c);
        let start = tris.len();
        for t in ear_clip(v) {
            let k = tris.len();
            for e in 0..3 {
                by_edge.insert((c, t[e], t[(e + 1) % 3]), (k, e));
            }
            tris.push((c, t));
        }
        ranges.push(start..tris.len());
    }
    tris.iter()
        .map(|&(c, t)| {
            let v = s.cell(c);
            let n = v.len();
            let nbr = std::array::from_fn(|e| {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                if (a + 1) % n == b {
                    // cell edge `a`: glued to a partner edge, which starts at the partner's vertex `pe`
                    let (pc, pe, tr) = s.partner(c, a);
                    let pn = s.cell(pc).len();
                    let (k, ke) = by_edge[&(pc, pe, (pe + 1) % pn)];
                    (k, ke, tr)
                } else {
                    let (k, ke) = by_edge[&(c, b, a)];
                    (k, ke, Vec2::ZERO)
                }
            });
            Tri { p: [v[t[0]], v[t[1]], v[t[2]]], cone: [0, 1, 2].map(|i| s.corner_class(c, t[i])), nbr }
        })
        .collect()
}

/// All saddle connections of length at most `max_len`, one per outgoing direction at each cone point.
pub fn saddle_connections(s: &TranslationSurface, max_len: f64) -> Vec<SaddleConnection> {
    saddle_connections_budget(s, max_len, 50_000_000)
}

/// As [`saddle_connections`] with a bound on explored windows.
pub fn saddle_connections_budget(s: &TranslationSurface, max_len: f64, max_windows: usize) -> Vec<SaddleConnection> {
    let tris = triangulate_surface(s);
    let mut out = Vec::new();
    let mut budget = max_windows;
    for t in &tris {
        for k in 0..3 {
            let p0 = t.p[k];
            let a = t.p[(k + 1) % 3];
            let b = t.p[(k + 2) % 3];
            let lo = a - p0;
            let hi = b - p0;
            // the ray along `lo` belongs to this triangle corner; `hi` to the next one
            if lo.norm() <= max_len {
                out.push(SaddleConnection { holonomy: lo, start: t.cone[k], end: t.cone[(k + 1) % 3] });
            }
            let (nt, ne, tr) = t.nbr[(k + 1) % 3];
            let mut stack = vec![(nt, ne, -tr, lo, hi)];
            while let Some((ti, e, offset, lo, hi)) = stack.pop() {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let tri = &tris[ti];
                let wa = tri.p[(e + 1) % 3] + offset; // same point as the window's lo end
                let wb = tri.p[e] + offset;
                if point_segment_distance(p0, wa, wb) > max_len {
                    continue;
                }
                let w = tri.p[(e + 2) % 3] + offset;
                let x = w - p0;
                let right_of_hi = hi.cross(x) >= 0.0;
                let left_of_lo = x.cross(lo) >= 0.0;
                let push = |stack: &mut Vec<_>, edge: usize, lo: Vec2, hi: Vec2| {
                    let (nt, ne, tr) = tri.nbr[edge];
                    stack.push((nt, ne, offset - tr, lo, hi));
                };
                if right_of_hi {
                    push(&mut stack, (e + 1) % 3, lo, hi);
                } else if left_of_lo {
                    push(&mut stack, (e + 2) % 3, lo, hi);
                } else {
                    if x.norm() <= max_len {
                        out.push(SaddleConnection { holonomy: x, start: t.cone[k], end: tri.cone[(e + 2) % 3] });
                    }
                    push(&mut stack, (e + 1) % 3, lo, x);
                    push(&mut stack, (e + 2) % 3, x, hi);
                }
            }
        }
    }
    out
}

/// CSV with header `hx,hy,length,start,end`.
pub fn saddle_connections_csv(list: &[SaddleConnection]) -> String {
    let mut s = String::from("hx,hy,length,start,end\n");
    for c in list {
        s.push_str(&format!("{},{},{},{},{}\n", c.holonomy.x, c.holonomy.y, c.length(), c.start, c.end));
    }
    s
}
