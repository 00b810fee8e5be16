//! First-return interval exchanges of the straight-line flow to a transversal.

use serde::Serialize;

use super::iet::Iet;
use super::transversal::{corner_offset, Transversal, ANG_TOL};
use super::walk::{walk, Cursor, Stop};
use super::FlowError;
use crate::geometry::point::Vec2;
use crate::unfolding::{corner_angles, TranslationSurface};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnOptions {
    /// Search horizon for first hits, in units of the mean return time.
    pub search_factor: f64,
    /// Backward separatrices are followed for this many maximal return times to detect connections.
    pub minimality_factor: f64,
    pub max_crossings: usize,
}

impl Default for ReturnOptions {
    fn default() -> Self {
        ReturnOptions { search_factor: 1000.0, minimality_factor: 10.0, max_crossings: 20_000_000 }
    }
}

/// A first-return IET together with the data used to build it.
#[derive(Debug, Clone, Serialize)]
pub struct FirstReturn {
    pub iet: Iet<f64>,
    pub flow: Vec2,
    /// Sorted interior cut points of the transversal.
    pub discontinuities: Vec<f64>,
    /// Flow time from each singular corner back to the transversal.
    pub separatrix_times: Vec<f64>,
    /// `|sin|` of the angle between transversal and flow.
    pub sin_angle: f64,
    pub transversal_length: f64,
}

impl FirstReturn {
    /// `min λ / max λ`.
    pub fn balance(&self) -> f64 {
        let (lo, hi) = self.iet.lengths.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        lo / hi
    }

    /// Largest `s` for which flowing the transversal for time `s` keeps it embedded and free
    /// of singularities: the minimum of the return times and separatrix hitting times.
    pub fn disjoint_time(&self) -> f64 {
        self.iet.heights.iter().chain(&self.separatrix_times).fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// `Σ λ_i r_i |sin|`, equal to the surface area for a full transversal.
    pub fn swept_area(&self) -> f64 {
        self.iet.area() * self.sin_angle
    }
}

fn classify(end: super::walk::WalkEnd, horizon: f64, budget: usize) -> Result<(f64, f64, Cursor), FlowError> {
    match end.stop {
        Stop::Transversal { param } => Ok((end.time, param, end.cursor)),
        Stop::Vertex { .. } => Err(FlowError::NonMinimal { time: end.time }),
        Stop::Horizon => Err(FlowError::NoReturn(horizon)),
        Stop::Budget => Err(FlowError::Budget(budget)),
    }
}

/// First return of the unit-speed flow in direction `flow` to `j`.
pub fn first_return(s: &TranslationSurface, flow: Vec2, j: &Transversal, opts: &ReturnOptions) -> Result<FirstReturn, FlowError> {
    let d = flow.normalized();
    let sin = j.direction().cross(d).abs();
    if sin < 1e-9 {
        return Err(FlowError::BadTransversal("transversal is parallel to the flow".into()));
    }
    let ell = j.length();
    let search = opts.search_factor * s.area() / (ell * sin);
    let back = -d;
    let mut cuts = Vec::new();
    let mut separatrix_times = Vec::new();
    let mut separatrix_ends = Vec::new();
    for cp in s.cone_points() {
        for &(c, v) in &cp.corners {
            let a = corner_offset(s, c, v, back);
            if a >= corner_angles(s.cell(c))[v] - ANG_TOL {
                continue;
            }
            if a < ANG_TOL {
                // backward separatrix runs along a cell edge into the next vertex
                return Err(FlowError::NonMinimal { time: s.edge(c, v).0.dist(s.edge(c, v).1) });
            }
            let start = Cursor { cell: c, pos: s.cell(c)[v], from_edge: None, at_vertex: Some(v) };
            let end = walk(s, start, back, search, Some(j), opts.max_crossings, |_, _, _, _| {})?;
            let (time, param, cursor) = classify(end, search, opts.max_crossings)?;
            if !j.end_at_vertex() && (ell - param).abs() < 1e-12 * ell.max(1.0) {
                return Err(FlowError::EndpointAmbiguity);
            }
            cuts.push(param);
            separatrix_times.push(time);
            separatrix_ends.push((cursor, time));
        }
    }
    if !j.end_at_vertex() {
        let start = j.cursor_at(s, ell, back);
        let end = walk(s, start, back, search, Some(j), opts.max_crossings, |_, _, _, _| {})?;
        match end.stop {
            Stop::Transversal { param } => cuts.push(param),
            Stop::Vertex { .. } => {}
            Stop::Horizon => return Err(FlowError::NoReturn(search)),
            Stop::Budget => return Err(FlowError::Budget(opts.max_crossings)),
        }
    }
    let tol = 1e-12 * ell.max(1.0);
    cuts.retain(|&x| x > tol && x < ell - tol);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < tol);

    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(0.0);
    bounds.extend(&cuts);
    bounds.push(ell);
    let k = bounds.len() - 1;
    let mut lengths = Vec::with_capacity(k);
    let mut heights = Vec::with_capacity(k);
    let mut image_left = Vec::with_capacity(k);
    for i in 0..k {
        let mid = 0.5 * (bounds[i] + bounds[i + 1]);
        let start = j.cursor_at(s, mid, d);
        let end = walk(s, start, d, search, Some(j), opts.max_crossings, |_, _, _, _| {})?;
        let (time, param, _) = match classify(end, search, opts.max_crossings) {
            Err(FlowError::NonMinimal { .. }) => return Err(FlowError::Inconsistent("interval midpoint reached a cone point".into())),
            other => other?,
        };
        lengths.push(bounds[i + 1] - bounds[i]);
        heights.push(time);
        image_left.push(bounds[i] + (param - mid));
    }
    let mut bottom: Vec<usize> = (0..k).collect();
    bottom.sort_by(|&a, &b| image_left[a].total_cmp(&image_left[b]));
    let mut acc = 0.0;
    for &l in &bottom {
        if (image_left[l] - acc).abs() > 1e-8 * ell.max(1.0) {
            return Err(FlowError::Inconsistent(format!("image intervals do not tile the transversal near {acc}")));
        }
        acc += lengths[l];
    }
    let iet = Iet::new(lengths, (0..k).collect(), bottom, heights)?;

    let max_r = iet.heights.iter().fold(0.0f64, |m, &x| m.max(x));
    let horizon = opts.minimality_factor * max_r;
    for (cursor, t0) in separatrix_ends {
        if t0 >= horizon {
            continue;
        }
        let end = walk(s, cursor, back, horizon - t0, None, opts.max_crossings, |_, _, _, _| {})?;
        if let Stop::Vertex { .. } = end.stop {
            return Err(FlowError::NonMinimal { time: t0 + end.time });
        }
    }
    Ok(FirstReturn { iet, flow: d, discontinuities: cuts, separatrix_times, sin_angle: sin, transversal_length: ell })
}

/// First-return IET for the flow at angle `theta` (standard orientation).
pub fn first_return_iet(s: &TranslationSurface, theta: f64, j: &Transversal) -> Result<Iet<f64>, FlowError> {
    first_return(s, Vec2::from_angle(theta), j, &ReturnOptions::default()).map(|r| r.iet)
}

/// Nested transversals of the given lengths sharing the anchor and corner of `base`,
/// each with its first-return data.
pub fn transversal_sequence(
    s: &TranslationSurface,
    flow: Vec2,
    base: &Transversal,
    lengths: &[f64],
    opts: &ReturnOptions,
) -> Result<Vec<(Transversal, FirstReturn)>, FlowError> {
    if lengths.windows(2).any(|w| w[1] >= w[0]) {
        return Err(FlowError::InvalidInput("transversal lengths must decrease".into()));
    }
    lengths
        .iter()
        .map(|&l| {
            let j = base.truncated(s, l)?;
            let r = first_return(s, flow, &j, opts)?;
            Ok((j, r))
        })
        .collect()
}
