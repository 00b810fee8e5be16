//! One runner per subcommand; each returns the report and its CSV table.

use std::path::Path;

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use billiard_lab::billiard::{flow, flow_exact, liouville_sample, shadowing_experiment, ExactState, Termination, UnitTangentState};
use billiard_lab::ergodic_stats::{
    cocycle_growth_survey, product_equidistribution, wm_certificate, Arc, CertificateOptions, Rect, SurveyOptions, TestFunction,
};
use billiard_lab::geometry::point::{format_rational, parse_rational, RatPoint};
use billiard_lab::geometry::{perturb, ArithmeticMode, Vec2};
use billiard_lab::renormalization::{
    bits_for_time, eigenvalue_reparametrization_check, lift_precision, lyapunov_spectrum, veech_test, VeechOptions, VeechTestReport,
};
use billiard_lab::surface_flow::{first_return, FirstReturn, IetRecord, ReturnOptions, Transversal};
use billiard_lab::unfolding::{surface_to_json, unfold, TranslationSurface};

use crate::config::{ExperimentConfig, StartState};
use crate::error::CliError;
use crate::output::{to_value, Output, Table};

/// Shortest round-trip form; `nan`/`inf` for non-finite values.
fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        format!("{x}").to_lowercase()
    }
}

fn value_f64(v: &toml::Value) -> Result<f64, CliError> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::String(s) => parse_rational(s)
            .map(|r| billiard_lab::geometry::point::rat_to_f64(&r))
            .ok_or_else(|| CliError::Config(format!("bad number {s:?}"))),
        other => Err(CliError::Config(format!("bad number {other}"))),
    }
}

fn value_rat(v: &toml::Value) -> Result<BigRational, CliError> {
    match v {
        toml::Value::Integer(i) => Ok(BigRational::from_integer((*i).into())),
        toml::Value::String(s) => parse_rational(s).ok_or_else(|| CliError::Config(format!("bad rational {s:?}"))),
        other => Err(CliError::Config(format!("rational mode needs integers or \"p/q\" strings, got {other}"))),
    }
}

fn rat_pair(p: &RatPoint) -> [String; 2] {
    [format_rational(&p.x), format_rational(&p.y)]
}

fn stop_failure(t: Termination, what: &str) -> Option<CliError> {
    match t {
        Termination::Completed => None,
        Termination::StepLimit => Some(CliError::Budget(format!("{what} reached the collision limit"))),
        Termination::HitVertex | Termination::Tangency => Some(CliError::Dynamics(format!("{what} stopped: {t:?}"))),
    }
}

pub fn simulate(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.simulate;
    let p = cfg.input.polygon(base, cfg.mode)?;
    if !(c.horizon > 0.0) {
        return Err(CliError::Config("simulate.horizon must be positive".into()));
    }
    if cfg.mode == ArithmeticMode::Rational {
        let start =
            c.start.as_ref().ok_or_else(|| CliError::Config("rational simulate needs [simulate.start] with x, y, dx, dy".into()))?;
        return simulate_exact(&p, start, c.horizon, c.max_collisions);
    }
    let starts = match &c.start {
        Some(s) => {
            let theta = s.theta.ok_or_else(|| CliError::Config("[simulate.start] needs theta in float mode".into()))?;
            let x = Vec2::new(value_f64(&s.x)?, value_f64(&s.y)?);
            if !p.contains(x, 0.0) {
                return Err(CliError::Input("start point lies outside the table".into()));
            }
            vec![UnitTangentState::new(x, theta)]
        }
        None => liouville_sample(&p, c.samples, cfg.seed),
    };
    let runs: Vec<_> = starts.par_iter().map(|s| flow(&p, s, c.horizon, c.max_collisions)).collect();
    let mut table = Table::new(&["orbit", "collision", "time", "x", "y", "theta_in", "theta_out", "edge"]);
    for (k, tr) in runs.iter().enumerate() {
        for (j, e) in tr.events.iter().enumerate() {
            table.push([
                k.to_string(),
                j.to_string(),
                num(e.time),
                num(e.position.x),
                num(e.position.y),
                num(e.theta_in),
                num(e.theta_out),
                e.edge.to_string(),
            ]);
        }
    }
    let summary: Vec<Value> = runs
        .iter()
        .map(|tr| {
            json!({
                "initial": tr.initial,
                "final_state": tr.final_state,
                "total_time": tr.total_time,
                "collisions": tr.events.len(),
                "termination": tr.termination,
            })
        })
        .collect();
    let failure = runs.iter().enumerate().find_map(|(k, tr)| stop_failure(tr.termination, &format!("orbit {k}")));
    Ok(Output { report: json!({ "mode": "float", "horizon": c.horizon, "orbits": summary }), table, files: vec![], failure })
}

fn simulate_exact(p: &billiard_lab::geometry::Polygon, s: &StartState, horizon: f64, max: usize) -> Result<Output, CliError> {
    let (dx, dy) = match (&s.dx, &s.dy) {
        (Some(dx), Some(dy)) => (value_rat(dx)?, value_rat(dy)?),
        _ => return Err(CliError::Config("rational mode needs dx and dy in [simulate.start]".into())),
    };
    let state = ExactState::new(RatPoint::new(value_rat(&s.x)?, value_rat(&s.y)?), RatPoint::new(dx, dy));
    let h = BigRational::from_float(horizon).ok_or_else(|| CliError::Config("bad horizon".into()))?;
    let tr = flow_exact(p, &state, &h, max)?;
    let mut table = Table::new(&["collision", "x", "y", "dx", "dy", "edge"]);
    for (j, c) in tr.collisions.iter().enumerate() {
        let [x, y] = rat_pair(&c.position);
        let [dx, dy] = rat_pair(&c.direction);
        table.push([j.to_string(), x, y, dx, dy, c.edge.map_or(String::new(), |e| e.to_string())]);
    }
    let report = json!({
        "mode": "rational",
        "horizon": format_rational(&h),
        "initial": { "position": rat_pair(&tr.initial.position), "direction": rat_pair(&tr.initial.direction) },
        "final_state": { "position": rat_pair(&tr.final_state.position), "direction": rat_pair(&tr.final_state.direction) },
        "collisions": tr.collisions.len(),
        "termination": tr.termination,
    });
    let failure = stop_failure(tr.termination, "orbit");
    Ok(Output { report, table, files: vec![], failure })
}

pub fn unfold_cmd(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let p = cfg.input.polygon(base, cfg.mode)?;
    let info = cfg.input.group_info(&p);
    let s = unfold(&p, &info)?;
    let mut table = Table::new(&["cone_point", "angle", "multiplicity", "corners"]);
    for (k, c) in s.cone_points().iter().enumerate() {
        table.push([k.to_string(), num(c.angle), c.multiplicity.to_string(), c.corners.len().to_string()]);
    }
    let report = json!({
        "rotation_order": info.rotation_order,
        "group_order": info.group_order(),
        "angles_over_pi": info.angles_over_pi,
        "cells": s.cell_count(),
        "genus": s.genus(),
        "euler_characteristic": s.euler_characteristic(),
        "area": s.area(),
        "cone_points": s.cone_points(),
    });
    let surface: Value = serde_json::from_str(&surface_to_json(&s)).expect("surface json");
    Ok(Output { report, table, files: vec![("surface.json", "surface", surface)], failure: None })
}

fn return_data(s: &TranslationSurface, theta: f64, anchor: usize, length: f64) -> Result<FirstReturn, CliError> {
    let flow = Vec2::from_angle(theta);
    let j = Transversal::perpendicular(s, flow, anchor, length)?;
    Ok(first_return(s, flow, &j, &ReturnOptions::default())?)
}

pub fn iet(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.iet;
    let s = cfg.input.surface(base, cfg.mode)?;
    let fr = return_data(&s, c.theta, c.anchor, c.transversal_length)?;
    let record = IetRecord::from(&fr.iet);
    let mut table = Table::new(&["label", "length", "height", "translation"]);
    let shifts = fr.iet.translations();
    for a in 0..fr.iet.d() {
        table.push([a.to_string(), num(record.lengths[a]), num(record.heights[a]), num(shifts[a])]);
    }
    let report = json!({
        "theta": c.theta,
        "iet": record,
        "discontinuities": fr.discontinuities,
        "separatrix_times": fr.separatrix_times,
        "sin_angle": fr.sin_angle,
        "transversal_length": fr.transversal_length,
        "swept_area": fr.swept_area(),
        "surface_area": s.area(),
        "balance": fr.balance(),
    });
    Ok(Output { report, table, files: vec![], failure: None })
}

pub fn lyapunov(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.lyapunov;
    if !(c.horizon > 0.0) {
        return Err(CliError::Config("lyapunov.horizon must be positive".into()));
    }
    let s = cfg.input.surface(base, cfg.mode)?;
    let fr = return_data(&s, c.theta, c.anchor, c.transversal_length)?;
    let bits = c.precision_bits.unwrap_or_else(|| bits_for_time(c.horizon));
    let lifted = lift_precision(&fr.iet, bits, cfg.seed);
    let k = c.count.unwrap_or(fr.iet.d());
    let est = lyapunov_spectrum(&lifted, c.horizon, k, cfg.seed)?;
    let mut table = Table::new(&["index", "exponent", "half_window"]);
    for (i, (e, h)) in est.exponents.iter().zip(&est.half_window).enumerate() {
        table.push([i.to_string(), num(*e), num(*h)]);
    }
    let report = json!({ "theta": c.theta, "precision_bits": bits, "iet": IetRecord::from(&fr.iet), "estimate": est });
    Ok(Output { report, table, files: vec![], failure: None })
}

fn veech_rows(table: &mut Table, presentation: &str, r: &VeechTestReport) {
    for i in 0..r.values.len() {
        table.push([
            num(r.alpha),
            presentation.to_string(),
            i.to_string(),
            num(r.lengths[i]),
            num(r.times[i]),
            num(r.values[i]),
            num(r.balance[i]),
            num(r.disjoint[i]),
            r.qualifying[i].to_string(),
        ]);
    }
}

pub fn veech(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.veech;
    if c.alphas.is_empty() {
        return Err(CliError::Config("veech.alphas is empty".into()));
    }
    let s = cfg.input.surface(base, cfg.mode)?;
    let opts = VeechOptions {
        stages: c.stages,
        initial_length: c.initial_length,
        ratio: c.ratio,
        threshold: c.threshold,
        min_stages: c.min_stages,
        c_min: c.c_min,
        anchor: c.anchor,
        ..VeechOptions::default()
    };
    let mut table = Table::new(&["alpha", "presentation", "stage", "length", "time", "value", "balance", "disjoint", "qualifying"]);
    let reports: Vec<Value> = if c.paired {
        let runs: Vec<_> = c.alphas.par_iter().map(|&a| eigenvalue_reparametrization_check(&s, c.theta, a, &opts)).collect();
        let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
        for r in &runs {
            veech_rows(&mut table, "direct", &r.direct);
            veech_rows(&mut table, "sheared", &r.sheared);
        }
        runs.iter().map(to_value).collect()
    } else {
        let runs: Vec<_> = c.alphas.par_iter().map(|&a| veech_test(&s, c.theta, a, &opts)).collect();
        let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
        for r in &runs {
            veech_rows(&mut table, "direct", r);
        }
        runs.iter().map(to_value).collect()
    };
    Ok(Output { report: json!({ "theta": c.theta, "paired": c.paired, "tests": reports }), table, files: vec![], failure: None })
}

fn indicator(rect: [[f64; 2]; 2], arc: [f64; 2]) -> Result<TestFunction, CliError> {
    let [lo, hi] = rect;
    if !(lo[0] < hi[0] && lo[1] < hi[1]) || !(arc[1] > 0.0) {
        return Err(CliError::Config("indicator needs lo < hi and a positive arc length".into()));
    }
    Ok(TestFunction::indicator(Rect::new(Vec2::new(lo[0], lo[1]), Vec2::new(hi[0], hi[1])), Arc::new(arc[0], arc[1])))
}

pub fn equidist(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.equidist;
    let p = cfg.input.polygon(base, cfg.mode)?;
    let f = indicator(c.rect, c.arc)?;
    let g = indicator(c.rect2, c.arc2)?;
    let r = product_equidistribution(&p, &f, &g, c.samples, c.horizon, cfg.seed)?;
    let mut table = Table::new(&["sample", "frequency"]);
    for (k, x) in r.frequencies.iter().enumerate() {
        table.push([k.to_string(), num(*x)]);
    }
    Ok(Output { report: to_value(&r), table, files: vec![], failure: None })
}

pub fn wm_cert(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.wm_cert;
    let p = cfg.input.polygon(base, cfg.mode)?.normalized_to_unit_area();
    let opts = CertificateOptions { grid: c.grid, restrict_directions: c.restrict_directions };
    let r = wm_certificate(&p, c.epsilon, c.horizon, c.functions, c.samples, cfg.seed, &opts)?;
    let mut table = Table::new(&["function", "first", "second", "value"]);
    for (k, (&(a, b), v)) in r.functions.iter().zip(&r.values).enumerate() {
        table.push([k.to_string(), a.to_string(), b.to_string(), num(*v)]);
    }
    Ok(Output { report: to_value(&r), table, files: vec![], failure: None })
}

pub fn perturb_scan(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.perturb_scan;
    if c.deltas.is_empty() {
        return Err(CliError::Config("perturb_scan.deltas is empty".into()));
    }
    let p = cfg.input.polygon(base, cfg.mode)?;
    let mut table = Table::new(&["delta", "time", "envelope", "mean_distance", "exceptional_fraction"]);
    let mut reports = Vec::new();
    for &delta in &c.deltas {
        let m = perturb(&p, delta, cfg.seed)?;
        let r = shadowing_experiment(&m, c.samples, c.horizon, c.grid_step, cfg.seed, c.bounds);
        for i in 0..r.times.len() {
            table.push([num(delta), num(r.times[i]), num(r.envelope[i]), num(r.mean_distance[i]), num(r.exceptional_fraction[i])]);
        }
        reports.push(json!({ "target": m.target().vertices(), "max_vertex_displacement": m.max_vertex_displacement(), "shadowing": r }));
    }
    Ok(Output { report: json!({ "scans": reports }), table, files: vec![], failure: None })
}

pub fn survey(cfg: &ExperimentConfig, base: &Path) -> Result<Output, CliError> {
    let c = &cfg.survey;
    let s = cfg.input.surface(base, cfg.mode)?;
    let opts = SurveyOptions {
        directions: c.directions,
        times: c.times.clone(),
        eps_prime: c.eps_prime,
        seed: cfg.seed,
        transversal_length: c.transversal_length,
        bootstrap: c.bootstrap,
        vector: c.vector,
        max_steps: c.max_steps,
    };
    let r = cocycle_growth_survey(&s, &opts)?;
    let header: Vec<String> = std::iter::once("s".to_string()).chain(opts.times.iter().map(|t| format!("log_growth_t{t}"))).collect();
    let mut table = Table::new(&header);
    for d in &r.records {
        table.push(std::iter::once(num(d.s)).chain(d.log_growth.iter().map(|&x| num(x))));
    }
    Ok(Output { report: to_value(&r), table, files: vec![], failure: None })
}
