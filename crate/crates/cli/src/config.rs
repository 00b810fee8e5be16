//! Experiment configuration: a TOML file with a strict schema, overridable from flags.

use serde::{Deserialize, Serialize};

use billiard_lab::billiard::ShadowingBounds;
use billiard_lab::ergodic_stats::SurveyVector;
use billiard_lab::geometry::ArithmeticMode;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: ArithmeticMode,
    /// Output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub input: InputConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub iet: IetConfig,
    #[serde(default)]
    pub lyapunov: LyapunovConfig,
    #[serde(default)]
    pub veech: VeechConfig,
    #[serde(default)]
    pub equidist: EquidistConfig,
    #[serde(default)]
    pub wm_cert: WmCertConfig,
    #[serde(default)]
    pub perturb_scan: PerturbScanConfig,
    #[serde(default)]
    pub survey: SurveyConfig,
}

/// Exactly one source; a polygon is unfolded when a command needs a surface.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    /// Polygon file `{"vertices": [...], "arithmetic": ...}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
    /// Triangle with the given first two angles, in units of π.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle: Option<[f64; 2]>,
    /// `square`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin_polygon: Option<String>,
    /// Surface file as written by `unfold`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    /// `torus`, `two-square` or `octagon`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin_surface: Option<String>,
    /// Tolerance and largest denominator for recognizing angles as rational multiples of π.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_denominator: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartState {
    /// Coordinates; strings `"p/q"` in rational mode.
    pub x: toml::Value,
    pub y: toml::Value,
    /// Float mode: angle in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Rational mode: direction vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<toml::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dy: Option<toml::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    /// Liouville-random starts when `start` is absent.
    pub samples: usize,
    pub horizon: f64,
    pub max_collisions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<StartState>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { samples: 10, horizon: 100.0, max_collisions: 100_000, start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IetConfig {
    /// Flow angle from the horizontal.
    pub theta: f64,
    pub transversal_length: f64,
    pub anchor: usize,
}

impl Default for IetConfig {
    fn default() -> Self {
        IetConfig { theta: 0.7, transversal_length: 0.3, anchor: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LyapunovConfig {
    pub theta: f64,
    pub transversal_length: f64,
    pub anchor: usize,
    pub horizon: f64,
    /// Number of exponents; all of them when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Length precision in bits; chosen from the horizon when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u64>,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig { theta: 0.7, transversal_length: 0.3, anchor: 0, horizon: 50.0, count: None, precision_bits: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VeechConfig {
    /// Angle from the vertical, clockwise.
    pub theta: f64,
    pub alphas: Vec<f64>,
    pub stages: usize,
    pub initial_length: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub min_stages: usize,
    pub c_min: f64,
    pub anchor: usize,
    /// Also run the sheared presentation with frequency `α sec θ`.
    pub paired: bool,
}

impl Default for VeechConfig {
    fn default() -> Self {
        let d = billiard_lab::renormalization::VeechOptions::default();
        VeechConfig {
            theta: 0.3,
            alphas: vec![0.0],
            stages: d.stages,
            initial_length: d.initial_length,
            ratio: d.ratio,
            threshold: d.threshold,
            min_stages: d.min_stages,
            c_min: d.c_min,
            anchor: d.anchor,
            paired: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquidistConfig {
    /// `[[x0, y0], [x1, y1]]`.
    pub rect: [[f64; 2]; 2],
    /// `[start, length]` in radians.
    pub arc: [f64; 2],
    pub rect2: [[f64; 2]; 2],
    pub arc2: [f64; 2],
    pub samples: usize,
    pub horizon: f64,
}

impl Default for EquidistConfig {
    fn default() -> Self {
        let q = std::f64::consts::FRAC_PI_2;
        EquidistConfig {
            rect: [[0.0, 0.0], [0.5, 0.5]],
            arc: [0.0, q],
            rect2: [[0.0, 0.0], [0.5, 0.5]],
            arc2: [0.0, q],
            samples: 100,
            horizon: 1e4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WmCertConfig {
    pub epsilon: f64,
    pub horizon: f64,
    pub functions: usize,
    pub samples: usize,
    pub grid: usize,
    /// Keep the second copy on the direction orbit of the first (rational tables).
    pub restrict_directions: bool,
}

impl Default for WmCertConfig {
    fn default() -> Self {
        WmCertConfig { epsilon: 0.01, horizon: 200.0, functions: 8, samples: 200, grid: 3, restrict_directions: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbScanConfig {
    pub deltas: Vec<f64>,
    pub samples: usize,
    pub horizon: f64,
    pub grid_step: f64,
    pub bounds: ShadowingBounds,
}

impl Default for PerturbScanConfig {
    fn default() -> Self {
        PerturbScanConfig { deltas: vec![1e-3, 5e-4], samples: 200, horizon: 50.0, grid_step: 1.0, bounds: ShadowingBounds::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurveyConfig {
    pub directions: usize,
    pub times: Vec<f64>,
    pub eps_prime: f64,
    pub transversal_length: f64,
    pub bootstrap: usize,
    pub vector: SurveyVector,
    pub max_steps: usize,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        let d = billiard_lab::ergodic_stats::SurveyOptions::default();
        SurveyConfig {
            directions: d.directions,
            times: d.times,
            eps_prime: d.eps_prime,
            transversal_length: d.transversal_length,
            bootstrap: d.bootstrap,
            vector: d.vector,
            max_steps: d.max_steps,
        }
    }
}
