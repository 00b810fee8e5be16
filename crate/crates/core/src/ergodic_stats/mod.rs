//! Time averages, equidistribution and weak-mixing statistics, and cocycle growth surveys.

mod averages;
mod functions;
mod mixing;
mod orbit;
mod survey;

pub use averages::{
    birkhoff_average, product_equidistribution, surface_birkhoff_average, twisted_birkhoff, twisted_birkhoff_dir, BirkhoffAverage,
    EquidistributionReport, QUAD_TOL,
};
pub use functions::{tent_grid, Arc, Rect, TestFunction};
pub use mixing::{
    lipschitz_transfer_check, sample_surface_point, weak_mixing_statistic, wm_certificate, CertificateOptions, LipschitzTransferReport,
    MixingOptions, MixingStatistic, WMCertificate, LIPSCHITZ_SLACK,
};
pub use orbit::{overlap, product_integral, Orbit, Segment};
pub use survey::{cocycle_growth_survey, DirectionGrowth, GrowthSurvey, SurveyOptions, SurveyVector};

use thiserror::Error;

use crate::renormalization::RenormError;
use crate::surface_flow::FlowError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErgodicError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("orbit reached a singularity at time {time}")]
    Singular { time: f64 },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Renorm(#[from] RenormError),
}
