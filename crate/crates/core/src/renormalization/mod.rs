//! Rauzy–Veech induction, the induction cocycle and its exponents, and the
//! eigenvalue-exclusion test.

mod cocycle;
mod lyapunov;
mod precision;
mod rauzy;
mod veech;

pub use cocycle::{kz_product, kz_steps, rank, zorich_accelerate, CocycleChecks, CocycleProduct, IntMatrix};
pub use lyapunov::{lyapunov_spectrum, norm_growth_rate, LyapunovEstimate};
pub use precision::{bits_for_time, lift_precision};
pub use rauzy::{rauzy_step, step_kind, RauzyStep, StepKind};
pub use veech::{
    dist_to_integer_lattice, eigenvalue_reparametrization_check, veech_direction, veech_test, veech_test_dir, PairedVeechReport,
    VeechOptions, VeechTestReport, Verdict,
};

use thiserror::Error;

use crate::surface_flow::FlowError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenormError {
    #[error("connection: the last top and bottom intervals have equal length")]
    Connection,
    #[error("step budget of {0} exhausted")]
    Budget(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
}
