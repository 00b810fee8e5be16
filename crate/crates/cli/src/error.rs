use thiserror::Error;

use billiard_lab::billiard::BilliardError;
use billiard_lab::ergodic_stats::ErgodicError;
use billiard_lab::geometry::GeometryError;
use billiard_lab::renormalization::RenormError;
use billiard_lab::surface_flow::FlowError;
use billiard_lab::unfolding::UnfoldError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("dynamics: {0}")]
    Dynamics(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Dynamics(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<UnfoldError> for CliError {
    fn from(e: UnfoldError) -> Self {
        match e {
            UnfoldError::OutsideCell => CliError::Dynamics(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BilliardError> for CliError {
    fn from(e: BilliardError) -> Self {
        match e {
            BilliardError::HitVertex { .. } | BilliardError::Tangency { .. } => CliError::Dynamics(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Budget(_) => CliError::Budget(e.to_string()),
            FlowError::InvalidInput(_) | FlowError::BadTransversal(_) | FlowError::VerticalRotation(_) | FlowError::InvalidIet(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Dynamics(e.to_string()),
        }
    }
}

impl From<RenormError> for CliError {
    fn from(e: RenormError) -> Self {
        match e {
            RenormError::Connection => CliError::Dynamics(e.to_string()),
            RenormError::Budget(_) => CliError::Budget(e.to_string()),
            RenormError::InvalidInput(_) => CliError::Input(e.to_string()),
            RenormError::Flow(f) => f.into(),
        }
    }
}

impl From<ErgodicError> for CliError {
    fn from(e: ErgodicError) -> Self {
        match e {
            ErgodicError::InvalidInput(_) => CliError::Input(e.to_string()),
            ErgodicError::Singular { .. } => CliError::Dynamics(e.to_string()),
            ErgodicError::Flow(f) => f.into(),
            ErgodicError::Renorm(r) => r.into(),
        }
    }
}
