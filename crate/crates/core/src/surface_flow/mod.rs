//! Straight-line flow on translation surfaces, transversals, first-return interval
//! exchanges and saddle connections.

mod first_return;
pub mod iet;
mod mat2;
mod saddle;
mod transversal;
pub(crate) mod walk;

pub use first_return::{first_return, first_return_iet, transversal_sequence, FirstReturn, ReturnOptions};
pub use iet::{Iet, IetRecord, Scalar};
pub use mat2::{product_exact, rotation_decomposition, Mat2};
pub use saddle::{saddle_connections, saddle_connections_budget, saddle_connections_csv, SaddleConnection};
pub use transversal::{Piece, Transversal};
pub use walk::{straight_line_flow, straight_line_flow_dir, Crossing, SurfaceTrajectory};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("rotation angle {0} has cos θ = 0")]
    VerticalRotation(f64),
    #[error("flow cannot start at a cone point")]
    StartsAtConePoint,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ray found no exit from cell {cell}")]
    NoExit { cell: usize },
    #[error("crossing budget of {0} exhausted")]
    Budget(usize),
    #[error("invalid transversal: {0}")]
    BadTransversal(String),
    #[error("non-minimal direction: separatrix reaches a cone point at time {time}")]
    NonMinimal { time: f64 },
    #[error("a separatrix hits the free endpoint of the transversal")]
    EndpointAmbiguity,
    #[error("no return to the transversal within time {0}")]
    NoReturn(f64),
    #[error("inconsistent return map: {0}")]
    Inconsistent(String),
    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),
}
