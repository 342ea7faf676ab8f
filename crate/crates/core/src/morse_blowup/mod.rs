//! Finite-dimensional blow-up model: linear flows on projective space,
//! their blow-up along a base Morse function, trajectory counts, a
//! numerical integrator for the blown-up flow and the model's complexes.

mod flow;
mod model;
mod spectrum;

pub use flow::{integrate_blowup_flow, FlowOptions, FlowSample, FlowTrajectory};
pub use model::{
    adjacent_trajectory_count_mod2, blowup_critical_points, build_model_complexes,
    sphere_model, Anchor, BaseMorseData, BasePoint, ModelComplexes,
};
pub use spectrum::{rp_critical_points, LinearFlowModel, RpCriticalPoint, Spectrum};

use thiserror::Error;

use crate::complexes::ComplexError;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorseError {
    #[error("matrix must be square and nonempty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("initial vector has norm {norm}, expected 1")]
    NotUnitVector { norm: f64 },
    #[error("initial vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("initial s must be nonnegative, got {0}")]
    NegativeS(f64),
    #[error("step must be positive and t_max nonnegative (step {step}, t_max {t_max})")]
    InvalidStep { step: f64, t_max: f64 },
    #[error("norm drift {drift:e} at t = {t} exceeds tolerance; reduce the step")]
    StepTooLarge { t: f64, drift: f64 },
    #[error("base trajectory from {from} to {to} does not lower the Morse index by one")]
    GradingViolation { from: String, to: String },
    #[error("base trajectory counts do not square to zero")]
    CompositionNonzero,
    #[error("base count matrix has shape {found:?}, expected {expected:?}")]
    CountShape { expected: (usize, usize), found: (usize, usize) },
    #[error("base points {from} and {to} are joined by a trajectory but their fibers differ; only product bundles are supported")]
    IncompatibleFibers { from: String, to: String },
    #[error("anchor generator {0:?} does not exist")]
    UnknownAnchor(String),
    #[error("base data has no points")]
    EmptyBase,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
