//! Floer groups of real monopoles for families where they are determined
//! by grading arguments: positive scalar curvature manifolds, lens spaces
//! and several Brieskorn spheres with the Montesinos involution.

mod brieskorn;
mod towers;

use thiserror::Error;

use crate::complexes::ComplexError;

pub use brieskorn::{
    assemble_brieskorn_hmr, brieskorn_irreducibles, divisor_count, BrieskornFamily, BrieskornInput,
    BrieskornReport, DivisorCalibration, ExplicitCheck, IrreducibleSpectrum, ModuleTriple,
};
pub use towers::{apply_upsilon, lens_hmr, psc_hmr, upsilon_power, FlavorReport, HmrTriple, Tower, TowerKind, TowerModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("parameters {0:?} are not pairwise coprime")]
    NotCoprime(Vec<u64>),
    #[error("unknown Brieskorn family: {0}")]
    UnknownFamily(String),
    #[error("the hat differential from the boundary-unstable reducible is not determined")]
    AmbiguousDifferential,
    #[error("window [{lo}, {hi}] must contain gradings {need_lo}..={need_hi}")]
    InvalidWindow { lo: i64, hi: i64, need_lo: i64, need_hi: i64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("malformed calibration: {0}")]
    Calibration(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
