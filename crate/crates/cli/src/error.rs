use std::fmt;

use hmrkit::complexes::ComplexError;
use hmrkit::f2lin::LinAlgError;
use hmrkit::index_grading::IndexError;
use hmrkit::morse_blowup::MorseError;
use hmrkit::real_spinc::SpincError;
use hmrkit::seifert_hmr::SeifertError;
use serde::Serialize;

/// Malformed input exits with 2; module errors with 1.
pub const EXIT_MODULE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn new(code: impl Into<String>, message: impl Into<String>, exit: i32) -> Self {
        Self { code: code.into(), message: message.into(), exit }
    }

    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Self::new(code, message, EXIT_INPUT)
    }

    fn module(code: &str, e: &dyn fmt::Display) -> Self {
        Self::new(code, e.to_string(), EXIT_MODULE)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input("malformed_json", e.to_string())
    }
}

impl From<LinAlgError> for CliError {
    fn from(e: LinAlgError) -> Self {
        let code = match e {
            LinAlgError::OutOfBounds { .. } => "linalg.out_of_bounds",
            LinAlgError::DuplicateEntry { .. } => "linalg.duplicate_entry",
            LinAlgError::Ragged { .. } => "linalg.ragged",
            LinAlgError::ShapeMismatch { .. } => "linalg.shape_mismatch",
            LinAlgError::CompositionNonzero { .. } => "linalg.composition_nonzero",
        };
        CliError::module(code, &e)
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        let code = match &e {
            ComplexError::ShapeMismatch { .. } => "complex.shape_mismatch",
            ComplexError::GradingViolation { .. } => "complex.grading_violation",
            ComplexError::CompositionNonzero { .. } => "complex.composition_nonzero",
            ComplexError::DuplicateId(_) => "complex.duplicate_id",
            ComplexError::LinAlg(inner) => return inner.clone().into(),
        };
        CliError::module(code, &e)
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        let code = match &e {
            MorseError::NotSquare { .. } => "morse.not_square",
            MorseError::NotSymmetric { .. } => "morse.not_symmetric",
            MorseError::NonFinite => "morse.non_finite",
            MorseError::DegenerateSpectrum(_) => "morse.degenerate_spectrum",
            MorseError::NotUnitVector { .. } => "morse.not_unit_vector",
            MorseError::DimensionMismatch { .. } => "morse.dimension_mismatch",
            MorseError::NegativeS(_) => "morse.negative_s",
            MorseError::InvalidStep { .. } => "morse.invalid_step",
            MorseError::StepTooLarge { .. } => "morse.step_too_large",
            MorseError::GradingViolation { .. } => "morse.grading_violation",
            MorseError::CompositionNonzero => "morse.composition_nonzero",
            MorseError::CountShape { .. } => "morse.count_shape",
            MorseError::IncompatibleFibers { .. } => "morse.incompatible_fibers",
            MorseError::UnknownAnchor(_) => "morse.unknown_anchor",
            MorseError::EmptyBase => "morse.empty_base",
            MorseError::Complex(inner) => return inner.clone().into(),
        };
        CliError::module(code, &e)
    }
}

impl From<SpincError> for CliError {
    fn from(e: SpincError) -> Self {
        let code = match &e {
            SpincError::MalformedOrbitMap(_) => "spinc.malformed_orbit_map",
            SpincError::MalformedComplex(_) => "spinc.malformed_complex",
            SpincError::NotChainMap(_) => "spinc.not_chain_map",
            SpincError::NotCocycle => "spinc.not_cocycle",
            SpincError::CochainLength { .. } => "spinc.cochain_length",
            SpincError::NoRealStructure => "spinc.no_real_structure",
            SpincError::Unsupported(_) => "spinc.unsupported",
            SpincError::DegreeOutOfRange { .. } => "spinc.degree_out_of_range",
            SpincError::Overflow(_) => "spinc.overflow",
            SpincError::LinAlg(inner) => return inner.clone().into(),
        };
        CliError::module(code, &e)
    }
}

impl From<SeifertError> for CliError {
    fn from(e: SeifertError) -> Self {
        let code = match &e {
            SeifertError::NotCoprime(_) => "seifert.not_coprime",
            SeifertError::UnknownFamily(_) => "seifert.unknown_family",
            SeifertError::AmbiguousDifferential => "seifert.ambiguous_differential",
            SeifertError::InvalidWindow { .. } => "seifert.invalid_window",
            SeifertError::Unsupported(_) => "seifert.unsupported",
            SeifertError::Calibration(_) => "seifert.calibration",
            SeifertError::Complex(inner) => return inner.clone().into(),
        };
        CliError::module(code, &e)
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        let code = match e {
            IndexError::NotDivisibleBy8(_) => "index.not_divisible_by_8",
            IndexError::OddPairing(_) => "index.odd_pairing",
            IndexError::Overflow => "index.overflow",
        };
        CliError::module(code, &e)
    }
}
