use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    IndexOutOfBounds {
        index: usize,
        dim: usize,
    },
    InvalidEntry {
        row: usize,
        col: usize,
        value: f64,
    },
    MalformedStructure(&'static str),
    NonPositiveWeight {
        index: usize,
        value: f64,
    },
    NotNormalized,
    QuantizationRange {
        index: usize,
        value: f64,
    },
    EmptyMatrix,
    InvalidSigma(f64),
    /// `s` must be strictly larger than `sigma`.
    InvalidShift {
        s: f64,
        sigma: f64,
    },
    /// Some diagonal entry is not strictly below `sigma`.
    DiagonalAtLeastSigma {
        index: usize,
        diag: f64,
        sigma: f64,
    },
    OmegaOutOfRange {
        omega: f64,
        max: f64,
    },
    InvalidTarget(f64),
    NotSuitable {
        index: usize,
        ratio: f64,
        sigma: f64,
    },
    /// The weight vector did not come from a successful suitability search.
    NoSuitableVector,
    InvalidSchedule(&'static str),
    InvalidDamping(f64),
    /// The iteration cap was reached before the certified bound met the target.
    /// `x` is the last iterate and `bound` its (non-satisfying) certified bound.
    IterationLimit {
        iterations: usize,
        bound: f64,
        x: Vec<f64>,
    },
    UndefinedCorrelation,
    NotANumber {
        index: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfBounds { index, dim } => {
                write!(f, "index {index} out of bounds for dimension {dim}")
            }
            Error::InvalidEntry { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} is not a finite nonnegative number")
            }
            Error::MalformedStructure(what) => write!(f, "malformed sparse structure: {what}"),
            Error::NonPositiveWeight { index, value } => {
                write!(f, "weight {index} = {value} is not strictly positive and finite")
            }
            Error::NotNormalized => write!(f, "weight vector must have maximum entry 1"),
            Error::QuantizationRange { index, value } => {
                write!(f, "weight {index} = {value:e} is below 2^-255 and cannot be quantized")
            }
            Error::EmptyMatrix => write!(f, "matrix has dimension zero"),
            Error::InvalidSigma(sigma) => write!(f, "sigma = {sigma} must be positive and finite"),
            Error::InvalidShift { s, sigma } => write!(f, "s = {s} must exceed sigma = {sigma}"),
            Error::DiagonalAtLeastSigma { index, diag, sigma } => {
                write!(f, "diagonal entry {index} = {diag} is not below sigma = {sigma}")
            }
            Error::OmegaOutOfRange { omega, max } => {
                write!(f, "omega = {omega} outside the convergence interval (0, {max})")
            }
            Error::InvalidTarget(t) => write!(f, "target error {t} must be positive"),
            Error::NotSuitable { index, ratio, sigma } => {
                write!(f, "weights are not suitable: (Aw)_{index}/w_{index} = {ratio} exceeds sigma = {sigma}")
            }
            Error::NoSuitableVector => write!(f, "no suitable vector available"),
            Error::InvalidSchedule(why) => write!(f, "invalid schedule: {why}"),
            Error::InvalidDamping(alpha) => write!(f, "damping factor {alpha} out of range"),
            Error::IterationLimit { iterations, bound, .. } => {
                write!(f, "iteration limit {iterations} reached with certified bound {bound:e} above target")
            }
            Error::UndefinedCorrelation => {
                write!(f, "correlation undefined: a score vector has no untied pair")
            }
            Error::NotANumber { index } => write!(f, "score {index} is NaN"),
        }
    }
}

impl core::error::Error for Error {}
