use std::path::PathBuf;

use thiserror::Error;

use crate::specfun::MathieuClass;

pub type Result<T> = std::result::Result<T, HwmError>;

#[derive(Debug, Error)]
pub enum HwmError {
    /// An argument lies outside the range an evaluator supports.
    #[error("{what} = {value} is outside the supported range {range}")]
    Range {
        what: &'static str,
        value: f64,
        range: String,
    },

    /// A formula is undefined at the given argument (e.g. a 1/√q factor at q = 0).
    #[error("{0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed for {class} order {order} at q = {q}: {reason}")]
    EigenSolver {
        class: MathieuClass,
        order: u32,
        q: f64,
        reason: String,
    },

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),

    #[error("mean value undefined: spectrum has zero norm")]
    UndefinedMean,

    #[error("cone mismatch: operands live on θ = {left} and θ = {right}")]
    ConeMismatch { left: f64, right: f64 },

    #[error("sample ({ix}, {iy}) of the grid: {source}")]
    Sample {
        ix: usize,
        iy: usize,
        #[source]
        source: Box<HwmError>,
    },

    #[error("format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HwmError {
    pub(crate) fn range(what: &'static str, value: f64, range: impl Into<String>) -> Self {
        HwmError::Range {
            what,
            value,
            range: range.into(),
        }
    }

    pub(crate) fn format(offset: u64, message: impl Into<String>) -> Self {
        HwmError::Format {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HwmError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class: 1 usage, 2 numeric, 3 I/O and file format.
    pub fn exit_code(&self) -> i32 {
        match self {
            HwmError::InvalidParameter(_) => 1,
            HwmError::Range { .. }
            | HwmError::Domain(_)
            | HwmError::EigenSolver { .. }
            | HwmError::NumericalConsistency(_)
            | HwmError::UndefinedMean
            | HwmError::ConeMismatch { .. } => 2,
            HwmError::Sample { source, .. } => source.exit_code(),
            HwmError::Format { .. } | HwmError::Io { .. } => 3,
        }
    }
}
