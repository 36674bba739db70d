//! Error and warning types shared across the crate.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse: {context}: {detail}")]
    Parse { context: String, detail: String },

    #[error(
        "incomplete grid: ({sequence_id}, {resolution_height}) has no point at crf {crf}"
    )]
    IncompleteGrid {
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },

    #[error("duplicate key: ({sequence_id}, {resolution_height}, {crf}) appears more than once")]
    DuplicateKey {
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },

    #[error(
        "non-positive value: {field} = {value} at ({sequence_id}, {resolution_height}, {crf})"
    )]
    NonPositiveValue {
        field: &'static str,
        value: f64,
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },

    #[error("quality out of range: vmaf = {value} at ({sequence_id}, {resolution_height}, {crf})")]
    QualityOutOfRange {
        value: f64,
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("too few knots: got {got}, need at least 5")]
    TooFewKnots { got: usize },

    #[error("knot abscissae not strictly increasing at index {index}")]
    NonIncreasingX { index: usize },

    #[error("mismatched knot arrays: {xs} x values, {ys} y values")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("x = {x} outside interpolation range [{min}, {max}]")]
    OutOfRange { x: f64, min: f64, max: f64 },

    #[error("invalid sampling step {step}: must be in (0, {max}]")]
    InvalidStep { step: f64, max: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("mixed sequences: expected {expected}, found {found}")]
    MixedSequences { expected: String, found: String },

    #[error("empty front")]
    EmptyFront,

    #[error("invalid ladder config: {reason}")]
    InvalidConfig { reason: String },

    #[error("no comparable rungs: no rung index is filled in both ladders")]
    NoComparableRungs,

    #[error("ladder method mismatch: reference is {reference}, proposed is {proposed}")]
    MethodMismatch {
        reference: String,
        proposed: String,
    },

    #[error("ladder config mismatch between reference and proposed")]
    ConfigMismatch,

    #[error("empty intersection: no sequence has ladders on both sides")]
    EmptyIntersection,

    #[error("invalid synthesis spec: {reason}")]
    InvalidSpec { reason: String },

    #[error("json: {context}: {detail}")]
    Json { context: String, detail: String },
}

impl Error {
    /// Coarse category used for CLI exit codes and machine-parseable stderr.
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            Io { .. } => ErrorCategory::Io,
            Parse { .. } | Json { .. } => ErrorCategory::Input,
            IncompleteGrid { .. }
            | DuplicateKey { .. }
            | NonPositiveValue { .. }
            | QualityOutOfRange { .. }
            | EmptyCorpus
            | TooFewKnots { .. }
            | NonIncreasingX { .. }
            | LengthMismatch { .. }
            | OutOfRange { .. }
            | InvalidStep { .. }
            | EmptyInput
            | MixedSequences { .. }
            | EmptyFront
            | InvalidConfig { .. }
            | InvalidSpec { .. } => ErrorCategory::Validation,
            NoComparableRungs
            | MethodMismatch { .. }
            | ConfigMismatch
            | EmptyIntersection => ErrorCategory::Eval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Io,
    Input,
    Validation,
    Eval,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Io => "io",
            ErrorCategory::Input => "input",
            ErrorCategory::Validation => "validation",
            ErrorCategory::Eval => "eval",
        }
    }
}

/// Non-fatal findings surfaced while loading or resampling a corpus.
///
/// Warnings never abort a run; callers decide whether to print them.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Bitrate did not strictly decrease when CRF increased within a group.
    NonMonotoneBitrate {
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },
    /// Quality increased when CRF increased within a group.
    NonMonotoneQuality {
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
    },
    /// Input carried a column/field outside the documented schema.
    UnknownColumn { name: String },
    /// An interpolated bitrate or energy sample fell below the positivity
    /// floor and was clamped.
    ClampedValue {
        sequence_id: String,
        resolution_height: u32,
        crf: f64,
        field: &'static str,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NonMonotoneBitrate {
                sequence_id,
                resolution_height,
                crf,
            } => write!(
                f,
                "bitrate not strictly decreasing in crf at ({sequence_id}, {resolution_height}, {crf})"
            ),
            Warning::NonMonotoneQuality {
                sequence_id,
                resolution_height,
                crf,
            } => write!(
                f,
                "quality increases with crf at ({sequence_id}, {resolution_height}, {crf})"
            ),
            Warning::UnknownColumn { name } => {
                write!(f, "ignoring unknown column `{name}`")
            }
            Warning::ClampedValue {
                sequence_id,
                resolution_height,
                crf,
                field,
            } => write!(
                f,
                "{field} clamped to positivity floor at ({sequence_id}, {resolution_height}, {crf:.3})"
            ),
        }
    }
}
