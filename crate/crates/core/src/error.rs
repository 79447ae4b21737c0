use std::fmt;

/// Image axis named in partition errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Height,
    Width,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Height => f.write_str("height"),
            Axis::Width => f.write_str("width"),
        }
    }
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed bytes, bad magic, truncation and similar decoding failures.
    Format,
    /// A domain invariant does not hold for otherwise well-formed input.
    Invariant,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("{axis} {size} is not divisible by block size {block}")]
    Partition {
        axis: Axis,
        size: usize,
        block: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("geometry mismatch at image {index}: expected {expected}, found {found}")]
    GeometryMismatch {
        index: usize,
        expected: String,
        found: String,
    },

    #[error("{0} keys are not invertible")]
    NotInvertible(&'static str),

    #[error("bad magic: expected {expected}, found {found}")]
    BadMagic { expected: String, found: String },

    #[error("unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { expected: u16, found: u16 },

    #[error("truncated input: needed {needed} bytes, {available} available")]
    Truncated { needed: usize, available: usize },

    #[error("trailing data: {0} unexpected bytes after payload")]
    TrailingBytes(usize),

    #[error("framing error: length {len} is not a multiple of the {record}-byte record size")]
    Framing { len: usize, record: usize },

    #[error("declared dimensions overflow")]
    DimensionOverflow,

    #[error("unsupported matrix kind {0}")]
    UnsupportedMatrixKind(u8),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("dispersion undefined for an empty histogram")]
    UndefinedDispersion,

    #[error("sample too small: {0}")]
    SampleTooSmall(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("malformed predictions file: {0}")]
    Csv(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::BadMagic { .. }
            | Error::UnsupportedVersion { .. }
            | Error::Truncated { .. }
            | Error::TrailingBytes(_)
            | Error::Framing { .. }
            | Error::DimensionOverflow
            | Error::UnsupportedMatrixKind(_)
            | Error::Csv(_) => ErrorClass::Format,
            _ => ErrorClass::Invariant,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
