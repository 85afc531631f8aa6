use thiserror::Error;

use crate::ring::RingSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible operands: {left} vs {right}")]
    RingMismatch { left: RingSpec, right: RingSpec },

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: &'static str },

    #[error("malformed literal {literal:?} for ring {ring}")]
    MalformedLiteral { literal: String, ring: RingSpec },

    #[error("element is not invertible")]
    NotInvertible,

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("indices must be strictly increasing")]
    UnsortedIndices,

    #[error("matrix is singular")]
    Singular,

    #[error("enumeration of {estimated} items exceeds the cap of {cap}")]
    EnumerationTooLarge { estimated: u128, cap: u64 },

    #[error("size {size} exceeds the cap of {cap} for check {check}")]
    SizeOverCap {
        check: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid size {size} for check {check}: {reason}")]
    InvalidSize {
        check: &'static str,
        size: usize,
        reason: &'static str,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown check {0:?}")]
    UnknownCheck(String),
}
