use thiserror::Error;

use crate::coloring::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size too small: {0}")]
    SizeTooSmall(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coloring has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coloring is not proper: edge ({0},{1}) is monochromatic")]
    NotProper(usize, usize),
    #[error("invalid input coloring: {0}")]
    InvalidInputColoring(String),
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("wrapped dimension of size {0} is below 3")]
    WrapTooSmall(usize),
    #[error("piece {piece:?} differs from the first piece at row {row}, column {col}")]
    PrefixMismatch {
        piece: String,
        row: usize,
        col: usize,
    },
    #[error("incompatible stitch pieces: {0}")]
    IncompatiblePieces(String),
    #[error("unknown bank entry {0:?}")]
    UnknownEntry(String),
    #[error("{k} is not representable as a nonnegative combination of {a} and {b}")]
    NotRepresentable { k: usize, a: usize, b: usize },
    #[error("{what} fails verification: {violation}")]
    VerificationFailed { what: String, violation: Violation },
    #[error("no construction route for {0}")]
    Unreachable(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
