use thiserror::Error;

/// Errors raised by matrix construction, indicator evaluation and the
/// experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("dimension {n} is too small: at least {min} required")]
    TooSmall { n: usize, min: usize },

    #[error("entry ({i}, {j}) = {value} is not a positive finite ratio")]
    NonPositiveEntry { i: usize, j: usize, value: f64 },

    #[error("diagonal entry ({i}, {i}) = {value}, expected {expected}")]
    BadDiagonal { i: usize, value: f64, expected: f64 },

    #[error("entries ({i}, {j}) = {a_ij} and ({j}, {i}) = {a_ji} are not reciprocal")]
    ReciprocityViolation { i: usize, j: usize, a_ij: f64, a_ji: f64 },

    #[error("entries ({i}, {j}) = {a_ij} and ({j}, {i}) = {a_ji} are not skew-symmetric")]
    SkewSymmetryViolation { i: usize, j: usize, a_ij: f64, a_ji: f64 },

    #[error("entry ({i}, {j}) = {value} is not finite")]
    NonFiniteEntry { i: usize, j: usize, value: f64 },

    #[error("expected {expected} values, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("triad component {value} is not a positive finite ratio")]
    NonPositiveInput { value: f64 },

    #[error("value {value} is not finite")]
    NonFiniteInput { value: f64 },

    #[error("value {value} is negative")]
    NegativeInput { value: f64 },

    #[error("generator {index} = {value} is not a positive finite ratio")]
    NonPositiveGenerator { index: usize, value: f64 },

    #[error("edge {index} has ratio {value}, which is not a positive finite ratio")]
    NonPositiveRatio { index: usize, value: f64 },

    #[error("edges do not form a spanning tree: {reason}")]
    NotATree { reason: String },

    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("x^(2n) overflows for x = {x}, n = {n}")]
    Overflow { x: f64, n: u32 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
