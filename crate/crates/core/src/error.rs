use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: n = {0}, need at least 3 sides")]
    InvalidPolygon(usize),

    #[error("point ({x}, {y}) lies outside the domain polygon")]
    OutOfDomain { x: f64, y: f64 },

    #[error("parameter {name} = {value} outside [0, 1]")]
    ParameterRange { name: &'static str, value: f64 },

    #[error("shift at position {position} not applicable to label {label}: entry is zero")]
    InapplicableShift { label: String, position: usize },

    #[error("index out of range: {what} = {value}, valid range {min}..={max}")]
    IndexRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid barycentric coordinates: {0}")]
    InvalidBarycentric(String),

    #[error("malformed ribbon: {0}")]
    MalformedRibbon(String),

    #[error("ribbon is not twist-compatible: {0}")]
    NotTwistCompatible(String),

    #[error(
        "inconsistent panel value at label {label}: {first:?} vs {second:?} (relative deviation {deviation:e})"
    )]
    InconsistentPanel {
        label: String,
        first: [f64; 3],
        second: [f64; 3],
        deviation: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate normal at domain point ({x}, {y})")]
    DegenerateNormal { x: f64, y: f64 },

    #[error("depth mismatch: net depth {net}, ribbon degree {ribbon}")]
    DepthMismatch { net: usize, ribbon: usize },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
