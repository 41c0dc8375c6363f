use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible algebra elements: dimension {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("module element has {found_m} components of dimension {found_dim}, geometry expects {expected_m} of dimension {expected_dim}")]
    GeometryMismatch {
        expected_m: usize,
        expected_dim: usize,
        found_m: usize,
        found_dim: usize,
    },

    #[error("index {index} out of range for ambient dimension {m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("module vector is not tangent: |D(U) - U| = {residual:e} exceeds {bound:e}")]
    NotTangent { residual: f64, bound: f64 },

    #[error("operator is not a projector: |T^2 - T| = {residual:e} exceeds {bound:e}")]
    NotAProjector { residual: f64, bound: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("representation dimension {n} is below the minimum {min}")]
    InvalidDimension { n: usize, min: usize },

    #[error("unsupported torus parameters N={n}, k={k}: {reason}")]
    UnsupportedTorus { n: usize, k: usize, reason: &'static str },

    #[error("degenerate surface parameter ({u0}, {u1}): {reason}")]
    DegenerateParameter { u0: f64, u1: f64, reason: &'static str },
}
