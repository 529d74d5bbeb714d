use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum GeomError {
    #[error("degenerate chart point at (u, v) = ({u}, {v})")]
    DegenerateChart { u: f64, v: f64 },

    #[error("the position vanishes at the sample point")]
    OriginOnSurface,

    #[error("singular integrand: |x| = {len:.3e} with negative exponent")]
    SingularIntegrand { len: f64 },

    #[error("profile hits the axis transversally at s = {s}")]
    AxisTransversal { s: f64 },

    #[error("profile reached the origin at s = {s} with a negative exponent")]
    OriginHit { s: f64 },

    #[error("step instability at s = {s}: |theta'| * step = {magnitude:.3e}")]
    StepInstability { s: f64, magnitude: f64 },

    #[error("invalid surface description: {0}")]
    InvalidSurface(String),

    #[error("invalid curve evaluation: {0}")]
    InvalidCurve(String),

    #[error("i/o error: {0}")]
    Io(String),
}
