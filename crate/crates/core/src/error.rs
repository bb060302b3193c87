use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown {kind} `{name}`; available: {available}")]
    NotFound {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("mass is not positive at x = {x}: m = {mass}")]
    NonPositiveMass { x: f64, mass: f64 },

    #[error("x = {x} lies outside the profile domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("y = {y} lies outside the attainable range [{lo}, {hi}] of the coordinate map")]
    Range { y: f64, lo: f64, hi: f64 },

    #[error("profile evaluated at discontinuity x = {x}")]
    Discontinuity { x: f64 },

    #[error("profile value at x = {x} is not finite")]
    NonFinite { x: f64 },

    #[error("adaptive quadrature did not reach tolerance on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("eigenvalue bisection did not converge after {iterations} iterations")]
    Solver { iterations: usize },

    #[error("energy must be positive, got E = {energy}")]
    NonPositiveEnergy { energy: f64 },

    #[error("E = V0 = {energy}: transmitted wavevector vanishes")]
    DegenerateEnergy { energy: f64 },

    #[error("expression error at byte {position}: {message}")]
    Expression { position: usize, message: String },
}

impl Error {
    /// Short machine-readable tag, used in CSV status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotFound { .. } => "NotFound",
            Error::NonPositiveMass { .. } => "NonPositiveMass",
            Error::Domain { .. } => "DomainError",
            Error::Range { .. } => "RangeError",
            Error::Discontinuity { .. } => "DiscontinuityError",
            Error::NonFinite { .. } => "NonFinite",
            Error::Quadrature { .. } => "QuadratureError",
            Error::GridMismatch(_) => "GridMismatch",
            Error::Solver { .. } => "SolverError",
            Error::NonPositiveEnergy { .. } => "NonPositiveEnergy",
            Error::DegenerateEnergy { .. } => "DegenerateEnergy",
            Error::Expression { .. } => "ExpressionError",
        }
    }
}
