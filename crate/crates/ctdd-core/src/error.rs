use thiserror::Error;

/// Errors produced by the model, numerics, analytic and simulation layers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A configuration value violates one of the model invariants.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature did not converge after {max_depth} subdivisions; \
         worst panel [{panel_lo}, {panel_hi}] with error estimate {error:e}"
    )]
    QuadratureNonConvergence {
        panel_lo: f64,
        panel_hi: f64,
        error: f64,
        max_depth: usize,
    },

    /// A numerical routine was asked for something outside its supported range.
    #[error("numerical domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
