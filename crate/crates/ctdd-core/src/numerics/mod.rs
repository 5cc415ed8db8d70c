//! Numerical machinery shared by the analytic engine: jet (truncated
//! Taylor) arithmetic, Gauss–Legendre quadrature, and special functions.

pub mod finite_diff;
pub mod jet;
pub mod quad;
pub mod special;

pub use jet::Jet;
pub use quad::{integrate, integrate_jet, QuadratureRule, DEFAULT_TOL};
pub use special::{alzer_constant, binomial, gamma_ccdf, gamma_cdf, theta, theta_series};
