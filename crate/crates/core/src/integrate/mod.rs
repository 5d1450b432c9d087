//! Numerical integration: the representation-parameter integral, exact
//! Korányi-ball integrals, and importance-sampled Monte Carlo for kernel norms.

pub mod ball;
mod gk;
pub mod lambda;
pub mod mc;
pub mod rng;

pub use ball::{ball_integral_exact, ball_volume};
pub use lambda::{lambda_integral, QuadratureResult};
pub use mc::{McConfig, McEstimate};
