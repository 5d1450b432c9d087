//! The two snowflake embeddings of `H_n` into `L_p`.
//!
//! * [`kernel`]: `T(x)(z) = N(x⁻¹z)^{-α} - N(z)^{-α}` and its scaled version
//!   `S = p(1-ε)^{1/p} T`, with distances estimated by Monte Carlo.
//! * [`repr`]: the Schrödinger cocycle `Q`, whose distances are
//!   `(1-ε)^{1/p} I(s, w)^{1/p}` at `x⁻¹y` and are computed by quadrature.
//!
//! Operations accept `ε ∈ [10⁻⁴, 1 - 10⁻⁴]`.

pub mod kernel;
pub mod matrix;
pub mod profile;
pub mod repr;
pub mod schrodinger;

pub use kernel::{kernel_distance, kernel_eval, KernelFunction};
pub use matrix::{distance_matrix, DistanceMethod, DistanceRow};
pub use profile::RadialProfile;
pub use repr::{repr_distance, repr_envelope, ReprDistance};
pub use schrodinger::{schrodinger_pairing_oracle, GridSpec};

use crate::error::{Error, Result};
use crate::group::EmbeddingParams;

pub const EPSILON_MIN: f64 = 1e-4;
pub const EPSILON_MAX: f64 = 1.0 - 1e-4;

pub(crate) fn check_epsilon(params: &EmbeddingParams) -> Result<()> {
    let eps = params.epsilon();
    if (EPSILON_MIN..=EPSILON_MAX).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon = {eps} lies outside the supported window [{EPSILON_MIN}, {EPSILON_MAX}]"
        )))
    }
}
