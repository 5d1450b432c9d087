//! Experiments on the embeddings: distortion, doubling, the push-forward
//! measure ratio, `ε`-sharpness and the lattice Poincaré-type inequality.

pub mod distortion;
pub mod doubling;
pub mod ln_inequality;
pub mod measure;
pub mod sample;
pub mod sweep;

pub use distortion::{distortion_report, DistortionReport, Witness};
pub use doubling::{doubling_estimate, h1_net, image_doubling, DoublingReport, DoublingTrial};
pub use ln_inequality::{
    ln_analytic_sum, ln_inequality_eval, ln_integral_comparison, LnInequality,
};
pub use measure::{measure_ratio_check, MeasureRatio};
pub use sweep::{epsilon_sweep, SweepReport, SweepRow, SweepSample};
