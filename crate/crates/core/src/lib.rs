//! Snowflake embeddings of the Heisenberg group into `L_p`.
//!
//! Two constructions are provided: a kernel map `x ↦ N(x⁻¹·)^{-α} - N(·)^{-α}`
//! whose `L_p` distances are estimated by importance-sampled Monte Carlo, and a
//! Schrödinger-representation cocycle whose distances reduce to a
//! one-dimensional integral over the representation parameter. The
//! [`analysis`] module measures distortion, doubling behaviour and
//! `ε`-dependence of both against the Korányi and word metrics.

pub mod analysis;
pub mod cli;
pub mod embeddings;
pub mod error;
pub mod group;
pub mod integrate;
pub mod lattice;

pub use error::{Error, Result};
pub use group::{EmbeddingParams, GroupPoint};
pub use lattice::{LatticeElement, WordBall};
