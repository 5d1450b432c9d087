//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the run seed and addressed by a
//! 64-bit stream id, so a chunk of samples can be regenerated independently of
//! which worker draws it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream id for `(component, chunk)`.
pub fn stream_id(component: u32, chunk: u32) -> u64 {
    ((component as u64) << 32) | chunk as u64
}

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Uniform on the open interval `(0, 1)`.
#[inline]
pub fn open01<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Standard normal via Box–Muller (one variate per call).
#[inline]
pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1 = open01(rng);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
