//! Push-forward volume ratio of representation-metric balls in `H_1`.
//!
//! The distance from the identity is homogeneous of degree `1-ε` under the
//! dilations, which scale Lebesgue measure on `H_1` by `θ⁴`, so
//! `vol{d ≤ 2r} / vol{d ≤ r} = 2^{4/(1-ε)}` for every `r`.

use rand::Rng;
use serde::Serialize;

use crate::embeddings::profile::{RadialProfile, DEFAULT_CELLS};
use crate::error::{Error, Result};
use crate::group::EmbeddingParams;
use crate::integrate::mc::{run_chunks, McConfig, Moments};
use crate::integrate::rng::{stream, stream_id};

/// Fewest hits accepted for either volume.
pub const MIN_HITS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub radius: f64,
    pub volume: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureRatio {
    pub ratio: f64,
    pub std_error: f64,
    /// `2^{4/(1-ε)}`.
    pub expected: f64,
    pub inner: VolumeEstimate,
    pub outer: VolumeEstimate,
}

/// Volume of `{q ∈ H_1 : d(q, e) ≤ radius}`, sampled uniformly in a box that
/// contains it. `component` selects the random stream.
fn volume(
    profile: &RadialProfile,
    radius: f64,
    samples: u64,
    seed: u64,
    component: u32,
    cfg: &McConfig,
) -> Result<VolumeEstimate> {
    let params = profile.params();
    let beta = 0.5 * params.integrability_gap();
    let j_min = profile.min_value();
    // d ≤ radius implies s + |w| ≤ t_max
    let t_max = (radius.powf(params.p()) / ((1.0 - params.epsilon()) * j_min)).powf(1.0 / beta);
    let half_uv = t_max.sqrt();
    let box_volume = (2.0 * half_uv) * (2.0 * half_uv) * (2.0 * t_max);
    let chunk_cfg = McConfig { samples, ..*cfg };
    let failure = std::sync::Mutex::new(None);
    let parts = run_chunks(&[samples], &chunk_cfg, |_, k, len| {
        let mut rng = stream(seed, stream_id(component, k));
        let mut m = Moments::default();
        for _ in 0..len {
            let u = half_uv * (2.0 * rng.random::<f64>() - 1.0);
            let v = half_uv * (2.0 * rng.random::<f64>() - 1.0);
            let w = t_max * (2.0 * rng.random::<f64>() - 1.0);
            let hit = match profile.within(u * u + v * v, w, radius) {
                Ok(h) => h,
                Err(e) => {
                    failure
                        .lock()
                        .expect("no panics while held")
                        .get_or_insert(e);
                    false
                }
            };
            m.push(if hit { 1.0 } else { 0.0 });
        }
        m
    });
    if let Some(e) = failure.into_inner().expect("no panics while held") {
        return Err(e);
    }
    let m = parts[0];
    let hits = m.sum().round();
    if hits < MIN_HITS {
        return Err(Error::Degenerate(format!(
            "only {hits} hits for radius {radius}"
        )));
    }
    let frac = m.mean;
    let se = (frac * (1.0 - frac) / samples as f64).sqrt();
    Ok(VolumeEstimate {
        radius,
        volume: box_volume * frac,
        std_error: box_volume * se,
        hits: hits as u64,
        samples,
    })
}

/// Monte Carlo estimate of `vol{d ≤ 2r} / vol{d ≤ r}` around the identity of
/// `H_1`, half the samples for each volume.
pub fn measure_ratio_check(
    params: &EmbeddingParams,
    r: f64,
    cfg: &McConfig,
) -> Result<MeasureRatio> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {r}"
        )));
    }
    if cfg.samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let profile = RadialProfile::build(*params, DEFAULT_CELLS, 1e-9)?;
    measure_ratio_with_profile(&profile, r, cfg)
}

pub fn measure_ratio_with_profile(
    profile: &RadialProfile,
    r: f64,
    cfg: &McConfig,
) -> Result<MeasureRatio> {
    let half = cfg.samples / 2;
    let inner = volume(profile, r, half, cfg.seed, 0, cfg)?;
    let outer = volume(profile, 2.0 * r, cfg.samples - half, cfg.seed, 1, cfg)?;
    let ratio = outer.volume / inner.volume;
    let rel = (inner.std_error / inner.volume).hypot(outer.std_error / outer.volume);
    let expected = 2f64.powf(4.0 / profile.params().snowflake_exponent());
    Ok(MeasureRatio {
        ratio,
        std_error: ratio * rel,
        expected,
        inner,
        outer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_near_expected_at_small_budget() {
        let params = EmbeddingParams::from_p_epsilon(2.5, 0.5).unwrap();
        let profile = RadialProfile::build(params, 64, 1e-9).unwrap();
        let m = measure_ratio_with_profile(&profile, 1.0, &McConfig::new(100_000, 7)).unwrap();
        assert!(
            (m.ratio - 256.0).abs() < 5.0 * m.std_error + 0.05 * 256.0,
            "{m:?}"
        );
    }

    #[test]
    fn rejects_bad_radius() {
        let params = EmbeddingParams::default();
        assert!(measure_ratio_check(&params, 0.0, &McConfig::new(1000, 1)).is_err());
    }
}
