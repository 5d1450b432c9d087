//! Dependence of the representation distortion on `ε`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::uniform_pairs;
use crate::embeddings::{ReprDistance, EPSILON_MIN};
use crate::error::{Error, Result};
use crate::group::EmbeddingParams;
use crate::integrate::lambda::DEFAULT_TOL;
use crate::lattice::least_squares;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub pairs: usize,
    /// Pairs are drawn uniformly in `B_N(0, radius) ⊂ H_1`.
    pub radius: f64,
    pub seed: u64,
}

impl Default for SweepSample {
    fn default() -> Self {
        SweepSample {
            pairs: 200,
            radius: 10.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Extremes of `d_repr / d_N^{1-ε}` over the pair sample.
    pub sup_ratio: f64,
    pub inf_ratio: f64,
    /// Largest quadrature error among the sampled distances.
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub p: f64,
    pub sample: SweepSample,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `ln(sup/inf)` against `ln(1/ε)`.
    pub slope: f64,
    pub intercept: f64,
    /// `sup_ratio` never decreases as `ε` decreases.
    pub sup_monotone: bool,
}

fn is_geometric(eps: &[f64]) -> bool {
    let q = eps[1] / eps[0];
    q != 1.0
        && eps
            .windows(2)
            .all(|w| ((w[1] / w[0]) / q - 1.0).abs() < 1e-9)
}

pub fn epsilon_sweep(eps_list: &[f64], p: f64, sample: &SweepSample) -> Result<SweepReport> {
    if eps_list.len() < 4 || !is_geometric(eps_list) {
        return Err(Error::InvalidParameter(
            "need at least four epsilon values on a geometric grid".into(),
        ));
    }
    if let Some(e) = eps_list
        .iter()
        .find(|&&e| !(EPSILON_MIN..=0.5).contains(&e))
    {
        return Err(Error::InvalidParameter(format!(
            "epsilon {e} outside [{EPSILON_MIN}, 1/2]"
        )));
    }
    let pairs = uniform_pairs(1, sample.radius, sample.pairs, sample.seed)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let params = EmbeddingParams::from_p_epsilon(p, eps)?;
        let metric = ReprDistance::new(params, DEFAULT_TOL)?;
        let vals: Vec<(f64, f64)> = pairs
            .par_iter()
            .map(|(x, y)| {
                let d = metric.distance(x, y)?;
                let base = x.koranyi_distance(y)?.powf(1.0 - eps);
                Ok((d.value / base, d.abs_error))
            })
            .collect::<Result<_>>()?;
        rows.push(SweepRow {
            epsilon: eps,
            sup_ratio: vals.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max),
            inf_ratio: vals.iter().map(|v| v.0).fold(f64::INFINITY, f64::min),
            max_abs_error: vals.iter().map(|v| v.1).fold(0.0, f64::max),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.epsilon).ln()).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|r| (r.sup_ratio / r.inf_ratio).ln())
        .collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let mut by_eps: Vec<&SweepRow> = rows.iter().collect();
    by_eps.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let sup_monotone = by_eps.windows(2).all(|w| w[1].sup_ratio >= w[0].sup_ratio);
    Ok(SweepReport {
        p,
        sample: *sample,
        rows,
        slope,
        intercept,
        sup_monotone,
    })
}

/// `ε = 2^{-k}` for `k` in `from..=to`.
pub fn dyadic_epsilons(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_or_irregular_grids() {
        let s = SweepSample {
            pairs: 10,
            radius: 2.0,
            seed: 1,
        };
        assert!(epsilon_sweep(&[0.5, 0.25, 0.125], 2.0, &s).is_err());
        assert!(epsilon_sweep(&[0.5, 0.25, 0.2, 0.1], 2.0, &s).is_err());
        assert!(epsilon_sweep(&[0.8, 0.4, 0.2, 0.1], 2.0, &s).is_err());
    }

    #[test]
    fn small_sweep_runs() {
        let s = SweepSample {
            pairs: 20,
            radius: 2.0,
            seed: 1,
        };
        let r = epsilon_sweep(&dyadic_epsilons(1, 4), 2.0, &s).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.rows.iter().all(|row| row.sup_ratio >= row.inf_ratio));
        assert!(r.slope > 0.0);
    }
}
