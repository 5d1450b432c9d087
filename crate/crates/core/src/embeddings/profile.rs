//! Tabulated representation distance for bulk evaluation.
//!
//! By homogeneity `I(s, w) = (s + |w|)^β J(a)` with `a = |w| / (s + |w|)` and
//! `J(a) = I(1 - a, a)`, so a single table of `J` over `[0, 1]` gives the
//! distance everywhere. Each table cell carries an interpolation margin taken
//! from the midpoint defect on a grid twice as coarse, and membership tests
//! that land inside the margin fall back to direct quadrature.

use rayon::prelude::*;
use serde::Serialize;

use super::repr::ReprDistance;
use crate::error::{Error, Result};
use crate::group::EmbeddingParams;
use crate::integrate::lambda::normalized_integral;

pub const DEFAULT_CELLS: usize = 512;

#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    params: EmbeddingParams,
    tol: f64,
    /// `J` at `a = k / (2 cells)`.
    values: Vec<f64>,
    /// Absolute margin for each fine interval.
    margins: Vec<f64>,
}

impl RadialProfile {
    pub fn build(params: EmbeddingParams, cells: usize, tol: f64) -> Result<Self> {
        super::check_epsilon(&params)?;
        if cells == 0 {
            return Err(Error::InvalidParameter(
                "profile needs at least one cell".into(),
            ));
        }
        let fine = 2 * cells;
        let results: Vec<_> = (0..=fine)
            .into_par_iter()
            .map(|k| {
                let a = k as f64 / fine as f64;
                normalized_integral(1.0 - a, a, params.p(), params.epsilon(), tol)
            })
            .collect::<Result<_>>()?;
        let values: Vec<f64> = results.iter().map(|r| r.value).collect();
        let quad = results.iter().map(|r| r.abs_error).fold(0.0, f64::max);
        let mut margins = vec![0.0; fine];
        for c in 0..cells {
            let (l, m, r) = (values[2 * c], values[2 * c + 1], values[2 * c + 2]);
            let defect = (m - 0.5 * (l + r)).abs();
            let margin = 2.0 * defect + 2.0 * quad;
            margins[2 * c] = margin;
            margins[2 * c + 1] = margin;
        }
        Ok(RadialProfile {
            params,
            tol,
            values,
            margins,
        })
    }

    pub fn params(&self) -> &EmbeddingParams {
        &self.params
    }

    /// Lower bound for `J` over `[0, 1]`.
    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .zip(self.margins.iter().chain(self.margins.last()))
            .map(|(v, m)| v - m)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest margin relative to the smallest tabulated value.
    pub fn max_relative_margin(&self) -> f64 {
        let floor = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        self.margins.iter().cloned().fold(0.0, f64::max) / floor
    }

    fn lookup(&self, a: f64) -> (f64, f64) {
        let fine = self.margins.len();
        let t = (a.clamp(0.0, 1.0) * fine as f64).min(fine as f64 - 1e-9);
        let k = (t.floor() as usize).min(fine - 1);
        let f = t - k as f64;
        (
            self.values[k] * (1.0 - f) + self.values[k + 1] * f,
            self.margins[k],
        )
    }

    /// Interpolated `I(s, w)` and its margin.
    pub fn integral(&self, s: f64, w: f64) -> (f64, f64) {
        let total = s + w.abs();
        if total == 0.0 {
            return (0.0, 0.0);
        }
        let beta = 0.5 * self.params.integrability_gap();
        let scale = total.powf(beta);
        let (j, m) = self.lookup(w.abs() / total);
        (scale * j, scale * m)
    }

    /// Interpolated distance `(1-ε)^{1/p} I^{1/p}` from the identity.
    pub fn distance(&self, s: f64, w: f64) -> f64 {
        let p = self.params.p();
        ((1.0 - self.params.epsilon()) * self.integral(s, w).0).powf(1.0 / p)
    }

    /// Whether the point `(s, w)` lies within `radius` of the identity; cases
    /// inside the interpolation margin are settled by quadrature.
    pub fn within(&self, s: f64, w: f64, radius: f64) -> Result<bool> {
        let target = radius.powf(self.params.p()) / (1.0 - self.params.epsilon());
        let (value, margin) = self.integral(s, w);
        if value + margin < target {
            return Ok(true);
        }
        if value - margin > target {
            return Ok(false);
        }
        let exact = ReprDistance::new(self.params, self.tol)?.from_sw(s, w)?;
        Ok(exact.value <= radius)
    }
}
