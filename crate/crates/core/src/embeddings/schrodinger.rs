//! Grid check of the Schrödinger pairing on `L_2(R)`.
//!
//! With `g(x) = e^{-x²/2}` and
//! `σ_λ(u,v,w) g(x) = e^{iλ(w - 2uv) + 2i√λ v x} g(x - 2√λ u)`,
//! the closed form is `‖g - σ_λ g‖² = 2√π (1 - e^{-λ(u²+v²)} cos(λw))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SPACING: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// The grid covers `[-half_width, half_width]`.
    pub half_width: f64,
    pub spacing: f64,
}

impl GridSpec {
    /// Smallest admissible width plus one, at spacing `0.005`.
    pub fn covering(lambda: f64, u: f64, v: f64) -> GridSpec {
        GridSpec {
            half_width: min_half_width(lambda, u, v) + 1.0,
            spacing: 0.005,
        }
    }
}

fn min_half_width(lambda: f64, u: f64, v: f64) -> f64 {
    8.0 + 2.0 * lambda.sqrt() * (u.abs() + v.abs())
}

/// The closed form `2√π (1 - e^{-λ(u²+v²)} cos(λw))`.
pub fn pairing_closed_form(lambda: f64, u: f64, v: f64, w: f64) -> f64 {
    2.0 * std::f64::consts::PI.sqrt()
        * crate::integrate::lambda::gap(lambda * (u * u + v * v), lambda * w)
}

/// Trapezoid value of `∫ |g(x) - σ_λ(u,v,w) g(x)|² dx`.
pub fn schrodinger_pairing_oracle(
    lambda: f64,
    u: f64,
    v: f64,
    w: f64,
    grid: &GridSpec,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(u.is_finite() && v.is_finite() && w.is_finite()) {
        return Err(Error::InvalidParameter("coordinates must be finite".into()));
    }
    let need = min_half_width(lambda, u, v);
    if !(grid.spacing > 0.0 && grid.spacing <= MAX_SPACING) || grid.half_width < need {
        return Err(Error::InvalidParameter(format!(
            "grid too coarse: need spacing in (0, {MAX_SPACING}] and half-width >= {need:.3}, got {:?}",
            grid
        )));
    }
    let shift = 2.0 * lambda.sqrt() * u;
    let freq = 2.0 * lambda.sqrt() * v;
    // Poisson-summation aliasing of a unit-width Gaussian modulated at `freq`
    let alias = std::f64::consts::TAU / grid.spacing - freq.abs();
    if alias * alias / 4.0 < 40.0 {
        return Err(Error::InvalidParameter(format!(
            "grid too coarse for oscillation frequency {freq:.3} at spacing {}",
            grid.spacing
        )));
    }
    let phase0 = lambda * (w - 2.0 * u * v);
    let steps = (2.0 * grid.half_width / grid.spacing).ceil() as usize;
    let h = 2.0 * grid.half_width / steps as f64;
    let integrand = |x: f64| {
        let g0 = (-0.5 * x * x).exp();
        let g1 = (-0.5 * (x - shift) * (x - shift)).exp();
        g0 * g0 + g1 * g1 - 2.0 * g0 * g1 * (phase0 + freq * x).cos()
    };
    let mut sum = 0.5 * (integrand(-grid.half_width) + integrand(grid.half_width));
    for k in 1..steps {
        sum += integrand(-grid.half_width + k as f64 * h);
    }
    Ok(sum * h)
}
