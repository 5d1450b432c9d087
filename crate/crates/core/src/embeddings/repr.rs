//! Distances of the Schrödinger cocycle.

use serde::Serialize;

use super::check_epsilon;
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};
use crate::integrate::lambda::{lambda_integral, QuadratureResult, DEFAULT_TOL};

/// `(s, |w|)` of `x⁻¹y`, computed so that swapping `x` and `y` gives
/// bitwise-identical output.
pub fn relative_sw(x: &GroupPoint, y: &GroupPoint) -> Result<(f64, f64)> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    let mut s = 0.0;
    let mut a = 0.0;
    let mut b = 0.0;
    for j in 0..x.n() {
        let du = y.u()[j] - x.u()[j];
        let dv = y.v()[j] - x.v()[j];
        s += du * du + dv * dv;
        a += x.u()[j] * y.v()[j];
        b += x.v()[j] * y.u()[j];
    }
    let w = (y.w() - x.w()) + 2.0 * (a - b);
    Ok((s, w.abs()))
}

/// `d(x, y) = ‖Q(x) - Q(y)‖_p` as a metric functional on `H_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReprDistance {
    pub params: EmbeddingParams,
    pub tol: f64,
}

impl ReprDistance {
    pub fn new(params: EmbeddingParams, tol: f64) -> Result<Self> {
        check_epsilon(&params)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(ReprDistance { params, tol })
    }

    pub fn with_default_tol(params: EmbeddingParams) -> Result<Self> {
        ReprDistance::new(params, DEFAULT_TOL)
    }

    pub fn distance(&self, x: &GroupPoint, y: &GroupPoint) -> Result<QuadratureResult> {
        let (s, w) = relative_sw(x, y)?;
        self.from_sw(s, w)
    }

    /// Distance from the identity to any point with horizontal square `s` and
    /// central coordinate `w`.
    pub fn from_sw(&self, s: f64, w: f64) -> Result<QuadratureResult> {
        let p = self.params.p();
        let eps = self.params.epsilon();
        let r = lambda_integral(s, w, p, eps, self.tol)?;
        Ok(root_of_integral(&r, p, eps))
    }
}

/// `(1-ε)^{1/p} I^{1/p}` with first-order error propagation.
pub(crate) fn root_of_integral(r: &QuadratureResult, p: f64, eps: f64) -> QuadratureResult {
    if r.degenerate || r.value == 0.0 {
        return QuadratureResult {
            value: 0.0,
            abs_error: 0.0,
            ..*r
        };
    }
    let c = (1.0 - eps).powf(1.0 / p);
    let value = c * r.value.powf(1.0 / p);
    QuadratureResult {
        value,
        abs_error: value / (p * r.value) * r.abs_error,
        ..*r
    }
}

pub fn repr_distance(
    x: &GroupPoint,
    y: &GroupPoint,
    params: &EmbeddingParams,
    tol: f64,
) -> Result<QuadratureResult> {
    ReprDistance::new(*params, tol)?.distance(x, y)
}

/// The two structural terms
/// `s^{(1-ε)/2} (ε^{-1/p} + (1-ε)^{-1/p})` and `|w|^{(1-ε)/2} (1-ε)^{-1/p}`
/// at `z = x⁻¹y`, whose sum is comparable to the representation distance.
pub fn repr_envelope(z: &GroupPoint, params: &EmbeddingParams) -> (f64, f64) {
    let p = params.p();
    let eps = params.epsilon();
    let half = 0.5 * (1.0 - eps);
    let s = z.horizontal_sq();
    let term_uv = s.powf(half) * (eps.powf(-1.0 / p) + (1.0 - eps).powf(-1.0 / p));
    let term_w = z.w().abs().powf(half) * (1.0 - eps).powf(-1.0 / p);
    (term_uv, term_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_unit_value() {
        let params = EmbeddingParams::from_p_epsilon(2.0, 0.5).unwrap();
        let d = repr_distance(
            &GroupPoint::h1(0.0, 0.0, 0.0),
            &GroupPoint::h1(0.0, 0.0, 1.0),
            &params,
            1e-10,
        )
        .unwrap();
        let expect = 0.5f64.sqrt() * (2.0 * std::f64::consts::PI).sqrt().sqrt();
        assert!((d.value - expect).abs() < 1e-9);
        assert!((d.value - 1.119_515_1).abs() < 1e-6);
    }

    #[test]
    fn zero_on_diagonal() {
        let params = EmbeddingParams::default();
        let x = GroupPoint::new(vec![1.0, 2.0], vec![3.0, 4.0], 5.0).unwrap();
        let d = repr_distance(&x, &x, &params, 1e-8).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn bitwise_symmetric() {
        let x = GroupPoint::new(vec![0.3, -1.7], vec![2.2, 0.1], 5.3).unwrap();
        let y = GroupPoint::new(vec![-0.9, 0.4], vec![1.1, -0.6], -2.0).unwrap();
        assert_eq!(relative_sw(&x, &y).unwrap(), relative_sw(&y, &x).unwrap());
        let (s, w) = relative_sw(&x, &y).unwrap();
        let z = x.left_difference(&y).unwrap();
        assert!((s - z.horizontal_sq()).abs() < 1e-12 && (w - z.w().abs()).abs() < 1e-12);
    }

    #[test]
    fn envelope_examples() {
        let params = EmbeddingParams::from_p_epsilon(2.0, 0.5).unwrap();
        assert_eq!(
            repr_envelope(&GroupPoint::h1(0.0, 0.0, 0.0), &params),
            (0.0, 0.0)
        );
        let (uv, w) = repr_envelope(&GroupPoint::h1(1.0, 0.0, 0.0), &params);
        assert!((uv - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(w, 0.0);
    }
}
