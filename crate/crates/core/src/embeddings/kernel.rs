//! The kernel map `x ↦ T(x)` into `L_p(R^{2n+1})`.

use super::check_epsilon;
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};
use crate::integrate::mc::{mc_kernel_norm, McConfig, McEstimate};

/// `T(x)(z) = N(x⁻¹z)^{-α} - N(z)^{-α}`.
///
/// At `z = x` the value is `+∞`, at `z = e` it is `-∞`; both singularities are
/// integrable. `T(e) ≡ 0`, including at `z = e`.
pub fn kernel_eval(x: &GroupPoint, z: &GroupPoint, params: &EmbeddingParams) -> Result<f64> {
    if x.n() != params.n() || z.n() != params.n() {
        return Err(Error::DimensionMismatch {
            left: x.n().max(z.n()),
            right: params.n(),
        });
    }
    if x.is_identity() {
        return Ok(0.0);
    }
    let a = params.alpha();
    let to_x = x.left_difference(z)?.koranyi_norm();
    let to_e = z.koranyi_norm();
    Ok(match (to_x == 0.0, to_e == 0.0) {
        (true, _) => f64::INFINITY,
        (_, true) => f64::NEG_INFINITY,
        _ => to_x.powf(-a) - to_e.powf(-a),
    })
}

/// `z ↦ T(x)(z)` for a fixed basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    pub basepoint: GroupPoint,
    pub params: EmbeddingParams,
}

impl KernelFunction {
    pub fn new(basepoint: GroupPoint, params: EmbeddingParams) -> Result<Self> {
        if basepoint.n() != params.n() {
            return Err(Error::DimensionMismatch {
                left: basepoint.n(),
                right: params.n(),
            });
        }
        Ok(KernelFunction { basepoint, params })
    }

    pub fn eval(&self, z: &GroupPoint) -> Result<f64> {
        kernel_eval(&self.basepoint, z, &self.params)
    }

    /// `S(x)(z) = p(1-ε)^{1/p} T(x)(z)`.
    pub fn eval_scaled(&self, z: &GroupPoint) -> Result<f64> {
        Ok(scale(&self.params) * self.eval(z)?)
    }

    /// Monte Carlo estimate of `‖T(x)‖_p^p`.
    pub fn norm_pow(&self, cfg: &McConfig) -> Result<McEstimate> {
        mc_kernel_norm(&self.basepoint, &self.params, cfg)
    }
}

/// `p(1-ε)^{1/p}`.
pub fn scale(params: &EmbeddingParams) -> f64 {
    params.p() * (1.0 - params.epsilon()).powf(1.0 / params.p())
}

fn lex_le(a: &GroupPoint, b: &GroupPoint) -> bool {
    let ka = a.to_interleaved();
    let kb = b.to_interleaved();
    ka.iter()
        .chain([a.w()].iter())
        .partial_cmp(kb.iter().chain([b.w()].iter()))
        != Some(std::cmp::Ordering::Greater)
}

/// `‖S(x) - S(y)‖_p = p(1-ε)^{1/p} ‖T(y⁻¹x)‖_p`, with a delta-method standard
/// error. The pair is put in a canonical order first, so the result is
/// bitwise symmetric in `(x, y)`.
pub fn kernel_distance(
    x: &GroupPoint,
    y: &GroupPoint,
    params: &EmbeddingParams,
    cfg: &McConfig,
) -> Result<McEstimate> {
    check_epsilon(params)?;
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    if x == y {
        return Ok(McEstimate {
            mean: 0.0,
            std_error: 0.0,
            samples: 0,
            seed: cfg.seed,
        });
    }
    let (a, b) = if lex_le(x, y) { (x, y) } else { (y, x) };
    let arg = b.left_difference(a)?;
    let m = mc_kernel_norm(&arg, params, cfg)?;
    let p = params.p();
    let c = scale(params);
    let root = m.mean.max(0.0).powf(1.0 / p);
    let se = if m.mean > 0.0 {
        c * root / (p * m.mean) * m.std_error
    } else {
        f64::INFINITY
    };
    Ok(McEstimate {
        mean: c * root,
        std_error: se,
        samples: m.samples,
        seed: m.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> EmbeddingParams {
        EmbeddingParams::from_p_epsilon(2.5, 0.5).unwrap()
    }

    #[test]
    fn identity_basepoint_is_zero() {
        let e = GroupPoint::identity(2);
        for z in [
            GroupPoint::identity(2),
            GroupPoint::new(vec![1.0, 2.0], vec![0.0, -1.0], 3.0).unwrap(),
        ] {
            assert_eq!(kernel_eval(&e, &z, &params()).unwrap(), 0.0);
        }
    }

    #[test]
    fn singularities_are_signed() {
        let x = GroupPoint::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.5).unwrap();
        assert_eq!(kernel_eval(&x, &x, &params()).unwrap(), f64::INFINITY);
        assert_eq!(
            kernel_eval(&x, &GroupPoint::identity(2), &params()).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn sign_follows_nearer_singularity() {
        let x = GroupPoint::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        let near_x = GroupPoint::new(vec![0.9, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        let near_e = GroupPoint::new(vec![0.1, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        assert!(kernel_eval(&x, &near_x, &params()).unwrap() > 0.0);
        assert!(kernel_eval(&x, &near_e, &params()).unwrap() < 0.0);
    }

    #[test]
    fn lower_bound_near_origin() {
        let p = params();
        let x = GroupPoint::new(vec![0.4, -0.3], vec![0.2, 0.5], 0.7).unwrap();
        let nx = x.koranyi_norm();
        for k in 1..50 {
            let t = k as f64 / 50.0;
            let z = GroupPoint::new(vec![0.1 * t, 0.05], vec![-0.02, 0.03 * t], 0.01 * t).unwrap();
            if z.koranyi_norm() < nx / 3.0 {
                let tz = kernel_eval(&x, &z, &p).unwrap().abs();
                assert!(tz >= 0.5 * z.koranyi_norm().powf(-p.alpha()));
            }
        }
    }

    #[test]
    fn distance_is_zero_on_diagonal_and_symmetric_inputs() {
        let p = params();
        let x = GroupPoint::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        let d = kernel_distance(&x, &x, &p, &McConfig::new(10_000, 3)).unwrap();
        assert_eq!((d.mean, d.std_error), (0.0, 0.0));
        let y = GroupPoint::new(vec![0.0, 1.0], vec![0.5, 0.0], -0.3).unwrap();
        let cfg = McConfig::new(20_000, 3);
        assert_eq!(
            kernel_distance(&x, &y, &p, &cfg).unwrap(),
            kernel_distance(&y, &x, &p, &cfg).unwrap()
        );
    }

    #[test]
    fn refuses_epsilon_outside_window() {
        let p = EmbeddingParams::from_p_epsilon(2.5, 5e-5).unwrap();
        let x = GroupPoint::new(vec![1.0, 0.0], vec![0.0, 0.0], 0.0).unwrap();
        assert!(
            kernel_distance(&x, &GroupPoint::identity(2), &p, &McConfig::new(10_000, 1)).is_err()
        );
    }
}
