//! The continuous Heisenberg group `H_n` in `(u, v, w)` coordinates.
//!
//! The product is
//! `(u,v,w)(u',v',w') = (u+u', v+v', w+w' - 2<u,v'> + 2<v,u'>)`,
//! the identity is the origin and the inverse is negation. The Korányi gauge
//! `N(u,v,w) = ((|u|^2+|v|^2)^2 + w^2)^{1/4}` induces the left-invariant metric
//! `d_N(x,y) = N(x^{-1}y)`, and the dilations `(θu, θv, θ²w)` scale it by `θ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for floating-point comparisons of group elements.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr")]
pub struct GroupPoint {
    u: Vec<f64>,
    v: Vec<f64>,
    w: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Split { u: Vec<f64>, v: Vec<f64>, w: f64 },
    Interleaved { x: Vec<f64> },
}

impl TryFrom<PointRepr> for GroupPoint {
    type Error = Error;

    fn try_from(r: PointRepr) -> Result<Self> {
        match r {
            PointRepr::Split { u, v, w } => GroupPoint::new(u, v, w),
            PointRepr::Interleaved { x } => GroupPoint::from_interleaved(&x),
        }
    }
}

impl GroupPoint {
    pub fn new(u: Vec<f64>, v: Vec<f64>, w: f64) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        if u.is_empty() {
            return Err(Error::InvalidParameter(
                "ambient index n must be at least 1".into(),
            ));
        }
        if !(u.iter().chain(v.iter()).all(|c| c.is_finite()) && w.is_finite()) {
            return Err(Error::InvalidParameter("coordinates must be finite".into()));
        }
        Ok(GroupPoint { u, v, w })
    }

    /// Point of `H_1`.
    pub fn h1(u: f64, v: f64, w: f64) -> Self {
        GroupPoint {
            u: vec![u],
            v: vec![v],
            w,
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "ambient index must be at least 1");
        GroupPoint {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Squared horizontal norm `|u|^2 + |v|^2`.
    pub fn horizontal_sq(&self) -> f64 {
        self.u.iter().chain(self.v.iter()).map(|c| c * c).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.w == 0.0 && self.u.iter().chain(self.v.iter()).all(|&c| c == 0.0)
    }

    pub fn max_abs_coord(&self) -> f64 {
        self.u
            .iter()
            .chain(self.v.iter())
            .chain(std::iter::once(&self.w))
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn multiply(&self, other: &GroupPoint) -> Result<GroupPoint> {
        check_dims(self, other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupPoint) -> GroupPoint {
        let u: Vec<f64> = self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect();
        let v: Vec<f64> = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        let uv: f64 = self.u.iter().zip(&other.v).map(|(a, b)| a * b).sum();
        let vu: f64 = self.v.iter().zip(&other.u).map(|(a, b)| a * b).sum();
        GroupPoint {
            u,
            v,
            w: self.w + other.w - 2.0 * uv + 2.0 * vu,
        }
    }

    pub fn inverse(&self) -> GroupPoint {
        GroupPoint {
            u: self.u.iter().map(|c| -c).collect(),
            v: self.v.iter().map(|c| -c).collect(),
            w: -self.w,
        }
    }

    /// `x^{-1} y`, the element whose gauge is `d_N(x, y)`.
    pub fn left_difference(&self, other: &GroupPoint) -> Result<GroupPoint> {
        self.inverse().multiply(other)
    }

    pub fn dilate(&self, theta: f64) -> Result<GroupPoint> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {theta}"
            )));
        }
        Ok(self.dilate_unchecked(theta))
    }

    pub(crate) fn dilate_unchecked(&self, theta: f64) -> GroupPoint {
        GroupPoint {
            u: self.u.iter().map(|c| theta * c).collect(),
            v: self.v.iter().map(|c| theta * c).collect(),
            w: theta * theta * self.w,
        }
    }

    pub fn koranyi_norm(&self) -> f64 {
        koranyi_gauge(self.horizontal_sq(), self.w)
    }

    pub fn koranyi_distance(&self, other: &GroupPoint) -> Result<f64> {
        Ok(self.left_difference(other)?.koranyi_norm())
    }

    /// Canonical embedding of an `H_1` point into `H_n`, zero-padding the
    /// horizontal coordinates.
    pub fn embed_h1(&self, n: usize) -> Result<GroupPoint> {
        if self.n() != 1 {
            return Err(Error::InvalidParameter(format!(
                "embed_h1 expects an H_1 point, got n = {}",
                self.n()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "target ambient index must be at least 1".into(),
            ));
        }
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        u[0] = self.u[0];
        v[0] = self.v[0];
        Ok(GroupPoint { u, v, w: self.w })
    }

    /// Build from interleaved coordinates `(x_1, ..., x_{2n}, x_{2n+1})`, with
    /// `u_j = x_{2j-1}` and `v_j = x_{2j}`.
    ///
    /// Under this identification the product `(π(x)+π(y), x_{2n+1}+y_{2n+1} - 2[π(x),π(y)])`
    /// coincides with the `(u,v,w)` product, since `[π(x),π(y)] = <u,v'> - <v,u'>`.
    pub fn from_interleaved(x: &[f64]) -> Result<GroupPoint> {
        if x.len() < 3 || x.len() % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "interleaved coordinates need odd length 2n+1 >= 3, got {}",
                x.len()
            )));
        }
        let n = (x.len() - 1) / 2;
        let u = (0..n).map(|j| x[2 * j]).collect();
        let v = (0..n).map(|j| x[2 * j + 1]).collect();
        GroupPoint::new(u, v, x[2 * n])
    }

    pub fn to_interleaved(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(2 * self.n() + 1);
        for (a, b) in self.u.iter().zip(&self.v) {
            x.push(*a);
            x.push(*b);
        }
        x.push(self.w);
        x
    }

    /// Componentwise comparison with tolerance `tol * (1 + max |coordinate|)`.
    pub fn approx_eq(&self, other: &GroupPoint, tol: f64) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let scale = 1.0 + self.max_abs_coord().max(other.max_abs_coord());
        self.to_interleaved()
            .iter()
            .zip(other.to_interleaved())
            .all(|(a, b)| (a - b).abs() <= tol * scale)
    }
}

fn check_dims(x: &GroupPoint, y: &GroupPoint) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    Ok(())
}

/// Korányi gauge from the squared horizontal norm and the central coordinate.
#[inline]
pub fn koranyi_gauge(horizontal_sq: f64, w: f64) -> f64 {
    (horizontal_sq * horizontal_sq + w * w).sqrt().sqrt()
}

/// Symplectic form `[x, y] = Σ_j (x_{2j-1} y_{2j} - x_{2j} y_{2j-1})` on `R^{2n}`.
pub fn symplectic_form(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.chunks(2)
        .zip(y.chunks(2))
        .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
        .sum())
}

/// Product written in interleaved coordinates, as an independent route to
/// [`GroupPoint::multiply`].
pub fn interleaved_product(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() || x.len() % 2 == 0 {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let k = x.len() - 1;
    let bracket = symplectic_form(&x[..k], &y[..k])?;
    let mut out: Vec<f64> = x[..k].iter().zip(&y[..k]).map(|(a, b)| a + b).collect();
    out.push(x[k] + y[k] - 2.0 * bracket);
    Ok(out)
}

/// Parameters `(p, ε, n, α)` shared by both embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    p: f64,
    epsilon: f64,
    n: usize,
    alpha: f64,
}

impl EmbeddingParams {
    /// `n` is the integer with `n <= p < n+1` and `α = (2n+2)/p - 1 + ε`.
    pub fn from_p_epsilon(p: f64, epsilon: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "p must be finite and at least 2, got {p}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if epsilon > 0.5 {
            log::warn!("epsilon = {epsilon} lies outside (0, 1/2]; formulas remain valid but the doubling bound is stated for epsilon <= 1/2");
        }
        let n = p.floor() as usize;
        let alpha = (2 * n + 2) as f64 / p - 1.0 + epsilon;
        let params = EmbeddingParams {
            p,
            epsilon,
            n,
            alpha,
        };
        debug_assert!(params.homogeneous_dimension() - alpha * p > 0.0);
        Ok(params)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `2n + 2`, the exponent by which dilations scale Lebesgue measure.
    pub fn homogeneous_dimension(&self) -> f64 {
        (2 * self.n + 2) as f64
    }

    /// `(1 - ε) p`, which equals `(2n+2) - α p`.
    pub fn integrability_gap(&self) -> f64 {
        (1.0 - self.epsilon) * self.p
    }

    /// Snowflake exponent `1 - ε`.
    pub fn snowflake_exponent(&self) -> f64 {
        1.0 - self.epsilon
    }
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        EmbeddingParams::from_p_epsilon(2.5, 0.5).expect("default parameters are valid")
    }
}
