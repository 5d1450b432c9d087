//! Exact integrals over Korányi balls in `R^{2n+1}`.
//!
//! Polar coordinates on the horizontal factor give
//! `|B_N(0,1)| = 2 v_{2n} ∫_0^1 2n r^{2n-1} √(1-r^4) dr = n v_{2n} B(n/2, 3/2)`
//! with `v_{2n} = π^n / n!`. Dilations scale volume by `R^{2n+2}`, so
//! `∫_{B_N(0,R)} N(z)^{-β} dz = c_N (2n+2)/(2n+2-β) R^{2n+2-β}` for `β < 2n+2`.

use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Volume of the Euclidean unit ball in `R^{2n}`.
pub fn euclidean_ball_volume(n: usize) -> f64 {
    (n as f64 * std::f64::consts::PI.ln() - ln_gamma(n as f64 + 1.0)).exp()
}

/// Lebesgue volume `c_N(n)` of the Korányi unit ball in `R^{2n+1}`.
pub fn ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "ambient index n must be at least 1".into(),
        ));
    }
    let nf = n as f64;
    Ok(nf * euclidean_ball_volume(n) * ln_beta(0.5 * nf, 1.5).exp())
}

/// `∫_{B_N(0,R)} N(z)^{-β} dz`.
pub fn ball_integral_exact(radius: f64, beta: f64, n: usize) -> Result<f64> {
    let q = (2 * n + 2) as f64;
    if !(beta >= 0.0 && beta < q) {
        return Err(Error::InvalidParameter(format!(
            "exponent {beta} must lie in [0, {q}) for a convergent ball integral"
        )));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be finite and nonnegative, got {radius}"
        )));
    }
    Ok(ball_volume(n)? * q / (q - beta) * radius.powf(q - beta))
}

/// `∫_{N(z) > R} N(z)^{-γ} dz` for `γ > 2n+2`.
pub fn exterior_integral_exact(radius: f64, gamma: f64, n: usize) -> Result<f64> {
    let q = (2 * n + 2) as f64;
    if !(gamma > q) {
        return Err(Error::InvalidParameter(format!(
            "exponent {gamma} must exceed {q} for a convergent exterior integral"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    Ok(ball_volume(n)? * q / (gamma - q) * radius.powf(q - gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn volumes() {
        assert_relative_eq!(ball_volume(1).unwrap(), PI * PI / 2.0, max_relative = 1e-13);
        assert_relative_eq!(
            ball_volume(2).unwrap(),
            2.0 * PI * PI / 3.0,
            max_relative = 1e-13
        );
        assert!(ball_volume(0).is_err());
    }

    #[test]
    fn radial_integral_matches_quadrature() {
        // 2 v_{2n} ∫_0^1 2n r^{2n-1} sqrt(1 - r^4) dr by midpoint rule
        for n in 1..=4usize {
            let m = 200_000;
            let h = 1.0 / m as f64;
            let sum: f64 = (0..m)
                .map(|i| {
                    let r = (i as f64 + 0.5) * h;
                    2.0 * n as f64 * r.powi(2 * n as i32 - 1) * (1.0 - r.powi(4)).sqrt()
                })
                .sum();
            let direct = 2.0 * euclidean_ball_volume(n) * sum * h;
            assert_relative_eq!(direct, ball_volume(n).unwrap(), max_relative = 1e-6);
        }
    }

    #[test]
    fn ball_integral_examples() {
        let c = ball_volume(2).unwrap();
        assert_relative_eq!(
            ball_integral_exact(1.7, 0.0, 2).unwrap(),
            c * 1.7f64.powi(6),
            max_relative = 1e-13
        );
        // n = 2, β = 5
        assert_relative_eq!(
            ball_integral_exact(3.0, 5.0, 2).unwrap(),
            4.0 * PI * PI * 3.0,
            max_relative = 1e-13
        );
        assert!(ball_integral_exact(1.0, 6.0, 2).is_err());
        assert!(exterior_integral_exact(1.0, 6.0, 2).is_err());
    }
}
