//! The representation-parameter integral
//!
//! ```text
//! I(s, w) = ∫_0^∞ (1 - e^{-λ s} cos(λ w))^{p/2} λ^{-1-β} dλ,   β = (1-ε)p/2,
//! ```
//!
//! which gives the `L_p` norm of the Schrödinger cocycle at a group element with
//! `s = |u|^2 + |v|^2` and central coordinate `w`.
//!
//! `I(θ²s, θ²w) = θ^{2β} I(s, w)`, so inputs are first normalised to
//! `s + |w| = 1`. The integral is then split into
//!
//! * a head `λ ≤ 1`, integrated in `t = ln λ` over dyadic windows until the
//!   leading small-`λ` term `s^{p/2} λ^{εp/2-1}` is accurate enough to finish
//!   analytically;
//! * a body `1 ≤ λ ≤ Λ`, integrated panel by panel (at most half an oscillation
//!   period per panel);
//! * a tail `λ > Λ`. When `e^{-Λ s}` is negligible the tail is `Λ^{-β}/β` up to
//!   an explicit bound. Otherwise `Λ` is a whole number of periods `2π/|w|` and
//!   the tail is replaced by its period average
//!   `∫_Λ^∞ M(e^{-λ s}) λ^{-1-β} dλ` with `M(r) = (1/2π)∫(1 - r cos φ)^{p/2} dφ`;
//!   the integrand is symmetric about the middle of every period and the
//!   first-order remainder vanishes.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::gk::{adaptive, PANEL_EVALS};
use crate::error::{Error, Result};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Hard cap on integrand evaluations per call.
pub const MAX_EVALUATIONS: usize = 20_000_000;

const MAX_CUTOFF: f64 = 2.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Summed local error estimates plus analytic head/tail bounds.
    pub abs_error: f64,
    pub evaluations: usize,
    /// Set when `(s, w) = (0, 0)`; the value is then exactly zero.
    pub degenerate: bool,
}

impl QuadratureResult {
    fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            degenerate: true,
        }
    }
}

/// `1 - e^{-x} cos y`, written as a sum of two nonnegative terms.
#[inline]
pub(crate) fn gap(x: f64, y: f64) -> f64 {
    let half = (0.5 * y).sin();
    -(-x).exp_m1() + (-x).exp() * 2.0 * half * half
}

/// Exponents that define the integrand.
#[derive(Debug, Clone, Copy)]
struct Shape {
    half_p: f64,
    beta: f64,
}

impl Shape {
    fn new(p: f64, epsilon: f64) -> Result<Self> {
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
        Ok(Shape {
            half_p: 0.5 * p,
            beta: 0.5 * (1.0 - epsilon) * p,
        })
    }

    /// Small-`λ` exponent `εp/2`.
    fn head_exponent(&self) -> f64 {
        self.half_p - self.beta
    }
}

/// Mean of `(1 - r cos φ)^{p/2}` over a period.
fn period_mean(r: f64, half_p: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    if r == 1.0 {
        return mean_at_one(half_p);
    }
    let f = |phi: f64| (1.0 - r * phi.cos()).max(0.0).powf(half_p);
    adaptive(&f, 0.0, std::f64::consts::PI, 1e-12, 20_000).value / std::f64::consts::PI
}

/// `M(1) = 2^{p/2} Γ((p+1)/2) / (√π Γ(p/2 + 1))`.
fn mean_at_one(half_p: f64) -> f64 {
    (half_p * std::f64::consts::LN_2 + ln_gamma(half_p + 0.5)
        - 0.5 * std::f64::consts::PI.ln()
        - ln_gamma(half_p + 1.0))
    .exp()
}

/// The crude tail bound `∫_Λ^∞ 2^{p/2} λ^{-1-β} dλ = 2^{p/2} (2/((1-ε)p)) Λ^{-(1-ε)p/2}`.
pub fn crude_tail_bound(cutoff: f64, p: f64, epsilon: f64) -> f64 {
    let beta = 0.5 * (1.0 - epsilon) * p;
    2f64.powf(0.5 * p) / beta * cutoff.powf(-beta)
}

/// `I(s, w)`, computed on the normalised curve to absolute tolerance `tol`,
/// so that `abs_error <= tol (s + |w|)^β`.
pub fn lambda_integral(s: f64, w: f64, p: f64, epsilon: f64, tol: f64) -> Result<QuadratureResult> {
    let shape = Shape::new(p, epsilon)?;
    if !(s >= 0.0 && s.is_finite() && w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need finite s >= 0 and finite w, got ({s}, {w})"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if s == 0.0 && w == 0.0 {
        return Ok(QuadratureResult::zero());
    }
    let scale2 = s + w.abs();
    let factor = scale2.powf(shape.beta);
    let r = normalized(s / scale2, (w / scale2).abs(), shape, tol)?;
    Ok(QuadratureResult {
        value: r.value * factor,
        abs_error: r.abs_error * factor,
        evaluations: r.evaluations,
        degenerate: false,
    })
}

/// Integral on the normalised curve `s + |w| = 1`, `w >= 0`.
pub(crate) fn normalized_integral(
    s: f64,
    w: f64,
    p: f64,
    epsilon: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    normalized(s, w, Shape::new(p, epsilon)?, tol)
}

fn normalized(s: f64, w: f64, shape: Shape, tol: f64) -> Result<QuadratureResult> {
    let Shape { half_p, beta } = shape;
    let integrand =
        |lambda: f64| gap(lambda * s, lambda * w).powf(half_p) * lambda.powf(-1.0 - beta);
    let mut evaluations = 0usize;

    // Positive lower bound for the integral fixes the absolute target.
    let probe = adaptive(&integrand, 0.5, 4.0, 1e-3, 2_000);
    evaluations += probe.evaluations;
    let abs_tol = tol * probe.value.max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut error = 0.0;

    // Head: λ = e^t, t ∈ (-∞, 0]. Below the last window the integrand is
    // s^{p/2} λ^{κ-1} (1 + O(λ)) with κ = εp/2, added analytically.
    let kappa = shape.head_exponent();
    let head_t = |t: f64| {
        let g = gap(t.exp() * s, t.exp() * w);
        if g > 0.0 {
            (half_p * g.ln() - beta * t).exp()
        } else {
            0.0
        }
    };
    let head_rest = |lambda0: f64| -> (f64, f64) {
        if s > 0.0 {
            // x - x²/2 <= gap(x, y) <= x + y²/2
            let lead = (half_p * s.ln() + kappa * lambda0.ln()).exp() / kappa;
            let up = (1.0 + 0.5 * lambda0 * w * w / s).powf(half_p) - 1.0;
            let down = 1.0 - (1.0 - 0.5 * lambda0 * s).max(0.0).powf(half_p);
            (lead, lead * up.max(down))
        } else {
            let e = half_p + kappa;
            (0.0, (0.5 * w * w).powf(half_p) * lambda0.powf(e) / e)
        }
    };
    let head_budget = 0.35 * abs_tol;
    let (mut lo, mut hi) = (-1.0_f64, 0.0_f64);
    let mut k = 0;
    loop {
        let share = head_budget * 0.5f64.powi(k + 1);
        let part = adaptive(&head_t, lo, hi, share, MAX_EVALUATIONS / 8);
        evaluations += part.evaluations;
        value += part.value;
        error += part.error;
        let (rest, rest_err) = head_rest(lo.exp());
        if rest_err <= 0.1 * abs_tol || lo < -700.0 {
            value += rest;
            error += rest_err;
            break;
        }
        hi = lo;
        lo *= 2.0;
        k += 1;
    }

    // Cutoff and tail treatment.
    let tail_plan = plan_tail(s, w, shape, 0.2 * abs_tol);

    // Body: 1 <= λ <= Λ.
    let cutoff = tail_plan.cutoff();
    let body_budget = 0.35 * abs_tol;
    let half_period = if w > 0.0 {
        std::f64::consts::PI / w
    } else {
        f64::INFINITY
    };
    let mut a = 1.0_f64;
    while a < cutoff {
        let b = (a + a.min(half_period)).min(cutoff);
        let share = body_budget * (b - a) / (cutoff - 1.0).max(1.0);
        let part = adaptive(&integrand, a, b, share, 200 * PANEL_EVALS);
        evaluations += part.evaluations;
        value += part.value;
        error += part.error;
        if evaluations > MAX_EVALUATIONS {
            return Err(Error::NonConvergence {
                evaluations,
                abs_error: error,
            });
        }
        a = b;
    }

    let (tail_value, tail_error, tail_evals) = tail_plan.evaluate(s, shape, 0.1 * abs_tol);
    value += tail_value;
    error += tail_error;
    evaluations += tail_evals;

    if !value.is_finite() {
        return Err(Error::NonConvergence {
            evaluations,
            abs_error: f64::INFINITY,
        });
    }
    Ok(QuadratureResult {
        value,
        abs_error: error,
        evaluations,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy)]
enum TailPlan {
    /// `e^{-Λ s}` negligible: tail is `Λ^{-β}/β` within `bound`.
    Decayed { cutoff: f64, bound: f64 },
    /// Period-averaged tail from a whole number of periods.
    Averaged { cutoff: f64, bound: f64 },
}

impl TailPlan {
    fn cutoff(&self) -> f64 {
        match *self {
            TailPlan::Decayed { cutoff, .. } | TailPlan::Averaged { cutoff, .. } => cutoff,
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            TailPlan::Decayed { bound, .. } | TailPlan::Averaged { bound, .. } => bound,
        }
    }

    fn evaluate(&self, s: f64, shape: Shape, target: f64) -> (f64, f64, usize) {
        let Shape { half_p, beta } = shape;
        match *self {
            TailPlan::Decayed { cutoff, bound } => (cutoff.powf(-beta) / beta, bound, 0),
            TailPlan::Averaged { cutoff, bound } => {
                let base = cutoff.powf(-beta) / beta;
                if s == 0.0 {
                    return (mean_at_one(half_p) * base, bound, 0);
                }
                // s^β ∫_{Λs}^∞ (M(e^{-x}) - 1) x^{-1-β} dx over dyadic windows in x
                let f = |x: f64| (period_mean((-x).exp(), half_p) - 1.0) * x.powf(-1.0 - beta);
                let sb = s.powf(beta);
                let window_tol = target / (64.0 * sb);
                let mut lo = cutoff * s;
                let mut total = 0.0;
                let mut err = 0.0;
                let mut evals = 0;
                while lo < 50.0 {
                    let hi = (2.0 * lo).max(lo + 0.5).min(50.0);
                    let part = adaptive(&f, lo, hi, window_tol, 4_000);
                    total += part.value;
                    err += part.error;
                    evals += part.evaluations;
                    lo = hi;
                }
                (base + sb * total, bound + sb * err, evals)
            }
        }
    }
}

fn decayed_bound(cutoff: f64, s: f64, shape: Shape) -> f64 {
    // |(1-x)^{p/2} - 1| <= (p/2)(1+|x|)^{p/2-1}|x| for |x| <= r
    let r = (-cutoff * s).exp();
    shape.half_p * (1.0 + r).powf(shape.half_p - 1.0) * r * cutoff.powf(-1.0 - shape.beta) / s
}

fn averaged_bound(cutoff: f64, s: f64, w: f64, shape: Shape) -> f64 {
    let period = 2.0 * std::f64::consts::PI / w;
    let beta = shape.beta;
    let amp = 2f64.powf(shape.half_p);
    let drift = if s > 0.0 {
        (cutoff.powf(-beta) / beta).min((-cutoff * s).exp() * cutoff.powf(-1.0 - beta) / s)
    } else {
        0.0
    };
    amp * period
        * period
        * (s * s * drift + s * cutoff.powf(-1.0 - beta) + cutoff.powf(-2.0 - beta))
}

fn plan_tail(s: f64, w: f64, shape: Shape, target: f64) -> TailPlan {
    let decayed = if s > 0.0 {
        let mut cutoff = 1.0_f64;
        while decayed_bound(cutoff, s, shape) > target && cutoff < MAX_CUTOFF {
            cutoff *= 1.25;
        }
        let cutoff = cutoff.min(MAX_CUTOFF);
        Some(TailPlan::Decayed {
            cutoff,
            bound: decayed_bound(cutoff, s, shape),
        })
    } else {
        None
    };
    let averaged = if w > 0.0 {
        let period = 2.0 * std::f64::consts::PI / w;
        let mut periods = 1.0_f64;
        while averaged_bound(periods * period, s, w, shape) > target
            && periods * period < MAX_CUTOFF
        {
            periods = (periods * 1.25).ceil();
        }
        let cutoff = periods * period;
        Some(TailPlan::Averaged {
            cutoff,
            bound: averaged_bound(cutoff, s, w, shape),
        })
    } else {
        None
    };
    let candidates: Vec<TailPlan> = decayed.into_iter().chain(averaged).collect();
    let within: Option<TailPlan> = candidates
        .iter()
        .filter(|c| c.bound() <= target)
        .copied()
        .min_by(|a, b| a.cutoff().total_cmp(&b.cutoff()));
    within
        .or_else(|| {
            candidates
                .iter()
                .copied()
                .min_by(|a, b| a.bound().total_cmp(&b.bound()))
        })
        .expect("(s, w) = (0, 0) is handled by the caller")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_is_accurate_near_zero() {
        let x = 1e-12;
        assert!((gap(x, 0.0) - x).abs() < 1e-24);
        assert!((gap(0.0, 1e-6) - 0.5e-12).abs() < 1e-24);
    }

    #[test]
    fn mean_at_one_matches_quadrature() {
        for half_p in [1.0, 1.25, 2.0, 3.0] {
            let f = |phi: f64| (1.0 - phi.cos()).powf(half_p);
            let q = adaptive(&f, 0.0, std::f64::consts::PI, 1e-14, 100_000).value
                / std::f64::consts::PI;
            assert!((q - mean_at_one(half_p)).abs() < 1e-12, "{half_p}");
        }
        // p = 2: mean of 1 - cos φ is 1
        assert!((mean_at_one(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_origin() {
        let r = lambda_integral(0.0, 0.0, 2.0, 0.5, 1e-8).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(lambda_integral(-1.0, 0.0, 2.0, 0.5, 1e-8).is_err());
        assert!(lambda_integral(1.0, 0.0, 1.5, 0.5, 1e-8).is_err());
        assert!(lambda_integral(1.0, 0.0, 2.0, 1.0, 1e-8).is_err());
        assert!(lambda_integral(1.0, 0.0, 2.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn crude_bound_decreases() {
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let b = crude_tail_bound(2f64.powi(k), 2.5, 0.3);
            assert!(b < last);
            last = b;
        }
    }
}
