//! Both sides of the lattice inequality
//! `Σ_{x∈B_n} Σ_{k=1}^{n²} ‖f(xcᵏ) - f(x)‖^p / k^{1+p/2}
//!   ≲ Σ_{x∈B_{21n}} (‖f(xa) - f(x)‖^p + ‖f(xb) - f(x)‖^p)`
//! for `f = Q`. Left-invariance reduces each inner sum to a single distance
//! from the identity times the ball size.

use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::ReprDistance;
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};
use crate::lattice::{LatticeElement, WordBall};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LnInequality {
    pub n: u32,
    pub p: f64,
    pub epsilon: f64,
    pub ball_n: usize,
    pub ball_21n: usize,
    pub lhs: f64,
    pub rhs_proxy: f64,
    /// `Σ_{k=1}^{n²} k^{-1-εp/2}`.
    pub analytic_sum: f64,
    /// `(2/(εp))(1 - n^{-εp})`.
    pub integral_comparison: f64,
    /// `|B_n| d(e, c)^p`.
    pub first_term: f64,
    /// Largest relative quadrature error among the distances used.
    pub max_rel_error: f64,
}

pub fn ln_analytic_sum(n: u32, p: f64, epsilon: f64) -> f64 {
    let e = 1.0 + 0.5 * epsilon * p;
    let m = (n as u64) * (n as u64);
    // smallest terms first
    (1..=m).rev().map(|k| (k as f64).powf(-e)).sum()
}

pub fn ln_integral_comparison(n: u32, p: f64, epsilon: f64) -> f64 {
    2.0 / (epsilon * p) * (1.0 - (n as f64).powf(-epsilon * p))
}

fn dist_pow(metric: &ReprDistance, g: &LatticeElement) -> Result<(f64, f64)> {
    let p = metric.params.p();
    let x = g.to_continuous();
    let d = metric.distance(&GroupPoint::identity(1), &x)?;
    let v = d.value.powf(p);
    Ok((
        v,
        if d.value > 0.0 {
            p * d.abs_error / d.value
        } else {
            0.0
        },
    ))
}

pub fn ln_inequality_eval(
    n: u32,
    params: &EmbeddingParams,
    tol: f64,
    budget: usize,
) -> Result<LnInequality> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let big = n.checked_mul(21).ok_or(Error::Overflow)?;
    let ball = WordBall::build(big, budget)?;
    let ball_n = ball.size_at(n).expect("n <= 21n");
    let ball_21n = ball.len();
    let metric = ReprDistance::new(*params, tol)?;
    let p = params.p();
    let m = (n as i64) * (n as i64);
    let terms: Vec<(f64, f64)> = (1..=m)
        .into_par_iter()
        .map(|k| {
            let (v, rel) = dist_pow(&metric, &LatticeElement::central(k))?;
            Ok((v / (k as f64).powf(1.0 + 0.5 * p), rel))
        })
        .collect::<Result<_>>()?;
    let (da, ra) = dist_pow(&metric, &LatticeElement::A)?;
    let (db, rb) = dist_pow(&metric, &LatticeElement::B)?;
    let sum: f64 = terms.iter().rev().map(|t| t.0).sum();
    let max_rel_error = terms.iter().map(|t| t.1).fold(ra.max(rb), f64::max);
    Ok(LnInequality {
        n,
        p,
        epsilon: params.epsilon(),
        ball_n,
        ball_21n,
        lhs: ball_n as f64 * sum,
        rhs_proxy: ball_21n as f64 * (da + db),
        analytic_sum: ln_analytic_sum(n, p, params.epsilon()),
        integral_comparison: ln_integral_comparison(n, p, params.epsilon()),
        first_term: ball_n as f64 * terms[0].0,
        max_rel_error,
    })
}
