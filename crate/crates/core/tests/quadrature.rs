//! `lambda_integral` against closed forms for even `p`.
//!
//! For `p = 2m`, expanding `(1 - (e^{-λz} + e^{-λz̄})/2)^m` with `z = s + iw`
//! and using `∫_0^∞ (e^{-λζ} - 1) λ^{-1-β} dλ = Γ(-β) ζ^β` (continued
//! analytically in `β`) gives a finite sum of `Re ζ^β` terms.

use snowflake_core::integrate::lambda::crude_tail_bound;
use snowflake_core::integrate::lambda_integral;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn gamma_neg(beta: f64) -> f64 {
    PI / ((-PI * beta).sin() * gamma(1.0 + beta))
}

fn re_pow(re: f64, im: f64, beta: f64) -> f64 {
    re.hypot(im).powf(beta) * (beta * im.atan2(re)).cos()
}

fn closed_form(s: f64, w: f64, m: u32, epsilon: f64) -> f64 {
    let beta = (1.0 - epsilon) * m as f64;
    let mut sum = 0.0;
    for r in 1..=m {
        for k in 0..=r {
            let c = binom(m, r) * (-0.5f64).powi(r as i32) * binom(r, k);
            sum += c * re_pow(r as f64 * s, (2.0 * k as f64 - r as f64) * w, beta);
        }
    }
    gamma_neg(beta) * sum
}

const POINTS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (0.0, 1.0),
    (0.5, 0.5),
    (0.3, -0.7),
    (2.0, 5.0),
    (1e-3, 1.0),
    (1e-6, 1.0),
    (0.05, 40.0),
];

fn check(m: u32, epsilon: f64) {
    let p = 2.0 * m as f64;
    for (s, w) in POINTS {
        let exact = closed_form(s, w, m, epsilon);
        let got = lambda_integral(s, w, p, epsilon, 1e-9)
            .unwrap_or_else(|e| panic!("p={p} eps={epsilon} (s,w)=({s},{w}): {e}"));
        let err = (got.value - exact).abs();
        assert!(
            err <= 1e-6 * exact.abs(),
            "p={p} eps={epsilon} (s,w)=({s},{w}): {} vs {exact}",
            got.value
        );
        assert!(
            err <= got.abs_error.max(1e-12 * exact.abs()) * 10.0,
            "reported error too small at ({s},{w})"
        );
    }
}

#[test]
fn spot_values() {
    let a = lambda_integral(0.0, 1.0, 2.0, 0.5, 1e-9).unwrap().value;
    let b = lambda_integral(1.0, 0.0, 2.0, 0.5, 1e-9).unwrap().value;
    assert!((a - (2.0 * PI).sqrt()).abs() < 1e-7);
    assert!((b - 2.0 * PI.sqrt()).abs() < 1e-7);
}

#[test]
fn p2_closed_form() {
    for eps in [0.5, 0.25, 0.1, 0.9, 1e-3] {
        check(1, eps);
    }
}

#[test]
fn p4_closed_form() {
    for eps in [0.3, 0.6, 0.05] {
        check(2, eps);
    }
}

#[test]
fn p6_closed_form() {
    for eps in [0.25, 0.1, 0.8] {
        check(3, eps);
    }
}

#[test]
fn homogeneity() {
    let base = lambda_integral(0.4, 0.9, 2.5, 0.3, 1e-10).unwrap().value;
    let beta = 0.7 * 2.5 / 2.0;
    for t in [1e-3, 0.5, 7.0, 1e4] {
        let scaled = lambda_integral(0.4 * t, 0.9 * t, 2.5, 0.3, 1e-10)
            .unwrap()
            .value;
        assert!((scaled / base - f64::powf(t, beta)).abs() < 1e-8 * f64::powf(t, beta));
    }
}

#[test]
fn symmetric_in_w() {
    let a = lambda_integral(0.2, 1.3, 3.0, 0.4, 1e-10).unwrap().value;
    let b = lambda_integral(0.2, -1.3, 3.0, 0.4, 1e-10).unwrap().value;
    assert_eq!(a, b);
}

#[test]
fn crude_tail_bound_decreases() {
    let mut last = f64::INFINITY;
    for k in 1..20 {
        let b = crude_tail_bound(2f64.powi(k), 2.5, 0.5);
        assert!(b < last);
        last = b;
    }
}
