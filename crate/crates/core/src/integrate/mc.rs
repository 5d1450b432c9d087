//! Importance-sampled Monte Carlo for `∫ |T(x)(z)|^p dz` over `R^{2n+1}`, where
//! `T(x)(z) = N(x⁻¹z)^{-α} - N(z)^{-α}`.
//!
//! With `x` dilated to `N(x) = 1`, three proposal laws are mixed:
//!
//! 1. `∝ N(z)^{-(αp-δ)}` on `B_N(0, 2)`;
//! 2. the same law left-translated by `x`;
//! 3. `∝ N(z)^{-(α+1)p}` outside `B_N(0, 2)`.
//!
//! Each is drawn as `δ_ρ ω` with `ρ` from its exact radial law and `ω` from the
//! cone measure on the unit Korányi sphere. Sample counts per component are
//! fixed in advance and every sample is weighted by the full mixture density
//! (balance heuristic). Weights are formed in log space; near either end of
//! the `ε` range the radial laws reach radii far outside `f64` range.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ball::{ball_integral_exact, euclidean_ball_volume, exterior_integral_exact};
use super::rng::{normal, open01, stream, stream_id};
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};

/// Regularisation of the singular proposal exponent.
pub const DELTA: f64 = 0.01;
/// Mixture weights of the three proposal components.
pub const MIXTURE: [f64; 3] = [0.4, 0.4, 0.2];
/// Minimum sample count accepted for kernel norms.
pub const MIN_SAMPLES: u64 = 10_000;
/// Largest ambient index supported by the sampler.
pub const MAX_N: usize = 16;

const SPLIT_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Samples per deterministic chunk; part of the result's identity.
    pub chunk_size: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub workers: Option<usize>,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            chunk_size: 1 << 14,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    /// Copy with a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        McConfig { seed, ..*self }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig::new(1_000_000, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn scaled(&self, factor: f64) -> McEstimate {
        McEstimate {
            mean: self.mean * factor,
            std_error: self.std_error * factor.abs(),
            ..*self
        }
    }

    /// Whether `|self - other| <= k` combined standard errors.
    pub fn agrees_with(&self, other: &McEstimate, k: f64) -> bool {
        (self.mean - other.mean).abs() <= k * self.std_error.hypot(other.std_error)
    }
}

/// Running sum statistics, merged in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, y: f64) {
        self.count += 1;
        let d = y - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (y - self.mean);
    }

    pub fn merge(&mut self, o: &Moments) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let n = (self.count + o.count) as f64;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / n;
        self.m2 += o.m2 + d * d * self.count as f64 * o.count as f64 / n;
        self.count += o.count;
    }

    pub fn sum(&self) -> f64 {
        self.mean * self.count as f64
    }

    /// Variance of the sum of `count` i.i.d. draws.
    pub fn sum_variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        self.m2 / (self.count - 1) as f64 * self.count as f64
    }
}

/// Run `work(component, chunk, len)` over fixed chunks and merge per component.
pub(crate) fn run_chunks<F>(counts: &[u64], cfg: &McConfig, work: F) -> Vec<Moments>
where
    F: Fn(u32, u32, u64) -> Moments + Sync,
{
    let chunk = cfg.chunk_size.max(1);
    let mut jobs: Vec<(u32, u32, u64)> = Vec::new();
    for (c, &count) in counts.iter().enumerate() {
        let mut done = 0u64;
        let mut k = 0u32;
        while done < count {
            let len = chunk.min(count - done);
            jobs.push((c as u32, k, len));
            done += len;
            k += 1;
        }
    }
    let eval = || -> Vec<Moments> {
        jobs.par_iter()
            .map(|&(c, k, len)| work(c, k, len))
            .collect()
    };
    let parts = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map(|pool| pool.install(eval))
            .unwrap_or_else(|_| eval()),
        None => eval(),
    };
    let mut out = vec![Moments::default(); counts.len()];
    for ((c, _, _), m) in jobs.iter().zip(parts) {
        out[*c as usize].merge(&m);
    }
    out
}

/// A point of `H_n` in interleaved horizontal layout, stored inline.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pt {
    pub n: usize,
    pub h: [f64; 2 * MAX_N],
    pub w: f64,
}

impl Pt {
    pub fn from_point(x: &GroupPoint) -> Pt {
        let mut h = [0.0; 2 * MAX_N];
        for j in 0..x.n() {
            h[2 * j] = x.u()[j];
            h[2 * j + 1] = x.v()[j];
        }
        Pt {
            n: x.n(),
            h,
            w: x.w(),
        }
    }

    pub fn inverse(&self) -> Pt {
        let mut h = self.h;
        h.iter_mut().for_each(|c| *c = -*c);
        Pt {
            n: self.n,
            h,
            w: -self.w,
        }
    }

    pub fn horizontal_sq(&self) -> f64 {
        self.h[..2 * self.n].iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        crate::group::koranyi_gauge(self.horizontal_sq(), self.w)
    }

    pub fn dilate(&self, theta: f64) -> Pt {
        let mut h = self.h;
        h[..2 * self.n].iter_mut().for_each(|c| *c *= theta);
        Pt {
            n: self.n,
            h,
            w: self.w * theta * theta,
        }
    }

    pub fn mul(&self, o: &Pt) -> Pt {
        let mut h = [0.0; 2 * MAX_N];
        let mut twist = 0.0;
        for j in 0..self.n {
            let (u, v) = (self.h[2 * j], self.h[2 * j + 1]);
            let (u2, v2) = (o.h[2 * j], o.h[2 * j + 1]);
            h[2 * j] = u + u2;
            h[2 * j + 1] = v + v2;
            twist += v * u2 - u * v2;
        }
        Pt {
            n: self.n,
            h,
            w: self.w + o.w + 2.0 * twist,
        }
    }
}

/// Uniform point on the Korányi unit sphere under the cone measure.
pub(crate) fn cone_direction<R: Rng>(n: usize, rng: &mut R) -> Pt {
    let dim = 2 * n;
    loop {
        let mut h = [0.0; 2 * MAX_N];
        let mut sq = 0.0;
        for c in h.iter_mut().take(dim) {
            *c = normal(rng);
            sq += *c * *c;
        }
        let radius = open01(rng).powf(1.0 / dim as f64) / sq.sqrt();
        h[..dim].iter_mut().for_each(|c| *c *= radius);
        let w = 2.0 * rng.random::<f64>() - 1.0;
        let p = Pt { n, h, w };
        let norm = p.norm();
        if norm <= 1.0 && norm > 0.0 {
            return p.dilate(1.0 / norm);
        }
    }
}

/// `ln N(a · δ_ρ ω)` with `ln ρ` given, avoiding overflow for large `ρ`.
fn log_norm_translated(a: &Pt, omega: &Pt, ln_rho: f64) -> f64 {
    if ln_rho <= 0.0 {
        a.mul(&omega.dilate(ln_rho.exp())).norm().ln()
    } else {
        ln_rho + a.dilate((-ln_rho).exp()).mul(omega).norm().ln()
    }
}

/// `ln |e^a - e^b|`.
fn ln_abs_diff_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == lo {
        return f64::NEG_INFINITY;
    }
    hi + (-(-(hi - lo)).exp_m1()).ln()
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

struct KernelSampler {
    n: usize,
    alpha: f64,
    p: f64,
    x: Pt,
    x_inv: Pt,
    /// Singular proposal exponent `αp - δ`.
    beta1: f64,
    /// Tail exponent `(α+1)p`.
    gamma: f64,
    q_dim: f64,
    ln_z1: f64,
    ln_z3: f64,
    ln_counts: [f64; 3],
    /// `ln` of the integration radius, `+∞` for all of space.
    ln_radius: f64,
}

impl KernelSampler {
    fn new(x: Pt, params: &EmbeddingParams, counts: &[u64; 3], radius: f64) -> Result<Self> {
        let n = params.n();
        let alpha = params.alpha();
        let p = params.p();
        let beta1 = alpha * p - DELTA;
        let gamma = (alpha + 1.0) * p;
        let z1 = ball_integral_exact(SPLIT_RADIUS, beta1, n)?;
        let z3 = exterior_integral_exact(SPLIT_RADIUS, gamma, n)?;
        Ok(KernelSampler {
            n,
            alpha,
            p,
            x,
            x_inv: x.inverse(),
            beta1,
            gamma,
            q_dim: params.homogeneous_dimension(),
            ln_z1: z1.ln(),
            ln_z3: z3.ln(),
            ln_counts: counts.map(|c| {
                if c == 0 {
                    f64::NEG_INFINITY
                } else {
                    (c as f64).ln()
                }
            }),
            ln_radius: radius.ln(),
        })
    }

    fn ln_q_singular(&self, ln_norm: f64) -> f64 {
        if ln_norm < SPLIT_RADIUS.ln() {
            -self.beta1 * ln_norm - self.ln_z1
        } else {
            f64::NEG_INFINITY
        }
    }

    fn ln_q_tail(&self, ln_norm: f64) -> f64 {
        if ln_norm > SPLIT_RADIUS.ln() {
            -self.gamma * ln_norm - self.ln_z3
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Weighted contribution `f(z) / Σ_c n_c q_c(z)` of one draw from `component`.
    fn draw<R: Rng>(&self, component: usize, rng: &mut R) -> f64 {
        let omega = cone_direction(self.n, rng);
        let u = open01(rng);
        let ln_rho = match component {
            0 | 1 => SPLIT_RADIUS.ln() + u.ln() / (self.q_dim - self.beta1),
            _ => SPLIT_RADIUS.ln() - u.ln() / (self.gamma - self.q_dim),
        };
        // (ln N(z), ln N(x⁻¹z))
        let (ln_nz, ln_ny) = match component {
            1 => (log_norm_translated(&self.x, &omega, ln_rho), ln_rho),
            _ => (ln_rho, log_norm_translated(&self.x_inv, &omega, ln_rho)),
        };
        if !(ln_nz.is_finite() && ln_ny.is_finite()) || ln_nz >= self.ln_radius {
            return 0.0;
        }
        let ln_t = ln_abs_diff_exp(-self.alpha * ln_ny, -self.alpha * ln_nz);
        if ln_t == f64::NEG_INFINITY {
            return 0.0;
        }
        let ln_q = log_sum_exp(&[
            self.ln_counts[0] + self.ln_q_singular(ln_nz),
            self.ln_counts[1] + self.ln_q_singular(ln_ny),
            self.ln_counts[2] + self.ln_q_tail(ln_nz),
        ]);
        (self.p * ln_t - ln_q).exp()
    }
}

fn mixture_counts(samples: u64) -> [u64; 3] {
    let n0 = (samples as f64 * MIXTURE[0]).floor() as u64;
    let n1 = (samples as f64 * MIXTURE[1]).floor() as u64;
    [n0, n1, samples - n0 - n1]
}

fn check_inputs(x: &GroupPoint, params: &EmbeddingParams, cfg: &McConfig) -> Result<()> {
    if x.n() != params.n() {
        return Err(Error::DimensionMismatch {
            left: x.n(),
            right: params.n(),
        });
    }
    if params.n() > MAX_N {
        return Err(Error::InvalidParameter(format!(
            "ambient index {} exceeds supported {MAX_N}",
            params.n()
        )));
    }
    if x.is_identity() {
        return Err(Error::Degenerate("kernel norm at the identity".into()));
    }
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_SAMPLES} samples required, got {}",
            cfg.samples
        )));
    }
    Ok(())
}

fn kernel_integral(
    x: &GroupPoint,
    radius_factor: f64,
    params: &EmbeddingParams,
    cfg: &McConfig,
) -> Result<McEstimate> {
    check_inputs(x, params, cfg)?;
    let scale = x.koranyi_norm();
    let unit = Pt::from_point(&x.dilate_unchecked(1.0 / scale));
    let counts = mixture_counts(cfg.samples);
    let sampler = KernelSampler::new(unit, params, &counts, radius_factor)?;
    let parts = run_chunks(&counts, cfg, |c, k, len| {
        let mut rng = stream(cfg.seed, stream_id(c, k));
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(sampler.draw(c as usize, &mut rng));
        }
        m
    });
    let mean: f64 = parts.iter().map(Moments::sum).sum();
    let var: f64 = parts.iter().map(Moments::sum_variance).sum();
    let factor = scale.powf(params.integrability_gap());
    Ok(McEstimate {
        mean: mean * factor,
        std_error: var.sqrt() * factor,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// Estimate of `‖T(x)‖_p^p` over all of `R^{2n+1}`.
pub fn mc_kernel_norm(
    x: &GroupPoint,
    params: &EmbeddingParams,
    cfg: &McConfig,
) -> Result<McEstimate> {
    kernel_integral(x, f64::INFINITY, params, cfg)
}

/// Estimate of `∫_{B_N(0, K N(x))} |T(x)(z)|^p dz` for `K >= 1/3`.
pub fn mc_kernel_norm_ball(
    x: &GroupPoint,
    k: f64,
    params: &EmbeddingParams,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if !(k >= 1.0 / 3.0) {
        return Err(Error::InvalidParameter(format!(
            "ball factor K must be at least 1/3, got {k}"
        )));
    }
    kernel_integral(x, k, params, cfg)
}

/// Monte Carlo oracle for `∫_{B_N(0,R)} N(z)^{-β} dz` that does not use the
/// Korányi ball volume: uniform sampling of the shell `R/2 < N <= R` inside the
/// cylinder `|π(z)| <= R, |w| <= R²`, summed over all dyadic shells by
/// homogeneity.
pub fn mc_ball_integral(radius: f64, beta: f64, n: usize, cfg: &McConfig) -> Result<McEstimate> {
    let q = (2 * n + 2) as f64;
    if !(beta >= 0.0 && beta < q) || n == 0 || n > MAX_N {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= beta < {q} and 1 <= n <= {MAX_N}"
        )));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("sample budget is zero".into()));
    }
    let dim = 2 * n;
    let parts = run_chunks(&[cfg.samples], cfg, |c, k, len| {
        let mut rng = stream(cfg.seed, stream_id(c, k));
        let mut m = Moments::default();
        for _ in 0..len {
            // only |π(z)| matters, and it has density ∝ r^{2n-1} on [0, 1]
            let r = open01(&mut rng).powf(1.0 / dim as f64);
            let w = 2.0 * rng.random::<f64>() - 1.0;
            let norm = crate::group::koranyi_gauge(r * r, w);
            m.push(if norm > 0.5 && norm <= 1.0 {
                norm.powf(-beta)
            } else {
                0.0
            });
        }
        m
    });
    let m = &parts[0];
    let cylinder = 2.0 * euclidean_ball_volume(n);
    let shells = 1.0 / (1.0 - 2f64.powf(-(q - beta)));
    let factor = cylinder * shells * radius.powf(q - beta);
    let mean = m.mean * factor;
    let se = (m.m2 / (m.count.max(2) - 1) as f64 / m.count as f64).sqrt() * factor;
    Ok(McEstimate {
        mean,
        std_error: se,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}
