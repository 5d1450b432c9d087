//! Greedy covering and packing counts for balls `B(f, 2r)` by `r`-balls.

use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::profile::{RadialProfile, DEFAULT_CELLS};
use crate::embeddings::repr::relative_sw;
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublingTrial {
    pub center: usize,
    pub radius: f64,
    /// Points within `2r` of the center.
    pub ball_size: usize,
    /// Greedy farthest-point cover by `r`-balls (upper estimate).
    pub covering: usize,
    /// Greedy set with pairwise distances `> 2r` (lower bound).
    pub packing: usize,
    /// Every point of the ball re-checked to lie within `r` of a cover center.
    pub cover_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub centers: Vec<usize>,
    pub radii: Vec<f64>,
    pub trials: Vec<DoublingTrial>,
    pub max_covering: usize,
    pub max_packing: usize,
    /// Covering radius of the point set in the metric, as supplied.
    pub net_resolution: f64,
    /// `false` when the net is coarser than half the smallest radius.
    pub reliable: bool,
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

/// Largest value, first index on ties; associative and commutative, so the
/// parallel reduction is order-independent.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

fn trial<T, M>(points: &[T], metric: &M, center: usize, r: f64) -> DoublingTrial
where
    T: Sync,
    M: Fn(&T, &T) -> f64 + Sync,
{
    let c = &points[center];
    let ball: Vec<usize> = (0..points.len())
        .into_par_iter()
        .filter(|&i| metric(c, &points[i]) <= 2.0 * r)
        .collect();

    // farthest-point cover, seeded at the center
    let mut chosen = vec![center];
    let mut nearest: Vec<f64> = ball.par_iter().map(|&i| metric(c, &points[i])).collect();
    loop {
        let (far, k) = nearest
            .par_iter()
            .enumerate()
            .map(|(k, &d)| (d, k))
            .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
        if ball.is_empty() || far <= r {
            break;
        }
        let newest = ball[k];
        chosen.push(newest);
        let q = &points[newest];
        nearest
            .par_iter_mut()
            .zip(ball.par_iter())
            .for_each(|(d, &i)| *d = d.min(metric(q, &points[i])));
    }
    let cover_verified = ball
        .par_iter()
        .all(|&i| chosen.iter().any(|&j| metric(&points[j], &points[i]) <= r));

    let mut packing: Vec<usize> = Vec::new();
    for &i in &ball {
        if packing
            .par_iter()
            .all(|&j| metric(&points[j], &points[i]) > 2.0 * r)
        {
            packing.push(i);
        }
    }
    DoublingTrial {
        center,
        radius: r,
        ball_size: ball.len(),
        covering: chosen.len(),
        packing: packing.len(),
        cover_verified,
    }
}

/// One trial per `(center, radius)`, centers outermost.
pub fn doubling_estimate<T, M>(
    points: &[T],
    metric: M,
    radii: &[f64],
    centers: &[usize],
    net_resolution: f64,
    bound: Option<f64>,
) -> Result<DoublingReport>
where
    T: Sync,
    M: Fn(&T, &T) -> f64 + Sync,
{
    if radii.is_empty() || centers.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one radius and one center".into(),
        ));
    }
    if let Some(&c) = centers.iter().find(|&&c| c >= points.len()) {
        return Err(Error::InvalidParameter(format!(
            "center index {c} out of range"
        )));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let mut trials = Vec::new();
    for &c in centers {
        for &r in radii {
            trials.push(trial(points, &metric, c, r));
        }
    }
    let max_covering = trials.iter().map(|t| t.covering).max().unwrap_or(0);
    let max_packing = trials.iter().map(|t| t.packing).max().unwrap_or(0);
    let min_radius = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DoublingReport {
        centers: centers.to_vec(),
        radii: radii.to_vec(),
        trials,
        max_covering,
        max_packing,
        net_resolution,
        reliable: net_resolution <= 0.5 * min_radius,
        bound,
        within_bound: bound.map(|b| max_covering as f64 <= b),
    })
}

/// Lattice `(ih, jh, kh²)` in `H_1`, pruned to `B_N(0, radius)`, in
/// lexicographic `(i, j, k)` order.
pub fn h1_net(h: f64, radius: f64) -> Result<Vec<GroupPoint>> {
    if !(h > 0.0 && radius > 0.0 && radius / h <= 4096.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < h and radius/h <= 4096, got h={h}, radius={radius}"
        )));
    }
    let m = (radius / h).floor() as i64;
    let mw = (radius * radius / (h * h)).floor() as i64;
    let mut out = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            let (u, v) = (i as f64 * h, j as f64 * h);
            let hsq = u * u + v * v;
            if hsq > radius * radius {
                continue;
            }
            for k in -mw..=mw {
                let p = GroupPoint::h1(u, v, k as f64 * h * h);
                if p.koranyi_norm() <= radius {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Extremes of the representation distance over the unit Korányi sphere of
/// `H_1`, sampled at `steps + 1` angles of `(s, w) = (cos φ, sin φ)`.
pub fn unit_sphere_extremes(profile: &RadialProfile, steps: usize) -> (f64, f64) {
    (0..=steps)
        .map(|k| {
            let phi = std::f64::consts::FRAC_PI_2 * k as f64 / steps.max(1) as f64;
            profile.distance(phi.cos(), phi.sin())
        })
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
}

/// Doubling trials for the image of the net `h1_net(h, 1)` under the
/// representation embedding, checked against `2^{8/(1-ε)}`. Default radii are
/// a half and a quarter of the smallest image distance to the unit sphere;
/// the default center is the identity.
pub fn image_doubling(
    params: &EmbeddingParams,
    h: f64,
    radii: Option<&[f64]>,
    centers: Option<&[usize]>,
) -> Result<DoublingReport> {
    let profile = RadialProfile::build(*params, DEFAULT_CELLS, 1e-9)?;
    let (lo, hi) = unit_sphere_extremes(&profile, 2048);
    let net = h1_net(h, 1.0)?;
    let default_radii = [0.5 * lo, 0.25 * lo];
    let radii = radii.unwrap_or(&default_radii);
    let origin = net
        .iter()
        .position(GroupPoint::is_identity)
        .expect("the net contains the identity");
    let default_centers = [origin];
    let centers = centers.unwrap_or(&default_centers);
    // every point of the ball is within N(h/2, h/2, h²/2) = 2^{-1/4} h of the net
    let resolution = hi * (2f64.powf(-0.25) * h).powf(params.snowflake_exponent());
    let metric = |a: &GroupPoint, b: &GroupPoint| {
        let (s, w) = relative_sw(a, b).expect("net points lie in H_1");
        profile.distance(s, w)
    };
    let bound = 2f64.powf(8.0 / params.snowflake_exponent());
    doubling_estimate(&net, metric, radii, centers, resolution, Some(bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_net(m: usize) -> Vec<(f64, f64)> {
        let h = 1.0 / m as f64;
        (0..=m)
            .flat_map(|i| (0..=m).map(move |j| (i as f64 * h, j as f64 * h)))
            .collect()
    }

    fn euclid(a: &(f64, f64), b: &(f64, f64)) -> f64 {
        (a.0 - b.0).hypot(a.1 - b.1)
    }

    #[test]
    fn euclidean_square() {
        let pts = square_net(60);
        let center = pts.iter().position(|&p| p == (0.5, 0.5)).unwrap();
        let rep = doubling_estimate(
            &pts,
            euclid,
            &[0.1, 0.2],
            &[center, 0],
            0.5 / 60.0,
            Some(16.0),
        )
        .unwrap();
        for t in &rep.trials {
            assert!(t.packing <= t.covering);
            assert!(t.cover_verified);
            assert!(t.covering <= 16, "{t:?}");
        }
        assert!(rep.reliable);
        assert_eq!(rep.within_bound, Some(true));
    }

    #[test]
    fn invariant_under_rescaling() {
        let pts = square_net(30);
        let a = doubling_estimate(&pts, euclid, &[0.15], &[5, 100], 0.02, None).unwrap();
        let b = doubling_estimate(
            &pts,
            |p, q| 4.0 * euclid(p, q),
            &[0.6],
            &[5, 100],
            0.08,
            None,
        )
        .unwrap();
        let counts = |r: &DoublingReport| {
            r.trials
                .iter()
                .map(|t| (t.covering, t.packing))
                .collect::<Vec<_>>()
        };
        assert_eq!(counts(&a), counts(&b));
    }

    #[test]
    fn net_is_inside_ball() {
        let net = h1_net(0.25, 1.0).unwrap();
        assert!(net.iter().all(|p| p.koranyi_norm() <= 1.0));
        assert!(net.contains(&GroupPoint::h1(0.0, 0.0, 0.0)));
        assert!(net.contains(&GroupPoint::h1(1.0, 0.0, 0.0)));
        assert!(net.contains(&GroupPoint::h1(0.0, 0.0, 1.0)));
    }

    #[test]
    fn coarse_image_net_is_within_bound() {
        let params = EmbeddingParams::from_p_epsilon(2.0, 0.5).unwrap();
        let rep = image_doubling(&params, 0.25, None, None).unwrap();
        assert_eq!(rep.within_bound, Some(true));
        assert!(rep
            .trials
            .iter()
            .all(|t| t.cover_verified && t.packing <= t.covering));
    }
}
