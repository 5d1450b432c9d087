//! Seeded point samples.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::integrate::rng::stream;

/// `count` points uniform in `B_N(0, radius) ⊂ H_n`, by rejection from the box
/// `|u_j|, |v_j| <= radius`, `|w| <= radius²`.
pub fn uniform_in_ball(n: usize, radius: f64, count: usize, seed: u64) -> Result<Vec<GroupPoint>> {
    if n == 0 || !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and a positive radius, got n={n}, radius={radius}"
        )));
    }
    let mut rng = stream(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut coord = |scale: f64| scale * (2.0 * rng.random::<f64>() - 1.0);
        let u: Vec<f64> = (0..n).map(|_| coord(radius)).collect();
        let v: Vec<f64> = (0..n).map(|_| coord(radius)).collect();
        let w = coord(radius * radius);
        let p = GroupPoint::new(u, v, w)?;
        if p.koranyi_norm() <= radius {
            out.push(p);
        }
    }
    Ok(out)
}

/// `count` pairs of points uniform in `B_N(0, radius)`.
pub fn uniform_pairs(
    n: usize,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<(GroupPoint, GroupPoint)>> {
    let pts = uniform_in_ball(n, radius, 2 * count, seed)?;
    Ok(pts
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect())
}
