//! Two-sided ratio extremes between a pair of metrics.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub metric_a: f64,
    pub metric_b: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub label_a: String,
    pub label_b: String,
    pub pair_count: usize,
    /// Pairs with `metric_a = 0`, left out of the extremes.
    pub excluded: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max_ratio / min_ratio`.
    pub distortion: f64,
    pub min_witness: Witness,
    pub max_witness: Witness,
}

/// Extremes of `metric_b / metric_a` over all pairs `i < j`. Ties go to the
/// first pair in row-major order.
pub fn distortion_report<T, A, B>(
    points: &[T],
    metric_a: A,
    metric_b: B,
    labels: (&str, &str),
) -> Result<DistortionReport>
where
    T: Sync,
    A: Fn(&T, &T) -> Result<f64> + Sync,
    B: Fn(&T, &T) -> Result<f64> + Sync,
{
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "distortion needs at least two points".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .collect();
    let evaluated: Vec<Option<Witness>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = metric_a(&points[i], &points[j])?;
            if a == 0.0 {
                return Ok(None);
            }
            let b = metric_b(&points[i], &points[j])?;
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::Degenerate(format!(
                    "metric values ({a}, {b}) at pair ({i}, {j})"
                )));
            }
            Ok(Some(Witness {
                i,
                j,
                metric_a: a,
                metric_b: b,
                ratio: b / a,
            }))
        })
        .collect::<Result<_>>()?;
    let mut excluded = 0;
    let mut lo: Option<Witness> = None;
    let mut hi: Option<Witness> = None;
    for w in evaluated {
        match w {
            None => excluded += 1,
            Some(w) => {
                if lo.is_none_or(|l| w.ratio < l.ratio) {
                    lo = Some(w);
                }
                if hi.is_none_or(|h| w.ratio > h.ratio) {
                    hi = Some(w);
                }
            }
        }
    }
    let (min_witness, max_witness) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        _ => {
            return Err(Error::Degenerate(
                "all pairs coincide under the first metric".into(),
            ))
        }
    };
    Ok(DistortionReport {
        label_a: labels.0.to_string(),
        label_b: labels.1.to_string(),
        pair_count: pairs.len(),
        excluded,
        min_ratio: min_witness.ratio,
        max_ratio: max_witness.ratio,
        distortion: max_witness.ratio / min_witness.ratio,
        min_witness,
        max_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Vec<f64> {
        vec![0.0, 1.0, 2.5, 2.5, 7.0, -3.0]
    }

    #[test]
    fn identical_metrics_have_no_distortion() {
        let d = |a: &f64, b: &f64| Ok((a - b).abs());
        let r = distortion_report(&line(), d, d, ("a", "a")).unwrap();
        assert_eq!(r.distortion, 1.0);
        assert_eq!(r.excluded, 1);
        assert_eq!(r.pair_count, 15);
    }

    #[test]
    fn scaling_leaves_distortion_unchanged() {
        let d = |a: &f64, b: &f64| Ok((a - b).abs());
        let root = |a: &f64, b: &f64| Ok((a - b).abs().sqrt());
        let base = distortion_report(&line(), d, root, ("a", "b")).unwrap();
        let scaled = distortion_report(
            &line(),
            d,
            |a: &f64, b: &f64| Ok(3.0 * (a - b).abs().sqrt()),
            ("a", "b"),
        )
        .unwrap();
        assert!((scaled.distortion - base.distortion).abs() < 1e-12 * base.distortion);
        assert!((scaled.max_ratio - 3.0 * base.max_ratio).abs() < 1e-12);
    }

    #[test]
    fn witnesses_reproduce_extremes() {
        let pts = line();
        let d = |a: &f64, b: &f64| Ok((a - b).abs());
        let root = |a: &f64, b: &f64| Ok((a - b).abs().sqrt());
        let r = distortion_report(&pts, d, root, ("a", "b")).unwrap();
        for w in [r.min_witness, r.max_witness] {
            assert_eq!(
                root(&pts[w.i], &pts[w.j]).unwrap() / d(&pts[w.i], &pts[w.j]).unwrap(),
                w.ratio
            );
        }
        assert_eq!(r.min_ratio, 10f64.sqrt() / 10.0);
    }

    #[test]
    fn needs_two_points() {
        let d = |a: &f64, b: &f64| Ok((a - b).abs());
        assert!(distortion_report(&[1.0], d, d, ("a", "b")).is_err());
    }
}
