//! Pairwise distance tables.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::kernel_distance;
use super::repr::ReprDistance;
use crate::error::Result;
use crate::group::{EmbeddingParams, GroupPoint};
use crate::integrate::mc::McConfig;

pub const CSV_HEADER: &str = "i,j,d_N,d_snowflake,distance,std_error_or_abs_error";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DistanceMethod {
    Repr {
        tol: f64,
    },
    /// Pair `k` (row-major over `i < j`) uses seed `cfg.seed + k`.
    Kernel {
        cfg: McConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub i: usize,
    pub j: usize,
    pub d_n: f64,
    /// `d_N^{1-ε}`.
    pub d_snowflake: f64,
    pub distance: f64,
    /// Standard error for Monte Carlo, absolute error for quadrature.
    pub error: f64,
}

/// All pairs `i < j`, in row-major order.
pub fn distance_matrix(
    points: &[GroupPoint],
    params: &EmbeddingParams,
    method: &DistanceMethod,
) -> Result<Vec<DistanceRow>> {
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .collect();
    let snow = params.snowflake_exponent();
    let base = |i: usize, j: usize| -> Result<(f64, f64)> {
        let d = points[i].koranyi_distance(&points[j])?;
        Ok((d, d.powf(snow)))
    };
    match method {
        DistanceMethod::Repr { tol } => {
            let metric = ReprDistance::new(*params, *tol)?;
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let (d_n, d_snowflake) = base(i, j)?;
                    let r = metric.distance(&points[i], &points[j])?;
                    Ok(DistanceRow {
                        i,
                        j,
                        d_n,
                        d_snowflake,
                        distance: r.value,
                        error: r.abs_error,
                    })
                })
                .collect()
        }
        DistanceMethod::Kernel { cfg } => pairs
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| {
                let (d_n, d_snowflake) = base(i, j)?;
                let pair_cfg = cfg.reseeded(cfg.seed.wrapping_add(k as u64));
                let e = kernel_distance(&points[i], &points[j], params, &pair_cfg)?;
                Ok(DistanceRow {
                    i,
                    j,
                    d_n,
                    d_snowflake,
                    distance: e.mean,
                    error: e.std_error,
                })
            })
            .collect(),
    }
}

pub fn write_csv<W: Write>(rows: &[DistanceRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.i, r.j, r.d_n, r.d_snowflake, r.distance, r.error
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repr_matrix_and_csv() {
        let params = EmbeddingParams::from_p_epsilon(2.0, 0.5).unwrap();
        let pts: Vec<GroupPoint> = vec![
            GroupPoint::h1(0.0, 0.0, 0.0),
            GroupPoint::h1(0.0, 0.0, 1.0),
            GroupPoint::h1(1.0, 0.0, 0.0),
        ];
        let pts: Vec<GroupPoint> = pts
            .iter()
            .map(|p| p.embed_h1(params.n()).unwrap())
            .collect();
        let rows = distance_matrix(&pts, &params, &DistanceMethod::Repr { tol: 1e-9 }).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].i, rows[0].j), (0, 1));
        assert!((rows[0].distance - 1.119_515_1).abs() < 1e-6);
        assert!((rows[0].d_snowflake - 1.0).abs() < 1e-15);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 4);
    }
}
