use snowflake_core::analysis::{
    self, distortion_report, doubling_estimate, ln_inequality_eval,
    measure::measure_ratio_with_profile, sweep, SweepSample,
};
use snowflake_core::embeddings::profile::RadialProfile;
use snowflake_core::embeddings::{distance_matrix, matrix, DistanceMethod, ReprDistance};
use snowflake_core::integrate::McConfig;
use snowflake_core::lattice::build_xn;
use snowflake_core::{EmbeddingParams, GroupPoint};

/// Distortion of the representation embedding against `d_N^{1/2}` on `X_100`
/// for `p = 2.5, ε = 1/2`, at quadrature tolerance `1e-9`.
const XN_DISTORTION: f64 = 1.107_830_770;

#[test]
fn xn_distortion_regression() {
    let params = EmbeddingParams::from_p_epsilon(2.5, 0.5).unwrap();
    let set = build_xn(100, 1_000_000).unwrap();
    let points: Vec<GroupPoint> = set.elements.iter().map(|g| g.to_continuous()).collect();
    let metric = ReprDistance::new(params, 1e-9).unwrap();
    let rep = distortion_report(
        &points,
        |a, b| Ok(a.koranyi_distance(b)?.sqrt()),
        |a, b| Ok(metric.distance(a, b)?.value),
        ("d_N^(1/2)", "repr"),
    )
    .unwrap();
    assert_eq!(rep.pair_count, 4950);
    assert_eq!(rep.excluded, 0);
    assert!(
        ((rep.distortion - XN_DISTORTION) / XN_DISTORTION).abs() < 1e-6,
        "{}",
        rep.distortion
    );
    for w in [rep.min_witness, rep.max_witness] {
        let again = metric.distance(&points[w.i], &points[w.j]).unwrap().value
            / points[w.i].koranyi_distance(&points[w.j]).unwrap().sqrt();
        assert_eq!(again, w.ratio);
    }
}

#[test]
fn euclidean_grid_doubling_is_small() {
    let m = 80;
    let pts: Vec<(f64, f64)> = (0..=m)
        .flat_map(|i| (0..=m).map(move |j| (i as f64 / m as f64, j as f64 / m as f64)))
        .collect();
    let centers: Vec<usize> = (0..pts.len()).step_by(997).collect();
    let rep = doubling_estimate(
        &pts,
        |a: &(f64, f64), b: &(f64, f64)| (a.0 - b.0).hypot(a.1 - b.1),
        &[0.05, 0.1, 0.2],
        &centers,
        0.5 / m as f64,
        Some(16.0),
    )
    .unwrap();
    assert!(rep.reliable);
    assert!(rep
        .trials
        .iter()
        .all(|t| t.cover_verified && t.packing <= t.covering));
    // seven discs of radius r cover one of radius 2r; greedy covers stay within a small factor
    assert!(rep.max_covering <= 16, "{}", rep.max_covering);
    assert_eq!(rep.within_bound, Some(true));
    let scaled = doubling_estimate(
        &pts,
        |a: &(f64, f64), b: &(f64, f64)| 5.0 * (a.0 - b.0).hypot(a.1 - b.1),
        &[0.25, 0.5, 1.0],
        &centers,
        2.5 / m as f64,
        None,
    )
    .unwrap();
    let counts = |r: &analysis::DoublingReport| {
        r.trials
            .iter()
            .map(|t| (t.covering, t.packing))
            .collect::<Vec<_>>()
    };
    assert_eq!(counts(&rep), counts(&scaled));
}

#[test]
fn volume_ratio_does_not_depend_on_radius() {
    let params = EmbeddingParams::from_p_epsilon(2.5, 0.5).unwrap();
    let profile = RadialProfile::build(params, 256, 1e-9).unwrap();
    let runs: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            measure_ratio_with_profile(&profile, r, &McConfig::new(400_000, 90 + k as u64)).unwrap()
        })
        .collect();
    for m in &runs {
        assert!((m.ratio - m.expected).abs() <= 3.0 * m.std_error, "{m:?}");
    }
    for pair in runs.windows(2) {
        let diff = (pair[0].ratio - pair[1].ratio).abs();
        assert!(diff <= 3.0 * pair[0].std_error.hypot(pair[1].std_error));
    }
}

#[test]
fn sweep_sup_grows_and_inf_stays_bounded() {
    let sample = SweepSample {
        pairs: 100,
        radius: 10.0,
        seed: 3,
    };
    for p in [2.0, 3.0] {
        let rep = analysis::epsilon_sweep(&sweep::dyadic_epsilons(2, 6), p, &sample).unwrap();
        assert!(rep.sup_monotone, "{rep:?}");
        assert!(rep.rows.iter().all(|r| r.inf_ratio > 0.5), "{rep:?}");
    }
}

#[test]
fn ln_inequality_sides_grow_as_epsilon_shrinks() {
    let mut last: Option<(f64, f64)> = None;
    for eps in sweep::dyadic_epsilons(2, 6) {
        let params = EmbeddingParams::from_p_epsilon(2.0, eps).unwrap();
        let r = ln_inequality_eval(2, &params, 1e-9, 10_000_000).unwrap();
        assert!(r.lhs > 0.0 && r.rhs_proxy > 0.0);
        assert!(r.lhs >= r.first_term);
        if let Some((lhs, rhs)) = last {
            assert!(r.lhs > lhs, "lhs {} after {lhs}", r.lhs);
            assert!(
                r.rhs_proxy / r.lhs > rhs / lhs,
                "generator side must outgrow the central side"
            );
        }
        last = Some((r.lhs, r.rhs_proxy));
    }
}

#[test]
fn distance_matrix_csv_round_trip() {
    let params = EmbeddingParams::default();
    let points = analysis::sample::uniform_in_ball(params.n(), 2.0, 5, 8).unwrap();
    let rows = distance_matrix(&points, &params, &DistanceMethod::Repr { tol: 1e-9 }).unwrap();
    assert_eq!(rows.len(), 10);
    let mut buf = Vec::new();
    matrix::write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(matrix::CSV_HEADER));
    for (line, row) in lines.zip(&rows) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields[4], row.distance);
        assert_eq!(fields[5], row.error);
    }
}
