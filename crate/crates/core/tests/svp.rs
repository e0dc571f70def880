use std::f64::consts::PI;

use latticebdd::lattice::LatticeBasis;
use latticebdd::rng::stream_rng;
use latticebdd::svp::{
    cap_fraction, sample_unit_sphere, svp_shifted_min, svp_spherical_caps, svp_tradeoff,
    CapRadiusPolicy, CapsOptions, EnumerationGrid, GridMode, OracleMode, QuantumCostReport,
    SolverOptions,
};
use latticebdd::Error;
use proptest::prelude::*;

fn exact_opts() -> SolverOptions {
    SolverOptions {
        oracle: OracleMode::Exact,
        ..Default::default()
    }
}

fn skewed_plane() -> LatticeBasis {
    LatticeBasis::from_integer_columns(&[vec![2, 0], vec![1, 2]]).unwrap()
}

fn d4() -> LatticeBasis {
    LatticeBasis::from_integer_columns(&[
        vec![1, 1, 0, 0],
        vec![1, -1, 0, 0],
        vec![0, 1, -1, 0],
        vec![0, 0, 1, -1],
    ])
    .unwrap()
}

#[test]
fn cap_fraction_in_low_dimension() {
    for phi in [0.1, 0.7, 1.3, PI / 2.0, 2.5] {
        assert!((cap_fraction(2, phi) - phi / PI).abs() < 1e-6, "phi={phi}");
        assert!(
            (cap_fraction(3, phi) - (1.0 - phi.cos()) / 2.0).abs() < 1e-6,
            "phi={phi}"
        );
    }
}

#[test]
fn grid_and_quantum_counts() {
    assert_eq!(EnumerationGrid::at_origin(3, 5).size(), 243);
    assert_eq!(EnumerationGrid::at_origin(40, 2).size(), 1600);
    let r = QuantumCostReport::new(10, 3, 1.0 / 3.0, None, 0.0);
    assert_eq!(r.classical_queries, 59_049);
    assert_eq!(r.quantum_queries, 243);
    let r = QuantumCostReport::new(3, 2, 0.5, None, 0.0);
    assert_eq!((r.classical_queries, r.quantum_queries), (8, 3));
}

#[test]
fn tradeoff_finds_the_plane_minimum() {
    let run = svp_tradeoff(&skewed_plane(), 4, 1, GridMode::Full, &exact_opts()).unwrap();
    assert_eq!(run.queries_made, 1600);
    assert!((run.best_norm - 2.0).abs() < 1e-12);
    assert_eq!(run.success, Some(true));
    assert!(run.certifying);
    assert!(svp_tradeoff(&skewed_plane(), 3, 1, GridMode::Full, &exact_opts()).is_err());
}

#[test]
fn sampled_tradeoff_is_not_certifying() {
    // Only 3 of the 1600 grid points decode to a lattice vector.
    let plane = skewed_plane();
    let run = svp_tradeoff(&plane, 4, 0, GridMode::Sampled(4000), &exact_opts()).unwrap();
    assert_eq!(run.queries_made, 4000);
    assert!(!run.certifying);
    assert_eq!(run.success, Some(true));
    let miss = svp_tradeoff(&plane, 4, 0, GridMode::Sampled(200), &exact_opts());
    assert!(matches!(
        miss,
        Err(Error::BudgetExhausted { repetitions: 200 })
    ));
}

#[test]
fn minimum_finding_on_the_checkerboard_lattice() {
    let (run, report) = svp_shifted_min(&d4(), 2, &exact_opts()).unwrap();
    assert_eq!(run.queries_made, 81);
    assert!((run.best_norm - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(run.success, Some(true));
    assert_eq!((report.classical_queries, report.quantum_queries), (81, 9));
}

#[test]
fn caps_reach_the_minimum() {
    for policy in [CapRadiusPolicy::Alpha, CapRadiusPolicy::Optimal] {
        let opts = CapsOptions {
            solver: exact_opts(),
            policy,
            stop_at_lambda1: true,
        };
        let run = svp_spherical_caps(&d4(), 0.4097, 20, 3, &opts).unwrap();
        assert!((run.best_norm - 2f64.sqrt()).abs() < 1e-12, "{policy:?}");
        assert_eq!(run.success, Some(true));
    }
}

#[test]
fn cap_radius_factors() {
    assert_eq!(CapRadiusPolicy::Alpha.factor(0.4), 0.4);
    assert!(
        (CapRadiusPolicy::Optimal.factor(0.45) - (1.0f64 - 4.0 * 0.45 * 0.45).sqrt()).abs() < 1e-15
    );
    assert_eq!(CapRadiusPolicy::Optimal.factor(0.3), 0.3);
}

#[test]
fn runs_are_deterministic() {
    let opts = CapsOptions {
        solver: exact_opts(),
        ..Default::default()
    };
    let a = svp_spherical_caps(&d4(), 0.4097, 5, 9, &opts).unwrap();
    let b = svp_spherical_caps(&d4(), 0.4097, 5, 9, &opts).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_samples_have_unit_norm(n in 1usize..20, seed in any::<u64>()) {
        let v = sample_unit_sphere(n, &mut stream_rng(seed, 0));
        prop_assert_eq!(v.len(), n);
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_fraction_is_monotone(n in 2usize..12, a in 0.0f64..PI, b in 0.0f64..PI) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(cap_fraction(n, lo) <= cap_fraction(n, hi) + 1e-9);
        prop_assert!((0.0..=1.0 + 1e-9).contains(&cap_fraction(n, hi)));
    }
}
