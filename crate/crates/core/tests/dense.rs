use std::collections::HashMap;

use latticebdd::dense::{
    default_index_log, dense_superlattice, sample_at_smoothing, SmoothingSamplerOptions,
};
use latticebdd::gauss::stats::chi_square_gof;
use latticebdd::gauss::{smoothing_parameter, GaussianWidth};
use latticebdd::lattice::rational::rat_from_i64;
use latticebdd::lattice::LatticeBasis;
use latticebdd::rng::stream_rng;
use latticebdd::verify::{check_smoothing_sampler, test_lattice};
use latticebdd::Error;
use proptest::prelude::*;

/// Gaussian binomial `[n choose k]_2`, the number of `k`-dimensional subspaces of `GF(2)^n`.
fn gaussian_binomial(n: u32, k: u32) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= (1 << (n - i)) - 1;
        den *= (1 << (i + 1)) - 1;
    }
    num / den
}

fn subspace_counts(draws: usize, seed: u64) -> HashMap<Vec<u64>, u64> {
    let b = LatticeBasis::identity(4);
    let mut counts = HashMap::new();
    let mut rng = stream_rng(seed, 0);
    for _ in 0..draws {
        let d = dense_superlattice(&b, 2, &mut rng).unwrap();
        *counts.entry(d.subspace).or_insert(0) += 1;
    }
    counts
}

#[test]
fn subspaces_are_uniform() {
    assert_eq!(gaussian_binomial(4, 2), 35);
    for draws in [100, 35_000] {
        let counts = subspace_counts(draws, 7);
        assert!(counts.len() <= 35);
        let mut observed: Vec<u64> = counts.values().copied().collect();
        observed.resize(35, 0);
        let gof = chi_square_gof(&observed, &[1.0 / 35.0; 35]);
        assert!(gof.passes(), "draws={draws} p={}", gof.p_value);
    }
    assert_eq!(subspace_counts(35_000, 7).len(), 35);
}

#[test]
fn index_and_certificates_hold() {
    for i in 0..30 {
        let n = 2 + i % 4;
        let b = test_lattice(n, 3, i as u64);
        let a = default_index_log(n);
        let d = dense_superlattice(&b, a, &mut stream_rng(3, i as u64)).unwrap();
        assert!(d.verify());
        assert_eq!(
            b.determinant() / d.dense.determinant(),
            rat_from_i64(1 << a)
        );
    }
}

#[test]
fn index_bounds_are_enforced() {
    let b = LatticeBasis::identity(4);
    let w = GaussianWidth::new(3.0).unwrap();
    let opts = SmoothingSamplerOptions {
        index_log: Some(4),
        ..Default::default()
    };
    assert!(sample_at_smoothing(&b, w, 10, 1, &opts).is_err());
    assert!(
        sample_at_smoothing(&LatticeBasis::identity(1), w, 10, 1, &Default::default()).is_err()
    );
}

#[test]
fn narrow_width_is_refused() {
    let b = LatticeBasis::identity(3);
    let eta = smoothing_parameter(&b, 1.0 / 3.0).unwrap();
    let w = GaussianWidth::new(0.8 * eta.s_lo).unwrap();
    let err = sample_at_smoothing(&b, w, 10, 1, &Default::default()).unwrap_err();
    assert!(matches!(err, Error::WidthTooSmall { .. }));
}

#[test]
fn kept_points_follow_the_base_gaussian() {
    let v = check_smoothing_sampler(20_000, 2).unwrap();
    assert!(v.pass, "{v}");
}

#[test]
fn acceptance_rate_matches_the_mass_ratio() {
    // s = 1.1·η_{1/3}(Z²), a = 1.
    let b = LatticeBasis::identity(2);
    let s = 1.1 * smoothing_parameter(&b, 1.0 / 3.0).unwrap().s_hi;
    let w = GaussianWidth::new(s).unwrap();
    let (batch, rep) = sample_at_smoothing(&b, w, 20_000, 4, &Default::default()).unwrap();
    assert_eq!(batch.len(), 20_000);
    let rate = rep.kept as f64 / rep.draws as f64;
    // The keep rate is ρ(Z²)/ρ(L′), which smoothing pins to 2^{−a} up to (1±ε) factors.
    let eps = 1.0 / 3.0;
    let floor = 0.5 * (1.0 - eps) / (1.0 + eps);
    let ceil = 0.5 * (1.0 + eps) / (1.0 - eps);
    let sigma = (0.25 / rep.draws as f64).sqrt();
    assert!(rate >= floor - 3.0 * sigma, "rate {rate} floor {floor}");
    assert!(rate <= ceil + 3.0 * sigma, "rate {rate} ceil {ceil}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn membership_filter_returns_base_coefficients(seed in any::<u64>(), z in prop::collection::vec(-20i64..20, 3)) {
        let b = test_lattice(3, seed % 1000, 1);
        let d = dense_superlattice(&b, 2, &mut stream_rng(seed, 1)).unwrap();
        if let Some(base) = d.to_base(&z) {
            prop_assert_eq!(b.embed(&base), d.dense.embed(&z));
        }
        // Base points always come back.
        let back: Vec<i64> = (0..3)
            .map(|r| d.base_in_dense.iter().zip(&z).map(|(col, &x)| col[r] * x).sum())
            .collect();
        prop_assert_eq!(d.to_base(&back), Some(z.clone()));
    }
}
