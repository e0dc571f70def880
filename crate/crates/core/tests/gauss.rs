use std::f64::consts::PI;

use latticebdd::gauss::stats::chi_square_gof;
use latticebdd::gauss::{
    klein_threshold, rho_mass, sample_batch, smoothing_parameter, statistical_distance,
    ExactSampler, GaussianWidth, KleinSampler,
};
use latticebdd::lattice::rational::rat_from_f64;
use latticebdd::lattice::{LatticeBasis, Rational};
use latticebdd::rng::stream_rng;
use proptest::prelude::*;

/// `Σ_{k∈Z} exp(−π(k − c)²/s²)` by direct summation.
fn theta_z(s: f64, c: f64) -> f64 {
    (-200..=200)
        .map(|k| (-PI * (k as f64 - c).powi(2) / (s * s)).exp())
        .sum()
}

/// `η_ε(Z)`: the `s` with `Σ_{k≠0} exp(−π s² k²) = ε`, by bisection on the dual sum.
fn eta_z(eps: f64) -> f64 {
    let excess = |s: f64| {
        2.0 * (1..50)
            .map(|k| (-PI * s * s * (k * k) as f64).exp())
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (0.1, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[test]
fn integer_line_mass_matches_poisson_summation() {
    let z = LatticeBasis::identity(1);
    for s in [0.7, 1.3, 2.9] {
        let m = rho_mass(
            &z,
            &[rat_from_f64(0.0)],
            GaussianWidth::new(s).unwrap(),
            30.0,
        )
        .unwrap();
        // Poisson: Σ_k ρ_s(k) = s·Σ_k ρ_{1/s}(k).
        let dual_side = s
            * (-50..=50)
                .map(|k| (-PI * s * s * (k * k) as f64).exp())
                .sum::<f64>();
        assert!((m - theta_z(s, 0.0)).abs() < 1e-12 * m, "s={s}");
        assert!((m - dual_side).abs() < 1e-12 * m, "s={s}");
    }
}

#[test]
fn shifted_mass_on_the_line() {
    let z = LatticeBasis::identity(1);
    let s = GaussianWidth::new(1.7).unwrap();
    let c = 0.37;
    let m = rho_mass(&z, &[rat_from_f64(c)], s, 30.0).unwrap();
    assert!((m - theta_z(1.7, c)).abs() < 1e-12);
}

#[test]
fn smoothing_bracket_contains_the_line_value() {
    let z = LatticeBasis::identity(1);
    for eps in [0.5, 0.1, 1e-3, 1e-6] {
        let est = smoothing_parameter(&z, eps).unwrap();
        let want = eta_z(eps);
        assert!(
            est.s_lo <= want * (1.0 + 1e-9) && want <= est.s_hi * (1.0 + 1e-9),
            "eps={eps}"
        );
        assert!(est.s_hi - est.s_lo < 1e-6 * want);
    }
}

#[test]
fn smoothing_scales_with_the_lattice() {
    let z2 = LatticeBasis::identity(2);
    let scaled = z2.scaled(&Rational::new(3.into(), 1.into())).unwrap();
    let a = smoothing_parameter(&z2, 0.01).unwrap().value();
    let b = smoothing_parameter(&scaled, 0.01).unwrap().value();
    assert!((b - 3.0 * a).abs() < 1e-6 * b);
}

#[test]
fn exact_sampler_on_the_line_fits_closed_form() {
    let z = LatticeBasis::identity(1);
    let s = 2.3;
    let table = ExactSampler::new(&z, GaussianWidth::new(s).unwrap()).unwrap();
    let draws = sample_batch(100_000, 9, 1, |rng| table.sample(rng));
    let k_max = 12i64;
    let mut counts = vec![0u64; (2 * k_max + 1) as usize];
    let mut probs = vec![0.0; counts.len()];
    let total = theta_z(s, 0.0);
    for (i, p) in probs.iter_mut().enumerate() {
        let k = i as i64 - k_max;
        *p = (-PI * (k * k) as f64 / (s * s)).exp() / total;
    }
    for d in &draws {
        let k = d.coeffs[0].clamp(-k_max, k_max);
        counts[(k + k_max) as usize] += 1;
    }
    let gof = chi_square_gof(&counts, &probs);
    assert!(gof.passes(), "p = {}", gof.p_value);
}

#[test]
fn klein_above_threshold_is_close_to_exact() {
    let b = LatticeBasis::from_integer_columns(&[vec![2, 1], vec![1, 3]]).unwrap();
    let s = 1.5 * klein_threshold(&b);
    let w = GaussianWidth::new(s).unwrap();
    let table = ExactSampler::new(&b, w).unwrap();
    let klein = KleinSampler::new(&b, w).unwrap();
    let draws = 200_000;
    let mut counts = vec![0u64; table.len()];
    for p in sample_batch(draws, 4, 2, |rng| klein.sample(rng)) {
        if let Some(i) = table.index_of(&p.coeffs) {
            counts[i] += 1;
        }
    }
    let probs: Vec<f64> = (0..table.len()).map(|i| table.probability(i)).collect();
    let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / draws as f64).collect();
    // Klein is within a tiny SD of D_{L,s} here; the residual is sampling noise.
    let sd = statistical_distance(&emp, &probs);
    assert!(sd < 0.03, "sd = {sd}");
    assert!(chi_square_gof(&counts, &probs).p_value > 1e-4);
}

#[test]
fn klein_refuses_narrow_widths() {
    let b = LatticeBasis::identity(3);
    let narrow = GaussianWidth::new(0.5 * klein_threshold(&b)).unwrap();
    assert!(KleinSampler::new(&b, narrow).is_err());
    assert!(GaussianWidth::new(0.0).is_err());
    assert!(GaussianWidth::new(f64::NAN).is_err());
}

#[test]
fn batches_do_not_depend_on_thread_count() {
    let b = LatticeBasis::identity(2);
    let t = ExactSampler::new(&b, GaussianWidth::new(3.0).unwrap()).unwrap();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| sample_batch(5000, 3, 7, |rng| t.sample(rng)));
    let c = four.install(|| sample_batch(5000, 3, 7, |rng| t.sample(rng)));
    assert_eq!(a, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn table_is_symmetric_and_normalised(s in 0.6f64..3.0, a in 1i64..4, c in -2i64..3) {
        let b = LatticeBasis::from_integer_columns(&[vec![a, 0], vec![c, 2]]).unwrap();
        let t = ExactSampler::new(&b, GaussianWidth::new(s).unwrap()).unwrap();
        let total: f64 = (0..t.len()).map(|i| t.probability(i)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for i in 0..t.len() {
            let neg: Vec<i64> = t.point(i).iter().map(|x| -x).collect();
            let j = t.index_of(&neg).unwrap();
            prop_assert!((t.probability(i) - t.probability(j)).abs() < 1e-15);
        }
    }

    #[test]
    fn draws_are_reproducible(seed in any::<u64>()) {
        let b = LatticeBasis::identity(3);
        let t = ExactSampler::new(&b, GaussianWidth::new(1.2).unwrap()).unwrap();
        let mut r1 = stream_rng(seed, 5);
        let mut r2 = stream_rng(seed, 5);
        for _ in 0..20 {
            prop_assert_eq!(t.sample(&mut r1), t.sample(&mut r2));
        }
    }
}
