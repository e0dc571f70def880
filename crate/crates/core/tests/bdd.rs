use latticebdd::bdd::{build_bdd_oracle, exact_bdd, BddConfig, DualSource};
use latticebdd::lattice::rational::rats_from_f64;
use latticebdd::lattice::{first_minimum, LatticeBasis};
use latticebdd::rng::stream_rng;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_direction<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

fn agreement(basis: &LatticeBasis, cfg: &BddConfig, seed: u64, queries: usize, radius: f64) -> f64 {
    let oracle = build_bdd_oracle(basis, cfg, seed).unwrap();
    let n = basis.n();
    let mut rng = stream_rng(seed, 99);
    let mut ok = 0;
    for _ in 0..queries {
        let z: Vec<i64> = (0..n).map(|_| rng.random_range(-20..=20)).collect();
        let p = basis.embed_f64(&z);
        let dir = random_direction(n, &mut rng);
        let t: Vec<f64> = p.iter().zip(&dir).map(|(a, d)| a + radius * d).collect();
        let t = rats_from_f64(&t);
        let want = exact_bdd(basis, &t).unwrap();
        if let Ok((got, _)) = oracle.decode(&t) {
            if got == want {
                ok += 1;
            }
        }
    }
    ok as f64 / queries as f64
}

#[test]
fn integer_lattice_decodes_at_three_tenths() {
    let b = LatticeBasis::identity(4);
    let rate = agreement(&b, &BddConfig::new(1e-4), 7, 1000, 0.3);
    assert!(rate >= 0.99, "agreement {rate}");
}

#[test]
fn random_rank_six_decodes_near_alpha() {
    let mut rng = stream_rng(21, 0);
    let cols: Vec<Vec<i64>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| if i == j { 5 } else { rng.random_range(-2..=2) })
                .collect()
        })
        .collect();
    let b = LatticeBasis::from_integer_columns(&cols).unwrap();
    let mut cfg = BddConfig::new(1e-3);
    cfg.source = DualSource::Exact;
    let oracle = build_bdd_oracle(&b, &cfg, 3).unwrap();
    let lambda1 = first_minimum(&b).unwrap();
    let rate = agreement(&b, &cfg, 3, 300, 0.9 * oracle.alpha * lambda1);
    assert!(rate >= 0.95, "agreement {rate} at alpha {}", oracle.alpha);
}
