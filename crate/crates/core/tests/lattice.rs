use std::collections::BTreeSet;

use latticebdd::lattice::rational::{rat_from_i64, rats_from_f64, sq_norm};
use latticebdd::lattice::{
    coset_label, determinant, dual_basis, enumerate_within, first_minimum, is_lll_reduced,
    lll_reduce, mat_vec_i64, shortest_vector_oracle, LatticeBasis, LatticePoint, Rational,
    DEFAULT_DELTA,
};
use latticebdd::rng::stream_rng;
use latticebdd::verify::box_scan;
use proptest::prelude::*;

fn basis_from(n: usize, seed: u64) -> LatticeBasis {
    LatticeBasis::random(n, 3, &mut stream_rng(seed, 0))
}

fn abs(r: Rational) -> Rational {
    if r < rat_from_i64(0) {
        -r
    } else {
        r
    }
}

fn coeff_set(points: &[LatticePoint]) -> BTreeSet<Vec<i64>> {
    points.iter().map(|p| p.coeffs.clone()).collect()
}

#[test]
fn skewed_plane_has_known_minimum() {
    // Columns (2,0) and (1,2): the shortest vectors are ±(2,0), since ‖(1,2)‖² = ‖(−1,2)‖² = 5.
    let b = LatticeBasis::from_integer_columns(&[vec![2, 0], vec![1, 2]]).unwrap();
    assert_eq!(first_minimum(&b).unwrap(), 2.0);
    let s = shortest_vector_oracle(&b).unwrap();
    assert_eq!(b.sq_norm_exact(&s.coeffs), rat_from_i64(4));
}

#[test]
fn checkerboard_lattice_minimum_and_kissing_number() {
    // D4 has λ1 = √2 and 24 minimal vectors.
    let b = LatticeBasis::from_integer_columns(&[
        vec![1, 1, 0, 0],
        vec![1, -1, 0, 0],
        vec![0, 1, -1, 0],
        vec![0, 0, 1, -1],
    ])
    .unwrap();
    let l1 = first_minimum(&b).unwrap();
    assert!((l1 - 2f64.sqrt()).abs() < 1e-12);
    let zero = vec![rat_from_i64(0); 4];
    let shell = enumerate_within(&b, &zero, l1).unwrap();
    assert_eq!(shell.len(), 25);
}

#[test]
fn lll_reduces_a_long_basis() {
    let b = LatticeBasis::from_integer_columns(&[vec![1, 0, 0], vec![100, 1, 0], vec![57, 31, 1]])
        .unwrap();
    let red = lll_reduce(&b, DEFAULT_DELTA).unwrap();
    assert!(is_lll_reduced(&red.basis, DEFAULT_DELTA));
    // The lattice is Z³, so the first reduced vector is a unit vector.
    let e = red.basis.sq_norm_exact(&[1, 0, 0]);
    assert_eq!(e, rat_from_i64(1));
}

#[test]
fn parse_rejects_singular_and_ragged_input() {
    assert!(LatticeBasis::parse("2\n1 2\n2 4\n").is_err());
    assert!(LatticeBasis::parse("2\n1 0\n0\n").is_err());
    assert!(LatticeBasis::parse("2\n1 0\n0 1\n0 0\n").is_err());
    let b = LatticeBasis::parse("# comment\n2\n1/2 0\n0 -3/4 # trailing\n").unwrap();
    assert_eq!(b.determinant(), Rational::new(3.into(), 8.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(n in 1usize..=5, seed in any::<u64>()) {
        let b = basis_from(n, seed);
        prop_assert_eq!(LatticeBasis::parse(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn lll_preserves_the_lattice(n in 1usize..=5, seed in any::<u64>()) {
        let b = basis_from(n, seed);
        let red = lll_reduce(&b, DEFAULT_DELTA).unwrap();
        prop_assert!(is_lll_reduced(&red.basis, DEFAULT_DELTA));
        prop_assert_eq!(abs(red.basis.determinant()), abs(b.determinant()));
        // Each reduced vector is the input basis applied to its transform row.
        for (j, row) in red.transform.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            prop_assert_eq!(red.basis.embed(&e), b.embed(row));
        }
        let t: Vec<Vec<Rational>> = red
            .transform
            .iter()
            .map(|r| r.iter().map(|&x| rat_from_i64(x)).collect())
            .collect();
        prop_assert_eq!(abs(determinant(t)), rat_from_i64(1));
    }

    #[test]
    fn dual_pairs_to_identity(n in 1usize..=5, seed in any::<u64>()) {
        let b = basis_from(n, seed);
        prop_assert!(dual_basis(&b).pairs_with(&b));
    }

    #[test]
    fn enumeration_matches_box_scan(
        n in 1usize..=4,
        seed in any::<u64>(),
        center in prop::collection::vec(-1.5f64..1.5, 4),
        radius in 0.5f64..3.0,
    ) {
        let b = basis_from(n, seed);
        let c = b.embed_rational(&rats_from_f64(&center[..n]));
        let got = coeff_set(&enumerate_within(&b, &c, radius).unwrap());
        if let Some(want) = box_scan(&b, &c, radius, 2e4) {
            prop_assert_eq!(got, want.into_iter().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn shortest_vector_is_no_longer_than_any_generator(n in 1usize..=5, seed in any::<u64>()) {
        let b = basis_from(n, seed);
        let s = shortest_vector_oracle(&b).unwrap();
        prop_assert!(!s.is_zero());
        let key = b.sq_norm_exact(&s.coeffs);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            prop_assert!(key <= b.sq_norm_exact(&e));
        }
        let l1 = first_minimum(&b).unwrap();
        prop_assert!((l1 * l1 - latticebdd::lattice::rational::rat_to_f64(&key)).abs() < 1e-9 * l1 * l1);
    }

    #[test]
    fn coset_label_is_additive(
        n in 1usize..=5,
        q in 2u32..7,
        a in prop::collection::vec(-50i64..50, 5),
        c in prop::collection::vec(-50i64..50, 5),
    ) {
        let x = LatticePoint::new(a[..n].to_vec());
        let y = LatticePoint::new(c[..n].to_vec());
        prop_assert_eq!(
            coset_label(&x.add(&y), q),
            coset_label(&x, q).add(&coset_label(&y, q))
        );
        prop_assert!(coset_label(&x.scale(q as i64), q).is_zero());
    }

    #[test]
    fn integer_embedding_agrees(n in 1usize..=4, seed in any::<u64>(), z in prop::collection::vec(-9i64..9, 4)) {
        let b = basis_from(n, seed);
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                b.embed(&e).iter().map(|x| x.to_integer().try_into().unwrap()).collect()
            })
            .collect();
        let direct: Vec<Rational> = mat_vec_i64(&cols, &z[..n]).into_iter().map(rat_from_i64).collect();
        prop_assert_eq!(sq_norm(&direct), b.sq_norm_exact(&z[..n]));
    }
}
