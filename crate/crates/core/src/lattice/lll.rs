use num_traits::{One, Signed, Zero};

use super::basis::{bigint_to_i64, LatticeBasis};
use super::rational::{self, rat_from_f64, round_rational, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.99;

/// LLL output: the reduced basis and the unimodular transform.
///
/// `transform[j]` holds the coefficients of reduced vector `j` in the input
/// basis, so input coefficients are `Σ_j transform[j] · z_j`.
#[derive(Clone, Debug)]
pub struct LllReduction {
    pub basis: LatticeBasis,
    pub transform: Vec<Vec<i64>>,
}

/// Exact rational LLL with Lovász parameter `delta ∈ (1/4, 1)`.
pub fn lll_reduce(basis: &LatticeBasis, delta: f64) -> Result<LllReduction> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "LLL delta {delta} not in (1/4, 1)"
        )));
    }
    let n = basis.n();
    let delta = rat_from_f64(delta);
    let half = Rational::new(1.into(), 2.into());
    let mut b: Vec<Vec<Rational>> = basis.columns().to_vec();
    let mut u: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();

    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bsq = vec![Rational::zero(); n];
    {
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = rational::dot(&b[i], &star[j]) / &bsq[j];
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &mu[i][j] * sk;
                }
            }
            bsq[i] = rational::sq_norm(&v);
            if bsq[i].is_zero() {
                return Err(Error::SingularBasis);
            }
            star.push(v);
        }
    }

    let size_reduce = |k: usize,
                       l: usize,
                       b: &mut Vec<Vec<Rational>>,
                       u: &mut Vec<Vec<Rational>>,
                       mu: &mut Vec<Vec<Rational>>| {
        if mu[k][l].abs() > half {
            let r = Rational::from_integer(round_rational(&mu[k][l]));
            let (bl, ul) = (b[l].clone(), u[l].clone());
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &r * y;
            }
            for (x, y) in u[k].iter_mut().zip(&ul) {
                *x -= &r * y;
            }
            mu[k][l] -= &r;
            let mul = mu[l].clone();
            for j in 0..l {
                let t = &r * &mul[j];
                mu[k][j] -= t;
            }
        }
    };

    let mut k = 1;
    while k < n {
        size_reduce(k, k - 1, &mut b, &mut u, &mut mu);
        let m = mu[k][k - 1].clone();
        if bsq[k] < (&delta - &m * &m) * &bsq[k - 1] {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let bn = &bsq[k] + &m * &m * &bsq[k - 1];
            mu[k][k - 1] = &m * &bsq[k - 1] / &bn;
            bsq[k] = &bsq[k - 1] * &bsq[k] / &bn;
            bsq[k - 1] = bn;
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(k, l, &mut b, &mut u, &mut mu);
            }
            k += 1;
        }
    }

    let transform = u
        .iter()
        .map(|col| col.iter().map(|x| bigint_to_i64(&x.to_integer())).collect())
        .collect();
    Ok(LllReduction {
        basis: LatticeBasis::new(b)?,
        transform,
    })
}

/// Checks size reduction and the Lovász condition, exactly.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: f64) -> bool {
    let n = basis.n();
    let cols = basis.columns();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut bsq: Vec<Rational> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let half = Rational::new(1.into(), 2.into());
    for i in 0..n {
        let mut v = cols[i].clone();
        for j in 0..i {
            mu[i][j] = rational::dot(&cols[i], &star[j]) / &bsq[j];
            if mu[i][j].abs() > half {
                return false;
            }
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        bsq.push(rational::sq_norm(&v));
        star.push(v);
    }
    let delta = rat_from_f64(delta);
    (1..n).all(|k| bsq[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bsq[k - 1])
}
