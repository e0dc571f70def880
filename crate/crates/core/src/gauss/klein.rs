use std::f64::consts::PI;

use rand::Rng;

use super::mass::{rho, TAIL_MASS};
use super::GaussianWidth;
use crate::error::{Error, Result};
use crate::lattice::{LatticeBasis, LatticePoint};

/// Smallest width accepted by the randomized nearest-plane sampler.
pub fn klein_threshold(basis: &LatticeBasis) -> f64 {
    let n = basis.n() as f64;
    basis.gso().max_norm() * ((2.0 * n + 4.0).ln() / PI).sqrt()
}

/// Randomized nearest-plane sampler for `D_{L,s}` at widths above [`klein_threshold`].
#[derive(Clone, Debug)]
pub struct KleinSampler {
    widths: Vec<f64>,
    mu: Vec<Vec<f64>>,
    gso_vectors: Vec<Vec<f64>>,
    sq_norms: Vec<f64>,
    width: GaussianWidth,
}

impl KleinSampler {
    pub fn new(basis: &LatticeBasis, s: GaussianWidth) -> Result<Self> {
        let threshold = klein_threshold(basis);
        if s.get() < threshold {
            return Err(Error::WidthTooSmall {
                width: s.get(),
                threshold,
            });
        }
        let gso = basis.gso();
        Ok(KleinSampler {
            widths: gso.sq_norms.iter().map(|q| s.get() / q.sqrt()).collect(),
            mu: gso.mu.clone(),
            gso_vectors: gso.vectors.clone(),
            sq_norms: gso.sq_norms.clone(),
            width: s,
        })
    }

    pub fn width(&self) -> GaussianWidth {
        self.width
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LatticePoint {
        let n = self.widths.len();
        self.sample_centered(&vec![0.0; n], rng)
    }

    /// Draw from `D_{L,s}` shifted to be centred at `center` (ambient coordinates).
    pub fn sample_centered<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> LatticePoint {
        let n = self.widths.len();
        let t: Vec<f64> = (0..n)
            .map(|j| {
                self.gso_vectors[j]
                    .iter()
                    .zip(center)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / self.sq_norms[j]
            })
            .collect();
        let mut z = vec![0i64; n];
        for i in (0..n).rev() {
            let mut c = t[i];
            for j in i + 1..n {
                c -= z[j] as f64 * self.mu[j][i];
            }
            z[i] = sample_integer(c, self.widths[i], rng);
        }
        LatticePoint::new(z)
    }
}

/// `D_{Z,s,c}` by rejection from the uniform distribution on the tail interval.
fn sample_integer<R: Rng + ?Sized>(c: f64, s: f64, rng: &mut R) -> i64 {
    let reach = s * ((1.0 / TAIL_MASS).ln() / PI + 1.0).sqrt();
    let lo = (c - reach).ceil() as i64;
    let hi = ((c + reach).floor() as i64).max(lo);
    loop {
        let x = rng.random_range(lo..=hi);
        let d = x as f64 - c;
        if rng.random::<f64>() < rho(d * d, s) {
            return x;
        }
    }
}

pub fn klein_sample<R: Rng + ?Sized>(
    basis: &LatticeBasis,
    s: GaussianWidth,
    rng: &mut R,
) -> Result<LatticePoint> {
    Ok(KleinSampler::new(basis, s)?.sample(rng))
}
