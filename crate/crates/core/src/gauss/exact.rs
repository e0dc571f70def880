use rand::Rng;

use super::mass::{rho, tail_radius};
use super::GaussianWidth;
use crate::error::Result;
use crate::lattice::{enum_context, node_budget, LatticeBasis, LatticePoint};

/// Inverse-CDF sampler over every lattice point in the tail ball of `D_{L,s}`.
#[derive(Clone, Debug)]
pub struct ExactSampler {
    n: usize,
    coeffs: Vec<i64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
    width: GaussianWidth,
}

impl ExactSampler {
    pub fn new(basis: &LatticeBasis, s: GaussianWidth) -> Result<Self> {
        let n = basis.n();
        let mut entries: Vec<(Vec<i64>, f64)> = Vec::new();
        enum_context(basis).visit_within(
            &vec![0.0; n],
            tail_radius(s.get(), n),
            node_budget(),
            |z, d2| {
                entries.push((z.to_vec(), rho(d2, s.get())));
            },
        )?;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut coeffs = Vec::with_capacity(entries.len() * n);
        let mut masses = Vec::with_capacity(entries.len());
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for (z, m) in entries {
            coeffs.extend_from_slice(&z);
            acc += m;
            masses.push(m);
            cumulative.push(acc);
        }
        Ok(ExactSampler {
            n,
            coeffs,
            masses,
            cumulative,
            width: s,
        })
    }

    pub fn width(&self) -> GaussianWidth {
        self.width
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Truncated `ρ_s(L)`.
    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Support point `i` (sorted by coefficients).
    pub fn point(&self, i: usize) -> &[i64] {
        &self.coeffs[i * self.n..(i + 1) * self.n]
    }

    /// Probability of support point `i`.
    pub fn probability(&self, i: usize) -> f64 {
        self.masses[i] / self.total_mass()
    }

    /// Index of `z` in the support table.
    pub fn index_of(&self, z: &[i64]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(z) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>() * self.total_mass();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LatticePoint {
        LatticePoint::new(self.point(self.sample_index(rng)).to_vec())
    }
}

/// One draw from `D_{L,s}`; builds the table on every call, so prefer [`ExactSampler`] for batches.
pub fn exact_dgs_sample<R: Rng + ?Sized>(
    basis: &LatticeBasis,
    s: GaussianWidth,
    rng: &mut R,
) -> Result<LatticePoint> {
    Ok(ExactSampler::new(basis, s)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn zero_probability_on_integer_line() {
        let b = LatticeBasis::identity(1);
        let t = ExactSampler::new(&b, GaussianWidth::new(1.0).unwrap()).unwrap();
        let i = t.index_of(&[0]).unwrap();
        assert!((t.probability(i) - 0.92043).abs() < 5e-5);
        assert!((t.probability(i) - 1.0 / 1.0864348112133082).abs() < 1e-12);
    }

    #[test]
    fn draws_are_symmetric() {
        let b = LatticeBasis::identity(1);
        let t = ExactSampler::new(&b, GaussianWidth::new(1.5).unwrap()).unwrap();
        let mut rng = stream_rng(11, 0);
        let draws = 1_000_000;
        let (mut plus, mut minus) = (0u64, 0u64);
        for _ in 0..draws {
            match t.sample(&mut rng).coeffs[0] {
                1 => plus += 1,
                -1 => minus += 1,
                _ => {}
            }
        }
        let p = t.probability(t.index_of(&[1]).unwrap());
        let sigma = (2.0 * draws as f64 * p * (1.0 - p)).sqrt();
        assert!(((plus as f64) - (minus as f64)).abs() < 3.0 * sigma);
    }
}
