//! Sampling at the smoothing parameter through random index-`2^a` superlattices.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gauss::{smoothing_parameter, ExactSampler, GaussianBatch, GaussianWidth, KleinSampler};
use crate::lattice::rational::{rat_from_i64, Rational};
use crate::lattice::{invert, lll_reduce, mat_vec_i64, LatticeBasis, LatticePoint, DEFAULT_DELTA};
use crate::rng::{child_stream, stream_rng, StreamRng};

/// Superlattice `L ⊆ L′ ⊆ L/2` with `[L′ : L] = 2^a`.
#[derive(Clone, Debug)]
pub struct DenseSuperlattice {
    pub base: LatticeBasis,
    /// `L′ = (B/2)·H`.
    pub dense: LatticeBasis,
    pub index_log: usize,
    /// Columns of `H`: coefficients of each `2·b′_j` in the base basis.
    pub dense_doubled_in_base: Vec<Vec<i64>>,
    /// Columns of `2H⁻¹`: coefficients of each `b_i` in the dense basis.
    pub base_in_dense: Vec<Vec<i64>>,
    /// Reduced echelon basis of the chosen subspace of `GF(2)^n`, one bitmask per vector.
    pub subspace: Vec<u64>,
}

impl DenseSuperlattice {
    /// Base-lattice coefficients of a dense point, if it lies in `L`.
    pub fn to_base(&self, dense_coeffs: &[i64]) -> Option<Vec<i64>> {
        let doubled = mat_vec_i64(&self.dense_doubled_in_base, dense_coeffs);
        doubled
            .iter()
            .all(|c| c % 2 == 0)
            .then(|| doubled.iter().map(|c| c / 2).collect())
    }

    /// Checks both inclusion certificates and the index, exactly.
    pub fn verify(&self) -> bool {
        let n = self.base.n();
        let base_ok = self
            .base_in_dense
            .iter()
            .zip(self.base.columns())
            .all(|(z, b)| &self.dense.embed(z) == b);
        let two = rat_from_i64(2);
        let doubled_ok = self
            .dense_doubled_in_base
            .iter()
            .zip(self.dense.columns())
            .all(|(z, d)| {
                let twice: Vec<Rational> = d.iter().map(|x| x * &two).collect();
                self.base.embed(z) == twice
            });
        let ratio = self.base.determinant() / self.dense.determinant();
        base_ok
            && doubled_ok
            && ratio == rat_from_i64(1i64 << self.index_log)
            && self.subspace.len() == self.index_log
            && n > self.index_log
    }
}

/// Default index exponent `⌈n/2⌉ + 4`, kept below `n`.
pub fn default_index_log(n: usize) -> usize {
    (n.div_ceil(2) + 4).min(n.saturating_sub(1)).max(1)
}

/// Uniform rank-`a` subspace of `GF(2)^n` in reduced echelon form (bit `i` = coordinate `i`).
fn random_subspace<R: Rng + ?Sized>(n: usize, a: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let cols: Vec<u64> = (0..a)
            .map(|_| rng.random::<u64>() & ((1u64 << n) - 1))
            .collect();
        if let Some(basis) = echelon(cols, n) {
            return basis;
        }
        log::trace!("degenerate GF(2) draw, resampling");
    }
}

/// Reduced echelon form with pivots at the lowest set bit; `None` if rank-deficient.
fn echelon(mut rows: Vec<u64>, n: usize) -> Option<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for bit in 0..n {
        let mask = 1u64 << bit;
        let Some(j) = (r..rows.len()).find(|&j| rows[j] & mask != 0) else {
            continue;
        };
        rows.swap(r, j);
        for i in 0..rows.len() {
            if i != r && rows[i] & mask != 0 {
                rows[i] ^= rows[r];
            }
        }
        pivots.push(bit);
        r += 1;
    }
    (r == rows.len()).then_some(rows)
}

/// Random superlattice of index `2^a` between `L` and `L/2`.
pub fn dense_superlattice<R: Rng + ?Sized>(
    basis: &LatticeBasis,
    a: usize,
    rng: &mut R,
) -> Result<DenseSuperlattice> {
    let n = basis.n();
    if a == 0 || a >= n || n > 63 {
        return Err(Error::OutOfDomain(format!(
            "index exponent {a} must lie in [1, n) for n = {n}"
        )));
    }
    superlattice_from_subspace(basis, a, random_subspace(n, a, rng))
}

/// The superlattice `L + (1/2)·B·V` for an echelon-form subspace `V` of `GF(2)^n`.
fn superlattice_from_subspace(
    basis: &LatticeBasis,
    a: usize,
    subspace: Vec<u64>,
) -> Result<DenseSuperlattice> {
    let n = basis.n();
    let pivots: Vec<usize> = subspace
        .iter()
        .map(|v| v.trailing_zeros() as usize)
        .collect();
    let mut h: Vec<Vec<i64>> = subspace
        .iter()
        .map(|v| (0..n).map(|i| ((v >> i) & 1) as i64).collect())
        .collect();
    for j in (0..n).filter(|j| !pivots.contains(j)) {
        let mut e = vec![0; n];
        e[j] = 2;
        h.push(e);
    }
    let half = Rational::new(1.into(), 2.into());
    let dense_cols: Vec<Vec<Rational>> = h
        .iter()
        .map(|col| basis.embed(col).into_iter().map(|x| x * &half).collect())
        .collect();
    let dense = LatticeBasis::new(dense_cols)?;
    // columns of 2H⁻¹: solve H·z = 2e_i
    let h_rat: Vec<Vec<Rational>> = (0..n)
        .map(|r| h.iter().map(|col| rat_from_i64(col[r])).collect())
        .collect();
    let h_inv = invert(h_rat).ok_or(Error::SingularBasis)?;
    let base_in_dense: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|r| {
                    let v = &h_inv[r][i] * rat_from_i64(2);
                    debug_assert!(v.is_integer());
                    crate::lattice::rational::rat_to_f64(&v) as i64
                })
                .collect()
        })
        .collect();
    let out = DenseSuperlattice {
        base: basis.clone(),
        dense,
        index_log: a,
        dense_doubled_in_base: h,
        base_in_dense,
        subspace,
    };
    debug_assert!(out.verify());
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SmoothingRunReport {
    pub rounds: usize,
    /// Rounds skipped because `√2·η_{1/2}(L′)` exceeded `s`.
    pub rejected_rounds: usize,
    pub draws: usize,
    pub kept: usize,
}

/// Draw source for `D_{L′,s}` on one superlattice.
enum DenseSource {
    Exact(ExactSampler),
    Klein(KleinSampler, Vec<Vec<i64>>),
}

impl DenseSource {
    fn new(dense: &LatticeBasis, s: GaussianWidth) -> Result<Self> {
        if dense.n() <= 6 {
            return Ok(DenseSource::Exact(ExactSampler::new(dense, s)?));
        }
        let red = lll_reduce(dense, DEFAULT_DELTA)?;
        Ok(DenseSource::Klein(
            KleinSampler::new(&red.basis, s)?,
            red.transform,
        ))
    }

    fn draw(&self, rng: &mut StreamRng) -> Vec<i64> {
        match self {
            DenseSource::Exact(t) => t.sample(rng).coeffs,
            DenseSource::Klein(k, u) => mat_vec_i64(u, &k.sample(rng).coeffs),
        }
    }
}

/// Options for [`sample_at_smoothing`].
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingSamplerOptions {
    pub index_log: Option<usize>,
    /// Draws from `D_{L′,s}` per round; defaults to `2^{⌈n/2⌉}`.
    pub per_round: Option<usize>,
    /// Verify `s ≥ η_{1/3}(L)` and `s ≥ √2·η_{1/2}(L′)` where computable (n ≤ 6).
    pub check_smoothing: bool,
}

impl Default for SmoothingSamplerOptions {
    fn default() -> Self {
        SmoothingSamplerOptions {
            index_log: None,
            per_round: None,
            check_smoothing: true,
        }
    }
}

/// `m` draws from `D_{L,s}` at `s ≥ η_{1/3}(L)` by rejection from random superlattices.
pub fn sample_at_smoothing(
    basis: &LatticeBasis,
    s: GaussianWidth,
    m: usize,
    seed: u64,
    opts: &SmoothingSamplerOptions,
) -> Result<(GaussianBatch, SmoothingRunReport)> {
    let n = basis.n();
    if n < 2 {
        return Err(Error::OutOfDomain(
            "superlattice sampling needs n ≥ 2".into(),
        ));
    }
    let checkable = opts.check_smoothing && n <= 6;
    if checkable {
        let eta = smoothing_parameter(basis, 1.0 / 3.0)?;
        if s.get() < eta.s_lo {
            return Err(Error::WidthTooSmall {
                width: s.get(),
                threshold: eta.s_lo,
            });
        }
    }
    let a = opts.index_log.unwrap_or_else(|| default_index_log(n));
    if a == 0 || a >= n || n > 63 {
        return Err(Error::OutOfDomain(format!(
            "index exponent {a} must lie in [1, n) for n = {n}"
        )));
    }
    let per_round = opts.per_round.unwrap_or(1usize << n.div_ceil(2));
    let mut cache: HashMap<Vec<u64>, Option<(DenseSuperlattice, DenseSource)>> = HashMap::new();
    let mut report = SmoothingRunReport::default();
    let mut out = Vec::with_capacity(m);
    let mut round = 0u64;
    while out.len() < m {
        let mut rng = stream_rng(seed, child_stream(0xd5e, round));
        round += 1;
        report.rounds += 1;
        let subspace = random_subspace(n, a, &mut rng);
        let entry = match cache.get(&subspace) {
            Some(e) => e,
            None => {
                let probe = superlattice_from_subspace(basis, a, subspace.clone())?;
                let usable = if checkable {
                    let eta = smoothing_parameter(&probe.dense, 0.5)?;
                    std::f64::consts::SQRT_2 * eta.s_lo <= s.get()
                } else {
                    true
                };
                let value = if usable {
                    let src = DenseSource::new(&probe.dense, s)?;
                    Some((probe.clone(), src))
                } else {
                    None
                };
                cache.entry(subspace).or_insert(value)
            }
        };
        let Some((dense, src)) = entry else {
            report.rejected_rounds += 1;
            continue;
        };
        for _ in 0..per_round {
            let z = src.draw(&mut rng);
            report.draws += 1;
            if let Some(base) = dense.to_base(&z) {
                out.push(LatticePoint::new(base));
                if out.len() == m {
                    break;
                }
            }
        }
    }
    report.kept = out.len();
    Ok((GaussianBatch::new(out, s, seed, 0.0)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_two_over_doubled_plane() {
        let b = LatticeBasis::from_integer_columns(&[vec![2, 0], vec![0, 2]]).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..60 {
            let mut rng = stream_rng(3, i);
            let d = dense_superlattice(&b, 1, &mut rng).unwrap();
            assert!(d.verify());
            assert_eq!(d.dense.determinant(), rat_from_i64(2));
            seen.insert(d.subspace.clone());
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn membership_maps_back_to_base() {
        let b = LatticeBasis::from_integer_columns(&[vec![3, 1, 0], vec![1, 4, 1], vec![0, 2, 5]])
            .unwrap();
        let mut rng = stream_rng(8, 0);
        let d = dense_superlattice(&b, 2, &mut rng).unwrap();
        for (i, z) in d.base_in_dense.iter().enumerate() {
            let mut e = vec![0; 3];
            e[i] = 1;
            assert_eq!(d.to_base(z).unwrap(), e);
        }
    }

    #[test]
    fn index_range_is_enforced() {
        let b = LatticeBasis::identity(3);
        let mut rng = stream_rng(1, 0);
        assert!(dense_superlattice(&b, 3, &mut rng).is_err());
        assert!(dense_superlattice(&b, 0, &mut rng).is_err());
        assert_eq!(default_index_log(2), 1);
        assert_eq!(default_index_log(12), 10);
        assert_eq!(default_index_log(20), 14);
    }

    #[test]
    fn kept_points_lie_in_base() {
        let b = LatticeBasis::identity(2);
        let eta = smoothing_parameter(&b, 1.0 / 3.0).unwrap();
        let s = GaussianWidth::new(1.1 * eta.s_hi).unwrap();
        let (batch, report) = sample_at_smoothing(&b, s, 500, 4, &Default::default()).unwrap();
        assert_eq!(batch.len(), 500);
        assert!(report.draws >= 500);
    }
}
