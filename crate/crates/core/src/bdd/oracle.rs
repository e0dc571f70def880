use std::f64::consts::PI;

use num_traits::ToPrimitive;

use super::exact::{exact_bdd, nearest_candidates};
use crate::combiner::{dgs_pipeline, PipelineConfig, PipelineOptions};
use crate::dense::{default_index_log, sample_at_smoothing, SmoothingSamplerOptions};
use crate::error::{Error, Result};
use crate::gauss::{
    klein_threshold, smoothing_parameter, ExactSampler, GaussianBatch, GaussianWidth,
    SmoothingEstimate,
};
use crate::lattice::rational::{self, rat_to_f64, rats_to_f64, Rational};
use crate::lattice::{
    dual_basis, first_minimum, invert, lll_reduce, mat_vec_i64, LatticeBasis, LatticePoint,
    DEFAULT_DELTA,
};
use crate::rng::{child_stream, stream_rng};

/// Default constant in `m = ⌈c·n·log₂(1/ε)/√ε⌉`.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 10.0;
/// Gradient-ascent step budget per query.
pub const ASCENT_BUDGET: usize = 200;

/// Source of the dual Gaussian samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualSource {
    /// Rejection from random dense superlattices of `L*`.
    Smoothing,
    /// Inverse-CDF table on `L*`.
    Exact,
    /// The combining pipeline on `L*` with modulus `q`.
    Pipeline { q: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BddConfig {
    pub eps: f64,
    pub sample_constant: f64,
    /// Subtracted from `ln(1/ε)/π` before taking the root, standing in for the `o(1)` term.
    pub conservative_slack: f64,
    /// Overrides the enumerated `λ1`.
    pub lambda1: Option<f64>,
    pub source: DualSource,
    /// Caps `m`; `None` uses the formula.
    pub max_samples: Option<usize>,
}

impl BddConfig {
    pub fn new(eps: f64) -> Self {
        BddConfig {
            eps,
            sample_constant: DEFAULT_SAMPLE_CONSTANT,
            conservative_slack: 0.0,
            lambda1: None,
            source: DualSource::Smoothing,
            max_samples: None,
        }
    }
}

/// `⌈c·n·log₂(1/ε)/√ε⌉`.
pub fn sample_count(c: f64, n: usize, eps: f64) -> usize {
    (c * n as f64 * (1.0 / eps).log2() / eps.sqrt()).ceil() as usize
}

/// `√(ln(1/ε)/π − slack) / (2·η·λ1)`.
pub fn decoding_coefficient(eps: f64, eta_dual: f64, lambda1: f64, slack: f64) -> f64 {
    ((1.0 / eps).ln() / PI - slack).max(0.0).sqrt() / (2.0 * eta_dual * lambda1)
}

/// Per-query work counters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BddQueryReport {
    pub estimator_calls: usize,
    pub ascent_steps: usize,
    pub converged: bool,
    /// The estimate at the target was too small for the promise; the answer is plain rounding.
    pub gated: bool,
    pub residual: f64,
}

/// Decoder built from `m` samples of `D_{L*, η_ε(L*)}`.
#[derive(Clone, Debug)]
pub struct BddOracle {
    pub basis: LatticeBasis,
    pub eps: f64,
    pub alpha: f64,
    pub lambda1: f64,
    pub phi: f64,
    pub sample_constant: f64,
    pub eta_dual: SmoothingEstimate,
    /// Dual samples as coefficients in the dual basis.
    pub samples: GaussianBatch,
    kernel: Kernel,
    snap: Snap,
    gram_inv: Vec<Vec<f64>>,
}

/// Flattened dual-sample coefficients and per-coordinate table offsets.
#[derive(Clone, Debug)]
struct Kernel {
    n: usize,
    m: usize,
    lo: Vec<i64>,
    offsets: Vec<usize>,
    table_len: usize,
    slots: Vec<u32>,
    coeffs: Vec<f64>,
}

impl Kernel {
    fn new(points: &[LatticePoint], n: usize) -> Self {
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for p in points {
            for k in 0..n {
                lo[k] = lo[k].min(p.coeffs[k]);
                hi[k] = hi[k].max(p.coeffs[k]);
            }
        }
        if points.is_empty() {
            lo = vec![0; n];
            hi = vec![0; n];
        }
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0;
        for k in 0..n {
            offsets.push(acc);
            acc += (hi[k] - lo[k] + 1) as usize;
        }
        let mut slots = Vec::with_capacity(points.len() * n);
        let mut coeffs = Vec::with_capacity(points.len() * n);
        for p in points {
            for k in 0..n {
                slots.push((offsets[k] as i64 + p.coeffs[k] - lo[k]) as u32);
                coeffs.push(p.coeffs[k] as f64);
            }
        }
        Kernel {
            n,
            m: points.len(),
            lo,
            offsets,
            table_len: acc,
            slots,
            coeffs,
        }
    }

    /// `(Σ cos θ_j, Σ sin θ_j·z_j)` with `θ_j = 2π⟨z_j, u⟩`.
    fn sums(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let n = self.n;
        let mut re = vec![0.0; self.table_len];
        let mut im = vec![0.0; self.table_len];
        for k in 0..n {
            let base = self.offsets[k];
            let end = self.offsets.get(k + 1).copied().unwrap_or(self.table_len);
            for (i, slot) in (base..end).enumerate() {
                let t = (self.lo[k] + i as i64) as f64;
                let (s, c) = (2.0 * PI * t * u[k]).sin_cos();
                re[slot] = c;
                im[slot] = s;
            }
        }
        let mut cos_sum = 0.0;
        let mut sin_vec = vec![0.0; n];
        for j in 0..self.m {
            let sl = &self.slots[j * n..(j + 1) * n];
            let (mut a, mut b) = (re[sl[0] as usize], im[sl[0] as usize]);
            for &s in &sl[1..] {
                let (c, d) = (re[s as usize], im[s as usize]);
                let r = a * c - b * d;
                b = a * d + b * c;
                a = r;
            }
            cos_sum += a;
            let z = &self.coeffs[j * n..(j + 1) * n];
            for k in 0..n {
                sin_vec[k] += b * z[k];
            }
        }
        (cos_sum, sin_vec)
    }
}

/// Nearest-plane rounding on an LLL-reduced copy of the basis.
#[derive(Clone, Debug)]
struct Snap {
    columns: Vec<Vec<f64>>,
    gso_vectors: Vec<Vec<f64>>,
    sq_norms: Vec<f64>,
    mu: Vec<Vec<f64>>,
    transform: Vec<Vec<i64>>,
}

impl Snap {
    fn new(basis: &LatticeBasis) -> Result<Self> {
        let red = lll_reduce(basis, DEFAULT_DELTA)?;
        let gso = red.basis.gso();
        Ok(Snap {
            columns: basis.columns_f64().to_vec(),
            gso_vectors: gso.vectors.clone(),
            sq_norms: gso.sq_norms.clone(),
            mu: gso.mu.clone(),
            transform: red.transform,
        })
    }

    /// Input-basis coefficients of the lattice point nearest-plane-closest to `B·u`.
    fn round(&self, u: &[f64]) -> Vec<i64> {
        let n = u.len();
        let mut x = vec![0.0; n];
        for (col, &uk) in self.columns.iter().zip(u) {
            for (xi, ci) in x.iter_mut().zip(col) {
                *xi += uk * ci;
            }
        }
        let t: Vec<f64> = (0..n)
            .map(|i| {
                self.gso_vectors[i]
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / self.sq_norms[i]
            })
            .collect();
        let mut z = vec![0i64; n];
        for i in (0..n).rev() {
            let mut c = t[i];
            for j in i + 1..n {
                c -= z[j] as f64 * self.mu[j][i];
            }
            z[i] = c.round() as i64;
        }
        mat_vec_i64(&self.transform, &z)
    }
}

/// Builds the oracle: bracket `η_ε(L*)`, draw `m` dual samples at its upper end.
pub fn build_bdd_oracle(basis: &LatticeBasis, cfg: &BddConfig, seed: u64) -> Result<BddOracle> {
    let n = basis.n();
    if !(cfg.eps > 1e-12 && cfg.eps < 1.0 / 3.0) {
        return Err(Error::OutOfDomain(format!(
            "eps {} not in (1e-12, 1/3)",
            cfg.eps
        )));
    }
    let dual = dual_basis(basis).as_basis()?;
    let eta = smoothing_parameter(&dual, cfg.eps)?;
    let lambda1 = match cfg.lambda1 {
        Some(l) => l,
        None => first_minimum(basis)?,
    };
    let alpha = decoding_coefficient(cfg.eps, eta.s_hi, lambda1, cfg.conservative_slack);
    let mut m = sample_count(cfg.sample_constant, n, cfg.eps);
    if let Some(cap) = cfg.max_samples {
        m = m.min(cap);
    }
    log::info!(
        "bdd oracle: n={n} eps={:e} c={} m={m} eta*=[{:.6}, {:.6}] lambda1={lambda1:.6} alpha={alpha:.6}",
        cfg.eps,
        cfg.sample_constant,
        eta.s_lo,
        eta.s_hi
    );
    let width = GaussianWidth::new(eta.s_hi)?;
    let samples = match cfg.source {
        DualSource::Smoothing => {
            // Restricting i.i.d. draws on any L′ to L is exact, so long rounds only
            // trade superlattice variety for fewer table builds on L′.
            let a = default_index_log(n);
            let opts = SmoothingSamplerOptions {
                check_smoothing: n <= 6,
                per_round: Some((m << a).div_ceil(4).max(1 << n.div_ceil(2))),
                ..Default::default()
            };
            sample_at_smoothing(&dual, width, m, seed, &opts)?.0
        }
        DualSource::Exact => {
            let table = ExactSampler::new(&dual, width)?;
            let mut rng = stream_rng(seed, child_stream(0xbdd, 0));
            let pts = (0..m).map(|_| table.sample(&mut rng)).collect();
            GaussianBatch::new(pts, width, seed, 0.0)?
        }
        DualSource::Pipeline { q } => {
            let pc = PipelineConfig::new(n, q, width, klein_threshold(&dual))?;
            dgs_pipeline(&dual, &pc, m, seed, &PipelineOptions::default())?.batch
        }
    };
    BddOracle::assemble(
        basis.clone(),
        cfg.eps,
        alpha,
        lambda1,
        cfg.sample_constant,
        eta,
        samples,
    )
}

impl BddOracle {
    pub(crate) fn assemble(
        basis: LatticeBasis,
        eps: f64,
        alpha: f64,
        lambda1: f64,
        sample_constant: f64,
        eta_dual: SmoothingEstimate,
        samples: GaussianBatch,
    ) -> Result<Self> {
        let n = basis.n();
        if samples.dim() != n && !samples.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: samples.dim(),
            });
        }
        let gram: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        crate::lattice::rational::dot(&basis.columns()[i], &basis.columns()[j])
                    })
                    .collect()
            })
            .collect();
        let gram_inv = invert(gram)
            .ok_or(Error::SingularBasis)?
            .iter()
            .map(|row| row.iter().map(rat_to_f64).collect())
            .collect();
        let kernel = Kernel::new(&samples.points, n);
        let snap = Snap::new(&basis)?;
        Ok(BddOracle {
            phi: alpha * lambda1,
            basis,
            eps,
            alpha,
            lambda1,
            sample_constant,
            eta_dual,
            samples,
            kernel,
            snap,
            gram_inv,
        })
    }

    pub fn m(&self) -> usize {
        self.samples.len()
    }

    /// Width of the dual samples.
    pub fn dual_width(&self) -> f64 {
        self.samples.width.get()
    }

    /// Half the expected estimate at distance `φ`; targets scoring below it break the promise.
    pub fn promise_floor(&self) -> f64 {
        let s = self.dual_width();
        0.5 * (-std::f64::consts::PI * s * s * self.phi * self.phi).exp()
    }

    /// `f̂` at coefficient vector `u` (fractional parts suffice).
    fn estimate_at(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let (c, s) = self.kernel.sums(u);
        let m = self.kernel.m.max(1) as f64;
        (c / m, s)
    }

    /// Splits exact coefficients into integer parts and fractional parts in `[0, 1)`.
    fn split(&self, coeffs: &[Rational]) -> (Vec<i64>, Vec<f64>) {
        coeffs
            .iter()
            .map(|c| {
                let fl = c.floor();
                let whole = fl.to_integer().to_i64().expect("coefficient fits in i64");
                (whole, rat_to_f64(&(c - fl)))
            })
            .unzip()
    }

    /// `f̂(x) = (1/m)·Σ cos(2π⟨w_j, x⟩)`, evaluated on exact coefficients reduced mod 1.
    pub fn estimate(&self, x: &[Rational]) -> f64 {
        self.estimate_coeffs(&self.basis.coordinates(x))
    }

    pub fn estimate_coeffs(&self, coeffs: &[Rational]) -> f64 {
        let (_, frac) = self.split(coeffs);
        self.estimate_at(&frac).0
    }

    /// Decodes an ambient target.
    pub fn decode(&self, target: &[Rational]) -> Result<(LatticePoint, BddQueryReport)> {
        self.decode_coeffs(&self.basis.coordinates(target))
    }

    /// Decodes a target given by its exact coefficients in the basis.
    pub fn decode_coeffs(&self, coeffs: &[Rational]) -> Result<(LatticePoint, BddQueryReport)> {
        let n = self.basis.n();
        let (whole, mut u) = self.split(coeffs);
        let start = u.clone();
        let mut report = BddQueryReport::default();
        let s2 = self.dual_width().powi(2);
        let m = self.kernel.m.max(1) as f64;
        let (mut f, mut sv) = self.estimate_at(&u);
        report.estimator_calls += 1;
        let tol = 1e-9 * self.lambda1.max(1e-300);
        let mut gamma = 1.0;
        if f < self.promise_floor() {
            report.gated = true;
        } else if f < 1.0 {
            loop {
                if report.ascent_steps >= ASCENT_BUDGET {
                    return Err(Error::NotConverged {
                        steps: report.ascent_steps,
                    });
                }
                report.ascent_steps += 1;
                let denom = m * s2 * f.max(1e-3);
                let g: Vec<f64> = (0..n).map(|i| -sv[i] / denom).collect();
                let delta: Vec<f64> = (0..n)
                    .map(|i| (0..n).map(|j| self.gram_inv[i][j] * g[j]).sum())
                    .collect();
                let step_len = gamma * self.x_norm(&delta);
                if step_len < tol {
                    break;
                }
                let cand: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + gamma * d).collect();
                let (fc, sc) = self.estimate_at(&cand);
                report.estimator_calls += 1;
                if fc > f {
                    u = cand;
                    f = fc;
                    sv = sc;
                    gamma = (2.0 * gamma).min(1.0);
                } else {
                    gamma *= 0.5;
                }
            }
        }
        report.converged = !report.gated;
        let rel = self.snap.round(&u);
        let coeffs: Vec<i64> = rel.iter().zip(&whole).map(|(a, b)| a + b).collect();
        let diff: Vec<f64> = rel.iter().zip(&start).map(|(a, b)| *a as f64 - b).collect();
        report.residual = self.x_norm(&diff);
        Ok((LatticePoint::new(coeffs), report))
    }

    /// `‖B·v‖` for a coefficient vector.
    fn x_norm(&self, v: &[f64]) -> f64 {
        let n = v.len();
        let mut x = vec![0.0; n];
        for (col, &vk) in self.snap.columns.iter().zip(v) {
            for (xi, ci) in x.iter_mut().zip(col) {
                *xi += vk * ci;
            }
        }
        x.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Closest-vector oracle used by the solvers.
pub trait BddDecoder: Sync {
    fn basis(&self) -> &LatticeBasis;
    /// Decoding coefficient `α` with `φ = α·λ1`.
    fn alpha(&self) -> f64;
    /// Nearest lattice point to `B·coeffs`, or `None` when decoding fails.
    fn decode_coeffs(&self, coeffs: &[Rational]) -> Option<LatticePoint>;
}

impl BddDecoder for BddOracle {
    fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn decode_coeffs(&self, coeffs: &[Rational]) -> Option<LatticePoint> {
        match BddOracle::decode_coeffs(self, coeffs) {
            Ok((p, _)) => Some(p),
            Err(e) => {
                log::debug!("bdd query failed: {e}");
                None
            }
        }
    }
}

/// Reference decoder backed by enumeration: the closest vector whenever it lies within
/// `α·λ1` of the target, nothing otherwise.
#[derive(Clone, Debug)]
pub struct ExactBdd {
    pub basis: LatticeBasis,
    pub alpha: f64,
    pub lambda1: f64,
}

impl ExactBdd {
    pub fn new(basis: LatticeBasis, alpha: f64) -> Result<Self> {
        let lambda1 = first_minimum(&basis)?;
        Ok(ExactBdd {
            basis,
            alpha,
            lambda1,
        })
    }
}

impl BddDecoder for ExactBdd {
    fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn decode_coeffs(&self, coeffs: &[Rational]) -> Option<LatticePoint> {
        let reach = self.alpha * self.lambda1;
        let reach2 = reach * reach;
        // Floating arithmetic settles every query whose nearest point is unique and not
        // within a relative 1e-6 of the decoding radius; the rest go through rationals.
        let cf = rats_to_f64(coeffs);
        let start: Vec<i64> = cf.iter().map(|x| x.round() as i64).collect();
        let center = embed_f64_coeffs(&self.basis, &cf);
        let near = nearest_candidates(&self.basis, &center, &start).ok()?;
        if let [(d2, z)] = near.as_slice() {
            if *d2 < reach2 * (1.0 - 1e-6) {
                return Some(LatticePoint::new(z.clone()));
            }
            if *d2 > reach2 * (1.0 + 1e-6) {
                return None;
            }
        }
        let target = self.basis.embed_rational(coeffs);
        let p = exact_bdd(&self.basis, &target).ok()?;
        let diff: Vec<Rational> = p
            .embed(&self.basis)
            .iter()
            .zip(&target)
            .map(|(a, b)| a - b)
            .collect();
        (rat_to_f64(&rational::sq_norm(&diff)) <= reach2 * (1.0 + 1e-9)).then_some(p)
    }
}

fn embed_f64_coeffs(basis: &LatticeBasis, c: &[f64]) -> Vec<f64> {
    let cols = basis.columns_f64();
    let mut out = vec![0.0; basis.n()];
    for (col, &ci) in cols.iter().zip(c) {
        for (o, &b) in out.iter_mut().zip(col) {
            *o += ci * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{rat_from_i64, rats_from_f64};

    fn z1_oracle(seed: u64) -> BddOracle {
        let b = LatticeBasis::identity(1);
        let mut cfg = BddConfig::new(1e-3);
        cfg.source = DualSource::Exact;
        build_bdd_oracle(&b, &cfg, seed).unwrap()
    }

    #[test]
    fn estimate_is_one_on_the_lattice() {
        let o = z1_oracle(1);
        assert_eq!(o.estimate(&[rat_from_i64(0)]), 1.0);
        assert_eq!(o.estimate(&[rat_from_i64(7)]), 1.0);
    }

    #[test]
    fn estimate_decreases_away_from_the_lattice() {
        for seed in 0..10 {
            let o = z1_oracle(seed);
            let f = |x: f64| o.estimate(&rats_from_f64(&[x]));
            assert!(f(0.5) < f(0.1) && f(0.1) < f(0.0), "seed {seed}");
        }
    }

    #[test]
    fn periodicity_is_bit_exact() {
        let b = LatticeBasis::from_integer_columns(&[vec![2, 1], vec![1, 3]]).unwrap();
        let mut cfg = BddConfig::new(1e-2);
        cfg.source = DualSource::Exact;
        let o = build_bdd_oracle(&b, &cfg, 3).unwrap();
        let x = rats_from_f64(&[0.3, -0.45]);
        let y = b.embed(&[5, -3]);
        let shifted: Vec<Rational> = x.iter().zip(&y).map(|(a, c)| a + c).collect();
        assert_eq!(o.estimate(&x).to_bits(), o.estimate(&shifted).to_bits());
    }

    #[test]
    fn sample_count_formula() {
        assert_eq!(
            sample_count(10.0, 4, 1e-4),
            (10.0 * 4.0 * (1e4f64).log2() / 1e-2).ceil() as usize
        );
    }

    #[test]
    fn lattice_target_needs_no_ascent() {
        let o = z1_oracle(2);
        let (p, r) = o.decode(&[rat_from_i64(3)]).unwrap();
        assert_eq!(p.coeffs, vec![3]);
        assert_eq!(r.ascent_steps, 0);
    }

    #[test]
    fn decodes_near_targets_on_integer_plane() {
        let b = LatticeBasis::identity(2);
        let mut cfg = BddConfig::new(1e-3);
        cfg.source = DualSource::Exact;
        let o = build_bdd_oracle(&b, &cfg, 5).unwrap();
        for (t, want) in [
            ([0.2, -0.1], [0, 0]),
            ([3.8, 1.1], [4, 1]),
            ([-2.15, 0.25], [-2, 0]),
        ] {
            let (p, _) = o.decode(&rats_from_f64(&t)).unwrap();
            assert_eq!(p.coeffs, want.to_vec());
        }
    }
}
