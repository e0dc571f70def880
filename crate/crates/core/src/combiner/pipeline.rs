use super::combine::{combine_batch, AuditRecord, CombinerConfig};
use crate::error::{Error, Result};
use crate::gauss::{klein_threshold, sample_batch, GaussianBatch, GaussianWidth, KleinSampler};
use crate::lattice::{LatticeBasis, LatticePoint};
use crate::rng::child_stream;

/// Draws per Klein seeding step when no combining round is needed.
const DIRECT_CHUNK: usize = 4096;
/// Consecutive empty combining rounds tolerated before giving up.
const STARVE_LIMIT: usize = 16;

/// Parameters of the iterated width-reduction pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub n: usize,
    pub q: u32,
    /// `q^{−32n/q²}`.
    pub eps: f64,
    /// Smallest `d` with `q² ≤ 16d`.
    pub d: u32,
    /// `q/√(8d+1)`.
    pub alpha: f64,
    /// `⌈2√d·q⌉`.
    pub p: u32,
    /// Number of combining rounds.
    pub k: usize,
    /// Target output width.
    pub s: GaussianWidth,
    /// Width the seed sampler must reach.
    pub start_width: f64,
}

impl PipelineConfig {
    /// `start_width` is the widest seed width required; `k` is the smallest count
    /// with `α^k·p·s ≥ start_width`.
    pub fn new(n: usize, q: u32, s: GaussianWidth, start_width: f64) -> Result<Self> {
        if q < 4 {
            return Err(Error::OutOfDomain(format!("pipeline needs q ≥ 4, got {q}")));
        }
        if (q as f64) > (n as f64).sqrt() {
            log::info!(
                "q = {q} exceeds sqrt(n) = {:.3}; running outside the asymptotic regime",
                (n as f64).sqrt()
            );
        }
        let qf = q as f64;
        let d = (q * q).div_ceil(16);
        debug_assert!(16 * d - 16 < q * q && q * q <= 16 * d);
        let alpha = qf / (8.0 * d as f64 + 1.0).sqrt();
        let p = (2.0 * (d as f64).sqrt() * qf).ceil() as u32;
        let eps = qf.powf(-32.0 * n as f64 / (qf * qf));
        let mut k = 0;
        while alpha.powi(k as i32) * p as f64 * s.get() < start_width {
            k += 1;
        }
        Ok(PipelineConfig {
            n,
            q,
            eps,
            d,
            alpha,
            p,
            k,
            s,
            start_width,
        })
    }

    /// Seed width `g = α^k·p·s`.
    pub fn seed_width(&self) -> f64 {
        self.alpha.powi(self.k as i32) * self.p as f64 * self.s.get()
    }

    /// Width of samples entering combining round `i`.
    pub fn level_width(&self, i: usize) -> f64 {
        self.seed_width() / self.alpha.powi(i as i32)
    }

    pub fn combiner(&self, level: usize) -> Result<CombinerConfig> {
        CombinerConfig::new(
            self.q,
            self.d,
            1,
            GaussianWidth::new(self.level_width(level))?,
            self.eps,
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineOptions {
    /// Verify and keep `q·o = Σx − v` for every emitted point.
    pub audit: bool,
    /// Check the seed width against the Klein threshold only (default) or also `η_ε`.
    pub check_smoothing: bool,
}

/// One audited combination, with coefficients rather than indices.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub level: usize,
    pub v: LatticePoint,
    pub xs: Vec<LatticePoint>,
    pub output: LatticePoint,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineReport {
    pub seed_draws: usize,
    pub combines: usize,
    pub starved_combines: usize,
    pub filtered_in: usize,
    pub filtered_kept: usize,
    /// Largest live buffer seen at each level.
    pub peak_level: Vec<usize>,
    pub audit_failures: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub batch: GaussianBatch,
    pub report: PipelineReport,
    pub audit: Vec<AuditEntry>,
}

/// Samples `count` points close to `D_{L,s}`: seeds at `α^k·p·s`, runs `k`
/// combining rounds through bounded level buffers, then keeps `pL` and divides by `p`.
pub fn dgs_pipeline(
    basis: &LatticeBasis,
    cfg: &PipelineConfig,
    count: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome> {
    let n = basis.n();
    if n != cfg.n {
        return Err(Error::DimensionMismatch {
            expected: cfg.n,
            got: n,
        });
    }
    let sampler = KleinSampler::new(basis, GaussianWidth::new(cfg.seed_width())?)?;
    if opts.check_smoothing && cfg.k > 0 {
        cfg.combiner(cfg.k - 1)?.check_width(basis)?;
    }
    log::debug!(
        "pipeline n={n} q={} d={} p={} k={} seed width {:.4} (klein threshold {:.4})",
        cfg.q,
        cfg.d,
        cfg.p,
        cfg.k,
        cfg.seed_width(),
        klein_threshold(basis)
    );
    let k = cfg.k;
    let combiners: Vec<CombinerConfig> = (0..k).map(|i| cfg.combiner(i)).collect::<Result<_>>()?;
    let block = combiners.first().map_or(DIRECT_CHUNK, |c| c.input_count(n));
    let mut levels: Vec<Vec<LatticePoint>> = vec![Vec::new(); k + 1];
    let mut report = PipelineReport {
        peak_level: vec![0; k + 1],
        ..Default::default()
    };
    let mut audit = Vec::new();
    let mut finals: Vec<LatticePoint> = Vec::with_capacity(count);
    let mut closeness = 0.0;
    let mut seedings = 0u64;
    let mut empty_run = 0usize;

    while finals.len() < count {
        if let Some(i) = (0..k)
            .rev()
            .find(|&i| levels[i].len() >= combiners[i].input_count(n))
        {
            let cc = &combiners[i];
            let take = cc.input_count(n);
            let input = GaussianBatch::new(levels[i].drain(..take).collect(), cc.width_in, 0, 0.0)?;
            let outcome = combine_batch(&input, cc)?;
            report.combines += 1;
            closeness += cc.closeness(n);
            if outcome.starved() {
                report.starved_combines += 1;
            }
            if outcome.achieved() == 0 {
                empty_run += 1;
                if empty_run >= STARVE_LIMIT {
                    return Err(Error::Starved {
                        achieved: finals.len(),
                        target: count,
                    });
                }
            } else {
                empty_run = 0;
            }
            if opts.audit {
                collect_audit(
                    &mut audit,
                    &mut report,
                    i,
                    &input.points,
                    &outcome.records,
                    cfg.q,
                );
            }
            levels[i + 1].extend(outcome.batch.points);
            report.peak_level[i + 1] = report.peak_level[i + 1].max(levels[i + 1].len());
        } else if !levels[k].is_empty() {
            let stage = GaussianBatch::new(
                std::mem::take(&mut levels[k]),
                GaussianWidth::new(cfg.level_width(k))?,
                0,
                0.0,
            )?;
            report.filtered_in += stage.len();
            let kept = super::combine::filter_sublattice(&stage, cfg.p);
            report.filtered_kept += kept.len();
            finals.extend(kept.points);
        } else {
            let draws = sample_batch(block, seed, child_stream(0x5eed, seedings), |rng| {
                sampler.sample(rng)
            });
            seedings += 1;
            report.seed_draws += draws.len();
            levels[0].extend(draws);
            report.peak_level[0] = report.peak_level[0].max(levels[0].len());
        }
    }
    finals.truncate(count);
    let batch = GaussianBatch::new(finals, cfg.s, seed, closeness.min(1.0))?;
    Ok(PipelineOutcome {
        batch,
        report,
        audit,
    })
}

fn collect_audit(
    audit: &mut Vec<AuditEntry>,
    report: &mut PipelineReport,
    level: usize,
    input: &[LatticePoint],
    records: &[AuditRecord],
    q: u32,
) {
    for r in records {
        if !r.verify(input, q) {
            report.audit_failures += 1;
        }
        audit.push(AuditEntry {
            level,
            v: input[r.v].clone(),
            xs: r.xs.iter().map(|&i| input[i].clone()).collect(),
            output: r.output.clone(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_rules() {
        let cfg = PipelineConfig::new(16, 4, GaussianWidth::new(1.0).unwrap(), 0.0).unwrap();
        assert_eq!(cfg.d, 1);
        assert_eq!(cfg.p, 8);
        assert!((cfg.alpha - 4.0 / 3.0).abs() < 1e-12);
        assert!((cfg.eps - 4f64.powf(-32.0)).abs() < 1e-30);
        assert_eq!(cfg.k, 0);
        let wide = PipelineConfig::new(16, 8, GaussianWidth::new(1.0).unwrap(), 1000.0).unwrap();
        assert_eq!(wide.d, 4);
        assert!(wide.alpha >= 1.2 && wide.p < 64);
        assert!(wide.seed_width() >= 1000.0 && wide.seed_width() / wide.alpha < 1000.0);
        assert!(PipelineConfig::new(16, 3, GaussianWidth::new(1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn widths_telescope() {
        let cfg = PipelineConfig::new(2, 4, GaussianWidth::new(1.7).unwrap(), 40.0).unwrap();
        let last = cfg.level_width(cfg.k) / cfg.p as f64;
        assert!((last - 1.7).abs() < 1e-12);
    }

    #[test]
    fn no_rounds_is_klein_then_filter() {
        let b = LatticeBasis::identity(2);
        let cfg = PipelineConfig::new(2, 4, GaussianWidth::new(1.5).unwrap(), 0.0).unwrap();
        assert_eq!(cfg.k, 0);
        let out = dgs_pipeline(&b, &cfg, 50, 3, &PipelineOptions::default()).unwrap();
        assert_eq!(out.batch.len(), 50);
        assert_eq!(out.report.combines, 0);
        assert_eq!(out.batch.width.get(), 1.5);
    }

    #[test]
    fn one_round_audits_clean() {
        let b = LatticeBasis::identity(2);
        let cfg = PipelineConfig::new(2, 4, GaussianWidth::new(1.5).unwrap(), 13.0).unwrap();
        assert_eq!(cfg.k, 1);
        let opts = PipelineOptions {
            audit: true,
            ..Default::default()
        };
        let out = dgs_pipeline(&b, &cfg, 20, 9, &opts).unwrap();
        assert_eq!(out.batch.len(), 20);
        assert!(out.report.combines > 0);
        assert_eq!(out.report.audit_failures, 0);
        let block = cfg.combiner(0).unwrap().input_count(2);
        assert!(out.report.peak_level[0] <= 2 * block);
    }
}
