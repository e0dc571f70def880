use super::tuple::TupleIndex;
use crate::error::{Error, Result};
use crate::gauss::{smoothing_parameter, GaussianBatch, GaussianWidth};
use crate::lattice::{coset_label, LatticeBasis, LatticePoint};

/// Parameters of one combining round.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinerConfig {
    pub q: u32,
    pub d: u32,
    /// Batch multiplier `C`.
    pub c: u32,
    pub width_in: GaussianWidth,
    /// Declared `ε` for the width precondition and the closeness bound.
    pub eps: f64,
    /// Experimental override of the tuple size `8d`.
    pub tuple_size: Option<usize>,
}

impl CombinerConfig {
    pub fn new(q: u32, d: u32, c: u32, width_in: GaussianWidth, eps: f64) -> Result<Self> {
        if q < 2 || d == 0 || c == 0 {
            return Err(Error::OutOfDomain(format!(
                "need q ≥ 2, d ≥ 1, C ≥ 1 (got {q}, {d}, {c})"
            )));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfDomain(format!("eps {eps} not in (0, 1)")));
        }
        Ok(CombinerConfig {
            q,
            d,
            c,
            width_in,
            eps,
            tuple_size: None,
        })
    }

    pub fn tuple_size(&self) -> usize {
        self.tuple_size.unwrap_or(8 * self.d as usize)
    }

    /// `q^{n/d}`.
    fn per_batch(&self, n: usize) -> f64 {
        (self.q as f64).powf(n as f64 / self.d as f64)
    }

    /// `N = 160·d²·C·q^{n/d}`, rounded up.
    pub fn input_count(&self, n: usize) -> usize {
        let d = self.d as f64;
        (160.0 * d * d * self.c as f64 * self.per_batch(n)).ceil() as usize
    }

    /// `C·q^{n/d}`, rounded up.
    pub fn target_count(&self, n: usize) -> usize {
        (self.c as f64 * self.per_batch(n)).ceil() as usize
    }

    /// `s·√(8d+1)/q`.
    pub fn width_out(&self) -> GaussianWidth {
        let s = self.width_in.get() * (8.0 * self.d as f64 + 1.0).sqrt() / self.q as f64;
        GaussianWidth::new(s).expect("positive width")
    }

    /// `4ε^{2d}N + 11·C·q^{−5n/2}`, capped at 1.
    pub fn closeness(&self, n: usize) -> f64 {
        let n_in = self.input_count(n) as f64;
        let q = self.q as f64;
        let bound = 4.0 * self.eps.powi(2 * self.d as i32) * n_in
            + 11.0 * self.c as f64 * q.powf(-2.5 * n as f64);
        bound.min(1.0)
    }

    /// Checks `s ≥ 2√d·q·η_ε(L)` when `η` is computable (n ≤ 6); larger ranks are trusted.
    pub fn check_width(&self, basis: &LatticeBasis) -> Result<()> {
        if basis.n() > 6 {
            log::info!("combiner width precondition trusted at n = {}", basis.n());
            return Ok(());
        }
        let eta = smoothing_parameter(basis, self.eps)?;
        let threshold = 2.0 * (self.d as f64).sqrt() * self.q as f64 * eta.s_lo;
        if self.width_in.get() < threshold {
            return Err(Error::WidthTooSmall {
                width: self.width_in.get(),
                threshold,
            });
        }
        Ok(())
    }
}

/// One emitted point with the input indices that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRecord {
    /// Index of `v` in the input batch.
    pub v: usize,
    /// Indices of the `x_i` in the input batch.
    pub xs: Vec<usize>,
    pub output: LatticePoint,
}

impl AuditRecord {
    /// `q·o = Σ x_i − v` on coefficients.
    pub fn verify(&self, input: &[LatticePoint], q: u32) -> bool {
        let mut sum = input[self.v].neg();
        for &i in &self.xs {
            sum = sum.add(&input[i]);
        }
        sum == self.output.scale(q as i64)
    }
}

#[derive(Clone, Debug)]
pub struct CombineOutcome {
    pub batch: GaussianBatch,
    pub records: Vec<AuditRecord>,
    pub target: usize,
}

impl CombineOutcome {
    pub fn achieved(&self) -> usize {
        self.batch.len()
    }

    pub fn starved(&self) -> bool {
        self.achieved() < self.target
    }

    /// Turns a short run into [`Error::Starved`].
    pub fn require_full(self) -> Result<Self> {
        if self.starved() {
            Err(Error::Starved {
                achieved: self.achieved(),
                target: self.target,
            })
        } else {
            Ok(self)
        }
    }
}

/// Pairs each `v` of the first half with `w` points of the second half whose
/// labels sum to `label(v)` and emits `(Σx_i − v)/q`.
///
/// Uses the first `N` points of `input`; selection depends on labels only.
pub fn combine_batch(input: &GaussianBatch, cfg: &CombinerConfig) -> Result<CombineOutcome> {
    let n = input.dim();
    let need = cfg.input_count(n);
    if input.len() < need {
        return Err(Error::InsufficientInput {
            required: need,
            got: input.len(),
        });
    }
    let q = cfg.q;
    let w = cfg.tuple_size();
    let half = need / 2;
    let pts = &input.points;
    let second: Vec<_> = pts[half..2 * half]
        .iter()
        .map(|p| coset_label(p, q))
        .collect();
    let mut index = TupleIndex::new(&second);
    let target = cfg.target_count(n);
    let mut out = Vec::with_capacity(target);
    let mut records = Vec::with_capacity(target);
    for (vi, v) in pts[..half].iter().enumerate() {
        if out.len() == target {
            break;
        }
        let Some(sel) = index.find(&coset_label(v, q), w) else {
            continue;
        };
        index.remove(&sel);
        let xs: Vec<usize> = sel.iter().map(|&i| half + i).collect();
        let mut sum = v.neg();
        for &i in &xs {
            sum = sum.add(&pts[i]);
        }
        let coeffs: Vec<i64> = sum
            .coeffs
            .iter()
            .map(|&c| {
                debug_assert_eq!(c.rem_euclid(q as i64), 0);
                c.div_euclid(q as i64)
            })
            .collect();
        let o = LatticePoint::new(coeffs);
        records.push(AuditRecord {
            v: vi,
            xs,
            output: o.clone(),
        });
        out.push(o);
    }
    if out.len() < target {
        log::warn!("combiner starved: {} of {} outputs", out.len(), target);
    }
    let batch = GaussianBatch::new(out, cfg.width_out(), input.stream_id, cfg.closeness(n))?;
    Ok(CombineOutcome {
        batch,
        records,
        target,
    })
}

/// Keeps points of `pL` and divides them by `p`.
pub fn filter_sublattice(input: &GaussianBatch, p: u32) -> GaussianBatch {
    assert!(p >= 1, "filter modulus must be positive");
    if p == 1 {
        return input.clone();
    }
    let p = p as i64;
    let points = input
        .points
        .iter()
        .filter(|x| x.coeffs.iter().all(|c| c.rem_euclid(p) == 0))
        .map(|x| LatticePoint::new(x.coeffs.iter().map(|c| c / p).collect()))
        .collect();
    GaussianBatch {
        points,
        width: GaussianWidth::new(input.width.get() / p as f64).expect("positive width"),
        stream_id: input.stream_id,
        claimed_closeness: input.claimed_closeness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn batch(points: Vec<Vec<i64>>, s: f64) -> GaussianBatch {
        GaussianBatch::new(
            points.into_iter().map(LatticePoint::new).collect(),
            GaussianWidth::new(s).unwrap(),
            0,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn filter_examples() {
        let b = batch(vec![vec![2, 4], vec![1, 0], vec![-2, 2]], 4.0);
        let f = filter_sublattice(&b, 2);
        let got: Vec<_> = f.points.iter().map(|p| p.coeffs.clone()).collect();
        assert_eq!(got, vec![vec![1, 2], vec![-1, 1]]);
        assert_eq!(f.width.get(), 2.0);
        assert_eq!(filter_sublattice(&b, 1), b);
    }

    #[test]
    fn counts_follow_the_formula() {
        let cfg = CombinerConfig::new(2, 1, 1, GaussianWidth::new(9.0).unwrap(), 0.01).unwrap();
        assert_eq!(cfg.input_count(2), 640);
        assert_eq!(cfg.target_count(2), 4);
        assert_eq!(cfg.tuple_size(), 8);
        assert!((cfg.width_out().get() - 13.5).abs() < 1e-12);
    }

    #[test]
    fn one_coset_against_another_starves() {
        let cfg = CombinerConfig::new(2, 1, 1, GaussianWidth::new(9.0).unwrap(), 0.01).unwrap();
        let pts: Vec<Vec<i64>> = (0..640)
            .map(|i| if i < 320 { vec![1, 0] } else { vec![0, 2 * i] })
            .collect();
        let out = combine_batch(&batch(pts, 9.0), &cfg).unwrap();
        assert_eq!(out.achieved(), 0);
        assert!(matches!(
            out.require_full(),
            Err(Error::Starved {
                achieved: 0,
                target: 4
            })
        ));
    }

    #[test]
    fn short_input_is_rejected() {
        let cfg = CombinerConfig::new(2, 1, 1, GaussianWidth::new(9.0).unwrap(), 0.01).unwrap();
        let r = combine_batch(&batch(vec![vec![0, 0]; 10], 9.0), &cfg);
        assert!(matches!(
            r,
            Err(Error::InsufficientInput {
                required: 640,
                got: 10
            })
        ));
    }
}
