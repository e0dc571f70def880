use std::f64::consts::PI;

use super::mass::tail_radius;
use crate::error::{Error, Result};
use crate::lattice::{dual_basis, enum_context, node_budget, shortest_vector_oracle, LatticeBasis};

/// Bracket around `η_ε(L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothingEstimate {
    pub eps: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    /// Dual points beyond this norm were dropped from the theta series.
    pub truncation_radius: f64,
}

impl SmoothingEstimate {
    pub fn value(&self) -> f64 {
        0.5 * (self.s_lo + self.s_hi)
    }
}

/// Cached nonzero dual norms, giving `ρ_{1/s}(L*) − 1` for every `s ≥ s_min`.
#[derive(Clone, Debug)]
pub struct DualTheta {
    /// `(‖w‖², multiplicity)` in increasing order.
    shells: Vec<(f64, u64)>,
    s_min: f64,
    radius: f64,
    dual_min: f64,
}

impl DualTheta {
    /// Lower bound on `η_eps` from the shortest dual vector alone.
    fn lower_bound(dual_min: f64, eps: f64) -> f64 {
        ((2.0 / eps).ln() / PI).sqrt() / dual_min
    }

    /// Theta data of `L*` valid for all `s ≥ s_min`.
    pub fn new(basis: &LatticeBasis, s_min: f64) -> Result<Self> {
        let dual = dual_basis(basis).as_basis()?;
        let dual_min = shortest_vector_oracle(&dual)?.norm(&dual);
        Self::with_dual(&dual, dual_min, s_min)
    }

    fn with_dual(dual: &LatticeBasis, dual_min: f64, s_min: f64) -> Result<Self> {
        let n = dual.n();
        let radius = tail_radius(1.0 / s_min, n);
        let mut norms = Vec::new();
        enum_context(dual).visit_within(&vec![0.0; n], radius, node_budget(), |z, d2| {
            if z.iter().any(|&c| c != 0) {
                norms.push(d2);
            }
        })?;
        norms.sort_by(f64::total_cmp);
        let mut shells: Vec<(f64, u64)> = Vec::new();
        for r in norms {
            match shells.last_mut() {
                Some((last, m)) if (r - *last).abs() <= 1e-12 * r => *m += 1,
                _ => shells.push((r, 1)),
            }
        }
        Ok(DualTheta {
            shells,
            s_min,
            radius,
            dual_min,
        })
    }

    /// `ρ_{1/s}(L*) − 1`.
    pub fn excess(&self, s: f64) -> f64 {
        debug_assert!(s >= self.s_min * (1.0 - 1e-12));
        let a = PI * s * s;
        let mut total = 0.0;
        for &(r, m) in &self.shells {
            let t = (-a * r).exp();
            if t == 0.0 {
                break;
            }
            total += m as f64 * t;
        }
        total
    }

    pub fn truncation_radius(&self) -> f64 {
        self.radius
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    /// Bisection for the smallest `s` with `excess(s) ≤ eps`.
    pub fn solve(&self, eps: f64) -> Result<SmoothingEstimate> {
        let mut lo = Self::lower_bound(self.dual_min, eps);
        if lo < self.s_min * (1.0 - 1e-12) {
            return Err(Error::OutOfDomain(format!(
                "eps {eps} needs widths below the cached range {}",
                self.s_min
            )));
        }
        lo = lo.max(self.s_min);
        let mut hi = lo;
        while self.excess(hi) > eps {
            lo = hi;
            hi *= 2.0;
        }
        while hi - lo > 1e-8 * hi {
            let mid = 0.5 * (lo + hi);
            if self.excess(mid) > eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(SmoothingEstimate {
            eps,
            s_lo: lo,
            s_hi: hi,
            truncation_radius: self.radius,
        })
    }
}

/// `η_ε(L)`: the smallest `s` with `ρ_{1/s}(L*) ≤ 1 + ε`, bracketed by bisection.
pub fn smoothing_parameter(basis: &LatticeBasis, eps: f64) -> Result<SmoothingEstimate> {
    if !(eps > 1e-12 && eps < 0.999) {
        return Err(Error::OutOfDomain(format!(
            "eps {eps} not in (1e-12, 0.999)"
        )));
    }
    let dual = dual_basis(basis).as_basis()?;
    let dual_min = shortest_vector_oracle(&dual)?.norm(&dual);
    let theta = DualTheta::with_dual(&dual, dual_min, DualTheta::lower_bound(dual_min, eps))?;
    theta.solve(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat_from_i64;

    #[test]
    fn integer_line_at_one_half() {
        let b = LatticeBasis::identity(1);
        let est = smoothing_parameter(&b, 0.5).unwrap();
        let f = |s: f64| {
            (1..30)
                .map(|k| 2.0 * (-PI * s * s * (k * k) as f64).exp())
                .sum::<f64>()
                - 0.5
        };
        let (mut lo, mut hi) = (0.1, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!(est.s_lo <= hi && lo <= est.s_hi);
        assert!((est.value() - 0.66783).abs() < 1e-5);
        assert!(est.s_hi - est.s_lo <= 1e-6 * est.s_hi);
    }

    #[test]
    fn scales_with_the_lattice() {
        let b = LatticeBasis::from_integer_columns(&[vec![2, 1], vec![1, 3]]).unwrap();
        let c = b.scaled(&rat_from_i64(3)).unwrap();
        let e1 = smoothing_parameter(&b, 0.1).unwrap();
        let e3 = smoothing_parameter(&c, 0.1).unwrap();
        assert!((e3.value() - 3.0 * e1.value()).abs() <= 3.0 * e1.s_hi * 1e-6);
    }

    #[test]
    fn smaller_eps_needs_wider_gaussian() {
        let b = LatticeBasis::from_integer_columns(&[vec![1, 0, 0], vec![1, 2, 0], vec![0, 1, 3]])
            .unwrap();
        let a = smoothing_parameter(&b, 0.01).unwrap();
        let c = smoothing_parameter(&b, 0.3).unwrap();
        assert!(a.s_lo > c.s_hi);
    }
}
