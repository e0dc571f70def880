use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use super::basis::{mat_vec_i64, LatticeBasis};
use super::lll::{lll_reduce, DEFAULT_DELTA};
use super::point::LatticePoint;
use super::rational::{self, rat_from_f64, rats_to_f64, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

static NODE_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_NODE_BUDGET);

/// Process-wide node budget for enumerations that do not take one explicitly.
pub fn node_budget() -> u64 {
    NODE_BUDGET.load(AtomicOrdering::Relaxed)
}

pub fn set_node_budget(budget: u64) {
    NODE_BUDGET.store(budget.max(1), AtomicOrdering::Relaxed);
}

/// Relative slack added to enumeration radii to absorb GSO rounding.
const RADIUS_SLACK: f64 = 1e-9;

/// Floating enumeration data for an LLL-reduced copy of a basis.
#[derive(Clone, Debug)]
pub struct EnumContext {
    gso_vectors: Vec<Vec<f64>>,
    sq_norms: Vec<f64>,
    mu: Vec<Vec<f64>>,
    transform: Vec<Vec<i64>>,
    first_norm: f64,
}

impl EnumContext {
    pub fn new(basis: &LatticeBasis) -> Self {
        let red = lll_reduce(basis, DEFAULT_DELTA).expect("basis already validated");
        let gso = red.basis.gso();
        let first_norm = red.basis.sq_norm_f64(&unit(basis.n(), 0)).sqrt();
        EnumContext {
            gso_vectors: gso.vectors.clone(),
            sq_norms: gso.sq_norms.clone(),
            mu: gso.mu.clone(),
            transform: red.transform,
            first_norm,
        }
    }

    /// Norm of the first LLL-reduced vector.
    pub fn first_norm(&self) -> f64 {
        self.first_norm
    }

    /// Visits every lattice point whose floating distance to `center` is at most
    /// `radius` (after slack), passing input-basis coefficients and the squared distance.
    /// Returns the number of tree nodes expanded.
    pub fn visit_within<F>(
        &self,
        center: &[f64],
        radius: f64,
        budget: u64,
        mut visit: F,
    ) -> Result<u64>
    where
        F: FnMut(&[i64], f64),
    {
        let n = self.sq_norms.len();
        let t: Vec<f64> = (0..n)
            .map(|j| {
                let d: f64 = self.gso_vectors[j]
                    .iter()
                    .zip(center)
                    .map(|(a, b)| a * b)
                    .sum();
                d / self.sq_norms[j]
            })
            .collect();
        let r = radius * (1.0 + RADIUS_SLACK) + 1e-12;
        let mut walk = Walk {
            ctx: self,
            t,
            r2: r * r,
            z: vec![0; n],
            nodes: 0,
            budget,
        };
        walk.descend(n - 1, 0.0, &mut visit)?;
        Ok(walk.nodes)
    }
}

struct Walk<'a> {
    ctx: &'a EnumContext,
    t: Vec<f64>,
    r2: f64,
    z: Vec<i64>,
    nodes: u64,
    budget: u64,
}

impl Walk<'_> {
    fn descend<F: FnMut(&[i64], f64)>(
        &mut self,
        level: usize,
        partial: f64,
        visit: &mut F,
    ) -> Result<()> {
        let n = self.z.len();
        let mut c = self.t[level];
        for i in level + 1..n {
            c -= self.z[i] as f64 * self.ctx.mu[i][level];
        }
        let rem = self.r2 - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let w = (rem / self.ctx.sq_norms[level]).sqrt();
        let (lo, hi) = ((c - w).ceil(), (c + w).floor());
        if hi < lo {
            return Ok(());
        }
        if hi - lo + 1.0 > (self.budget - self.nodes.min(self.budget)) as f64 {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        for zl in lo as i64..=hi as i64 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            let d = zl as f64 - c;
            let p = partial + d * d * self.ctx.sq_norms[level];
            if p > self.r2 {
                continue;
            }
            self.z[level] = zl;
            if level == 0 {
                let orig = mat_vec_i64(&self.ctx.transform, &self.z);
                visit(&orig, p);
            } else {
                self.descend(level - 1, p, visit)?;
            }
        }
        self.z[level] = 0;
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Cached enumeration data of `basis`.
pub fn context(basis: &LatticeBasis) -> &EnumContext {
    basis.enum_ctx.get_or_init(|| EnumContext::new(basis))
}

fn exact_sq_dist(basis: &LatticeBasis, coeffs: &[i64], center: &[Rational]) -> Rational {
    let p = basis.embed(coeffs);
    let diff: Vec<Rational> = p.iter().zip(center).map(|(a, b)| a - b).collect();
    rational::sq_norm(&diff)
}

fn by_norm_then_coeffs(a: &(Rational, LatticePoint), b: &(Rational, LatticePoint)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.coeffs.cmp(&b.1.coeffs))
}

/// All lattice points `p` with `‖p − center‖ ≤ radius`, sorted by norm then coefficients.
pub fn enumerate_within(
    basis: &LatticeBasis,
    center: &[Rational],
    radius: f64,
) -> Result<Vec<LatticePoint>> {
    enumerate_within_budget(basis, center, radius, node_budget())
}

pub fn enumerate_within_budget(
    basis: &LatticeBasis,
    center: &[Rational],
    radius: f64,
    budget: u64,
) -> Result<Vec<LatticePoint>> {
    if !(radius > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "radius {radius} must be positive"
        )));
    }
    if center.len() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            got: center.len(),
        });
    }
    let r2 = radius * radius;
    let r2_exact = {
        let r = rat_from_f64(radius);
        &r * &r
    };
    let mut hits = Vec::new();
    context(basis).visit_within(&rats_to_f64(center), radius, budget, |z, d2| {
        let inside = if d2 < r2 * (1.0 - 4.0 * RADIUS_SLACK) {
            true
        } else {
            exact_sq_dist(basis, z, center) <= r2_exact
        };
        if inside {
            hits.push(LatticePoint::new(z.to_vec()));
        }
    })?;
    let mut keyed: Vec<(Rational, LatticePoint)> = hits
        .into_iter()
        .map(|p| (basis.sq_norm_exact(&p.coeffs), p))
        .collect();
    keyed.sort_by(by_norm_then_coeffs);
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// A nonzero lattice point of minimal norm; ties broken lexicographically on coefficients.
pub fn shortest_vector_oracle(basis: &LatticeBasis) -> Result<LatticePoint> {
    shortest_vector_oracle_budget(basis, node_budget())
}

pub fn shortest_vector_oracle_budget(basis: &LatticeBasis, budget: u64) -> Result<LatticePoint> {
    let n = basis.n();
    let ctx = context(basis);
    let mut best: Option<(Rational, Vec<i64>)> = None;
    let mut best_f = f64::INFINITY;
    ctx.visit_within(&vec![0.0; n], ctx.first_norm(), budget, |z, d2| {
        if z.iter().all(|&x| x == 0) || d2 > best_f * (1.0 + 4.0 * RADIUS_SLACK) {
            return;
        }
        let exact = basis.sq_norm_exact(z);
        let better = match &best {
            None => true,
            Some((bn, bz)) => exact < *bn || (exact == *bn && z < bz.as_slice()),
        };
        if better {
            best_f = best_f.min(d2);
            best = Some((exact, z.to_vec()));
        }
    })?;
    let (_, z) = best.expect("first reduced vector lies within its own norm");
    Ok(LatticePoint::new(z))
}

/// λ1 from the enumeration oracle.
pub fn first_minimum(basis: &LatticeBasis) -> Result<f64> {
    Ok(shortest_vector_oracle(basis)?.norm(basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{rat_from_i64, rats_from_f64};

    fn zero(n: usize) -> Vec<Rational> {
        vec![rat_from_i64(0); n]
    }

    #[test]
    fn unit_ball_of_z2() {
        let b = LatticeBasis::identity(2);
        let pts = enumerate_within(&b, &zero(2), 1.0).unwrap();
        let coeffs: Vec<Vec<i64>> = pts.iter().map(|p| p.coeffs.clone()).collect();
        assert_eq!(
            coeffs,
            vec![vec![0, 0], vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn boundary_points_are_included() {
        let b = LatticeBasis::identity(2);
        let pts = enumerate_within(&b, &rats_from_f64(&[0.5, 0.0]), 0.5).unwrap();
        let coeffs: Vec<Vec<i64>> = pts.iter().map(|p| p.coeffs.clone()).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn shortest_of_z4_is_unit() {
        let b = LatticeBasis::identity(4);
        let p = shortest_vector_oracle(&b).unwrap();
        assert_eq!(p.norm(&b), 1.0);
        assert_eq!(p.coeffs.iter().map(|x| x.abs()).sum::<i64>(), 1);
    }

    #[test]
    fn shortest_of_half_diagonal() {
        let b = LatticeBasis::new(vec![rats_from_f64(&[1.0, 0.0]), rats_from_f64(&[0.5, 0.5])])
            .unwrap();
        let p = shortest_vector_oracle(&b).unwrap();
        assert!((p.norm(&b) - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.coeffs, vec![-1, 1]);
    }

    #[test]
    fn budget_is_enforced() {
        let b = LatticeBasis::identity(3);
        let r = enumerate_within_budget(&b, &zero(3), 5.0, 10);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
