use rayon::prelude::*;

use crate::bdd::BddDecoder;
use crate::lattice::rational::{rat_from_i64, Rational};
use crate::lattice::{LatticeBasis, LatticePoint};

/// The query grid `s ∈ Z_p^n` around a target `t`, in basis coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationGrid {
    pub p: u32,
    /// Coefficients of `t` in the basis.
    pub target: Vec<Rational>,
}

impl EnumerationGrid {
    pub fn new(p: u32, target: Vec<Rational>) -> Self {
        assert!(p >= 2, "grid scalar must be at least 2");
        EnumerationGrid { p, target }
    }

    pub fn at_origin(p: u32, n: usize) -> Self {
        Self::new(p, vec![rat_from_i64(0); n])
    }

    /// Grid around an ambient target.
    pub fn around(basis: &LatticeBasis, p: u32, target: &[Rational]) -> Self {
        Self::new(p, basis.coordinates(target))
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    /// `p^n`.
    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.n() as u32)
    }

    /// Row-major grid point `index`, first coordinate most significant.
    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let p = self.p as usize;
        let mut s = vec![0i64; self.n()];
        for c in s.iter_mut().rev() {
            *c = (index % p) as i64;
            index /= p;
        }
        s
    }

    /// `f(s) = −p·BDD((Bs − t)/p) + Bs`, in coefficients; `None` if the oracle gave up.
    pub fn query<D: BddDecoder + ?Sized>(&self, oracle: &D, s: &[i64]) -> Option<LatticePoint> {
        let p = rat_from_i64(self.p as i64);
        let coeffs: Vec<Rational> = s
            .iter()
            .zip(&self.target)
            .map(|(&si, ti)| (rat_from_i64(si) - ti) / &p)
            .collect();
        let y = oracle.decode_coeffs(&coeffs)?;
        let pi = self.p as i64;
        Some(LatticePoint::new(
            s.iter()
                .zip(&y.coeffs)
                .map(|(si, yi)| si - pi * yi)
                .collect(),
        ))
    }
}

/// All grid yields in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridYield {
    pub points: Vec<Option<LatticePoint>>,
    pub queries: usize,
    pub failures: usize,
}

impl GridYield {
    /// Distinct yielded points.
    pub fn distinct(&self) -> std::collections::BTreeSet<LatticePoint> {
        self.points.iter().flatten().cloned().collect()
    }
}

/// Queries every grid point; contains every lattice point within `p·α·λ1` of `t`
/// when the oracle honours its promise.
pub fn enumerate_via_bdd<D: BddDecoder + ?Sized>(grid: &EnumerationGrid, oracle: &D) -> GridYield {
    let points: Vec<Option<LatticePoint>> = (0..grid.size())
        .into_par_iter()
        .map(|i| grid.query(oracle, &grid.point(i)))
        .collect();
    let failures = points.iter().filter(|p| p.is_none()).count();
    if failures > 0 {
        log::debug!("grid p={}: {failures} queries failed", grid.p);
    }
    GridYield {
        queries: points.len(),
        points,
        failures,
    }
}
