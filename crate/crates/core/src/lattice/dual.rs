use num_traits::{One, Zero};

use super::basis::LatticeBasis;
use super::rational::{self, Rational};
use crate::error::Result;

/// Generators of the dual lattice, `B* = (B⁻¹)ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBasis {
    pub columns: Vec<Vec<Rational>>,
}

impl DualBasis {
    pub fn as_basis(&self) -> Result<LatticeBasis> {
        LatticeBasis::new(self.columns.clone())
    }

    /// `⟨b*_i, b_j⟩ = δ_ij`, checked exactly.
    pub fn pairs_with(&self, basis: &LatticeBasis) -> bool {
        self.columns.iter().enumerate().all(|(i, d)| {
            basis.columns().iter().enumerate().all(|(j, b)| {
                let p = rational::dot(d, b);
                if i == j {
                    p.is_one()
                } else {
                    p.is_zero()
                }
            })
        })
    }
}

pub fn dual_basis(basis: &LatticeBasis) -> DualBasis {
    DualBasis {
        columns: basis.inverse().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lattice_is_self_dual() {
        let b = LatticeBasis::identity(3);
        assert_eq!(dual_basis(&b).as_basis().unwrap(), b);
    }

    #[test]
    fn doubled_lattice_dual_halves() {
        let b = LatticeBasis::from_integer_columns(&[vec![2, 0], vec![0, 2]]).unwrap();
        let d = dual_basis(&b);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            d.columns,
            vec![
                vec![half.clone(), Rational::zero()],
                vec![Rational::zero(), half]
            ]
        );
    }

    #[test]
    fn dual_of_dual_is_original() {
        let b = LatticeBasis::from_integer_columns(&[vec![3, 1, 0], vec![1, 4, 2], vec![0, 2, 5]])
            .unwrap();
        let d = dual_basis(&b);
        assert!(d.pairs_with(&b));
        let dd = dual_basis(&d.as_basis().unwrap());
        assert_eq!(dd.columns, b.columns().to_vec());
    }
}
