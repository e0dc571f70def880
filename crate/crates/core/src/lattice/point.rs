use super::basis::LatticeBasis;
use super::rational::Rational;

/// A lattice vector, identified by its integer coefficient tuple.
///
/// The ambient embedding `B·z` is computed on demand from the basis, so the
/// identity `embed = B·coeffs` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coeffs: Vec<i64>) -> Self {
        LatticePoint { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LatticePoint { coeffs: vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn embed(&self, basis: &LatticeBasis) -> Vec<Rational> {
        basis.embed(&self.coeffs)
    }

    pub fn embed_f64(&self, basis: &LatticeBasis) -> Vec<f64> {
        basis.embed_f64(&self.coeffs)
    }

    pub fn norm(&self, basis: &LatticeBasis) -> f64 {
        basis.sq_norm_f64(&self.coeffs).sqrt()
    }

    pub fn neg(&self) -> Self {
        LatticePoint {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticePoint {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticePoint {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticePoint {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

/// Element of `(Z mod q)^n` naming a coset of `L / qL`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetLabel {
    pub residues: Vec<u32>,
    pub modulus: u32,
}

impl CosetLabel {
    pub fn zero(n: usize, modulus: u32) -> Self {
        CosetLabel {
            residues: vec![0; n],
            modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let q = self.modulus;
        CosetLabel {
            residues: self
                .residues
                .iter()
                .zip(&other.residues)
                .map(|(a, b)| (a + b) % q)
                .collect(),
            modulus: q,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let q = self.modulus;
        CosetLabel {
            residues: self
                .residues
                .iter()
                .zip(&other.residues)
                .map(|(a, b)| (a + q - b) % q)
                .collect(),
            modulus: q,
        }
    }

    /// Mixed-radix index in `[0, q^n)`, first residue most significant.
    pub fn index(&self) -> usize {
        self.residues
            .iter()
            .fold(0usize, |acc, &r| acc * self.modulus as usize + r as usize)
    }

    pub fn from_index(mut index: usize, n: usize, modulus: u32) -> Self {
        let q = modulus as usize;
        let mut residues = vec![0u32; n];
        for r in residues.iter_mut().rev() {
            *r = (index % q) as u32;
            index /= q;
        }
        CosetLabel { residues, modulus }
    }
}

/// Label of `point` in `L / qL`: coefficients reduced mod `q`.
pub fn coset_label(point: &LatticePoint, q: u32) -> CosetLabel {
    assert!(q >= 2, "modulus must be at least 2");
    CosetLabel {
        residues: point
            .coeffs
            .iter()
            .map(|&c| c.rem_euclid(q as i64) as u32)
            .collect(),
        modulus: q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    #[test]
    fn label_examples() {
        assert_eq!(
            coset_label(&LatticePoint::new(vec![3, -1]), 2).residues,
            vec![1, 1]
        );
        assert_eq!(
            coset_label(&LatticePoint::new(vec![4, 8]), 4).residues,
            vec![0, 0]
        );
    }

    #[test]
    fn label_is_additive() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..10_000 {
            let q = rng.random_range(2..9u32);
            let n = rng.random_range(1..6usize);
            let x = LatticePoint::new((0..n).map(|_| rng.random_range(-1000..1000)).collect());
            let y = LatticePoint::new((0..n).map(|_| rng.random_range(-1000..1000)).collect());
            assert_eq!(
                coset_label(&x, q).add(&coset_label(&y, q)),
                coset_label(&x.add(&y), q)
            );
        }
    }

    #[test]
    fn label_kernel_is_q_lattice() {
        let p = LatticePoint::new(vec![6, -9, 0]);
        assert!(coset_label(&p, 3).is_zero());
        assert!(!coset_label(&p, 2).is_zero());
    }

    #[test]
    fn index_round_trip() {
        for i in 0..27 {
            assert_eq!(CosetLabel::from_index(i, 3, 3).index(), i);
        }
    }
}
