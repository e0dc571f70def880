use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enumerate::EnumContext;
use super::rational::{self, parse_rational, rat_from_i64, rat_to_f64, Rational};
use crate::error::{Error, Result};

/// Squared GSO norms below this are treated as a singular basis.
pub const GSO_UNDERFLOW: f64 = 1e-30;

/// Gram–Schmidt data of a basis, computed exactly and rounded to `f64`.
#[derive(Clone, Debug)]
pub struct Gso {
    /// Orthogonalised vectors `b̃_i`.
    pub vectors: Vec<Vec<f64>>,
    /// `‖b̃_i‖²`.
    pub sq_norms: Vec<f64>,
    /// `mu[i][j] = ⟨b_i, b̃_j⟩ / ‖b̃_j‖²` for `j < i`; zero elsewhere.
    pub mu: Vec<Vec<f64>>,
    /// Relative error bound of every stored entry (exact computation, one rounding).
    pub rel_error: f64,
}

impl Gso {
    pub fn max_norm(&self) -> f64 {
        self.sq_norms.iter().cloned().fold(0.0, f64::max).sqrt()
    }
}

/// Full-rank lattice basis with exact rational generators.
///
/// `columns[i]` is the generator `b_i`; a point with coefficients `z` is `Σ z_i b_i`.
pub struct LatticeBasis {
    columns: Vec<Vec<Rational>>,
    columns_f64: Vec<Vec<f64>>,
    gso: Gso,
    inverse: OnceLock<Vec<Vec<Rational>>>,
    pub(crate) enum_ctx: OnceLock<EnumContext>,
}

impl Clone for LatticeBasis {
    fn clone(&self) -> Self {
        LatticeBasis {
            columns: self.columns.clone(),
            columns_f64: self.columns_f64.clone(),
            gso: self.gso.clone(),
            inverse: self.inverse.clone(),
            enum_ctx: OnceLock::new(),
        }
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeBasis")
            .field("n", &self.n())
            .field("columns", &self.columns_f64)
            .finish()
    }
}

impl PartialEq for LatticeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.columns == other.columns
    }
}

impl LatticeBasis {
    pub fn new(columns: Vec<Vec<Rational>>) -> Result<Self> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::SingularBasis);
        }
        for c in &columns {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
        }
        let gso = exact_gso(&columns)?;
        let columns_f64 = columns.iter().map(|c| rational::rats_to_f64(c)).collect();
        Ok(LatticeBasis {
            columns,
            columns_f64,
            gso,
            inverse: OnceLock::new(),
            enum_ctx: OnceLock::new(),
        })
    }

    pub fn from_integer_columns(columns: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            columns
                .iter()
                .map(|c| c.iter().map(|&x| rat_from_i64(x)).collect())
                .collect(),
        )
    }

    /// Random integer basis: entries uniform in `[-spread, spread]`, diagonal shifted by `spread + 1`.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, spread: i64, rng: &mut R) -> Self {
        loop {
            let cols: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            rng.random_range(-spread..=spread) + if i == j { spread + 1 } else { 0 }
                        })
                        .collect()
                })
                .collect();
            if let Ok(b) = Self::from_integer_columns(&cols) {
                return b;
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_integer_columns(&cols).expect("identity is nonsingular")
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Rational>] {
        &self.columns
    }

    pub fn columns_f64(&self) -> &[Vec<f64>] {
        &self.columns_f64
    }

    pub fn gso(&self) -> &Gso {
        &self.gso
    }

    /// Basis of `c·L`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Self::new(
            self.columns
                .iter()
                .map(|col| col.iter().map(|x| x * c).collect())
                .collect(),
        )
    }

    /// `B·z`, exact.
    pub fn embed(&self, coeffs: &[i64]) -> Vec<Rational> {
        let n = self.n();
        let mut out = vec![Rational::zero(); n];
        for (col, &z) in self.columns.iter().zip(coeffs) {
            if z == 0 {
                continue;
            }
            let z = rat_from_i64(z);
            for (o, x) in out.iter_mut().zip(col) {
                *o += x * &z;
            }
        }
        out
    }

    /// `B·z` over arbitrary rational coefficients.
    pub fn embed_rational(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let n = self.n();
        let mut out = vec![Rational::zero(); n];
        for (col, z) in self.columns.iter().zip(coeffs) {
            if z.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += x * z;
            }
        }
        out
    }

    pub fn embed_f64(&self, coeffs: &[i64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for (col, &z) in self.columns_f64.iter().zip(coeffs) {
            if z == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += x * z as f64;
            }
        }
        out
    }

    pub fn sq_norm_f64(&self, coeffs: &[i64]) -> f64 {
        self.embed_f64(coeffs).iter().map(|x| x * x).sum()
    }

    pub fn sq_norm_exact(&self, coeffs: &[i64]) -> Rational {
        rational::sq_norm(&self.embed(coeffs))
    }

    /// Exact `B⁻¹`, stored row-major: `inverse()[i]` is the i-th row.
    pub fn inverse(&self) -> &[Vec<Rational>] {
        self.inverse.get_or_init(|| {
            let n = self.n();
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|r| (0..n).map(|c| self.columns[c][r].clone()).collect())
                .collect();
            invert(rows).expect("basis was checked nonsingular")
        })
    }

    /// Coefficients of `x` with respect to this basis, `B⁻¹x`.
    pub fn coordinates(&self, x: &[Rational]) -> Vec<Rational> {
        self.inverse()
            .iter()
            .map(|row| rational::dot(row, x))
            .collect()
    }

    /// `|det B|`, exact.
    pub fn determinant(&self) -> Rational {
        let n = self.n();
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|r| (0..n).map(|c| self.columns[c][r].clone()).collect())
            .collect();
        determinant(rows).abs()
    }

    /// Gram matrix `BᵀB` in floating point.
    pub fn gram_f64(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.columns_f64[i]
                            .iter()
                            .zip(&self.columns_f64[j])
                            .map(|(a, b)| a * b)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// True when every column is an integer vector.
    pub fn is_integral(&self) -> bool {
        self.columns.iter().flatten().all(|x| x.is_integer())
    }

    /// Reads the text basis format: first non-comment line `n`, then `n`
    /// lines each holding one basis vector as `n` rationals. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, first) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "empty basis file".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("expected dimension, got {first:?}"),
        })?;
        let mut columns = Vec::with_capacity(n);
        for _ in 0..n {
            let (line_no, l) = lines.next().ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected {n} basis vectors"),
            })?;
            let col: Option<Vec<Rational>> = l.split_whitespace().map(parse_rational).collect();
            let col = col.ok_or(Error::Parse {
                line: line_no,
                msg: format!("bad rational in {l:?}"),
            })?;
            if col.len() != n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {n} entries, got {}", col.len()),
                });
            }
            columns.push(col);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing data".into(),
            });
        }
        Self::new(columns)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n());
        for col in &self.columns {
            let toks: Vec<String> = col.iter().map(|x| x.to_string()).collect();
            s.push_str(&toks.join(" "));
            s.push('\n');
        }
        s
    }
}

fn exact_gso(columns: &[Vec<Rational>]) -> Result<Gso> {
    let n = columns.len();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut norms: Vec<Rational> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = columns[i].clone();
        for j in 0..i {
            let m = rational::dot(&columns[i], &star[j]) / &norms[j];
            mu[i][j] = rat_to_f64(&m);
            if !m.is_zero() {
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &m * sk;
                }
            }
        }
        let nv = rational::sq_norm(&v);
        if nv.is_zero() || rat_to_f64(&nv) < GSO_UNDERFLOW {
            return Err(Error::SingularBasis);
        }
        star.push(v);
        norms.push(nv);
    }
    for (i, row) in mu.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    Ok(Gso {
        vectors: star.iter().map(|v| rational::rats_to_f64(v)).collect(),
        sq_norms: norms.iter().map(rat_to_f64).collect(),
        mu,
        rel_error: 2.0 * f64::EPSILON,
    })
}

/// Gram–Schmidt orthogonalisation of a basis.
pub fn gram_schmidt(basis: &LatticeBasis) -> Result<Gso> {
    exact_gso(basis.columns())
}

/// Exact inverse of a square matrix (row-major). `None` when singular.
pub fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for x in inv[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let (pivot_row, pivot_inv) = (a[col].clone(), inv[col].clone());
            for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
            for (x, y) in inv[r].iter_mut().zip(&pivot_inv) {
                *x -= &f * y;
            }
        }
    }
    Some(inv)
}

/// Exact determinant of a square matrix (row-major).
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let pivot_row = a[col].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Integer matrix times integer vector, `m` given as columns.
pub fn mat_vec_i64(columns: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let n = columns.first().map_or(0, Vec::len);
    let mut out = vec![0i64; n];
    for (col, &x) in columns.iter().zip(v) {
        if x == 0 {
            continue;
        }
        for (o, c) in out.iter_mut().zip(col) {
            *o += c * x;
        }
    }
    out
}

pub(crate) fn bigint_to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("coefficient exceeds i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn gso_of_identity_is_identity() {
        let b = LatticeBasis::identity(2);
        let g = gram_schmidt(&b).unwrap();
        assert_eq!(g.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(g.sq_norms, vec![1.0, 1.0]);
    }

    #[test]
    fn gso_single_projection() {
        let b = LatticeBasis::from_integer_columns(&[vec![1, 0], vec![1, 1]]).unwrap();
        let g = b.gso();
        assert_eq!(g.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(g.mu[1][0], 1.0);
    }

    #[test]
    fn singular_basis_rejected() {
        let err = LatticeBasis::from_integer_columns(&[vec![1, 2], vec![2, 4]]).unwrap_err();
        assert!(matches!(err, Error::SingularBasis));
    }

    #[test]
    fn parse_with_comments_and_fractions() {
        let b = LatticeBasis::parse("# test\n2\n1 0 # first\n1/2 3/2\n").unwrap();
        assert_eq!(b.columns()[1], vec![q(1, 2), q(3, 2)]);
        assert_eq!(b.determinant(), q(3, 2));
        let again = LatticeBasis::parse(&b.to_text()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match LatticeBasis::parse("2\n1 0\n0 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(LatticeBasis::parse("2\n1 0\n").is_err());
    }

    #[test]
    fn coordinates_invert_embedding() {
        let b = LatticeBasis::from_integer_columns(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 5]])
            .unwrap();
        let x = b.embed(&[3, -2, 7]);
        let c = b.coordinates(&x);
        assert_eq!(c, vec![rat_from_i64(3), rat_from_i64(-2), rat_from_i64(7)]);
    }
}
