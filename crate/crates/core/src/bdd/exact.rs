use crate::error::Result;
use crate::lattice::rational::{self, rats_to_f64, Rational};
use crate::lattice::{enum_context, node_budget, LatticeBasis, LatticePoint};

/// Closest lattice point to `target`; ties broken lexicographically on coefficients.
pub fn exact_bdd(basis: &LatticeBasis, target: &[Rational]) -> Result<LatticePoint> {
    let center = rats_to_f64(target);
    let start = babai_round(basis, target);
    let mut near = nearest_candidates(basis, &center, &start)?;
    if near.len() == 1 {
        return Ok(LatticePoint::new(near.pop().unwrap().1));
    }
    Ok(resolve_exact(basis, target, near).unwrap_or_else(|| LatticePoint::new(start)))
}

/// Lattice points whose floating distance to `center` is within a relative `1e-9` of the
/// smallest, found by enumerating the ball through the rounding of `start`.
pub(crate) fn nearest_candidates(
    basis: &LatticeBasis,
    center: &[f64],
    start: &[i64],
) -> Result<Vec<(f64, Vec<i64>)>> {
    let reach = basis
        .embed_f64(start)
        .iter()
        .zip(center)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let mut near: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut best = f64::INFINITY;
    enum_context(basis).visit_within(
        center,
        reach * (1.0 + 1e-9) + 1e-12,
        node_budget(),
        |z, d2| {
            if d2 <= best * (1.0 + 1e-9) + 1e-300 {
                best = best.min(d2);
                near.push((d2, z.to_vec()));
            }
        },
    )?;
    near.retain(|(d2, _)| *d2 <= best * (1.0 + 1e-9) + 1e-300);
    Ok(near)
}

/// Exact winner among floating near-ties.
pub(crate) fn resolve_exact(
    basis: &LatticeBasis,
    target: &[Rational],
    near: Vec<(f64, Vec<i64>)>,
) -> Option<LatticePoint> {
    let mut winner: Option<(Rational, Vec<i64>)> = None;
    for (_, z) in near {
        let e = basis.embed(&z);
        let diff: Vec<Rational> = e.iter().zip(target).map(|(a, b)| a - b).collect();
        let d = rational::sq_norm(&diff);
        let better = match &winner {
            None => true,
            Some((bd, bz)) => d < *bd || (d == *bd && z < *bz),
        };
        if better {
            winner = Some((d, z));
        }
    }
    winner.map(|(_, z)| LatticePoint::new(z))
}

/// Coefficients of `target` rounded componentwise; only a starting radius.
fn babai_round(basis: &LatticeBasis, target: &[Rational]) -> Vec<i64> {
    let c = basis.coordinates(target);
    rats_to_f64(&c).iter().map(|x| x.round() as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rats_from_f64;

    #[test]
    fn integer_plane_examples() {
        let b = LatticeBasis::identity(2);
        assert_eq!(
            exact_bdd(&b, &rats_from_f64(&[0.3, -0.2])).unwrap().coeffs,
            vec![0, 0]
        );
        assert_eq!(
            exact_bdd(&b, &rats_from_f64(&[0.7, 0.2])).unwrap().coeffs,
            vec![1, 0]
        );
    }

    #[test]
    fn midpoint_tie_goes_to_smaller_coeffs() {
        let b = LatticeBasis::identity(1);
        assert_eq!(
            exact_bdd(&b, &rats_from_f64(&[0.5])).unwrap().coeffs,
            vec![0]
        );
        assert_eq!(
            exact_bdd(&b, &rats_from_f64(&[-0.5])).unwrap().coeffs,
            vec![-1]
        );
    }
}
