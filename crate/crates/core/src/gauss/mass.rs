use std::f64::consts::PI;

use super::GaussianWidth;
use crate::error::Result;
use crate::lattice::{enum_context, node_budget, rational::rats_to_f64, LatticeBasis, Rational};

/// Target Gaussian mass left outside a truncation ball.
pub const TAIL_MASS: f64 = 1e-12;

/// `ρ_s` of a vector with squared norm `sq`.
pub fn rho(sq: f64, s: f64) -> f64 {
    (-PI * sq / (s * s)).exp()
}

/// Radius beyond which `D_{L,s}` has mass below [`TAIL_MASS`].
pub fn tail_radius(s: f64, n: usize) -> f64 {
    s * ((1.0 / TAIL_MASS).ln() / PI + n as f64).sqrt()
}

/// `Σ ρ_s(x − shift)` over lattice points within `radius` of `shift`.
pub fn rho_mass(
    basis: &LatticeBasis,
    shift: &[Rational],
    s: GaussianWidth,
    radius: f64,
) -> Result<f64> {
    let s = s.get();
    let mut total = 0.0;
    enum_context(basis).visit_within(&rats_to_f64(shift), radius, node_budget(), |_, d2| {
        total += rho(d2, s);
    })?;
    Ok(total)
}

/// [`rho_mass`] with the truncation radius taken from [`tail_radius`].
pub fn rho_mass_auto(basis: &LatticeBasis, shift: &[Rational], s: GaussianWidth) -> Result<f64> {
    rho_mass(basis, shift, s, tail_radius(s.get(), basis.n()))
}

/// `ρ_s(L \ {0})`, summed without cancellation against the unit term.
pub fn rho_mass_nonzero(basis: &LatticeBasis, s: GaussianWidth) -> Result<f64> {
    let s = s.get();
    let n = basis.n();
    let mut total = 0.0;
    enum_context(basis).visit_within(
        &vec![0.0; n],
        tail_radius(s, n),
        node_budget(),
        |z, d2| {
            if z.iter().any(|&c| c != 0) {
                total += rho(d2, s);
            }
        },
    )?;
    Ok(total)
}
