//! Bounded-distance decoding: an enumeration reference and a decoder driven by dual Gaussian samples.

mod exact;
mod file;
mod oracle;

pub use exact::exact_bdd;
pub use file::{read_oracle, write_oracle};
pub use oracle::{
    build_bdd_oracle, decoding_coefficient, sample_count, BddConfig, BddDecoder, BddOracle,
    BddQueryReport, DualSource, ExactBdd, ASCENT_BUDGET, DEFAULT_SAMPLE_CONSTANT,
};

use crate::lattice::Rational;

/// `f̂(x)` for an oracle; see [`BddOracle::estimate`].
pub fn periodic_gaussian_estimate(oracle: &BddOracle, x: &[Rational]) -> f64 {
    oracle.estimate(x)
}

/// Decodes `target` with `oracle`.
pub fn bdd_decode(
    oracle: &BddOracle,
    target: &[Rational],
) -> crate::Result<(crate::lattice::LatticePoint, BddQueryReport)> {
    oracle.decode(target)
}
