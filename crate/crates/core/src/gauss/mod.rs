//! Discrete Gaussians over lattices: masses, samplers, smoothing parameters.

mod batch;
mod exact;
mod klein;
mod mass;
mod smoothing;
pub mod stats;

pub use batch::{sample_batch, GaussianBatch, SAMPLE_CHUNK};
pub use exact::{exact_dgs_sample, ExactSampler};
pub use klein::{klein_sample, klein_threshold, KleinSampler};
pub use mass::{rho, rho_mass, rho_mass_auto, rho_mass_nonzero, tail_radius, TAIL_MASS};
pub use smoothing::{smoothing_parameter, DualTheta, SmoothingEstimate};
pub use stats::statistical_distance;

use crate::error::{Error, Result};

/// Width parameter `s` of `ρ_s(x) = exp(−π‖x‖²/s²)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct GaussianWidth(f64);

impl GaussianWidth {
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s.is_finite() {
            Ok(GaussianWidth(s))
        } else {
            Err(Error::OutOfDomain(format!(
                "width {s} must be positive and finite"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}
