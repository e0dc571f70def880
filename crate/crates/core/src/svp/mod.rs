//! Shortest-vector solvers that enumerate through a bounded-distance decoder.

mod grid;
mod quantum;
mod solvers;
mod sphere;

pub use grid::{enumerate_via_bdd, EnumerationGrid, GridYield};
pub use quantum::QuantumCostReport;
pub use solvers::{
    cap_success_rate, choose_eps, svp_shifted_min, svp_spherical_caps, svp_tradeoff,
    CapRadiusPolicy, CapsOptions, GridMode, OracleMode, SolverOptions, SolverRun, EPS_FLOOR,
};
pub use sphere::{cap_fraction, sample_unit_sphere, sin_power_integral};
