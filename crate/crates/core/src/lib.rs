//! Lattice sampling, decoding and shortest-vector tools built on exact rational bases.

pub mod bdd;
pub mod combiner;
pub mod cost;
pub mod dense;
pub mod error;
pub mod gauss;
pub mod lattice;
pub mod rng;
pub mod svp;
pub mod verify;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
