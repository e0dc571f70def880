mod basis;
mod dual;
mod enumerate;
mod lll;
mod point;
pub mod rational;

pub use basis::{determinant, gram_schmidt, invert, mat_vec_i64, Gso, LatticeBasis, GSO_UNDERFLOW};
pub use dual::{dual_basis, DualBasis};
pub use enumerate::context as enum_context;
pub use enumerate::{
    enumerate_within, enumerate_within_budget, first_minimum, node_budget, set_node_budget,
    shortest_vector_oracle, shortest_vector_oracle_budget, EnumContext, DEFAULT_NODE_BUDGET,
};
pub use lll::{is_lll_reduced, lll_reduce, LllReduction, DEFAULT_DELTA};
pub use point::{coset_label, CosetLabel, LatticePoint};
pub use rational::Rational;
