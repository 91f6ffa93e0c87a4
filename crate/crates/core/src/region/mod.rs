//! Rate regions as half-space polytopes in 3-dimensional rate space.
//!
//! All logarithms are base 2; rates are in bits per channel use. Every
//! constraint is a subset-sum bound `sum_{i in T} R_i <= b`, and the
//! nonnegative orthant is implicit.

mod build;
mod polytope;
mod reduction;

pub use build::{
    dropped_constraint_indices, half_log2, lemma1_outer_bound, mac_region, mixed_mac_region,
    scheme_inner_constraints, strong_outer_bound, theorem_capacity_region, tin_bound,
};
pub use polytope::{HalfSpace, RatePolytope, Rates, GEOM_TOL};
pub use reduction::{verify_theorem_reduction, Comparison, ReceiverReduction, ReductionReport};

use crate::error::Result;

/// Vertex set of a bounded polytope, sorted and deduplicated.
pub fn enumerate_vertices(poly: &RatePolytope) -> Result<Vec<Rates>> {
    poly.vertices()
}

pub fn contains_point(poly: &RatePolytope, r: &Rates, tol: f64) -> bool {
    poly.contains(r, tol)
}

pub fn constraint_is_redundant(poly: &RatePolytope, k: usize) -> Result<bool> {
    poly.is_redundant(k)
}

pub fn regions_equal(a: &RatePolytope, b: &RatePolytope, tol: f64) -> Result<bool> {
    a.equals(b, tol)
}
