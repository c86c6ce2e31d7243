//! Reflections, the rank-one operators `Q`, the group-algebra element
//! `x_k`, the weights `u` derived from `w`, and the operator `P` built both
//! from nested commutators and from `Q`.

mod operators;
mod permutation;
mod weights;

pub use operators::{
    build_p_nested, build_p_via_q, convention_matches, q_operator, reflection_matrix,
    resolve_convention, u_from_w, u_table, IndexAction, UCoefficients, UConvention,
};
pub use permutation::{x_coefficients, Convention, GroupAlgebraElement, Permutation};
pub use weights::{multi_indices, WeightAssignment};
