//! Dense exact linear algebra: determinants, Pfaffians, Gram volumes and
//! restriction of operators to invariant subspaces.

mod matrix;
mod subspace;
mod vector;

pub use matrix::{pfaffian_f64, Matrix};
pub use subspace::{
    det_on_subspace, invert_rational, operator_on_subspace, oriented_volume,
    orthonormal_matrix_f64, orthonormalize_f64, pfaffian_on_subspace, unit_oriented_volume,
};
pub use vector::{cross_gram_det, gram_matrix, is_independent, paired_volume, rank, VectorQ};
