//! Exact verification of determinant and Pfaffian identities for weighted
//! sums of reflections and of nested commutators of reflections.
//!
//! The operator side of each identity is computed with exact rational and
//! polynomial arithmetic; the combinatorial side is enumerated explicitly
//! (trees, DOOMBs, pair matchings, 3-trees, B-basic graphs).

pub mod commutators;
pub mod enumerate;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod norms;
pub mod ring;
pub mod rootsystems;
pub mod system;

pub use error::{Error, Result};
pub use system::VectorSystem;
