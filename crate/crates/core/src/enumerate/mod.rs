//! Combinatorial structures behind the right-hand sides (DOOMBs, directed
//! pair matchings, labeled trees, 3-trees, B-basic graphs) and the weighted
//! sums over them.

mod bbasic;
mod doomb;
mod sums;
mod threetrees;
mod trees;

pub use bbasic::{b_edges, bbasic_components, enumerate_bbasic, is_bbasic, BBasicGraph, BEdge};
pub use doomb::{
    classify_doomb, enumerate_doombs, enumerate_pair_matchings, reverse_component, Component,
    ComponentKind, Doomb, DoombClass,
};
pub use sums::{
    combinations, doomb_term, k_weight, keven_pf_terms, rhs_gendet, rhs_k1, rhs_keven_pf,
    GenDetForm, KWeights, PfMode, PfValue, UWeights,
};
pub use threetrees::{
    base_three_tree, delta_sign, enumerate_3trees, euler_characteristic, three_tree_sum, ThreeTree,
};
pub use trees::{enumerate_trees, is_tree, tree_sum, tree_volume_sign, LabeledTree};
