//! Combinatorics of `x1*` as a function of the root-subgroup parameters:
//! the recursion in the number of variables, the integer coefficient tables,
//! cluster decompositions, and the Hermitian sums `b_n(m)`.

mod cluster;
mod coeffs;
mod poly;
mod recursion;
mod ring;
mod sums;

pub use cluster::{cluster_coefficient, cluster_coefficient_of, cluster_decompositions, Cluster, Decomposition};
pub use coeffs::{
    expand_x1, partitions, CoefficientEntry, CoefficientTable, IndexPair, X1Expansion, DEFAULT_MAX_WEIGHT,
};
pub use poly::{Monomial, SparsePoly, MAX_VARS};
pub use recursion::{full_x, full_x_star, x1_recursion, x1_table, X1Table};
pub use ring::{Ring, Truncated};
pub use sums::{
    b_sum, four_var_inputs, s32_closed_form, s_components, s_identity_check, zeta1_four_vars, SIdentity,
};
