//! Digraphs, permutations and their encodings as polynomials over `Q(ω_n)`.

mod digraph;
mod encode;
mod perm;

pub use digraph::Digraph;
pub(crate) use encode::interpolant_in;
pub use encode::{
    adjacency_space, constraint_space, decode_adjacency, encode_adjacency, interpolant_space, perm_vector,
    permutation_interpolant, power_sum_check, r_space, vector_to_perm,
};
pub use perm::{factorial, Permutation};
