//! Sparse multivariate polynomials over `Q(ω_n)`.
//!
//! A [`VariableSpace`] may declare variables cyclic of order `m`; their
//! exponents are reduced eagerly, which realises quotients such as
//! `C[x, r] / (x^n - 1, r_k^n - 1)` with every stored value in canonical form.

mod grid;
mod poly;
mod space;
mod subst;
mod text;

pub use grid::{
    divide_by_grid, divide_by_grid_ordered, grid_interpolate, sample_on_grid, support_maximal, GridDivision, GridSpec,
};
pub use poly::Polynomial;
pub use space::{ExponentVector, VariableSpace, ROOT_SYMBOL};
pub use subst::Assignment;
pub use text::{parse_constant, parse_polynomial};
