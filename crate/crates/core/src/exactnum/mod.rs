//! Exact arithmetic in the cyclotomic field `Q(ω_n)` and the small amount of
//! linear algebra (Hadamard products, bilinear forms, the DFT matrix) the
//! graph encodings are built from.
//!
//! Elements are stored as the unique residue modulo the `n`-th cyclotomic
//! polynomial `Φ_n`, so equality and zero tests are plain coefficient
//! comparisons. Nothing here ever touches floating point except
//! [`CyclotomicNumber::to_complex`], which exists for diagnostics only.

mod cyclotomic;
mod linalg;
mod rational;

pub use cyclotomic::{make_context, CyclotomicContext, CyclotomicNumber};
pub use linalg::{bilinear_form, dft_matrix, hadamard, hadamard_pow, CycMatrix, CycVector};
pub use rational::{parse_rational, Rational};
