use std::sync::Arc;

use super::digraph::Digraph;
use super::perm::Permutation;
use crate::error::{Error, Result};
use crate::exactnum::{bilinear_form, hadamard_pow, CycMatrix, CycVector, CyclotomicContext, CyclotomicNumber};
use crate::polyring::{ExponentVector, Polynomial, VariableSpace};

/// `[x_0, x_1]`, both cyclic of order `n`.
pub fn adjacency_space(n: u32) -> Arc<VariableSpace> {
    VariableSpace::cyclic(["x_0", "x_1"], n).expect("valid names")
}

fn r_names(n: u32) -> impl Iterator<Item = String> {
    (0..n).map(|k| format!("r_{k}"))
}

/// `[x, r_0, .., r_{n-1}]`, all cyclic of order `n`.
pub fn interpolant_space(n: u32) -> Arc<VariableSpace> {
    VariableSpace::cyclic(std::iter::once("x".to_string()).chain(r_names(n)), n).expect("valid names")
}

/// `[r_0, .., r_{n-1}]`, all cyclic of order `n`.
pub fn r_space(n: u32) -> Arc<VariableSpace> {
    VariableSpace::cyclic(r_names(n), n).expect("valid names")
}

/// `[x_0, x_1, r_0, .., r_{n-1}]`, all cyclic of order `n`: the ring every
/// constraint polynomial lives in.
pub fn constraint_space(n: u32) -> Arc<VariableSpace> {
    VariableSpace::cyclic(["x_0".to_string(), "x_1".to_string()].into_iter().chain(r_names(n)), n).expect("valid names")
}

fn check_order(g: &Digraph, ctx: &CyclotomicContext) -> Result<()> {
    if g.n() as u32 == ctx.order() {
        Ok(())
    } else {
        Err(Error::ContextMismatch {
            left: g.n() as u32,
            right: ctx.order(),
        })
    }
}

/// Adjacency polynomial
/// `A(x_0, x_1) = n^{-2} Σ_{k0,k1} ⟨w^{⋆-k0}, w^{⋆-k1}⟩_A x_0^{k0} x_1^{k1}`,
/// which takes the value `A_{ij}` at `(ω^i, ω^j)`.
pub fn encode_adjacency(g: &Digraph, ctx: &CyclotomicContext) -> Result<Polynomial> {
    check_order(g, ctx)?;
    let n = ctx.order();
    let space = adjacency_space(n);
    let matrix = CycMatrix::from_fn(ctx, g.n(), g.n(), |i, j| {
        CyclotomicNumber::from_integer(ctx, i64::from(g.get(i, j)))
    });
    let w = CycVector::roots(ctx);
    let scale = CyclotomicNumber::from_integer(ctx, i64::from(n * n)).inv()?;
    let conj_powers: Vec<CycVector> = (0..n).map(|k| hadamard_pow(&w, -i64::from(k))).collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for k0 in 0..n {
        for k1 in 0..n {
            let c = bilinear_form(&conj_powers[k0 as usize], &matrix, &conj_powers[k1 as usize])?;
            terms.push((ExponentVector(vec![k0, k1]), &c * &scale));
        }
    }
    Ok(Polynomial::from_terms(&space, ctx, terms))
}

/// Reads the adjacency matrix back from the values at `(ω^i, ω^j)`.
pub fn decode_adjacency(poly: &Polynomial, n: usize) -> Result<Digraph> {
    let ctx = poly.context();
    if ctx.order() as usize != n {
        return Err(Error::ContextMismatch {
            left: n as u32,
            right: ctx.order(),
        });
    }
    if poly.space().len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: poly.space().len(),
        });
    }
    let one = CyclotomicNumber::one(ctx);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = poly.grid_evaluate(&[ctx.root_power(i as i64), ctx.root_power(j as i64)])?;
            if v == one {
                arcs.push((i, j));
            } else if !v.is_zero() {
                return Err(Error::NotAdjacency {
                    i,
                    j,
                    value: v.to_string(),
                });
            }
        }
    }
    Ok(Digraph::from_arcs(n, &arcs))
}

/// `p(x, r) = Σ_k r_k ℓ_k(x)` written into `space`, where `x` is variable
/// `x_index` and `r_k` is variable `r_offset + k`. Uses the closed form
/// `ℓ_k(x) = n^{-1} Σ_j ω^{-jk} x^j`.
pub(crate) fn interpolant_in(
    space: &Arc<VariableSpace>,
    ctx: &CyclotomicContext,
    x_index: usize,
    r_offset: usize,
) -> Polynomial {
    let n = ctx.order();
    let inv_n = CyclotomicNumber::from_integer(ctx, i64::from(n)).inv().expect("n > 0");
    let mut terms = Vec::with_capacity((n * n) as usize);
    for k in 0..n {
        for j in 0..n {
            let mut exp = vec![0; space.len()];
            exp[x_index] = j;
            exp[r_offset + k as usize] = 1;
            let c = &ctx.root_power(-i64::from(j * k)) * &inv_n;
            terms.push((ExponentVector(exp), c));
        }
    }
    Polynomial::from_terms(space, ctx, terms)
}

/// The permutation interpolant `p(x, r)` in [`interpolant_space`]:
/// substituting `r := P_σ w` sends `ω^k` to `ω^{σ(k)}`.
pub fn permutation_interpolant(ctx: &CyclotomicContext) -> Polynomial {
    interpolant_in(&interpolant_space(ctx.order()), ctx, 0, 1)
}

/// `P_σ w`, the vector with entries `ω^{σ(k)}`.
pub fn perm_vector(sigma: &Permutation, ctx: &CyclotomicContext) -> Result<CycVector> {
    let n = ctx.order() as usize;
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: sigma.len(),
        });
    }
    CycVector::new(ctx, sigma.image().iter().map(|&s| ctx.root_power(s as i64)).collect())
}

/// Recovers `σ` from a vector of distinct `n`-th roots of unity.
pub fn vector_to_perm(v: &CycVector) -> Result<Permutation> {
    let ctx = v.context();
    let n = ctx.order();
    let mut image = Vec::with_capacity(v.len());
    for (k, entry) in v.entries().iter().enumerate() {
        let j = (0..n)
            .find(|&j| ctx.root_power(i64::from(j)) == *entry)
            .ok_or(Error::NotRootOfUnity(k))? as usize;
        if let Some(prev) = image.iter().position(|&x| x == j) {
            return Err(Error::RepeatedEntry(prev, k));
        }
        image.push(j);
    }
    Permutation::new(image)
}

/// Checks `Σ_j r_j^t = 0` for `0 < t < n` and `Σ_j r_j^n = n`.
pub fn power_sum_check(r: &CycVector) -> bool {
    let ctx = r.context();
    let n = r.len();
    let mut powers: Vec<CyclotomicNumber> = r.entries().to_vec();
    for t in 1..=n {
        let sum = powers.iter().fold(CyclotomicNumber::zero(ctx), |acc, p| &acc + p);
        let expected = if t == n { n as i64 } else { 0 };
        if sum != CyclotomicNumber::from_integer(ctx, expected) {
            return false;
        }
        if t < n {
            for (p, x) in powers.iter_mut().zip(r.entries()) {
                *p = &*p * x;
            }
        }
    }
    true
}
