//! Dual constructions: the family of digraphs avoiding `B`, the product
//! polynomial `f_B` and its isomorphism variant `g_B`.
//!
//! With `V(r) = ∏_{i<j}(r_i - r_j)` and `C̃ = C(p(x_0, r), p(x_1, r))`,
//!
//! ```text
//! f_B = V · ∏_C [1 - A(x_0, x_1)] · C̃
//! g_B = V · ∏_C [(1 - A) · C̃ + (1 - C̃) · A]
//! ```
//!
//! over the representatives `C` of the `B`-avoiding isomorphism classes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{make_context, CyclotomicContext};
use crate::graphenc::{constraint_space, encode_adjacency, r_space, Digraph};
use crate::polyring::Polynomial;
use crate::resolvent::{brute_force_subiso, compose_with_interpolant, interpolant_assignment};

/// Size guard for the dual constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualOptions {
    pub max_n: usize,
    pub parallel: bool,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            max_n: 4,
            parallel: false,
        }
    }
}

fn check_guard(n: usize, opts: &DualOptions) -> Result<()> {
    if n > opts.max_n {
        return Err(Error::GuardExceeded {
            what: "dual vertex count",
            limit: opts.max_n as u64,
            actual: n as u64,
        });
    }
    Ok(())
}

/// Canonical representatives of the digraphs not containing `B`, sorted by
/// their adjacency strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenFamily {
    pub base: Digraph,
    pub members: Vec<Digraph>,
}

impl ForbiddenFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn avoids(c: &Digraph, b: &Digraph) -> bool {
    brute_force_subiso(c, b).expect("guarded sizes").is_none()
}

pub fn enumerate_forbidden(b: &Digraph, opts: &DualOptions) -> Result<ForbiddenFamily> {
    let n = b.n();
    check_guard(n, opts)?;
    let keep = |code: u64| {
        let c = Digraph::from_code(n, code);
        avoids(&c, b).then(|| c.canonical_form())
    };
    let total = 1u64 << (n * n);
    let classes: BTreeSet<Digraph> = if opts.parallel {
        (0..total).into_par_iter().filter_map(keep).collect()
    } else {
        (0..total).filter_map(keep).collect()
    };
    Ok(ForbiddenFamily {
        base: b.clone(),
        members: classes.into_iter().collect(),
    })
}

pub fn forbidden_polys(family: &ForbiddenFamily, ctx: &CyclotomicContext) -> Result<Vec<Polynomial>> {
    family.members.iter().map(|c| encode_adjacency(c, ctx)).collect()
}

/// `∏_{i<j} (r_i - r_j)` in the `r` variables.
pub fn vandermonde_factor(ctx: &CyclotomicContext) -> Polynomial {
    let space = r_space(ctx.order());
    let n = space.len();
    let mut acc = Polynomial::one(&space, ctx);
    for i in 0..n {
        for j in i + 1..n {
            acc = &acc * &(&Polynomial::var(&space, ctx, i) - &Polynomial::var(&space, ctx, j));
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    SubIso,
    Iso,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPolynomial {
    pub poly: Polynomial,
    pub kind: DualKind,
    pub family_size: usize,
}

fn build_dual(a: &Digraph, b: &Digraph, kind: DualKind, opts: &DualOptions) -> Result<DualPolynomial> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            actual: a.n(),
        });
    }
    let family = enumerate_forbidden(b, opts)?;
    let ctx = make_context(a.n() as u32)?;
    let space = constraint_space(ctx.order());
    let one = Polynomial::one(&space, &ctx);
    let a_poly = encode_adjacency(a, &ctx)?.embed(&space)?;
    let not_a = &one - &a_poly;
    let assign = interpolant_assignment(&ctx);
    let mut acc = vandermonde_factor(&ctx).embed(&space)?;
    for c in forbidden_polys(&family, &ctx)? {
        if acc.is_zero() {
            break;
        }
        let c_sub = compose_with_interpolant(&c, &assign)?;
        let factor = match kind {
            DualKind::SubIso => &not_a * &c_sub,
            DualKind::Iso => &(&not_a * &c_sub) + &(&(&one - &c_sub) * &a_poly),
        };
        acc = &acc * &factor;
    }
    Ok(DualPolynomial {
        poly: acc,
        kind,
        family_size: family.len(),
    })
}

/// `f_B`, built over the family of `B`-avoiding classes.
pub fn build_dual_subiso(a: &Digraph, b: &Digraph, opts: &DualOptions) -> Result<DualPolynomial> {
    build_dual(a, b, DualKind::SubIso, opts)
}

/// `g_B`, the isomorphism variant.
pub fn build_dual_iso(a: &Digraph, b: &Digraph, opts: &DualOptions) -> Result<DualPolynomial> {
    build_dual(a, b, DualKind::Iso, opts)
}

/// Outcome of comparing `f_B ≡ 0` with the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    pub n: usize,
    pub b: Digraph,
    pub family_size: usize,
    pub f_b_is_zero: bool,
    pub oracle_contains: bool,
    /// False when `f_B ≡ 0` is read as a non-existence certificate but `A`
    /// does contain `B`.
    pub consistent: bool,
    /// Whether "`A` avoids `B` implies `f_B ≡ 0`" holds on this instance.
    pub vanishing_claim_holds: bool,
}

impl DualReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "B": self.b,
            "family_size": self.family_size,
            "f_B_is_zero": self.f_b_is_zero,
            "oracle_contains": self.oracle_contains,
            "consistent": self.consistent,
            "vanishing_claim_holds": self.vanishing_claim_holds,
        })
    }
}

pub fn dual_decide(a: &Digraph, b: &Digraph, opts: &DualOptions) -> Result<DualReport> {
    let dual = build_dual_subiso(a, b, opts)?;
    let oracle_contains = brute_force_subiso(a, b)?.is_some();
    let f_b_is_zero = dual.poly.is_zero();
    Ok(DualReport {
        n: a.n(),
        b: b.clone(),
        family_size: dual.family_size,
        f_b_is_zero,
        oracle_contains,
        consistent: !(f_b_is_zero && oracle_contains),
        vanishing_claim_holds: oracle_contains || f_b_is_zero,
    })
}
