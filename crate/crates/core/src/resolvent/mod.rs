//! Subgraph isomorphism through the constraint polynomial
//! `f(x, r) = B(x_0, x_1) · [1 - A(p(x_0, r), p(x_1, r))]`.
//!
//! Substituting `r := P_σ w` gives `κ_σ(x)`, which vanishes identically exactly
//! when `σ` maps every arc of `B` onto an arc of `A`. Since `κ` is constant on
//! each class `ρ ∘ Aut f`, only one representative per class is tried.

mod group;

use std::time::{Duration, Instant};

use serde_json::{json, Value};

pub use group::{coset_reps, PermGroup};

use crate::error::{Error, Result};
use crate::exactnum::{make_context, CyclotomicContext, CyclotomicNumber};
use crate::graphenc::{
    adjacency_space, constraint_space, encode_adjacency, factorial, interpolant_in, Digraph, Permutation,
};
use crate::polyring::{Assignment, Polynomial};
use crate::search::find_first;

/// Size guards and scheduling for the primal search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimalOptions {
    pub max_n: usize,
    pub parallel: bool,
}

impl Default for PrimalOptions {
    fn default() -> Self {
        PrimalOptions {
            max_n: 6,
            parallel: false,
        }
    }
}

fn check_guard(n: usize, max_n: usize, what: &'static str) -> Result<()> {
    if n > max_n {
        return Err(Error::GuardExceeded {
            what,
            limit: max_n as u64,
            actual: n as u64,
        });
    }
    Ok(())
}

/// Variable index of `r_k` in the constraint space.
const R_OFFSET: usize = 2;

/// The reduced constraint polynomial for a pair `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintPolynomial {
    pub f: Polynomial,
    pub a: Digraph,
    pub b: Digraph,
}

impl ConstraintPolynomial {
    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn context(&self) -> &CyclotomicContext {
        self.f.context()
    }

    /// `f(x, P_σ r)`: `r_k` replaced by `r_{σ(k)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Polynomial> {
        check_len(sigma, self.n())?;
        let image: Vec<usize> = (0..R_OFFSET)
            .chain(sigma.image().iter().map(|&s| s + R_OFFSET))
            .collect();
        self.f.permute_variables(&image)
    }
}

fn check_len(sigma: &Permutation, n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: sigma.len(),
        });
    }
    Ok(())
}

fn check_same_size(a: &Digraph, b: &Digraph) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            actual: a.n(),
        });
    }
    Ok(())
}

/// `x_0 ↦ p(x_0, r)`, `x_1 ↦ p(x_1, r)` in the constraint space.
pub(crate) fn interpolant_assignment(ctx: &CyclotomicContext) -> Assignment {
    let space = constraint_space(ctx.order());
    let mut assign = Assignment::new();
    assign.insert("x_0".into(), interpolant_in(&space, ctx, 0, R_OFFSET));
    assign.insert("x_1".into(), interpolant_in(&space, ctx, 1, R_OFFSET));
    assign
}

/// `C(p(x_0, r), p(x_1, r))` for an adjacency polynomial `C(x_0, x_1)`.
pub(crate) fn compose_with_interpolant(c: &Polynomial, assign: &Assignment) -> Result<Polynomial> {
    let target = assign["x_0"].space().clone();
    c.substitute(assign, &target)
}

pub fn build_constraint(a: &Digraph, b: &Digraph) -> Result<ConstraintPolynomial> {
    check_same_size(a, b)?;
    let ctx = make_context(a.n() as u32)?;
    let space = constraint_space(ctx.order());
    let b_poly = encode_adjacency(b, &ctx)?.embed(&space)?;
    let f = if b_poly.is_zero() {
        b_poly
    } else {
        let a_sub = compose_with_interpolant(&encode_adjacency(a, &ctx)?, &interpolant_assignment(&ctx))?;
        &b_poly * &(&Polynomial::one(&space, &ctx) - &a_sub)
    };
    Ok(ConstraintPolynomial {
        f,
        a: a.clone(),
        b: b.clone(),
    })
}

/// `{σ : f(x, r) = f(x, P_σ r)}` by filtering all of `S_n`.
pub fn automorphism_group(fc: &ConstraintPolynomial, opts: &PrimalOptions) -> Result<PermGroup> {
    let n = fc.n();
    check_guard(n, opts.max_n, "primal vertex count")?;
    if fc.f.is_zero() {
        return Ok(PermGroup::symmetric(n));
    }
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let fixes = |s: &Permutation| fc.permuted(s).map(|g| g == fc.f);
    let flags: Vec<bool> = if opts.parallel {
        use rayon::prelude::*;
        all.par_iter().map(fixes).collect::<Result<_>>()?
    } else {
        all.iter().map(fixes).collect::<Result<_>>()?
    };
    PermGroup::new(n, all.into_iter().zip(flags).filter_map(|(s, keep)| keep.then_some(s)))
}

/// `κ_σ(x) = f(x, P_σ w)`, a polynomial in `x_0, x_1`.
pub fn kappa(fc: &ConstraintPolynomial, sigma: &Permutation) -> Result<Polynomial> {
    check_len(sigma, fc.n())?;
    let ctx = fc.context();
    let target = adjacency_space(ctx.order());
    let assign: Assignment = sigma
        .image()
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            (
                format!("r_{k}"),
                Polynomial::constant(&target, ctx.root_power(s as i64)),
            )
        })
        .collect();
    fc.f.substitute(&assign, &target)
}

/// Exact division by `r_k - c`: returns `(q, h|_{r_k = c})` with
/// `h = (r_k - c) q + h|_{r_k = c}`.
fn divide_linear(h: &Polynomial, var: usize, c: &CyclotomicNumber) -> (Polynomial, Polynomial) {
    let space = h.space();
    let ctx = h.context();
    let mut c_pows = vec![CyclotomicNumber::one(ctx)];
    let mut quotient = Vec::new();
    let mut rest = Vec::new();
    for (exp, coeff) in h.terms() {
        let e = exp.0[var] as usize;
        while c_pows.len() <= e {
            let next = c_pows.last().unwrap() * c;
            c_pows.push(next);
        }
        // (r^e - c^e) / (r - c) = Σ_{j<e} r^j c^{e-1-j}
        for j in 0..e {
            let mut q = exp.clone();
            q.0[var] = j as u32;
            quotient.push((q, coeff * &c_pows[e - 1 - j]));
        }
        let mut base = exp.clone();
        base.0[var] = 0;
        rest.push((base, coeff * &c_pows[e]));
    }
    (
        Polynomial::from_terms(space, ctx, quotient),
        Polynomial::from_terms(space, ctx, rest),
    )
}

/// `g_0..g_{n-1}` with `f - κ_σ = Σ_k (r_k - ω^{σ(k)}) g_k`, dividing by the
/// linear forms in the order `k = 0, 1, ..`.
pub fn expansion_certificate(fc: &ConstraintPolynomial, sigma: &Permutation) -> Result<Vec<Polynomial>> {
    let k = kappa(fc, sigma)?.embed(fc.f.space())?;
    let mut h = &fc.f - &k;
    let mut g = Vec::with_capacity(fc.n());
    for (idx, &s) in sigma.image().iter().enumerate() {
        let (q, rest) = divide_linear(&h, R_OFFSET + idx, &fc.context().root_power(s as i64));
        g.push(q);
        h = rest;
    }
    if !h.is_zero() {
        return Err(Error::SoundnessFailure(format!(
            "remainder {h} left after dividing by every linear form"
        )));
    }
    Ok(g)
}

/// `κ_σ + Σ_k (r_k - ω^{σ(k)}) g_k` in the constraint space.
pub fn reconstruct(
    fc: &ConstraintPolynomial,
    sigma: &Permutation,
    kappa: &Polynomial,
    expansion: &[Polynomial],
) -> Result<Polynomial> {
    let space = fc.f.space();
    let ctx = fc.context();
    let mut acc = kappa.embed(space)?;
    for (k, (g, &s)) in expansion.iter().zip(sigma.image()).enumerate() {
        let linear =
            &Polynomial::var(space, ctx, R_OFFSET + k) - &Polynomial::constant(space, ctx.root_power(s as i64));
        acc = &acc + &(&linear * g);
    }
    Ok(acc)
}

/// Counters from one run of the primal search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkProfile {
    pub n: usize,
    pub aut_order: u64,
    pub coset_count: u64,
    /// Number of `κ` evaluations up to and including the first success.
    pub factors_evaluated: u64,
    pub elapsed: Duration,
}

impl WorkProfile {
    pub fn lagrange_holds(&self) -> bool {
        self.aut_order * self.coset_count == factorial(self.n)
    }

    /// Counters only; the wall time is reported separately so that the
    /// document is reproducible.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "aut_order": self.aut_order,
            "coset_count": self.coset_count,
            "factors_evaluated": self.factors_evaluated,
        })
    }
}

/// A permutation with `κ_σ ≡ 0` and the expansion `f = ⟨r - P_σ w, g⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalCertificate {
    pub sigma: Permutation,
    pub kappa: Polynomial,
    pub expansion: Vec<Polynomial>,
    pub work: WorkProfile,
}

impl PrimalCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "problem": "subgraph-isomorphism",
            "n": self.work.n,
            "sigma": self.sigma.image(),
            "aut_order": self.work.aut_order,
            "coset_count": self.work.coset_count,
            "kappa_zero": self.kappa.is_zero(),
            "expansion": self.expansion.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "reconstruction_checked": true,
        })
    }
}

/// Everything computed by one primal search.
#[derive(Clone, Debug)]
pub struct PrimalRun {
    pub constraint: ConstraintPolynomial,
    pub aut: PermGroup,
    pub reps: Vec<Permutation>,
    pub certificate: Option<PrimalCertificate>,
    pub profile: WorkProfile,
}

/// Builds `f`, computes `Aut f` and tries the coset representatives in
/// increasing order, stopping at the first `κ ≡ 0`.
pub fn primal_run(a: &Digraph, b: &Digraph, opts: &PrimalOptions) -> Result<PrimalRun> {
    check_same_size(a, b)?;
    check_guard(a.n(), opts.max_n, "primal vertex count")?;
    let start = Instant::now();
    let fc = build_constraint(a, b)?;
    let aut = automorphism_group(&fc, opts)?;
    let reps = coset_reps(&aut, fc.n())?;
    let hit = find_first(reps.len() as u64, opts.parallel, |i| {
        kappa(&fc, &reps[i as usize])
            .expect("representative has length n")
            .is_zero()
    });
    let mut profile = WorkProfile {
        n: fc.n(),
        aut_order: aut.order() as u64,
        coset_count: reps.len() as u64,
        factors_evaluated: hit.map_or(reps.len() as u64, |i| i + 1),
        elapsed: Duration::ZERO,
    };
    let certificate = match hit {
        None => None,
        Some(i) => {
            let sigma = reps[i as usize].clone();
            let k = kappa(&fc, &sigma)?;
            let expansion = expansion_certificate(&fc, &sigma)?;
            if reconstruct(&fc, &sigma, &k, &expansion)? != fc.f {
                return Err(Error::SoundnessFailure(format!(
                    "expansion for {sigma} does not reconstruct f"
                )));
            }
            Some(PrimalCertificate {
                sigma,
                kappa: k,
                expansion,
                work: profile.clone(),
            })
        }
    };
    profile.elapsed = start.elapsed();
    let certificate = certificate.map(|mut c| {
        c.work.elapsed = profile.elapsed;
        c
    });
    if !profile.lagrange_holds() {
        return Err(Error::SoundnessFailure("|Aut f| · cosets differs from n!".into()));
    }
    Ok(PrimalRun {
        constraint: fc,
        aut,
        reps,
        certificate,
        profile,
    })
}

pub fn primal_decide(a: &Digraph, b: &Digraph, opts: &PrimalOptions) -> Result<Option<PrimalCertificate>> {
    Ok(primal_run(a, b, opts)?.certificate)
}

pub fn work_profile(a: &Digraph, b: &Digraph, opts: &PrimalOptions) -> Result<WorkProfile> {
    Ok(primal_run(a, b, opts)?.profile)
}

/// `∏_ρ f(x, P_ρ r)` at `r := w`, over the coset representatives `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCriterion {
    pub product: Polynomial,
    pub factors: usize,
}

impl ProductCriterion {
    pub fn is_zero(&self) -> bool {
        self.product.is_zero()
    }
}

/// Evaluates the coset product. Each factor `f(x, P_ρ r)` at `r := w` is
/// `κ_ρ`, and `r := w` is a ring homomorphism on the quotient, so the product
/// of the `κ_ρ` equals the specialised product of the factors.
pub fn product_criterion(a: &Digraph, b: &Digraph, opts: &PrimalOptions) -> Result<ProductCriterion> {
    let run = primal_run(a, b, opts)?;
    product_over(&run.constraint, &run.reps)
}

pub fn product_over(fc: &ConstraintPolynomial, reps: &[Permutation]) -> Result<ProductCriterion> {
    let space = adjacency_space(fc.n() as u32);
    let mut product = Polynomial::one(&space, fc.context());
    for rho in reps {
        if product.is_zero() {
            break;
        }
        product = &product * &kappa(fc, rho)?;
    }
    Ok(ProductCriterion {
        product,
        factors: reps.len(),
    })
}

/// The same product expanded in `C[x, r]` before specialising `r := w`.
/// Exponentially more expensive; used to cross-check [`product_over`].
pub fn product_expanded(fc: &ConstraintPolynomial, reps: &[Permutation]) -> Result<Polynomial> {
    let mut acc = Polynomial::one(fc.f.space(), fc.context());
    for rho in reps {
        acc = &acc * &fc.permuted(rho)?;
    }
    kappa(
        &ConstraintPolynomial {
            f: acc,
            a: fc.a.clone(),
            b: fc.b.clone(),
        },
        &Permutation::identity(fc.n()),
    )
}

/// Whether every arc `i → j` of `B` lands on an arc `σ(i) → σ(j)` of `A`.
pub fn embeds(a: &Digraph, b: &Digraph, sigma: &Permutation) -> bool {
    let n = b.n();
    (0..n).all(|i| (0..n).all(|j| !b.get(i, j) || a.get(sigma.apply(i), sigma.apply(j))))
}

/// First `σ` in lexicographic order with `B_{ij} = 1 ⟹ A_{σ(i)σ(j)} = 1`.
pub fn brute_force_subiso(a: &Digraph, b: &Digraph) -> Result<Option<Permutation>> {
    check_same_size(a, b)?;
    check_guard(a.n(), 8, "brute-force vertex count")?;
    Ok(Permutation::all(a.n()).find(|s| embeds(a, b, s)))
}
