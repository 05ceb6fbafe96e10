//! Seeded sweeps that cross-check every construction against brute force and
//! collect the outcomes into one deterministic report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cns::{cn1_certificate, cn2_witness, lason_witness};
use crate::dualcert::{dual_decide, enumerate_forbidden, DualOptions, DualReport, ForbiddenFamily};
use crate::error::Result;
use crate::exactnum::{make_context, CyclotomicNumber, Rational};
use crate::galois::{build_galois_resolvent, pair_count, resolvent_witness};
use crate::graphenc::{Digraph, Permutation};
use crate::polyring::{sample_on_grid, support_maximal, ExponentVector, GridSpec, Polynomial, VariableSpace};
use crate::resolvent::{brute_force_subiso, embeds, kappa, primal_run, product_over, reconstruct, PrimalOptions};
use crate::search::SearchOptions;

/// Independent sub-seeds so that sections do not share random streams.
fn rng(seed: u64, section: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ section)
}

/// `count` pairs `(A, B)` of uniformly random digraphs on `n` vertices.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(Digraph, Digraph)> {
    let mut rng = rng(seed, n as u64);
    let codes = 1u64 << (n * n);
    (0..count)
        .map(|_| {
            let a = Digraph::from_code(n, rng.gen_range(0..codes));
            let b = Digraph::from_code(n, rng.gen_range(0..codes));
            (a, b)
        })
        .collect()
}

/// All `(A, B)` pairs on `n` vertices.
pub fn all_pairs(n: usize) -> Vec<(Digraph, Digraph)> {
    let graphs: Vec<Digraph> = Digraph::all(n).collect();
    graphs
        .iter()
        .flat_map(|a| graphs.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

/// What the primal machinery produced on one instance, next to the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalRecord {
    pub a: Digraph,
    pub b: Digraph,
    pub sigma: Option<Permutation>,
    pub oracle: Option<Permutation>,
    pub aut_order: u64,
    pub coset_count: u64,
    pub factors_evaluated: u64,
    /// The certificate re-expands to `f` and its `κ` is zero.
    pub certificate_ok: bool,
    /// Pairs `(ρ, σ)` with `σ ∈ Aut f` where `κ_ρ ≡ 0` and `κ_{ρ∘σ} ≡ 0` differ.
    pub invariance_violations: usize,
    pub product_zero: bool,
}

impl PrimalRecord {
    pub fn agrees(&self) -> bool {
        self.sigma.is_some() == self.oracle.is_some()
    }

    pub fn any_kappa_zero(&self) -> bool {
        self.sigma.is_some()
    }

    /// The product over coset representatives vanished although no single
    /// factor did.
    pub fn is_product_counterexample(&self) -> bool {
        self.product_zero && !self.any_kappa_zero()
    }

    fn to_json(&self) -> Value {
        json!({
            "A": self.a.code_string(),
            "B": self.b.code_string(),
            "sigma": self.sigma.as_ref().map(Permutation::image),
            "oracle": self.oracle.as_ref().map(Permutation::image),
            "aut_order": self.aut_order,
            "coset_count": self.coset_count,
            "factors_evaluated": self.factors_evaluated,
            "certificate_ok": self.certificate_ok,
            "invariance_violations": self.invariance_violations,
            "product_zero": self.product_zero,
        })
    }
}

pub fn primal_record(a: &Digraph, b: &Digraph, opts: &PrimalOptions) -> Result<PrimalRecord> {
    let run = primal_run(a, b, opts)?;
    let fc = &run.constraint;
    let certificate_ok = match &run.certificate {
        None => true,
        Some(c) => {
            c.kappa.is_zero() && reconstruct(fc, &c.sigma, &c.kappa, &c.expansion)? == fc.f && embeds(a, b, &c.sigma)
        }
    };
    let mut invariance_violations = 0;
    for rho in &run.reps {
        let base = kappa(fc, rho)?.is_zero();
        for sigma in run.aut.elements() {
            if kappa(fc, &rho.compose(sigma))?.is_zero() != base {
                invariance_violations += 1;
            }
        }
    }
    let product_zero = product_over(fc, &run.reps)?.is_zero();
    Ok(PrimalRecord {
        a: a.clone(),
        b: b.clone(),
        sigma: run.certificate.map(|c| c.sigma),
        oracle: brute_force_subiso(a, b)?,
        aut_order: run.profile.aut_order,
        coset_count: run.profile.coset_count,
        factors_evaluated: run.profile.factors_evaluated,
        certificate_ok,
        invariance_violations,
        product_zero,
    })
}

/// Summary of a primal sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalAudit {
    pub records: Vec<PrimalRecord>,
}

impl PrimalAudit {
    pub fn run(pairs: &[(Digraph, Digraph)], opts: &PrimalOptions) -> Result<Self> {
        let records = pairs
            .iter()
            .map(|(a, b)| primal_record(a, b, opts))
            .collect::<Result<_>>()?;
        Ok(PrimalAudit { records })
    }

    pub fn disagreements(&self) -> usize {
        self.records.iter().filter(|r| !r.agrees()).count()
    }

    pub fn certificates(&self) -> usize {
        self.records.iter().filter(|r| r.sigma.is_some()).count()
    }

    pub fn bad_certificates(&self) -> usize {
        self.records.iter().filter(|r| !r.certificate_ok).count()
    }

    pub fn invariance_violations(&self) -> usize {
        self.records.iter().map(|r| r.invariance_violations).sum()
    }

    /// Instances where some `κ ≡ 0` but the product did not vanish.
    pub fn necessity_violations(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.any_kappa_zero() && !r.product_zero)
            .count()
    }

    pub fn product_counterexamples(&self) -> Vec<&PrimalRecord> {
        self.records.iter().filter(|r| r.is_product_counterexample()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.records.len(),
            "certificates": self.certificates(),
            "disagreements": self.disagreements(),
            "bad_certificates": self.bad_certificates(),
            "invariance_violations": self.invariance_violations(),
            "necessity_violations": self.necessity_violations(),
            "product_counterexamples": self
                .product_counterexamples()
                .iter()
                .map(|r| r.to_json())
                .collect::<Vec<_>>(),
            "records": self.records.iter().map(PrimalRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `dual_decide` for every `A` on `B.n()` vertices.
pub fn dual_table(b: &Digraph, opts: &DualOptions) -> Result<Vec<(Digraph, DualReport)>> {
    Digraph::all(b.n())
        .map(|a| Ok((a.clone(), dual_decide(&a, b, opts)?)))
        .collect()
}

/// Violations of the family invariants: members containing `B`, repeated
/// isomorphism classes, and avoiding digraphs matched by zero or several
/// members.
pub fn family_violations(family: &ForbiddenFamily) -> usize {
    let b = &family.base;
    let contains = |c: &Digraph| brute_force_subiso(c, b).expect("guarded").is_some();
    let mut bad = family.members.iter().filter(|m| contains(m)).count();
    let canon: std::collections::BTreeSet<Digraph> = family.members.iter().map(Digraph::canonical_form).collect();
    bad += family.len() - canon.len();
    for c in Digraph::all(b.n()) {
        let expected = usize::from(!contains(&c));
        let hits = family.members.iter().filter(|m| m.is_isomorphic(&c)).count();
        bad += usize::from(hits != expected);
    }
    bad
}

fn random_cyclotomic(rng: &mut ChaCha8Rng, n: u32) -> CyclotomicNumber {
    let ctx = make_context(n).expect("positive order");
    let num = rng.gen_range(-3..=3);
    let den = rng.gen_range(1..=2);
    let q = Rational::new(num.into(), den.into());
    &CyclotomicNumber::from_rational(&ctx, &q) * &ctx.root_power(rng.gen_range(0..n as i64))
}

fn random_poly(
    rng: &mut ChaCha8Rng,
    space: &std::sync::Arc<VariableSpace>,
    n: u32,
    terms: usize,
    max_exp: u32,
) -> Polynomial {
    let ctx = make_context(n).expect("positive order");
    let vars = space.len();
    Polynomial::from_terms(
        space,
        &ctx,
        (0..terms).map(|_| {
            let e = ExponentVector((0..vars).map(|_| rng.gen_range(0..=max_exp)).collect());
            (e, random_cyclotomic(rng, n))
        }),
    )
}

/// Distinct nodes drawn from small integers and `n`-th roots of unity.
fn random_grid(rng: &mut ChaCha8Rng, n: u32, sizes: &[usize]) -> GridSpec {
    let ctx = make_context(n).expect("positive order");
    let mut pool: Vec<CyclotomicNumber> = (-2..=3).map(|v| CyclotomicNumber::from_integer(&ctx, v)).collect();
    for k in 1..n as i64 {
        let w = ctx.root_power(k);
        if !pool.contains(&w) {
            pool.push(w);
        }
    }
    let sets = sizes
        .iter()
        .map(|&size| {
            let mut set: Vec<CyclotomicNumber> = Vec::with_capacity(size);
            while set.len() < size {
                let c = pool[rng.gen_range(0..pool.len())].clone();
                if !set.contains(&c) {
                    set.push(c);
                }
            }
            set
        })
        .collect();
    GridSpec::full(sets).expect("distinct non-empty sets")
}

/// Random CN-I instances: half are combinations `Σ h_i g_i` that vanish on
/// the grid, half are arbitrary.
pub fn cn1_instances(seed: u64, count: usize) -> Vec<(Polynomial, GridSpec)> {
    let mut rng = rng(seed, 101);
    (0..count)
        .map(|k| {
            let vars = rng.gen_range(1..=3usize);
            let n = [1u32, 3, 4][rng.gen_range(0..3)];
            let ctx = make_context(n).expect("positive order");
            let space = VariableSpace::unbounded((0..vars).map(|i| format!("x_{i}"))).expect("valid names");
            let sizes: Vec<usize> = (0..vars).map(|_| rng.gen_range(1..=3)).collect();
            let grid = random_grid(&mut rng, n, &sizes);
            let f = if k % 2 == 0 {
                (0..vars).fold(Polynomial::zero(&space, &ctx), |acc, i| {
                    let h = random_poly(&mut rng, &space, n, 2, 2);
                    &acc + &(&h * &grid.grid_polynomial(i, &space, &ctx).expect("gridded"))
                })
            } else {
                random_poly(&mut rng, &space, n, 4, 3)
            };
            (f, grid)
        })
        .collect()
}

/// Random CN-II / Lason instances: `t` is a maximal support exponent of
/// `f` and each `|S_i| > t_i`.
pub fn cn2_instances(seed: u64, count: usize) -> Vec<(Polynomial, ExponentVector, GridSpec)> {
    let mut rng = rng(seed, 202);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let vars = rng.gen_range(1..=3usize);
        let n = [1u32, 3, 4][rng.gen_range(0..3)];
        let space = VariableSpace::unbounded((0..vars).map(|i| format!("x_{i}"))).expect("valid names");
        let f = random_poly(&mut rng, &space, n, 4, 2);
        let maximal: Vec<ExponentVector> = f
            .terms()
            .map(|(e, _)| e.clone())
            .filter(|e| support_maximal(&f, e))
            .collect();
        if maximal.is_empty() {
            continue;
        }
        let t = maximal[rng.gen_range(0..maximal.len())].clone();
        let sizes: Vec<usize> = t.0.iter().map(|&ti| ti as usize + 1 + rng.gen_range(0..=1)).collect();
        let grid = random_grid(&mut rng, n, &sizes);
        out.push((f, t, grid));
    }
    out
}

/// Settings for [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_pairs_n3: usize,
    pub cn1_count: usize,
    pub cn2_count: usize,
    pub primal: PrimalOptions,
    pub dual: DualOptions,
    pub search: SearchOptions,
    pub max_n_galois: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            random_pairs_n3: 200,
            cn1_count: 100,
            cn2_count: 50,
            primal: PrimalOptions::default(),
            dual: DualOptions::default(),
            search: SearchOptions::default(),
            max_n_galois: 3,
        }
    }
}

/// Runs every sweep and returns the findings document. The output depends
/// only on the configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Value> {
    let mut pairs = all_pairs(2);
    pairs.extend(random_pairs(3, cfg.random_pairs_n3, cfg.seed));
    let primal = PrimalAudit::run(&pairs, &cfg.primal)?;

    let mut symmetry = Vec::new();
    for n in [3, 4] {
        let c = Digraph::cycle(n);
        let p = primal_run(&c, &c, &cfg.primal)?.profile;
        symmetry.push(json!({
            "n": n,
            "aut_order": p.aut_order,
            "coset_count": p.coset_count,
            "factors_evaluated": p.factors_evaluated,
        }));
    }

    let mut cn1_mismatch = 0;
    let mut cn1_bad = 0;
    let mut cn1_vanishing = 0;
    for (f, grid) in cn1_instances(cfg.seed, cfg.cn1_count) {
        let cert = cn1_certificate(&f, &grid, &cfg.search)?;
        let vanishes = sample_on_grid(&f, &grid)?.values().all(CyclotomicNumber::is_zero);
        cn1_vanishing += usize::from(vanishes);
        cn1_mismatch += usize::from(vanishes != cert.remainder().is_zero());
        cn1_bad += usize::from(!cert.reconstruction_holds()? || !cert.degree_bounds_hold());
    }

    let mut cn2_records = Vec::new();
    for (f, t, grid) in cn2_instances(cfg.seed, cfg.cn2_count) {
        let use_cn2 = f.total_degree() == Some(t.total_degree());
        let w = if use_cn2 {
            cn2_witness(&f, &t, &grid, &cfg.search)?
        } else {
            lason_witness(&f, &t, &grid, &cfg.search)?
        };
        cn2_records.push(json!({
            "theorem": if use_cn2 { "CN-II" } else { "Lason" },
            "t": t.0,
            "witness": w.to_json(),
        }));
    }

    let mut galois = Vec::new();
    for r in [vec![1i64, -1], vec![0, 1, 3]] {
        let r: Vec<Rational> = r.into_iter().map(|v| Rational::from_integer(v.into())).collect();
        let inst = build_galois_resolvent(&r, cfg.max_n_galois)?;
        let w = resolvent_witness(&inst, &cfg.search)?;
        galois.push(json!({
            "degree": inst.f_r.total_degree(),
            "pairs": pair_count(r.len()),
            "witness": w.to_json(&r),
        }));
    }

    let edge2 = Digraph::from_arcs(2, &[(0, 1)]);
    let table: Vec<Value> = dual_table(&edge2, &cfg.dual)?
        .into_iter()
        .map(|(a, r)| {
            let mut v = r.to_json();
            v["A"] = json!(a.code_string());
            v
        })
        .collect();
    let edge3 = Digraph::from_arcs(3, &[(0, 1)]);
    let family3 = enumerate_forbidden(&edge3, &cfg.dual)?;

    Ok(json!({
        "seed": cfg.seed,
        "primal": primal.to_json(),
        "symmetry": symmetry,
        "cn1": {
            "instances": cfg.cn1_count,
            "vanishing": cn1_vanishing,
            "remainder_mismatches": cn1_mismatch,
            "bad_certificates": cn1_bad,
        },
        "cn2": cn2_records,
        "galois": galois,
        "dual": {
            "n2_edge_family_size": enumerate_forbidden(&edge2, &cfg.dual)?.len(),
            "n2_edge_table": table,
            "n3_edge_family": family3.members.iter().map(Digraph::code_string).collect::<Vec<_>>(),
            "n3_edge_family_violations": family_violations(&family3),
        },
    }))
}
