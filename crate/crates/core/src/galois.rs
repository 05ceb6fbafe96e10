//! The integral Galois resolvent
//! `f_r(x) = ∏_{μ<ν} (⟨r, P_μ x⟩ - ⟨r, P_ν x⟩)` over pairs of permutations,
//! and the search for an integer point where it does not vanish.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{make_context, CyclotomicContext, CyclotomicNumber, Rational};
use crate::graphenc::{factorial, Permutation};
use crate::polyring::{ExponentVector, Polynomial, VariableSpace};
use crate::resolvent::PermGroup;
use crate::search::{digits, find_first, SearchOptions};

/// `C(n!, 2)`, the number of linear factors of `f_r`.
pub fn pair_count(n: usize) -> u64 {
    let m = factorial(n);
    m * m.saturating_sub(1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventInstance {
    pub r: Vec<Rational>,
    pub f_r: Polynomial,
}

impl ResolventInstance {
    pub fn n(&self) -> usize {
        self.r.len()
    }
}

fn rational_context() -> CyclotomicContext {
    make_context(1).expect("order 1 is valid")
}

/// `⟨r, P_σ s⟩ = Σ_k r_k s_{σ(k)}`.
pub fn form_value(r: &[Rational], sigma: &Permutation, s: &[i64]) -> Rational {
    r.iter()
        .zip(sigma.image())
        .map(|(rk, &j)| rk * Rational::from_integer(s[j].into()))
        .sum()
}

/// Expands the product of all `C(n!, 2)` linear factors. Requires pairwise
/// distinct entries of `r` and `n <= max_n`.
pub fn build_galois_resolvent(r: &[Rational], max_n: usize) -> Result<ResolventInstance> {
    let n = r.len();
    if n > max_n {
        return Err(Error::GuardExceeded {
            what: "galois vertex count",
            limit: max_n as u64,
            actual: n as u64,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if r[i] == r[j] {
                return Err(Error::Precondition(format!(
                    "r_{i} = r_{j} = {}; entries of r must be pairwise distinct",
                    r[i]
                )));
            }
        }
    }
    let ctx = rational_context();
    let space: Arc<VariableSpace> = VariableSpace::unbounded((0..n).map(|k| format!("x_{k}")))?;
    let forms: Vec<Polynomial> = Permutation::all(n)
        .map(|mu| {
            Polynomial::from_terms(
                &space,
                &ctx,
                r.iter()
                    .zip(mu.image())
                    .map(|(rk, &j)| (ExponentVector::unit(n, j), CyclotomicNumber::from_rational(&ctx, rk))),
            )
        })
        .collect();
    let mut f_r = Polynomial::one(&space, &ctx);
    for (a, mu) in forms.iter().enumerate() {
        for nu in &forms[a + 1..] {
            f_r = &f_r * &(mu - nu);
        }
    }
    Ok(ResolventInstance { r: r.to_vec(), f_r })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisWitness {
    pub s: Vec<i64>,
    /// `⟨r, P_σ s⟩` for every `σ` in lexicographic order.
    pub values: Vec<Rational>,
    pub f_value: Rational,
}

impl GaloisWitness {
    pub fn to_json(&self, r: &[Rational]) -> Value {
        json!({
            "n": self.s.len(),
            "r": r.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "s": self.s,
            "values": self.values.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "f_r_value": self.f_value.to_string(),
            "stabilizer_order": 1,
        })
    }
}

fn evaluate(inst: &ResolventInstance, s: &[i64]) -> Rational {
    let ctx = inst.f_r.context();
    let point: Vec<CyclotomicNumber> = s.iter().map(|&v| CyclotomicNumber::from_integer(ctx, v)).collect();
    inst.f_r
        .grid_evaluate(&point)
        .expect("point has one entry per variable")
        .as_rational()
        .expect("order-1 field is Q")
}

/// First `s` in `{0..C(n!,2)}^n` (lexicographic) with `f_r(s) ≠ 0`.
pub fn resolvent_witness(inst: &ResolventInstance, opts: &SearchOptions) -> Result<GaloisWitness> {
    let n = inst.n();
    let side = pair_count(n) + 1;
    let size = (side as u128).pow(n as u32);
    if size > u128::from(opts.grid_guard) {
        return Err(Error::GuardExceeded {
            what: "galois witness box",
            limit: opts.grid_guard,
            actual: u64::try_from(size).unwrap_or(u64::MAX),
        });
    }
    let radices = vec![side; n];
    let point = |k: u64| -> Vec<i64> { digits(k, &radices).into_iter().map(|d| d as i64).collect() };
    let k = find_first(size as u64, opts.parallel, |k| {
        evaluate(inst, &point(k)) != Rational::from_integer(0.into())
    })
    .ok_or_else(|| Error::SoundnessFailure("witness box exhausted without a nonzero value".into()))?;
    let s = point(k);
    let stab = stabilizer_of_form(&inst.r, &s)?;
    if !stab.all_distinct || stab.elements.len() != 1 {
        return Err(Error::SoundnessFailure(format!(
            "f_r({s:?}) ≠ 0 but the form values repeat"
        )));
    }
    Ok(GaloisWitness {
        values: Permutation::all(n).map(|p| form_value(&inst.r, &p, &s)).collect(),
        f_value: evaluate(inst, &s),
        s,
    })
}

/// `{σ : ⟨r, P_σ s⟩ = ⟨r, s⟩}` and whether all `n!` values are distinct.
///
/// Coincidences between values need not respect composition, so the set is
/// returned as a plain list and [`FormStabilizer::is_group`] tests closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormStabilizer {
    pub elements: Vec<Permutation>,
    pub all_distinct: bool,
}

impl FormStabilizer {
    pub fn is_group(&self) -> bool {
        self.as_group().is_ok()
    }

    pub fn as_group(&self) -> Result<PermGroup> {
        let n = self.elements.first().map_or(0, Permutation::len);
        PermGroup::new(n, self.elements.iter().cloned())
    }
}

pub fn stabilizer_of_form(r: &[Rational], s: &[i64]) -> Result<FormStabilizer> {
    if r.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            actual: s.len(),
        });
    }
    let n = r.len();
    let values: Vec<(Permutation, Rational)> = Permutation::all(n)
        .map(|p| {
            let v = form_value(r, &p, s);
            (p, v)
        })
        .collect();
    let base = form_value(r, &Permutation::identity(n), s);
    let mut sorted: Vec<&Rational> = values.iter().map(|(_, v)| v).collect();
    sorted.sort();
    let all_distinct = sorted.windows(2).all(|w| w[0] != w[1]);
    Ok(FormStabilizer {
        elements: values.into_iter().filter(|(_, v)| *v == base).map(|(p, _)| p).collect(),
        all_distinct,
    })
}
