//! Randomized invariants across modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use nullstellen::exactnum::{make_context, CyclotomicContext, CyclotomicNumber, Rational};
use nullstellen::galois::{form_value, stabilizer_of_form};
use nullstellen::graphenc::{decode_adjacency, encode_adjacency, perm_vector, power_sum_check, Digraph, Permutation};
use nullstellen::polyring::{
    divide_by_grid, divide_by_grid_ordered, grid_interpolate, sample_on_grid, Assignment, ExponentVector, GridSpec,
    Polynomial, VariableSpace,
};
use nullstellen::resolvent::{brute_force_subiso, build_constraint, coset_reps, PermGroup};

fn unbounded(n: usize) -> Arc<VariableSpace> {
    VariableSpace::unbounded((0..n).map(|i| format!("x_{i}"))).unwrap()
}

/// Polynomial with small integer coefficients from `(exponents, coeff)` pairs.
fn poly(space: &Arc<VariableSpace>, ctx: &CyclotomicContext, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        space,
        ctx,
        terms
            .iter()
            .map(|(e, c)| (ExponentVector(e.clone()), CyclotomicNumber::from_integer(ctx, *c))),
    )
}

fn terms(vars: usize, max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, vars), -4i64..=4), 0..6)
}

/// One to three distinct small integers per variable.
fn grid_sets(vars: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::btree_set(-3i64..=3, 1..=3), vars)
        .prop_map(|sets| sets.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn grid(ctx: &CyclotomicContext, sets: &[Vec<i64>]) -> GridSpec {
    let refs: Vec<&[i64]> = sets.iter().map(Vec::as_slice).collect();
    GridSpec::from_integers(ctx, &refs).unwrap()
}

fn cyc(ctx: &CyclotomicContext, coeffs: &[i64]) -> CyclotomicNumber {
    let q: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
    CyclotomicNumber::from_coeffs(ctx, &q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_identity(t in terms(2, 4), sets in grid_sets(2)) {
        let ctx = make_context(1).unwrap();
        let space = unbounded(2);
        let f = poly(&space, &ctx, &t);
        let g = grid(&ctx, &sets);
        let div = divide_by_grid(&f, &g).unwrap();
        prop_assert_eq!(div.reconstruct(&g).unwrap(), f);
        for (i, s) in sets.iter().enumerate() {
            prop_assert!(div.remainder.degree_in(i).is_none_or(|d| (d as usize) < s.len()));
        }
    }

    #[test]
    fn remainder_is_the_grid_interpolant(t in terms(2, 4), sets in grid_sets(2)) {
        let ctx = make_context(1).unwrap();
        let space = unbounded(2);
        let f = poly(&space, &ctx, &t);
        let g = grid(&ctx, &sets);
        let samples = sample_on_grid(&f, &g).unwrap();
        let interp = grid_interpolate(&samples, &g, &space, &ctx).unwrap();
        prop_assert_eq!(&divide_by_grid(&f, &g).unwrap().remainder, &interp);
        prop_assert_eq!(divide_by_grid_ordered(&f, &g, &[1, 0]).unwrap().remainder, interp);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in terms(2, 3), b in terms(2, 3), u in terms(1, 2), v in terms(1, 2)) {
        let ctx = make_context(3).unwrap();
        let src = unbounded(2);
        let dst = VariableSpace::unbounded(["y"]).unwrap();
        let (f, g) = (poly(&src, &ctx, &a), poly(&src, &ctx, &b));
        let assign: Assignment = BTreeMap::from([
            ("x_0".to_string(), poly(&dst, &ctx, &u)),
            ("x_1".to_string(), poly(&dst, &ctx, &v)),
        ]);
        let s = |p: &Polynomial| p.substitute(&assign, &dst).unwrap();
        prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
        prop_assert_eq!(s(&(&f - &g)), &s(&f) - &s(&g));
    }

    #[test]
    fn cyclic_exponents_wrap(n in 2u32..=5, t in terms(2, 9), k in 0usize..2, i in 0u32..5, j in 0u32..5) {
        let ctx = make_context(n).unwrap();
        let space = VariableSpace::cyclic(["x_0", "x_1"], n).unwrap();
        let f = poly(&space, &ctx, &t);
        let shifted: Vec<(Vec<u32>, i64)> = t
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[k] += n;
                (e, *c)
            })
            .collect();
        prop_assert_eq!(&poly(&space, &ctx, &shifted), &f);
        let point = [ctx.root_power(i.into()), ctx.root_power(j.into())];
        let unreduced = t.iter().fold(CyclotomicNumber::zero(&ctx), |acc, (e, c)| {
            let term = &CyclotomicNumber::from_integer(&ctx, *c)
                * &(&point[0].pow(e[0].into()).unwrap() * &point[1].pow(e[1].into()).unwrap());
            &acc + &term
        });
        prop_assert_eq!(f.grid_evaluate(&point).unwrap(), unreduced);
    }

    #[test]
    fn field_axioms(n in 1u32..=8, a in prop::collection::vec(-5i64..=5, 8), b in prop::collection::vec(-5i64..=5, 8), c in prop::collection::vec(-5i64..=5, 8)) {
        let ctx = make_context(n).unwrap();
        let d = ctx.degree();
        let (a, b, c) = (cyc(&ctx, &a[..d]), cyc(&ctx, &b[..d]), cyc(&ctx, &c[..d]));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn codec_round_trip(n in 1usize..=4, code in any::<u64>()) {
        let g = Digraph::from_code(n, code & ((1u64 << (n * n)) - 1));
        let ctx = make_context(n as u32).unwrap();
        prop_assert_eq!(decode_adjacency(&encode_adjacency(&g, &ctx).unwrap(), n).unwrap(), g);
    }

    #[test]
    fn containment_is_relabeling_invariant(a in 0u64..512, b in 0u64..512, p in 0usize..6) {
        let (a, b) = (Digraph::from_code(3, a), Digraph::from_code(3, b));
        let sigma = Permutation::all(3).nth(p).unwrap();
        let lhs = brute_force_subiso(&a, &b).unwrap().is_some();
        let rhs = brute_force_subiso(&a.relabel(&sigma), &b.relabel(&sigma)).unwrap().is_some();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(build_constraint(&a, &b).is_ok());
    }

    #[test]
    fn form_stabilizer_contains_identity(r in prop::collection::btree_set(-5i64..=5, 3), s in prop::collection::vec(0i64..=15, 3)) {
        let r: Vec<Rational> = r.into_iter().map(|v| Rational::from_integer(v.into())).collect();
        let st = stabilizer_of_form(&r, &s).unwrap();
        prop_assert!(st.elements.iter().any(Permutation::is_identity));
        let mut v: Vec<Rational> = Permutation::all(3).map(|p| form_value(&r, &p, &s)).collect();
        v.sort();
        let distinct = v.windows(2).all(|w| w[0] != w[1]);
        prop_assert_eq!(st.all_distinct, distinct);
        if distinct {
            prop_assert_eq!(st.elements.len(), 1);
        }
    }
}

#[test]
fn power_sums_select_permutations() {
    for n in 1..=3u32 {
        let ctx = make_context(n).unwrap();
        let perms: Vec<Vec<usize>> = Permutation::all(n as usize).map(|p| p.image().to_vec()).collect();
        let mut accepted = 0;
        for code in 0..(n as usize).pow(n) {
            let digits: Vec<usize> = (0..n as usize)
                .map(|k| code / (n as usize).pow(k as u32) % n as usize)
                .collect();
            let v = perm_vector(&Permutation::identity(n as usize), &ctx).unwrap();
            let entries = digits.iter().map(|&d| ctx.root_power(d as i64)).collect();
            let r = nullstellen::exactnum::CycVector::new(&ctx, entries).unwrap();
            let ok = power_sum_check(&r);
            assert_eq!(ok, perms.contains(&digits), "n={n} digits={digits:?}");
            accepted += usize::from(ok);
            assert!(power_sum_check(&v));
        }
        assert_eq!(accepted, perms.len());
    }
}

#[test]
fn cosets_partition_the_symmetric_group() {
    let n = 4;
    let sub = PermGroup::new(
        n,
        [
            Permutation::identity(n),
            Permutation::transposition(n, 0, 1),
            Permutation::transposition(n, 2, 3),
            Permutation::transposition(n, 0, 1).compose(&Permutation::transposition(n, 2, 3)),
        ],
    )
    .unwrap();
    let reps = coset_reps(&sub, n).unwrap();
    assert_eq!(reps.len(), 6);
    let mut seen = std::collections::BTreeSet::new();
    for rho in &reps {
        for h in sub.elements() {
            assert!(seen.insert(rho.compose(h).image().to_vec()));
        }
    }
    assert_eq!(seen.len(), 24);
}
