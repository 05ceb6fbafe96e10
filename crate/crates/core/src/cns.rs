//! Combinatorial Nullstellensatz certificates over a Cartesian grid.
//!
//! [`cn1_certificate`] expresses `f` as `Σ h_i g_i + remainder` with
//! `g_i = ∏_{s ∈ S_i}(x_i - s)`; the remainder vanishes exactly when `f`
//! vanishes on the grid. [`cn2_witness`] and [`lason_witness`] search the grid
//! for a point where `f` is nonzero once the relevant coefficient condition
//! has been checked.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::CyclotomicNumber;
use crate::polyring::{divide_by_grid, support_maximal, ExponentVector, GridDivision, GridSpec, Polynomial};
use crate::search::{digits, find_first, SearchOptions};

/// `f = Σ_i h_i g_i + remainder` for a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnExpansionCertificate {
    pub f: Polynomial,
    pub grid: GridSpec,
    pub division: GridDivision,
    /// Result of evaluating `f` at every grid point, when the grid was small
    /// enough to check.
    pub vanishes_on_grid: Option<bool>,
}

impl CnExpansionCertificate {
    pub fn quotients(&self) -> &[Polynomial] {
        &self.division.quotients
    }

    pub fn remainder(&self) -> &Polynomial {
        &self.division.remainder
    }

    /// Re-expands `Σ h_i g_i + remainder` and compares with `f`.
    pub fn reconstruction_holds(&self) -> Result<bool> {
        Ok(self.division.reconstruct(&self.grid)? == self.f)
    }

    /// `deg h_i <= deg f - deg g_i` for every nonzero quotient.
    pub fn degree_bounds_hold(&self) -> bool {
        let Some(df) = self.f.total_degree() else {
            return self.quotients().iter().all(Polynomial::is_zero);
        };
        self.division
            .order
            .iter()
            .zip(self.quotients())
            .all(|(&i, h)| match h.total_degree() {
                None => true,
                Some(dh) => {
                    let dg = self.grid.set(i).map_or(0, <[_]>::len) as u64;
                    dh + dg <= df
                }
            })
    }

    pub fn to_json(&self) -> Value {
        let space = self.f.space();
        json!({
            "f": self.f.to_string(),
            "variables": space.names(),
            "grid": grid_json(&self.grid),
            "division_order": self.division.order.iter().map(|&i| space.name(i)).collect::<Vec<_>>(),
            "h": self.quotients().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "remainder": self.remainder().to_string(),
            "remainder_zero": self.remainder().is_zero(),
            "vanishes_on_grid": self.vanishes_on_grid,
        })
    }
}

/// A grid point where `f` does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnWitness {
    /// Position of each coordinate inside its node set.
    pub index: Vec<usize>,
    pub point: Vec<CyclotomicNumber>,
    pub value: CyclotomicNumber,
}

impl CnWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "index": self.index,
            "value": self.value.to_string(),
        })
    }
}

pub(crate) fn grid_json(grid: &GridSpec) -> Value {
    Value::Array(
        (0..grid.num_vars())
            .map(|i| match grid.set(i) {
                Some(set) => json!(set.iter().map(ToString::to_string).collect::<Vec<_>>()),
                None => Value::Null,
            })
            .collect(),
    )
}

fn check_grid(f: &Polynomial, grid: &GridSpec) -> Result<()> {
    if grid.num_vars() != f.space().len() {
        return Err(Error::DimensionMismatch {
            expected: f.space().len(),
            actual: grid.num_vars(),
        });
    }
    if !grid.is_full() {
        return Err(Error::Precondition("every variable needs a node set".into()));
    }
    Ok(())
}

fn grid_size(grid: &GridSpec, opts: &SearchOptions) -> Result<u64> {
    let size = grid.size();
    if size > u128::from(opts.grid_guard) {
        return Err(Error::GuardExceeded {
            what: "grid points",
            limit: opts.grid_guard,
            actual: u64::try_from(size).unwrap_or(u64::MAX),
        });
    }
    Ok(size as u64)
}

/// Divides `f` by the grid polynomials and, when the grid has at most
/// `opts.grid_guard` points, confirms that the remainder is zero exactly when
/// `f` vanishes at every point.
pub fn cn1_certificate(f: &Polynomial, grid: &GridSpec, opts: &SearchOptions) -> Result<CnExpansionCertificate> {
    check_grid(f, grid)?;
    let division = divide_by_grid(f, grid)?;
    let vanishes_on_grid = match grid_size(grid, opts) {
        Ok(size) => Some(first_nonzero(f, grid, size, opts.parallel).is_none()),
        Err(Error::GuardExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(v) = vanishes_on_grid {
        if v != division.remainder.is_zero() {
            return Err(Error::SoundnessFailure(format!(
                "remainder {} but grid vanishing is {v}",
                division.remainder
            )));
        }
    }
    Ok(CnExpansionCertificate {
        f: f.clone(),
        grid: grid.clone(),
        division,
        vanishes_on_grid,
    })
}

fn first_nonzero(f: &Polynomial, grid: &GridSpec, size: u64, parallel: bool) -> Option<CnWitness> {
    let radices: Vec<u64> = (0..grid.num_vars())
        .map(|i| grid.set(i).unwrap().len() as u64)
        .collect();
    let eval = |k: u64| {
        let index = digits(k, &radices);
        let point = grid.values_at(&index);
        let value = f.grid_evaluate(&point).expect("point matches the space");
        (index, point, value)
    };
    let k = find_first(size, parallel, |k| !eval(k).2.is_zero())?;
    let (index, point, value) = eval(k);
    Some(CnWitness { index, point, value })
}

fn check_set_sizes(grid: &GridSpec, t: &ExponentVector) -> Result<()> {
    for (i, &ti) in t.0.iter().enumerate() {
        let size = grid.set(i).unwrap().len();
        if size as u64 <= u64::from(ti) {
            return Err(Error::Precondition(format!(
                "|S_{i}| = {size} must exceed t_{i} = {ti}"
            )));
        }
    }
    Ok(())
}

fn search(f: &Polynomial, grid: &GridSpec, opts: &SearchOptions, theorem: &str) -> Result<CnWitness> {
    let size = grid_size(grid, opts)?;
    first_nonzero(f, grid, size, opts.parallel)
        .ok_or_else(|| Error::SoundnessFailure(format!("{theorem} guarantees a nonzero grid point but none was found")))
}

fn check_t(f: &Polynomial, t: &ExponentVector) -> Result<()> {
    if t.0.len() != f.space().len() {
        return Err(Error::DimensionMismatch {
            expected: f.space().len(),
            actual: t.0.len(),
        });
    }
    Ok(())
}

/// First grid point (lexicographic) with `f ≠ 0`, given that the coefficient
/// of `x^t` is nonzero, `deg f = Σ t_i` and `|S_i| > t_i`.
pub fn cn2_witness(f: &Polynomial, t: &ExponentVector, grid: &GridSpec, opts: &SearchOptions) -> Result<CnWitness> {
    check_grid(f, grid)?;
    check_t(f, t)?;
    if f.coeff(t).is_zero() {
        return Err(Error::Precondition("coefficient of x^t is zero".into()));
    }
    if f.total_degree() != Some(t.total_degree()) {
        return Err(Error::Precondition(format!(
            "total degree of f is {} but t has degree {}",
            f.total_degree().unwrap_or(0),
            t.total_degree()
        )));
    }
    check_set_sizes(grid, t)?;
    search(f, grid, opts, "CN-II")
}

/// As [`cn2_witness`] but only requires `t` to be maximal in the support.
pub fn lason_witness(f: &Polynomial, t: &ExponentVector, grid: &GridSpec, opts: &SearchOptions) -> Result<CnWitness> {
    check_grid(f, grid)?;
    check_t(f, t)?;
    if !support_maximal(f, t) {
        return Err(Error::Precondition(
            "x^t is not a maximal element of the support".into(),
        ));
    }
    check_set_sizes(grid, t)?;
    search(f, grid, opts, "Lason's theorem")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{make_context, CyclotomicContext};
    use crate::polyring::{parse_polynomial, VariableSpace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup() -> (Arc<VariableSpace>, CyclotomicContext) {
        (
            VariableSpace::unbounded(["x_0", "x_1"]).unwrap(),
            make_context(1).unwrap(),
        )
    }

    fn poly(text: &str) -> Polynomial {
        let (s, c) = setup();
        parse_polynomial(text, &s, &c).unwrap()
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn cn1_grid_polynomial_itself() {
        let (_, c) = setup();
        let grid = GridSpec::from_integers(&c, &[&[0, 2], &[1]]).unwrap();
        let f = poly("x_0*(x_0 - 2)");
        let cert = cn1_certificate(&f, &grid, &opts()).unwrap();
        assert!(cert.quotients()[0].as_constant().unwrap().is_one());
        assert!(cert.quotients()[1].is_zero());
        assert!(cert.remainder().is_zero());
        assert_eq!(cert.vanishes_on_grid, Some(true));
        assert!(cert.reconstruction_holds().unwrap());
    }

    #[test]
    fn cn1_non_vanishing() {
        let (s, c) = setup();
        let grid = GridSpec::from_integers(&c, &[&[1, -1], &[0]]).unwrap();
        let cert = cn1_certificate(&poly("x_0^2"), &grid, &opts()).unwrap();
        assert_eq!(cert.remainder(), &Polynomial::one(&s, &c));
        assert_eq!(cert.vanishes_on_grid, Some(false));
        let tight = SearchOptions {
            grid_guard: 1,
            ..opts()
        };
        assert_eq!(
            cn1_certificate(&poly("x_0^2"), &grid, &tight).unwrap().vanishes_on_grid,
            None
        );
    }

    #[test]
    fn cn1_random_combinations() {
        let (s, c) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = GridSpec::from_integers(&c, &[&[0, 1, 3], &[-1, 2]]).unwrap();
        let g: Vec<Polynomial> = (0..2).map(|i| grid.grid_polynomial(i, &s, &c).unwrap()).collect();
        for _ in 0..20 {
            let mut f = Polynomial::zero(&s, &c);
            for gi in &g {
                let h = Polynomial::from_terms(
                    &s,
                    &c,
                    (0..3).map(|_| {
                        let e = ExponentVector(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
                        (e, CyclotomicNumber::from_integer(&c, rng.gen_range(-4..=4)))
                    }),
                );
                f = &f + &(&h * gi);
            }
            let cert = cn1_certificate(&f, &grid, &opts()).unwrap();
            assert!(cert.remainder().is_zero());
            assert!(cert.degree_bounds_hold());
            assert!(cert.reconstruction_holds().unwrap());
        }
    }

    #[test]
    fn cn2_examples() {
        let (_, c) = setup();
        let binary = GridSpec::from_integers(&c, &[&[0, 1], &[0, 1]]).unwrap();
        let w = cn2_witness(&poly("x_0*x_1 - 1"), &ExponentVector(vec![1, 1]), &binary, &opts()).unwrap();
        assert_eq!(w.index, vec![0, 0]);
        assert_eq!(w.value, CyclotomicNumber::from_integer(&c, -1));

        let grid = GridSpec::from_integers(&c, &[&[0, 1], &[0]]).unwrap();
        let w = cn2_witness(&poly("x_0 + x_1"), &ExponentVector(vec![1, 0]), &grid, &opts()).unwrap();
        assert_eq!(w.index, vec![1, 0]);
        assert!(w.value.is_one());

        let galois = poly("2*x_0 - 2*x_1");
        let w = cn2_witness(&galois, &ExponentVector(vec![1, 0]), &binary, &opts()).unwrap();
        assert_eq!(w.index, vec![0, 1]);
    }

    #[test]
    fn cn2_preconditions() {
        let (_, c) = setup();
        let binary = GridSpec::from_integers(&c, &[&[0, 1], &[0, 1]]).unwrap();
        let t = ExponentVector(vec![1, 1]);
        let zero_coeff = cn2_witness(&poly("x_0^2 - 1"), &t, &binary, &opts());
        assert!(matches!(zero_coeff, Err(Error::Precondition(_))));
        let high_degree = cn2_witness(&poly("x_0*x_1 + x_0^3"), &t, &binary, &opts());
        assert!(matches!(high_degree, Err(Error::Precondition(_))));
        let small = GridSpec::from_integers(&c, &[&[0], &[0, 1]]).unwrap();
        assert!(matches!(
            cn2_witness(&poly("x_0*x_1"), &t, &small, &opts()),
            Err(Error::Precondition(_))
        ));
        let tight = SearchOptions {
            grid_guard: 3,
            ..opts()
        };
        assert!(matches!(
            cn2_witness(&poly("x_0*x_1"), &t, &binary, &tight),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn lason_examples() {
        let (_, c) = setup();
        let binary = GridSpec::from_integers(&c, &[&[0, 1], &[0, 1]]).unwrap();
        let t = ExponentVector(vec![1, 1]);
        let w = lason_witness(&poly("x_0*x_1 + x_0^3"), &t, &binary, &opts()).unwrap();
        assert_eq!(w.index, vec![1, 0]);
        assert!(lason_witness(&poly("x_0*x_1 + x_0^2*x_1"), &t, &binary, &opts()).is_err());

        let one_var = VariableSpace::unbounded(["x_0"]).unwrap();
        let f = parse_polynomial("x_0", &one_var, &c).unwrap();
        let grid = GridSpec::from_integers(&c, &[&[0, 1]]).unwrap();
        let w = lason_witness(&f, &ExponentVector(vec![1]), &grid, &opts()).unwrap();
        assert_eq!(w.index, vec![1]);
    }

    #[test]
    fn parallel_search_is_deterministic() {
        let (_, c) = setup();
        let grid = GridSpec::from_integers(&c, &[&[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5]]).unwrap();
        let f = poly("x_0*x_1 - 12");
        let t = ExponentVector(vec![1, 1]);
        let par = SearchOptions {
            parallel: true,
            ..opts()
        };
        assert_eq!(
            cn2_witness(&f, &t, &grid, &par).unwrap(),
            cn2_witness(&f, &t, &grid, &opts()).unwrap()
        );
    }
}
