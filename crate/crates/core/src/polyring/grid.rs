use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::poly::{add_term, Polynomial};
use super::space::{ExponentVector, VariableSpace};
use crate::error::{Error, Result};
use crate::exactnum::{CyclotomicContext, CyclotomicNumber};

/// One finite node set `S_i` per variable; `None` leaves the variable off the
/// grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    sets: Vec<Option<Vec<CyclotomicNumber>>>,
}

impl GridSpec {
    pub fn new(sets: Vec<Option<Vec<CyclotomicNumber>>>) -> Result<Self> {
        for (i, set) in sets.iter().enumerate() {
            let Some(set) = set else { continue };
            if set.is_empty() {
                return Err(Error::EmptyGridSet(i));
            }
            for (a, x) in set.iter().enumerate() {
                if set[..a].contains(x) {
                    return Err(Error::DuplicateNode(i));
                }
            }
        }
        Ok(GridSpec { sets })
    }

    /// A grid covering every variable.
    pub fn full(sets: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        Self::new(sets.into_iter().map(Some).collect())
    }

    /// Integer node sets over the context `ctx`.
    pub fn from_integers(ctx: &CyclotomicContext, sets: &[&[i64]]) -> Result<Self> {
        Self::full(
            sets.iter()
                .map(|s| s.iter().map(|&v| CyclotomicNumber::from_integer(ctx, v)).collect())
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> Option<&[CyclotomicNumber]> {
        self.sets[i].as_deref()
    }

    pub fn gridded_vars(&self) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.sets[i].is_some()).collect()
    }

    pub fn is_full(&self) -> bool {
        self.sets.iter().all(Option::is_some)
    }

    /// Number of points of the Cartesian product over the gridded variables.
    pub fn size(&self) -> u128 {
        self.sets.iter().flatten().map(|s| s.len() as u128).product()
    }

    /// Index tuples (one index per gridded variable) in lexicographic order.
    pub fn index_points(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radices: Vec<usize> = self.sets.iter().flatten().map(Vec::len).collect();
        let mut next = Some(vec![0; radices.len()]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for k in (0..radices.len()).rev() {
                succ[k] += 1;
                if succ[k] < radices[k] {
                    next = Some(succ);
                    break;
                }
                succ[k] = 0;
            }
            Some(current)
        })
    }

    /// Values of the gridded variables at an index tuple.
    pub fn values_at(&self, index: &[usize]) -> Vec<CyclotomicNumber> {
        self.sets
            .iter()
            .flatten()
            .zip(index)
            .map(|(s, &k)| s[k].clone())
            .collect()
    }

    /// Points of a full grid in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<CyclotomicNumber>> + '_ {
        self.index_points().map(|idx| self.values_at(&idx))
    }

    fn check_space(&self, space: &VariableSpace) -> Result<()> {
        if self.sets.len() == space.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: space.len(),
                actual: self.sets.len(),
            })
        }
    }

    /// `g_i(x_i) = ∏_{s ∈ S_i} (x_i - s)`.
    pub fn grid_polynomial(&self, i: usize, space: &Arc<VariableSpace>, ctx: &CyclotomicContext) -> Result<Polynomial> {
        self.check_space(space)?;
        let set = self.sets[i].as_ref().ok_or(Error::EmptyGridSet(i))?;
        let x = Polynomial::var(space, ctx, i);
        Ok(set.iter().fold(Polynomial::one(space, ctx), |acc, s| {
            &acc * &(&x - &Polynomial::constant(space, s.clone()))
        }))
    }

    /// Lagrange basis polynomial of node `k` of `S_i`, in variable `i`.
    fn lagrange_basis(&self, i: usize, k: usize, space: &Arc<VariableSpace>, ctx: &CyclotomicContext) -> Polynomial {
        let set = self.sets[i].as_ref().expect("gridded variable");
        let x = Polynomial::var(space, ctx, i);
        let mut acc = Polynomial::one(space, ctx);
        for (j, s) in set.iter().enumerate() {
            if j == k {
                continue;
            }
            let scale = (&set[k] - s).inv().expect("grid nodes are distinct");
            acc = &acc * &(&x - &Polynomial::constant(space, s.clone())).scale(&scale);
        }
        acc
    }
}

/// The unique polynomial with degree `< |S_i|` in each variable taking the
/// given values on the full grid.
pub fn grid_interpolate(
    values: &HashMap<Vec<CyclotomicNumber>, CyclotomicNumber>,
    grid: &GridSpec,
    space: &Arc<VariableSpace>,
    ctx: &CyclotomicContext,
) -> Result<Polynomial> {
    grid.check_space(space)?;
    if !grid.is_full() {
        return Err(Error::Precondition(
            "interpolation needs a node set for every variable".into(),
        ));
    }
    let bases: Vec<Vec<Polynomial>> = (0..space.len())
        .map(|i| {
            (0..grid.sets[i].as_ref().unwrap().len())
                .map(|k| grid.lagrange_basis(i, k, space, ctx))
                .collect()
        })
        .collect();
    let mut acc = Polynomial::zero(space, ctx);
    for index in grid.index_points() {
        let point = grid.values_at(&index);
        let value = values
            .get(&point)
            .ok_or_else(|| Error::IncompleteGrid(format_point(&point)))?;
        if value.is_zero() {
            continue;
        }
        let term = index
            .iter()
            .enumerate()
            .fold(Polynomial::constant(space, value.clone()), |t, (i, &k)| {
                &t * &bases[i][k]
            });
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Evaluations of `f` on every point of a full grid.
pub fn sample_on_grid(f: &Polynomial, grid: &GridSpec) -> Result<HashMap<Vec<CyclotomicNumber>, CyclotomicNumber>> {
    grid.check_space(f.space())?;
    grid.points().map(|p| Ok((p.clone(), f.grid_evaluate(&p)?))).collect()
}

fn format_point(point: &[CyclotomicNumber]) -> String {
    let parts: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Outcome of dividing by the grid polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDivision {
    /// Variables in the order they were divided by; `quotients[k]` belongs to
    /// `order[k]`.
    pub order: Vec<usize>,
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl GridDivision {
    /// `Σ h_i g_i + remainder`.
    pub fn reconstruct(&self, grid: &GridSpec) -> Result<Polynomial> {
        let space = self.remainder.space();
        let ctx = self.remainder.context();
        let mut acc = self.remainder.clone();
        for (&i, h) in self.order.iter().zip(&self.quotients) {
            acc = &acc + &(h * &grid.grid_polynomial(i, space, ctx)?);
        }
        Ok(acc)
    }
}

/// Divides by the grid polynomials in ascending variable order.
pub fn divide_by_grid(f: &Polynomial, grid: &GridSpec) -> Result<GridDivision> {
    divide_by_grid_ordered(f, grid, &grid.gridded_vars())
}

/// Multivariate division of `f` by `{g_i}` processing variables in `order`.
///
/// The quotients depend on `order`; the remainder does not (it is the grid
/// interpolant of `f`). Each step removes the lexicographically largest
/// remaining term, so the loop terminates, and no step raises total degree,
/// which gives `deg h_i <= deg f - deg g_i`.
pub fn divide_by_grid_ordered(f: &Polynomial, grid: &GridSpec, order: &[usize]) -> Result<GridDivision> {
    let space = f.space();
    let ctx = f.context();
    grid.check_space(space)?;
    let mut gridded = grid.gridded_vars();
    let mut sorted_order = order.to_vec();
    sorted_order.sort_unstable();
    gridded.sort_unstable();
    if sorted_order != gridded {
        return Err(Error::Precondition(
            "division order must list each gridded variable exactly once".into(),
        ));
    }

    // g_i = x_i^d - tail_i; keep -tail_i as a term list in x_i alone.
    let mut degrees = vec![0u32; space.len()];
    let mut tails: Vec<Vec<(u32, CyclotomicNumber)>> = vec![Vec::new(); space.len()];
    for &i in order {
        let g = grid.grid_polynomial(i, space, ctx)?;
        let d = grid.set(i).unwrap().len() as u32;
        degrees[i] = d;
        tails[i] = g
            .terms()
            .filter(|(e, _)| e.0[i] < d)
            .map(|(e, c)| (e.0[i], -c))
            .collect();
    }

    let mut work: BTreeMap<ExponentVector, CyclotomicNumber> = f.term_map().clone();
    let mut remainder = BTreeMap::new();
    let mut quotients: Vec<BTreeMap<ExponentVector, CyclotomicNumber>> = vec![BTreeMap::new(); order.len()];
    while let Some((exp, c)) = work.pop_last() {
        let Some(slot) = order.iter().position(|&i| exp.0[i] >= degrees[i]) else {
            add_term(&mut remainder, exp, c);
            continue;
        };
        let i = order[slot];
        let mut q = exp.clone();
        q.0[i] -= degrees[i];
        // x^exp = q · x_i^d ≡ q · (-tail_i)   (mod g_i)
        for (j, t) in &tails[i] {
            let mut e = q.clone();
            e.0[i] += j;
            add_term(&mut work, e, &c * t);
        }
        add_term(&mut quotients[slot], q, c);
    }

    Ok(GridDivision {
        order: order.to_vec(),
        quotients: quotients
            .into_iter()
            .map(|m| Polynomial::from_map(space, ctx, m))
            .collect(),
        remainder: Polynomial::from_map(space, ctx, remainder),
    })
}

/// Whether `x^t` has a nonzero coefficient and no other support exponent
/// dominates `t` coordinatewise.
pub fn support_maximal(f: &Polynomial, t: &ExponentVector) -> bool {
    if f.coeff(t).is_zero() {
        return false;
    }
    f.terms().all(|(e, _)| e == t || !e.dominates(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::make_context;
    use crate::polyring::parse_polynomial;

    fn setup(names: &[&str]) -> (Arc<VariableSpace>, CyclotomicContext) {
        (
            VariableSpace::unbounded(names.iter().copied()).unwrap(),
            make_context(1).unwrap(),
        )
    }

    #[test]
    fn grid_validation() {
        let ctx = make_context(1).unwrap();
        assert_eq!(
            GridSpec::from_integers(&ctx, &[&[1, 1]]).unwrap_err(),
            Error::DuplicateNode(0)
        );
        assert_eq!(
            GridSpec::from_integers(&ctx, &[&[1], &[]]).unwrap_err(),
            Error::EmptyGridSet(1)
        );
    }

    #[test]
    fn lexicographic_points() {
        let ctx = make_context(1).unwrap();
        let g = GridSpec::from_integers(&ctx, &[&[0, 1], &[5, 6, 7]]).unwrap();
        let idx: Vec<Vec<usize>> = g.index_points().collect();
        assert_eq!(idx.len(), 6);
        assert_eq!(idx[0], vec![0, 0]);
        assert_eq!(idx[1], vec![0, 1]);
        assert_eq!(idx[5], vec![1, 2]);
    }

    #[test]
    fn interpolation_examples() {
        let (s, ctx) = setup(&["x"]);
        let grid = GridSpec::from_integers(&ctx, &[&[0, 1, 2]]).unwrap();
        let vals: HashMap<_, _> = [(0, 0), (1, 1), (2, 4)]
            .iter()
            .map(|&(a, b)| {
                (
                    vec![CyclotomicNumber::from_integer(&ctx, a)],
                    CyclotomicNumber::from_integer(&ctx, b),
                )
            })
            .collect();
        let p = grid_interpolate(&vals, &grid, &s, &ctx).unwrap();
        assert_eq!(p, parse_polynomial("x^2", &s, &ctx).unwrap());

        let zeros: HashMap<_, _> = vals.keys().map(|k| (k.clone(), CyclotomicNumber::zero(&ctx))).collect();
        assert!(grid_interpolate(&zeros, &grid, &s, &ctx).unwrap().is_zero());

        let mut missing = vals.clone();
        missing.remove(&vec![CyclotomicNumber::from_integer(&ctx, 1)]);
        assert!(matches!(
            grid_interpolate(&missing, &grid, &s, &ctx),
            Err(Error::IncompleteGrid(_))
        ));
    }

    #[test]
    fn interpolate_bilinear_from_samples() {
        let (s, ctx) = setup(&["x_0", "x_1"]);
        let grid = GridSpec::from_integers(&ctx, &[&[0, 1], &[0, 1]]).unwrap();
        let f = parse_polynomial("x_0*x_1", &s, &ctx).unwrap();
        let vals = sample_on_grid(&f, &grid).unwrap();
        assert_eq!(grid_interpolate(&vals, &grid, &s, &ctx).unwrap(), f);
    }

    #[test]
    fn division_examples() {
        let (s, ctx) = setup(&["x"]);
        let grid = GridSpec::from_integers(&ctx, &[&[1, -1]]).unwrap();
        let f = parse_polynomial("x^2 - 1", &s, &ctx).unwrap();
        let d = divide_by_grid(&f, &grid).unwrap();
        assert!(d.remainder.is_zero());
        assert_eq!(d.quotients[0], Polynomial::one(&s, &ctx));

        let d = divide_by_grid(&parse_polynomial("x^2", &s, &ctx).unwrap(), &grid).unwrap();
        assert_eq!(d.remainder, Polynomial::one(&s, &ctx));
        assert_eq!(d.quotients[0], Polynomial::one(&s, &ctx));

        let (s2, _) = setup(&["x_0", "x_1"]);
        let partial = GridSpec::new(vec![
            Some(vec![
                CyclotomicNumber::one(&ctx),
                CyclotomicNumber::from_integer(&ctx, -1),
            ]),
            None,
        ])
        .unwrap();
        let f = parse_polynomial("x_0*x_1", &s2, &ctx).unwrap();
        let d = divide_by_grid(&f, &partial).unwrap();
        assert!(d.quotients[0].is_zero());
        assert_eq!(d.remainder, f);
    }

    #[test]
    fn support_maximal_examples() {
        let (s, ctx) = setup(&["x_0", "x_1"]);
        let f = parse_polynomial("x_0*x_1 + x_0", &s, &ctx).unwrap();
        assert!(support_maximal(&f, &ExponentVector(vec![1, 1])));
        assert!(!support_maximal(&f, &ExponentVector(vec![1, 0])));
        assert!(!support_maximal(&f, &ExponentVector(vec![0, 1])));
        let (s1, _) = setup(&["x_0"]);
        let g = parse_polynomial("x_0^2", &s1, &ctx).unwrap();
        assert!(support_maximal(&g, &ExponentVector(vec![2])));
    }
}
