use std::collections::BTreeMap;
use std::sync::Arc;

use super::poly::Polynomial;
use super::space::{ExponentVector, VariableSpace};
use crate::error::{Error, Result};
use crate::exactnum::CyclotomicNumber;

/// Values to substitute, keyed by source variable name. Every value lives in
/// the target space of the substitution.
pub type Assignment = BTreeMap<String, Polynomial>;

impl Polynomial {
    /// Ring homomorphism replacing the assigned variables and mapping every
    /// other variable to its namesake in `target`.
    ///
    /// For a cyclic source variable of order `m` the assigned value `v` must
    /// satisfy `v^m = 1` in `target`; otherwise the map would not be well
    /// defined on the quotient ring and `IncompatibleTarget` is returned.
    pub fn substitute(&self, assignment: &Assignment, target: &Arc<VariableSpace>) -> Result<Polynomial> {
        let values = self.substitution_values(assignment, target)?;
        for (i, value) in values.iter().enumerate() {
            let Some(m) = self.space().modulus(i) else { continue };
            if assignment.contains_key(self.space().name(i))
                && !value.pow(u64::from(m)).as_constant().is_some_and(|c| c.is_one())
            {
                return Err(Error::IncompatibleTarget(format!(
                    "value for `{}` is not an {m}-th root of unity in the target ring",
                    self.space().name(i)
                )));
            }
        }
        Ok(self.evaluate_with(&values, target))
    }

    /// Evaluates the canonical representative of `self` at the assigned
    /// values without checking the root-of-unity condition. Use only when the
    /// caller knows the representative (not the residue class) is meant.
    pub fn substitute_representative(
        &self,
        assignment: &Assignment,
        target: &Arc<VariableSpace>,
    ) -> Result<Polynomial> {
        let values = self.substitution_values(assignment, target)?;
        Ok(self.evaluate_with(&values, target))
    }

    fn substitution_values(&self, assignment: &Assignment, target: &Arc<VariableSpace>) -> Result<Vec<Polynomial>> {
        let space = self.space();
        for (name, value) in assignment {
            if space.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.clone()));
            }
            if value.space() != target || value.context() != self.context() {
                return Err(Error::IncompatibleTarget(format!(
                    "value for `{name}` does not live in the target space"
                )));
            }
        }
        (0..space.len())
            .map(|i| {
                let name = space.name(i);
                if let Some(v) = assignment.get(name) {
                    return Ok(v.clone());
                }
                let Some(j) = target.index_of(name) else {
                    if self.uses_var(i) {
                        return Err(Error::IncompatibleTarget(format!(
                            "unassigned variable `{name}` missing from target space"
                        )));
                    }
                    // Never raised to a positive power; any value will do.
                    return Ok(Polynomial::one(target, self.context()));
                };
                let compatible = match (space.modulus(i), target.modulus(j)) {
                    (_, None) => space.modulus(i).is_none(),
                    (None, Some(_)) => true,
                    (Some(m), Some(t)) => m % t == 0,
                };
                if self.uses_var(i) && !compatible {
                    return Err(Error::IncompatibleTarget(format!(
                        "modulus of `{name}` is incompatible with the target space"
                    )));
                }
                Ok(Polynomial::var(target, self.context(), j))
            })
            .collect()
    }

    /// Multivariate Horner evaluation: terms are grouped by the exponent of
    /// each variable in turn, so shared prefixes are multiplied only once.
    fn evaluate_with(&self, values: &[Polynomial], target: &Arc<VariableSpace>) -> Polynomial {
        let terms: Vec<(&ExponentVector, &CyclotomicNumber)> = self.terms().collect();
        let mut powers: Vec<Vec<Polynomial>> = values
            .iter()
            .map(|v| vec![Polynomial::one(target, self.context()), v.clone()])
            .collect();
        horner(&terms, 0, &mut powers, target, self)
    }

    /// Exact evaluation at a point with one value per variable.
    pub fn grid_evaluate(&self, point: &[CyclotomicNumber]) -> Result<CyclotomicNumber> {
        let n = self.space().len();
        if point.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: point.len(),
            });
        }
        let mut powers: Vec<Vec<CyclotomicNumber>> = point
            .iter()
            .map(|p| vec![CyclotomicNumber::one(self.context()), p.clone()])
            .collect();
        let mut acc = CyclotomicNumber::zero(self.context());
        for (exp, c) in self.terms() {
            let mut term = c.clone();
            for (i, &e) in exp.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &table[1];
                    table.push(next);
                }
                term = &term * &table[e as usize];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

fn power(powers: &mut [Vec<Polynomial>], var: usize, e: u32) -> &Polynomial {
    let table = &mut powers[var];
    while table.len() <= e as usize {
        let next = table.last().unwrap() * &table[1];
        table.push(next);
    }
    &table[e as usize]
}

fn horner(
    terms: &[(&ExponentVector, &CyclotomicNumber)],
    depth: usize,
    powers: &mut [Vec<Polynomial>],
    target: &Arc<VariableSpace>,
    source: &Polynomial,
) -> Polynomial {
    if depth == powers.len() {
        let mut acc = Polynomial::zero(target, source.context());
        for (_, c) in terms {
            acc = &acc + &Polynomial::constant(target, (*c).clone());
        }
        return acc;
    }
    let mut acc = Polynomial::zero(target, source.context());
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0 .0[depth];
        let mut end = start + 1;
        // All terms here share exponents below `depth`, so lexicographic
        // order groups them by the exponent at `depth`.
        while end < terms.len() && terms[end].0 .0[depth] == e {
            end += 1;
        }
        let inner = horner(&terms[start..end], depth + 1, powers, target, source);
        let scaled = if e == 0 {
            inner
        } else {
            &inner * power(powers, depth, e)
        };
        acc = &acc + &scaled;
        start = end;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::make_context;

    #[test]
    fn fix_one_variable() {
        let ctx = make_context(1).unwrap();
        let s = VariableSpace::unbounded(["x_0", "x_1"]).unwrap();
        let f = &Polynomial::var(&s, &ctx, 0) * &Polynomial::var(&s, &ctx, 1);
        let mut a = Assignment::new();
        a.insert("x_0".into(), Polynomial::one(&s, &ctx));
        assert_eq!(f.substitute(&a, &s).unwrap(), Polynomial::var(&s, &ctx, 1));
    }

    #[test]
    fn errors() {
        let ctx = make_context(3).unwrap();
        let s = VariableSpace::cyclic(["x"], 3).unwrap();
        let f = Polynomial::var(&s, &ctx, 0);
        let mut a = Assignment::new();
        a.insert("y".into(), Polynomial::one(&s, &ctx));
        assert_eq!(f.substitute(&a, &s).unwrap_err(), Error::UnknownVariable("y".into()));

        let mut a = Assignment::new();
        a.insert("x".into(), Polynomial::from_integer(&s, &ctx, 2));
        assert!(matches!(f.substitute(&a, &s), Err(Error::IncompatibleTarget(_))));
        assert_eq!(
            f.substitute_representative(&a, &s).unwrap(),
            Polynomial::from_integer(&s, &ctx, 2)
        );

        let unbounded = VariableSpace::unbounded(["x"]).unwrap();
        assert!(matches!(
            f.substitute(&Assignment::new(), &unbounded),
            Err(Error::IncompatibleTarget(_))
        ));
    }

    #[test]
    fn evaluate_simple() {
        let ctx = make_context(1).unwrap();
        let s = VariableSpace::unbounded(["x"]).unwrap();
        let x = Polynomial::var(&s, &ctx, 0);
        let f = &x.pow(2) - &Polynomial::one(&s, &ctx);
        let one = CyclotomicNumber::one(&ctx);
        assert!(f.grid_evaluate(std::slice::from_ref(&one)).unwrap().is_zero());
        assert!(Polynomial::zero(&s, &ctx)
            .grid_evaluate(std::slice::from_ref(&one))
            .unwrap()
            .is_zero());
        assert!(f.grid_evaluate(&[one.clone(), one]).is_err());
    }
}
