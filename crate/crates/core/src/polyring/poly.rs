use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::space::{ExponentVector, VariableSpace};
use crate::error::{Error, Result};
use crate::exactnum::{CyclotomicContext, CyclotomicNumber};

/// Sparse multivariate polynomial over `Q(ω_n)`.
///
/// Terms are kept in a lexicographically ordered map with no zero
/// coefficients, and exponents of cyclic variables are always reduced, so
/// structural equality is equality in the quotient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    space: Arc<VariableSpace>,
    ctx: CyclotomicContext,
    terms: BTreeMap<ExponentVector, CyclotomicNumber>,
}

pub(crate) fn add_term(
    terms: &mut BTreeMap<ExponentVector, CyclotomicNumber>,
    exp: ExponentVector,
    coeff: CyclotomicNumber,
) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(exp) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &coeff;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl Polynomial {
    pub fn zero(space: &Arc<VariableSpace>, ctx: &CyclotomicContext) -> Self {
        Polynomial {
            space: space.clone(),
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Arc<VariableSpace>, value: CyclotomicNumber) -> Self {
        let ctx = value.context().clone();
        Self::from_terms(space, &ctx, [(ExponentVector::zeros(space.len()), value)])
    }

    pub fn one(space: &Arc<VariableSpace>, ctx: &CyclotomicContext) -> Self {
        Self::constant(space, CyclotomicNumber::one(ctx))
    }

    pub fn from_integer(space: &Arc<VariableSpace>, ctx: &CyclotomicContext, value: i64) -> Self {
        Self::constant(space, CyclotomicNumber::from_integer(ctx, value))
    }

    /// The variable with index `i`.
    pub fn var(space: &Arc<VariableSpace>, ctx: &CyclotomicContext, i: usize) -> Self {
        Self::monomial(space, CyclotomicNumber::one(ctx), &ExponentVector::unit(space.len(), i))
    }

    /// The variable called `name`.
    pub fn var_named(space: &Arc<VariableSpace>, ctx: &CyclotomicContext, name: &str) -> Result<Self> {
        let i = space
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(space, ctx, i))
    }

    /// `coeff · x^exp`, with exponents reduced under the space's moduli.
    pub fn monomial(space: &Arc<VariableSpace>, coeff: CyclotomicNumber, exp: &ExponentVector) -> Self {
        let ctx = coeff.context().clone();
        Self::from_terms(space, &ctx, [(exp.clone(), coeff)])
    }

    /// Sums the given terms, reducing exponents and dropping zeros.
    pub fn from_terms(
        space: &Arc<VariableSpace>,
        ctx: &CyclotomicContext,
        terms: impl IntoIterator<Item = (ExponentVector, CyclotomicNumber)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (exp, c) in terms {
            assert_eq!(exp.0.len(), space.len(), "exponent vector length");
            assert!(c.context() == ctx, "cyclotomic context mismatch");
            let exp = ExponentVector(
                exp.0
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| space.reduce_exponent(i, u64::from(e)))
                    .collect(),
            );
            add_term(&mut map, exp, c);
        }
        Polynomial {
            space: space.clone(),
            ctx: ctx.clone(),
            terms: map,
        }
    }

    /// Builds from an already canonical term map.
    pub(crate) fn from_map(
        space: &Arc<VariableSpace>,
        ctx: &CyclotomicContext,
        terms: BTreeMap<ExponentVector, CyclotomicNumber>,
    ) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial {
            space: space.clone(),
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn context(&self) -> &CyclotomicContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &CyclotomicNumber)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<ExponentVector, CyclotomicNumber> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> CyclotomicNumber {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(&self.ctx))
    }

    /// True iff the canonical term map is empty.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<CyclotomicNumber> {
        match self.terms.len() {
            0 => Some(CyclotomicNumber::zero(&self.ctx)),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(e, _)| e.is_constant())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    /// Degree in variable `i`, `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.0[i]).max()
    }

    /// Whether variable `i` occurs in some term.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e.0[i] > 0)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if !(Arc::ptr_eq(&self.space, &other.space) || self.space == other.space) {
            return Err(Error::SpaceMismatch);
        }
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.order(),
                right: other.ctx.order(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e.clone(), if negate { -c } else { c.clone() });
        }
        Self::from_map(&self.space, &self.ctx, terms)
    }

    fn product(&self, other: &Self) -> Self {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let nvars = self.space.len();
        let mut terms = BTreeMap::new();
        let mut buf = vec![0u32; nvars];
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                for (i, slot) in buf.iter_mut().enumerate() {
                    *slot = self.space.reduce_exponent(i, u64::from(ea.0[i]) + u64::from(eb.0[i]));
                }
                add_term(&mut terms, ExponentVector(buf.clone()), ca * cb);
            }
        }
        Self::from_map(&self.space, &self.ctx, terms)
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        assert!(c.context() == &self.ctx, "cyclotomic context mismatch");
        if c.is_zero() {
            return Self::zero(&self.space, &self.ctx);
        }
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        Self::from_map(&self.space, &self.ctx, terms)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.space, &self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renames variables: the exponent of variable `i` moves to variable
    /// `image[i]` of the same space. `image` must be a bijection between
    /// variables with equal moduli.
    pub fn permute_variables(&self, image: &[usize]) -> Result<Self> {
        let n = self.space.len();
        if image.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: image.len(),
            });
        }
        let mut seen = vec![false; n];
        for (i, &j) in image.iter().enumerate() {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!("{image:?}")));
            }
            if self.space.modulus(i) != self.space.modulus(j) {
                return Err(Error::IncompatibleTarget(format!(
                    "cannot move `{}` onto `{}` with a different modulus",
                    self.space.name(i),
                    self.space.name(j)
                )));
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; n];
            for (i, &x) in e.0.iter().enumerate() {
                out[image[i]] = x;
            }
            (ExponentVector(out), c.clone())
        });
        Ok(Self::from_map(&self.space, &self.ctx, terms.collect()))
    }

    /// Maps every variable to the variable of the same name in `target`,
    /// reducing exponents there. Fails if a used variable has no counterpart.
    pub fn embed(&self, target: &Arc<VariableSpace>) -> Result<Self> {
        let mut map = Vec::with_capacity(self.space.len());
        for i in 0..self.space.len() {
            match target.index_of(self.space.name(i)) {
                Some(j) => map.push(Some(j)),
                None if self.uses_var(i) => {
                    return Err(Error::IncompatibleTarget(format!(
                        "variable `{}` missing from target space",
                        self.space.name(i)
                    )))
                }
                None => map.push(None),
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; target.len()];
            for (i, &x) in e.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    out[j] += x;
                }
            }
            (ExponentVector(out), c.clone())
        });
        Ok(Self::from_terms(target, &self.ctx, terms.collect::<Vec<_>>()))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            /// Panics when the operands live in different spaces; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial operands are incompatible")
            }
        }
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Polynomial::from_map(&self.space, &self.ctx, terms)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
