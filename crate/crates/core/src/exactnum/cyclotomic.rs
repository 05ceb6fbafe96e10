use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug)]
struct ContextInner {
    order: u32,
    /// Coefficients of `Φ_n`, lowest degree first; monic.
    min_poly: Vec<BigInt>,
    /// `x^k mod Φ_n` for `0 <= k < n`.
    powers: Vec<Vec<BigInt>>,
}

/// Handle on `Q(ω_n)`: the order `n` together with `Φ_n`.
///
/// Contexts are memoized per order and cheap to clone.
#[derive(Clone, Debug)]
pub struct CyclotomicContext(Arc<ContextInner>);

impl PartialEq for CyclotomicContext {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}

impl Eq for CyclotomicContext {}

fn memo() -> &'static Mutex<HashMap<u32, CyclotomicContext>> {
    static MEMO: OnceLock<Mutex<HashMap<u32, CyclotomicContext>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the memo table) the context for order `n`.
///
/// `Φ_n` is obtained by exact division of `x^n - 1` by `Φ_d` for every proper
/// divisor `d` of `n`.
pub fn make_context(n: u32) -> Result<CyclotomicContext> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if let Some(ctx) = memo().lock().expect("context memo poisoned").get(&n) {
        return Ok(ctx.clone());
    }

    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let divisor = make_context(d)?;
        poly = exact_divide(&poly, &divisor.0.min_poly);
    }

    let degree = poly.len() - 1;
    let powers = (0..n as usize)
        .map(|k| {
            let mut v = vec![BigInt::zero(); k + 1];
            v[k] = BigInt::one();
            reduce_mod(v, &poly, degree)
        })
        .collect();
    let ctx = CyclotomicContext(Arc::new(ContextInner {
        order: n,
        min_poly: poly,
        powers,
    }));

    // Two threads may race to build the same order; both produce the same
    // value and the first insertion wins.
    let mut table = memo().lock().expect("context memo poisoned");
    Ok(table.entry(n).or_insert(ctx).clone())
}

/// Quotient of `num` by the monic `den`; panics if the division is not exact.
fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    assert!(
        rem.iter().all(Zero::is_zero),
        "cyclotomic divisor does not divide x^n - 1"
    );
    quot
}

/// Reduces an integer polynomial modulo the monic `modulus` of degree `degree`,
/// returning exactly `degree` coefficients.
fn reduce_mod(mut v: Vec<BigInt>, modulus: &[BigInt], degree: usize) -> Vec<BigInt> {
    for k in (degree..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[k]);
        for i in 0..degree {
            if !modulus[i].is_zero() {
                v[k - degree + i] -= &c * &modulus[i];
            }
        }
    }
    v.resize(degree, BigInt::zero());
    v
}

impl CyclotomicContext {
    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Degree of `Φ_n`, i.e. Euler's totient of `n`.
    pub fn degree(&self) -> usize {
        self.0.min_poly.len() - 1
    }

    /// Integer coefficients of `Φ_n`, lowest degree first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.0.min_poly
    }

    /// `ω^k` with `k` reduced modulo `n` (negative `k` allowed).
    pub fn root_power(&self, k: i64) -> CyclotomicNumber {
        let n = i64::from(self.0.order);
        let idx = k.rem_euclid(n) as usize;
        CyclotomicNumber {
            ctx: self.clone(),
            num: self.0.powers[idx].clone(),
            den: BigInt::one(),
        }
    }

    fn reduce(&self, v: Vec<BigInt>) -> Vec<BigInt> {
        reduce_mod(v, &self.0.min_poly, self.degree())
    }
}

/// Element of `Q(ω_n)` in canonical form: `(Σ num_k ω^k) / den` with
/// `deg < φ(n)`, `den > 0` and `gcd(num_0, .., num_{φ-1}, den) = 1`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    ctx: CyclotomicContext,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.den == other.den && self.num == other.num
    }
}

impl Eq for CyclotomicNumber {}

impl Hash for CyclotomicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.order().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl CyclotomicNumber {
    fn from_parts(ctx: &CyclotomicContext, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut out = CyclotomicNumber {
            ctx: ctx.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(ctx: &CyclotomicContext) -> Self {
        CyclotomicNumber {
            ctx: ctx.clone(),
            num: vec![BigInt::zero(); ctx.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(ctx: &CyclotomicContext) -> Self {
        Self::from_integer(ctx, 1)
    }

    pub fn from_integer(ctx: &CyclotomicContext, value: i64) -> Self {
        Self::from_bigint(ctx, BigInt::from(value))
    }

    pub fn from_bigint(ctx: &CyclotomicContext, value: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = value;
        CyclotomicNumber {
            ctx: ctx.clone(),
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(ctx: &CyclotomicContext, value: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = value.numer().clone();
        Self::from_parts(ctx, num, value.denom().clone())
    }

    /// Builds `Σ coeffs[k] ω^k` for a coefficient list of any length.
    pub fn from_coeffs(ctx: &CyclotomicContext, coeffs: &[Rational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let n = ctx.order() as usize;
        // Fold exponents >= n through ω^n = 1 before the Φ_n reduction.
        let mut folded = vec![BigInt::zero(); n];
        for (k, q) in coeffs.iter().enumerate() {
            folded[k % n] += q.numer() * (&den / q.denom());
        }
        Self::from_parts(ctx, ctx.reduce(folded), den)
    }

    pub fn context(&self) -> &CyclotomicContext {
        &self.ctx
    }

    /// Canonical rational coefficients on the basis `1, ω, .., ω^{φ(n)-1}`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.ctx.order(),
                right: other.ctx.order(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect();
            (num, &self.den * &other.den)
        };
        Self::from_parts(&self.ctx, num, den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let d = self.ctx.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_parts(&self.ctx, self.ctx.reduce(prod), &self.den * &other.den)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Solve (multiplication-by-self matrix) · c = e_0 over Q.
        let d = self.ctx.degree();
        let basis: Vec<Self> = (0..d).map(|k| self.ctx.root_power(k as i64)).collect();
        let columns: Vec<Vec<Rational>> = basis.iter().map(|b| (self * b).coeffs()).collect();
        let mut m: Vec<Vec<Rational>> = (0..d)
            .map(|row| {
                let mut r: Vec<Rational> = (0..d).map(|col| columns[col][row].clone()).collect();
                r.push(if row == 0 { Rational::one() } else { Rational::zero() });
                r
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                        *v -= &f * p;
                    }
                }
            }
        }
        let sol: Vec<Rational> = m.into_iter().map(|mut r| r.pop().unwrap()).collect();
        Ok(Self::from_coeffs(&self.ctx, &sol))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// Integer power; negative exponents go through [`Self::inv`].
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Complex conjugate, i.e. the field automorphism `ω ↦ ω^{-1}`.
    pub fn conj(&self) -> Self {
        let mut acc = vec![BigInt::zero(); self.ctx.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = self.ctx.root_power(-(k as i64));
            for (a, b) in acc.iter_mut().zip(image.num.iter()) {
                *a += c * b;
            }
        }
        Self::from_parts(&self.ctx, acc, self.den.clone())
    }

    /// Floating-point image under `ω ↦ e^{2πi/n}`. Diagnostics only; never
    /// use it to decide equality.
    pub fn to_complex(&self) -> Complex64 {
        let n = f64::from(self.ctx.order());
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        self.num
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, angle)
            })
            .sum()
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Canonical text: a rational `a` / `a/b` when the value is rational,
    /// otherwise an integer combination of powers of `w` over a common
    /// denominator, e.g. `(1-2*w)/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&super::rational::format_rational(&q));
        }
        let mut combo = String::new();
        let mut count = 0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            count += 1;
            let negative = c.is_negative();
            let mag = c.abs();
            if negative {
                combo.push('-');
            } else if !combo.is_empty() {
                combo.push('+');
            }
            let power = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            if power.is_empty() {
                combo.push_str(&mag.to_string());
            } else if mag.is_one() {
                combo.push_str(&power);
            } else {
                combo.push_str(&format!("{mag}*{power}"));
            }
        }
        let body = if count > 1 { format!("({combo})") } else { combo };
        if self.den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "{body}/{}", self.den)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a CyclotomicNumber> for &'a CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
                assert!(self.ctx == rhs.ctx, "cyclotomic context mismatch");
                $body(self, rhs)
            }
        }
        impl $trait for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CyclotomicNumber, b| a.add_unchecked(b, false));
forward_binop!(Sub, sub, |a: &CyclotomicNumber, b| a.add_unchecked(b, true));
forward_binop!(Mul, mul, |a: &CyclotomicNumber, b| a.mul_unchecked(b));

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Integer polynomial product, low degree first; independent of the
    /// context's own reduction code.
    fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(make_context(1).unwrap().min_poly(), &ints(&[-1, 1])[..]);
        assert_eq!(make_context(2).unwrap().min_poly(), &ints(&[1, 1])[..]);
        assert_eq!(make_context(6).unwrap().min_poly(), &ints(&[1, -1, 1])[..]);
        assert_eq!(make_context(4).unwrap().min_poly(), &ints(&[1, 0, 1])[..]);
    }

    #[test]
    fn phi_six_times_proper_divisors_is_x6_minus_1() {
        // Φ_1 Φ_2 Φ_3 Φ_6 multiplied out by hand-independent convolution.
        let prod = [1, 2, 3, 6]
            .iter()
            .map(|&d| make_context(d).unwrap().min_poly().to_vec())
            .reduce(|a, b| poly_mul(&a, &b))
            .unwrap();
        assert_eq!(prod, ints(&[-1, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn degree_is_totient() {
        let totient = |n: u32| (1..=n).filter(|k| k.gcd(&n) == 1).count();
        for n in 1..=30 {
            assert_eq!(make_context(n).unwrap().degree(), totient(n), "n = {n}");
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert_eq!(make_context(0).unwrap_err(), Error::InvalidOrder(0));
    }

    #[test]
    fn root_powers() {
        for n in 1..=8 {
            let ctx = make_context(n).unwrap();
            assert!(ctx.root_power(0).is_one());
            assert!(ctx.root_power(n as i64).is_one());
        }
        let c2 = make_context(2).unwrap();
        assert_eq!(c2.root_power(1), CyclotomicNumber::from_integer(&c2, -1));
        let c4 = make_context(4).unwrap();
        assert_eq!(c4.root_power(2), CyclotomicNumber::from_integer(&c4, -1));
    }

    #[test]
    fn field_examples() {
        let c3 = make_context(3).unwrap();
        let s = c3.root_power(0) + c3.root_power(1) + c3.root_power(2);
        assert!(s.is_zero());
        for n in 1..=8 {
            let ctx = make_context(n).unwrap();
            assert!((ctx.root_power(1) * ctx.root_power(n as i64 - 1)).is_one());
        }
        let c4 = make_context(4).unwrap();
        assert_eq!(c4.root_power(1).inv().unwrap(), c4.root_power(3));
        assert_eq!(CyclotomicNumber::zero(&c4).inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = make_context(3).unwrap().root_power(1);
        let b = make_context(4).unwrap().root_power(1);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::ContextMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn display_forms() {
        let c4 = make_context(4).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let x = CyclotomicNumber::from_coeffs(&c4, &[half.clone(), -half.clone()]);
        assert_eq!(x.to_string(), "(1-w)/2");
        assert_eq!(c4.root_power(3).to_string(), "-w");
        assert_eq!(CyclotomicNumber::from_rational(&c4, &half).to_string(), "1/2");
        let c6 = make_context(6).unwrap();
        assert_eq!(c6.root_power(2).to_string(), "(-1+w)");
    }

    #[test]
    fn complex_embedding_matches_roots() {
        let c8 = make_context(8).unwrap();
        let z = c8.root_power(3).to_complex();
        let angle = 3.0 * std::f64::consts::PI / 4.0;
        assert!((z.re - angle.cos()).abs() < 1e-12 && (z.im - angle.sin()).abs() < 1e-12);
    }

    #[test]
    fn conj_inverts_roots() {
        for n in 1..=8 {
            let ctx = make_context(n).unwrap();
            for k in 0..n as i64 {
                assert_eq!(ctx.root_power(k).conj(), ctx.root_power(-k));
            }
        }
    }

    fn element(n: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let ctx = make_context(n).unwrap();
        prop::collection::vec((-5i64..=5, 1i64..=4), n as usize).prop_map(move |cs| {
            let coeffs: Vec<Rational> = cs.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect();
            CyclotomicNumber::from_coeffs(&ctx, &coeffs)
        })
    }

    fn triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
        (1u32..=8).prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, CyclotomicNumber::zero(a.context()));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn association_order_does_not_change_canonical_form((a, b, c) in triple()) {
            let left = &(&(&a * &b) + &c) - &(&b * &a);
            let right = &c + &(&(&a * &b) - &(&a * &b));
            prop_assert_eq!(left.numerators(), right.numerators());
            prop_assert_eq!(left.denominator(), right.denominator());
        }
    }
}
