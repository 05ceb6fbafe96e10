use super::cyclotomic::{CyclotomicContext, CyclotomicNumber};
use crate::error::{Error, Result};

/// Column vector over `Q(ω_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycVector {
    ctx: CyclotomicContext,
    entries: Vec<CyclotomicNumber>,
}

impl CycVector {
    pub fn new(ctx: &CyclotomicContext, entries: Vec<CyclotomicNumber>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| e.context() != ctx) {
            return Err(Error::ContextMismatch {
                left: ctx.order(),
                right: bad.context().order(),
            });
        }
        Ok(CycVector {
            ctx: ctx.clone(),
            entries,
        })
    }

    pub fn from_integers(ctx: &CyclotomicContext, values: &[i64]) -> Self {
        CycVector {
            ctx: ctx.clone(),
            entries: values.iter().map(|&v| CyclotomicNumber::from_integer(ctx, v)).collect(),
        }
    }

    /// `w = (ω^k)_{0 <= k < n}`.
    pub fn roots(ctx: &CyclotomicContext) -> Self {
        CycVector {
            ctx: ctx.clone(),
            entries: (0..ctx.order()).map(|k| ctx.root_power(i64::from(k))).collect(),
        }
    }

    /// The standard basis vector `e_k` of length `len`.
    pub fn basis(ctx: &CyclotomicContext, len: usize, k: usize) -> Self {
        let mut v = vec![0; len];
        v[k] = 1;
        Self::from_integers(ctx, &v)
    }

    pub fn context(&self) -> &CyclotomicContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> &CyclotomicNumber {
        &self.entries[k]
    }

    pub fn dot(&self, other: &Self) -> Result<CyclotomicNumber> {
        check_len(self.len(), other.len())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(CyclotomicNumber::zero(&self.ctx), |acc, (a, b)| &acc + &(a * b)))
    }
}

/// Dense row-major matrix over `Q(ω_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    ctx: CyclotomicContext,
    rows: usize,
    cols: usize,
    entries: Vec<CyclotomicNumber>,
}

impl CycMatrix {
    pub fn from_fn(
        ctx: &CyclotomicContext,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CyclotomicNumber,
    ) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        CycMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ctx: &CyclotomicContext, n: usize) -> Self {
        Self::from_fn(ctx, n, n, |i, j| CyclotomicNumber::from_integer(ctx, i64::from(i == j)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> CycVector {
        CycVector {
            ctx: self.ctx.clone(),
            entries: self.entries[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    /// Conjugate transpose `M†`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        Self::from_fn(&self.ctx, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        Ok(Self::from_fn(&self.ctx, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(CyclotomicNumber::zero(&self.ctx), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        }))
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// The DFT matrix `W = (ω^{uv})_{0 <= u, v < n}`.
pub fn dft_matrix(ctx: &CyclotomicContext) -> CycMatrix {
    let n = ctx.order() as usize;
    CycMatrix::from_fn(ctx, n, n, |u, v| ctx.root_power((u * v) as i64))
}

/// `⟨a, b⟩_M = Σ a_{k0} m_{k0,k1} b_{k1}`.
pub fn bilinear_form(a: &CycVector, m: &CycMatrix, b: &CycVector) -> Result<CyclotomicNumber> {
    check_len(m.rows, a.len())?;
    check_len(m.cols, b.len())?;
    let mut acc = CyclotomicNumber::zero(&a.ctx);
    for (k0, ak) in a.entries.iter().enumerate() {
        if ak.is_zero() {
            continue;
        }
        for (k1, bk) in b.entries.iter().enumerate() {
            let mk = m.get(k0, k1);
            if !mk.is_zero() && !bk.is_zero() {
                acc = &acc + &(&(ak * mk) * bk);
            }
        }
    }
    Ok(acc)
}

/// Entrywise (Hadamard) product `a ⋆ b`.
pub fn hadamard(a: &CycVector, b: &CycVector) -> Result<CycVector> {
    check_len(a.len(), b.len())?;
    Ok(CycVector {
        ctx: a.ctx.clone(),
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x * y).collect(),
    })
}

/// Entrywise power `a^{⋆α}`; negative `α` requires nonzero entries.
pub fn hadamard_pow(a: &CycVector, alpha: i64) -> Result<CycVector> {
    Ok(CycVector {
        ctx: a.ctx.clone(),
        entries: a.entries.iter().map(|x| x.pow(alpha)).collect::<Result<_>>()?,
    })
}
