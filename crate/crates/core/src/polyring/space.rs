use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of variables, each either unbounded or cyclic of order `m`
/// (i.e. living in a ring where `v^m = 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    names: Vec<String>,
    moduli: Vec<Option<u32>>,
}

/// The identifier reserved for the root of unity `ω` in polynomial text.
pub const ROOT_SYMBOL: &str = "w";

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableSpace {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, Option<u32>)>) -> Result<Arc<Self>> {
        let (names, moduli): (Vec<String>, Vec<Option<u32>>) = vars.into_iter().map(|(n, m)| (n.into(), m)).unzip();
        let mut seen = HashSet::new();
        for name in &names {
            if !valid_identifier(name) || name == ROOT_SYMBOL {
                return Err(Error::InvalidSpace(format!("bad variable name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate variable `{name}`")));
            }
        }
        if moduli.contains(&Some(0)) {
            return Err(Error::InvalidSpace("cyclic modulus must be positive".into()));
        }
        Ok(Arc::new(VariableSpace { names, moduli }))
    }

    pub fn unbounded<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::new(names.into_iter().map(|n| (n, None)))
    }

    pub fn cyclic<S: Into<String>>(names: impl IntoIterator<Item = S>, modulus: u32) -> Result<Arc<Self>> {
        Self::new(names.into_iter().map(|n| (n, Some(modulus))))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn modulus(&self, i: usize) -> Option<u32> {
        self.moduli[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn reduce_exponent(&self, i: usize, e: u64) -> u32 {
        match self.moduli[i] {
            Some(m) => (e % u64::from(m)) as u32,
            None => u32::try_from(e).expect("exponent overflow"),
        }
    }
}

impl fmt::Display for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, m)) in self.names.iter().zip(&self.moduli).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match m {
                Some(m) => write!(f, "{name}:{m}")?,
                None => f.write_str(name)?,
            }
        }
        Ok(())
    }
}

/// Exponents of a monomial, one per variable of its space. Ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    /// `self >= other` coordinatewise.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_spaces() {
        assert!(VariableSpace::unbounded(["x", "x"]).is_err());
        assert!(VariableSpace::unbounded(["w"]).is_err());
        assert!(VariableSpace::unbounded(["1x"]).is_err());
        assert!(VariableSpace::cyclic(["x"], 0).is_err());
    }

    #[test]
    fn domination() {
        let a = ExponentVector(vec![2, 1]);
        assert!(a.dominates(&ExponentVector(vec![1, 1])));
        assert!(!ExponentVector(vec![3, 0]).dominates(&ExponentVector(vec![1, 1])));
        assert_eq!(a.total_degree(), 3);
    }
}
