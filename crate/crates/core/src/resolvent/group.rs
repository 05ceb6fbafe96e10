use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graphenc::Permutation;

/// A subgroup of `S_n`, elements sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Checks identity, closure and inverses before accepting `elements`.
    pub fn new(n: usize, elements: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let set: BTreeSet<Permutation> = elements.into_iter().collect();
        if let Some(bad) = set.iter().find(|p| p.len() != n) {
            return Err(Error::InvalidGroup(format!("{bad} does not act on {n} points")));
        }
        if !set.contains(&Permutation::identity(n)) {
            return Err(Error::InvalidGroup("identity missing".into()));
        }
        for a in &set {
            if !set.contains(&a.inverse()) {
                return Err(Error::InvalidGroup(format!("inverse of {a} missing")));
            }
            for b in &set {
                if !set.contains(&a.compose(b)) {
                    return Err(Error::InvalidGroup(format!("{a} ∘ {b} missing")));
                }
            }
        }
        Ok(PermGroup {
            n,
            elements: set.into_iter().collect(),
        })
    }

    pub fn symmetric(n: usize) -> Self {
        PermGroup {
            n,
            elements: Permutation::all(n).collect(),
        }
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup {
            n,
            elements: vec![Permutation::identity(n)],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

/// One representative per coset `ρ ∘ H`, namely its lexicographically
/// smallest element, listed in increasing order.
pub fn coset_reps(group: &PermGroup, n: usize) -> Result<Vec<Permutation>> {
    if group.degree() != n {
        return Err(Error::InvalidGroup(format!(
            "group acts on {} points, expected {n}",
            group.degree()
        )));
    }
    let mut covered = BTreeSet::new();
    let mut reps = Vec::new();
    for rho in Permutation::all(n) {
        if covered.contains(&rho) {
            continue;
        }
        for h in group.elements() {
            covered.insert(rho.compose(h));
        }
        reps.push(rho);
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphenc::factorial;

    #[test]
    fn validation() {
        assert!(PermGroup::new(3, [Permutation::identity(3), Permutation::new(vec![1, 2, 0]).unwrap()]).is_err());
        assert!(PermGroup::new(2, [Permutation::transposition(2, 0, 1)]).is_err());
        let c3 = PermGroup::new(
            3,
            [
                Permutation::identity(3),
                Permutation::new(vec![1, 2, 0]).unwrap(),
                Permutation::new(vec![2, 0, 1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(c3.order(), 3);
    }

    #[test]
    fn coset_examples() {
        assert_eq!(
            coset_reps(&PermGroup::symmetric(4), 4).unwrap(),
            vec![Permutation::identity(4)]
        );
        assert_eq!(coset_reps(&PermGroup::trivial(3), 3).unwrap().len(), 6);
        let h = PermGroup::new(3, [Permutation::identity(3), Permutation::transposition(3, 0, 1)]).unwrap();
        let reps = coset_reps(&h, 3).unwrap();
        assert_eq!(reps.len(), 3);
        // Every permutation lies in exactly one class ρ ∘ H.
        for tau in Permutation::all(3) {
            let hits = reps
                .iter()
                .filter(|r| h.elements().iter().any(|x| r.compose(x) == tau))
                .count();
            assert_eq!(hits, 1);
        }
        assert!(coset_reps(&h, 4).is_err());
    }

    #[test]
    fn lagrange_counts() {
        for n in 1..=4 {
            let all: Vec<Permutation> = Permutation::all(n).collect();
            for gen in &all {
                // Cyclic subgroup generated by `gen`.
                let mut elems = vec![Permutation::identity(n)];
                let mut p = gen.clone();
                while !p.is_identity() {
                    elems.push(p.clone());
                    p = p.compose(gen);
                }
                let g = PermGroup::new(n, elems).unwrap();
                let reps = coset_reps(&g, n).unwrap();
                assert_eq!((reps.len() * g.order()) as u64, factorial(n));
            }
        }
    }
}
