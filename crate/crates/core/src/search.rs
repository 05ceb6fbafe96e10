//! Deterministic first-match search over a mixed-radix box.

use rayon::prelude::*;

/// Limits and scheduling for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest number of points a search may visit.
    pub grid_guard: u64,
    /// Split the search across threads; results are identical either way.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid_guard: 1_000_000,
            parallel: false,
        }
    }
}

/// Lexicographic digits of `k` in the box with the given radices (last digit
/// varies fastest).
pub(crate) fn digits(mut k: u64, radices: &[u64]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = (k % r) as usize;
        k /= r;
    }
    out
}

/// Smallest `k < size` satisfying `pred`. The parallel path returns the same
/// index as the sequential one.
pub(crate) fn find_first<F>(size: u64, parallel: bool, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    if parallel {
        (0..size).into_par_iter().find_first(|&k| pred(k))
    } else {
        (0..size).find(|&k| pred(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_are_lexicographic() {
        let radices = [2, 3];
        let all: Vec<Vec<usize>> = (0..6).map(|k| digits(k, &radices)).collect();
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parallel_matches_sequential() {
        for target in [0u64, 7, 999, 5000] {
            let pred = |k: u64| k >= target && k % 7 == target % 7;
            assert_eq!(find_first(10_000, true, pred), find_first(10_000, false, pred));
        }
        assert_eq!(find_first(100, true, |_| false), None);
    }
}
