//! Finite strict partial orders over `0..len`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A strict partial order stored as a dense `less[a][b]` matrix
/// (`a < b`). Always transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    less: Vec<Vec<bool>>,
}

impl Poset {
    /// The antichain on `len` elements.
    pub fn antichain(len: usize) -> Self {
        Poset {
            less: vec![vec![false; len]; len],
        }
    }

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Self {
        let mut less = vec![vec![false; len]; len];
        for (a, row) in less.iter_mut().enumerate() {
            for cell in row.iter_mut().skip(a + 1) {
                *cell = true;
            }
        }
        Poset { less }
    }

    /// Transitive closure of the generating `relations` (pairs `a < b`).
    /// Fails if the closure is not irreflexive.
    pub fn from_relations(len: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let mut less = vec![vec![false; len]; len];
        for &(a, b) in relations {
            if a >= len || b >= len {
                return Err(Error::invalid(format!(
                    "relation ({}, {}) outside 0..{}",
                    a, b, len
                )));
            }
            less[a][b] = true;
        }
        let less = close_by_composition(less);
        if let Some(a) = (0..len).find(|&a| less[a][a]) {
            return Err(Error::Inconsistency(format!(
                "precedence relation has a cycle through element {}",
                a
            )));
        }
        Ok(Poset { less })
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    /// All pairs `(a, b)` with `a < b`.
    pub fn relation(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.less[a][b] {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// Covering pairs: `a < b` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less[a][b] && !(0..n).any(|c| self.less[a][c] && self.less[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Checks irreflexivity, antisymmetry and transitivity exhaustively.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if self.less[a][a] {
                return Err(Error::Inconsistency(format!("{} < {}", a, a)));
            }
            for b in 0..n {
                if self.less[a][b] && self.less[b][a] {
                    return Err(Error::Inconsistency(format!(
                        "{} and {} mutually below",
                        a, b
                    )));
                }
                if !self.less[a][b] {
                    continue;
                }
                for c in 0..n {
                    if self.less[b][c] && !self.less[a][c] {
                        return Err(Error::Inconsistency(format!(
                            "not transitive at {} < {} < {}",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Length of the longest chain minus one (0 for an antichain).
    pub fn height(&self) -> usize {
        let n = self.len();
        let order = self.linear_extension();
        let mut depth = vec![0usize; n];
        for &b in &order {
            for a in 0..n {
                if self.less[a][b] {
                    depth[b] = depth[b].max(depth[a] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Elements with nothing below them.
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&b| !(0..self.len()).any(|a| self.less[a][b]))
            .collect()
    }

    /// Elements with nothing above them.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.less[a][b]))
            .collect()
    }

    /// A linear extension, preferring lower indices.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&b| !placed[b] && !(0..n).any(|a| !placed[a] && self.less[a][b]))
                .expect("acyclic");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    /// True iff `set` (indexed by element) is closed downward.
    pub fn is_downset(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|b| !set[b] || (0..self.len()).all(|a| !self.less[a][b] || set[a]))
    }

    /// Every pair of distinct elements is comparable.
    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| a == b || self.less[a][b] || self.less[b][a]))
    }
}

// R <- R ∪ R∘R until nothing changes.
fn close_by_composition(mut less: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let n = less.len();
    loop {
        let mut changed = false;
        let snapshot = less.clone();
        for a in 0..n {
            for b in 0..n {
                if !snapshot[a][b] {
                    continue;
                }
                for c in 0..n {
                    if snapshot[b][c] && !less[a][c] {
                        less[a][c] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return less;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn warshall(len: usize, rel: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        let mut m = vec![vec![false; len]; len];
        for &(a, b) in rel {
            m[a][b] = true;
        }
        for k in 0..len {
            for i in 0..len {
                for j in 0..len {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        for i in 0..len {
            for j in 0..len {
                if m[i][j] {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn chain_and_antichain_hasse() {
        assert_eq!(Poset::chain(3).hasse_edges(), vec![(0, 1), (1, 2)]);
        assert!(Poset::antichain(4).hasse_edges().is_empty());
        assert_eq!(Poset::chain(4).height(), 3);
        assert_eq!(Poset::antichain(4).height(), 0);
        assert!(Poset::chain(5).is_chain());
    }

    #[test]
    fn cycle_is_rejected() {
        let err = Poset::from_relations(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, Error::Inconsistency(_)));
    }

    #[test]
    fn closure_matches_warshall_and_reduction_preserves_it() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(0..9);
            let mut rel = Vec::new();
            for a in 0..len {
                for b in a + 1..len {
                    if rng.gen_bool(0.3) {
                        rel.push((a, b));
                    }
                }
            }
            let p = Poset::from_relations(len, &rel).unwrap();
            p.check_axioms().unwrap();
            assert_eq!(p.relation(), warshall(len, &rel));
            let reduced = p.hasse_edges();
            assert_eq!(warshall(len, &reduced), p.relation());
            let ext = p.linear_extension();
            for (i, &a) in ext.iter().enumerate() {
                for &b in &ext[..i] {
                    assert!(!p.lt(a, b));
                }
            }
        }
    }
}
