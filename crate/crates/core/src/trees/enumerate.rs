//! Enumeration of d-trees modulo permutation of children.

use super::DTree;

/// Result of [`enumerate_canonical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub trees: Vec<DTree>,
    /// True when the listing stopped at `max_count`.
    pub truncated: bool,
}

/// Deterministic iterator over canonical trees of depth `1..=max_k`, by depth
/// and then lexicographically in the multiset of children.
///
/// Depth-`k` trees are the multisets of size `d` drawn from the sorted pool of
/// canonical trees of depth `< k` that contain at least one tree of depth
/// `k - 1`. Drawing indices in nondecreasing order makes every emitted node's
/// children sorted, so each class is produced exactly once.
#[derive(Clone, Debug)]
pub struct CanonicalTrees {
    d: usize,
    max_k: usize,
    level: usize,
    /// Sorted canonical trees of depth `< level`, with their depths.
    pool: Vec<(DTree, usize)>,
    pick: Vec<usize>,
    fresh: Vec<DTree>,
    started: bool,
}

impl CanonicalTrees {
    pub fn new(d: usize, m: usize, max_k: usize) -> Self {
        CanonicalTrees {
            d,
            max_k,
            level: 1,
            pool: (1..=m).map(|i| (DTree::Leaf(i), 0)).collect(),
            pick: vec![0; d],
            fresh: Vec::new(),
            started: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.pool.len();
        if !self.started {
            self.started = true;
            return n > 0 && self.d > 0;
        }
        // next nondecreasing index tuple
        let mut k = self.d;
        while k > 0 {
            k -= 1;
            if self.pick[k] + 1 < n {
                let v = self.pick[k] + 1;
                for p in &mut self.pick[k..] {
                    *p = v;
                }
                return true;
            }
        }
        false
    }

    fn next_level(&mut self) {
        let fresh = std::mem::take(&mut self.fresh);
        self.pool
            .extend(fresh.into_iter().map(|t| (t, self.level)));
        self.pool.sort();
        self.level += 1;
        self.pick = vec![0; self.d];
        self.started = false;
    }
}

impl Iterator for CanonicalTrees {
    type Item = DTree;

    fn next(&mut self) -> Option<DTree> {
        while self.level <= self.max_k {
            while self.advance() {
                let deep = self.pick.iter().any(|&i| self.pool[i].1 + 1 == self.level);
                if deep {
                    let t = DTree::Node(self.pick.iter().map(|&i| self.pool[i].0.clone()).collect());
                    if self.level < self.max_k {
                        self.fresh.push(t.clone());
                    }
                    return Some(t);
                }
            }
            self.next_level();
        }
        None
    }
}

/// Canonical representatives of the classes of trees in `𝒢_{max_k} ∖ 𝒢_0`,
/// stopping after `max_count` trees.
pub fn enumerate_canonical(d: usize, m: usize, max_k: usize, max_count: usize) -> Enumeration {
    let mut it = CanonicalTrees::new(d, m, max_k);
    let trees: Vec<DTree> = it.by_ref().take(max_count).collect();
    let truncated = trees.len() == max_count && it.next().is_some();
    Enumeration { trees, truncated }
}
