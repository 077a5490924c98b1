use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{KpItem, KpSolution};
use crate::rational::Q;

#[derive(Clone, Debug)]
struct Node {
    profit: Q,
    /// Size used for dominance and capacity checks (possibly normalized).
    key: Q,
    /// Unrounded total size of the items on the path.
    size: Q,
    count: u64,
    item: usize,
    parent: usize,
}

const ROOT: usize = usize::MAX;

/// Lawler's list of undominated `(profit, size)` pairs with backtracking links.
///
/// After every step the live pairs are strictly increasing in both profit and size.
#[derive(Clone, Debug)]
pub struct PairList {
    arena: Vec<Node>,
    live: Vec<usize>,
}

impl Default for PairList {
    fn default() -> Self {
        Self::new()
    }
}

impl PairList {
    pub fn new() -> Self {
        let root = Node {
            profit: Q::zero(),
            key: Q::zero(),
            size: Q::zero(),
            count: 0,
            item: ROOT,
            parent: ROOT,
        };
        PairList {
            arena: alloc::vec![root],
            live: alloc::vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// Live pairs as `(profit, key)`, sorted by key.
    pub fn pairs(&self) -> impl Iterator<Item = (&Q, &Q)> + '_ {
        self.live
            .iter()
            .map(move |&i| (&self.arena[i].profit, &self.arena[i].key))
    }

    /// Adds `item` (identified by `id`) to every pair. `key_of` maps the raw
    /// key `parent.key + size` to the stored key, or `None` to drop the pair.
    pub fn push_item<F>(&mut self, id: usize, size: &Q, profit: &Q, mut key_of: F)
    where
        F: FnMut(Q) -> Option<Q>,
    {
        let mut fresh: Vec<usize> = Vec::new();
        for &i in &self.live {
            let base = &self.arena[i];
            let Some(key) = key_of(&base.key + size) else {
                // keys only grow along the list
                break;
            };
            let node = Node {
                profit: &base.profit + profit,
                key,
                size: &base.size + size,
                count: base.count + 1,
                item: id,
                parent: i,
            };
            self.arena.push(node);
            fresh.push(self.arena.len() - 1);
        }
        self.live = self.merge(&self.live, &fresh);
    }

    fn merge(&self, old: &[usize], fresh: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(old.len() + fresh.len());
        let (mut a, mut b) = (0, 0);
        let mut best: Option<&Q> = None;
        while a < old.len() || b < fresh.len() {
            let take_old = if b == fresh.len() {
                true
            } else if a == old.len() {
                false
            } else {
                let (x, y) = (&self.arena[old[a]], &self.arena[fresh[b]]);
                // smaller key first; on equal keys the larger profit, existing pairs on full ties
                x.key < y.key || (x.key == y.key && x.profit >= y.profit)
            };
            let idx = if take_old {
                a += 1;
                old[a - 1]
            } else {
                b += 1;
                fresh[b - 1]
            };
            let p = &self.arena[idx].profit;
            if best.is_none_or(|bp| p > bp) {
                best = Some(p);
                out.push(idx);
            }
        }
        out
    }

    /// Best live pair whose key is at most `cap`.
    pub fn best_within(&self, cap: &Q) -> Option<usize> {
        let pos = self.live.partition_point(|&i| &self.arena[i].key <= cap);
        pos.checked_sub(1).map(|p| self.live[p])
    }

    pub fn profit(&self, node: usize) -> &Q {
        &self.arena[node].profit
    }

    pub fn count(&self, node: usize) -> u64 {
        self.arena[node].count
    }

    /// Reconstructs the solution ending in `node`.
    pub fn solution(&self, node: usize) -> KpSolution {
        let mut chosen = Vec::new();
        let mut cur = node;
        while self.arena[cur].parent != ROOT {
            chosen.push(self.arena[cur].item);
            cur = self.arena[cur].parent;
        }
        chosen.sort_unstable();
        let n = &self.arena[node];
        KpSolution {
            profit: n.profit.clone(),
            size: n.size.clone(),
            chosen,
        }
    }

    /// Checks the dominance invariant of the live list.
    pub fn is_strictly_increasing(&self) -> bool {
        self.live.windows(2).all(|w| {
            let (x, y) = (&self.arena[w[0]], &self.arena[w[1]]);
            x.key < y.key && x.profit < y.profit
        })
    }
}

/// Runs the exact pair-list dynamic program up to capacity `cap`.
pub(crate) fn exact_list(items: &[KpItem], cap: &Q) -> PairList {
    let mut list = PairList::new();
    for it in items {
        if it.size > *cap {
            continue;
        }
        list.push_item(it.id, &it.size, &it.profit, |k| (k <= *cap).then_some(k));
    }
    list
}

/// Optimal 0/1 knapsack solution for capacity `cap`.
pub fn kp_exact(items: &[KpItem], cap: &Q) -> KpSolution {
    let list = exact_list(items, cap);
    list.best_within(cap)
        .map(|n| list.solution(n))
        .unwrap_or_else(KpSolution::empty)
}

/// Solves the instance for every capacity in `caps` with one dynamic program
/// run up to the largest capacity.
pub fn kp_multi_capacity(items: &[KpItem], caps: &[Q]) -> BTreeMap<Q, KpSolution> {
    let mut out = BTreeMap::new();
    let Some(max) = caps.iter().max() else {
        return out;
    };
    let list = exact_list(items, max);
    for c in caps {
        let sol = list
            .best_within(c)
            .map(|n| list.solution(n))
            .unwrap_or_else(KpSolution::empty);
        out.insert(c.clone(), sol);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    /// Items given as `(size, profit)`.
    fn items(v: &[(i64, i64)]) -> Vec<KpItem> {
        v.iter()
            .enumerate()
            .map(|(i, &(s, p))| KpItem::new(i, int(s), int(p)))
            .collect()
    }

    fn brute(v: &[(i64, i64)], cap: i64) -> i64 {
        (0u32..1 << v.len())
            .filter_map(|mask| {
                let (mut p, mut s) = (0, 0);
                for (i, &(si, pi)) in v.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        p += pi;
                        s += si;
                    }
                }
                (s <= cap).then_some(p)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn exact_examples() {
        let raw = [(3, 5), (4, 6), (2, 3)];
        let sol = kp_exact(&items(&raw), &int(6));
        assert_eq!(brute(&raw, 6), 9);
        assert_eq!(sol.profit, int(9));
        assert_eq!(sol.chosen, vec![1, 2]);
        assert_eq!(sol.size, int(6));
        assert_eq!(kp_exact(&items(&raw), &int(0)), KpSolution::empty());
        assert_eq!(kp_exact(&items(&[(7, 5)]), &int(6)).profit, int(0));
    }

    #[test]
    fn multi_capacity_examples() {
        let its = items(&[(3, 5), (4, 6), (2, 3)]);
        let res = kp_multi_capacity(&its, &[int(0), int(6)]);
        assert_eq!(res[&int(0)].profit, int(0));
        assert_eq!(res[&int(6)].profit, kp_exact(&its, &int(6)).profit);
        assert!(kp_multi_capacity(&its, &[]).is_empty());
        assert_eq!(
            kp_multi_capacity(&its, &[int(9)])[&int(9)],
            kp_exact(&its, &int(9))
        );
    }

    #[test]
    fn dominance_invariant_holds() {
        let its = items(&[(3, 5), (3, 5), (1, 1), (7, 2), (0, 1), (4, 4)]);
        let mut list = PairList::new();
        for it in &its {
            list.push_item(it.id, &it.size, &it.profit, |k| (k <= int(10)).then_some(k));
            assert!(list.is_strictly_increasing());
        }
    }
}
