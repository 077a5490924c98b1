use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::pairs::PairList;
use super::{KpItem, KpSolution};
use crate::error::{Error, Result};
use crate::rational::{floor_u64, ratio, uint, Q};

/// Capacities `alpha_1 < ... < alpha_k` solved together by one normalized
/// dynamic program.
///
/// Interval `i` is `[alpha_{i-1}, alpha_i)` with `alpha_0 = alpha_min`; inside
/// it sizes are rounded down to multiples of
/// `U_i = rho * alpha_i / ((1 - rho) * nbar)`, but never below `alpha_{i-1}`.
#[derive(Clone, Debug)]
pub struct CapacityGrid {
    alphas: Vec<Q>,
    alpha_min: Q,
    rho: Q,
    nbar: u64,
    widths: Vec<Q>,
}

impl CapacityGrid {
    pub fn new(alphas: Vec<Q>, alpha_min: Q, rho: Q, nbar: u64) -> Result<Self> {
        if !rho.is_positive() || rho > ratio(1, 4) {
            return Err(Error::Precondition(format!(
                "compression factor {rho} outside (0, 1/4]"
            )));
        }
        if nbar == 0 {
            return Err(Error::Precondition(
                "item bound nbar must be positive".into(),
            ));
        }
        if !alpha_min.is_positive() {
            return Err(Error::Precondition("alpha_min must be positive".into()));
        }
        if let Some(first) = alphas.first() {
            if *first < alpha_min {
                return Err(Error::Precondition(format!(
                    "alpha_1 = {first} below alpha_min = {alpha_min}"
                )));
            }
        }
        if alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "capacities must be strictly increasing".into(),
            ));
        }
        // A wide first interval only costs running time, so the gap is checked between capacities.
        if let Some(w) = alphas.windows(2).find(|w| &w[1] - &w[0] > &rho * &w[1]) {
            return Err(Error::Precondition(format!(
                "gap condition violated at capacity {}",
                w[1]
            )));
        }
        let scale = &rho / ((Q::one() - &rho) * uint(nbar));
        let widths = alphas.iter().map(|a| a * &scale).collect();
        Ok(CapacityGrid {
            alphas,
            alpha_min,
            rho,
            nbar,
            widths,
        })
    }

    pub fn alphas(&self) -> &[Q] {
        &self.alphas
    }

    pub fn rho(&self) -> &Q {
        &self.rho
    }

    pub fn nbar(&self) -> u64 {
        self.nbar
    }

    fn lower(&self, i: usize) -> &Q {
        if i == 0 {
            &self.alpha_min
        } else {
            &self.alphas[i - 1]
        }
    }

    /// Rounds a raw pair size down to the start of its subinterval.
    /// `None` when even the rounded size exceeds the largest capacity.
    pub fn normalize(&self, s: Q) -> Option<Q> {
        let last = self.alphas.last()?;
        if s >= *last {
            if s == *last {
                return Some(s);
            }
            let u = self.widths.last()?;
            let snapped = uint(floor_u64(&(&s / u))) * u;
            return (snapped <= *last).then_some(snapped);
        }
        if s < self.alpha_min {
            let u = &self.widths[0];
            return Some(uint(floor_u64(&(&s / u))) * u);
        }
        // first capacity strictly above s
        let i = self.alphas.partition_point(|a| *a <= s);
        let u = &self.widths[i];
        let snapped = uint(floor_u64(&(&s / u))) * u;
        let lo = self.lower(i);
        Some(if snapped < *lo { lo.clone() } else { snapped })
    }

    /// Number of subintervals of interval `i` (1-based), `l_max - l_min + 1`.
    pub fn subintervals(&self, i: usize) -> u64 {
        let u = &self.widths[i - 1];
        floor_u64(&(&self.alphas[i - 1] / u)) - floor_u64(&(self.lower(i - 1) / u)) + 1
    }
}

/// Solves the compressible-only knapsack for every capacity of `grid` in one pass.
///
/// For each `alpha` the reported profit is at least the exact optimum at
/// capacity `alpha`, and the chosen set has true size at most
/// `alpha / (1 - rho)` as long as it holds at most `nbar` items, so it fits
/// into `alpha` once compressed by `rho`.
pub fn kpc_adaptive(items: &[KpItem], grid: &CapacityGrid) -> BTreeMap<Q, KpSolution> {
    let mut list = PairList::new();
    for it in items {
        list.push_item(it.id, &it.size, &it.profit, |raw| grid.normalize(raw));
    }
    grid.alphas
        .iter()
        .map(|a| {
            let sol = list
                .best_within(a)
                .map(|n| list.solution(n))
                .unwrap_or_else(KpSolution::empty);
            (a.clone(), sol)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::{geom, kp_multi_capacity};
    use crate::rational::int;
    use alloc::vec;

    #[test]
    fn single_item_example() {
        let grid = CapacityGrid::new(vec![int(9)], int(4), ratio(1, 4), 1).unwrap();
        let items = vec![KpItem::compressible(0, int(10), int(1))];
        let res = kpc_adaptive(&items, &grid);
        let sol = &res[&int(9)];
        assert_eq!(sol.chosen, vec![0]);
        assert_eq!(sol.profit, int(1));
        // compressed true size 7.5 fits 9
        assert!(&sol.size * ratio(3, 4) <= int(9));
    }

    #[test]
    fn empty_items() {
        let grid = CapacityGrid::new(vec![int(5), int(6)], int(4), ratio(1, 4), 2).unwrap();
        let res = kpc_adaptive(&[], &grid);
        assert!(res
            .values()
            .all(|s| s.profit == int(0) && s.chosen.is_empty()));
    }

    #[test]
    fn rejects_gap_violations() {
        assert!(CapacityGrid::new(vec![int(8), int(12)], int(4), ratio(1, 4), 1).is_err());
        assert!(CapacityGrid::new(vec![int(9), int(12)], int(4), ratio(1, 4), 1).is_ok());
        assert!(CapacityGrid::new(vec![int(6), int(6)], int(4), ratio(1, 4), 1).is_err());
        assert!(CapacityGrid::new(vec![int(3)], int(4), ratio(1, 4), 1).is_err());
        assert!(CapacityGrid::new(vec![int(5)], int(4), ratio(1, 3), 1).is_err());
    }

    #[test]
    fn aligned_sizes_match_exact_dp() {
        // U_i = alpha_i / (3 * 1) with rho = 1/4 and nbar = 1: widths 4 and 16/3 for alphas 12, 16
        let grid = CapacityGrid::new(vec![int(12), int(16)], int(12), ratio(1, 4), 1).unwrap();
        assert_eq!(grid.normalize(int(4)), Some(int(4)));
        assert_eq!(grid.normalize(int(8)), Some(int(8)));
        assert_eq!(grid.normalize(int(12)), Some(int(12)));
        assert_eq!(grid.normalize(int(16)), Some(int(16)));
        let items: Vec<KpItem> = [(4, 3), (8, 5), (4, 2)]
            .iter()
            .enumerate()
            .map(|(i, &(s, p))| KpItem::compressible(i, int(s), int(p)))
            .collect();
        let adaptive = kpc_adaptive(&items, &grid);
        let exact = kp_multi_capacity(&items, grid.alphas());
        for a in grid.alphas() {
            assert_eq!(adaptive[a].profit, exact[a].profit, "alpha={a}");
        }
    }

    #[test]
    fn subinterval_bound() {
        let rho = ratio(1, 5);
        let keep = Q::one() - &rho;
        let alphas = geom(&(int(7) / &keep), &int(500), &(Q::one() / &keep));
        let nbar = 9;
        let grid = CapacityGrid::new(alphas, int(7), rho.clone(), nbar).unwrap();
        let bound = floor_u64(&((Q::one() - &rho) * uint(nbar))) + 2;
        for i in 1..=grid.alphas().len() {
            assert!(grid.subintervals(i) <= bound);
        }
    }
}
