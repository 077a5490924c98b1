use alloc::vec::Vec;

use super::KpItem;
use crate::rational::{uint, Q};

/// `count` interchangeable items of the same size and profit.
#[derive(Clone, Debug, PartialEq)]
pub struct ItemType {
    pub size: Q,
    pub profit: Q,
    pub count: u64,
    pub compressible: bool,
}

/// A bundle of `multiplicity` items of type `ty`, treated as one 0/1 item.
#[derive(Clone, Debug, PartialEq)]
pub struct Container {
    pub ty: usize,
    pub multiplicity: u64,
    pub size: Q,
    pub profit: Q,
    pub compressible: bool,
}

impl Container {
    /// The container as a knapsack item with id `id`.
    pub fn item(&self, id: usize) -> KpItem {
        KpItem {
            id,
            size: self.size.clone(),
            profit: self.profit.clone(),
            compressible: self.compressible,
        }
    }
}

/// Binary splitting: multiplicities `1, 2, 4, ...` followed by the remainder,
/// so any count `0..=count` is the multiplicity sum of some container subset.
pub fn bounded_kp_expand(types: &[ItemType]) -> Vec<Container> {
    let mut out = Vec::new();
    for (ty, t) in types.iter().enumerate() {
        let mut left = t.count;
        let mut mult = 1u64;
        while left > 0 {
            let take = mult.min(left);
            let k = uint(take);
            out.push(Container {
                ty,
                multiplicity: take,
                size: &t.size * &k,
                profit: &t.profit * &k,
                compressible: t.compressible,
            });
            left -= take;
            mult = mult.saturating_mul(2);
        }
    }
    out
}
