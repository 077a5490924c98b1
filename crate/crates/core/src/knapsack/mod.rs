//! 0/1 knapsack machinery: Lawler's pair-list dynamic program, one-pass
//! solving for many capacities, adaptive size normalization for compressible
//! items, and the combined solver for knapsack with compressible items.

mod adaptive;
mod bounded;
mod compressible;
mod geom;
mod pairs;

pub use adaptive::{kpc_adaptive, CapacityGrid};
pub use bounded::{bounded_kp_expand, Container, ItemType};
pub use compressible::{kpc_solve, KpcParams};
pub use geom::{geom, round_down, round_up};
pub use pairs::{kp_exact, kp_multi_capacity, PairList};

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::Q;

/// Item of a knapsack instance. `id` is the caller's handle (job index or container index).
#[derive(Clone, Debug, PartialEq)]
pub struct KpItem {
    pub id: usize,
    pub size: Q,
    pub profit: Q,
    pub compressible: bool,
}

impl KpItem {
    pub fn new(id: usize, size: Q, profit: Q) -> Self {
        KpItem {
            id,
            size,
            profit,
            compressible: false,
        }
    }

    pub fn compressible(id: usize, size: Q, profit: Q) -> Self {
        KpItem {
            id,
            size,
            profit,
            compressible: true,
        }
    }
}

/// A chosen item set. `chosen` holds item ids in increasing order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct KpSolution {
    pub profit: Q,
    pub size: Q,
    pub chosen: Vec<usize>,
}

impl KpSolution {
    pub fn empty() -> Self {
        KpSolution {
            profit: Q::zero(),
            size: Q::zero(),
            chosen: Vec::new(),
        }
    }
}

/// Size of `chosen` when compressible items shrink by factor `rho`.
pub fn compressed_size(items: &[KpItem], chosen: &[usize], rho: &Q) -> Q {
    let keep = Q::one() - rho;
    chosen
        .iter()
        .map(|&id| {
            let it = items
                .iter()
                .find(|it| it.id == id)
                .expect("chosen id belongs to the instance");
            if it.compressible {
                &it.size * &keep
            } else {
                it.size.clone()
            }
        })
        .sum()
}
