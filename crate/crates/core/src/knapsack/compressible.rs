use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::adaptive::{kpc_adaptive, CapacityGrid};
use super::geom::geom;
use super::pairs::kp_multi_capacity;
use super::{KpItem, KpSolution};
use crate::error::Result;
use crate::rational::{ceil_u64, Q};

/// Parameters of a knapsack instance with compressible items.
#[derive(Clone, Debug)]
pub struct KpcParams {
    pub capacity: Q,
    /// Compression factor, in `(0, 1/4]`.
    pub rho: Q,
    /// Lower bound on the total size of any non-empty compressible selection.
    pub alpha_min: Q,
    /// Upper bound on the total size of any incompressible selection worth considering.
    pub beta_max: Q,
    /// Upper bound on the number of compressible items in a solution.
    pub nbar: u64,
}

impl KpcParams {
    /// Parameters derived from the items themselves: the smallest compressible
    /// size as `alpha_min`, the incompressible total (capped at `capacity`) as
    /// `beta_max`, and an item bound large enough for any set that still fits
    /// after compression.
    pub fn for_items(items: &[KpItem], capacity: Q, rho: Q) -> Self {
        let s_min = items
            .iter()
            .filter(|it| it.compressible)
            .map(|it| &it.size)
            .min()
            .cloned();
        let inc: Q = items
            .iter()
            .filter(|it| !it.compressible)
            .map(|it| it.size.clone())
            .sum();
        let beta_max = if inc < capacity {
            inc
        } else {
            capacity.clone()
        };
        let (alpha_min, nbar) = match s_min {
            Some(s) if s.is_positive() => {
                let bound = Q::from_integer(2.into()) * &capacity / ((Q::one() - &rho) * &s);
                (s, ceil_u64(&bound).max(1))
            }
            _ => (Q::one(), 1),
        };
        KpcParams {
            capacity,
            rho,
            alpha_min,
            beta_max,
            nbar,
        }
    }

    /// `2 rho - rho^2`: the compression the returned set is guaranteed to fit with.
    pub fn rho_prime(&self) -> Q {
        &self.rho * (Q::from_integer(2.into()) - &self.rho)
    }
}

/// Splits the capacity between compressible and incompressible items.
///
/// The result has profit at least the optimum of the uncompressed instance
/// at `capacity`, and fits into `capacity` once its compressible items shrink
/// by [`KpcParams::rho_prime`].
pub fn kpc_solve(items: &[KpItem], p: &KpcParams) -> Result<KpSolution> {
    let cap = &p.capacity;
    if !cap.is_positive() {
        return Ok(KpSolution::empty());
    }
    let (comp, inc): (Vec<KpItem>, Vec<KpItem>) =
        items.iter().cloned().partition(|it| it.compressible);
    let keep = Q::one() - &p.rho;
    let beta0 = if p.beta_max < *cap {
        p.beta_max.clone()
    } else {
        cap.clone()
    };

    let raised = if cap - &p.beta_max > p.alpha_min {
        cap - &p.beta_max
    } else {
        p.alpha_min.clone()
    };
    // starting the progression at `cap` when `raised / keep` overshoots it still
    // leaves a capacity in `[a, a / keep]` for every `a` in `[raised, cap]`
    let start = &raised / &keep;
    let start = if start > *cap { cap.clone() } else { start };
    // with `raised > cap` no compressible item fits uncompressed, so none is needed
    let alphas = if comp.is_empty() || raised > *cap {
        Vec::new()
    } else {
        geom(&start, cap, &(Q::one() / &keep))
    };
    let beta_of = |a: &Q| cap - &keep * a;

    let mut betas: Vec<Q> = alphas
        .iter()
        .map(beta_of)
        .filter(|b| !b.is_negative())
        .collect();
    betas.push(beta0.clone());
    let inc_best = kp_multi_capacity(&inc, &betas);
    let comp_best = if alphas.is_empty() {
        Default::default()
    } else {
        kpc_adaptive(
            &comp,
            &CapacityGrid::new(alphas.clone(), raised, p.rho.clone(), p.nbar)?,
        )
    };

    let shrink = Q::one() - p.rho_prime();
    let mut best = inc_best[&beta0].clone();
    for a in &alphas {
        let b = beta_of(a);
        if b.is_negative() {
            continue;
        }
        let (c, i) = (&comp_best[a], &inc_best[&b]);
        if &(&shrink * &c.size) + &i.size > *cap {
            continue;
        }
        let mut chosen: Vec<usize> = c.chosen.iter().chain(&i.chosen).copied().collect();
        chosen.sort_unstable();
        let cand = KpSolution {
            profit: &c.profit + &i.profit,
            size: &c.size + &i.size,
            chosen,
        };
        if better(&cand, &best) {
            best = cand;
        }
    }
    Ok(best)
}

fn better(a: &KpSolution, b: &KpSolution) -> bool {
    // higher profit, then smaller true size, then lexicographically smaller ids
    (&b.profit, &a.size, &a.chosen) < (&a.profit, &b.size, &b.chosen)
}
