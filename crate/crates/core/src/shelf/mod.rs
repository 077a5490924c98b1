//! The `(3/2 + eps)`-dual algorithm: pick the jobs of a tall first shelf by
//! knapsack, fold the two shelves into three regions, then fill gaps with
//! small jobs.

mod layout;
mod rules;
mod types;

pub use layout::{assemble, insert_small_jobs, place_shelves, FreeRun};
pub use rules::{apply_transformation_rules, RuleMode, ShelfAssignment, Slot};
pub use types::{count_grid, ladder, ItemTypeTable, Rounding};

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::estimator::{dual_to_approx, Approximation, DualAlgorithm, DualResult};
use crate::fptas::{clamp_eps, fptas_dual, many_processors, solve_fptas};
use crate::knapsack::{bounded_kp_expand, kpc_solve, KpItem, KpcParams};
use crate::model::{validate_schedule, Instance};
use crate::rational::{ceil_u64, ratio, sqrt_floor, uint, Q};

/// Jobs with `time(1) <= d / 2` (small) and the rest (big), both in index order.
pub fn split_small_big(inst: &Instance, d: &Q) -> (Vec<usize>, Vec<usize>) {
    let half = d * ratio(1, 2);
    (0..inst.n()).partition(|&j| inst.job(j).time(1) <= half)
}

/// Work saved by running `j` in the tall shelf instead of the short one:
/// `work(gamma(d / 2)) - work(gamma(d))`. `None` if either count is undefined.
pub fn profit(inst: &Instance, j: usize, d: &Q) -> Option<Q> {
    let job = inst.job(j);
    let g = job.gamma(d, inst.m())?;
    let g2 = job.gamma(&(d * ratio(1, 2)), inst.m())?;
    Some(job.work(g2) - job.work(g))
}

/// Work of the big jobs when `tall` runs on `gamma(d)` and the remaining
/// `big` jobs on `gamma(d / 2)` processors.
pub fn two_shelf_work(inst: &Instance, tall: &[usize], big: &[usize], d: &Q) -> Option<Q> {
    let m = inst.m();
    let half = d * ratio(1, 2);
    let mut w = Q::zero();
    for &j in big {
        let job = inst.job(j);
        let k = if tall.contains(&j) {
            job.gamma(d, m)?
        } else {
            job.gamma(&half, m)?
        };
        w += job.work(k);
    }
    Some(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Knapsack over one item per job; pseudo-polynomial in `m`.
    Simple,
    /// Rounded sizes and profits, few item types, binary-split containers.
    Bounded,
    /// As `Bounded`, with bucketed keys in the transformation rules.
    Linear,
}

/// The dual algorithm with its derived constants.
#[derive(Clone, Debug)]
pub struct MrtDual {
    pub variant: Variant,
    pub eps: Q,
    /// `d' = stretch * d` is the target the shelves are built for.
    pub stretch: Q,
    /// Compression passed to the knapsack; the chosen set fits after shrinking by `2 r - r^2`.
    pub kp_rho: Q,
    /// Items with at least this many processors are compressible.
    pub threshold: u64,
    rounding: Option<Rounding>,
}

impl MrtDual {
    pub fn new(variant: Variant, eps: &Q) -> Result<Self> {
        let eps = clamp_eps(eps)?;
        let dual = match variant {
            Variant::Simple => {
                let rho = &eps / uint(6);
                let kp_rho = &rho / uint(2);
                let shrink = &kp_rho * (Q::from_integer(2.into()) - &kp_rho);
                MrtDual {
                    variant,
                    stretch: Q::one() + &rho * uint(4),
                    threshold: ceil_u64(&(Q::one() / shrink)),
                    kp_rho,
                    eps,
                    rounding: None,
                }
            }
            Variant::Bounded | Variant::Linear => {
                let delta = &eps / uint(5);
                let rho = (sqrt_floor(&(Q::one() + &delta), 30) - Q::one()) / uint(4);
                if rho <= Q::zero() {
                    return Err(Error::Precondition(format!("eps = {eps} is too small")));
                }
                let b = ceil_u64(&(Q::one() / (&rho * (Q::from_integer(2.into()) - &rho))));
                let grow = Q::one() + &delta;
                MrtDual {
                    variant,
                    stretch: &grow * &grow,
                    kp_rho: &rho / uint(2),
                    threshold: b,
                    eps,
                    rounding: Some(Rounding::new(rho, b, delta)),
                }
            }
        };
        Ok(dual)
    }

    fn mode(&self) -> RuleMode {
        match (&self.variant, &self.rounding) {
            (Variant::Linear, Some(r)) => RuleMode::Bucketed(r.delta.clone()),
            _ => RuleMode::Exact,
        }
    }

    /// Tall-shelf jobs among `free` (big, not forced) for knapsack capacity `cap`.
    fn select(&self, inst: &Instance, free: &[usize], d: &Q, cap: u64) -> Result<Vec<usize>> {
        let m = inst.m();
        match &self.rounding {
            None => {
                let mut items = Vec::with_capacity(free.len());
                for &j in free {
                    let g = inst.job(j).gamma(d, m).expect("big job fits in d");
                    let v = profit(inst, j, d).expect("not forced");
                    let it = if g >= self.threshold {
                        KpItem::compressible(j, uint(g), v)
                    } else {
                        KpItem::new(j, uint(g), v)
                    };
                    items.push(it);
                }
                let params = KpcParams::for_items(&items, uint(cap), self.kp_rho.clone());
                Ok(kpc_solve(&items, &params)?.chosen)
            }
            Some(r) => {
                let table = ItemTypeTable::build(inst, free, d, r);
                let containers = bounded_kp_expand(&table.types);
                let items: Vec<KpItem> = containers
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.item(i))
                    .collect();
                let params = KpcParams::for_items(&items, uint(cap), self.kp_rho.clone());
                let sol = kpc_solve(&items, &params)?;
                let mut take = alloc::vec![0usize; table.types.len()];
                for &i in &sol.chosen {
                    take[containers[i].ty] += containers[i].multiplicity as usize;
                }
                let mut out: Vec<usize> = table
                    .members
                    .iter()
                    .zip(take)
                    .flat_map(|(js, t)| js[..t].iter().copied())
                    .collect();
                out.sort_unstable();
                Ok(out)
            }
        }
    }
}

impl DualAlgorithm for MrtDual {
    fn ratio(&self) -> Q {
        let base = ratio(3, 2);
        match (&self.variant, &self.rounding) {
            (Variant::Linear, Some(r)) => (base + &r.delta) * &self.stretch,
            _ => base * &self.stretch,
        }
    }

    fn probe(&self, inst: &Instance, d: &Q) -> Result<DualResult> {
        let half_eps = ratio(1, 2);
        if many_processors(inst, &half_eps, 8) {
            // on this many processors the 3/2-dual needs no knapsack at all
            return fptas_dual(inst, d, &half_eps);
        }
        let m = inst.m();
        let half = d * ratio(1, 2);
        let (small, big) = split_small_big(inst, d);
        let small_work: Q = small.iter().map(|&j| inst.job(j).work(1)).sum();
        let mut forced = Vec::new();
        let mut free = Vec::new();
        let mut cap = m;
        for &j in &big {
            let job = inst.job(j);
            let Some(g) = job.gamma(d, m) else {
                return Ok(DualResult::Rejected);
            };
            if job.gamma(&half, m).is_some() {
                free.push(j);
            } else {
                // cannot run in the short shelf at all
                let Some(rest) = cap.checked_sub(g) else {
                    return Ok(DualResult::Rejected);
                };
                cap = rest;
                forced.push(j);
            }
        }
        let mut tall = self.select(inst, &free, d, cap)?;
        tall.extend(forced);
        tall.sort_unstable();

        let dp = d * &self.stretch;
        let dp_half = &dp * ratio(1, 2);
        let mut s1 = Vec::new();
        let mut s2 = Vec::new();
        let mut small_now = small;
        let mut work = Q::zero();
        for &j in &big {
            let job = inst.job(j);
            if job.time(1) <= dp_half {
                small_now.push(j);
                work += job.work(1);
            } else if tall.binary_search(&j).is_ok() {
                let k = job.gamma(&dp, m).expect("tall job fits in d");
                work += job.work(k);
                s1.push((j, k));
            } else {
                let k = job.gamma(&dp_half, m).expect("short job fits in d/2");
                work += job.work(k);
                s2.push((j, k));
            }
        }
        if work > uint(m) * &dp - &small_work || s1.iter().map(|&(_, k)| k).sum::<u64>() > m {
            return Ok(DualResult::Rejected);
        }
        small_now.sort_unstable();

        let assignment = apply_transformation_rules(inst, &s1, &s2, m, &dp, self.mode());
        let Some((placed, runs)) = place_shelves(inst, &assignment, m, &dp) else {
            return Ok(DualResult::Rejected);
        };
        let Some(starts) = insert_small_jobs(inst, &small_now, &runs) else {
            return Ok(DualResult::Rejected);
        };
        let schedule = assemble(inst.n(), placed, starts);
        let makespan = validate_schedule(&schedule, inst).map_err(|v| {
            Error::ContractViolation(format!("shelf schedule infeasible at d = {d}: {v}"))
        })?;
        if makespan > self.ratio() * d {
            return Err(Error::ContractViolation(format!(
                "makespan {makespan} exceeds ratio at d = {d}"
            )));
        }
        Ok(DualResult::Accepted(schedule))
    }
}

/// One probe of the dual algorithm with accuracy `eps`.
pub fn mrt_dual(inst: &Instance, d: &Q, eps: &Q, variant: Variant) -> Result<DualResult> {
    MrtDual::new(variant, eps)?.probe(inst, d)
}

/// Makespan within `3/2 + eps` of the optimum.
pub fn solve_mrt(inst: &Instance, eps: &Q, variant: Variant) -> Result<Approximation> {
    let half = clamp_eps(eps)? / uint(2);
    dual_to_approx(inst, &half, &MrtDual::new(variant, &half)?)
}

/// The FPTAS when `m >= 16n / eps`, otherwise the linear-time shelf algorithm.
pub fn solve_auto(inst: &Instance, eps: &Q) -> Result<Approximation> {
    let eps = clamp_eps(eps)?;
    let half = &eps / uint(2);
    if many_processors(inst, &half, 8) {
        solve_fptas(inst, &half)
    } else {
        solve_mrt(inst, &eps, Variant::Linear)
    }
}
