//! The `(1 + eps)`-dual algorithm for many processors (`m >= 8n / eps`).

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::estimator::{dual_to_approx, Approximation, DualAlgorithm, DualResult};
use crate::model::{Instance, Placement, Schedule};
use crate::rational::{uint, Q};

/// Checks `eps > 0` and clamps it to at most 1.
pub fn clamp_eps(eps: &Q) -> Result<Q> {
    if !eps.is_positive() {
        return Err(Error::Precondition(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(if *eps > Q::one() {
        Q::one()
    } else {
        eps.clone()
    })
}

/// Whether `m >= factor * n / eps`.
pub fn many_processors(inst: &Instance, eps: &Q, factor: u64) -> bool {
    uint(inst.m()) * eps >= uint(factor) * uint(inst.n() as u64)
}

/// Gives every job `gamma((1 + eps) d)` processors and starts all of them at 0.
///
/// Accepts whenever a schedule of makespan `d` exists.
pub fn fptas_dual(inst: &Instance, d: &Q, eps: &Q) -> Result<DualResult> {
    let eps = clamp_eps(eps)?;
    if !many_processors(inst, &eps, 8) {
        return Err(Error::Precondition(format!(
            "m = {} is below 8n/eps = {}",
            inst.m(),
            uint(8 * inst.n() as u64) / &eps
        )));
    }
    let t = (Q::one() + &eps) * d;
    let mut left = inst.m();
    let mut entries = Vec::with_capacity(inst.n());
    for job in inst.jobs() {
        let Some(k) = job.gamma(&t, inst.m()) else {
            return Ok(DualResult::Rejected);
        };
        if k > left {
            return Ok(DualResult::Rejected);
        }
        left -= k;
        entries.push(Placement {
            start: Q::default(),
            procs: k,
        });
    }
    Ok(DualResult::Accepted(Schedule { entries }))
}

#[derive(Clone, Debug)]
pub struct FptasDual {
    pub eps: Q,
}

impl DualAlgorithm for FptasDual {
    fn ratio(&self) -> Q {
        Q::one() + &self.eps
    }

    fn probe(&self, inst: &Instance, d: &Q) -> Result<DualResult> {
        fptas_dual(inst, d, &self.eps)
    }
}

/// Makespan within `1 + 2 eps` of the optimum; needs `m >= 8n / eps`.
pub fn solve_fptas(inst: &Instance, eps: &Q) -> Result<Approximation> {
    let eps = clamp_eps(eps)?;
    dual_to_approx(inst, &eps, &FptasDual { eps: eps.clone() })
}
