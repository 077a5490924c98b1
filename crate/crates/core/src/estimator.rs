//! Makespan estimate `omega <= OPT <= 2 omega` and the binary search that
//! turns a dual algorithm into an approximation algorithm.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::model::{list_schedule, Allotment, Instance, Schedule};
use crate::rational::{uint, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub omega: Q,
    /// Allotment attaining `omega`: `max(work / m, max time) = omega`.
    pub allotment: Allotment,
}

/// `omega = min over allotments a of max(work(a) / m, max_j time_j(a_j))`.
///
/// Only allotments `gamma(., t)` for breakpoints `t = time_j(k)` matter. On
/// them `W(t) / m <= t` is monotone in `t`, so the minimum sits at the
/// crossing; it is found by randomized selection among the breakpoints
/// without listing all `n * m` of them.
pub fn estimate(inst: &Instance) -> Estimate {
    let m = inst.m();
    let mq = uint(m);
    let floor = inst
        .jobs()
        .iter()
        .map(|j| j.time(m))
        .max()
        .expect("instances are non-empty");
    let probe = |t: &Q| -> (Q, Vec<u64>) {
        let ks: Vec<u64> = inst
            .jobs()
            .iter()
            .map(|j| j.gamma(t, m).expect("t >= every time(m)"))
            .collect();
        let w = ks
            .iter()
            .zip(inst.jobs())
            .map(|(&k, j)| j.work(k))
            .fold(Q::zero(), |a, b| a + b);
        (w, ks)
    };

    let (w0, ks0) = probe(&floor);
    if w0 <= &mq * &floor {
        return Estimate {
            omega: floor,
            allotment: Allotment(ks0),
        };
    }
    // lo: largest known breakpoint with W(lo) > m * lo; hi: smallest known with W(hi) <= m * hi
    let (mut w_lo, mut ks_lo) = (w0, ks0);
    let mut hi: Option<(Q, Vec<u64>)> = None;
    // candidate processor counts per job: breakpoints strictly inside (lo, hi)
    let mut range: Vec<(u64, u64)> = ks_lo.iter().map(|&k| (1, k - 1)).collect();
    let mut rng = SmallRng::seed_from_u64(0x5eed ^ inst.n() as u64 ^ m);
    loop {
        let total: u128 = range
            .iter()
            .map(|&(a, b)| if b >= a { (b - a + 1) as u128 } else { 0 })
            .sum();
        if total == 0 {
            break;
        }
        let mut r = rng.gen_range(0..total);
        let (j, k) = range
            .iter()
            .enumerate()
            .find_map(|(j, &(a, b))| {
                let c = if b >= a { (b - a + 1) as u128 } else { 0 };
                if r < c {
                    Some((j, a + r as u64))
                } else {
                    r -= c;
                    None
                }
            })
            .expect("r < total");
        let t = inst.job(j).time(k);
        let (w, ks) = probe(&t);
        if w <= &mq * &t {
            for (rg, job) in range.iter_mut().zip(inst.jobs()) {
                // keep only time(k) < t
                rg.0 = rg.0.max(job.gamma_strict(&t, m).unwrap_or(u64::MAX));
            }
            hi = Some((t, ks));
        } else {
            for (rg, &kt) in range.iter_mut().zip(&ks) {
                // keep only time(k) > t
                rg.1 = rg.1.min(kt - 1);
            }
            w_lo = w;
            ks_lo = ks;
        }
    }
    let below = w_lo / &mq;
    match hi {
        Some((t, ks)) if t <= below => Estimate {
            omega: t,
            allotment: Allotment(ks),
        },
        _ => Estimate {
            omega: below,
            allotment: Allotment(ks_lo),
        },
    }
}

/// Answer of a dual algorithm for a target makespan `d`.
#[derive(Clone, Debug, PartialEq)]
pub enum DualResult {
    /// A schedule with makespan at most `ratio * d`.
    Accepted(Schedule),
    /// No schedule of makespan `d` exists.
    Rejected,
}

/// A `c`-dual algorithm: accepts every `d >= OPT` with a schedule of
/// makespan at most `c * d`.
pub trait DualAlgorithm {
    fn ratio(&self) -> Q;
    fn probe(&self, inst: &Instance, d: &Q) -> Result<DualResult>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub schedule: Schedule,
    pub makespan: Q,
    pub lower_bound: Q,
    pub probes: u32,
}

/// Binary search for the smallest accepted target in `[omega, 2 omega]`,
/// stopping once `hi / lo <= 1 + eps / c`; the result is within `c + eps` of
/// the optimum.
pub fn dual_to_approx<D: DualAlgorithm + ?Sized>(
    inst: &Instance,
    eps: &Q,
    dual: &D,
) -> Result<Approximation> {
    let est = estimate(inst);
    let c = dual.ratio();
    let stop = Q::one() + eps / &c;
    let mut probes = 1;
    let mut hi = &est.omega * uint(2);
    let mut best = match dual.probe(inst, &hi)? {
        DualResult::Accepted(s) => s,
        DualResult::Rejected => {
            return Err(Error::ContractViolation(format!(
                "dual rejected d = 2 * omega = {hi}"
            )));
        }
    };
    let mut lo = est.omega.clone();
    while &hi / &lo > stop {
        let mid = (&lo + &hi) / uint(2);
        probes += 1;
        match dual.probe(inst, &mid)? {
            DualResult::Accepted(s) => {
                hi = mid;
                best = s;
            }
            DualResult::Rejected => lo = mid,
        }
    }
    let makespan = best.makespan(inst);
    Ok(Approximation {
        schedule: best,
        makespan,
        lower_bound: est.omega,
        probes,
    })
}

/// List schedule of the estimator's allotment; makespan at most `2 omega`.
pub fn estimate_schedule(inst: &Instance) -> Result<(Estimate, Schedule)> {
    let est = estimate(inst);
    let order: Vec<usize> = (0..inst.n()).collect();
    let s = list_schedule(inst, &est.allotment, &order)?;
    Ok((est, s))
}
