//! Exhaustive ground truth for tiny instances.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::estimator::estimate_schedule;
use crate::knapsack::KpItem;
use crate::model::{Allotment, Instance, Placement, Schedule};
use crate::rational::Q;

pub const MAX_JOBS: usize = 8;
pub const MAX_PROCS: u64 = 64;
/// Bound on `m^n`, the number of allotments before pruning.
pub const MAX_ALLOTMENTS: u128 = 1 << 24;
pub const MAX_ITEMS: usize = 20;

/// Optimal makespan and a schedule attaining it.
///
/// Every allotment is tried (minus ones pruned by the area and height
/// bounds); for each, a branch-and-bound over left-shifted schedules finds
/// the best rigid packing. Starts are restricted to 0 and finish times of
/// other jobs, which loses nothing without release dates.
pub fn opt_makespan(inst: &Instance) -> Result<(Q, Schedule)> {
    let (n, m) = (inst.n(), inst.m());
    if n > MAX_JOBS || m > MAX_PROCS || (m as u128).pow(n as u32) > MAX_ALLOTMENTS {
        return Err(Error::TooLarge(format!(
            "oracle handles n <= {MAX_JOBS}, m <= {MAX_PROCS} and m^n <= 2^24; got n={n}, m={m}"
        )));
    }
    let raw: Vec<Q> = inst
        .jobs()
        .iter()
        .flat_map(|job| (1..=m).map(move |k| job.time(k)))
        .collect();
    let denom = raw.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = raw
        .iter()
        .map(|q| q.numer() * (&denom / q.denom()))
        .collect();
    // sums of at most n * m times must stay in range
    let limit = BigInt::from(u128::MAX >> 16);
    if ints.iter().all(|t| *t <= limit) {
        let times = ints
            .iter()
            .map(|t| t.to_u128().expect("checked against the limit"))
            .collect();
        search::<u128>(inst, times, denom)
    } else {
        search::<BigInt>(inst, ints, denom)
    }
}

/// Integer time type of the search: `u128` when everything fits, `BigInt` otherwise.
trait Time: Clone + Ord + Integer + From<u64> + core::iter::Sum {
    fn to_q(&self, denom: &BigInt) -> Q;
    fn from_q(q: &Q, denom: &BigInt) -> Option<Self>;
}

impl Time for u128 {
    fn to_q(&self, denom: &BigInt) -> Q {
        Q::new(BigInt::from(*self), denom.clone())
    }

    fn from_q(q: &Q, denom: &BigInt) -> Option<Self> {
        (q * Q::from_integer(denom.clone())).to_integer().to_u128()
    }
}

impl Time for BigInt {
    fn to_q(&self, denom: &BigInt) -> Q {
        Q::new(self.clone(), denom.clone())
    }

    fn from_q(q: &Q, denom: &BigInt) -> Option<Self> {
        Some((q * Q::from_integer(denom.clone())).to_integer())
    }
}

fn search<T: Time>(inst: &Instance, times: Vec<T>, denom: BigInt) -> Result<(Q, Schedule)> {
    let (n, m) = (inst.n(), inst.m());
    let row = |j: usize| &times[j * m as usize..(j + 1) * m as usize];
    let same_job: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| row(a) == row(b)).collect())
        .collect();
    // incumbent: list schedule of the estimator's allotment
    let (_, seed) = estimate_schedule(inst)?;
    let overflow = || Error::TooLarge("schedule length exceeds the oracle's integer range".into());
    let best = T::from_q(&seed.makespan(inst), &denom).ok_or_else(overflow)?;
    let best_starts = seed
        .entries
        .iter()
        .map(|e| T::from_q(&e.start, &denom).ok_or_else(overflow))
        .collect::<Result<_>>()?;
    let mut s = Search {
        m,
        n,
        times: &times,
        same_job,
        best,
        best_starts,
        best_alloc: seed.entries.iter().map(|e| e.procs).collect(),
        dur: vec![T::zero(); n],
        procs: vec![0; n],
        starts: vec![T::zero(); n],
    };
    let mut alloc = vec![0u64; n];
    s.allotments(0, &mut alloc, T::zero(), T::zero());

    let entries = (0..n)
        .map(|j| Placement {
            start: s.best_starts[j].to_q(&denom),
            procs: s.best_alloc[j],
        })
        .collect();
    Ok((s.best.to_q(&denom), Schedule { entries }))
}

struct Search<'a, T> {
    m: u64,
    n: usize,
    /// `times[j * m + k - 1]`: time of job `j` on `k` processors, scaled to integers.
    times: &'a [T],
    same_job: Vec<Vec<bool>>,
    best: T,
    best_starts: Vec<T>,
    best_alloc: Vec<u64>,
    // rigid-packing scratch
    dur: Vec<T>,
    procs: Vec<u64>,
    starts: Vec<T>,
}

impl<T: Time> Search<'_, T> {
    fn time(&self, j: usize, k: u64) -> &T {
        &self.times[j * self.m as usize + (k - 1) as usize]
    }

    fn area_bound(&self, work: T) -> T {
        work.div_ceil(&T::from(self.m))
    }

    fn end(&self, j: usize) -> T {
        self.starts[j].clone() + self.dur[j].clone()
    }

    fn allotments(&mut self, j: usize, alloc: &mut Vec<u64>, work: T, height: T) {
        let (n, m) = (self.n, self.m);
        // remaining jobs need at least their sequential work and their fastest time
        let rest_work: T = (j..n).map(|i| self.time(i, 1).clone()).sum();
        let rest_height = (j..n)
            .map(|i| self.time(i, m).clone())
            .max()
            .unwrap_or_else(T::zero);
        if self
            .area_bound(work.clone() + rest_work)
            .max(height.clone())
            .max(rest_height)
            >= self.best
        {
            return;
        }
        if j == n {
            self.pack(alloc);
            return;
        }
        let mut prev: Option<T> = None;
        for k in 1..=m {
            let t = self.time(j, k).clone();
            // a plateau in time only adds work
            if prev.as_ref() == Some(&t) {
                continue;
            }
            prev = Some(t.clone());
            // identical jobs get non-increasing allotments
            if (0..j)
                .rev()
                .find(|&i| self.same_job[i][j])
                .is_some_and(|i| alloc[i] < k)
            {
                continue;
            }
            alloc[j] = k;
            let w = work.clone() + t.clone() * T::from(k);
            self.allotments(j + 1, alloc, w, height.clone().max(t));
        }
        alloc[j] = 0;
    }

    fn pack(&mut self, alloc: &[u64]) {
        for (j, &k) in alloc.iter().enumerate() {
            self.procs[j] = k;
            self.dur[j] = self.time(j, k).clone();
        }
        let before = self.best.clone();
        let all = (1u32 << self.n) - 1;
        self.event(T::zero(), all, &mut Vec::new());
        if self.best < before {
            self.best_alloc = alloc.to_vec();
        }
    }

    /// Chooses which waiting jobs start at time `t`, then moves to the next finish.
    fn event(&mut self, t: T, waiting: u32, running: &mut Vec<usize>) {
        let busy_end = running
            .iter()
            .map(|&j| self.end(j))
            .max()
            .unwrap_or_else(|| t.clone());
        let mut area: T = running
            .iter()
            .map(|&j| (self.end(j) - t.clone()) * T::from(self.procs[j]))
            .sum();
        let mut tallest = T::zero();
        for j in 0..self.n {
            if waiting >> j & 1 == 1 {
                area = area + self.dur[j].clone() * T::from(self.procs[j]);
                tallest = tallest.max(self.dur[j].clone());
            }
        }
        let bound = busy_end
            .max(t.clone() + tallest)
            .max(t.clone() + self.area_bound(area));
        if bound >= self.best {
            return;
        }
        let free = self.m - running.iter().map(|&j| self.procs[j]).sum::<u64>();
        self.choose(&t, waiting, 0, free, &mut Vec::new(), running);
    }

    fn choose(
        &mut self,
        t: &T,
        waiting: u32,
        j: usize,
        free: u64,
        chosen: &mut Vec<usize>,
        running: &mut Vec<usize>,
    ) {
        if j == self.n {
            self.advance(t, waiting, chosen, running);
            return;
        }
        if waiting >> j & 1 == 1 && self.procs[j] <= free {
            // identical waiting jobs start in index order
            let blocked = (0..j).any(|i| {
                waiting >> i & 1 == 1
                    && !chosen.contains(&i)
                    && self.procs[i] == self.procs[j]
                    && self.dur[i] == self.dur[j]
            });
            if !blocked {
                chosen.push(j);
                self.choose(t, waiting, j + 1, free - self.procs[j], chosen, running);
                chosen.pop();
            }
        }
        self.choose(t, waiting, j + 1, free, chosen, running);
    }

    fn advance(&mut self, t: &T, waiting: u32, chosen: &[usize], running: &[usize]) {
        if chosen.is_empty() && running.is_empty() {
            return;
        }
        let mut waiting = waiting;
        for &j in chosen {
            self.starts[j] = t.clone();
            waiting &= !(1 << j);
        }
        let mut next: Vec<usize> = running.iter().chain(chosen).copied().collect();
        if waiting == 0 {
            let end = next
                .iter()
                .map(|&j| self.end(j))
                .max()
                .unwrap_or_else(|| t.clone());
            if end < self.best {
                self.best = end;
                self.best_starts = self.starts.clone();
            }
            return;
        }
        let t_next = next
            .iter()
            .map(|&j| self.end(j))
            .min()
            .expect("something runs");
        next.retain(|&j| self.end(j) > t_next);
        self.event(t_next, waiting, &mut next);
    }
}

/// Best profit over all subsets fitting `cap`.
pub fn kp_bruteforce(items: &[KpItem], cap: &Q) -> Result<Q> {
    kpc_bruteforce(items, cap, &Q::zero())
}

/// Best profit over all subsets whose size, with compressible items shrunk by
/// `rho`, fits `cap`.
pub fn kpc_bruteforce(items: &[KpItem], cap: &Q, rho: &Q) -> Result<Q> {
    if items.len() > MAX_ITEMS {
        return Err(Error::TooLarge(format!(
            "at most {MAX_ITEMS} items, got {}",
            items.len()
        )));
    }
    let keep = Q::one() - rho;
    let sizes: Vec<Q> = items
        .iter()
        .map(|it| {
            if it.compressible {
                &it.size * &keep
            } else {
                it.size.clone()
            }
        })
        .collect();
    let mut best = Q::zero();
    for mask in 0u32..1 << items.len() {
        let (mut size, mut profit) = (Q::zero(), Q::zero());
        for (i, it) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                size += &sizes[i];
                profit += &it.profit;
            }
        }
        if size <= *cap && profit > best {
            best = profit;
        }
    }
    Ok(best)
}

/// Lower bound `max(total work / m, max time)` of an allotment.
pub fn allotment_bound(inst: &Instance, a: &Allotment) -> Q {
    let area = a.total_work(inst) / Q::from_integer(inst.m().into());
    let height = a.max_time(inst);
    if area > height {
        area
    } else {
        height
    }
}
