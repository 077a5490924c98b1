//! Jobs, instances, allotments and schedules.
//!
//! A job is described by a processing-time oracle `k -> time(k)` over the
//! processor counts `1..=m`. Every oracle used here is monotone: the time is
//! non-increasing in `k` and the work `k * time(k)` is non-decreasing.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, MonotonyViolation, Result, ScheduleViolation};
use crate::rational::{self, ceil_u64, floor_u64, uint, Q};

/// Number of anchor points of a [`PowerLaw`] oracle: one per power of two up to `2^63`.
const POWER_ANCHORS: usize = 64;
/// Resolution of the anchor values, in bits after the binary point.
const POWER_BITS: u32 = 48;

/// Speedup curve `time(k) ~ t1 * k^(-theta)`.
///
/// The curve is evaluated exactly: `time(2^i)` is pinned to a dyadic
/// approximation of `t1 * 2^(-i * theta)`, and between two anchors the work is
/// linear in `k`. That keeps both monotony invariants exact for any `k` up to
/// `2^63` while staying within `2^-48` (relative) of the real power law at the
/// anchors.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerLaw {
    t1: Q,
    theta: f64,
    anchors: Vec<Q>,
    /// Per segment `[2^i, 2^(i+1)]`: `time(k) = slope_free + c / k`, stored as `(c, s)`.
    segments: Vec<(Q, Q)>,
}

impl PowerLaw {
    pub fn new(t1: Q, theta: f64) -> Result<Self> {
        if !t1.is_positive() {
            return Err(Error::InvalidInstance(format!(
                "power-law t1 must be positive, got {t1}"
            )));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidInstance(format!(
                "power-law theta must lie in [0, 1], got {theta}"
            )));
        }
        let mut ratios: Vec<Q> = Vec::with_capacity(POWER_ANCHORS);
        ratios.push(Q::one());
        let half = rational::ratio(1, 2);
        for i in 1..POWER_ANCHORS {
            let prev = &ratios[i - 1];
            let approx =
                rational::from_f64(libm::exp2(-(i as f64) * theta)).unwrap_or_else(Q::zero);
            let mut r = rational::floor_dyadic(&approx, POWER_BITS);
            let lo = prev * &half;
            if r < lo {
                r = lo;
            }
            if &r > prev {
                r = prev.clone();
            }
            ratios.push(r);
        }
        let anchors: Vec<Q> = ratios.into_iter().map(|r| &t1 * r).collect();
        let two = uint(2);
        let segments = (0..POWER_ANCHORS - 1)
            .map(|i| {
                let a = uint(1u64 << i);
                let c = &two * &a * (&anchors[i] - &anchors[i + 1]);
                let s = &two * &anchors[i + 1] - &anchors[i];
                (c, s)
            })
            .collect();
        Ok(PowerLaw {
            t1,
            theta,
            anchors,
            segments,
        })
    }

    pub fn t1(&self) -> &Q {
        &self.t1
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn time(&self, k: u64) -> Q {
        let i = 63 - k.leading_zeros() as usize;
        if k.is_power_of_two() {
            return self.anchors[i].clone();
        }
        let (c, s) = &self.segments[i];
        s + c / uint(k)
    }

    /// Smallest `k` with `time(k) <= t` (or `< t` when `strict`), ignoring the machine bound.
    fn first_at_most(&self, t: &Q, strict: bool) -> Option<u64> {
        let fits = |v: &Q| if strict { v < t } else { v <= t };
        if fits(&self.anchors[0]) {
            return Some(1);
        }
        // anchors are non-increasing: find the first one that fits
        let (mut lo, mut hi) = (0usize, POWER_ANCHORS - 1);
        if !fits(&self.anchors[hi]) {
            return None;
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if fits(&self.anchors[mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // answer lies in (2^lo, 2^hi]; time there is s + c/k with c > 0
        let (c, s) = &self.segments[lo];
        let low = (1u64 << lo) + 1;
        let high = 1u64 << hi;
        let gap = t - s;
        let k = if gap.is_positive() {
            let q = c / gap;
            if strict {
                floor_u64(&q).saturating_add(1)
            } else {
                ceil_u64(&q)
            }
        } else {
            high
        };
        Some(k.clamp(low, high))
    }
}

/// Processing-time oracle of a job.
#[derive(Clone, Debug, PartialEq)]
pub enum Oracle {
    /// `times[k - 1]` is the time on `k` processors.
    Table(Vec<Q>),
    PowerLaw(PowerLaw),
    /// `time(k) = t1 / min(k, cap)`.
    Capped {
        t1: Q,
        cap: u64,
    },
    /// `time(k) = m * a - k + 1`, the jobs of the 4-Partition reduction.
    Reduction {
        a: u64,
        m: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub id: String,
    pub oracle: Oracle,
}

impl Job {
    pub fn new(id: impl Into<String>, oracle: Oracle) -> Self {
        Job {
            id: id.into(),
            oracle,
        }
    }

    pub fn table(id: impl Into<String>, times: Vec<Q>) -> Self {
        Job::new(id, Oracle::Table(times))
    }

    pub fn power_law(id: impl Into<String>, t1: Q, theta: f64) -> Result<Self> {
        Ok(Job::new(id, Oracle::PowerLaw(PowerLaw::new(t1, theta)?)))
    }

    pub fn capped(id: impl Into<String>, t1: Q, cap: u64) -> Self {
        Job::new(id, Oracle::Capped { t1, cap })
    }

    pub fn reduction(id: impl Into<String>, a: u64, m: u64) -> Self {
        Job::new(id, Oracle::Reduction { a, m })
    }

    /// Processing time on `k >= 1` processors. The caller guarantees `k` is in range.
    pub fn time(&self, k: u64) -> Q {
        debug_assert!(k >= 1);
        match &self.oracle {
            Oracle::Table(times) => times[(k - 1) as usize].clone(),
            Oracle::PowerLaw(p) => p.time(k),
            Oracle::Capped { t1, cap } => t1 / uint(k.min(*cap)),
            Oracle::Reduction { a, m } => uint(m * a + 1) - uint(k),
        }
    }

    pub fn work(&self, k: u64) -> Q {
        uint(k) * self.time(k)
    }

    /// Least processor count in `1..=m` whose processing time is at most `t`.
    ///
    /// `None` when even `m` processors are too slow.
    pub fn gamma(&self, t: &Q, m: u64) -> Option<u64> {
        self.first_fit(t, m, false)
    }

    /// Least processor count in `1..=m` whose processing time is strictly below `t`.
    pub fn gamma_strict(&self, t: &Q, m: u64) -> Option<u64> {
        self.first_fit(t, m, true)
    }

    fn first_fit(&self, t: &Q, m: u64, strict: bool) -> Option<u64> {
        let k = match &self.oracle {
            Oracle::Table(_) => return self.gamma_search(t, m, strict),
            Oracle::PowerLaw(p) => p.first_at_most(t, strict)?,
            Oracle::Capped { t1, cap } => {
                if !t.is_positive() {
                    return None;
                }
                let q = t1 / t;
                let k = if strict {
                    floor_u64(&q).saturating_add(1)
                } else {
                    ceil_u64(&q).max(1)
                };
                if k > *cap {
                    return None;
                }
                k
            }
            Oracle::Reduction { a, m: mr } => {
                let q = uint(mr * a + 1) - t;
                if !q.is_positive() {
                    1
                } else if strict {
                    floor_u64(&q).saturating_add(1)
                } else {
                    ceil_u64(&q).max(1)
                }
            }
        };
        (k <= m).then_some(k)
    }

    /// Binary search over `1..=m`, valid for any non-increasing oracle.
    pub fn gamma_search(&self, t: &Q, m: u64, strict: bool) -> Option<u64> {
        let fits = |k: u64| {
            let v = self.time(k);
            if strict {
                &v < t
            } else {
                &v <= t
            }
        };
        if !fits(m) {
            return None;
        }
        let (mut lo, mut hi) = (0u64, m);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if fits(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Checks both monotony invariants for explicit tables in `O(m)`.
    ///
    /// Parametric oracles are monotone by construction and always pass.
    pub fn validate_monotone(&self, m: u64) -> Result<(), MonotonyViolation> {
        match &self.oracle {
            Oracle::Table(times) => validate_table(times, m),
            Oracle::Reduction { a, m: mr } => {
                // time(m) > 0 and the work increments m*a - 2k stay positive
                let last_k = m.saturating_sub(1);
                if mr * a < m {
                    Err(MonotonyViolation::NonPositive { k: m })
                } else if m > 1 && mr * a <= 2 * last_k {
                    Err(MonotonyViolation::WorkDecreases { k: m })
                } else {
                    Ok(())
                }
            }
            Oracle::Capped { t1, cap } => {
                if !t1.is_positive() || *cap == 0 {
                    Err(MonotonyViolation::NonPositive { k: 1 })
                } else {
                    Ok(())
                }
            }
            Oracle::PowerLaw(_) => Ok(()),
        }
    }
}

pub fn validate_table(times: &[Q], m: u64) -> Result<(), MonotonyViolation> {
    if times.len() as u64 != m {
        return Err(MonotonyViolation::WrongLength {
            expected: m,
            actual: times.len() as u64,
        });
    }
    for (i, t) in times.iter().enumerate() {
        let k = i as u64 + 1;
        if !t.is_positive() {
            return Err(MonotonyViolation::NonPositive { k });
        }
        if i > 0 {
            let prev = &times[i - 1];
            if t > prev {
                return Err(MonotonyViolation::TimeIncreases { k });
            }
            if uint(k) * t < uint(k - 1) * prev {
                return Err(MonotonyViolation::WorkDecreases { k });
            }
        }
    }
    Ok(())
}

/// Processor count left after compressing a job on `b` processors by factor `rho`.
///
/// For every monotone job, `time(result) <= (1 + 4 rho) * time(b)`.
pub fn compress_count(b: u64, rho: &Q) -> Result<u64> {
    let quarter = rational::ratio(1, 4);
    if !rho.is_positive() || rho > &quarter {
        return Err(Error::Precondition(format!(
            "compression factor {rho} outside (0, 1/4]"
        )));
    }
    if uint(b) * rho < Q::one() {
        return Err(Error::Precondition(format!(
            "cannot compress {b} processors with factor {rho}: b < 1/rho"
        )));
    }
    Ok(floor_u64(&(uint(b) * (Q::one() - rho))))
}

/// A set of jobs on `m` identical processors.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    jobs: Vec<Job>,
    m: u64,
}

impl Instance {
    /// Builds an instance, checking that every oracle is defined and monotone on `1..=m`.
    pub fn new(jobs: Vec<Job>, m: u64) -> Result<Self> {
        if jobs.is_empty() {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        if m == 0 {
            return Err(Error::InvalidInstance(
                "machine count must be at least 1".into(),
            ));
        }
        for (j, job) in jobs.iter().enumerate() {
            job.validate_monotone(m)
                .map_err(|violation| Error::NotMonotone { job: j, violation })?;
        }
        Ok(Instance { jobs, m })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, j: usize) -> &Job {
        &self.jobs[j]
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k == 0 || k > self.m {
            return Err(Error::ProcessorRange { k, m: self.m });
        }
        Ok(())
    }

    pub fn ptime(&self, j: usize, k: u64) -> Result<Q> {
        self.check_k(k)?;
        Ok(self.jobs[j].time(k))
    }

    pub fn work(&self, j: usize, k: u64) -> Result<Q> {
        self.check_k(k)?;
        Ok(self.jobs[j].work(k))
    }

    pub fn gamma(&self, j: usize, t: &Q) -> Option<u64> {
        self.jobs[j].gamma(t, self.m)
    }

    /// Total work of a schedule that runs every job on a single processor.
    pub fn sequential_work(&self) -> Q {
        self.jobs.iter().map(|j| j.time(1)).sum()
    }
}

/// Processor count per job, indexed like the instance's jobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allotment(pub Vec<u64>);

impl Allotment {
    pub fn total_work(&self, inst: &Instance) -> Q {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &k)| inst.job(j).work(k))
            .sum()
    }

    pub fn max_time(&self, inst: &Instance) -> Q {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &k)| inst.job(j).time(k))
            .max()
            .unwrap_or_else(Q::zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub start: Q,
    pub procs: u64,
}

/// Start time and processor count per job, indexed like the instance's jobs.
///
/// Processors are interchangeable; feasibility only concerns the number of
/// processors busy at each instant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule {
    pub entries: Vec<Placement>,
}

impl Schedule {
    pub fn finish(&self, inst: &Instance, j: usize) -> Q {
        let e = &self.entries[j];
        &e.start + inst.job(j).time(e.procs)
    }

    pub fn makespan(&self, inst: &Instance) -> Q {
        (0..self.entries.len())
            .map(|j| self.finish(inst, j))
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn allotment(&self) -> Allotment {
        Allotment(self.entries.iter().map(|e| e.procs).collect())
    }
}

/// Sweeps start/finish events and returns the makespan of a feasible schedule.
pub fn validate_schedule(s: &Schedule, inst: &Instance) -> Result<Q, ScheduleViolation> {
    if s.entries.len() != inst.n() {
        return Err(ScheduleViolation::WrongJobCount {
            expected: inst.n(),
            actual: s.entries.len(),
        });
    }
    let mut events: Vec<(Q, bool, u64)> = Vec::with_capacity(2 * inst.n());
    for (j, e) in s.entries.iter().enumerate() {
        if e.procs == 0 || e.procs > inst.m() {
            return Err(ScheduleViolation::BadProcessorCount {
                job: j,
                procs: e.procs,
            });
        }
        if e.start.is_negative() {
            return Err(ScheduleViolation::NegativeStart { job: j });
        }
        let end = &e.start + inst.job(j).time(e.procs);
        events.push((e.start.clone(), true, e.procs));
        events.push((end, false, e.procs));
    }
    // releases sort before starts at equal times
    events.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut demand: u64 = 0;
    let mut makespan = Q::zero();
    for (time, is_start, procs) in events {
        if is_start {
            demand += procs;
            if demand > inst.m() {
                return Err(ScheduleViolation::Overload { time, demand });
            }
        } else {
            demand -= procs;
            if time > makespan {
                makespan = time;
            }
        }
    }
    Ok(makespan)
}

/// Greedy list scheduling for a fixed allotment.
///
/// Whenever processors become free, the remaining jobs are scanned in `order`
/// and every job that fits is started. The makespan is at most
/// `2 * max(total_work / m, max_time)`.
pub fn list_schedule(inst: &Instance, a: &Allotment, order: &[usize]) -> Result<Schedule> {
    if a.0.len() != inst.n() {
        return Err(Error::Precondition(format!(
            "allotment covers {} of {} jobs",
            a.0.len(),
            inst.n()
        )));
    }
    if order.len() != inst.n() {
        return Err(Error::Precondition("order must list every job once".into()));
    }
    let mut seen = vec![false; inst.n()];
    for &j in order {
        if j >= inst.n() || core::mem::replace(&mut seen[j], true) {
            return Err(Error::Precondition("order must list every job once".into()));
        }
    }
    for &k in &a.0 {
        if k == 0 || k > inst.m() {
            return Err(Error::ProcessorRange { k, m: inst.m() });
        }
    }
    let mut entries: Vec<Option<Placement>> = vec![None; inst.n()];
    let mut pending: Vec<usize> = order.to_vec();
    let mut running: Vec<(Q, u64)> = Vec::new();
    let mut free = inst.m();
    let mut now = Q::zero();
    while !pending.is_empty() {
        pending.retain(|&j| {
            let k = a.0[j];
            if k <= free {
                free -= k;
                running.push((&now + inst.job(j).time(k), k));
                entries[j] = Some(Placement {
                    start: now.clone(),
                    procs: k,
                });
                false
            } else {
                true
            }
        });
        if pending.is_empty() {
            break;
        }
        let next = running
            .iter()
            .map(|r| &r.0)
            .min()
            .cloned()
            .expect("a waiting job implies a running one");
        running.retain(|(end, k)| {
            if *end <= next {
                free += k;
                false
            } else {
                true
            }
        });
        now = next;
    }
    Ok(Schedule {
        entries: entries
            .into_iter()
            .map(|e| e.expect("every job placed"))
            .collect(),
    })
}
