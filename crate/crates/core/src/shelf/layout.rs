//! Turning a three-region assignment into start times, then filling idle
//! processor time with single-processor small jobs.

use alloc::vec::Vec;

use num_traits::Zero;

use super::rules::{ShelfAssignment, Slot};
use crate::model::{Instance, Placement, Schedule};
use crate::rational::{ratio, Q};

/// `count` processors that are idle during `[start, end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeRun {
    pub count: u64,
    pub start: Q,
    pub end: Q,
}

/// Big-job placements and the idle runs around them.
pub type ShelfLayout = (Vec<(usize, Placement)>, Vec<FreeRun>);

/// Start times for the big jobs of `a` on `m` processors with target `d`, and
/// the idle runs left below `3/2 d`. `None` when `S0` and `S2` do not fit side by side.
pub fn place_shelves(inst: &Instance, a: &ShelfAssignment, m: u64, d: &Q) -> Option<ShelfLayout> {
    let top = d * ratio(3, 2);
    let mut placed = Vec::new();
    // (count, busy until) for processor columns that S2 jobs cannot use
    let mut s0 = Vec::new();
    // same for columns that are free again by d
    let mut low = Vec::new();
    let mut s2 = Vec::new();
    let at = |start: Q, procs| Placement { start, procs };
    for slot in &a.slots {
        match *slot {
            Slot::S0 { job, procs } => {
                placed.push((job, at(Q::zero(), procs)));
                s0.push((procs, inst.job(job).time(procs)));
            }
            Slot::Pair { lower, upper } => {
                let t = inst.job(lower).time(1);
                placed.push((lower, at(Q::zero(), 1)));
                placed.push((upper, at(t.clone(), 1)));
                s0.push((1, t + inst.job(upper).time(1)));
            }
            Slot::Stack {
                lower,
                lower_procs,
                upper,
            } => {
                let t = inst.job(lower).time(lower_procs);
                placed.push((lower, at(Q::zero(), lower_procs)));
                placed.push((upper, at(t.clone(), 1)));
                s0.push((1, &t + inst.job(upper).time(1)));
                low.push((lower_procs - 1, t));
            }
            Slot::S1 { job, procs } => {
                placed.push((job, at(Q::zero(), procs)));
                low.push((procs, inst.job(job).time(procs)));
            }
            Slot::S2 { job, procs } => {
                let start = &top - inst.job(job).time(procs);
                placed.push((job, at(start.clone(), procs)));
                s2.push((procs, start));
            }
        }
    }
    let used: u64 = s0.iter().chain(&low).map(|&(c, _)| c).sum();
    low.push((m.checked_sub(used)?, Q::zero()));

    let mut runs: Vec<FreeRun> = s0
        .into_iter()
        .map(|(count, start)| FreeRun {
            count,
            start,
            end: top.clone(),
        })
        .collect();
    // lay S2 jobs over the low columns in order, splitting runs where needed
    let mut low = low.into_iter().filter(|r| r.0 > 0);
    let mut cur = low.next();
    for (mut need, end) in s2 {
        while need > 0 {
            let (count, start) = cur.as_mut()?;
            let take = need.min(*count);
            runs.push(FreeRun {
                count: take,
                start: start.clone(),
                end: end.clone(),
            });
            need -= take;
            *count -= take;
            if *count == 0 {
                cur = low.next();
            }
        }
    }
    runs.extend(cur.into_iter().chain(low).map(|(count, start)| FreeRun {
        count,
        start,
        end: top.clone(),
    }));
    runs.retain(|r| r.count > 0 && r.start < r.end);
    Some((placed, runs))
}

/// Next-fit: each small job goes on the current processor column if it still
/// fits before the run's end, otherwise on the next column.
///
/// Returns `(job, start)` pairs, or `None` when the columns run out. Every
/// column that is left behind is busy for more than `end - max time`.
pub fn insert_small_jobs(
    inst: &Instance,
    small: &[usize],
    runs: &[FreeRun],
) -> Option<Vec<(usize, Q)>> {
    let mut out = Vec::with_capacity(small.len());
    let mut ri = 0;
    let mut used = 0;
    let mut pos: Option<Q> = None;
    for &j in small {
        let t = inst.job(j).time(1);
        loop {
            let run = runs.get(ri)?;
            let p = pos.get_or_insert_with(|| run.start.clone());
            if &*p + &t <= run.end {
                out.push((j, p.clone()));
                *p += &t;
                break;
            }
            pos = None;
            used += 1;
            if used == run.count {
                ri += 1;
                used = 0;
            }
        }
    }
    Some(out)
}

/// Assembles the final schedule from big-job placements and small-job starts.
pub fn assemble(n: usize, big: Vec<(usize, Placement)>, small: Vec<(usize, Q)>) -> Schedule {
    let mut entries: Vec<Option<Placement>> = alloc::vec![None; n];
    for (j, p) in big {
        entries[j] = Some(p);
    }
    for (j, start) in small {
        entries[j] = Some(Placement { start, procs: 1 });
    }
    Schedule {
        entries: entries
            .into_iter()
            .map(|e| e.expect("every job is placed once"))
            .collect(),
    }
}
