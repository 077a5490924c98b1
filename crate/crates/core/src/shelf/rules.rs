//! Transformation rules that fold an overfull two-shelf assignment into
//! three regions: `S0` (whole height `3/2 d`), `S1` (height `d`, from 0) and
//! `S2` (height `d/2`, ending at `3/2 d`).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::knapsack::{geom, round_down};
use crate::model::Instance;
use crate::rational::{ratio, Q};

/// Where a big job ends up after the rules.
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    /// Alone in `S0` on `procs` processors, starting at 0.
    S0 {
        job: usize,
        procs: u64,
    },
    /// Two single-processor jobs run back to back on one `S0` processor.
    Pair {
        lower: usize,
        upper: usize,
    },
    /// `upper` (one processor) starts on one of `lower`'s processors when
    /// `lower` ends; that processor counts towards `S0`, the others towards `S1`.
    Stack {
        lower: usize,
        lower_procs: u64,
        upper: usize,
    },
    S1 {
        job: usize,
        procs: u64,
    },
    S2 {
        job: usize,
        procs: u64,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShelfAssignment {
    pub slots: Vec<Slot>,
    /// Processors busy in `S0`, in `S1` and in `S2`.
    pub p0: u64,
    pub p1: u64,
    pub p2: u64,
    /// Number of allotment changes per job (at most two).
    pub changes: BTreeMap<usize, u32>,
}

impl ShelfAssignment {
    /// Processors needed: `S0` shares `[0, d)` with `S1` and `[d, 3/2 d)` with `S2`.
    pub fn width(&self) -> u64 {
        self.p0 + self.p1.max(self.p2)
    }

    /// Total work of the assigned big jobs.
    pub fn work(&self, inst: &Instance) -> Q {
        let mut w = Q::default();
        for slot in &self.slots {
            match *slot {
                Slot::S0 { job, procs } | Slot::S1 { job, procs } | Slot::S2 { job, procs } => {
                    w += inst.job(job).work(procs)
                }
                Slot::Pair { lower, upper } => {
                    w += inst.job(lower).work(1) + inst.job(upper).work(1)
                }
                Slot::Stack {
                    lower,
                    lower_procs,
                    upper,
                } => w += inst.job(lower).work(lower_procs) + inst.job(upper).work(1),
            }
        }
        w
    }
}

/// How the rules pick the `S1` job to stack a leftover single-processor job on.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleMode {
    /// Shortest job, exactly.
    Exact,
    /// Shortest bucket of a `(1 + delta)`-geometric rounding; the stack may
    /// then end up to `delta * d` after `3/2 d`.
    Bucketed(Q),
}

struct State<'a> {
    inst: &'a Instance,
    d: Q,
    out: ShelfAssignment,
    /// `S1` jobs taller than `3/4 d`, keyed for stacking.
    tall: BTreeMap<(Q, usize), u64>,
    lone: Option<usize>,
    mode: RuleMode,
    grid: Vec<Q>,
}

impl State<'_> {
    fn bump(&mut self, job: usize) {
        *self.out.changes.entry(job).or_insert(0) += 1;
    }

    fn key(&self, t: Q) -> Q {
        match self.mode {
            RuleMode::Exact => t,
            RuleMode::Bucketed(_) => round_down(&t, &self.grid).cloned().unwrap_or(t),
        }
    }

    /// Places a job in `S1`, applying rules 1 and 2 when they fit.
    fn add_s1(&mut self, job: usize, procs: u64) {
        let t = self.inst.job(job).time(procs);
        if t * ratio(4, 3) > self.d {
            let key = self.key(self.inst.job(job).time(procs));
            self.tall.insert((key, job), procs);
            self.out.p1 += procs;
        } else if procs > 1 {
            // rule 1: one processor less keeps it within 3/2 d
            self.bump(job);
            self.out.slots.push(Slot::S0 {
                job,
                procs: procs - 1,
            });
            self.out.p0 += procs - 1;
        } else if let Some(lower) = self.lone.take() {
            // rule 2: two short single-processor jobs share one processor
            self.out.slots.push(Slot::Pair { lower, upper: job });
            self.out.p1 -= 1;
            self.out.p0 += 1;
        } else {
            self.lone = Some(job);
            self.out.p1 += 1;
        }
    }

    /// Stacks the leftover short job on the shortest tall `S1` job if both fit in `3/2 d`.
    fn stack_lone(&mut self) -> bool {
        let Some(upper) = self.lone else {
            return false;
        };
        let Some(((key, lower), &lower_procs)) = self.tall.iter().next() else {
            return false;
        };
        if key + self.inst.job(upper).time(1) > &self.d * ratio(3, 2) {
            return false;
        }
        let (key, lower) = (key.clone(), *lower);
        self.tall.remove(&(key, lower));
        self.lone = None;
        self.out.slots.push(Slot::Stack {
            lower,
            lower_procs,
            upper,
        });
        // the upper job's processor is released; one of the lower job's moves to S0
        self.out.p1 -= 2;
        self.out.p0 += 1;
        true
    }
}

/// Applies the rules exhaustively to `s1` (jobs with time at most `d`) and
/// `s2` (jobs with time at most `d/2`), both given as `(job, procs)`.
///
/// Work never increases. When the two-shelf work is at most `m d` minus the
/// small jobs' work and `S1` alone fits into `m`, the result has width at most `m`.
pub fn apply_transformation_rules(
    inst: &Instance,
    s1: &[(usize, u64)],
    s2: &[(usize, u64)],
    m: u64,
    d: &Q,
    mode: RuleMode,
) -> ShelfAssignment {
    let grid = match &mode {
        RuleMode::Exact => Vec::new(),
        RuleMode::Bucketed(delta) => {
            geom(&(d * ratio(1, 2)), d, &(Q::from_integer(1.into()) + delta))
        }
    };
    let mut st = State {
        inst,
        d: d.clone(),
        out: ShelfAssignment::default(),
        tall: BTreeMap::new(),
        lone: None,
        mode,
        grid,
    };
    for &(job, procs) in s1 {
        st.add_s1(job, procs);
    }
    let wide = d * ratio(3, 2);
    // rule 3 candidates, cheapest first
    let mut pending: Vec<(u64, usize, u64)> = s2
        .iter()
        .map(|&(job, procs)| {
            let key = inst
                .job(job)
                .gamma(&wide, m)
                .expect("an S2 job fits in d/2, so in 3/2 d");
            (key, job, procs)
        })
        .collect();
    pending.sort_unstable();
    st.out.p2 = s2.iter().map(|&(_, p)| p).sum();
    let mut next = 0;
    loop {
        while let Some(&(key, job, procs)) = pending.get(next) {
            let free = m.saturating_sub(st.out.p0 + st.out.p1);
            if key > free {
                break;
            }
            next += 1;
            st.out.p2 -= procs;
            st.bump(job);
            if inst.job(job).time(key) > *d {
                st.out.slots.push(Slot::S0 { job, procs: key });
                st.out.p0 += key;
            } else {
                st.add_s1(job, key);
            }
        }
        if !st.stack_lone() {
            break;
        }
    }
    let tall = core::mem::take(&mut st.tall);
    st.out.slots.extend(
        tall.into_iter()
            .map(|((_, job), procs)| Slot::S1 { job, procs }),
    );
    if let Some(job) = st.lone {
        st.out.slots.push(Slot::S1 { job, procs: 1 });
    }
    st.out.slots.extend(
        pending[next..]
            .iter()
            .map(|&(_, job, procs)| Slot::S2 { job, procs }),
    );
    st.out
}
