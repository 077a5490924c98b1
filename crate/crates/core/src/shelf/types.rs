//! Grouping big jobs into few knapsack item types by rounding sizes and profits.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::knapsack::{round_down, ItemType};
use crate::model::Instance;
use crate::rational::{floor_dyadic, floor_u64, ratio, uint, Q};

/// Increasing grid from 1 up to at least `hi`, with consecutive ratios at
/// most `x`; entries are dyadic so that powers of `x` do not blow up.
pub fn ladder(hi: &Q, x: &Q) -> Vec<Q> {
    let mut out = alloc::vec![Q::one()];
    let mut v = Q::one();
    while v < *hi {
        let next = floor_dyadic(&(&v * x), 40);
        v = if next > v { next } else { &v * x };
        out.push(v.clone());
    }
    out
}

/// Integer processor counts `b, ..` up to at least `hi`, consecutive ratios at most `1 + rho`.
pub fn count_grid(b: u64, hi: u64, rho: &Q) -> Vec<u64> {
    let mut out = alloc::vec![b];
    let mut g = b;
    while g < hi {
        g = floor_u64(&(uint(g) * (Q::one() + rho))).max(g + 1);
        out.push(g);
    }
    out
}

/// Rounding parameters for one target `d`.
#[derive(Clone, Debug)]
pub struct Rounding {
    /// Counts from `b` on are rounded down by at most `1 + rho`.
    pub rho: Q,
    pub b: u64,
    pub delta: Q,
    /// Unit-free time grid: ratio `1 + 4 rho` on `[1, 2]`.
    time_steps: Vec<Q>,
}

impl Rounding {
    pub fn new(rho: Q, b: u64, delta: Q) -> Self {
        let time_steps = ladder(&Q::from_integer(2.into()), &(Q::one() + &rho * uint(4)));
        Rounding {
            rho,
            b,
            delta,
            time_steps,
        }
    }
}

/// Big jobs grouped into item types; `members[t]` lists the jobs of `types[t]`
/// in increasing order.
#[derive(Clone, Debug, Default)]
pub struct ItemTypeTable {
    pub types: Vec<ItemType>,
    pub members: Vec<Vec<usize>>,
}

impl ItemTypeTable {
    /// Rounds every job of `jobs` (big at `d`, with `gamma(d / 2)` defined).
    ///
    /// Sizes are `gamma(d)`, rounded down on the count grid once they reach `b`
    /// (those items are compressible). Profits approximate
    /// `work(gamma(d / 2)) - work(gamma(d))` from below: jobs narrower than `b`
    /// in the lower shelf are rounded down to multiples of `delta d / 2`; the others use rounded
    /// works that are within `(1 + 4 rho)(1 + rho)` of the true ones.
    pub fn build(inst: &Instance, jobs: &[usize], d: &Q, r: &Rounding) -> Self {
        let m = inst.m();
        let half = d * ratio(1, 2);
        let counts = count_grid(r.b, m, &r.rho);
        let round_count = |k: u64| -> u64 {
            if k < r.b {
                k
            } else {
                let pos = counts.partition_point(|&g| g <= k);
                counts[pos - 1]
            }
        };
        let time_steps = &r.time_steps;
        // time(k) in (s/2, s] rounded down to a (1 + 4 rho)-grid
        let round_time = |t: Q, s: &Q| -> Q {
            let unit = s * ratio(1, 2);
            round_down(&(t / &unit), time_steps).expect("time above s/2") * unit
        };
        let unit = &r.delta * d * ratio(1, 2);

        let mut index: BTreeMap<(bool, Q, Q), usize> = BTreeMap::new();
        let mut table = ItemTypeTable::default();
        for &j in jobs {
            let job = inst.job(j);
            let g = job.gamma(d, m).expect("big job fits in d");
            let g2 = job.gamma(&half, m).expect("non-forced job fits in d/2");
            let compressible = g >= r.b;
            let size = uint(round_count(g));
            let profit = if g2 < r.b {
                // below b * d / 2, so at most b / delta distinct values
                ((job.work(g2) - job.work(g)) / &unit).floor() * &unit
            } else {
                let upper = round_time(job.time(g2), &half) * uint(round_count(g2));
                let lower = round_time(job.time(g), d) * &size;
                if upper > lower {
                    upper - lower
                } else {
                    Q::zero()
                }
            };
            let key = (compressible, size, profit);
            let t = *index.entry(key.clone()).or_insert_with(|| {
                table.types.push(ItemType {
                    size: key.1,
                    profit: key.2,
                    count: 0,
                    compressible,
                });
                table.members.push(Vec::new());
                table.types.len() - 1
            });
            table.types[t].count += 1;
            table.members[t].push(j);
        }
        table
    }

    /// Number of compressible and incompressible types.
    pub fn type_counts(&self) -> (usize, usize) {
        let c = self.types.iter().filter(|t| t.compressible).count();
        (c, self.types.len() - c)
    }
}
