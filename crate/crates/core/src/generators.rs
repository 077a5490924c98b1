//! Instance factories: the 4-Partition reduction and seeded random monotone jobs.

use alloc::format;
use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::model::{Instance, Job};
use crate::rational::{uint, Q};

/// Outcome of the 4-Partition reduction.
#[derive(Clone, Debug, PartialEq)]
pub enum FourPartition {
    /// Scheduling instance together with the target makespan `n * B`.
    Instance { instance: Instance, target: Q },
    /// The numbers do not sum to `n * B`, so the answer is trivially "no".
    NoInstance,
}

/// Builds one job `time(k) = n * a_i - k + 1` per number on `n` processors,
/// where `numbers` holds `4n` values.
///
/// A schedule of makespan `n * B` exists iff the numbers split into `n`
/// quadruples summing to `B` each.
pub fn gen_four_partition(numbers: &[u64], b: u64) -> Result<FourPartition> {
    if numbers.is_empty() || !numbers.len().is_multiple_of(4) {
        return Err(Error::Precondition(format!(
            "expected 4n numbers, got {}",
            numbers.len()
        )));
    }
    for &a in numbers {
        if a < 2 {
            return Err(Error::Precondition(format!(
                "number {a} must be at least 2; scale the input"
            )));
        }
        if 5 * a as u128 <= b as u128 || 3 * a as u128 >= b as u128 {
            return Err(Error::Precondition(format!(
                "number {a} not strictly between B/5 and B/3 for B={b}"
            )));
        }
    }
    let n = (numbers.len() / 4) as u64;
    let sum: u128 = numbers.iter().map(|&a| a as u128).sum();
    if sum != n as u128 * b as u128 {
        return Ok(FourPartition::NoInstance);
    }
    let jobs = numbers
        .iter()
        .enumerate()
        .map(|(i, &a)| Job::reduction(format!("a{i}"), a, n))
        .collect();
    Ok(FourPartition::Instance {
        instance: Instance::new(jobs, n)?,
        target: uint(n) * uint(b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `time(k) ~ t1 * k^-theta`, `theta ~ U[0, 1]`.
    PowerLaw,
    /// Linear speedup up to `cap ~ U{1..m}` processors.
    Capped,
    /// Explicit tables, sampled non-increasing and repaired to monotone work.
    Table,
    /// Each job draws one of the three families above.
    Mixed,
}

/// Largest machine count for which explicit tables are generated.
pub const MAX_TABLE_PROCS: u64 = 1 << 16;

/// Reproducible random instance of `n` monotone jobs on `m` processors.
pub fn gen_random_monotone(n: usize, m: u64, family: Family, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition(
            "need at least one job and one processor".into(),
        ));
    }
    if m > MAX_TABLE_PROCS && matches!(family, Family::Table | Family::Mixed) {
        return Err(Error::TooLarge(format!(
            "explicit tables need m <= {MAX_TABLE_PROCS}"
        )));
    }
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut jobs = Vec::with_capacity(n);
    for j in 0..n {
        let fam = match family {
            Family::Mixed => [Family::PowerLaw, Family::Capped, Family::Table][rng.gen_range(0..3)],
            f => f,
        };
        let id = format!("j{j}");
        let t1 = uint(rng.gen_range(1..=100));
        jobs.push(match fam {
            Family::PowerLaw => Job::power_law(id, t1, rng.gen_range(0.0..=1.0))?,
            Family::Capped => Job::capped(id, t1, rng.gen_range(1..=m)),
            _ => Job::table(id, random_table(&mut rng, m)),
        });
    }
    Instance::new(jobs, m)
}

fn random_table(rng: &mut SmallRng, m: u64) -> Vec<Q> {
    let mut raw: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=100)).collect();
    raw.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<Q> = Vec::with_capacity(m as usize);
    for (i, t) in raw.into_iter().enumerate() {
        let mut t = uint(t);
        if let Some(prev) = out.last() {
            // raise minimally so that k * t >= (k - 1) * prev
            let k = i as u64 + 1;
            let floor = prev * uint(k - 1) / uint(k);
            if t < floor {
                t = floor;
            }
        }
        out.push(t);
    }
    out
}
