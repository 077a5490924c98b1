//! `bench` (CSV over generated suites) and the hidden knapsack self-test.

use std::time::Instant;

use clap::{Args, ValueEnum};
use moldsched_core::generators::{gen_random_monotone, Family};
use moldsched_core::knapsack::{compressed_size, kp_exact, kpc_solve, KpItem, KpcParams};
use moldsched_core::rational::{ratio, to_f64, uint};
use moldsched_core::{Instance, Q};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::{rational_arg, Algo, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Power-law jobs on 2^40 processors for growing n.
    Scaling,
    /// Random instances with n <= 6 and m <= 8.
    Small,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "small")]
    suite: Suite,
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    #[arg(long, default_value = "3/10", value_parser = rational_arg)]
    eps: Q,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, env = "MOLDSCHED_SEED", default_value_t = 0)]
    seed: u64,
    /// Job counts for the scaling suite.
    #[arg(long, value_delimiter = ',', default_values_t = [250usize, 500, 1000, 2000])]
    sizes: Vec<usize>,
    /// Number of instances in the small suite.
    #[arg(long, default_value_t = 50)]
    count: u64,
}

pub const HEADER: &str =
    "n,m,eps,algo,makespan,lower_bound,ratio_vs_lb,wall_time,makespan_exact,lower_bound_exact";

/// `x` with 12 significant digits.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (11 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.digits$}")
}

fn suite(args: &BenchArgs) -> Result<Vec<Instance>, Failure> {
    let out: Result<Vec<_>, _> = match args.suite {
        Suite::Scaling => args
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| gen_random_monotone(n, 1 << 40, Family::PowerLaw, args.seed + i as u64))
            .collect(),
        Suite::Small => (0..args.count)
            .map(|i| {
                gen_random_monotone(
                    1 + (i % 6) as usize,
                    1 + (i / 6) % 8,
                    Family::Mixed,
                    args.seed + i,
                )
            })
            .collect(),
    };
    Ok(out?)
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let instances = suite(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| Failure::input(format!("cannot start {} threads: {e}", args.threads)))?;
    let rows: Vec<Result<String, Failure>> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| {
                let start = Instant::now();
                let res = args.algo.run(inst, &args.eps)?;
                let wall = start.elapsed().as_secs_f64();
                let r = &res.makespan / &res.lower_bound;
                Ok(format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    inst.n(),
                    inst.m(),
                    decimal(to_f64(&args.eps)),
                    args.algo.name(),
                    decimal(to_f64(&res.makespan)),
                    decimal(to_f64(&res.lower_bound)),
                    decimal(to_f64(&r)),
                    decimal(wall),
                    res.makespan,
                    res.lower_bound
                ))
            })
            .collect()
    });
    println!("{HEADER}");
    for row in rows {
        println!("{}", row?);
    }
    Ok(())
}

/// Random knapsack instances with compressible items, checked against the exact optimum.
pub fn kpc_selftest(count: u32, seed: u64) -> Result<(), Failure> {
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut bad = 0;
    for t in 0..count {
        let n = rng.gen_range(0..=12);
        let items: Vec<KpItem> = (0..n)
            .map(|id| {
                let size = uint(rng.gen_range(1..=60));
                let profit = uint(rng.gen_range(0..=60));
                if rng.gen_bool(0.5) {
                    KpItem::compressible(id, size, profit)
                } else {
                    KpItem::new(id, size, profit)
                }
            })
            .collect();
        let cap = uint(rng.gen_range(0..=200));
        let rho = ratio(1, rng.gen_range(4..=40));
        let params = KpcParams::for_items(&items, cap.clone(), rho);
        let sol = kpc_solve(&items, &params)?;
        let opt = kp_exact(&items, &cap).profit;
        let fit = compressed_size(&items, &sol.chosen, &params.rho_prime());
        if sol.profit < opt || fit > cap {
            bad += 1;
            eprintln!(
                "case {t}: profit {} (optimum {opt}), compressed size {fit} > {cap}?",
                sol.profit
            );
        }
    }
    println!("kpc-selftest: {count} cases, {bad} violations");
    if bad > 0 {
        return Err(Failure {
            code: 2,
            message: format!("{bad} knapsack contract violations"),
        });
    }
    Ok(())
}
