//! `moldsched`: validate, estimate, solve and benchmark moldable scheduling instances.

mod bench;
mod io;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moldsched_core::estimator::{estimate, Approximation};
use moldsched_core::fptas::solve_fptas;
use moldsched_core::generators::{gen_four_partition, gen_random_monotone, Family, FourPartition};
use moldsched_core::oracle::opt_makespan;
use moldsched_core::rational::{parse, to_f64};
use moldsched_core::shelf::{solve_auto, solve_mrt, Variant};
use moldsched_core::{validate_schedule, Error, Instance, Q};

/// Error shown to the user, with the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ContractViolation(_)) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "moldsched",
    version,
    about = "Makespan scheduling of monotone moldable jobs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Fptas,
    MrtSimple,
    MrtBounded,
    MrtLinear,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Fptas => "fptas",
            Algo::MrtSimple => "mrt-simple",
            Algo::MrtBounded => "mrt-bounded",
            Algo::MrtLinear => "mrt-linear",
        }
    }

    pub fn run(self, inst: &Instance, eps: &Q) -> Result<Approximation, Error> {
        match self {
            Algo::Auto => solve_auto(inst, eps),
            Algo::Fptas => solve_fptas(inst, eps),
            Algo::MrtSimple => solve_mrt(inst, eps, Variant::Simple),
            Algo::MrtBounded => solve_mrt(inst, eps, Variant::Bounded),
            Algo::MrtLinear => solve_mrt(inst, eps, Variant::Linear),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Power,
    Capped,
    Table,
    Mixed,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Power => Family::PowerLaw,
            FamilyArg::Capped => Family::Capped,
            FamilyArg::Table => Family::Table,
            FamilyArg::Mixed => Family::Mixed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file, and optionally a schedule for it.
    Validate {
        instance: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Print the estimate omega (omega <= OPT <= 2 omega) and its allotment.
    Estimate { instance: PathBuf },
    /// Approximate a minimum-makespan schedule.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        eps: Q,
        /// Write the schedule here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum by exhaustive search (small instances only).
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a solver over a generated suite and print CSV.
    Bench(bench::BenchArgs),
    #[command(name = "kpc-selftest", hide = true)]
    KpcSelftest {
        #[arg(long, default_value_t = 1000)]
        count: u32,
        #[arg(long, env = "MOLDSCHED_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Jobs of the 4-Partition reduction; feasible at makespan n*B iff the numbers split evenly.
    Fourpartition {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        numbers: Vec<u64>,
        #[arg(long = "B", alias = "b")]
        b: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random monotone jobs.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value = "mixed")]
        family: FamilyArg,
        #[arg(long, env = "MOLDSCHED_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> Result<Q, String> {
    parse(s).ok_or_else(|| format!("not a rational number: {s}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    io::parse_instance(&read(path)?)
}

fn emit(json: &serde_json::Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(json).expect("JSON values serialize");
    match out {
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::input(format!("cannot write output: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Command::Validate { instance, schedule } => {
            let inst = load(&instance)?;
            println!("ok: {} jobs on {} processors", inst.n(), inst.m());
            if let Some(path) = schedule {
                let s = io::parse_schedule(&inst, &read(&path)?)?;
                let mk = validate_schedule(&s, &inst)
                    .map_err(|v| Failure::input(format!("infeasible schedule: {v}")))?;
                println!("makespan={mk}");
            }
        }
        Command::Estimate { instance } => {
            let inst = load(&instance)?;
            let est = estimate(&inst);
            let allot: serde_json::Map<String, serde_json::Value> = inst
                .jobs()
                .iter()
                .zip(&est.allotment.0)
                .map(|(j, &k)| (j.id.clone(), k.into()))
                .collect();
            println!("omega={}", est.omega);
            emit(&allot.into(), None)?;
        }
        Command::Solve {
            instance,
            algo,
            eps,
            out,
        } => {
            let inst = load(&instance)?;
            let res = algo.run(&inst, &eps)?;
            emit(&io::schedule_json(&inst, &res.schedule), out.as_deref())?;
            let ratio = &res.makespan / &res.lower_bound;
            let line = format!(
                "makespan={} lower_bound={} ratio_vs_lb={:.6} probes={}",
                res.makespan,
                res.lower_bound,
                to_f64(&ratio),
                res.probes
            );
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
        }
        Command::Oracle { instance, out } => {
            let inst = load(&instance)?;
            let (opt, s) = opt_makespan(&inst)?;
            emit(&io::schedule_json(&inst, &s), out.as_deref())?;
            if out.is_some() {
                println!("opt={opt}");
            } else {
                eprintln!("opt={opt}");
            }
        }
        Command::Gen { kind } => match kind {
            GenKind::Fourpartition { numbers, b, out } => match gen_four_partition(&numbers, b)? {
                FourPartition::Instance { instance, target } => {
                    emit(&io::instance_json(&instance), out.as_deref())?;
                    eprintln!("target={target}");
                }
                FourPartition::NoInstance => {
                    println!(
                        "no-instance: the numbers do not sum to {}",
                        numbers.len() as u128 / 4 * b as u128
                    );
                }
            },
            GenKind::Random {
                n,
                m,
                family,
                seed,
                out,
            } => {
                let inst = gen_random_monotone(n, m, family.into(), seed)?;
                emit(&io::instance_json(&inst), out.as_deref())?;
            }
        },
        Command::Bench(args) => bench::run(&args)?,
        Command::KpcSelftest { count, seed } => bench::kpc_selftest(count, seed)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
