//! Instance and schedule files. Rationals travel as `"p/q"` strings; plain
//! integers and decimals are accepted on input.

use std::collections::{BTreeMap, HashSet};

use moldsched_core::rational::parse;
use moldsched_core::{Error, Instance, Job, MonotonyViolation, Oracle, Placement, Schedule, Q};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OracleFile {
    Table { times: Vec<Value> },
    Power { t1: Value, theta: f64 },
    Capped { t1: Value, cap: u64 },
    Reduction { a: u64, m: u64 },
}

#[derive(Serialize, Deserialize)]
pub struct JobFile {
    pub id: String,
    pub oracle: OracleFile,
}

#[derive(Serialize, Deserialize)]
pub struct InstanceFile {
    pub m: u64,
    pub jobs: Vec<JobFile>,
}

#[derive(Serialize, Deserialize)]
pub struct PlacementFile {
    pub start: String,
    pub procs: u64,
}

pub fn rational(v: &Value) -> Result<Q, Failure> {
    let parsed = match v {
        Value::String(s) => parse(s),
        Value::Number(n) => parse(&n.to_string()),
        _ => None,
    };
    parsed.ok_or_else(|| Failure::input(format!("expected a rational like \"7/2\", got {v}")))
}

pub fn show(q: &Q) -> String {
    q.to_string()
}

fn repair_hint(v: &MonotonyViolation) -> &'static str {
    match v {
        MonotonyViolation::NonPositive { .. } => "all times must be positive",
        MonotonyViolation::TimeIncreases { .. } => "make time(k) at most time(k-1)",
        MonotonyViolation::WorkDecreases { .. } => "raise time(k) to at least (k-1)/k * time(k-1)",
        MonotonyViolation::WrongLength { .. } => "give exactly one time per processor count 1..=m",
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, Failure> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Failure::input(format!("malformed instance JSON: {e}")))?;
    let mut seen = HashSet::new();
    let mut jobs = Vec::with_capacity(file.jobs.len());
    for jf in file.jobs {
        if !seen.insert(jf.id.clone()) {
            return Err(Failure::input(format!("duplicate job id {:?}", jf.id)));
        }
        let oracle = match jf.oracle {
            OracleFile::Table { times } => {
                Oracle::Table(times.iter().map(rational).collect::<Result<_, _>>()?)
            }
            OracleFile::Power { t1, theta } => Job::power_law("", rational(&t1)?, theta)?.oracle,
            OracleFile::Capped { t1, cap } => Oracle::Capped {
                t1: rational(&t1)?,
                cap,
            },
            OracleFile::Reduction { a, m } => Oracle::Reduction { a, m },
        };
        jobs.push(Job::new(jf.id, oracle));
    }
    Instance::new(jobs.clone(), file.m).map_err(|e| match e {
        Error::NotMonotone { job, violation } => Failure::input(format!(
            "job {:?} is not monotone: {violation} (hint: {})",
            jobs[job].id,
            repair_hint(&violation)
        )),
        e => e.into(),
    })
}

pub fn instance_json(inst: &Instance) -> Value {
    let jobs = inst
        .jobs()
        .iter()
        .map(|j| JobFile {
            id: j.id.clone(),
            oracle: match &j.oracle {
                Oracle::Table(ts) => OracleFile::Table {
                    times: ts.iter().map(|t| Value::String(show(t))).collect(),
                },
                Oracle::PowerLaw(p) => OracleFile::Power {
                    t1: Value::String(show(p.t1())),
                    theta: p.theta(),
                },
                Oracle::Capped { t1, cap } => OracleFile::Capped {
                    t1: Value::String(show(t1)),
                    cap: *cap,
                },
                Oracle::Reduction { a, m } => OracleFile::Reduction { a: *a, m: *m },
            },
        })
        .collect();
    serde_json::to_value(InstanceFile { m: inst.m(), jobs }).expect("plain data serializes")
}

/// `{job id: {start, procs}}`.
pub fn schedule_json(inst: &Instance, s: &Schedule) -> Value {
    let map: BTreeMap<&str, PlacementFile> = inst
        .jobs()
        .iter()
        .zip(&s.entries)
        .map(|(j, p)| {
            (
                j.id.as_str(),
                PlacementFile {
                    start: show(&p.start),
                    procs: p.procs,
                },
            )
        })
        .collect();
    serde_json::to_value(map).expect("plain data serializes")
}

pub fn parse_schedule(inst: &Instance, text: &str) -> Result<Schedule, Failure> {
    let map: BTreeMap<String, PlacementFile> = serde_json::from_str(text)
        .map_err(|e| Failure::input(format!("malformed schedule JSON: {e}")))?;
    let mut entries = Vec::with_capacity(inst.n());
    for j in inst.jobs() {
        let p = map
            .get(&j.id)
            .ok_or_else(|| Failure::input(format!("schedule has no entry for job {:?}", j.id)))?;
        let start = parse(&p.start)
            .ok_or_else(|| Failure::input(format!("bad start time {:?}", p.start)))?;
        entries.push(Placement {
            start,
            procs: p.procs,
        });
    }
    if map.len() != inst.n() {
        return Err(Failure::input(
            "schedule names jobs that are not in the instance",
        ));
    }
    Ok(Schedule { entries })
}
