//! Scheduling monotone moldable jobs on identical processors to minimize the makespan.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod estimator;
pub mod fptas;
pub mod generators;
pub mod knapsack;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod shelf;

pub use error::{Error, MonotonyViolation, Result, ScheduleViolation};
pub use model::{
    compress_count, list_schedule, validate_schedule, Allotment, Instance, Job, Oracle, Placement,
    PowerLaw, Schedule,
};
pub use rational::Q;
