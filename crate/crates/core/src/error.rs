use alloc::string::String;
use core::fmt;

use crate::rational::Q;

/// Why an explicit processing-time table is not a monotone job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotonyViolation {
    /// `time(k) <= 0`.
    NonPositive { k: u64 },
    /// `time(k) > time(k - 1)`.
    TimeIncreases { k: u64 },
    /// `k * time(k) < (k - 1) * time(k - 1)`.
    WorkDecreases { k: u64 },
    /// The table does not have one entry per processor count.
    WrongLength { expected: u64, actual: u64 },
}

impl MonotonyViolation {
    pub fn k(&self) -> Option<u64> {
        match *self {
            MonotonyViolation::NonPositive { k }
            | MonotonyViolation::TimeIncreases { k }
            | MonotonyViolation::WorkDecreases { k } => Some(k),
            MonotonyViolation::WrongLength { .. } => None,
        }
    }
}

impl fmt::Display for MonotonyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotonyViolation::NonPositive { k } => {
                write!(f, "processing time at k={k} is not positive")
            }
            MonotonyViolation::TimeIncreases { k } => {
                write!(f, "processing time increases at k={k}")
            }
            MonotonyViolation::WorkDecreases { k } => write!(f, "work decreases at k={k}"),
            MonotonyViolation::WrongLength { expected, actual } => {
                write!(f, "table has {actual} entries, expected {expected}")
            }
        }
    }
}

/// Why a schedule is not feasible for its instance.
#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleViolation {
    WrongJobCount { expected: usize, actual: usize },
    BadProcessorCount { job: usize, procs: u64 },
    NegativeStart { job: usize },
    Overload { time: Q, demand: u64 },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleViolation::WrongJobCount { expected, actual } => {
                write!(f, "schedule has {actual} entries for {expected} jobs")
            }
            ScheduleViolation::BadProcessorCount { job, procs } => {
                write!(f, "job #{job} uses {procs} processors")
            }
            ScheduleViolation::NegativeStart { job } => write!(f, "job #{job} starts before 0"),
            ScheduleViolation::Overload { time, demand } => {
                write!(f, "{demand} processors in use at time {time}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    ProcessorRange {
        k: u64,
        m: u64,
    },
    Precondition(String),
    InvalidInstance(String),
    NotMonotone {
        job: usize,
        violation: MonotonyViolation,
    },
    InvalidSchedule(ScheduleViolation),
    /// A dual algorithm rejected a target it is guaranteed to accept.
    ContractViolation(String),
    TooLarge(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ProcessorRange { k, m } => write!(f, "processor count {k} outside 1..={m}"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::InvalidInstance(s) => write!(f, "invalid instance: {s}"),
            Error::NotMonotone { job, violation } => {
                write!(f, "job #{job} is not monotone: {violation}")
            }
            Error::InvalidSchedule(v) => write!(f, "invalid schedule: {v}"),
            Error::ContractViolation(s) => write!(f, "dual contract violated: {s}"),
            Error::TooLarge(s) => write!(f, "instance too large: {s}"),
        }
    }
}

impl From<ScheduleViolation> for Error {
    fn from(v: ScheduleViolation) -> Self {
        Error::InvalidSchedule(v)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
