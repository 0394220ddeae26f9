//! Differential non-interference check over two replay logs.

use std::fmt;

use crate::hierarchy::{AccessOutcome, ServedBy};
use crate::sim::AccessRecord;
use crate::types::DomainId;

/// What a domain can observe about one of its own accesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observation {
    pub served_by: ServedBy,
    pub llc_hit: Option<bool>,
    pub sid: Option<usize>,
    pub cycles: u64,
}

impl Observation {
    pub fn of(outcome: &AccessOutcome) -> Self {
        Self {
            served_by: outcome.served_by,
            llc_hit: outcome.llc.map(|o| o.hit),
            sid: outcome.llc.map(|o| o.sid),
            cycles: outcome.cycles,
        }
    }
}

/// The subject's observations, in order.
pub fn project(log: &[AccessRecord], subject: DomainId) -> Vec<Observation> {
    log.iter().filter(|r| r.request.did == subject).map(|r| Observation::of(&r.outcome)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// First position in the subject's projected sequence where the runs
    /// differ; `None` on one side means that run ended early.
    Fail { index: usize, with: Option<Observation>, without: Option<Observation> },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail { index, with, without } => {
                let show = |o: &Option<Observation>| match o {
                    Some(o) => format!("{:?}/{} cycles", o.served_by, o.cycles),
                    None => "end of log".to_string(),
                };
                write!(f, "FAIL at access {index}: {} with the other domain, {} without", show(with), show(without))
            }
        }
    }
}

pub fn compare_observations(with: &[Observation], without: &[Observation]) -> Verdict {
    let n = with.len().max(without.len());
    for index in 0..n {
        let (a, b) = (with.get(index).copied(), without.get(index).copied());
        if a != b {
            return Verdict::Fail { index, with: a, without: b };
        }
    }
    Verdict::Pass
}

/// PASS iff `subject` observed exactly the same outcomes in both logs.
pub fn noninterference_verdict(log_with: &[AccessRecord], log_without: &[AccessRecord], subject: DomainId) -> Verdict {
    compare_observations(&project(log_with, subject), &project(log_without, subject))
}
