//! Statistics, cost models and report output.

pub mod latency;
pub mod overhead;
pub mod report;
pub mod stats;
pub mod verdict;
