//! Trace-driven simulator for a set-chunked, domain-isolating last-level
//! cache, with shared and way-partitioned baselines.

pub mod analysis;
pub mod baseline;
pub mod cache;
pub mod config;
pub mod controller;
pub mod domain;
pub mod error;
pub mod hierarchy;
pub mod llc;
pub mod security;
pub mod sim;
pub mod types;
pub mod workload;

pub use cache::{CacheArray, CacheGeometry, ReplacementPolicy};
pub use config::RunConfig;
pub use controller::{ChunkedLlc, ControllerConfig};
pub use domain::{DomainConfig, DomainManager, Region};
pub use error::{Error, Result};
pub use hierarchy::{Hierarchy, HierarchyConfig};
pub use llc::{Llc, LlcModel};
pub use sim::{simulate, SimConfig, Simulation};
pub use types::{AccessKind, AccessRequest, DomainId, FlushStats, IsolationMode};
pub use workload::{parse_scenario, serialize_scenario, ScenarioEvent};
