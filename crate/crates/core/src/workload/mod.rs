//! Scenario files, synthetic generators and attack builders.

pub mod attack;
pub mod gen;
pub mod scenario;

pub use gen::{gen, WorkloadKind, WorkloadSpec};
pub use scenario::{parse_scenario, serialize_scenario, ScenarioEvent};
