//! Attack scenario builders for the security harness.
//!
//! Each builder emits a self-contained scenario: registration of both
//! parties, scheduling on their cores, then three phases separated by
//! barriers (`prime`, `victim`, `probe`). Congruent lines are computed with
//! the chunked model's index function: lines that agree modulo the LLC set
//! count land in the same column of every chunk and of the full cache.

use crate::domain::DomainConfig;
use crate::error::ConfigError;
use crate::types::{AccessKind, DomainId, IsolationMode};
use crate::workload::gen::{gen, WorkloadSpec};
use crate::workload::scenario::ScenarioEvent;

pub const PRIME: &str = "prime";
pub const VICTIM: &str = "victim";
pub const PROBE: &str = "probe";

/// One side of an attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub did: DomainId,
    pub core: usize,
    pub mode: IsolationMode,
    /// Chunk size for exclusive parties.
    pub sets: Option<usize>,
}

impl Party {
    pub fn exclusive(did: u16, core: usize, sets: usize) -> Self {
        Self { did: DomainId(did), core, mode: IsolationMode::Exclusive, sets: Some(sets) }
    }

    pub fn mainstream(did: u16, core: usize) -> Self {
        Self { did: DomainId(did), core, mode: IsolationMode::Mainstream, sets: None }
    }

    fn setup(&self, events: &mut Vec<ScenarioEvent>) {
        if !self.did.is_non_isolated() {
            events.push(ScenarioEvent::Register(DomainConfig {
                did: self.did,
                mode: self.mode,
                requested_sets: self.sets,
                shared_regions: vec![],
            }));
        }
    }
}

/// Parameters of a prime+probe round against one LLC column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeProbe {
    /// LLC set count; congruent lines are this many lines apart.
    pub num_sets: u64,
    /// Lines the attacker primes, normally the LLC associativity.
    pub prime_lines: u64,
    /// Column the attacker monitors.
    pub target_index: u64,
    /// Distinct congruent lines the victim touches.
    pub victim_lines: u64,
    pub line_size: u64,
}

fn register_and_schedule(attacker: &Party, victim: &Party) -> Vec<ScenarioEvent> {
    let mut events = Vec::new();
    attacker.setup(&mut events);
    victim.setup(&mut events);
    events.push(ScenarioEvent::Switch { core: attacker.core, did: attacker.did });
    events.push(ScenarioEvent::Switch { core: victim.core, did: victim.did });
    events
}

fn walk(events: &mut Vec<ScenarioEvent>, party: &Party, addrs: impl IntoIterator<Item = u64>) {
    for addr in addrs {
        events.push(ScenarioEvent::Access { core: party.core, did: party.did, kind: AccessKind::Read, addr });
    }
}

/// Attacker primes `prime_lines` congruent lines at `target_index`, the
/// victim touches `victim_lines` lines of the same column, the attacker
/// re-reads its lines in the same order.
pub fn build_prime_probe(attacker: &Party, victim: &Party, p: &PrimeProbe) -> Result<Vec<ScenarioEvent>, ConfigError> {
    if !p.num_sets.is_power_of_two() || p.target_index >= p.num_sets {
        return Err(ConfigError::Invalid(format!(
            "target index {} outside a {}-set cache",
            p.target_index, p.num_sets
        )));
    }
    if attacker.core == victim.core {
        return Err(ConfigError::Invalid("attacker and victim need separate cores".into()));
    }
    let line = |k: u64| (p.target_index + k * p.num_sets) * p.line_size;
    let mut events = register_and_schedule(attacker, victim);
    let attacker_lines: Vec<u64> = (0..p.prime_lines).map(line).collect();
    events.push(ScenarioEvent::barrier(PRIME));
    walk(&mut events, attacker, attacker_lines.iter().copied());
    events.push(ScenarioEvent::barrier(VICTIM));
    walk(&mut events, victim, (0..p.victim_lines).map(|k| line(p.prime_lines + 1 + k)));
    events.push(ScenarioEvent::barrier(PROBE));
    walk(&mut events, attacker, attacker_lines);
    Ok(events)
}

/// Attacker walks `attacker_lines` contiguous lines from `attacker_base`,
/// the victim runs `victim_spec`, the attacker walks its footprint again.
/// A victim spec of length zero gives the baseline.
pub fn build_occupancy_probe(
    attacker: &Party,
    victim: &Party,
    attacker_base: u64,
    attacker_lines: u64,
    line_size: u64,
    victim_spec: &WorkloadSpec,
) -> Result<Vec<ScenarioEvent>, ConfigError> {
    if attacker.core == victim.core {
        return Err(ConfigError::Invalid("attacker and victim need separate cores".into()));
    }
    let footprint: Vec<u64> = (0..attacker_lines).map(|l| attacker_base + l * line_size).collect();
    let mut events = register_and_schedule(attacker, victim);
    events.push(ScenarioEvent::barrier(PRIME));
    walk(&mut events, attacker, footprint.iter().copied());
    events.push(ScenarioEvent::barrier(VICTIM));
    events.extend(gen(victim_spec, victim.did, victim.core)?);
    events.push(ScenarioEvent::barrier(PROBE));
    walk(&mut events, attacker, footprint);
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::gen::WorkloadKind;

    #[test]
    fn prime_probe_layout() {
        let p = PrimeProbe { num_sets: 64, prime_lines: 4, target_index: 5, victim_lines: 1, line_size: 64 };
        let evs = build_prime_probe(&Party::exclusive(1, 0, 8), &Party::exclusive(2, 1, 8), &p).unwrap();
        let accesses: Vec<(DomainId, u64)> = evs
            .iter()
            .filter_map(|e| match e {
                ScenarioEvent::Access { did, addr, .. } => Some((*did, addr / 64)),
                _ => None,
            })
            .collect();
        assert_eq!(accesses.len(), 9);
        assert!(accesses.iter().all(|(_, l)| l % 64 == 5));
        assert_eq!(accesses[4], (DomainId(2), 5 + 5 * 64));
        assert_eq!(accesses[..4].iter().map(|a| a.1).collect::<Vec<_>>(), accesses[5..].iter().map(|a| a.1).collect::<Vec<_>>());
        let barriers = evs.iter().filter(|e| matches!(e, ScenarioEvent::Barrier { .. })).count();
        assert_eq!(barriers, 3);
    }

    #[test]
    fn rejects_shared_core_and_bad_index() {
        let p = PrimeProbe { num_sets: 64, prime_lines: 4, target_index: 64, victim_lines: 1, line_size: 64 };
        assert!(build_prime_probe(&Party::exclusive(1, 0, 8), &Party::exclusive(2, 1, 8), &p).is_err());
        let p = PrimeProbe { target_index: 3, ..p };
        assert!(build_prime_probe(&Party::exclusive(1, 0, 8), &Party::exclusive(2, 0, 8), &p).is_err());
    }

    #[test]
    fn occupancy_walks_footprint_twice() {
        let spec = WorkloadSpec::new(WorkloadKind::WorkingSet { footprint_lines: 10 }, 25, 1).with_base(1 << 20);
        let evs = build_occupancy_probe(&Party::exclusive(1, 0, 8), &Party::mainstream(2, 1), 0, 32, 64, &spec).unwrap();
        let attacker = evs.iter().filter(|e| e.access_did() == Some(DomainId(1))).count();
        let victim = evs.iter().filter(|e| e.access_did() == Some(DomainId(2))).count();
        assert_eq!((attacker, victim), (64, 25));
    }
}
