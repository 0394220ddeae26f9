//! Differential replay: run a scenario with and without the victim's
//! accesses and compare what the attacker saw.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::verdict::{noninterference_verdict, Verdict};
use crate::error::Error;
use crate::sim::{simulate, AccessRecord, SimConfig, Simulation};
use crate::types::DomainId;
use crate::workload::attack::{build_occupancy_probe, build_prime_probe, Party, PrimeProbe, PROBE};
use crate::workload::gen::{WorkloadKind, WorkloadSpec};
use crate::workload::scenario::ScenarioEvent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackKind {
    PrimeProbe,
    Occupancy,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::PrimeProbe => "prime-probe",
            AttackKind::Occupancy => "occupancy",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prime-probe" => Ok(AttackKind::PrimeProbe),
            "occupancy" => Ok(AttackKind::Occupancy),
            other => Err(format!("unknown attack `{other}` (expected prime-probe or occupancy)")),
        }
    }
}

/// Drops every ACCESS issued by `did`, keeping everything else.
pub fn without_accesses_of(events: &[ScenarioEvent], did: DomainId) -> Vec<ScenarioEvent> {
    events.iter().filter(|e| e.access_did() != Some(did)).cloned().collect()
}

#[derive(Debug)]
pub struct Differential {
    pub with: Simulation,
    pub without: Simulation,
    pub verdict: Verdict,
}

/// Replays `events` as given and with `victim`'s accesses removed, then
/// judges the `subject`'s observations.
pub fn differential(
    config: &SimConfig,
    events: &[ScenarioEvent],
    victim: DomainId,
    subject: DomainId,
) -> Result<Differential, Error> {
    let with = simulate(config, events)?;
    let without = simulate(config, &without_accesses_of(events, victim))?;
    let verdict = noninterference_verdict(with.log(), without.log(), subject);
    Ok(Differential { with, without, verdict })
}

/// LLC misses `did` took among `records`.
pub fn llc_misses(records: &[AccessRecord], did: DomainId) -> u64 {
    records
        .iter()
        .filter(|r| r.request.did == did && r.outcome.llc.is_some_and(|o| !o.hit))
        .count() as u64
}

/// Attacker LLC misses during the probe phase.
pub fn probe_misses(sim: &Simulation, attacker: DomainId) -> u64 {
    llc_misses(sim.phase(PROBE), attacker)
}

pub const ATTACKER: Party = Party {
    did: DomainId(1),
    core: 0,
    mode: crate::types::IsolationMode::Exclusive,
    sets: None,
};

/// Attack scenario sized to `config`'s LLC: attacker is domain 1 on core 0,
/// victim is domain 2 on core 1, both exclusive with the default chunk.
pub fn standard_attack(config: &SimConfig, kind: AttackKind, seed: u64) -> Result<Vec<ScenarioEvent>, Error> {
    let g = config.hierarchy.llc.geometry;
    let sets = Some(config.default_chunk_sets);
    let attacker = Party { sets, ..ATTACKER };
    let victim = Party { did: DomainId(2), core: 1, sets, ..ATTACKER };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = match kind {
        AttackKind::PrimeProbe => build_prime_probe(
            &attacker,
            &victim,
            &PrimeProbe {
                num_sets: g.num_sets as u64,
                prime_lines: g.ways as u64,
                target_index: rng.random_range(0..g.num_sets as u64),
                victim_lines: g.ways as u64,
                line_size: g.line_size_bytes,
            },
        )?,
        AttackKind::Occupancy => {
            // the attacker covers the whole LLC so any victim fill displaces it
            let lines = g.capacity_lines();
            let victim_spec = WorkloadSpec::new(WorkloadKind::WorkingSet { footprint_lines: lines / 4 }, (lines / 2) as usize, seed)
                .with_base(lines * g.line_size_bytes);
            build_occupancy_probe(&attacker, &victim, 0, lines, g.line_size_bytes, &victim_spec)?
        }
    };
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::CacheGeometry;
    use crate::controller::ControllerConfig;
    use crate::hierarchy::HierarchyConfig;
    use crate::llc::LlcModel;

    fn small(model: LlcModel) -> SimConfig {
        let mut h = HierarchyConfig::reference_machine(2);
        h.l1i.geometry = CacheGeometry::lru(64, 4, 2).unwrap();
        h.l1d.geometry = CacheGeometry::lru(64, 4, 2).unwrap();
        h.l2.geometry = CacheGeometry::lru(64, 8, 4).unwrap();
        h.llc = ControllerConfig::new(CacheGeometry::lru(64, 64, 4).unwrap());
        SimConfig { default_chunk_sets: 8, ..SimConfig::new(h, model) }
    }

    #[test]
    fn prime_probe_separates_the_models() {
        for seed in 0..20 {
            let cfg = small(LlcModel::Chunked);
            let events = standard_attack(&cfg, AttackKind::PrimeProbe, seed).unwrap();
            let chunked = differential(&cfg, &events, DomainId(2), DomainId(1)).unwrap();
            assert!(chunked.verdict.is_pass(), "seed {seed}: {}", chunked.verdict);
            let shared = differential(&cfg.with_model(LlcModel::Shared), &events, DomainId(2), DomainId(1)).unwrap();
            assert!(!shared.verdict.is_pass(), "seed {seed}");
            let way = differential(&cfg.with_model(LlcModel::Way), &events, DomainId(2), DomainId(1)).unwrap();
            assert!(way.verdict.is_pass(), "seed {seed}: {}", way.verdict);
        }
    }

    #[test]
    fn occupancy_separates_the_models() {
        let cfg = small(LlcModel::Chunked);
        let events = standard_attack(&cfg, AttackKind::Occupancy, 5).unwrap();
        let chunked = differential(&cfg, &events, DomainId(2), DomainId(1)).unwrap();
        assert!(chunked.verdict.is_pass(), "{}", chunked.verdict);
        assert_eq!(probe_misses(&chunked.with, DomainId(1)), probe_misses(&chunked.without, DomainId(1)));
        let shared = differential(&cfg.with_model(LlcModel::Shared), &events, DomainId(2), DomainId(1)).unwrap();
        assert!(!shared.verdict.is_pass());
        assert!(probe_misses(&shared.with, DomainId(1)) > probe_misses(&shared.without, DomainId(1)));
    }

    #[test]
    fn attack_kind_names() {
        assert_eq!("prime-probe".parse::<AttackKind>(), Ok(AttackKind::PrimeProbe));
        assert_eq!(AttackKind::Occupancy.to_string(), "occupancy");
        assert!("flush-reload".parse::<AttackKind>().is_err());
    }
}
