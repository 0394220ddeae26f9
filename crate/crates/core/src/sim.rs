//! Scenario replay: a domain manager driving one hierarchy.

use crate::analysis::stats::StatsTable;
use crate::domain::{DomainManager, DEFAULT_CHUNK_SETS};
use crate::error::Error;
use crate::hierarchy::{AccessOutcome, Hierarchy, HierarchyConfig};
use crate::llc::{LlcModel, Reconfig};
use crate::types::{AccessRequest, DomainId, FlushStats};
use crate::workload::scenario::ScenarioEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub hierarchy: HierarchyConfig,
    pub model: LlcModel,
    pub default_chunk_sets: usize,
}

impl SimConfig {
    pub fn new(hierarchy: HierarchyConfig, model: LlcModel) -> Self {
        Self { hierarchy, model, default_chunk_sets: DEFAULT_CHUNK_SETS }
    }

    pub fn with_model(&self, model: LlcModel) -> Self {
        Self { model, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessRecord {
    /// Position of the ACCESS event in the scenario.
    pub event: usize,
    pub request: AccessRequest,
    pub outcome: AccessOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconfigKind {
    Register,
    Alloc,
    Dealloc,
    Resize,
    Teardown,
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconfigRecord {
    pub event: usize,
    pub kind: ReconfigKind,
    pub did: DomainId,
    pub cycles: u64,
    pub flush: FlushStats,
}

/// A BARRIER seen during replay and how many accesses preceded it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mark {
    pub label: String,
    pub event: usize,
    pub log_len: usize,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    manager: DomainManager,
    hierarchy: Hierarchy,
    log: Vec<AccessRecord>,
    reconfigs: Vec<ReconfigRecord>,
    marks: Vec<Mark>,
    next_event: usize,
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self, Error> {
        let hierarchy = Hierarchy::new(config.hierarchy.clone(), config.model)?;
        let manager = DomainManager::new(config.hierarchy.llc.max_domains, config.hierarchy.llc.geometry.line_size_bytes)
            .with_default_chunk_sets(config.default_chunk_sets);
        Ok(Self { manager, hierarchy, log: Vec::new(), reconfigs: Vec::new(), marks: Vec::new(), next_event: 0 })
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn manager(&self) -> &DomainManager {
        &self.manager
    }

    pub fn stats(&self) -> &StatsTable {
        self.hierarchy.stats()
    }

    pub fn log(&self) -> &[AccessRecord] {
        &self.log
    }

    pub fn reconfigs(&self) -> &[ReconfigRecord] {
        &self.reconfigs
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Accesses logged between the first barrier called `label` and the
    /// next barrier (or the end of the log).
    pub fn phase(&self, label: &str) -> &[AccessRecord] {
        let Some(pos) = self.marks.iter().position(|m| m.label == label) else { return &[] };
        let start = self.marks[pos].log_len;
        let end = self.marks.get(pos + 1).map_or(self.log.len(), |m| m.log_len);
        &self.log[start..end]
    }

    fn note(&mut self, kind: ReconfigKind, did: DomainId, r: &Reconfig) {
        self.reconfigs.push(ReconfigRecord { event: self.next_event, kind, did, cycles: r.cycles, flush: r.flush });
    }

    /// Applies one event. Errors are returned unwrapped.
    pub fn apply(&mut self, event: &ScenarioEvent) -> Result<(), Error> {
        let h = &mut self.hierarchy;
        match event {
            ScenarioEvent::Access { core, did, kind, addr } => {
                let meta = self.manager.classify(*did, *addr)?;
                let mode = self.manager.mode(*did)?;
                let request = AccessRequest { core: *core, did: *did, kind: *kind, addr: *addr, shared: meta.shared };
                let outcome = h.memory_access(&request, mode)?;
                self.log.push(AccessRecord { event: self.next_event, request, outcome });
            }
            ScenarioEvent::Register(cfg) => {
                if let Some(r) = self.manager.register_domain(cfg.clone(), h)? {
                    self.note(ReconfigKind::Register, cfg.did, &r);
                }
            }
            ScenarioEvent::Alloc { did, sets } => {
                let r = self.manager.allocate(*did, *sets, h)?;
                self.note(ReconfigKind::Alloc, *did, &r);
            }
            ScenarioEvent::Dealloc { did } => {
                let r = self.manager.deallocate(*did, h)?;
                self.note(ReconfigKind::Dealloc, *did, &r);
            }
            ScenarioEvent::Resize { did, sets } => {
                let r = self.manager.resize(*did, *sets, h)?;
                self.note(ReconfigKind::Resize, *did, &r);
            }
            ScenarioEvent::Teardown { did } => {
                let (released, swept) = self.manager.teardown_domain(*did, h)?;
                let mut r = released.unwrap_or_default();
                r.flush += swept;
                self.note(ReconfigKind::Teardown, *did, &r);
            }
            ScenarioEvent::Switch { core, did } => {
                if !self.manager.is_registered(*did) {
                    return Err(crate::error::DomainError::UnknownDid(*did).into());
                }
                let flush = h.context_switch(*core, *did)?;
                let r = Reconfig { cycles: 0, flush, receipt: None };
                self.note(ReconfigKind::Switch, *did, &r);
            }
            ScenarioEvent::Barrier { label } => {
                self.marks.push(Mark { label: label.clone(), event: self.next_event, log_len: self.log.len() });
            }
        }
        self.next_event += 1;
        Ok(())
    }

    /// Applies every event in order, stopping at the first failure.
    pub fn run<'a>(&mut self, events: impl IntoIterator<Item = &'a ScenarioEvent>) -> Result<(), Error> {
        for event in events {
            let index = self.next_event;
            self.apply(event).map_err(|e| Error::Event { index, source: Box::new(e) })?;
        }
        Ok(())
    }
}

/// Builds a simulation and replays `events` through it.
pub fn simulate(config: &SimConfig, events: &[ScenarioEvent]) -> Result<Simulation, Error> {
    let mut sim = Simulation::new(config)?;
    sim.run(events)?;
    Ok(sim)
}
