//! Inclusive three-level hierarchy: private L1I/L1D/L2 per core, one shared
//! LLC of any model.
//!
//! Private levels carry no domain tags; they are flushed whenever a core
//! switches domains, so everything they hold belongs to the domain currently
//! scheduled there. All levels are write-back and write-allocate. The LLC is
//! inclusive of the private levels, and L2 is inclusive of L1: an eviction
//! below back-invalidates the copies above.

use crate::analysis::stats::{Level, StatsTable};
use crate::cache::{CacheArray, CacheGeometry, EvictedLine, LookupResult};
use crate::controller::ControllerConfig;
use crate::error::{ConfigError, Error};
use crate::llc::{Llc, LlcModel, LlcOutcome, LlcRequest, Reconfig};
use crate::types::{AccessRequest, DomainId, FlushStats, IsolationMode};

pub const L1_HIT_CYCLES: u64 = 4;
pub const L2_HIT_CYCLES: u64 = 14;
/// Not given by the hardware numbers we model; an arbitrary DRAM figure.
pub const DEFAULT_MEMORY_LATENCY: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelConfig {
    pub geometry: CacheGeometry,
    pub hit_cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyConfig {
    pub l1i: LevelConfig,
    pub l1d: LevelConfig,
    pub l2: LevelConfig,
    pub llc: ControllerConfig,
    pub memory_latency_cycles: u64,
    pub num_cores: usize,
}

impl HierarchyConfig {
    /// 64 KB/128-set L1I, 32 KB/64-set L1D (8-way), 512 KB 16-way L2,
    /// 16 MB 16-way LLC, 64-byte lines.
    pub fn reference_machine(num_cores: usize) -> Self {
        let level = |sets, ways, hit_cycles| LevelConfig {
            geometry: CacheGeometry::lru(64, sets, ways).expect("static geometry"),
            hit_cycles,
        };
        Self {
            l1i: level(128, 8, L1_HIT_CYCLES),
            l1d: level(64, 8, L1_HIT_CYCLES),
            l2: level(512, 16, L2_HIT_CYCLES),
            llc: ControllerConfig::new(CacheGeometry::lru(64, 16_384, 16).expect("static geometry")),
            memory_latency_cycles: DEFAULT_MEMORY_LATENCY,
            num_cores,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.llc.validate()?;
        let line = self.llc.geometry.line_size_bytes;
        for (name, level) in [("L1I", &self.l1i), ("L1D", &self.l1d), ("L2", &self.l2)] {
            level.geometry.validate()?;
            if level.geometry.line_size_bytes != line {
                return Err(ConfigError::Invalid(format!("{name} line size differs from the LLC's")));
            }
            if level.hit_cycles == 0 {
                return Err(ConfigError::TooSmall { what: "hit latency", min: 1, value: 0 });
            }
        }
        let l1 = self.l1i.geometry.capacity_bytes().max(self.l1d.geometry.capacity_bytes());
        let l2 = self.l2.geometry.capacity_bytes();
        if l2 < l1 || self.llc.geometry.capacity_bytes() < l2 {
            return Err(ConfigError::Invalid("inclusive levels must grow: LLC >= L2 >= L1".into()));
        }
        if self.num_cores == 0 {
            return Err(ConfigError::TooSmall { what: "core count", min: 1, value: 0 });
        }
        if self.memory_latency_cycles == 0 {
            return Err(ConfigError::TooSmall { what: "memory latency", min: 1, value: 0 });
        }
        Ok(())
    }
}

/// Level that finally supplied the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ServedBy {
    L1,
    L2,
    Llc,
    Memory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AccessOutcome {
    pub served_by: ServedBy,
    pub l1_hit: bool,
    pub l2_hit: Option<bool>,
    pub llc: Option<LlcOutcome>,
    pub cycles: u64,
}

#[derive(Debug, Clone)]
struct CoreCaches {
    current: DomainId,
    l1i: CacheArray,
    l1d: CacheArray,
    l2: CacheArray,
}

impl CoreCaches {
    fn flush(&mut self) -> [FlushStats; 3] {
        [self.l1i.invalidate_all(), self.l1d.invalidate_all(), self.l2.invalidate_all()]
    }
}

#[derive(Debug, Clone)]
pub struct CoreState {
    pub core_id: usize,
    pub current_did: DomainId,
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    config: HierarchyConfig,
    cores: Vec<CoreCaches>,
    llc: Llc,
    stats: StatsTable,
}

impl Hierarchy {
    pub fn new(config: HierarchyConfig, model: LlcModel) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut cores = Vec::with_capacity(config.num_cores);
        for _ in 0..config.num_cores {
            cores.push(CoreCaches {
                current: DomainId::NON_ISOLATED,
                l1i: CacheArray::new(config.l1i.geometry)?,
                l1d: CacheArray::new(config.l1d.geometry)?,
                l2: CacheArray::new(config.l2.geometry)?,
            });
        }
        let llc = Llc::build(model, &config.llc)?;
        Ok(Self { config, cores, llc, stats: StatsTable::new() })
    }

    pub fn config(&self) -> &HierarchyConfig {
        &self.config
    }

    pub fn llc(&self) -> &Llc {
        &self.llc
    }

    pub fn stats(&self) -> &StatsTable {
        &self.stats
    }

    pub fn core_state(&self, core: usize) -> Option<CoreState> {
        self.cores.get(core).map(|c| CoreState { core_id: core, current_did: c.current })
    }

    fn core_mut(&mut self, core: usize) -> Result<&mut CoreCaches, Error> {
        let num_cores = self.cores.len();
        self.cores.get_mut(core).ok_or(Error::NoSuchCore { core, num_cores })
    }

    /// One end-to-end access. `mode` is the issuing domain's isolation mode.
    pub fn memory_access(&mut self, req: &AccessRequest, mode: IsolationMode) -> Result<AccessOutcome, Error> {
        let current = self.core_mut(req.core)?.current;
        if current != req.did {
            return Err(Error::Schedule { core: req.core, current, requested: req.did });
        }
        let line = self.config.llc.geometry.line_addr(req.addr);
        let write = req.kind.is_write();
        let l1_level = if req.kind.is_instruction() { Level::L1I } else { Level::L1D };
        let (l1_cycles, l2_cycles) = (self.config.l1d.hit_cycles, self.config.l2.hit_cycles);
        let l1_cycles = if req.kind.is_instruction() { self.config.l1i.hit_cycles } else { l1_cycles };

        let mut cycles = l1_cycles;
        let l1_hit = {
            let caches = &mut self.cores[req.core];
            let l1 = if req.kind.is_instruction() { &mut caches.l1i } else { &mut caches.l1d };
            let set = l1.geometry().set_index(line);
            match l1.lookup_unchecked(set, line)? {
                LookupResult::Hit(way) => {
                    if write {
                        l1.mark_dirty(crate::cache::Slot::new(set, way))?;
                    }
                    true
                }
                _ => false,
            }
        };
        self.stats.domain_mut(req.did).level_mut(l1_level).record(l1_hit);
        if l1_hit {
            return Ok(self.finish(req.did, AccessOutcome {
                served_by: ServedBy::L1,
                l1_hit,
                l2_hit: None,
                llc: None,
                cycles,
            }));
        }

        cycles += l2_cycles;
        let l2_hit = {
            let l2 = &mut self.cores[req.core].l2;
            let set = l2.geometry().set_index(line);
            l2.lookup_unchecked(set, line)?.is_hit()
        };
        self.stats.domain_mut(req.did).l2.record(l2_hit);

        let mut llc_outcome = None;
        let served_by = if l2_hit {
            ServedBy::L2
        } else {
            let llc_req = LlcRequest { did: req.did, line_addr: line, write: false, shared: req.shared, mode };
            let out = self.llc.access(&llc_req)?;
            cycles += out.cycles;
            {
                let s = self.stats.domain_mut(req.did);
                s.llc.record(out.hit);
                s.llc.permission_misses += out.permission_miss as u64;
                let cat = if req.kind.is_instruction() { &mut s.llc_instr } else { &mut s.llc_data };
                cat.record(out.hit);
                cat.permission_misses += out.permission_miss as u64;
            }
            if let Some(evicted) = out.eviction {
                self.stats.record_llc_eviction(req.did, evicted.did);
                self.retire_llc_line(&evicted);
            }
            llc_outcome = Some(out);
            if out.hit {
                ServedBy::Llc
            } else {
                cycles += self.config.memory_latency_cycles;
                ServedBy::Memory
            }
        };

        if !l2_hit {
            self.fill_l2(req, line, mode)?;
        }
        self.fill_l1(req, line, write)?;

        Ok(self.finish(req.did, AccessOutcome {
            served_by,
            l1_hit: false,
            l2_hit: Some(l2_hit),
            llc: llc_outcome,
            cycles,
        }))
    }

    fn finish(&mut self, did: DomainId, outcome: AccessOutcome) -> AccessOutcome {
        let s = self.stats.domain_mut(did);
        s.accesses += 1;
        s.cycles += outcome.cycles;
        outcome
    }

    fn fill_l2(&mut self, req: &AccessRequest, line: u64, mode: IsolationMode) -> Result<(), Error> {
        let caches = &mut self.cores[req.core];
        let set = caches.l2.geometry().set_index(line);
        let pool: Vec<_> = caches.l2.set_slots(set).collect();
        let victim = caches.l2.select_victim(&pool)?;
        let info = caches.l2.fill(victim, line, req.did, req.shared, false)?;
        let Some(old) = info.evicted else { return Ok(()) };

        // keep L1 inside L2
        let mut dirty = old.dirty;
        for l1 in [&mut caches.l1i, &mut caches.l1d] {
            let s = l1.geometry().set_index(old.tag);
            if let Some(copy) = l1.invalidate_tag(s, old.tag)? {
                dirty |= copy.dirty;
            }
        }
        let stats = self.stats.domain_mut(req.did);
        stats.l2.self_evictions += 1;
        if dirty {
            stats.l2.writebacks += 1;
            let wb = LlcRequest { did: req.did, line_addr: old.tag, write: true, shared: old.shared, mode };
            self.llc.write_back(&wb)?;
        }
        Ok(())
    }

    fn fill_l1(&mut self, req: &AccessRequest, line: u64, write: bool) -> Result<(), Error> {
        let instruction = req.kind.is_instruction();
        let caches = &mut self.cores[req.core];
        let l1 = if instruction { &mut caches.l1i } else { &mut caches.l1d };
        let set = l1.geometry().set_index(line);
        let pool: Vec<_> = l1.set_slots(set).collect();
        let victim = l1.select_victim(&pool)?;
        let info = l1.fill(victim, line, req.did, req.shared, write)?;
        let Some(old) = info.evicted else { return Ok(()) };

        let stats = self.stats.domain_mut(req.did).level_mut(if instruction { Level::L1I } else { Level::L1D });
        stats.self_evictions += 1;
        if old.dirty {
            stats.writebacks += 1;
            let l2 = &mut self.cores[req.core].l2;
            let s = l2.geometry().set_index(old.tag);
            let way = l2.set_lines(s)?.iter().position(|l| l.valid && l.tag == old.tag);
            if let Some(way) = way {
                l2.mark_dirty(crate::cache::Slot::new(s, way))?;
            }
        }
        Ok(())
    }

    /// Back-invalidates private copies of a line leaving the LLC, on every
    /// core whose scheduled domain could have reached it. The shared baseline
    /// checks no domains, so there every core could.
    fn retire_llc_line(&mut self, evicted: &EvictedLine) {
        let mut dirty = evicted.dirty;
        let tag_only = self.llc.model() == LlcModel::Shared;
        for caches in &mut self.cores {
            let reachable = tag_only
                || caches.current == evicted.did
                || (evicted.shared && caches.current.is_non_isolated());
            if !reachable {
                continue;
            }
            for cache in [&mut caches.l1i, &mut caches.l1d, &mut caches.l2] {
                let set = cache.geometry().set_index(evicted.tag);
                if let Ok(Some(copy)) = cache.invalidate_tag(set, evicted.tag) {
                    dirty |= copy.dirty;
                }
            }
        }
        if dirty {
            self.stats.domain_mut(evicted.did).llc.writebacks += 1;
        }
    }

    fn retire_released(&mut self) {
        for line in self.llc.drain_released() {
            self.retire_llc_line(&line);
        }
    }

    /// Flushes the private caches of `core` and schedules `new_did` on it.
    /// The LLC is not touched. Flushing happens even if the domain does not
    /// change.
    pub fn context_switch(&mut self, core: usize, new_did: DomainId) -> Result<FlushStats, Error> {
        if new_did.index() >= self.config.llc.max_domains {
            return Err(crate::error::ControllerError::UnregisteredDomain(new_did).into());
        }
        let caches = self.core_mut(core)?;
        let old = caches.current;
        let [i, d, l2] = caches.flush();
        caches.current = new_did;
        let total = i + d + l2;
        if total.dirty_writebacks > 0 {
            let s = self.stats.domain_mut(old);
            s.l1i.writebacks += i.dirty_writebacks;
            s.l1d.writebacks += d.dirty_writebacks;
            s.l2.writebacks += l2.dirty_writebacks;
        }
        Ok(total)
    }

    pub fn claim(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        let r = self.llc.claim(did, sets);
        self.retire_released();
        r
    }

    pub fn release(&mut self, did: DomainId) -> Result<Reconfig, Error> {
        let r = self.llc.release(did);
        self.retire_released();
        r
    }

    pub fn resize(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        let r = self.llc.resize(did, sets);
        self.retire_released();
        r
    }

    pub fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        let stats = self.llc.sweep_domain(did);
        self.retire_released();
        stats
    }

    /// Checks that every private line is backed by an LLC line its core's
    /// domain can reach. Full scan; meant for small geometries.
    pub fn check_inclusion(&self) -> Result<(), String> {
        let llc = self.llc.array();
        let tag_only = self.llc.model() == LlcModel::Shared;
        for (core, caches) in self.cores.iter().enumerate() {
            let did = caches.current;
            for (name, cache) in [("L1I", &caches.l1i), ("L1D", &caches.l1d), ("L2", &caches.l2)] {
                for (_, line) in cache.valid_lines() {
                    let present = llc.valid_lines().any(|(_, l)| {
                        l.tag == line.tag
                            && (tag_only || l.did == did || (l.shared && did.is_non_isolated()))
                    });
                    if !present {
                        return Err(format!("core {core} {name} holds line {:#x} missing from the LLC", line.tag));
                    }
                }
            }
        }
        Ok(())
    }
}
