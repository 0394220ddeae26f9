//! The chunked LLC controller.
//!
//! Sets `0..P` form the principal chunk of domain 0 and are never handed out.
//! Isolated domains claim power-of-two chunks from the remaining sets; the
//! set-status table (CST) marks claimed sets and the chunk table records, per
//! domain, which global set IDs form its chunk. Domain 0, mainstream-mode
//! domains and shared-region accesses use the mainstream sets: the principal
//! set of an address plus every congruent set (`principal + k*P`) that is not
//! currently claimed.

use std::fmt::Write as _;

use crate::analysis::latency::{alloc_latency, dealloc_latency};
use crate::cache::{CacheArray, CacheGeometry, EvictedLine, LookupResult, Slot};
use crate::error::{ConfigError, ControllerError};
use crate::llc::{LlcOutcome, LlcPath, LlcRequest};
use crate::types::{DomainId, FlushStats, IsolationMode};

pub const DEFAULT_MAX_DOMAINS: usize = 16;
pub const DEFAULT_MAX_SETS_PER_DOMAIN: usize = 8_192;
pub const BASE_HIT_CYCLES: u64 = 80;
pub const EXCLUSIVE_EXTRA_CYCLES: u64 = 1;
pub const MAINSTREAM_EXTRA_CYCLES: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllerConfig {
    pub geometry: CacheGeometry,
    pub max_domains: usize,
    pub max_sets_per_domain: usize,
    /// Size of the hardwired principal chunk of domain 0 (`P`).
    pub principal_sets: usize,
    pub base_hit_cycles: u64,
    pub excl_extra_cycles: u64,
    pub mainstream_extra_cycles: u64,
}

impl ControllerConfig {
    /// Default table sizing and latencies, principal chunk = half the sets.
    pub fn new(geometry: CacheGeometry) -> Self {
        Self {
            geometry,
            max_domains: DEFAULT_MAX_DOMAINS,
            max_sets_per_domain: DEFAULT_MAX_SETS_PER_DOMAIN,
            principal_sets: (geometry.num_sets / 2).max(1),
            base_hit_cycles: BASE_HIT_CYCLES,
            excl_extra_cycles: EXCLUSIVE_EXTRA_CYCLES,
            mainstream_extra_cycles: MAINSTREAM_EXTRA_CYCLES,
        }
    }

    pub fn with_principal_sets(mut self, principal_sets: usize) -> Self {
        self.principal_sets = principal_sets;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.geometry.validate()?;
        let p = self.principal_sets;
        if !p.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo { what: "principal set count", value: p as u64 });
        }
        if p >= self.geometry.num_sets {
            return Err(ConfigError::Invalid(format!(
                "principal chunk of {p} sets leaves nothing to allocate in a {}-set cache",
                self.geometry.num_sets
            )));
        }
        if self.max_domains < 2 {
            return Err(ConfigError::TooSmall { what: "domain count", min: 2, value: self.max_domains as u64 });
        }
        if self.geometry.did_bits < 16 && self.max_domains > 1 << self.geometry.did_bits {
            return Err(ConfigError::Invalid(format!(
                "{} domains do not fit in {} domain tag bits",
                self.max_domains, self.geometry.did_bits
            )));
        }
        if !self.max_sets_per_domain.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo {
                what: "per-domain set limit",
                value: self.max_sets_per_domain as u64,
            });
        }
        Ok(())
    }

    pub fn exclusive_cycles(&self) -> u64 {
        self.base_hit_cycles + self.excl_extra_cycles
    }

    pub fn mainstream_cycles(&self) -> u64 {
        self.base_hit_cycles + self.mainstream_extra_cycles
    }
}

/// One allocation bit per global set ID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetStatusTable {
    bits: Vec<bool>,
}

impl SetStatusTable {
    pub fn new(num_sets: usize) -> Self {
        Self { bits: vec![false; num_sets] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_allocated(&self, sid: usize) -> bool {
        self.bits[sid]
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn set(&mut self, sid: usize, allocated: bool) {
        self.bits[sid] = allocated;
    }
}

/// Chunk-table row of one domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChunkRow {
    pub alloc: bool,
    pub index_bits: u32,
    pub sid_vec: Vec<usize>,
}

impl ChunkRow {
    pub fn ch_num(&self) -> usize {
        self.sid_vec.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkTable {
    rows: Vec<ChunkRow>,
}

impl ChunkTable {
    fn new(max_domains: usize) -> Self {
        Self { rows: vec![ChunkRow::default(); max_domains] }
    }

    pub fn row(&self, did: DomainId) -> Option<&ChunkRow> {
        self.rows.get(did.index())
    }

    /// Allocated rows in domain order.
    pub fn allocated(&self) -> impl Iterator<Item = (DomainId, &ChunkRow)> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.alloc)
            .map(|(i, r)| (DomainId(i as u16), r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocReceipt {
    pub did: DomainId,
    pub ch_num: usize,
    pub index_bits: u32,
    pub sids: Vec<usize>,
    pub cycles: u64,
    pub flush: FlushStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeallocReceipt {
    pub did: DomainId,
    pub ch_num: usize,
    pub cycles: u64,
    pub flush: FlushStats,
}

#[derive(Debug, Clone)]
pub struct ChunkedLlc {
    config: ControllerConfig,
    array: CacheArray,
    cst: SetStatusTable,
    table: ChunkTable,
    // Lines removed by chunk management, waiting for back-invalidation.
    released: Vec<EvictedLine>,
}

impl ChunkedLlc {
    pub fn new(config: ControllerConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self {
            array: CacheArray::new(config.geometry)?,
            cst: SetStatusTable::new(config.geometry.num_sets),
            table: ChunkTable::new(config.max_domains),
            released: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.config
    }

    pub fn array(&self) -> &CacheArray {
        &self.array
    }

    pub fn cst(&self) -> &SetStatusTable {
        &self.cst
    }

    pub fn table(&self) -> &ChunkTable {
        &self.table
    }

    fn check_did(&self, did: DomainId) -> Result<(), ControllerError> {
        if did.index() >= self.config.max_domains {
            return Err(ControllerError::UnregisteredDomain(did));
        }
        Ok(())
    }

    fn check_isolated(&self, did: DomainId) -> Result<(), ControllerError> {
        self.check_did(did)?;
        if did.is_non_isolated() {
            // domain 0 is hardwired and never has a table row
            return Err(ControllerError::UnregisteredDomain(did));
        }
        Ok(())
    }

    /// Claims the first `ch_num` free sets at or above the principal chunk.
    pub fn allocate_chunk(&mut self, did: DomainId, ch_num: usize) -> Result<AllocReceipt, ControllerError> {
        self.check_isolated(did)?;
        if self.table.rows[did.index()].alloc {
            return Err(ControllerError::AlreadyAllocated(did));
        }
        if !ch_num.is_power_of_two() {
            return Err(ControllerError::NotPowerOfTwo(ch_num));
        }
        if ch_num > self.config.max_sets_per_domain {
            return Err(ControllerError::ExceedsMax { requested: ch_num, max: self.config.max_sets_per_domain });
        }

        let mut sids = Vec::with_capacity(ch_num);
        let mut scanned = 0;
        for sid in self.config.principal_sets..self.config.geometry.num_sets {
            scanned += 1;
            if !self.cst.is_allocated(sid) {
                sids.push(sid);
                if sids.len() == ch_num {
                    break;
                }
            }
        }
        if sids.len() < ch_num {
            return Err(ControllerError::InsufficientFreeSets { requested: ch_num, available: sids.len() });
        }

        for &sid in &sids {
            self.cst.set(sid, true);
        }
        let index_bits = ch_num.trailing_zeros();
        self.table.rows[did.index()] = ChunkRow { alloc: true, index_bits, sid_vec: sids.clone() };
        let flush = self.array.invalidate_sets_into(&sids, &mut self.released)?;

        Ok(AllocReceipt { did, ch_num, index_bits, sids, cycles: alloc_latency(ch_num, scanned), flush })
    }

    pub fn deallocate_chunk(&mut self, did: DomainId) -> Result<DeallocReceipt, ControllerError> {
        self.check_isolated(did)?;
        if !self.table.rows[did.index()].alloc {
            return Err(ControllerError::NotAllocated(did));
        }
        let row = std::mem::take(&mut self.table.rows[did.index()]);
        for &sid in &row.sid_vec {
            self.cst.set(sid, false);
        }
        let flush = self.array.invalidate_sets_into(&row.sid_vec, &mut self.released)?;
        Ok(DeallocReceipt { did, ch_num: row.ch_num(), cycles: dealloc_latency(row.ch_num()), flush })
    }

    /// Releases the current chunk, then allocates a new one of `new_ch_num`
    /// sets. The receipt's cycles and flush counts cover both steps.
    ///
    /// The release happens first: if the new allocation fails (for example
    /// with `InsufficientFreeSets`) the domain is left without a chunk.
    pub fn resize_chunk(&mut self, did: DomainId, new_ch_num: usize) -> Result<AllocReceipt, ControllerError> {
        self.check_isolated(did)?;
        if !self.table.rows[did.index()].alloc {
            return Err(ControllerError::NotAllocated(did));
        }
        if !new_ch_num.is_power_of_two() {
            return Err(ControllerError::NotPowerOfTwo(new_ch_num));
        }
        if new_ch_num > self.config.max_sets_per_domain {
            return Err(ControllerError::ExceedsMax { requested: new_ch_num, max: self.config.max_sets_per_domain });
        }
        let released = self.deallocate_chunk(did)?;
        let mut receipt = self.allocate_chunk(did, new_ch_num)?;
        receipt.cycles += released.cycles;
        receipt.flush += released.flush;
        Ok(receipt)
    }

    /// Global set ID and chunk-local index of `line_addr` for an
    /// exclusive-mode access by `did`.
    pub fn map_exclusive(&self, did: DomainId, line_addr: u64) -> Result<(usize, usize), ControllerError> {
        self.check_did(did)?;
        let row = &self.table.rows[did.index()];
        if !row.alloc {
            return Err(ControllerError::NotAllocated(did));
        }
        let chunk_index = (line_addr & ((1u64 << row.index_bits) - 1)) as usize;
        Ok((row.sid_vec[chunk_index], chunk_index))
    }

    /// Principal set of `line_addr` followed by its unclaimed congruent sets.
    pub fn mainstream_candidates(&self, line_addr: u64) -> Vec<usize> {
        let p = self.config.principal_sets;
        let principal = (line_addr % p as u64) as usize;
        (principal..self.config.geometry.num_sets)
            .step_by(p)
            .filter(|&sid| sid == principal || !self.cst.is_allocated(sid))
            .collect()
    }

    fn routes_mainstream(req: &LlcRequest) -> bool {
        req.did.is_non_isolated() || req.mode == IsolationMode::Mainstream || req.shared
    }

    pub fn access(&mut self, req: &LlcRequest) -> Result<LlcOutcome, ControllerError> {
        self.check_did(req.did)?;
        let tag = req.line_addr;
        let is_nid = req.did.is_non_isolated();

        if Self::routes_mainstream(req) {
            let sets = self.mainstream_candidates(req.line_addr);
            let mut permission_miss = false;
            for &sid in &sets {
                match self.array.lookup(sid, tag, req.did, is_nid)? {
                    LookupResult::Hit(way) => {
                        if req.write {
                            self.array.mark_dirty(Slot::new(sid, way))?;
                        }
                        return Ok(LlcOutcome::hit(LlcPath::Mainstream, sid, self.config.mainstream_cycles()));
                    }
                    LookupResult::PermissionMiss(_) => permission_miss = true,
                    LookupResult::Miss => {}
                }
            }
            let pool: Vec<Slot> = sets.iter().flat_map(|&sid| self.array.set_slots(sid)).collect();
            let victim = self.array.select_victim(&pool)?;
            let info = self.array.fill(victim, tag, req.did, req.shared, req.write)?;
            Ok(LlcOutcome::miss(
                LlcPath::Mainstream,
                victim.set,
                permission_miss,
                info.evicted,
                self.config.mainstream_cycles(),
            ))
        } else {
            let (sid, _) = self
                .map_exclusive(req.did, req.line_addr)
                .map_err(|_| ControllerError::ExclusiveWithoutChunk(req.did))?;
            let permission_miss = match self.array.lookup(sid, tag, req.did, false)? {
                LookupResult::Hit(way) => {
                    if req.write {
                        self.array.mark_dirty(Slot::new(sid, way))?;
                    }
                    return Ok(LlcOutcome::hit(LlcPath::Exclusive, sid, self.config.exclusive_cycles()));
                }
                LookupResult::PermissionMiss(_) => true,
                LookupResult::Miss => false,
            };
            let pool: Vec<Slot> = self.array.set_slots(sid).collect();
            let victim = self.array.select_victim(&pool)?;
            let info = self.array.fill(victim, tag, req.did, false, req.write)?;
            Ok(LlcOutcome::miss(LlcPath::Exclusive, sid, permission_miss, info.evicted, self.config.exclusive_cycles()))
        }
    }

    /// Marks the requester's copy of the line dirty without touching
    /// replacement state. Returns whether a copy was found.
    pub fn write_back(&mut self, req: &LlcRequest) -> Result<bool, ControllerError> {
        self.check_did(req.did)?;
        let sets = if Self::routes_mainstream(req) {
            self.mainstream_candidates(req.line_addr)
        } else {
            match self.map_exclusive(req.did, req.line_addr) {
                Ok((sid, _)) => vec![sid],
                Err(_) => return Ok(false),
            }
        };
        let is_nid = req.did.is_non_isolated();
        for sid in sets {
            let lines = self.array.set_lines(sid)?;
            let way = lines.iter().position(|l| {
                l.valid && l.tag == req.line_addr && (l.did == req.did || (l.shared && is_nid))
            });
            if let Some(way) = way {
                self.array.mark_dirty(Slot::new(sid, way))?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Invalidates the mainstream lines owned by `did`.
    pub fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        let sets: Vec<usize> =
            (0..self.config.geometry.num_sets).filter(|&sid| !self.cst.is_allocated(sid)).collect();
        self.array.invalidate_matching(sets, |line| line.did == did, &mut self.released)
    }

    /// Lines removed by allocation, release or sweeps since the last call.
    pub fn drain_released(&mut self) -> Vec<EvictedLine> {
        std::mem::take(&mut self.released)
    }

    /// Text dump of CST occupancy and chunk-table rows.
    pub fn dump(&self) -> String {
        let g = &self.config.geometry;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "controller sets={} ways={} principal={} max_domains={} max_sets_per_domain={}",
            g.num_sets, g.ways, self.config.principal_sets, self.config.max_domains, self.config.max_sets_per_domain
        );
        let allocated = self.cst.popcount();
        let _ = writeln!(
            out,
            "cst allocated={} free={}",
            allocated,
            g.num_sets - self.config.principal_sets - allocated
        );
        for (did, row) in self.table.allocated() {
            let sids: Vec<String> = row.sid_vec.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "domain {} index_bits={} sets={}", did.0, row.index_bits, sids.join(","));
        }
        out
    }

    /// Checks the table/CST invariants; returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut owner = vec![None; self.config.geometry.num_sets];
        let mut total = 0;
        for (did, row) in self.table.allocated() {
            if did.is_non_isolated() {
                return Err("row 0 is allocated".into());
            }
            if row.sid_vec.len() != 1 << row.index_bits {
                return Err(format!("{did}: {} sets but index_bits={}", row.sid_vec.len(), row.index_bits));
            }
            if row.sid_vec.len() > self.config.max_sets_per_domain {
                return Err(format!("{did}: chunk exceeds per-domain cap"));
            }
            for &sid in &row.sid_vec {
                if sid < self.config.principal_sets {
                    return Err(format!("{did}: owns principal set {sid}"));
                }
                if !self.cst.is_allocated(sid) {
                    return Err(format!("{did}: set {sid} not marked in CST"));
                }
                if let Some(other) = owner[sid].replace(did) {
                    return Err(format!("set {sid} owned by {other} and {did}"));
                }
            }
            total += row.sid_vec.len();
        }
        if self.cst.popcount() != total {
            return Err(format!("CST popcount {} != owned sets {}", self.cst.popcount(), total));
        }
        for (slot, line) in self.array.valid_lines() {
            if let Some(o) = owner[slot.set] {
                if line.did != o {
                    return Err(format!("set {} of {o} holds a line of {}", slot.set, line.did));
                }
            }
        }
        Ok(())
    }
}
