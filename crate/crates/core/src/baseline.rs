//! Reference LLC models: an unmodified shared cache and a way-partitioned
//! cache in which each isolated domain owns a disjoint mask of ways.

use crate::cache::{CacheArray, CacheGeometry, EvictedLine, LookupResult, Slot};
use crate::error::{ConfigError, PartitionError};
use crate::llc::{LlcOutcome, LlcPath, LlcRequest};
use crate::types::{DomainId, FlushStats, IsolationMode};

/// Conventional set-associative LLC without any domain checks.
#[derive(Debug, Clone)]
pub struct SharedLlc {
    array: CacheArray,
    hit_cycles: u64,
    released: Vec<EvictedLine>,
}

impl SharedLlc {
    pub fn new(geometry: CacheGeometry, hit_cycles: u64) -> Result<Self, ConfigError> {
        Ok(Self { array: CacheArray::new(geometry)?, hit_cycles, released: Vec::new() })
    }

    pub fn array(&self) -> &CacheArray {
        &self.array
    }

    pub fn access(&mut self, req: &LlcRequest) -> Result<LlcOutcome, PartitionError> {
        let set = self.array.geometry().set_index(req.line_addr);
        if let LookupResult::Hit(way) = self.array.lookup_unchecked(set, req.line_addr)? {
            if req.write {
                self.array.mark_dirty(Slot::new(set, way))?;
            }
            return Ok(LlcOutcome::hit(LlcPath::Shared, set, self.hit_cycles));
        }
        let pool: Vec<Slot> = self.array.set_slots(set).collect();
        let victim = self.array.select_victim(&pool)?;
        let info = self.array.fill(victim, req.line_addr, req.did, req.shared, req.write)?;
        Ok(LlcOutcome::miss(LlcPath::Shared, set, false, info.evicted, self.hit_cycles))
    }

    pub fn write_back(&mut self, req: &LlcRequest) -> Result<bool, PartitionError> {
        let set = self.array.geometry().set_index(req.line_addr);
        let way = self.array.set_lines(set)?.iter().position(|l| l.valid && l.tag == req.line_addr);
        if let Some(way) = way {
            self.array.mark_dirty(Slot::new(set, way))?;
        }
        Ok(way.is_some())
    }

    pub fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        let sets = 0..self.array.geometry().num_sets;
        self.array.invalidate_matching(sets, |l| l.did == did, &mut self.released)
    }

    pub fn drain_released(&mut self) -> Vec<EvictedLine> {
        std::mem::take(&mut self.released)
    }
}

/// Way masks of the isolated domains. Ways outside every mask form the pool
/// used by domain 0, mainstream-mode domains and shared accesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WayPartitionMap {
    ways: usize,
    masks: Vec<u64>,
}

impl WayPartitionMap {
    pub fn new(ways: usize, max_domains: usize) -> Self {
        Self { ways, masks: vec![0; max_domains] }
    }

    fn all(&self) -> u64 {
        if self.ways == 64 {
            u64::MAX
        } else {
            (1u64 << self.ways) - 1
        }
    }

    pub fn mask(&self, did: DomainId) -> Option<u64> {
        self.masks.get(did.index()).copied().filter(|&m| m != 0)
    }

    /// Ways not owned by any isolated domain.
    pub fn pool_mask(&self) -> u64 {
        let owned = self.masks.iter().fold(0, |acc, m| acc | m);
        self.all() & !owned
    }

    /// Gives `did` the `n` highest free ways. At least one way always stays
    /// in the pool.
    pub fn assign(&mut self, did: DomainId, n: usize) -> Result<u64, PartitionError> {
        if did.is_non_isolated() || did.index() >= self.masks.len() {
            return Err(PartitionError::UnmappedDomain(did));
        }
        if self.masks[did.index()] != 0 {
            return Err(PartitionError::AlreadyMapped(did));
        }
        let pool = self.pool_mask();
        let available = (pool.count_ones() as usize).saturating_sub(1);
        if n == 0 || n > available {
            return Err(PartitionError::InsufficientWays { requested: n, available });
        }
        let mut mask = 0u64;
        for way in (0..self.ways).rev() {
            if mask.count_ones() as usize == n {
                break;
            }
            if pool & (1 << way) != 0 {
                mask |= 1 << way;
            }
        }
        self.masks[did.index()] = mask;
        Ok(mask)
    }

    pub fn release(&mut self, did: DomainId) -> Result<u64, PartitionError> {
        match self.masks.get_mut(did.index()) {
            Some(m) if *m != 0 => Ok(std::mem::take(m)),
            _ => Err(PartitionError::UnmappedDomain(did)),
        }
    }

    pub fn check_disjoint(&self) -> bool {
        let mut seen = 0u64;
        for &m in &self.masks {
            if seen & m != 0 {
                return false;
            }
            seen |= m;
        }
        true
    }
}

/// Way-partitioned LLC: indexing over all sets, lookup and replacement
/// restricted to the requester's ways.
#[derive(Debug, Clone)]
pub struct WayPartitionedLlc {
    array: CacheArray,
    map: WayPartitionMap,
    hit_cycles: u64,
    released: Vec<EvictedLine>,
}

impl WayPartitionedLlc {
    pub fn new(geometry: CacheGeometry, max_domains: usize, hit_cycles: u64) -> Result<Self, ConfigError> {
        Ok(Self {
            array: CacheArray::new(geometry)?,
            map: WayPartitionMap::new(geometry.ways, max_domains),
            hit_cycles,
            released: Vec::new(),
        })
    }

    pub fn array(&self) -> &CacheArray {
        &self.array
    }

    pub fn map(&self) -> &WayPartitionMap {
        &self.map
    }

    /// Ways of equal byte capacity to a chunk of `sets` whole sets, at least one.
    pub fn ways_for_sets(&self, sets: usize) -> usize {
        let g = self.array.geometry();
        (sets * g.ways / g.num_sets).max(1)
    }

    /// Assigns ways to `did`, flushing whatever the pool had cached there.
    pub fn assign(&mut self, did: DomainId, n: usize) -> Result<FlushStats, PartitionError> {
        let mask = self.map.assign(did, n)?;
        Ok(self.array.invalidate_ways(mask, &mut self.released))
    }

    pub fn release(&mut self, did: DomainId) -> Result<FlushStats, PartitionError> {
        let mask = self.map.release(did)?;
        Ok(self.array.invalidate_ways(mask, &mut self.released))
    }

    fn mask_for(&self, req: &LlcRequest) -> Result<u64, PartitionError> {
        if req.did.is_non_isolated() || req.mode == IsolationMode::Mainstream || req.shared {
            Ok(self.map.pool_mask())
        } else {
            self.map.mask(req.did).ok_or(PartitionError::UnmappedDomain(req.did))
        }
    }

    pub fn access(&mut self, req: &LlcRequest) -> Result<LlcOutcome, PartitionError> {
        let mask = self.mask_for(req)?;
        let set = self.array.geometry().set_index(req.line_addr);
        let is_nid = req.did.is_non_isolated();
        let permission_miss = match self.array.lookup_ways(set, mask, req.line_addr, req.did, is_nid)? {
            LookupResult::Hit(way) => {
                if req.write {
                    self.array.mark_dirty(Slot::new(set, way))?;
                }
                return Ok(LlcOutcome::hit(LlcPath::Partition, set, self.hit_cycles));
            }
            LookupResult::PermissionMiss(_) => true,
            LookupResult::Miss => false,
        };
        let pool: Vec<Slot> = (0..self.array.geometry().ways)
            .filter(|w| mask & (1 << w) != 0)
            .map(|way| Slot::new(set, way))
            .collect();
        let victim = self.array.select_victim(&pool)?;
        let info = self.array.fill(victim, req.line_addr, req.did, req.shared, req.write)?;
        Ok(LlcOutcome::miss(LlcPath::Partition, set, permission_miss, info.evicted, self.hit_cycles))
    }

    pub fn write_back(&mut self, req: &LlcRequest) -> Result<bool, PartitionError> {
        let Ok(mask) = self.mask_for(req) else {
            return Ok(false);
        };
        let set = self.array.geometry().set_index(req.line_addr);
        let is_nid = req.did.is_non_isolated();
        let way = self.array.set_lines(set)?.iter().enumerate().position(|(w, l)| {
            mask & (1 << w) != 0 && l.valid && l.tag == req.line_addr && (l.did == req.did || (l.shared && is_nid))
        });
        if let Some(way) = way {
            self.array.mark_dirty(Slot::new(set, way))?;
        }
        Ok(way.is_some())
    }

    pub fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        let sets = 0..self.array.geometry().num_sets;
        self.array.invalidate_matching(sets, |l| l.did == did, &mut self.released)
    }

    pub fn drain_released(&mut self) -> Vec<EvictedLine> {
        std::mem::take(&mut self.released)
    }
}
