//! Set-associative cache array with domain-tagged lines.
//!
//! Every cache level in the simulator is one of these arrays. The LLC models
//! use the domain-checked lookups; the private L1/L2 levels and the shared
//! baseline use tag-only lookups. Data values are not modeled: a line is
//! identified by its tag, owner domain, shared flag and dirty bit.
//!
//! Tags are full line addresses (`addr >> log2(line_size)`), so a line keeps
//! its identity no matter which index function placed it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CacheError, ConfigError};
use crate::types::{DomainId, FlushStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReplacementPolicy {
    Lru,
    /// Uniform choice over the candidate slots, drawn from a seeded stream.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CacheGeometry {
    pub line_size_bytes: u64,
    pub num_sets: usize,
    pub ways: usize,
    /// Width of the domain-ID tag extension.
    pub did_bits: u32,
    pub policy: ReplacementPolicy,
}

impl CacheGeometry {
    pub fn new(
        line_size_bytes: u64,
        num_sets: usize,
        ways: usize,
        did_bits: u32,
        policy: ReplacementPolicy,
    ) -> Result<Self, ConfigError> {
        let geometry = Self { line_size_bytes, num_sets, ways, did_bits, policy };
        geometry.validate()?;
        Ok(geometry)
    }

    /// LRU geometry with a 4-bit domain tag, the common case in tests.
    pub fn lru(line_size_bytes: u64, num_sets: usize, ways: usize) -> Result<Self, ConfigError> {
        Self::new(line_size_bytes, num_sets, ways, 4, ReplacementPolicy::Lru)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.line_size_bytes.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo { what: "line size", value: self.line_size_bytes });
        }
        if !self.num_sets.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo { what: "set count", value: self.num_sets as u64 });
        }
        if self.ways == 0 {
            return Err(ConfigError::TooSmall { what: "associativity", min: 1, value: 0 });
        }
        if self.ways > 64 {
            return Err(ConfigError::Invalid(format!("associativity {} exceeds 64 ways", self.ways)));
        }
        if self.did_bits == 0 || self.did_bits > 16 {
            return Err(ConfigError::Invalid(format!(
                "domain tag width must be within 1..=16 bits, got {}",
                self.did_bits
            )));
        }
        Ok(())
    }

    pub fn capacity_bytes(&self) -> u64 {
        self.line_size_bytes * self.num_sets as u64 * self.ways as u64
    }

    pub fn capacity_lines(&self) -> u64 {
        self.num_sets as u64 * self.ways as u64
    }

    pub fn offset_bits(&self) -> u32 {
        self.line_size_bytes.trailing_zeros()
    }

    /// Line address (byte address without the block offset).
    pub fn line_addr(&self, addr: u64) -> u64 {
        addr >> self.offset_bits()
    }

    /// Conventional set index over all sets.
    pub fn set_index(&self, line_addr: u64) -> usize {
        (line_addr & (self.num_sets as u64 - 1)) as usize
    }

    pub fn all_ways_mask(&self) -> u64 {
        if self.ways == 64 {
            u64::MAX
        } else {
            (1u64 << self.ways) - 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheLine {
    pub valid: bool,
    pub dirty: bool,
    pub tag: u64,
    pub did: DomainId,
    pub shared: bool,
    /// LRU: value of the array clock at last touch.
    pub repl_meta: u64,
}

/// One way of one set. Orders by `(set, way)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub set: usize,
    pub way: usize,
}

impl Slot {
    pub fn new(set: usize, way: usize) -> Self {
        Self { set, way }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LookupResult {
    Hit(usize),
    Miss,
    /// A line with the requested tag exists but the requester may not use it.
    PermissionMiss(usize),
}

impl LookupResult {
    pub fn is_hit(self) -> bool {
        matches!(self, LookupResult::Hit(_))
    }
}

/// A valid line removed from the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvictedLine {
    pub slot: Slot,
    pub tag: u64,
    pub did: DomainId,
    pub shared: bool,
    pub dirty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct EvictionInfo {
    pub evicted: Option<EvictedLine>,
}

impl EvictionInfo {
    pub fn evicted_tag(&self) -> Option<u64> {
        self.evicted.map(|line| line.tag)
    }

    pub fn was_dirty(&self) -> Option<bool> {
        self.evicted.map(|line| line.dirty)
    }
}

#[derive(Debug, Clone, Copy)]
enum Check {
    TagOnly,
    Domain { did: DomainId, is_nid: bool },
}

impl Check {
    fn permits(self, line: &CacheLine) -> bool {
        match self {
            Check::TagOnly => true,
            Check::Domain { did, is_nid } => line.did == did || (line.shared && is_nid),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CacheArray {
    geometry: CacheGeometry,
    lines: Vec<CacheLine>,
    clock: u64,
    // One stream per set so fills in one set never shift another set's draws.
    streams: Vec<ChaCha8Rng>,
}

impl CacheArray {
    pub fn new(geometry: CacheGeometry) -> Result<Self, ConfigError> {
        geometry.validate()?;
        let streams = match geometry.policy {
            ReplacementPolicy::Lru => Vec::new(),
            ReplacementPolicy::Random { seed } => (0..geometry.num_sets)
                .map(|set| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(set as u64);
                    rng
                })
                .collect(),
        };
        Ok(Self {
            geometry,
            lines: vec![CacheLine::default(); geometry.num_sets * geometry.ways],
            clock: 0,
            streams,
        })
    }

    pub fn geometry(&self) -> &CacheGeometry {
        &self.geometry
    }

    fn check_set(&self, set: usize) -> Result<(), CacheError> {
        if set >= self.geometry.num_sets {
            return Err(CacheError::SetOutOfRange { set, num_sets: self.geometry.num_sets });
        }
        Ok(())
    }

    fn check_slot(&self, slot: Slot) -> Result<(), CacheError> {
        self.check_set(slot.set)?;
        if slot.way >= self.geometry.ways {
            return Err(CacheError::WayOutOfRange { way: slot.way, ways: self.geometry.ways });
        }
        Ok(())
    }

    fn idx(&self, slot: Slot) -> usize {
        slot.set * self.geometry.ways + slot.way
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    pub fn line(&self, slot: Slot) -> Result<&CacheLine, CacheError> {
        self.check_slot(slot)?;
        Ok(&self.lines[self.idx(slot)])
    }

    pub fn set_lines(&self, set: usize) -> Result<&[CacheLine], CacheError> {
        self.check_set(set)?;
        let start = set * self.geometry.ways;
        Ok(&self.lines[start..start + self.geometry.ways])
    }

    /// All ways of `set` as candidate slots.
    pub fn set_slots(&self, set: usize) -> impl Iterator<Item = Slot> {
        (0..self.geometry.ways).map(move |way| Slot { set, way })
    }

    fn find(&mut self, set: usize, tag: u64, ways_mask: u64, check: Check) -> Result<LookupResult, CacheError> {
        self.check_set(set)?;
        let base = set * self.geometry.ways;
        let mut denied = None;
        for way in 0..self.geometry.ways {
            if ways_mask & (1 << way) == 0 {
                continue;
            }
            let line = &self.lines[base + way];
            if !line.valid || line.tag != tag {
                continue;
            }
            if check.permits(line) {
                let now = self.tick();
                self.lines[base + way].repl_meta = now;
                return Ok(LookupResult::Hit(way));
            }
            denied.get_or_insert(way);
        }
        Ok(denied.map_or(LookupResult::Miss, LookupResult::PermissionMiss))
    }

    /// Domain-checked lookup. A tag match is usable when the line belongs to
    /// the requester, or when it is shared and the requester is domain 0.
    /// Only a hit touches replacement state.
    pub fn lookup(
        &mut self,
        set: usize,
        tag: u64,
        requester_did: DomainId,
        requester_is_nid: bool,
    ) -> Result<LookupResult, CacheError> {
        let mask = self.geometry.all_ways_mask();
        self.find(set, tag, mask, Check::Domain { did: requester_did, is_nid: requester_is_nid })
    }

    /// Domain-checked lookup restricted to the ways in `ways_mask`.
    pub fn lookup_ways(
        &mut self,
        set: usize,
        ways_mask: u64,
        tag: u64,
        requester_did: DomainId,
        requester_is_nid: bool,
    ) -> Result<LookupResult, CacheError> {
        self.find(set, tag, ways_mask, Check::Domain { did: requester_did, is_nid: requester_is_nid })
    }

    /// Tag-only lookup: no domain checks, never a permission miss.
    pub fn lookup_unchecked(&mut self, set: usize, tag: u64) -> Result<LookupResult, CacheError> {
        let mask = self.geometry.all_ways_mask();
        self.find(set, tag, mask, Check::TagOnly)
    }

    /// Non-mutating presence test, for inspection and invariant checks.
    pub fn contains(&self, set: usize, tag: u64, did: Option<DomainId>) -> bool {
        self.set_lines(set)
            .map(|lines| {
                lines
                    .iter()
                    .any(|l| l.valid && l.tag == tag && did.is_none_or(|d| l.did == d))
            })
            .unwrap_or(false)
    }

    /// Invalid slots first (lowest `(set, way)`), otherwise the policy's pick
    /// over the whole candidate pool.
    pub fn select_victim(&mut self, candidates: &[Slot]) -> Result<Slot, CacheError> {
        if candidates.is_empty() {
            return Err(CacheError::EmptyCandidates);
        }
        for &slot in candidates {
            self.check_slot(slot)?;
        }
        if let Some(slot) = candidates.iter().copied().filter(|&s| !self.lines[self.idx(s)].valid).min() {
            return Ok(slot);
        }
        match self.geometry.policy {
            ReplacementPolicy::Lru => Ok(candidates
                .iter()
                .copied()
                .min_by_key(|&s| (self.lines[self.idx(s)].repl_meta, s))
                .expect("non-empty")),
            ReplacementPolicy::Random { .. } => {
                let mut pool = candidates.to_vec();
                pool.sort_unstable();
                let stream = &mut self.streams[pool[0].set];
                let pick = stream.random_range(0..pool.len());
                Ok(pool[pick])
            }
        }
    }

    /// Installs a line and reports the previous occupant.
    pub fn fill(
        &mut self,
        slot: Slot,
        tag: u64,
        did: DomainId,
        shared: bool,
        write: bool,
    ) -> Result<EvictionInfo, CacheError> {
        self.check_slot(slot)?;
        let bits = self.geometry.did_bits;
        if bits < 16 && did.0 >> bits != 0 {
            return Err(CacheError::DomainTooWide { did, bits });
        }
        let now = self.tick();
        let idx = self.idx(slot);
        let old = self.lines[idx];
        self.lines[idx] = CacheLine { valid: true, dirty: write, tag, did, shared, repl_meta: now };
        let evicted = old.valid.then_some(EvictedLine {
            slot,
            tag: old.tag,
            did: old.did,
            shared: old.shared,
            dirty: old.dirty,
        });
        Ok(EvictionInfo { evicted })
    }

    pub fn mark_dirty(&mut self, slot: Slot) -> Result<(), CacheError> {
        self.check_slot(slot)?;
        let idx = self.idx(slot);
        if self.lines[idx].valid {
            self.lines[idx].dirty = true;
        }
        Ok(())
    }

    fn take(&mut self, slot: Slot) -> Option<EvictedLine> {
        let idx = self.idx(slot);
        let line = std::mem::take(&mut self.lines[idx]);
        line.valid.then_some(EvictedLine {
            slot,
            tag: line.tag,
            did: line.did,
            shared: line.shared,
            dirty: line.dirty,
        })
    }

    /// Invalidates every way of the listed sets.
    pub fn invalidate_sets(&mut self, set_ids: &[usize]) -> Result<FlushStats, CacheError> {
        let mut sink = Vec::new();
        self.invalidate_sets_into(set_ids, &mut sink)
    }

    /// Like [`invalidate_sets`](Self::invalidate_sets), appending each removed
    /// line to `removed`.
    pub fn invalidate_sets_into(
        &mut self,
        set_ids: &[usize],
        removed: &mut Vec<EvictedLine>,
    ) -> Result<FlushStats, CacheError> {
        for &set in set_ids {
            self.check_set(set)?;
        }
        let mut stats = FlushStats::default();
        for &set in set_ids {
            for way in 0..self.geometry.ways {
                if let Some(line) = self.take(Slot { set, way }) {
                    stats.lines_invalidated += 1;
                    stats.dirty_writebacks += line.dirty as u64;
                    removed.push(line);
                }
            }
        }
        Ok(stats)
    }

    /// Invalidates every valid line in `sets` for which `pred` holds.
    pub fn invalidate_matching(
        &mut self,
        sets: impl IntoIterator<Item = usize>,
        mut pred: impl FnMut(&CacheLine) -> bool,
        removed: &mut Vec<EvictedLine>,
    ) -> FlushStats {
        let mut stats = FlushStats::default();
        for set in sets {
            if set >= self.geometry.num_sets {
                continue;
            }
            for way in 0..self.geometry.ways {
                let slot = Slot { set, way };
                let line = self.lines[self.idx(slot)];
                if line.valid && pred(&line) {
                    let gone = self.take(slot).expect("valid line");
                    stats.lines_invalidated += 1;
                    stats.dirty_writebacks += gone.dirty as u64;
                    removed.push(gone);
                }
            }
        }
        stats
    }

    /// Invalidates the ways in `ways_mask` across every set.
    pub fn invalidate_ways(&mut self, ways_mask: u64, removed: &mut Vec<EvictedLine>) -> FlushStats {
        let mut stats = FlushStats::default();
        for set in 0..self.geometry.num_sets {
            for way in 0..self.geometry.ways {
                if ways_mask & (1 << way) == 0 {
                    continue;
                }
                if let Some(line) = self.take(Slot { set, way }) {
                    stats.lines_invalidated += 1;
                    stats.dirty_writebacks += line.dirty as u64;
                    removed.push(line);
                }
            }
        }
        stats
    }

    /// Removes the line with `tag` from `set`, if present (tag-only match).
    pub fn invalidate_tag(&mut self, set: usize, tag: u64) -> Result<Option<EvictedLine>, CacheError> {
        self.check_set(set)?;
        let hit = (0..self.geometry.ways).find(|&way| {
            let line = &self.lines[set * self.geometry.ways + way];
            line.valid && line.tag == tag
        });
        Ok(hit.and_then(|way| self.take(Slot { set, way })))
    }

    pub fn invalidate_all(&mut self) -> FlushStats {
        let mut stats = FlushStats::default();
        for line in &mut self.lines {
            if line.valid {
                stats.lines_invalidated += 1;
                stats.dirty_writebacks += line.dirty as u64;
            }
            *line = CacheLine::default();
        }
        stats
    }

    /// Valid lines with their slots, in `(set, way)` order.
    pub fn valid_lines(&self) -> impl Iterator<Item = (Slot, &CacheLine)> {
        let ways = self.geometry.ways;
        self.lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.valid)
            .map(move |(i, l)| (Slot { set: i / ways, way: i % ways }, l))
    }
}
