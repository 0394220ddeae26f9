//! The trusted software component: registers domains, fixes their isolation
//! mode and shared regions, drives chunk allocation, and stamps the domain
//! ID and shared flag onto every request.

use std::collections::BTreeMap;

use crate::error::{DomainError, Error};
use crate::hierarchy::Hierarchy;
use crate::llc::{Llc, Reconfig};
use crate::types::{DomainId, FlushStats, IsolationMode};

/// Chunk size given to exclusive domains that do not ask for one.
pub const DEFAULT_CHUNK_SETS: usize = 512;

/// Half-open byte range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub start: u64,
    pub end: u64,
}

impl Region {
    pub fn new(start: u64, end: u64) -> Self {
        Self { start, end }
    }

    pub fn contains(&self, addr: u64) -> bool {
        self.start <= addr && addr < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainConfig {
    pub did: DomainId,
    pub mode: IsolationMode,
    /// Chunk size in sets; `None` means the manager's default for exclusive
    /// domains and no chunk for mainstream ones.
    pub requested_sets: Option<usize>,
    pub shared_regions: Vec<Region>,
}

impl DomainConfig {
    pub fn exclusive(did: u16, sets: usize) -> Self {
        Self { did: DomainId(did), mode: IsolationMode::Exclusive, requested_sets: Some(sets), shared_regions: vec![] }
    }

    pub fn mainstream(did: u16) -> Self {
        Self { did: DomainId(did), mode: IsolationMode::Mainstream, requested_sets: None, shared_regions: vec![] }
    }

    pub fn with_regions(mut self, regions: Vec<Region>) -> Self {
        self.shared_regions = regions;
        self
    }
}

/// Metadata attached to one request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RequestMeta {
    pub did: DomainId,
    pub shared: bool,
}

/// Anything that can carve private LLC partitions for a domain.
pub trait PartitionControl {
    fn claim(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error>;
    fn release(&mut self, did: DomainId) -> Result<Reconfig, Error>;
    fn resize(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error>;
    fn sweep_domain(&mut self, did: DomainId) -> FlushStats;
}

impl PartitionControl for Hierarchy {
    fn claim(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        Hierarchy::claim(self, did, sets)
    }
    fn release(&mut self, did: DomainId) -> Result<Reconfig, Error> {
        Hierarchy::release(self, did)
    }
    fn resize(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        Hierarchy::resize(self, did, sets)
    }
    fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        Hierarchy::sweep_domain(self, did)
    }
}

impl PartitionControl for Llc {
    fn claim(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        Llc::claim(self, did, sets)
    }
    fn release(&mut self, did: DomainId) -> Result<Reconfig, Error> {
        Llc::release(self, did)
    }
    fn resize(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        Llc::resize(self, did, sets)
    }
    fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        Llc::sweep_domain(self, did)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DomainEntry {
    config: DomainConfig,
    chunk_sets: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct DomainManager {
    max_domains: usize,
    line_size: u64,
    default_chunk_sets: usize,
    domains: BTreeMap<DomainId, DomainEntry>,
}

impl DomainManager {
    pub fn new(max_domains: usize, line_size: u64) -> Self {
        Self { max_domains, line_size, default_chunk_sets: DEFAULT_CHUNK_SETS, domains: BTreeMap::new() }
    }

    pub fn with_default_chunk_sets(mut self, sets: usize) -> Self {
        self.default_chunk_sets = sets;
        self
    }

    pub fn default_chunk_sets(&self) -> usize {
        self.default_chunk_sets
    }

    pub fn is_registered(&self, did: DomainId) -> bool {
        did.is_non_isolated() || self.domains.contains_key(&did)
    }

    /// Isolation mode of a registered domain; domain 0 is always mainstream.
    pub fn mode(&self, did: DomainId) -> Result<IsolationMode, DomainError> {
        if did.is_non_isolated() {
            return Ok(IsolationMode::Mainstream);
        }
        self.domains.get(&did).map(|e| e.config.mode).ok_or(DomainError::UnknownDid(did))
    }

    pub fn config(&self, did: DomainId) -> Option<&DomainConfig> {
        self.domains.get(&did).map(|e| &e.config)
    }

    pub fn chunk_sets(&self, did: DomainId) -> Option<usize> {
        self.domains.get(&did).and_then(|e| e.chunk_sets)
    }

    pub fn registered(&self) -> impl Iterator<Item = &DomainConfig> {
        self.domains.values().map(|e| &e.config)
    }

    fn validate_regions(&self, cfg: &DomainConfig) -> Result<(), DomainError> {
        let bad = |reason: String| DomainError::BadRegions { did: cfg.did, reason };
        let mut regions = cfg.shared_regions.clone();
        regions.sort_unstable();
        for r in &regions {
            if r.start >= r.end {
                return Err(bad(format!("empty region [{:#x}, {:#x})", r.start, r.end)));
            }
            if r.start % self.line_size != 0 || r.end % self.line_size != 0 {
                return Err(bad(format!("region [{:#x}, {:#x}) is not line aligned", r.start, r.end)));
            }
        }
        for pair in regions.windows(2) {
            if pair[1].start < pair[0].end {
                return Err(bad(format!("regions starting at {:#x} and {:#x} overlap", pair[0].start, pair[1].start)));
            }
        }
        Ok(())
    }

    /// Records the domain and, for exclusive mode, allocates its chunk.
    pub fn register_domain(
        &mut self,
        cfg: DomainConfig,
        partitions: &mut impl PartitionControl,
    ) -> Result<Option<Reconfig>, Error> {
        let did = cfg.did;
        if did.is_non_isolated() || did.index() >= self.max_domains {
            return Err(DomainError::DidOutOfRange { did, max_domains: self.max_domains }.into());
        }
        if self.domains.contains_key(&did) {
            return Err(DomainError::DidInUse(did).into());
        }
        if cfg.mode == IsolationMode::Mainstream && cfg.requested_sets.is_some() {
            return Err(DomainError::MainstreamChunk(did).into());
        }
        self.validate_regions(&cfg)?;

        let (chunk_sets, reconfig) = match cfg.mode {
            IsolationMode::Exclusive => {
                let sets = cfg.requested_sets.unwrap_or(self.default_chunk_sets);
                (Some(sets), Some(partitions.claim(did, sets)?))
            }
            IsolationMode::Mainstream => (None, None),
        };
        self.domains.insert(did, DomainEntry { config: cfg, chunk_sets });
        Ok(reconfig)
    }

    /// Releases the chunk (if any), sweeps the domain's mainstream lines and
    /// frees the ID for reuse.
    pub fn teardown_domain(
        &mut self,
        did: DomainId,
        partitions: &mut impl PartitionControl,
    ) -> Result<(Option<Reconfig>, FlushStats), Error> {
        let entry = self.domains.get(&did).ok_or(DomainError::UnknownDid(did))?;
        let released = match entry.chunk_sets {
            Some(_) => Some(partitions.release(did)?),
            None => None,
        };
        let swept = partitions.sweep_domain(did);
        self.domains.remove(&did);
        Ok((released, swept))
    }

    /// Allocates a chunk for a registered exclusive domain that has none.
    pub fn allocate(
        &mut self,
        did: DomainId,
        sets: usize,
        partitions: &mut impl PartitionControl,
    ) -> Result<Reconfig, Error> {
        let entry = self.domains.get_mut(&did).ok_or(DomainError::UnknownDid(did))?;
        if entry.config.mode == IsolationMode::Mainstream {
            return Err(DomainError::MainstreamChunk(did).into());
        }
        let r = partitions.claim(did, sets)?;
        entry.chunk_sets = Some(sets);
        Ok(r)
    }

    pub fn deallocate(&mut self, did: DomainId, partitions: &mut impl PartitionControl) -> Result<Reconfig, Error> {
        let entry = self.domains.get_mut(&did).ok_or(DomainError::UnknownDid(did))?;
        let r = partitions.release(did)?;
        entry.chunk_sets = None;
        Ok(r)
    }

    pub fn resize(
        &mut self,
        did: DomainId,
        sets: usize,
        partitions: &mut impl PartitionControl,
    ) -> Result<Reconfig, Error> {
        let entry = self.domains.get_mut(&did).ok_or(DomainError::UnknownDid(did))?;
        if entry.config.mode == IsolationMode::Mainstream {
            return Err(DomainError::MainstreamChunk(did).into());
        }
        match partitions.resize(did, sets) {
            Ok(r) => {
                entry.chunk_sets = Some(sets);
                Ok(r)
            }
            Err(e) => {
                // the release already happened
                if !matches!(e, Error::Controller(crate::error::ControllerError::NotAllocated(_))) {
                    entry.chunk_sets = None;
                }
                Err(e)
            }
        }
    }

    /// Request metadata for `did` touching `addr`.
    pub fn classify(&self, did: DomainId, addr: u64) -> Result<RequestMeta, DomainError> {
        if did.is_non_isolated() {
            return Ok(RequestMeta { did, shared: false });
        }
        let entry = self.domains.get(&did).ok_or(DomainError::UnknownDid(did))?;
        let shared = entry.config.shared_regions.iter().any(|r| r.contains(addr));
        Ok(RequestMeta { did, shared })
    }
}
