//! Common interface over the three last-level cache models.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{SharedLlc, WayPartitionedLlc};
use crate::cache::{CacheArray, EvictedLine};
use crate::controller::{AllocReceipt, ChunkedLlc, ControllerConfig};
use crate::error::{ConfigError, Error};
use crate::types::{DomainId, FlushStats, IsolationMode};

/// An LLC request: line address plus the metadata stamped by the domain
/// manager.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LlcRequest {
    pub did: DomainId,
    pub line_addr: u64,
    pub write: bool,
    pub shared: bool,
    pub mode: IsolationMode,
}

/// Which lookup path served a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LlcPath {
    /// Single set of the requester's chunk.
    Exclusive,
    /// Principal set plus free congruent sets.
    Mainstream,
    /// Unmodified shared baseline.
    Shared,
    /// Way-partitioned baseline.
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LlcOutcome {
    pub path: LlcPath,
    pub hit: bool,
    /// A tag matched but the domain check refused it. Instrumentation only:
    /// the latency is that of an ordinary miss.
    pub permission_miss: bool,
    /// Set that served the hit or received the fill.
    pub sid: usize,
    pub eviction: Option<EvictedLine>,
    pub cycles: u64,
}

impl LlcOutcome {
    pub(crate) fn hit(path: LlcPath, sid: usize, cycles: u64) -> Self {
        Self { path, hit: true, permission_miss: false, sid, eviction: None, cycles }
    }

    pub(crate) fn miss(
        path: LlcPath,
        sid: usize,
        permission_miss: bool,
        eviction: Option<EvictedLine>,
        cycles: u64,
    ) -> Self {
        Self { path, hit: false, permission_miss, sid, eviction, cycles }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LlcModel {
    Chunked,
    Shared,
    Way,
}

impl LlcModel {
    pub const ALL: [LlcModel; 3] = [LlcModel::Chunked, LlcModel::Shared, LlcModel::Way];

    pub fn name(self) -> &'static str {
        match self {
            LlcModel::Chunked => "chunked",
            LlcModel::Shared => "shared",
            LlcModel::Way => "way",
        }
    }
}

impl fmt::Display for LlcModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LlcModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chunked" => Ok(LlcModel::Chunked),
            "shared" => Ok(LlcModel::Shared),
            "way" => Ok(LlcModel::Way),
            other => Err(format!("unknown LLC model `{other}` (expected chunked, shared or way)")),
        }
    }
}

/// Result of a partition change (chunk allocation, way assignment, release).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reconfig {
    pub cycles: u64,
    pub flush: FlushStats,
    /// Present for the chunked model only.
    pub receipt: Option<AllocReceipt>,
}

#[derive(Debug, Clone)]
pub enum Llc {
    Chunked(ChunkedLlc),
    Shared(SharedLlc),
    Way(WayPartitionedLlc),
}

impl Llc {
    pub fn build(model: LlcModel, config: &ControllerConfig) -> Result<Self, ConfigError> {
        Ok(match model {
            LlcModel::Chunked => Llc::Chunked(ChunkedLlc::new(config.clone())?),
            LlcModel::Shared => Llc::Shared(SharedLlc::new(config.geometry, config.base_hit_cycles)?),
            LlcModel::Way => Llc::Way(WayPartitionedLlc::new(
                config.geometry,
                config.max_domains,
                config.base_hit_cycles,
            )?),
        })
    }

    pub fn model(&self) -> LlcModel {
        match self {
            Llc::Chunked(_) => LlcModel::Chunked,
            Llc::Shared(_) => LlcModel::Shared,
            Llc::Way(_) => LlcModel::Way,
        }
    }

    pub fn array(&self) -> &CacheArray {
        match self {
            Llc::Chunked(c) => c.array(),
            Llc::Shared(s) => s.array(),
            Llc::Way(w) => w.array(),
        }
    }

    pub fn chunked(&self) -> Option<&ChunkedLlc> {
        match self {
            Llc::Chunked(c) => Some(c),
            _ => None,
        }
    }

    pub fn access(&mut self, req: &LlcRequest) -> Result<LlcOutcome, Error> {
        Ok(match self {
            Llc::Chunked(c) => c.access(req)?,
            Llc::Shared(s) => s.access(req)?,
            Llc::Way(w) => w.access(req)?,
        })
    }

    pub fn write_back(&mut self, req: &LlcRequest) -> Result<bool, Error> {
        Ok(match self {
            Llc::Chunked(c) => c.write_back(req)?,
            Llc::Shared(s) => s.write_back(req)?,
            Llc::Way(w) => w.write_back(req)?,
        })
    }

    /// Gives `did` a private partition equivalent to `sets` whole sets: a
    /// chunk in the chunked model, the same byte capacity in ways in the
    /// way-partitioned model, nothing in the shared model.
    pub fn claim(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        Ok(match self {
            Llc::Chunked(c) => {
                let receipt = c.allocate_chunk(did, sets)?;
                Reconfig { cycles: receipt.cycles, flush: receipt.flush, receipt: Some(receipt) }
            }
            Llc::Shared(_) => Reconfig::default(),
            Llc::Way(w) => {
                let n = w.ways_for_sets(sets);
                Reconfig { cycles: 0, flush: w.assign(did, n)?, receipt: None }
            }
        })
    }

    pub fn release(&mut self, did: DomainId) -> Result<Reconfig, Error> {
        Ok(match self {
            Llc::Chunked(c) => {
                let r = c.deallocate_chunk(did)?;
                Reconfig { cycles: r.cycles, flush: r.flush, receipt: None }
            }
            Llc::Shared(_) => Reconfig::default(),
            Llc::Way(w) => Reconfig { cycles: 0, flush: w.release(did)?, receipt: None },
        })
    }

    pub fn resize(&mut self, did: DomainId, sets: usize) -> Result<Reconfig, Error> {
        match self {
            Llc::Chunked(c) => {
                let receipt = c.resize_chunk(did, sets)?;
                Ok(Reconfig { cycles: receipt.cycles, flush: receipt.flush, receipt: Some(receipt) })
            }
            _ => {
                let released = self.release(did)?;
                let mut claimed = self.claim(did, sets)?;
                claimed.flush += released.flush;
                Ok(claimed)
            }
        }
    }

    /// Invalidates the lines `did` left in shared/pooled storage.
    pub fn sweep_domain(&mut self, did: DomainId) -> FlushStats {
        match self {
            Llc::Chunked(c) => c.sweep_domain(did),
            Llc::Shared(s) => s.sweep_domain(did),
            Llc::Way(w) => w.sweep_domain(did),
        }
    }

    pub fn drain_released(&mut self) -> Vec<EvictedLine> {
        match self {
            Llc::Chunked(c) => c.drain_released(),
            Llc::Shared(s) => s.drain_released(),
            Llc::Way(w) => w.drain_released(),
        }
    }
}
