use thiserror::Error;

use crate::types::DomainId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{what} must be a power of two, got {value}")]
    NotPowerOfTwo { what: &'static str, value: u64 },
    #[error("{what} must be at least {min}, got {value}")]
    TooSmall { what: &'static str, min: u64, value: u64 },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacheError {
    #[error("set {set} out of range (cache has {num_sets} sets)")]
    SetOutOfRange { set: usize, num_sets: usize },
    #[error("way {way} out of range (cache has {ways} ways)")]
    WayOutOfRange { way: usize, ways: usize },
    #[error("victim selection needs at least one candidate slot")]
    EmptyCandidates,
    #[error("domain id {did} does not fit in {bits} tag bits")]
    DomainTooWide { did: DomainId, bits: u32 },
}

/// Failures reported by the chunked LLC controller.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ControllerError {
    #[error("domain {0} is outside the supported domain range")]
    UnregisteredDomain(DomainId),
    #[error("domain {0} already holds a chunk")]
    AlreadyAllocated(DomainId),
    #[error("domain {0} holds no chunk")]
    NotAllocated(DomainId),
    #[error("chunk size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("chunk size {requested} exceeds the per-domain maximum of {max} sets")]
    ExceedsMax { requested: usize, max: usize },
    #[error("only {available} free sets left, {requested} requested")]
    InsufficientFreeSets { requested: usize, available: usize },
    #[error("exclusive-mode access by {0} which holds no chunk")]
    ExclusiveWithoutChunk(DomainId),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// Failures reported by the way-partitioned baseline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("domain {0} has no way mask")]
    UnmappedDomain(DomainId),
    #[error("domain {0} already has a way mask")]
    AlreadyMapped(DomainId),
    #[error("{requested} ways requested but only {available} can be given away")]
    InsufficientWays { requested: usize, available: usize },
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("domain id {did} outside [1, {max_domains})")]
    DidOutOfRange { did: DomainId, max_domains: usize },
    #[error("domain {0} is already registered")]
    DidInUse(DomainId),
    #[error("domain {0} is not registered")]
    UnknownDid(DomainId),
    #[error("shared regions of {did} are invalid: {reason}")]
    BadRegions { did: DomainId, reason: String },
    #[error("mainstream-mode domain {0} cannot hold a chunk")]
    MainstreamChunk(DomainId),
}

/// Scenario text could not be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: {message}")]
    Range { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Controller(#[from] ControllerError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("core {core} runs {current}, but the request was issued by {requested}")]
    Schedule { core: usize, current: DomainId, requested: DomainId },
    #[error("core {core} does not exist ({num_cores} cores configured)")]
    NoSuchCore { core: usize, num_cores: usize },
    #[error("no accesses recorded")]
    EmptyStats,
    #[error("event {index}: {source}")]
    Event { index: usize, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
