//! Request-level vocabulary shared by every cache level.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Domain identifier carried on every memory request and stored in LLC tags.
///
/// Domain 0 is the non-isolated domain (the OS and all unprotected code).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct DomainId(pub u16);

impl DomainId {
    pub const NON_ISOLATED: DomainId = DomainId(0);

    pub fn is_non_isolated(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

/// Per-domain cache isolation setting, fixed at registration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsolationMode {
    /// Private chunk of whole sets; side-channel resilient.
    Exclusive,
    /// Uses the pooled mainstream sets alongside the non-isolated domain.
    Mainstream,
}

impl IsolationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IsolationMode::Exclusive => "EXCLUSIVE",
            IsolationMode::Mainstream => "MAINSTREAM",
        }
    }
}

impl FromStr for IsolationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EXCLUSIVE" => Ok(IsolationMode::Exclusive),
            "MAINSTREAM" => Ok(IsolationMode::Mainstream),
            other => Err(format!("unknown isolation mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccessKind {
    Read,
    Write,
    IFetch,
}

impl AccessKind {
    pub fn is_write(self) -> bool {
        matches!(self, AccessKind::Write)
    }

    pub fn is_instruction(self) -> bool {
        matches!(self, AccessKind::IFetch)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            AccessKind::Read => "R",
            AccessKind::Write => "W",
            AccessKind::IFetch => "IF",
        }
    }
}

impl FromStr for AccessKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(AccessKind::Read),
            "W" => Ok(AccessKind::Write),
            "IF" => Ok(AccessKind::IFetch),
            other => Err(format!("unknown access kind `{other}` (expected R, W or IF)")),
        }
    }
}

/// A memory request as it leaves a core, already stamped with its metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AccessRequest {
    pub core: usize,
    pub did: DomainId,
    pub kind: AccessKind,
    pub addr: u64,
    /// Address lies in one of the issuing domain's shared regions.
    pub shared: bool,
}

/// Lines invalidated by a flush and how many of them were dirty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct FlushStats {
    pub lines_invalidated: u64,
    pub dirty_writebacks: u64,
}

impl FlushStats {
    pub fn new(lines_invalidated: u64, dirty_writebacks: u64) -> Self {
        Self { lines_invalidated, dirty_writebacks }
    }
}

impl std::ops::AddAssign for FlushStats {
    fn add_assign(&mut self, rhs: Self) {
        self.lines_invalidated += rhs.lines_invalidated;
        self.dirty_writebacks += rhs.dirty_writebacks;
    }
}

impl std::ops::Add for FlushStats {
    type Output = FlushStats;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}
