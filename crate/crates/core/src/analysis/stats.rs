//! Per-domain, per-level counters.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::types::DomainId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    L1I,
    L1D,
    L2,
    Llc,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::L1I, Level::L1D, Level::L2, Level::Llc];

    pub fn name(self) -> &'static str {
        match self {
            Level::L1I => "L1I",
            Level::L1D => "L1D",
            Level::L2 => "L2",
            Level::Llc => "LLC",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub accesses: u64,
    pub hits: u64,
    pub misses: u64,
    pub permission_misses: u64,
    pub self_evictions: u64,
    pub cross_evictions_suffered: u64,
    pub writebacks: u64,
}

impl LevelStats {
    pub fn record(&mut self, hit: bool) {
        self.accesses += 1;
        if hit {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
    }

    pub fn miss_rate(&self) -> Option<f64> {
        (self.accesses > 0).then(|| self.misses as f64 / self.accesses as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainStats {
    pub l1i: LevelStats,
    pub l1d: LevelStats,
    pub l2: LevelStats,
    pub llc: LevelStats,
    /// LLC traffic caused by instruction fetches.
    pub llc_instr: LevelStats,
    /// LLC traffic caused by data reads and writes.
    pub llc_data: LevelStats,
    /// End-to-end accesses and the cycles they took.
    pub accesses: u64,
    pub cycles: u64,
}

impl DomainStats {
    pub fn level(&self, level: Level) -> &LevelStats {
        match level {
            Level::L1I => &self.l1i,
            Level::L1D => &self.l1d,
            Level::L2 => &self.l2,
            Level::Llc => &self.llc,
        }
    }

    pub fn level_mut(&mut self, level: Level) -> &mut LevelStats {
        match level {
            Level::L1I => &mut self.l1i,
            Level::L1D => &mut self.l1d,
            Level::L2 => &mut self.l2,
            Level::Llc => &mut self.llc,
        }
    }

    /// Arithmetic mean of the instruction and data LLC miss rates, over the
    /// categories that saw traffic.
    pub fn llc_miss_rate_amean(&self) -> Option<f64> {
        let rates: Vec<f64> = [self.llc_instr.miss_rate(), self.llc_data.miss_rate()].into_iter().flatten().collect();
        (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64)
    }

    /// Geometric mean of the same categories.
    pub fn llc_miss_rate_gmean(&self) -> Option<f64> {
        let rates: Vec<f64> = [self.llc_instr.miss_rate(), self.llc_data.miss_rate()].into_iter().flatten().collect();
        (!rates.is_empty()).then(|| rates.iter().product::<f64>().powf(1.0 / rates.len() as f64))
    }
}

/// Average access time as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Amat {
    pub cycles: u64,
    pub accesses: u64,
}

impl Amat {
    pub fn value(&self) -> f64 {
        self.cycles as f64 / self.accesses as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsTable {
    domains: BTreeMap<DomainId, DomainStats>,
    /// LLC evictions keyed by (evicting requester, owner of the evicted line).
    evictions: BTreeMap<(DomainId, DomainId), u64>,
}

impl StatsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn domain(&self, did: DomainId) -> Option<&DomainStats> {
        self.domains.get(&did)
    }

    pub fn domain_mut(&mut self, did: DomainId) -> &mut DomainStats {
        self.domains.entry(did).or_default()
    }

    pub fn domains(&self) -> impl Iterator<Item = (DomainId, &DomainStats)> {
        self.domains.iter().map(|(d, s)| (*d, s))
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn record_llc_eviction(&mut self, requester: DomainId, owner: DomainId) {
        *self.evictions.entry((requester, owner)).or_default() += 1;
        if requester == owner {
            self.domain_mut(owner).llc.self_evictions += 1;
        } else {
            self.domain_mut(owner).llc.cross_evictions_suffered += 1;
        }
    }

    pub fn evictions(&self) -> impl Iterator<Item = ((DomainId, DomainId), u64)> + '_ {
        self.evictions.iter().map(|(k, v)| (*k, *v))
    }

    pub fn eviction_count(&self, requester: DomainId, owner: DomainId) -> u64 {
        self.evictions.get(&(requester, owner)).copied().unwrap_or(0)
    }

    /// Every domain that appears anywhere in the table.
    pub fn all_domains(&self) -> Vec<DomainId> {
        let mut ids: Vec<DomainId> = self.domains.keys().copied().collect();
        for &(a, b) in self.evictions.keys() {
            ids.push(a);
            ids.push(b);
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn amat(&self, did: DomainId) -> Result<Amat, Error> {
        match self.domains.get(&did) {
            Some(s) if s.accesses > 0 => Ok(Amat { cycles: s.cycles, accesses: s.accesses }),
            _ => Err(Error::EmptyStats),
        }
    }

    pub fn amat_global(&self) -> Result<Amat, Error> {
        let (cycles, accesses) =
            self.domains.values().fold((0, 0), |(c, a), s| (c + s.cycles, a + s.accesses));
        if accesses == 0 {
            return Err(Error::EmptyStats);
        }
        Ok(Amat { cycles, accesses })
    }
}
