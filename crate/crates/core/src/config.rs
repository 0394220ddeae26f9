//! TOML run configuration. Every key and table is optional and missing ones
//! take the defaults of the 16 MB reference machine, except that an `l1i`,
//! `l1d` or `l2` table, when present, must give `sets`, `ways` and
//! `hit_cycles`.
//!
//! ```toml
//! seed = 42
//! llc_model = "chunked"
//! num_cores = 4
//! memory_latency = 200
//! line_size = 64
//! default_chunk_sets = 512
//!
//! [l1i]
//! sets = 128
//! ways = 8
//! hit_cycles = 4
//!
//! [llc]
//! sets = 16384
//! ways = 16
//! did_bits = 4
//! policy = "lru"          # or "random"
//! principal_sets = 8192
//! max_domains = 16
//! max_sets_per_domain = 8192
//! base_hit_cycles = 80
//! exclusive_extra_cycles = 1
//! mainstream_extra_cycles = 2
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cache::{CacheGeometry, ReplacementPolicy};
use crate::controller::{
    ControllerConfig, BASE_HIT_CYCLES, DEFAULT_MAX_DOMAINS, DEFAULT_MAX_SETS_PER_DOMAIN, EXCLUSIVE_EXTRA_CYCLES,
    MAINSTREAM_EXTRA_CYCLES,
};
use crate::domain::DEFAULT_CHUNK_SETS;
use crate::error::{ConfigError, Error};
use crate::hierarchy::{HierarchyConfig, LevelConfig, DEFAULT_MEMORY_LATENCY, L1_HIT_CYCLES, L2_HIT_CYCLES};
use crate::llc::LlcModel;
use crate::sim::SimConfig;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PolicyName {
    #[default]
    Lru,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    pub sets: usize,
    pub ways: usize,
    pub hit_cycles: u64,
    #[serde(default)]
    pub policy: PolicyName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LlcFile {
    pub sets: usize,
    pub ways: usize,
    pub did_bits: u32,
    pub policy: PolicyName,
    /// Defaults to half the sets.
    pub principal_sets: Option<usize>,
    pub max_domains: usize,
    pub max_sets_per_domain: usize,
    pub base_hit_cycles: u64,
    pub exclusive_extra_cycles: u64,
    pub mainstream_extra_cycles: u64,
}

impl Default for LlcFile {
    fn default() -> Self {
        Self {
            sets: 16_384,
            ways: 16,
            did_bits: 4,
            policy: PolicyName::Lru,
            principal_sets: None,
            max_domains: DEFAULT_MAX_DOMAINS,
            max_sets_per_domain: DEFAULT_MAX_SETS_PER_DOMAIN,
            base_hit_cycles: BASE_HIT_CYCLES,
            exclusive_extra_cycles: EXCLUSIVE_EXTRA_CYCLES,
            mainstream_extra_cycles: MAINSTREAM_EXTRA_CYCLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub llc_model: LlcModel,
    pub num_cores: usize,
    pub memory_latency: u64,
    pub line_size: u64,
    pub default_chunk_sets: usize,
    pub l1i: LevelFile,
    pub l1d: LevelFile,
    pub l2: LevelFile,
    pub llc: LlcFile,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            llc_model: LlcModel::Chunked,
            num_cores: 4,
            memory_latency: DEFAULT_MEMORY_LATENCY,
            line_size: 64,
            default_chunk_sets: DEFAULT_CHUNK_SETS,
            l1i: LevelFile { sets: 128, ways: 8, hit_cycles: L1_HIT_CYCLES, policy: PolicyName::Lru },
            l1d: LevelFile { sets: 64, ways: 8, hit_cycles: L1_HIT_CYCLES, policy: PolicyName::Lru },
            l2: LevelFile { sets: 512, ways: 16, hit_cycles: L2_HIT_CYCLES, policy: PolicyName::Lru },
            llc: LlcFile::default(),
        }
    }
}

impl serde::Serialize for LlcModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for LlcModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Invalid(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_toml(&text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn policy(&self, name: PolicyName, salt: u64) -> ReplacementPolicy {
        match name {
            PolicyName::Lru => ReplacementPolicy::Lru,
            PolicyName::Random => ReplacementPolicy::Random { seed: self.seed ^ salt },
        }
    }

    fn level(&self, f: &LevelFile, salt: u64) -> Result<LevelConfig, ConfigError> {
        let geometry = CacheGeometry::new(self.line_size, f.sets, f.ways, 4, self.policy(f.policy, salt))?;
        Ok(LevelConfig { geometry, hit_cycles: f.hit_cycles })
    }

    pub fn hierarchy(&self) -> Result<HierarchyConfig, ConfigError> {
        let l = &self.llc;
        let geometry = CacheGeometry::new(self.line_size, l.sets, l.ways, l.did_bits, self.policy(l.policy, 4))?;
        let llc = ControllerConfig {
            geometry,
            max_domains: l.max_domains,
            max_sets_per_domain: l.max_sets_per_domain,
            principal_sets: l.principal_sets.unwrap_or((l.sets / 2).max(1)),
            base_hit_cycles: l.base_hit_cycles,
            excl_extra_cycles: l.exclusive_extra_cycles,
            mainstream_extra_cycles: l.mainstream_extra_cycles,
        };
        let h = HierarchyConfig {
            l1i: self.level(&self.l1i, 1)?,
            l1d: self.level(&self.l1d, 2)?,
            l2: self.level(&self.l2, 3)?,
            llc,
            memory_latency_cycles: self.memory_latency,
            num_cores: self.num_cores,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn sim_config(&self) -> Result<SimConfig, ConfigError> {
        Ok(SimConfig { hierarchy: self.hierarchy()?, model: self.llc_model, default_chunk_sets: self.default_chunk_sets })
    }
}
