//! Synthetic access streams. Every generator is a pure function of its spec;
//! randomness comes from a ChaCha8 stream seeded by `spec.seed`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::types::{AccessKind, DomainId};
use crate::workload::scenario::ScenarioEvent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorkloadKind {
    /// Uniformly random lines from a footprint of `footprint_lines`.
    WorkingSet { footprint_lines: u64 },
    /// Walks the footprint with a fixed stride, wrapping around.
    Sequential { footprint_lines: u64, stride_lines: u64 },
    /// `lines` lines whose addresses agree modulo `column_stride` lines (at
    /// index `column`), visited round-robin.
    Conflict { lines: u64, column: u64, column_stride: u64 },
    /// A looping instruction stream over `code_lines` interleaved with random
    /// data accesses over `data_lines`.
    Mixed { code_lines: u64, data_lines: u64, ifetch_percent: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    #[serde(flatten)]
    pub kind: WorkloadKind,
    pub length: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub base_addr: u64,
    #[serde(default = "default_line_size")]
    pub line_size: u64,
    /// Share of data accesses that are writes.
    #[serde(default)]
    pub write_percent: u8,
}

fn default_line_size() -> u64 {
    64
}

impl WorkloadSpec {
    pub fn new(kind: WorkloadKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed, base_addr: 0, line_size: 64, write_percent: 0 }
    }

    pub fn with_base(mut self, base_addr: u64) -> Self {
        self.base_addr = base_addr;
        self
    }

    pub fn with_writes(mut self, write_percent: u8) -> Self {
        self.write_percent = write_percent;
        self
    }

    /// Lines spanned by the generated addresses, starting at `base_addr`.
    pub fn span_lines(&self) -> u64 {
        match self.kind {
            WorkloadKind::WorkingSet { footprint_lines } | WorkloadKind::Sequential { footprint_lines, .. } => {
                footprint_lines
            }
            WorkloadKind::Conflict { lines, column, column_stride } => {
                column + (lines.saturating_sub(1)).saturating_mul(column_stride) + 1
            }
            WorkloadKind::Mixed { code_lines, data_lines, .. } => code_lines + data_lines,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.line_size.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo { what: "line size", value: self.line_size });
        }
        if self.base_addr % self.line_size != 0 {
            return Err(ConfigError::Invalid(format!("base address {:#x} is not line aligned", self.base_addr)));
        }
        if self.write_percent > 100 {
            return Err(ConfigError::Invalid(format!("write percentage {} exceeds 100", self.write_percent)));
        }
        let nonzero = |what: &'static str, v: u64| {
            if v == 0 {
                Err(ConfigError::TooSmall { what, min: 1, value: 0 })
            } else {
                Ok(())
            }
        };
        match self.kind {
            WorkloadKind::WorkingSet { footprint_lines } => nonzero("footprint", footprint_lines)?,
            WorkloadKind::Sequential { footprint_lines, stride_lines } => {
                nonzero("footprint", footprint_lines)?;
                nonzero("stride", stride_lines)?;
            }
            WorkloadKind::Conflict { lines, column, column_stride } => {
                nonzero("conflict line count", lines)?;
                nonzero("column stride", column_stride)?;
                if column >= column_stride {
                    return Err(ConfigError::Invalid(format!(
                        "column {column} must be below the column stride {column_stride}"
                    )));
                }
            }
            WorkloadKind::Mixed { code_lines, data_lines, ifetch_percent } => {
                nonzero("code footprint", code_lines)?;
                nonzero("data footprint", data_lines)?;
                if ifetch_percent > 100 {
                    return Err(ConfigError::Invalid(format!("fetch percentage {ifetch_percent} exceeds 100")));
                }
            }
        }
        let end = self
            .span_lines()
            .checked_mul(self.line_size)
            .and_then(|bytes| bytes.checked_add(self.base_addr));
        if end.is_none() {
            return Err(ConfigError::Invalid("workload footprint overflows the address space".into()));
        }
        Ok(())
    }
}

/// Expands `spec` into `spec.length` ACCESS events issued by `did` on `core`.
pub fn gen(spec: &WorkloadSpec, did: DomainId, core: usize) -> Result<Vec<ScenarioEvent>, ConfigError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let data_kind = |rng: &mut ChaCha8Rng| {
        if spec.write_percent > 0 && rng.random_range(0..100u8) < spec.write_percent {
            AccessKind::Write
        } else {
            AccessKind::Read
        }
    };
    let addr = |line: u64| spec.base_addr + line * spec.line_size;

    let mut events = Vec::with_capacity(spec.length);
    let mut pc = 0u64;
    for i in 0..spec.length as u64 {
        let (kind, line) = match spec.kind {
            WorkloadKind::WorkingSet { footprint_lines } => {
                let line = rng.random_range(0..footprint_lines);
                (data_kind(&mut rng), line)
            }
            WorkloadKind::Sequential { footprint_lines, stride_lines } => {
                let line = ((i as u128 * stride_lines as u128) % footprint_lines as u128) as u64;
                (data_kind(&mut rng), line)
            }
            WorkloadKind::Conflict { lines, column, column_stride } => {
                (data_kind(&mut rng), column + (i % lines) * column_stride)
            }
            WorkloadKind::Mixed { code_lines, data_lines, ifetch_percent } => {
                if rng.random_range(0..100u8) < ifetch_percent {
                    let line = pc;
                    pc = (pc + 1) % code_lines;
                    (AccessKind::IFetch, line)
                } else {
                    (data_kind(&mut rng), code_lines + rng.random_range(0..data_lines))
                }
            }
        };
        events.push(ScenarioEvent::Access { core, did, kind, addr: addr(line) });
    }
    Ok(events)
}
