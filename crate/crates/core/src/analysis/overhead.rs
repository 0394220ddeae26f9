//! Storage cost of the controller state: CST, EC-TABLE and the per-line tag
//! extension. Integer bit counts throughout; only the display rounds.

use std::fmt;

use crate::controller::ControllerConfig;

/// Width of the INDEX field of one EC-TABLE row.
pub const INDEX_FIELD_BITS: u64 = 4;
/// Width of the ALLOC flag of one EC-TABLE row.
pub const ALLOC_FIELD_BITS: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverheadBreakdown {
    pub cst_bits: u64,
    pub ectable_bits: u64,
    pub tag_extra_bits: u64,
    pub total_bits: u64,
    /// LLC data capacity the percentage is taken against.
    pub llc_bytes: u64,
}

/// Bits needed to name one of `n` sets.
pub fn sid_bits(num_sets: usize) -> u64 {
    (num_sets.max(1) as u64).next_power_of_two().trailing_zeros() as u64
}

pub fn storage_overhead(cfg: &ControllerConfig) -> OverheadBreakdown {
    let g = &cfg.geometry;
    let cst_bits = g.num_sets as u64;
    let row = ALLOC_FIELD_BITS + INDEX_FIELD_BITS + cfg.max_sets_per_domain as u64 * sid_bits(g.num_sets);
    let ectable_bits = cfg.max_domains as u64 * row;
    let tag_extra_bits = g.num_sets as u64 * g.ways as u64 * (g.did_bits as u64 + 1);
    OverheadBreakdown {
        cst_bits,
        ectable_bits,
        tag_extra_bits,
        total_bits: cst_bits + ectable_bits + tag_extra_bits,
        llc_bytes: g.capacity_bytes(),
    }
}

fn kib(bits: u64) -> f64 {
    bits as f64 / 8.0 / 1024.0
}

impl OverheadBreakdown {
    pub fn cst_kib(&self) -> f64 {
        kib(self.cst_bits)
    }

    pub fn ectable_kib(&self) -> f64 {
        kib(self.ectable_bits)
    }

    pub fn tag_extra_kib(&self) -> f64 {
        kib(self.tag_extra_bits)
    }

    pub fn total_kib(&self) -> f64 {
        kib(self.total_bits)
    }

    /// Total bytes, rounded up to whole bytes.
    pub fn total_bytes(&self) -> u64 {
        self.total_bits.div_ceil(8)
    }

    pub fn percent_of_llc(&self) -> f64 {
        self.total_bits as f64 / (self.llc_bytes as f64 * 8.0) * 100.0
    }
}

impl fmt::Display for OverheadBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>12} {:>10}", "component", "bits", "KB")?;
        for (name, bits) in [("CST", self.cst_bits), ("EC-TABLE", self.ectable_bits), ("tags", self.tag_extra_bits)] {
            writeln!(f, "{:<10} {:>12} {:>10.2}", name, bits, kib(bits))?;
        }
        writeln!(f, "{:<10} {:>12} {:>10.2}", "total", self.total_bits, self.total_kib())?;
        writeln!(f, "overhead {:.2}% of a {} KB LLC", self.percent_of_llc(), self.llc_bytes / 1024)
    }
}
