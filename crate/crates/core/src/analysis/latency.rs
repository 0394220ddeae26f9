//! Cycle-cost formulas for chunk management.
//!
//! Allocation walks the set-status table one set per cycle and then spends
//! one cycle writing the chunk-table row. De-allocation spends one cycle
//! reading the row, one updating it, and one per released set.

/// Cycles to allocate a chunk after scanning `sids_scanned` set-status bits.
pub fn alloc_latency(_ch_num: usize, sids_scanned: usize) -> u64 {
    sids_scanned as u64 + 1
}

/// Cycles to release a chunk of `ch_num` sets.
pub fn dealloc_latency(ch_num: usize) -> u64 {
    ch_num as u64 + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_allocation_scans_whole_table() {
        assert_eq!(alloc_latency(8_192, 16_384), 16_385);
    }

    #[test]
    fn best_case_allocation_scans_only_what_it_claims() {
        assert_eq!(alloc_latency(4, 4), 5);
    }

    #[test]
    fn deallocation() {
        assert_eq!(dealloc_latency(8_192), 8_194);
        assert_eq!(dealloc_latency(4), 6);
        assert_eq!(dealloc_latency(1), 3);
    }
}
