//! Shared helpers for the integration tests: a brute-force functional model
//! of the chunked LLC and small hierarchy configurations.
#![allow(dead_code)]

use std::collections::BTreeMap;

use chunkcache::cache::CacheGeometry;
use chunkcache::controller::ControllerConfig;
use chunkcache::hierarchy::HierarchyConfig;
use chunkcache::llc::LlcModel;
use chunkcache::sim::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OLine {
    pub tag: u64,
    pub did: u16,
    pub shared: bool,
    pub stamp: u64,
}

type OSet = Vec<Option<OLine>>;

/// Each exclusive domain owns a standalone little cache (its chunk, one
/// entry per chunk index); everything else is one pooled cache keyed by set
/// ID, from which mainstream requests use the principal set and whatever
/// congruent sets are still in the pool.
#[derive(Debug, Clone)]
pub struct Oracle {
    num_sets: usize,
    ways: usize,
    principal: usize,
    clock: u64,
    pool: BTreeMap<usize, OSet>,
    chunks: BTreeMap<u16, Vec<(usize, OSet)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OOutcome {
    pub hit: bool,
    pub permission_miss: bool,
    pub sid: usize,
}

impl Oracle {
    pub fn new(num_sets: usize, ways: usize, principal: usize) -> Self {
        let pool = (0..num_sets).map(|s| (s, vec![None; ways])).collect();
        Self { num_sets, ways, principal, clock: 0, pool, chunks: BTreeMap::new() }
    }

    pub fn chunk_size(&self, did: u16) -> Option<usize> {
        self.chunks.get(&did).map(|c| c.len())
    }

    pub fn free_sets(&self) -> usize {
        self.pool.keys().filter(|&&s| s >= self.principal).count()
    }

    /// Sets handed to `did`, or `None` when there are not enough free sets.
    pub fn alloc(&mut self, did: u16, n: usize) -> Option<Vec<usize>> {
        assert!(!self.chunks.contains_key(&did));
        let free: Vec<usize> = self.pool.keys().copied().filter(|&s| s >= self.principal).take(n).collect();
        if free.len() < n {
            return None;
        }
        let chunk = free
            .iter()
            .map(|s| {
                self.pool.remove(s);
                (*s, vec![None; self.ways])
            })
            .collect();
        self.chunks.insert(did, chunk);
        Some(free)
    }

    pub fn dealloc(&mut self, did: u16) {
        let chunk = self.chunks.remove(&did).expect("allocated");
        for (sid, _) in chunk {
            self.pool.insert(sid, vec![None; self.ways]);
        }
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    pub fn access(&mut self, did: u16, line: u64, exclusive: bool, shared: bool) -> OOutcome {
        let stamp = self.tick();
        let permitted = |l: &OLine| l.did == did || (l.shared && did == 0);
        if exclusive && !shared {
            let chunk = self.chunks.get_mut(&did).expect("exclusive domain without chunk");
            let n = chunk.len() as u64;
            let (sid, set) = &mut chunk[(line % n) as usize];
            let mut permission_miss = false;
            for l in set.iter_mut().flatten() {
                if l.tag == line {
                    if permitted(l) {
                        l.stamp = stamp;
                        return OOutcome { hit: true, permission_miss: false, sid: *sid };
                    }
                    permission_miss = true;
                }
            }
            let way = set.iter().position(|w| w.is_none()).unwrap_or_else(|| {
                (0..set.len()).min_by_key(|&w| set[w].unwrap().stamp).unwrap()
            });
            set[way] = Some(OLine { tag: line, did, shared: false, stamp });
            return OOutcome { hit: false, permission_miss, sid: *sid };
        }

        let p = self.principal;
        let first = (line % p as u64) as usize;
        let candidates: Vec<usize> =
            (first..self.num_sets).step_by(p).filter(|s| *s == first || self.pool.contains_key(s)).collect();
        let mut permission_miss = false;
        for &sid in &candidates {
            for l in self.pool.get_mut(&sid).unwrap().iter_mut().flatten() {
                if l.tag == line {
                    if permitted(l) {
                        l.stamp = stamp;
                        return OOutcome { hit: true, permission_miss: false, sid };
                    }
                    permission_miss = true;
                }
            }
        }
        // invalid slot with the lowest (set, way), else least recent overall
        let mut victim = None;
        'outer: for &sid in &candidates {
            for (w, slot) in self.pool[&sid].iter().enumerate() {
                if slot.is_none() {
                    victim = Some((sid, w));
                    break 'outer;
                }
            }
        }
        let (sid, way) = victim.unwrap_or_else(|| {
            let mut best = (u64::MAX, 0, 0);
            for &sid in &candidates {
                for (w, slot) in self.pool[&sid].iter().enumerate() {
                    let s = slot.unwrap().stamp;
                    if s < best.0 {
                        best = (s, sid, w);
                    }
                }
            }
            (best.1, best.2)
        });
        self.pool.get_mut(&sid).unwrap()[way] = Some(OLine { tag: line, did, shared, stamp });
        OOutcome { hit: false, permission_miss, sid }
    }
}

/// Two cores, L1 4 sets x 2 ways, L2 8 x 4, LLC `sets` x `ways` with the
/// principal chunk at half the sets.
pub fn small_hierarchy(sets: usize, ways: usize, cores: usize) -> HierarchyConfig {
    let mut h = HierarchyConfig::reference_machine(cores);
    h.l1i.geometry = CacheGeometry::lru(64, 4, 2).unwrap();
    h.l1d.geometry = CacheGeometry::lru(64, 4, 2).unwrap();
    h.l2.geometry = CacheGeometry::lru(64, 8, 4).unwrap();
    h.llc = ControllerConfig::new(CacheGeometry::lru(64, sets, ways).unwrap());
    h
}

pub fn small_sim(model: LlcModel, default_chunk_sets: usize) -> SimConfig {
    SimConfig { default_chunk_sets, ..SimConfig::new(small_hierarchy(64, 4, 2), model) }
}
