//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chunkcache::analysis::latency::{alloc_latency, dealloc_latency};
use chunkcache::analysis::overhead::storage_overhead;
use chunkcache::analysis::verdict::project;
use chunkcache::cache::CacheGeometry;
use chunkcache::controller::{ChunkedLlc, ControllerConfig};
use chunkcache::domain::DomainConfig;
use chunkcache::hierarchy::HierarchyConfig;
use chunkcache::llc::{Llc, LlcModel, LlcRequest};
use chunkcache::security::differential;
use chunkcache::sim::{simulate, AccessRecord, SimConfig};
use chunkcache::workload::attack::{build_occupancy_probe, build_prime_probe, Party, PrimeProbe};
use chunkcache::workload::{gen, ScenarioEvent, WorkloadKind, WorkloadSpec};
use chunkcache::{DomainId, IsolationMode};

use common::{small_hierarchy, Oracle};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:.2?}, limit {limit:?}"))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chunkcache")).args(args).output().expect("spawn chunkcache")
}

fn table_value(stdout: &str, row: &str) -> Option<(u64, String)> {
    let line = stdout.lines().find(|l| l.split_whitespace().next() == Some(row))?;
    let mut cols = line.split_whitespace().skip(1);
    Some((cols.next()?.parse().ok()?, cols.next()?.to_string()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = cli(&["overhead", "--paper-config"]);
    within(Duration::from_secs(1), start, "overhead --paper-config")?;
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    for (row, bits, kb) in [
        ("CST", 16_384, "2.00"),
        ("EC-TABLE", 1_835_088, "224.01"),
        ("tags", 1_310_720, "160.00"),
        ("total", 3_162_192, "386.01"),
    ] {
        let got = table_value(&stdout, row).ok_or_else(|| format!("no {row} row in:\n{stdout}"))?;
        ensure(got == (bits, kb.to_string()), || format!("{row}: got {got:?}, want ({bits}, {kb})"))?;
    }
    let pct: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("overhead ")?.split('%').next()?.parse().ok())
        .ok_or("no percentage line")?;
    ensure((pct - 2.3).abs() <= 0.1, || format!("percentage {pct}"))?;

    let g = CacheGeometry::lru(64, 16_384, 16).unwrap();
    let lib = storage_overhead(&ControllerConfig::new(g));
    ensure(lib.total_bits == 3_162_192, || format!("library total {}", lib.total_bits))?;

    let out = cli(&["overhead", "--paper-config", "--domains", "32", "--did-bits", "5"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let ec = table_value(&stdout, "EC-TABLE").ok_or("no EC-TABLE row for 32 domains")?;
    ensure(ec == (3_670_176, "448.02".into()), || format!("32-domain EC-TABLE {ec:?}"))?;
    let tags = table_value(&stdout, "tags").ok_or("no tags row for 32 domains")?;
    ensure(tags.0 == 1_572_864, || format!("32-domain tags {tags:?}"))?;
    Ok(format!(
        "386.01 KB total, {pct:.2}%, 32 domains: EC-TABLE 448.02 KB, tag delta {} KB",
        (tags.0 - 1_310_720) / 8 / 1024
    ))
}

fn req(did: u16, line_addr: u64, mode: IsolationMode) -> LlcRequest {
    LlcRequest { did: DomainId(did), line_addr, write: false, shared: false, mode }
}

fn hit_cycles(llc: &mut Llc, r: &LlcRequest) -> Result<u64, String> {
    llc.access(r).map_err(|e| e.to_string())?;
    let o = llc.access(r).map_err(|e| e.to_string())?;
    ensure(o.hit, || format!("second access by {} missed", r.did))?;
    Ok(o.cycles)
}

fn criterion_2() -> Outcome {
    let cfg = ControllerConfig::new(CacheGeometry::lru(64, 16_384, 16).unwrap()).with_principal_sets(8_192);
    let mut c = ChunkedLlc::new(cfg.clone()).map_err(|e| e.to_string())?;
    let a = c.allocate_chunk(DomainId(1), 8_192).map_err(|e| e.to_string())?;
    ensure(a.cycles == 8_193, || format!("alloc(8192) = {}", a.cycles))?;
    let d = c.deallocate_chunk(DomainId(1)).map_err(|e| e.to_string())?;
    ensure(d.cycles == 8_194, || format!("dealloc(8192) = {}", d.cycles))?;
    ensure(dealloc_latency(8_192) == 8_194, || "dealloc formula".into())?;
    ensure(alloc_latency(1, 16_384) == 16_385, || "worst-case alloc formula".into())?;

    let mut chunked = Llc::build(LlcModel::Chunked, &cfg).unwrap();
    chunked.claim(DomainId(1), 512).map_err(|e| e.to_string())?;
    let excl = hit_cycles(&mut chunked, &req(1, 0x40, IsolationMode::Exclusive))?;
    let main = hit_cycles(&mut chunked, &req(2, 0x80, IsolationMode::Mainstream))?;
    let nid = hit_cycles(&mut chunked, &req(0, 0xc0, IsolationMode::Mainstream))?;
    let mut shared = Llc::build(LlcModel::Shared, &cfg).unwrap();
    let base = hit_cycles(&mut shared, &req(1, 0x40, IsolationMode::Exclusive))?;
    ensure((excl, main, nid, base) == (81, 82, 82, 80), || {
        format!("hit latencies exclusive {excl}, mainstream {main}, NI-D {nid}, shared {base}")
    })?;
    Ok("dealloc 8194, worst alloc 16385, hits 81/82/82/80".into())
}

/// One random attack scenario on the 64-set, 4-way LLC. The attacker never
/// holds more lines per set than the associativity.
fn random_attack(seed: u64) -> Vec<ScenarioEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chunk = || 1usize << rng.random_range(0..5);
    let attacker = Party::exclusive(1, 0, chunk());
    let victim = Party::exclusive(2, 1, chunk());
    if seed % 2 == 0 {
        let p = PrimeProbe {
            num_sets: 64,
            prime_lines: rng.random_range(1..=4),
            target_index: rng.random_range(0..64),
            victim_lines: rng.random_range(1..=8),
            line_size: 64,
        };
        build_prime_probe(&attacker, &victim, &p).unwrap()
    } else {
        let lines = rng.random_range(16..=256);
        let spec = WorkloadSpec::new(
            WorkloadKind::WorkingSet { footprint_lines: rng.random_range(1..=256) },
            rng.random_range(1..=512),
            rng.random(),
        )
        .with_base(1 << 20)
        .with_writes(rng.random_range(0..50));
        build_occupancy_probe(&attacker, &victim, 0, lines, 64, &spec).unwrap()
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let chunked = SimConfig { default_chunk_sets: 8, ..SimConfig::new(small_hierarchy(64, 4, 2), LlcModel::Chunked) };
    let shared = chunked.with_model(LlcModel::Shared);
    let (a, v) = (DomainId(1), DomainId(2));
    let scenarios = 1_000u64;
    let (mut contended, mut detected) = (0u64, 0u64);
    for seed in 0..scenarios {
        let events = random_attack(seed);
        for (victim, subject) in [(v, a), (a, v)] {
            let d = differential(&chunked, &events, victim, subject).map_err(|e| e.to_string())?;
            ensure(d.verdict.is_pass(), || format!("chunked, seed {seed}, subject {subject}: {}", d.verdict))?;
        }
        let d = differential(&shared, &events, v, a).map_err(|e| e.to_string())?;
        if d.with.stats().eviction_count(v, a) > 0 {
            contended += 1;
            detected += u64::from(!d.verdict.is_pass());
        }
    }
    within(Duration::from_secs(120), start, "non-interference suite")?;
    ensure(contended > 0, || "no scenario produced contention on the shared LLC".into())?;
    let rate = detected as f64 / contended as f64;
    ensure(rate >= 0.99, || format!("shared LLC failed only {detected}/{contended} contended scenarios"))?;
    Ok(format!(
        "{scenarios} scenarios pass both ways on chunked; shared fails {detected}/{contended} contended ({:.1}%)",
        rate * 100.0
    ))
}

fn fuzz_against_oracle(seed: u64, sets: usize, ways: usize, principal: usize, events: usize) -> Result<(), String> {
    let g = CacheGeometry::lru(64, sets, ways).unwrap();
    let mut real = ChunkedLlc::new(ControllerConfig::new(g).with_principal_sets(principal)).unwrap();
    let mut oracle = Oracle::new(sets, ways, principal);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines = (sets * ways * 3) as u64;
    let mode = |did: u16| if did <= 2 { IsolationMode::Exclusive } else { IsolationMode::Mainstream };
    let ctx = |i: usize| format!("seed {seed}, {sets}x{ways} P={principal}, event {i}");
    for i in 0..events {
        let did = rng.random_range(0..=4u16);
        let r = rng.random_range(0..100u32);
        if did != 0 && r < 6 {
            let n = 1usize << rng.random_range(0..=(sets - principal).trailing_zeros());
            let held = oracle.chunk_size(did).is_some();
            match (r / 2, held) {
                (0, false) => {
                    let got = real.allocate_chunk(DomainId(did), n).ok().map(|rc| rc.sids);
                    ensure(got == oracle.alloc(did, n), || format!("{}: alloc {n} for {did}", ctx(i)))?;
                }
                (1, true) => {
                    real.deallocate_chunk(DomainId(did)).map_err(|e| format!("{}: {e}", ctx(i)))?;
                    oracle.dealloc(did);
                }
                (2, true) => {
                    let got = real.resize_chunk(DomainId(did), n).ok().map(|rc| rc.sids);
                    oracle.dealloc(did);
                    ensure(got == oracle.alloc(did, n), || format!("{}: resize {did} to {n}", ctx(i)))?;
                }
                _ => {}
            }
            real.check_invariants().map_err(|e| format!("{}: {e}", ctx(i)))?;
            continue;
        }
        let line = rng.random_range(0..lines);
        let shared = did != 0 && rng.random_range(0..10) == 0;
        let m = mode(did);
        let request = LlcRequest { did: DomainId(did), line_addr: line, write: false, shared, mode: m };
        let exclusive = did != 0 && m == IsolationMode::Exclusive;
        if exclusive && !shared && oracle.chunk_size(did).is_none() {
            ensure(real.access(&request).is_err(), || format!("{}: chunkless exclusive access accepted", ctx(i)))?;
            continue;
        }
        let got = real.access(&request).map_err(|e| format!("{}: {e}", ctx(i)))?;
        let want = oracle.access(did, line, exclusive, shared);
        ensure((got.hit, got.permission_miss, got.sid) == (want.hit, want.permission_miss, want.sid), || {
            format!("{}: did {did} line {line:#x} shared {shared}: controller {got:?}, oracle {want:?}", ctx(i))
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let geometries = [(64, 4, 32), (64, 4, 16), (32, 2, 8), (16, 4, 8), (16, 1, 4), (8, 2, 1)];
    let mut total = 0;
    for (k, &(sets, ways, p)) in geometries.iter().enumerate() {
        for rep in 0..3u64 {
            let n = 12_000;
            fuzz_against_oracle(1_000 * k as u64 + rep, sets, ways, p, n)?;
            total += n;
        }
    }
    Ok(format!("{total} events over {} geometries agree", geometries.len()))
}

fn steady_miss_rate(llc: &mut Llc, did: u16, mode: IsolationMode, lines: &[u64], warm: usize) -> Result<f64, String> {
    let mut misses = 0;
    for (i, &l) in lines.iter().enumerate() {
        let o = llc.access(&req(did, l, mode)).map_err(|e| e.to_string())?;
        if i >= warm && !o.hit {
            misses += 1;
        }
    }
    Ok(misses as f64 / (lines.len() - warm) as f64)
}

fn criterion_5() -> Outcome {
    let cfg = ControllerConfig::new(CacheGeometry::lru(64, 16_384, 16).unwrap());
    let stream: Vec<u64> = (0..16 * 100).map(|i| 37 + (i % 16) * 16_384).collect();
    let mut chunked = Llc::build(LlcModel::Chunked, &cfg).unwrap();
    chunked.claim(DomainId(1), 1_024).map_err(|e| e.to_string())?;
    let mut way = Llc::build(LlcModel::Way, &cfg).unwrap();
    way.claim(DomainId(1), 1_024).map_err(|e| e.to_string())?;
    if let Llc::Way(w) = &way {
        let ways = w.map().mask(DomainId(1)).map(u64::count_ones);
        ensure(ways == Some(1), || format!("way partition got {ways:?} ways"))?;
    }
    let c = steady_miss_rate(&mut chunked, 1, IsolationMode::Exclusive, &stream, 32)?;
    let w = steady_miss_rate(&mut way, 1, IsolationMode::Exclusive, &stream, 32)?;
    ensure(c == 0.0 && w == 1.0, || format!("miss rates chunked {c}, way {w}"))?;
    Ok("1024-set chunk 0% vs 1-way partition 100%".into())
}

fn criterion_6() -> Outcome {
    let toy = ControllerConfig::new(CacheGeometry::lru(64, 16, 4).unwrap()).with_principal_sets(8);
    let mut c = ChunkedLlc::new(toy).unwrap();
    let r = c.allocate_chunk(DomainId(1), 4).map_err(|e| e.to_string())?;
    ensure(r.sids == [8, 9, 10, 11], || format!("chunk {:?}", r.sids))?;
    let (c4, c0) = (c.mainstream_candidates(4), c.mainstream_candidates(0));
    ensure(c4 == [4, 12] && c0 == [0], || format!("candidates {c4:?} {c0:?}"))?;
    c.deallocate_chunk(DomainId(1)).map_err(|e| e.to_string())?;
    let c0 = c.mainstream_candidates(0);
    ensure(c0 == [0, 8], || format!("after release {c0:?}"))?;

    // NI-D working set larger than the principal chunk alone
    let cfg = ControllerConfig::new(CacheGeometry::lru(64, 16_384, 16).unwrap());
    let footprint = 163_840u64;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let stream: Vec<u64> = (0..1_000_000).map(|_| rng.random_range(0..footprint)).collect();
    let mut rates = Vec::new();
    for chunk in [8_192, 4_096] {
        let mut llc = Llc::build(LlcModel::Chunked, &cfg).unwrap();
        llc.claim(DomainId(1), chunk).map_err(|e| e.to_string())?;
        rates.push(steady_miss_rate(&mut llc, 0, IsolationMode::Mainstream, &stream, 600_000)?);
    }
    ensure(rates[1] < rates[0], || format!("miss rate all allocated {}, 4096 free {}", rates[0], rates[1]))?;
    Ok(format!(
        "toy candidates exact; NI-D miss rate {:.4} all allocated vs {:.4} with 4096 free",
        rates[0], rates[1]
    ))
}

const RESIZE_SCHEDULE: [usize; 4] = [1, 512, 2_048, 1];
const PHASE_LEN: usize = 200_000;
const OTHER_EVERY: usize = 20;

/// D0 on core 0 stays inside the principal chunk; D1-D3 hold 512-set chunks;
/// D4 on core 4 runs a 16384-line working set through the resize schedule.
fn resize_scenario(resize: bool) -> Vec<ScenarioEvent> {
    let mut ev = Vec::new();
    for did in 1..=3u16 {
        ev.push(ScenarioEvent::Register(DomainConfig::exclusive(did, 512)));
    }
    ev.push(ScenarioEvent::Register(DomainConfig::exclusive(4, RESIZE_SCHEDULE[0])));
    for did in 0..=4u16 {
        ev.push(ScenarioEvent::Switch { core: did as usize, did: DomainId(did) });
    }
    let per_other = RESIZE_SCHEDULE.len() * PHASE_LEN / OTHER_EVERY;
    let others: Vec<Vec<ScenarioEvent>> = (0..=3u16)
        .map(|did| {
            let spec = WorkloadSpec::new(WorkloadKind::WorkingSet { footprint_lines: 4_096 }, per_other, 100 + did as u64)
                .with_base((did as u64) << 32)
                .with_writes(20);
            gen(&spec, DomainId(did), did as usize).unwrap()
        })
        .collect();
    let d4 = WorkloadSpec::new(WorkloadKind::WorkingSet { footprint_lines: 16_384 }, RESIZE_SCHEDULE.len() * PHASE_LEN, 7)
        .with_base(5 << 32);
    let d4 = gen(&d4, DomainId(4), 4).unwrap();
    let mut o = 0;
    for (phase, &sets) in RESIZE_SCHEDULE.iter().enumerate() {
        if phase > 0 && resize {
            ev.push(ScenarioEvent::Resize { did: DomainId(4), sets });
        }
        for i in 0..PHASE_LEN {
            if i == PHASE_LEN / 2 {
                ev.push(ScenarioEvent::barrier(format!("steady-{phase}")));
            } else if i == 0 {
                ev.push(ScenarioEvent::barrier(format!("warm-{phase}")));
            }
            ev.push(d4[phase * PHASE_LEN + i].clone());
            if i % OTHER_EVERY == 0 {
                for other in &others {
                    ev.push(other[o].clone());
                }
                o += 1;
            }
        }
    }
    ev
}

fn llc_miss_rate(records: &[AccessRecord], did: DomainId) -> f64 {
    let llc: Vec<bool> = records.iter().filter(|r| r.request.did == did).filter_map(|r| r.outcome.llc.map(|o| o.hit)).collect();
    llc.iter().filter(|h| !**h).count() as f64 / llc.len().max(1) as f64
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let cfg = SimConfig::new(HierarchyConfig::reference_machine(5), LlcModel::Chunked);
    let with = simulate(&cfg, &resize_scenario(true)).map_err(|e| e.to_string())?;
    let without = simulate(&cfg, &resize_scenario(false)).map_err(|e| e.to_string())?;
    let rates: Vec<f64> =
        (0..RESIZE_SCHEDULE.len()).map(|p| llc_miss_rate(with.phase(&format!("steady-{p}")), DomainId(4))).collect();
    let detail = rates.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" / ");
    ensure(rates[0] >= rates[1] && rates[1] >= rates[2], || format!("not monotone over phases 1-3: {detail}"))?;
    ensure((rates[3] - rates[0]).abs() <= 0.01, || format!("phase 4 does not return to phase 1: {detail}"))?;
    for did in 0..=3u16 {
        let (a, b) = (project(with.log(), DomainId(did)), project(without.log(), DomainId(did)));
        ensure(a == b, || format!("domain {did} observations changed by the resizes"))?;
    }
    within(Duration::from_secs(60), start, "resize replay")?;
    Ok(format!("D4 steady LLC miss rate {detail}; D0-D3 unchanged"))
}

const SMALL_CONFIG: &str = "num_cores = 2\ndefault_chunk_sets = 8\n\
[l1i]\nsets = 4\nways = 2\nhit_cycles = 4\n[l1d]\nsets = 4\nways = 2\nhit_cycles = 4\n\
[l2]\nsets = 8\nways = 4\nhit_cycles = 14\n[llc]\nsets = 64\nways = 4\n";

const WORKLOAD: &str = "did = 1\ncore = 1\nsets = 8\nkind = \"mixed\"\ncode_lines = 64\ndata_lines = 512\n\
ifetch_percent = 30\nlength = 5000\nwrite_percent = 20\n";

fn snapshot(dir: &Path, stdout: &[u8]) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect()
        })
        .unwrap_or_default();
    files.sort();
    files.push(("<stdout>".into(), stdout.to_vec()));
    files
}

fn criterion_8() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let config = root.join("small.toml");
    std::fs::write(&config, SMALL_CONFIG).unwrap();
    let workload = root.join("workload.toml");
    std::fs::write(&workload, WORKLOAD).unwrap();
    let scenario = root.join("scenario.txt");
    let gen_out = cli(&["gen", "--kind", "mixed", "--seed", "11", "--length", "3000", "--did", "0", "--write-percent", "10"]);
    std::fs::write(&scenario, &gen_out.stdout).unwrap();
    let (cfg, wl, sc) = (config.to_str().unwrap(), workload.to_str().unwrap(), scenario.to_str().unwrap());

    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--kind", "working-set", "--seed", "9", "--length", "2000", "--did", "1", "--core", "1"]),
        ("sim-scenario", vec!["sim", "--config", cfg, "--scenario", sc, "--seed", "5"]),
        ("sim-workload", vec!["sim", "--config", cfg, "--workload", wl, "--seed", "5"]),
        ("attack-prime", vec!["attack", "--config", cfg, "--kind", "prime-probe", "--seed", "5"]),
        ("attack-occupancy", vec!["attack", "--config", cfg, "--kind", "occupancy", "--llc", "shared", "--seed", "5"]),
        ("compare", vec!["compare", "--config", cfg, "--workload", wl, "--seed", "5"]),
        ("overhead", vec!["overhead", "--paper-config"]),
    ];
    let mut checked = 0;
    for (name, args) in &runs {
        let mut snaps = Vec::new();
        for rep in 0..2 {
            let out_dir = root.join(format!("{name}-{rep}"));
            let mut full: Vec<&str> = args.clone();
            let out_str = out_dir.to_str().unwrap().to_string();
            full.extend(["--out", &out_str]);
            let out = cli(&full);
            ensure(matches!(out.status.code(), Some(0) | Some(1)), || {
                format!("{name}: {}", String::from_utf8_lossy(&out.stderr))
            })?;
            if *name == "gen" {
                snaps.push(vec![("scenario".into(), std::fs::read(&out_dir).unwrap_or_default())]);
            } else {
                snaps.push(snapshot(&out_dir, &out.stdout));
            }
        }
        ensure(snaps[0] == snaps[1], || format!("{name}: outputs differ between identical runs"))?;
        ensure(snaps[0].iter().any(|(_, b)| !b.is_empty()), || format!("{name}: produced nothing"))?;
        checked += 1;
    }
    Ok(format!("{checked} invocations byte-identical across repeats"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("storage overhead", criterion_1),
        ("latency formulas", criterion_2),
        ("non-interference suite", criterion_3),
        ("oracle equivalence", criterion_4),
        ("associativity at equal capacity", criterion_5),
        ("NI-D congruent utilization", criterion_6),
        ("dynamic resize", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS [{took:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{took:.2?}] {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
