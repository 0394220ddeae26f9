//! Comma-separated reports. Each function is a pure function of its input;
//! rows follow domain-ID order and rates print with six decimals.
//!
//! | file            | columns |
//! |-----------------|---------|
//! | `domains.csv`   | did, level, accesses, hits, misses, miss_rate, permission_misses, self_evictions, cross_evictions_suffered, writebacks |
//! | `amat.csv`      | did, accesses, cycles, amat, llc_miss_rate_amean, llc_miss_rate_gmean |
//! | `evictions.csv` | requester, owner, evictions |
//! | `overhead.csv`  | component, bits, kib, percent_of_llc |
//! | `compare.csv`   | model, did, accesses, cycles, amat, llc_accesses, llc_misses, llc_miss_rate, cross_evictions_suffered |

use std::io::Write;
use std::path::Path;

use crate::analysis::overhead::OverheadBreakdown;
use crate::analysis::stats::{LevelStats, StatsTable};
use crate::error::Error;
use crate::llc::LlcModel;

fn rate(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn to_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    build(&mut w).expect("writing to memory");
    let bytes = w.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("reports are ASCII")
}

fn level_row(did: String, level: &str, s: &LevelStats) -> Vec<String> {
    vec![
        did,
        level.to_string(),
        s.accesses.to_string(),
        s.hits.to_string(),
        s.misses.to_string(),
        rate(s.miss_rate()),
        s.permission_misses.to_string(),
        s.self_evictions.to_string(),
        s.cross_evictions_suffered.to_string(),
        s.writebacks.to_string(),
    ]
}

pub fn domains_report(stats: &StatsTable) -> String {
    to_string(|w| {
        w.write_record([
            "did",
            "level",
            "accesses",
            "hits",
            "misses",
            "miss_rate",
            "permission_misses",
            "self_evictions",
            "cross_evictions_suffered",
            "writebacks",
        ])?;
        for (did, s) in stats.domains() {
            let rows = [
                ("L1I", &s.l1i),
                ("L1D", &s.l1d),
                ("L2", &s.l2),
                ("LLC", &s.llc),
                ("LLC-instr", &s.llc_instr),
                ("LLC-data", &s.llc_data),
            ];
            for (level, ls) in rows {
                w.write_record(level_row(did.0.to_string(), level, ls))?;
            }
        }
        Ok(())
    })
}

pub fn amat_report(stats: &StatsTable) -> String {
    to_string(|w| {
        w.write_record(["did", "accesses", "cycles", "amat", "llc_miss_rate_amean", "llc_miss_rate_gmean"])?;
        for (did, s) in stats.domains() {
            let amat = stats.amat(did).ok().map(|a| a.value());
            w.write_record([
                did.0.to_string(),
                s.accesses.to_string(),
                s.cycles.to_string(),
                rate(amat),
                rate(s.llc_miss_rate_amean()),
                rate(s.llc_miss_rate_gmean()),
            ])?;
        }
        if let Ok(all) = stats.amat_global() {
            w.write_record([
                "all".to_string(),
                all.accesses.to_string(),
                all.cycles.to_string(),
                rate(Some(all.value())),
                String::new(),
                String::new(),
            ])?;
        }
        Ok(())
    })
}

pub fn evictions_report(stats: &StatsTable) -> String {
    to_string(|w| {
        w.write_record(["requester", "owner", "evictions"])?;
        for ((requester, owner), n) in stats.evictions() {
            w.write_record([requester.0.to_string(), owner.0.to_string(), n.to_string()])?;
        }
        Ok(())
    })
}

pub fn overhead_report(o: &OverheadBreakdown) -> String {
    to_string(|w| {
        w.write_record(["component", "bits", "kib", "percent_of_llc"])?;
        let pct = |bits: u64| format!("{:.2}", bits as f64 / (o.llc_bytes as f64 * 8.0) * 100.0);
        for (name, bits) in [
            ("cst", o.cst_bits),
            ("ectable", o.ectable_bits),
            ("tag_extra", o.tag_extra_bits),
            ("total", o.total_bits),
        ] {
            w.write_record([name.to_string(), bits.to_string(), format!("{:.2}", bits as f64 / 8192.0), pct(bits)])?;
        }
        Ok(())
    })
}

/// Side-by-side per-domain results of one trace on several models, in the
/// order given (callers sort by model name).
pub fn compare_report(runs: &[(LlcModel, &StatsTable)]) -> String {
    to_string(|w| {
        w.write_record([
            "model",
            "did",
            "accesses",
            "cycles",
            "amat",
            "llc_accesses",
            "llc_misses",
            "llc_miss_rate",
            "cross_evictions_suffered",
        ])?;
        for (model, stats) in runs {
            for (did, s) in stats.domains() {
                w.write_record([
                    model.name().to_string(),
                    did.0.to_string(),
                    s.accesses.to_string(),
                    s.cycles.to_string(),
                    rate(stats.amat(did).ok().map(|a| a.value())),
                    s.llc.accesses.to_string(),
                    s.llc.misses.to_string(),
                    rate(s.llc.miss_rate()),
                    s.llc.cross_evictions_suffered.to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

/// Writes `domains.csv`, `amat.csv` and `evictions.csv` into `dir`.
pub fn write_run_reports(dir: &Path, stats: &StatsTable) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in [
        ("domains.csv", domains_report(stats)),
        ("amat.csv", amat_report(stats)),
        ("evictions.csv", evictions_report(stats)),
    ] {
        write_file(&dir.join(name), &body)?;
    }
    Ok(())
}

pub fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    Ok(())
}
