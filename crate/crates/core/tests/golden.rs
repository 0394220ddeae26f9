//! Reports for a fixed scenario on a fixed configuration, checked byte for
//! byte. Set `UPDATE_GOLDEN=1` to rewrite the expected files.

use std::path::PathBuf;

use chunkcache::analysis::report::{amat_report, domains_report, evictions_report};
use chunkcache::{parse_scenario, simulate, RunConfig};

const CONFIG: &str = "num_cores = 2\n\
[l1i]\nsets = 4\nways = 2\nhit_cycles = 4\n[l1d]\nsets = 4\nways = 2\nhit_cycles = 4\n\
[l2]\nsets = 8\nways = 4\nhit_cycles = 14\n[llc]\nsets = 64\nways = 4\n";

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn basic_scenario_reports() {
    let cfg = RunConfig::from_toml(CONFIG).unwrap().sim_config().unwrap();
    let events = parse_scenario(&std::fs::read_to_string(dir().join("basic.txt")).unwrap()).unwrap();
    let sim = simulate(&cfg, &events).unwrap();
    let stats = sim.stats();
    for (name, body) in
        [("basic.domains.csv", domains_report(stats)), ("basic.amat.csv", amat_report(stats)), ("basic.evictions.csv", evictions_report(stats))]
    {
        let path = dir().join(name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &body).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap();
        assert_eq!(body, want, "{name} differs");
    }
}
