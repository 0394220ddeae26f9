use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use chunkcache::analysis::overhead::storage_overhead;
use chunkcache::analysis::report;
use chunkcache::config::RunConfig;
use chunkcache::domain::DomainConfig;
use chunkcache::error::Error;
use chunkcache::security::{differential, probe_misses, standard_attack, AttackKind};
use chunkcache::sim::{simulate, SimConfig};
use chunkcache::workload::{gen, parse_scenario, serialize_scenario, ScenarioEvent, WorkloadKind, WorkloadSpec};
use chunkcache::{DomainId, IsolationMode, LlcModel};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_SIM: u8 = 5;

#[derive(Parser)]
#[command(name = "chunkcache", version, about = "Domain-isolating LLC simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario and write per-domain reports.
    Sim(SimArgs),
    /// Build an attack scenario, replay it with and without the victim, print the verdict.
    Attack(AttackArgs),
    /// Print the storage overhead of the controller state.
    Overhead(OverheadArgs),
    /// Replay one scenario on every LLC model and tabulate the results.
    Compare(CompareArgs),
    /// Emit a synthetic scenario.
    Gen(GenArgs),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// LLC model; overrides the configuration file.
    #[arg(long, value_parser = parse_model)]
    llc: Option<LlcModel>,
    /// Seed; overrides the configuration file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "CHUNKCACHE_OUT_DIR", default_value = "chunkcache-out")]
    out: PathBuf,
}

#[derive(Args)]
struct Input {
    /// Scenario file.
    #[arg(long, conflicts_with = "workload")]
    scenario: Option<PathBuf>,
    /// TOML workload description expanded in place of a scenario file.
    #[arg(long)]
    workload: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_attack)]
    kind: AttackKind,
}

#[derive(Args)]
struct OverheadArgs {
    /// 16 MB, 16-way LLC with 16 domains and 4-bit domain tags.
    #[arg(long)]
    paper_config: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of domains the EC-TABLE holds.
    #[arg(long)]
    domains: Option<usize>,
    /// Width of the per-line domain tag.
    #[arg(long)]
    did_bits: Option<u32>,
    /// Also write overhead.csv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: Input,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    WorkingSet,
    Sequential,
    Conflict,
    Mixed,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 10_000)]
    length: usize,
    #[arg(long, default_value_t = chunkcache::config::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    did: u16,
    #[arg(long, default_value_t = 0)]
    core: usize,
    /// Footprint in lines (working-set, sequential) or data lines (mixed).
    #[arg(long, default_value_t = 1024)]
    footprint: u64,
    #[arg(long, default_value_t = 1)]
    stride: u64,
    /// Conflict lines sharing one column.
    #[arg(long, default_value_t = 16)]
    lines: u64,
    #[arg(long, default_value_t = 0)]
    column: u64,
    #[arg(long, default_value_t = 16_384)]
    column_stride: u64,
    #[arg(long, default_value_t = 64)]
    code_lines: u64,
    #[arg(long, default_value_t = 30)]
    ifetch_percent: u8,
    #[arg(long, default_value_t = 0)]
    write_percent: u8,
    /// Base address (hex accepted with 0x).
    #[arg(long, default_value = "0", value_parser = parse_u64)]
    base: u64,
    /// Write the scenario here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<LlcModel, String> {
    s.parse()
}

fn parse_attack(s: &str) -> Result<AttackKind, String> {
    s.parse()
}

fn parse_u64(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

/// A workload file: who runs it, plus the generator spec.
#[derive(Deserialize)]
struct WorkloadFile {
    #[serde(default)]
    did: u16,
    #[serde(default)]
    core: usize,
    #[serde(default)]
    mode: Option<IsolationMode>,
    #[serde(default)]
    sets: Option<usize>,
    #[serde(flatten)]
    spec: WorkloadSpec,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            Error::Parse(_) | Error::Config(_) => EXIT_INPUT,
            _ => EXIT_SIM,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: e.to_string() }
    }
}

fn read_input_file(path: &Path) -> Result<String, Failure> {
    if !path.is_file() {
        return Err(Failure::usage(format!("no such file: {}", path.display())));
    }
    std::fs::read_to_string(path).map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })
}

fn load_config(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_toml(&read_input_file(path)?).map_err(Error::from)?,
        None => RunConfig::default(),
    };
    if let Some(model) = common.llc {
        cfg.llc_model = model;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn load_events(input: &Input, seed: Option<u64>) -> Result<Vec<ScenarioEvent>, Failure> {
    match (&input.scenario, &input.workload) {
        (Some(path), _) => {
            let text = read_input_file(path)?;
            parse_scenario(&text).map_err(|e| Failure::from(Error::from(e)))
        }
        (None, Some(path)) => {
            let text = read_input_file(path)?;
            let mut w: WorkloadFile = toml::from_str(&text)
                .map_err(|e| Failure { code: EXIT_INPUT, message: format!("workload: {}", e.message()) })?;
            if let Some(seed) = seed {
                w.spec.seed = seed;
            }
            let did = DomainId(w.did);
            let mut events = Vec::new();
            if !did.is_non_isolated() {
                let mode = w.mode.unwrap_or(IsolationMode::Exclusive);
                events.push(ScenarioEvent::Register(DomainConfig {
                    did,
                    mode,
                    requested_sets: w.sets,
                    shared_regions: vec![],
                }));
                events.push(ScenarioEvent::Switch { core: w.core, did });
            }
            events.extend(gen(&w.spec, did, w.core).map_err(Error::from)?);
            Ok(events)
        }
        (None, None) => Err(Failure::usage("one of --scenario or --workload is required")),
    }
}

fn sim_config(cfg: &RunConfig) -> Result<SimConfig, Failure> {
    Ok(cfg.sim_config().map_err(Error::from)?)
}

fn cmd_sim(args: SimArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common)?;
    let events = load_events(&args.input, args.common.seed)?;
    let sim = simulate(&sim_config(&cfg)?, &events)?;
    report::write_run_reports(&args.common.out, sim.stats())?;
    let amat = sim.stats().amat_global().map(|a| format!("{:.6}", a.value())).unwrap_or_else(|_| "n/a".into());
    println!("{} accesses on the {} LLC, AMAT {amat} cycles", sim.log().len(), cfg.llc_model);
    Ok(())
}

fn cmd_attack(args: AttackArgs) -> Result<bool, Failure> {
    let cfg = load_config(&args.common)?;
    let sc = sim_config(&cfg)?;
    if sc.hierarchy.num_cores < 2 {
        return Err(Failure::usage("attacks need at least two cores"));
    }
    let events = standard_attack(&sc, args.kind, cfg.seed)?;
    let (attacker, victim) = (DomainId(1), DomainId(2));
    let d = differential(&sc, &events, victim, attacker)?;
    let out = &args.common.out;
    report::write_run_reports(out, d.with.stats())?;
    report::write_file(&out.join("scenario.txt"), &serialize_scenario(&events))?;
    println!(
        "{} on the {} LLC: attacker probe misses {} with victim, {} without; {}",
        args.kind,
        cfg.llc_model,
        probe_misses(&d.with, attacker),
        probe_misses(&d.without, attacker),
        d.verdict
    );
    Ok(d.verdict.is_pass())
}

fn cmd_overhead(args: OverheadArgs) -> Result<(), Failure> {
    let mut cfg = RunConfig::default();
    if let (Some(path), false) = (&args.config, args.paper_config) {
        cfg = RunConfig::from_toml(&read_input_file(path)?).map_err(Error::from)?;
    }
    if let Some(d) = args.domains {
        cfg.llc.max_domains = d;
    }
    if let Some(b) = args.did_bits {
        cfg.llc.did_bits = b;
    }
    let h = cfg.hierarchy().map_err(Error::from)?;
    let o = storage_overhead(&h.llc);
    print!("{o}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        report::write_file(&dir.join("overhead.csv"), &report::overhead_report(&o))?;
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.common)?;
    let events = load_events(&args.input, args.common.seed)?;
    let base = sim_config(&cfg)?;
    let mut runs = std::thread::scope(|s| {
        let handles: Vec<_> = LlcModel::ALL
            .iter()
            .map(|&model| {
                let sc = base.with_model(model);
                let events = &events;
                s.spawn(move || (model, simulate(&sc, events)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Vec<_>>()
    });
    runs.sort_by_key(|(model, _)| model.name());
    let mut sims = Vec::new();
    for (model, result) in runs {
        sims.push((model, result?));
    }
    let table: Vec<_> = sims.iter().map(|(m, s)| (*m, s.stats())).collect();
    let text = report::compare_report(&table);
    std::fs::create_dir_all(&args.common.out)?;
    report::write_file(&args.common.out.join("compare.csv"), &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let kind = match args.kind {
        GenKind::WorkingSet => WorkloadKind::WorkingSet { footprint_lines: args.footprint },
        GenKind::Sequential => WorkloadKind::Sequential { footprint_lines: args.footprint, stride_lines: args.stride },
        GenKind::Conflict => {
            WorkloadKind::Conflict { lines: args.lines, column: args.column, column_stride: args.column_stride }
        }
        GenKind::Mixed => WorkloadKind::Mixed {
            code_lines: args.code_lines,
            data_lines: args.footprint,
            ifetch_percent: args.ifetch_percent,
        },
    };
    let spec = WorkloadSpec::new(kind, args.length, args.seed).with_base(args.base).with_writes(args.write_percent);
    let events = gen(&spec, DomainId(args.did), args.core).map_err(Error::from)?;
    let text = serialize_scenario(&events);
    match &args.out {
        Some(path) => report::write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sim(a) => cmd_sim(a).map(|_| true),
        Command::Attack(a) => cmd_attack(a),
        Command::Overhead(a) => cmd_overhead(a).map(|_| true),
        Command::Compare(a) => cmd_compare(a).map(|_| true),
        Command::Gen(a) => cmd_gen(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("chunkcache: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
