//! C interface to the chunkcache simulator.
//!
//! Every function returns a [`ChunkStatus`]. On failure the message is kept
//! per thread and can be read with [`chunk_last_error_message`]. Handles are
//! opaque; create them with [`chunk_sim_new`] and release them with
//! [`chunk_sim_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chunkcache::analysis::overhead::storage_overhead;
use chunkcache::config::RunConfig;
use chunkcache::domain::DomainConfig;
use chunkcache::error::Error;
use chunkcache::hierarchy::ServedBy;
use chunkcache::sim::Simulation;
use chunkcache::workload::{parse_scenario, ScenarioEvent};
use chunkcache::{AccessKind, DomainId, IsolationMode, LlcModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Config = 4,
    Domain = 5,
    Partition = 6,
    Schedule = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkMode {
    Exclusive = 0,
    Mainstream = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkAccessKind {
    Read = 0,
    Write = 1,
    IFetch = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkLevel {
    L1 = 0,
    L2 = 1,
    Llc = 2,
    Memory = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkAccessResult {
    pub served_by: ChunkLevel,
    /// The request reached the LLC.
    pub llc_accessed: bool,
    pub llc_hit: bool,
    /// LLC set that served or received the line; 0 if the LLC was not reached.
    pub sid: u64,
    pub cycles: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChunkOverhead {
    pub cst_bits: u64,
    pub ectable_bits: u64,
    pub tag_extra_bits: u64,
    pub total_bits: u64,
    pub percent_of_llc: f64,
}

/// Opaque simulator handle.
pub struct ChunkSim {
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ChunkStatus {
    match e {
        Error::Event { source, .. } => status_of(source),
        Error::Parse(_) => ChunkStatus::Parse,
        Error::Config(_) => ChunkStatus::Config,
        Error::Domain(_) => ChunkStatus::Domain,
        Error::Controller(_) | Error::Partition(_) | Error::Cache(_) => ChunkStatus::Partition,
        Error::Schedule { .. } | Error::NoSuchCore { .. } => ChunkStatus::Schedule,
        Error::Io(_) => ChunkStatus::Io,
        Error::EmptyStats => ChunkStatus::InvalidArgument,
    }
}

fn fail(status: ChunkStatus, msg: &str) -> ChunkStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ChunkStatus>) -> ChunkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ChunkStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(ChunkStatus::Panic, "internal panic"),
    }
}

fn lift(e: Error) -> ChunkStatus {
    fail(status_of(&e), &e.to_string())
}

unsafe fn sim_mut<'a>(sim: *mut ChunkSim) -> Result<&'a mut ChunkSim, ChunkStatus> {
    // SAFETY: the caller passes a handle from chunk_sim_new or null.
    unsafe { sim.as_mut() }.ok_or_else(|| fail(ChunkStatus::NullPointer, "null simulator handle"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, ChunkStatus> {
    if s.is_null() {
        return Ok(None);
    }
    // SAFETY: non-null strings must be NUL terminated.
    let c = unsafe { CStr::from_ptr(s) };
    c.to_str()
        .map(Some)
        .map_err(|_| fail(ChunkStatus::InvalidArgument, &format!("{what} is not valid UTF-8")))
}

fn did_arg(did: u32) -> Result<DomainId, ChunkStatus> {
    u16::try_from(did)
        .map(DomainId)
        .map_err(|_| fail(ChunkStatus::InvalidArgument, &format!("domain id {did} exceeds 65535")))
}

/// Creates a simulator. `config_toml` may be null for the default machine;
/// `model` may be null to keep the configured LLC model ("chunked",
/// "shared" or "way").
///
/// # Safety
/// String arguments must be null or NUL terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_new(
    config_toml: *const c_char,
    model: *const c_char,
    out: *mut *mut ChunkSim,
) -> ChunkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(ChunkStatus::NullPointer, "null output pointer"));
        }
        let mut cfg = match unsafe { str_arg(config_toml, "configuration")? } {
            Some(text) => RunConfig::from_toml(text).map_err(|e| lift(e.into()))?,
            None => RunConfig::default(),
        };
        if let Some(m) = unsafe { str_arg(model, "model")? } {
            cfg.llc_model = m.parse::<LlcModel>().map_err(|e| fail(ChunkStatus::InvalidArgument, &e))?;
        }
        let sc = cfg.sim_config().map_err(|e| lift(e.into()))?;
        let sim = Simulation::new(&sc).map_err(lift)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(ChunkSim { sim })) };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must come from `chunk_sim_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_free(sim: *mut ChunkSim) {
    if !sim.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(sim) });
    }
}

fn apply(sim: &mut ChunkSim, ev: ScenarioEvent) -> Result<(), ChunkStatus> {
    sim.sim.apply(&ev).map_err(lift)
}

/// Registers domain `did`. `sets` is the chunk size for exclusive domains;
/// 0 selects the default. Mainstream domains must pass 0.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_register(sim: *mut ChunkSim, did: u32, mode: ChunkMode, sets: u64) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        let mode = match mode {
            ChunkMode::Exclusive => IsolationMode::Exclusive,
            ChunkMode::Mainstream => IsolationMode::Mainstream,
        };
        let requested_sets = (sets > 0).then_some(sets as usize);
        let cfg = DomainConfig { did: did_arg(did)?, mode, requested_sets, shared_regions: vec![] };
        apply(sim, ScenarioEvent::Register(cfg))
    })
}

/// Releases the domain's chunk and lines and frees the ID.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_teardown(sim: *mut ChunkSim, did: u32) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        apply(sim, ScenarioEvent::Teardown { did: did_arg(did)? })
    })
}

/// Schedules `did` on `core`, flushing the core's private caches.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_switch(sim: *mut ChunkSim, core: u32, did: u32) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        apply(sim, ScenarioEvent::Switch { core: core as usize, did: did_arg(did)? })
    })
}

/// One memory access. `out` may be null.
///
/// # Safety
/// `sim` must be a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_access(
    sim: *mut ChunkSim,
    core: u32,
    did: u32,
    kind: ChunkAccessKind,
    addr: u64,
    out: *mut ChunkAccessResult,
) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        let kind = match kind {
            ChunkAccessKind::Read => AccessKind::Read,
            ChunkAccessKind::Write => AccessKind::Write,
            ChunkAccessKind::IFetch => AccessKind::IFetch,
        };
        apply(sim, ScenarioEvent::Access { core: core as usize, did: did_arg(did)?, kind, addr })?;
        let rec = sim.sim.log().last().expect("access was logged");
        if !out.is_null() {
            let o = &rec.outcome;
            let result = ChunkAccessResult {
                served_by: match o.served_by {
                    ServedBy::L1 => ChunkLevel::L1,
                    ServedBy::L2 => ChunkLevel::L2,
                    ServedBy::Llc => ChunkLevel::Llc,
                    ServedBy::Memory => ChunkLevel::Memory,
                },
                llc_accessed: o.llc.is_some(),
                llc_hit: o.llc.is_some_and(|l| l.hit),
                sid: o.llc.map_or(0, |l| l.sid as u64),
                cycles: o.cycles,
            };
            // SAFETY: checked non-null.
            unsafe { *out = result };
        }
        Ok(())
    })
}

/// Resizes the domain's chunk. `out_cycles` (nullable) receives the
/// reconfiguration cost.
///
/// # Safety
/// `sim` must be a live handle; `out_cycles` null or writable.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_resize(sim: *mut ChunkSim, did: u32, sets: u64, out_cycles: *mut u64) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        apply(sim, ScenarioEvent::Resize { did: did_arg(did)?, sets: sets as usize })?;
        if !out_cycles.is_null() {
            let cycles = sim.sim.reconfigs().last().map_or(0, |r| r.cycles);
            // SAFETY: checked non-null.
            unsafe { *out_cycles = cycles };
        }
        Ok(())
    })
}

/// Parses and replays scenario text. `out_accesses` (nullable) receives the
/// number of accesses logged so far.
///
/// # Safety
/// `sim` must be a live handle; `text` NUL terminated.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_run_scenario(
    sim: *mut ChunkSim,
    text: *const c_char,
    out_accesses: *mut u64,
) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        let text = unsafe { str_arg(text, "scenario")? }
            .ok_or_else(|| fail(ChunkStatus::NullPointer, "null scenario text"))?;
        let events = parse_scenario(text).map_err(|e| lift(e.into()))?;
        sim.sim.run(&events).map_err(lift)?;
        if !out_accesses.is_null() {
            // SAFETY: checked non-null.
            unsafe { *out_accesses = sim.sim.log().len() as u64 };
        }
        Ok(())
    })
}

/// Average access time of `did` in cycles.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn chunk_sim_amat(sim: *mut ChunkSim, did: u32, out: *mut f64) -> ChunkStatus {
    guard(|| {
        let sim = unsafe { sim_mut(sim)? };
        if out.is_null() {
            return Err(fail(ChunkStatus::NullPointer, "null output pointer"));
        }
        let amat = sim.sim.stats().amat(did_arg(did)?).map_err(lift)?;
        // SAFETY: checked non-null.
        unsafe { *out = amat.value() };
        Ok(())
    })
}

/// Storage overhead of the default 16 MB LLC with `max_domains` domains and
/// `did_bits`-wide domain tags.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chunk_overhead(max_domains: u32, did_bits: u32, out: *mut ChunkOverhead) -> ChunkStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(ChunkStatus::NullPointer, "null output pointer"));
        }
        let mut cfg = RunConfig::default();
        cfg.llc.max_domains = max_domains as usize;
        cfg.llc.did_bits = did_bits;
        let h = cfg.hierarchy().map_err(|e| lift(e.into()))?;
        let o = storage_overhead(&h.llc);
        let result = ChunkOverhead {
            cst_bits: o.cst_bits,
            ectable_bits: o.ectable_bits,
            tag_extra_bits: o.tag_extra_bits,
            total_bits: o.total_bits,
            percent_of_llc: o.percent_of_llc(),
        };
        // SAFETY: checked non-null.
        unsafe { *out = result };
        Ok(())
    })
}

/// Message of the last failure on this thread, empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn chunk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn chunk_status_str(status: ChunkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ChunkStatus::Ok => c"ok",
        ChunkStatus::NullPointer => c"null pointer",
        ChunkStatus::InvalidArgument => c"invalid argument",
        ChunkStatus::Parse => c"parse error",
        ChunkStatus::Config => c"configuration error",
        ChunkStatus::Domain => c"domain error",
        ChunkStatus::Partition => c"partition error",
        ChunkStatus::Schedule => c"scheduling error",
        ChunkStatus::Io => c"i/o error",
        ChunkStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
