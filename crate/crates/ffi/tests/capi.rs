use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use chunkcache_ffi::*;

const SMALL: &str = r#"
num_cores = 2
[l1i]
sets = 4
ways = 2
hit_cycles = 4
[l1d]
sets = 4
ways = 2
hit_cycles = 4
[l2]
sets = 8
ways = 4
hit_cycles = 14
[llc]
sets = 64
ways = 4
"#;

fn new_sim(model: Option<&str>) -> *mut ChunkSim {
    let cfg = CString::new(SMALL).unwrap();
    let model = model.map(|m| CString::new(m).unwrap());
    let mut sim = ptr::null_mut();
    let status = unsafe { chunk_sim_new(cfg.as_ptr(), model.as_ref().map_or(ptr::null(), |m| m.as_ptr()), &mut sim) };
    assert_eq!(status, ChunkStatus::Ok, "{}", last_error());
    assert!(!sim.is_null());
    sim
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(chunk_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn access_latencies_through_the_c_interface() {
    let sim = new_sim(None);
    unsafe {
        assert_eq!(chunk_sim_register(sim, 1, ChunkMode::Exclusive, 8), ChunkStatus::Ok);
        assert_eq!(chunk_sim_switch(sim, 1, 1), ChunkStatus::Ok);
        let mut out = std::mem::zeroed::<ChunkAccessResult>();
        assert_eq!(chunk_sim_access(sim, 1, 1, ChunkAccessKind::Read, 0x40, &mut out), ChunkStatus::Ok);
        assert_eq!(out.served_by, ChunkLevel::Memory);
        assert!(out.llc_accessed && !out.llc_hit);
        assert_eq!(out.cycles, 4 + 14 + 81 + 200);
        assert_eq!(chunk_sim_access(sim, 1, 1, ChunkAccessKind::Read, 0x40, &mut out), ChunkStatus::Ok);
        assert_eq!((out.served_by, out.cycles), (ChunkLevel::L1, 4));

        let mut amat = 0.0;
        assert_eq!(chunk_sim_amat(sim, 1, &mut amat), ChunkStatus::Ok);
        assert_eq!(amat, (299.0 + 4.0) / 2.0);

        let mut cycles = 0;
        assert_eq!(chunk_sim_resize(sim, 1, 4, &mut cycles), ChunkStatus::Ok);
        // release 8 sets, then claim 4 of the free sets starting at the principal boundary
        assert_eq!(cycles, (8 + 2) + (4 + 1));
        assert_eq!(chunk_sim_teardown(sim, 1), ChunkStatus::Ok);
        chunk_sim_free(sim);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let sim = new_sim(Some("shared"));
    unsafe {
        // domain 1 is not scheduled on core 0
        assert_eq!(chunk_sim_register(sim, 1, ChunkMode::Mainstream, 0), ChunkStatus::Ok);
        assert_eq!(chunk_sim_access(sim, 0, 1, ChunkAccessKind::Read, 0, ptr::null_mut()), ChunkStatus::Schedule);
        assert!(last_error().contains("core 0"), "{}", last_error());
        assert_eq!(chunk_sim_register(sim, 1, ChunkMode::Mainstream, 0), ChunkStatus::Domain);
        assert_eq!(chunk_sim_register(sim, 2, ChunkMode::Mainstream, 4), ChunkStatus::Domain);
        assert_eq!(chunk_sim_register(sim, 70_000, ChunkMode::Exclusive, 4), ChunkStatus::InvalidArgument);

        let bad = CString::new("ACCESS 0 0 R 0xq").unwrap();
        assert_eq!(chunk_sim_run_scenario(sim, bad.as_ptr(), ptr::null_mut()), ChunkStatus::Parse);
        assert!(last_error().starts_with("line 1, column"), "{}", last_error());

        let good = CString::new("ACCESS 0 0 R 0x0\nACCESS 0 0 W 0x40\n").unwrap();
        let mut n = 0;
        assert_eq!(chunk_sim_run_scenario(sim, good.as_ptr(), &mut n), ChunkStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(last_error(), "");
        chunk_sim_free(sim);
    }
}

#[test]
fn bad_configuration_and_model() {
    let mut sim = ptr::null_mut();
    let cfg = CString::new("[llc]\nsets = 63\n").unwrap();
    assert_eq!(unsafe { chunk_sim_new(cfg.as_ptr(), ptr::null(), &mut sim) }, ChunkStatus::Config);
    assert!(sim.is_null());
    let model = CString::new("victim").unwrap();
    assert_eq!(unsafe { chunk_sim_new(ptr::null(), model.as_ptr(), &mut sim) }, ChunkStatus::InvalidArgument);
    assert_eq!(unsafe { chunk_sim_new(ptr::null(), ptr::null(), ptr::null_mut()) }, ChunkStatus::NullPointer);
    unsafe { chunk_sim_free(ptr::null_mut()) };
}

#[test]
fn overhead_figures() {
    let mut o = unsafe { std::mem::zeroed::<ChunkOverhead>() };
    assert_eq!(unsafe { chunk_overhead(16, 4, &mut o) }, ChunkStatus::Ok);
    assert_eq!((o.cst_bits, o.ectable_bits, o.tag_extra_bits), (16_384, 1_835_088, 1_310_720));
    assert_eq!(o.total_bits, 3_162_192);
    assert!((o.percent_of_llc - 2.3).abs() <= 0.1);
    assert_eq!(unsafe { chunk_overhead(32, 5, &mut o) }, ChunkStatus::Ok);
    assert_eq!(o.ectable_bits, 3_670_176);
    assert_eq!(unsafe { chunk_overhead(16, 4, ptr::null_mut()) }, ChunkStatus::NullPointer);
}

#[test]
fn header_is_generated_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chunkcache.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for name in ["chunk_sim_new", "chunk_sim_free", "chunk_sim_access", "chunk_last_error_message", "typedef struct ChunkSim ChunkSim"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // syntax check with the system C compiler when one is present
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
