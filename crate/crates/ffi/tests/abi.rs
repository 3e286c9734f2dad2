//! Exercises the C ABI from Rust, and from C when a compiler is available.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gmt_chains_ffi::*;

const TRIANGLE: &str = r#"{"schema":"gmt-chains/chain/v1","group":{"kind":"integers"},
"complex":{"ambient_dim":2,"vertices":[["0","0"],["1","0"],["0","1"]],"cells":[[0,1,2]]},
"dim":2,"terms":[{"cell":[0,1,2],"coefficient":"1"}]}"#;

fn parse(json: &str) -> *mut GmtChain {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gmt_chain_from_json(text.as_ptr(), &mut out) }, GmtStatus::Ok);
    out
}

fn last_kind() -> String {
    unsafe { CStr::from_ptr(gmt_last_error_kind()) }.to_str().unwrap().to_owned()
}

#[test]
fn boundary_mass_and_round_trip() {
    let tri = parse(TRIANGLE);
    unsafe {
        assert_eq!(gmt_chain_dim(tri), 2);
        let mut b = ptr::null_mut();
        assert_eq!(gmt_chain_boundary(tri, &mut b), GmtStatus::Ok);
        assert_eq!(gmt_chain_term_count(b), 3);
        let mut mass = 0.0;
        assert_eq!(gmt_chain_mass(b, &mut mass), GmtStatus::Ok);
        assert!((mass - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        let mut bb = ptr::null_mut();
        assert_eq!(gmt_chain_boundary(b, &mut bb), GmtStatus::Ok);
        assert_eq!(gmt_chain_term_count(bb), 0);

        let mut json = ptr::null_mut();
        assert_eq!(gmt_chain_to_json(tri, &mut json), GmtStatus::Ok);
        let again = parse(CStr::from_ptr(json).to_str().unwrap());
        assert_eq!(gmt_chain_term_count(again), 1);
        gmt_string_free(json);
        for c in [tri, b, bb, again] {
            gmt_chain_free(c);
        }
    }
}

#[test]
fn slice_and_reduction() {
    let tri = parse(TRIANGLE);
    unsafe {
        let (grad, level) = (CString::new("1,0").unwrap(), CString::new("1/2").unwrap());
        let mut s = ptr::null_mut();
        assert_eq!(gmt_chain_slice(tri, grad.as_ptr(), ptr::null(), level.as_ptr(), &mut s), GmtStatus::Ok);
        assert_eq!(gmt_chain_dim(s), 1);
        let mut mass = 0.0;
        gmt_chain_mass(s, &mut mass);
        assert!((mass - 0.5).abs() < 1e-12);

        let doubled = {
            let mut out = ptr::null_mut();
            assert_eq!(gmt_chain_add(tri, tri, &mut out), GmtStatus::Ok);
            out
        };
        let mut reduced = ptr::null_mut();
        assert_eq!(gmt_chain_reduce_mod(doubled, 2, &mut reduced), GmtStatus::Ok);
        assert_eq!(gmt_chain_term_count(reduced), 0);
        for c in [tri, s, doubled, reduced] {
            gmt_chain_free(c);
        }
    }
}

#[test]
fn errors_map_to_status_codes() {
    let tri = parse(TRIANGLE);
    unsafe {
        let bad = CString::new("{").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(gmt_chain_from_json(bad.as_ptr(), &mut out), GmtStatus::Parse);
        assert!(out.is_null());
        assert_eq!(last_kind(), "Parse");

        let (grad, level) = (CString::new("1,0").unwrap(), CString::new("0").unwrap());
        assert_eq!(
            gmt_chain_slice(tri, grad.as_ptr(), ptr::null(), level.as_ptr(), &mut out),
            GmtStatus::Precondition
        );
        assert_eq!(last_kind(), "NonRegularValue");

        assert_eq!(gmt_chain_boundary(ptr::null(), &mut out), GmtStatus::NullArgument);
        assert_eq!(gmt_chain_mass(tri, ptr::null_mut()), GmtStatus::NullArgument);
        assert_eq!(gmt_chain_dim(ptr::null()), usize::MAX);
        gmt_chain_free(ptr::null_mut());
        gmt_chain_free(tri);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gmt_chains.h")).unwrap();
    for name in [
        "gmt_version", "gmt_last_error_message", "gmt_last_error_kind", "gmt_chain_from_json", "gmt_chain_to_json",
        "gmt_string_free", "gmt_chain_free", "gmt_chain_dim", "gmt_chain_term_count", "gmt_chain_boundary",
        "gmt_chain_add", "gmt_chain_slice", "gmt_chain_reduce_mod", "gmt_chain_mass", "gmt_chain_flat_norm",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct GmtChain GmtChain;"));
}

/// Compiles `tests/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // Test binaries live in target/<profile>/deps; the static library one level up.
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libgmt_chains_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out_dir = smoke_build_dir();
    let program = out_dir.join("smoke");
    let status = Command::new(&compiler)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&program)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C smoke test failed to compile");
    let run = Command::new(&program).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}

fn smoke_build_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
