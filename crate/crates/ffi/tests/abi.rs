use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use imcrystal_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    imc_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(imc_last_error_message()).to_str().unwrap().to_owned()
}

unsafe fn cartan(family: &str, rank: usize) -> *mut ImcCartan {
    let mut h = ptr::null_mut();
    assert_eq!(imc_cartan_new(cs(family).as_ptr(), rank, &mut h), ImcStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn handle_lifecycle_and_pairing() {
    unsafe {
        let h = cartan("A", 2);
        assert_eq!(imc_cartan_rank(h), 2);
        let mut v = 0i64;
        assert_eq!(imc_cartan_pairing(h, 1, 2, &mut v), ImcStatus::Ok);
        assert_eq!(v, -1);
        assert_eq!(imc_cartan_pairing(h, 1, 3, &mut v), ImcStatus::IndexOutOfRange);
        assert!(!last_error().is_empty());
        imc_cartan_free(h);
        imc_cartan_free(ptr::null_mut());
        assert_eq!(imc_cartan_rank(ptr::null()), 0);
    }
}

#[test]
fn bad_inputs_map_to_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(imc_cartan_new(cs("Q").as_ptr(), 2, &mut h), ImcStatus::UnknownFamily);
        assert!(h.is_null());
        assert_eq!(imc_cartan_new(ptr::null(), 2, &mut h), ImcStatus::NullArgument);
        let bad = [0xffu8 as c_char, 0];
        assert_eq!(imc_cartan_new(bad.as_ptr(), 2, &mut h), ImcStatus::InvalidUtf8);

        let h = cartan("A", 1);
        let mut out = ptr::null_mut();
        let st = imc_omega(h, ImcVariant::Twisted, 1, 0, cs("x[1;2]").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::Parse);
        assert!(out.is_null());
        let st = imc_omega(h, ImcVariant::Twisted, 1, 0, cs("x[1,0] x[1,1]").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::NotOrdered);
        let st = imc_verify(h, cs("nope").as_ptr(), cs("{}").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::InvalidArgument);
        let st = imc_pair(h, cs("x[1,0]").as_ptr(), cs("x[1,0]").as_ptr(), ptr::null_mut());
        assert_eq!(st, ImcStatus::NullArgument);
        imc_cartan_free(h);
    }
}

#[test]
fn omega_and_pair_values() {
    unsafe {
        let h = cartan("A", 1);
        let mut out = ptr::null_mut();
        let st = imc_omega(h, ImcVariant::Twisted, 1, 0, cs("x[1,1] x[1,0]").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::Ok);
        assert!(last_error().is_empty());
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["schema"], "imcrystal/1");
        assert_eq!(v["report"]["result"]["display"], "(q^2)*x[1,1]");

        let st = imc_omega(h, ImcVariant::Classic, 1, -1, cs("x[1,1] x[1,0]").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["report"]["result"]["display"], "x[1,0]");

        let st = imc_pair(h, cs("x[1,0] x[1,0]").as_ptr(), cs("x[1,0] x[1,0]").as_ptr(), &mut out);
        assert_eq!(st, ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["display"], "1 + q^2");
        imc_cartan_free(h);
    }
}

#[test]
fn star_xtilde_describe_g() {
    unsafe {
        let h = cartan("A", 2);
        let mut out = ptr::null_mut();
        assert_eq!(imc_star(h, cs("x[1,0]").as_ptr(), cs("x[2,1]").as_ptr(), &mut out), ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["command"], "star");
        assert!(v["report"]["pair"].is_object());

        assert_eq!(imc_xtilde(h, cs("x[1,0]").as_ptr(), cs("x[1,0]").as_ptr(), &mut out), ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["command"], "xtilde");

        assert_eq!(imc_describe(h, &mut out), ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["rank"], 2);

        assert_eq!(imc_g_qinv(h, 1, 1, 0, &mut out), ImcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert!(v["display"].is_string());
        imc_cartan_free(h);
    }
}

#[test]
fn verify_matches_core() {
    unsafe {
        let h = cartan("A", 1);
        let mut out = ptr::null_mut();
        let win = cs(r#"{"max_len":2,"kmin":-1,"kmax":1,"mmin":-1,"mmax":1}"#);
        assert_eq!(imc_verify(h, cs("gram").as_ptr(), win.as_ptr(), &mut out), ImcStatus::Ok);
        let a = take(out);
        assert_eq!(imc_verify(h, cs("gram").as_ptr(), win.as_ptr(), &mut out), ImcStatus::Ok);
        assert_eq!(a, take(out));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["report"]["summary"]["failures"], 0);
        for suite in ["star-order", "omega-order", "lattice", "basis"] {
            assert_eq!(imc_verify(h, cs(suite).as_ptr(), win.as_ptr(), &mut out), ImcStatus::Ok, "{suite}");
            imc_string_free(out);
        }
        imc_cartan_free(h);
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(imc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/imcrystal.h")).unwrap();
    for sym in [
        "IMC_STATUS_OK",
        "IMC_STATUS_PANIC",
        "typedef struct ImcCartan ImcCartan",
        "imc_cartan_new",
        "imc_omega",
        "imc_verify",
        "imc_string_free",
        "imc_last_error_message",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}

#[test]
fn c_program_links() {
    let Ok(cc) = which_cc() else { return };
    let target = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/debug");
    let lib = target.join("libimcrystal_ffi.a");
    if !lib.exists() {
        return;
    }
    let dir = std::env::temp_dir().join(format!("imc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "imcrystal.h"
int main(void) {
  ImcCartan *h = NULL;
  if (imc_cartan_new("A", 1, &h) != IMC_STATUS_OK) return 1;
  char *out = NULL;
  if (imc_pair(h, "x[1,0] x[1,0]", "x[1,0] x[1,0]", &out) != IMC_STATUS_OK) return 2;
  puts(out);
  imc_string_free(out);
  imc_cartan_free(h);
  return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let status = std::process::Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("1 + q^2"));
    let _ = std::fs::remove_dir_all(&dir);
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match std::process::Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
