use std::ffi::{CStr, CString};
use std::ptr;

use surface_qp_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sqp_last_error()) }.to_str().unwrap().to_string()
}

fn surface(g: u32, b: u32) -> *mut SqpSurface {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sqp_surface_new(g, b, &mut s) }, SqpStatus::Ok);
    s
}

fn point(s: *const SqpSurface, group: SqpGroup, seed: u64) -> *mut SqpPoint {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sqp_point_random(s, group, 2, seed, &mut p) }, SqpStatus::Ok);
    p
}

#[test]
fn bracket_formula_matches_bivector() {
    let s = surface(1, 1);
    let p = point(s, SqpGroup::Gl, 3);
    let (mut f, mut n) = (0.0, 0.0);
    let st = unsafe {
        sqp_bracket(s, p, c("C_1").as_ptr(), c("entry:1,2").as_ptr(), c("D_1").as_ptr(), c("trace").as_ptr(), 0, &mut f, &mut n)
    };
    assert_eq!(st, SqpStatus::Ok, "{}", last_error());
    assert!((f - n).abs() < 1e-8, "{f} vs {n}");
    assert_eq!(last_error(), "");
    unsafe {
        sqp_point_free(p);
        sqp_surface_free(s);
    }
}

#[test]
fn intersection_of_handle_generators() {
    let s = surface(1, 1);
    let (mut num, mut den) = (0i64, 0i64);
    let st = unsafe { sqp_intersection(s, c("C_1").as_ptr(), c("D_1").as_ptr(), 0, &mut num, &mut den) };
    assert_eq!(st, SqpStatus::Ok);
    assert_eq!((num, den), (1, 1));
    let st = unsafe { sqp_intersection(s, c("D_1").as_ptr(), c("C_1").as_ptr(), 0, &mut num, &mut den) };
    assert_eq!(st, SqpStatus::Ok);
    assert_eq!((num, den), (-1, 1));
    unsafe { sqp_surface_free(s) };
}

#[test]
fn holonomy_of_inverse_word() {
    let s = surface(0, 2);
    let p = point(s, SqpGroup::U, 1);
    let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
    let st = unsafe { sqp_point_holonomy(p, c("A_2 A_2^-1").as_ptr(), re.as_mut_ptr(), im.as_mut_ptr(), 4) };
    assert_eq!(st, SqpStatus::Ok);
    for (k, (r, i)) in re.iter().zip(im).enumerate() {
        let want = if k % 3 == 0 { 1.0 } else { 0.0 };
        assert!((r - want).abs() < 1e-12 && i.abs() < 1e-12);
    }
    let st = unsafe { sqp_point_holonomy(p, c("A_2").as_ptr(), re.as_mut_ptr(), im.as_mut_ptr(), 3) };
    assert_eq!(st, SqpStatus::BufferTooSmall);
    let mut count = 0;
    assert_eq!(unsafe { sqp_surface_generator_count(s, &mut count) }, SqpStatus::Ok);
    assert_eq!(count, 2);
    unsafe {
        sqp_point_free(p);
        sqp_surface_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sqp_surface_new(0, 0, &mut s) }, SqpStatus::InvalidSurface);
    assert!(s.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { sqp_surface_new(1, 1, ptr::null_mut()) }, SqpStatus::NullPointer);

    let s = surface(1, 1);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { sqp_point_random(s, SqpGroup::Gl, 0, 0, &mut p) }, SqpStatus::InvalidArgument);
    let p = point(s, SqpGroup::Gl, 0);
    let (mut f, mut n) = (0.0, 0.0);
    let st = unsafe {
        sqp_bracket(s, p, c("A_2").as_ptr(), c("trace").as_ptr(), c("D_1").as_ptr(), c("trace").as_ptr(), 0, &mut f, &mut n)
    };
    assert_eq!(st, SqpStatus::InvalidWord, "{}", last_error());
    let st = unsafe {
        sqp_bracket(s, p, c("C_1").as_ptr(), c("det").as_ptr(), c("D_1").as_ptr(), c("trace").as_ptr(), 0, &mut f, &mut n)
    };
    assert_eq!(st, SqpStatus::Parse);
    let st = unsafe {
        sqp_bracket(s, p, ptr::null(), c("trace").as_ptr(), c("D_1").as_ptr(), c("trace").as_ptr(), 0, &mut f, &mut n)
    };
    assert_eq!(st, SqpStatus::NullPointer);

    let other = surface(0, 2);
    let q = point(other, SqpGroup::Gl, 0);
    let st = unsafe {
        sqp_bracket(s, q, c("C_1").as_ptr(), c("trace").as_ptr(), c("D_1").as_ptr(), c("trace").as_ptr(), 0, &mut f, &mut n)
    };
    assert_eq!(st, SqpStatus::InvalidArgument);
    unsafe {
        sqp_point_free(p);
        sqp_point_free(q);
        sqp_surface_free(s);
        sqp_surface_free(other);
        sqp_surface_free(ptr::null_mut());
    }
}

#[test]
fn suite_summary() {
    let mut out = SqpSuiteSummary::default();
    assert_eq!(unsafe { sqp_verify(c("qp-identity").as_ptr(), 0, &mut out) }, SqpStatus::Ok);
    assert!(out.pass && out.fixture_count > 0 && out.failures == 0);
    assert_eq!(unsafe { sqp_verify(c("nope").as_ptr(), 0, &mut out) }, SqpStatus::Parse);
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../include/surface_qp.h")).unwrap();
    for f in [
        "sqp_last_error", "sqp_version", "sqp_surface_new", "sqp_surface_free", "sqp_surface_generator_count",
        "sqp_point_random", "sqp_point_free", "sqp_point_holonomy", "sqp_bracket", "sqp_intersection", "sqp_verify",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(h.contains("SQP_STATUS_PANIC = 11"));
    let v = unsafe { CStr::from_ptr(sqp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let dir = std::env::temp_dir().join(format!("sqp-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"surface_qp.h\"\nint main(void) {\n  SqpSurface *s = 0;\n  SqpStatus st = sqp_surface_new(1, 1, &s);\n  sqp_surface_free(s);\n  return st == SQP_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/../../include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
