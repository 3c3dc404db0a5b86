use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use symcone_ffi::*;

fn last_error() -> String {
    let p = symcone_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn element(kind: SymconeAlgebraKind, param: usize, coords: &[f64]) -> *mut SymconeElement {
    let mut out = ptr::null_mut();
    let s = unsafe { symcone_element_new(kind, param, coords.as_ptr(), coords.len(), &mut out) };
    assert_eq!(s, SymconeStatus::Ok, "{}", last_error());
    out
}

fn coords(x: *const SymconeElement) -> Vec<f64> {
    let n = unsafe { symcone_element_len(x) };
    let mut buf = vec![0.0; n];
    assert_eq!(
        unsafe { symcone_element_coords(x, buf.as_mut_ptr(), n) },
        SymconeStatus::Ok
    );
    buf
}

#[test]
fn element_round_trip_and_distance() {
    use SymconeAlgebraKind::*;
    let x = element(Orthant, 2, &[1.0, 2.0]);
    let y = element(Orthant, 2, &[2.0, 1.0]);
    assert_eq!(coords(x), vec![1.0, 2.0]);
    let mut d = 0.0;
    assert_eq!(unsafe { symcone_distance(x, y, &mut d) }, SymconeStatus::Ok);
    assert!((d - 4f64.ln()).abs() < 1e-15);
    let (mut hi, mut lo) = (0.0, 0.0);
    assert_eq!(
        unsafe { symcone_lambda_extremes(x, y, &mut hi, &mut lo) },
        SymconeStatus::Ok
    );
    assert!((hi - 2.0).abs() < 1e-15 && (lo - 0.5).abs() < 1e-15);

    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { symcone_power(x, 2.0, &mut sq) }, SymconeStatus::Ok);
    assert_eq!(coords(sq), vec![1.0, 4.0]);
    unsafe {
        symcone_element_free(sq);
        symcone_element_free(x);
        symcone_element_free(y);
        symcone_element_free(ptr::null_mut());
    }
}

#[test]
fn errors_map_to_status_codes() {
    use SymconeAlgebraKind::*;
    let mut out = ptr::null_mut();
    let s = unsafe { symcone_element_new(Orthant, 3, [1.0, 2.0].as_ptr(), 2, &mut out) };
    assert_eq!(s, SymconeStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    let s =
        unsafe { symcone_element_new(SymMatrix, 2, [1.0, 2.0, 3.0, 1.0].as_ptr(), 4, &mut out) };
    assert_eq!(s, SymconeStatus::InvalidArgument);

    let x = element(Orthant, 2, &[1.0, 1.0]);
    let bad = element(Orthant, 2, &[1.0, -1.0]);
    let spin = element(SpinFactor, 2, &[2.0, 1.0]);
    let mut d = 0.0;
    assert_eq!(
        unsafe { symcone_distance(x, bad, &mut d) },
        SymconeStatus::NotInCone
    );
    assert_eq!(
        unsafe { symcone_distance(x, spin, &mut d) },
        SymconeStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { symcone_distance(ptr::null(), x, &mut d) },
        SymconeStatus::NullPointer
    );
    assert!(last_error().contains("NULL"));

    let mut small = [0.0; 1];
    assert_eq!(
        unsafe { symcone_element_coords(x, small.as_mut_ptr(), 1) },
        SymconeStatus::InvalidArgument
    );
    assert_eq!(symcone_coord_len(SymMatrix, 3), 9);
    assert_eq!(symcone_coord_len(SpinFactor, 1), 0);
    unsafe {
        symcone_element_free(x);
        symcone_element_free(bad);
        symcone_element_free(spin);
    }
}

#[test]
fn words_and_solver() {
    use SymconeAlgebraKind::*;
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { symcone_word_new(Orthant, 2, &mut w) },
        SymconeStatus::Ok
    );
    let a = element(Orthant, 2, &[2.0, 3.0]);
    assert_eq!(unsafe { symcone_word_push_quad(w, a) }, SymconeStatus::Ok);
    assert_eq!(
        unsafe { symcone_word_push_scalar(w, -1.0) },
        SymconeStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { symcone_word_push_permutation(w, [0usize, 0].as_ptr(), 2) },
        SymconeStatus::InvalidArgument
    );

    let e = element(Orthant, 2, &[1.0, 1.0]);
    let mut img = ptr::null_mut();
    assert_eq!(
        unsafe { symcone_word_apply(w, e, &mut img) },
        SymconeStatus::Ok
    );
    assert_eq!(coords(img), vec![4.0, 9.0]);

    let mut r = ptr::null_mut();
    let s = unsafe { symcone_solve(w, 2.0, 1e-12, 500, ptr::null(), false, &mut r) };
    assert_eq!(s, SymconeStatus::Ok, "{}", last_error());
    assert!(unsafe { symcone_report_converged(r) });
    assert!(unsafe { symcone_report_residual(r) } <= 1e-10);
    let est = unsafe { symcone_report_contraction_estimate(r) };
    assert!((0.0..=0.5 + 1e-3).contains(&est));
    let n = unsafe { symcone_report_trace_len(r) };
    assert_eq!(n, unsafe { symcone_report_iterations(r) });
    let mut trace = vec![0.0; n];
    assert_eq!(
        unsafe { symcone_report_trace(r, trace.as_mut_ptr(), n) },
        SymconeStatus::Ok
    );
    assert!(trace.windows(2).all(|p| p[1] <= 0.5 * p[0] + 1e-12));
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { symcone_report_solution(r, &mut sol) },
        SymconeStatus::Ok
    );
    let c = coords(sol);
    assert!((c[0] - 4.0).abs() < 1e-12 && (c[1] - 9.0).abs() < 1e-12);

    let mut r2 = ptr::null_mut();
    let s = unsafe { symcone_solve(w, 0.5, 1e-12, 500, ptr::null(), false, &mut r2) };
    assert_eq!(s, SymconeStatus::ExponentOutOfRange);
    assert!(r2.is_null());

    let s = unsafe { symcone_solve(w, 1.5, 1e-12, 1, e, false, &mut r2) };
    assert_eq!(s, SymconeStatus::NonConvergence);
    assert!(!r2.is_null());
    assert!(!unsafe { symcone_report_converged(r2) });

    unsafe {
        symcone_report_free(r);
        symcone_report_free(r2);
        symcone_element_free(sol);
        symcone_element_free(img);
        symcone_element_free(e);
        symcone_element_free(a);
        symcone_word_free(w);
    }
}

#[test]
fn bushell_through_the_abi() {
    let t = [1.2, 0.3, -0.4, 0.1, 0.9, 0.5, -0.6, 0.2, 1.1];
    let mut r = ptr::null_mut();
    let s = unsafe { symcone_bushell(t.as_ptr(), 3, 1, 1e-12, 500, &mut r) };
    assert_eq!(s, SymconeStatus::Ok, "{}", last_error());
    assert!(unsafe { symcone_report_residual(r) } <= 1e-10);
    unsafe { symcone_report_free(r) };

    let singular = [1.0, 2.0, 2.0, 4.0];
    let s = unsafe { symcone_bushell(singular.as_ptr(), 2, 1, 1e-12, 500, &mut r) };
    assert_eq!(s, SymconeStatus::InvalidArgument);
    assert!(r.is_null());
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/symcone.h")).unwrap();
    for name in [
        "symcone_last_error",
        "symcone_element_new",
        "symcone_distance",
        "symcone_word_push_congruence",
        "symcone_solve",
        "symcone_bushell",
        "symcone_report_free",
        "SYMCONE_STATUS_NON_CONVERGENCE = 4",
        "typedef struct SymconeElement SymconeElement",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// `target/<profile>`, found from the test executable in `target/<profile>/deps`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = profile_dir().join("libsymcone_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
