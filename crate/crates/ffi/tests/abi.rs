use std::ffi::{CStr, CString};
use std::ptr;

use supergeom_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sg_last_error_message()) }.to_string_lossy().into_owned()
}

fn geometry(n: usize, m: usize) -> *mut SgGeometry {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sg_geometry_new(n, m, &mut g) }, SgStatus::Ok);
    g
}

#[test]
fn rejects_bad_sizes() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(sg_geometry_new(2, 2, &mut g), SgStatus::EqualBlocks);
        assert!(g.is_null());
        assert!(last_error().contains("equal block sizes"));
        assert_eq!(sg_geometry_new(1, 0, &mut g), SgStatus::InvalidArgument);
        assert_eq!(sg_geometry_new(2, 1, ptr::null_mut()), SgStatus::NullPointer);
    }
}

#[test]
fn theta_structure_equation_through_the_abi() {
    let g = geometry(2, 1);
    unsafe {
        let (mut theta, mut dt, mut tt) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(sg_form_canonical_theta(g, &mut theta), SgStatus::Ok);
        assert_eq!(sg_form_exterior_derivative(g, theta, &mut dt), SgStatus::Ok);
        assert_eq!(sg_form_wedge(theta, theta, &mut tt), SgStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sg_form_to_json(dt, &mut a), SgStatus::Ok);
        assert_eq!(sg_form_to_json(tt, &mut b), SgStatus::Ok);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));

        // round trip through the parser
        let mut back = ptr::null_mut();
        assert_eq!(sg_form_from_json(a, &mut back), SgStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(sg_form_to_json(back, &mut c), SgStatus::Ok);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(c));

        for s in [a, b, c] {
            sg_string_free(s);
        }
        for f in [theta, dt, tt, back] {
            sg_form_free(f);
        }
        sg_geometry_free(g);
    }
}

#[test]
fn parse_and_shape_errors() {
    let bad = CString::new("{not json").unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(sg_form_from_json(bad.as_ptr(), &mut f), SgStatus::Parse);
        assert_eq!(sg_form_from_json(ptr::null(), &mut f), SgStatus::NullPointer);
        let wrong_degree = CString::new(r#"{"n":2,"m":1,"degree":2,"entries":[{"index":[1],"matrix":[["1","0","0"],["0","0","0"],["0","0","0"]]}]}"#).unwrap();
        assert_eq!(sg_form_from_json(wrong_degree.as_ptr(), &mut f), SgStatus::Shape);

        let (g21, g20) = (geometry(2, 1), geometry(2, 0));
        let (mut t21, mut t20, mut w) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        sg_form_canonical_theta(g21, &mut t21);
        sg_form_canonical_theta(g20, &mut t20);
        assert_eq!(sg_form_wedge(t21, t20, &mut w), SgStatus::Shape);
        assert_eq!(sg_form_exterior_derivative(g20, t21, &mut w), SgStatus::Shape);
        sg_form_free(t21);
        sg_form_free(t20);
        sg_geometry_free(g21);
        sg_geometry_free(g20);
    }
}

#[test]
fn constants_betti_and_identities() {
    let g = geometry(2, 1);
    unsafe {
        let (mut n, mut m, mut dim) = (0, 0, 0);
        assert_eq!(sg_geometry_dimensions(g, &mut n, &mut m, &mut dim), SgStatus::Ok);
        assert_eq!((n, m, dim), (2, 1, 8));

        let mut s = ptr::null_mut();
        assert_eq!(sg_structure_constants_json(g, &mut s), SgStatus::Ok);
        let v: serde_json::Value = serde_json::from_slice(CStr::from_ptr(s).to_bytes()).unwrap();
        assert_eq!(v["dim"], 8);
        sg_string_free(s);

        let mut betti = [9usize; 4];
        assert_eq!(sg_betti_numbers(g, 3, 4, betti.as_mut_ptr()), SgStatus::Ok);
        assert_eq!(betti, [1, 0, 0, 1]);
        assert_eq!(sg_betti_numbers(g, 3, 3, betti.as_mut_ptr()), SgStatus::Cap);

        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(sg_verify_identities(g, &mut passed, &mut report), SgStatus::Ok);
        assert!(passed);
        assert!(!report.is_null());
        sg_string_free(report);
        sg_geometry_free(g);
    }
}

#[test]
fn null_handles_are_reported() {
    let (mut d, mut z) = (0usize, false);
    unsafe {
        assert_eq!(sg_form_degree(ptr::null(), &mut d), SgStatus::NullPointer);
        assert_eq!(sg_form_is_zero(ptr::null(), &mut z), SgStatus::NullPointer);
        assert_eq!(sg_verify_identities(ptr::null(), &mut z, ptr::null_mut()), SgStatus::NullPointer);
        sg_form_free(ptr::null_mut());
        sg_geometry_free(ptr::null_mut());
        sg_string_free(ptr::null_mut());
    }
    assert!(last_error().contains("null"));
}

/// Compiles the C smoke test against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) =
        ["cc", "gcc", "clang"].into_iter().find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    // the test binary lives in target/<profile>/deps; the static library one level up
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libsupergeom_ffi.a");
    if !lib.exists() {
        eprintln!("{} missing; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("smoke");
    let status = std::process::Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = std::process::Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
