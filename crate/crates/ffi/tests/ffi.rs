use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tautrel_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    tautrel_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(tautrel_last_error()).to_str().unwrap().to_string()
}

#[test]
fn series_coefficients() {
    unsafe {
        let name = CString::new("A").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(tautrel_series_new(name.as_ptr(), 4, &mut s), TautrelStatus::Ok);
        let mut order = 0;
        assert_eq!(tautrel_series_order(s, &mut order), TautrelStatus::Ok);
        assert_eq!(order, 4);
        let mut c = ptr::null_mut();
        assert_eq!(tautrel_series_coeff(s, 1, &mut c), TautrelStatus::Ok);
        assert_eq!(take(c), "5/24");
        assert_eq!(tautrel_series_coeff(s, 9, &mut c), TautrelStatus::OutOfRange);
        tautrel_series_free(s);
    }
}

#[test]
fn phi_and_bad_input() {
    unsafe {
        let (l, z) = (CString::new("3").unwrap(), CString::new("1/2").unwrap());
        let mut s = ptr::null_mut();
        assert_eq!(tautrel_series_phi(3, l.as_ptr(), z.as_ptr(), &mut s), TautrelStatus::Ok);
        let mut c = ptr::null_mut();
        tautrel_series_coeff(s, 1, &mut c);
        // 1 / ((z - lambda) z) = 1 / ((-5/2)(1/2))
        assert_eq!(take(c), "-4/5");
        tautrel_series_free(s);

        let bad = CString::new("nope").unwrap();
        assert_eq!(tautrel_series_new(bad.as_ptr(), 4, &mut s), TautrelStatus::Parse);
        assert!(last_error().contains("nope"));
        assert_eq!(tautrel_series_new(ptr::null(), 4, &mut s), TautrelStatus::NullPointer);
        tautrel_clear_error();
        assert!(tautrel_last_error().is_null());
    }
}

#[test]
fn brackets_and_graphs() {
    unsafe {
        let ks = [2u32, 3];
        let mut c = ptr::null_mut();
        assert_eq!(tautrel_bracket(ks.as_ptr(), 2, &mut c), TautrelStatus::Ok);
        assert_eq!(take(c), "29/5760");
        let mut n = 0;
        assert_eq!(tautrel_stable_graph_count(2, 0, &mut n), TautrelStatus::Ok);
        assert_eq!(n, 7);
        assert_eq!(tautrel_stable_graph_count(0, 2, &mut n), TautrelStatus::Unstable);
    }
}

#[test]
fn fz_relation_and_validity() {
    unsafe {
        let empty = CString::new("").unwrap();
        let mut rel = ptr::null_mut();
        assert_eq!(tautrel_fz_relation(3, 2, empty.as_ptr(), &mut rel), TautrelStatus::Ok);
        let mut c = ptr::null_mut();
        tautrel_relation_to_string(rel, &mut c);
        assert_eq!(take(c), "1800*k1^2 - 25920*k2");
        tautrel_relation_to_json(rel, &mut c);
        assert!(take(c).contains("\"coeff\":\"-25920\""));
        tautrel_relation_free(rel);
        assert_eq!(tautrel_fz_relation(4, 1, empty.as_ptr(), &mut rel), TautrelStatus::NotARelation);
        assert!(last_error().contains("3r"));
    }
}

#[test]
fn pixton_pairing_vanishes() {
    unsafe {
        let a = [1u8];
        let mut el = ptr::null_mut();
        assert_eq!(tautrel_pixton_class(1, a.as_ptr(), 1, 1, &mut el), TautrelStatus::Ok);
        let mut n = 0;
        tautrel_element_num_terms(el, &mut n);
        assert!(n > 0);
        let mut c = ptr::null_mut();
        assert_eq!(tautrel_element_integrate(el, ptr::null(), 1, ptr::null(), 0, &mut c), TautrelStatus::NullPointer);
        let psi = [0u32];
        assert_eq!(tautrel_element_integrate(el, psi.as_ptr(), 1, ptr::null(), 0, &mut c), TautrelStatus::Ok);
        assert_eq!(take(c), "0");
        assert_eq!(tautrel_element_to_json(el, &mut c), TautrelStatus::Ok);
        assert!(take(c).starts_with('['));
        tautrel_element_free(el);
        assert_eq!(tautrel_pixton_class(1, a.as_ptr(), 1, 0, &mut el), TautrelStatus::NotInP);
    }
}

#[test]
fn verify_suite_json() {
    unsafe {
        let suite = CString::new("strata").unwrap();
        let mut out = ptr::null_mut();
        let mut passed = false;
        assert_eq!(tautrel_verify(suite.as_ptr(), 3, &mut out, &mut passed), TautrelStatus::Ok);
        assert!(passed);
        let j = take(out);
        assert!(j.contains("\"seed\": 3"));
        let bogus = CString::new("bogus").unwrap();
        assert_eq!(tautrel_verify(bogus.as_ptr(), 3, &mut out, &mut passed), TautrelStatus::Parse);
    }
}

#[test]
fn header_is_valid_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/tautrel.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["tautrel_last_error", "tautrel_series_new", "tautrel_pixton_class", "tautrel_verify"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let src = std::env::temp_dir().join(format!("tautrel_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"tautrel.h\"\nint main(void) { TautrelSeries *s = 0; \
         TautrelStatus st = tautrel_series_new(\"A\", 3, &s); tautrel_series_free(s); return (int)st; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(e) => panic!("no C compiler available: {e}"),
    }
}
