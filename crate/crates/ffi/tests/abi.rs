use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use presmod_ffi::*;

fn data(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    let p = presmod_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn bars(b: *const PresmodBarcode) -> Vec<PresmodBar> {
    unsafe {
        (0..presmod_barcode_len(b))
            .map(|i| {
                let mut bar = PresmodBar::default();
                assert_eq!(presmod_barcode_get(b, i, &mut bar), PresmodStatus::Ok);
                bar
            })
            .collect()
    }
}

fn text(b: *const PresmodBarcode) -> String {
    unsafe {
        let s = presmod_barcode_to_string(b);
        let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
        presmod_string_free(s);
        out
    }
}

#[test]
fn pair_homology_through_handles() {
    unsafe {
        let mut f0 = ptr::null_mut();
        let mut g0 = ptr::null_mut();
        assert_eq!(presmod_matrix_parse(data("worked_f0.annmat").as_ptr(), &mut f0), PresmodStatus::Ok);
        assert_eq!(presmod_matrix_parse(data("worked_g0.annmat").as_ptr(), &mut g0), PresmodStatus::Ok);
        let (mut r, mut c) = (0, 0);
        assert_eq!(presmod_matrix_shape(g0, &mut r, &mut c), PresmodStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(presmod_pair_homology(f0, g0, 1, true, &mut out), PresmodStatus::Ok);
        let got: Vec<(usize, usize)> = bars(out).iter().map(|b| (b.birth, b.death)).collect();
        assert_eq!(got, vec![(0, 1), (1, 1), (3, 5)]);
        assert_eq!(text(out), "1 0 1\n1 1 1\n1 3 5\n");
        let mut bar = PresmodBar::default();
        assert_eq!(presmod_barcode_get(out, 3, &mut bar), PresmodStatus::OutOfRange);
        presmod_barcode_free(out);
        presmod_matrix_free(f0);
        presmod_matrix_free(g0);
    }
}

#[test]
fn towers_cosheaves_sheaves_and_posets() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(presmod_tower_homology(data("square.tower").as_ptr(), 1, false, &mut out), PresmodStatus::Ok);
        assert_eq!(text(out), "1 7 10\n1 8 9\n");
        presmod_barcode_free(out);

        assert_eq!(presmod_tower_homology(data("square.cosheaf").as_ptr(), 1, false, &mut out), PresmodStatus::Ok);
        assert_eq!(text(out), "1 7 10\n1 8 9\n");
        presmod_barcode_free(out);

        assert_eq!(presmod_sheaf_cohomology(data("triangle.sheaf").as_ptr(), 2, 1, 2, false, &mut out), PresmodStatus::Ok);
        assert_eq!(text(out), "1 0 1\n1 3 5\n");
        presmod_barcode_free(out);

        let source = data("vee.poset");
        let mut alt = ptr::null_mut();
        assert_eq!(
            presmod_poset_cohomology(source.as_ptr(), 2, 0, PresmodRoute::OrderComplex, 1000, false, &mut out),
            PresmodStatus::Ok
        );
        assert_eq!(
            presmod_poset_cohomology(source.as_ptr(), 2, 0, PresmodRoute::Alternating, 1000, false, &mut alt),
            PresmodStatus::Ok
        );
        assert_eq!(text(out), text(alt));
        presmod_barcode_free(out);
        presmod_barcode_free(alt);
    }
}

#[test]
fn failures_report_status_and_message() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(presmod_matrix_parse(ptr::null(), &mut m), PresmodStatus::NullArgument);
        assert!(m.is_null());

        let bad = CString::new("annmat 1 1 2\nr 0 2\nc 1 x\n1\n").unwrap();
        assert_eq!(presmod_matrix_parse(bad.as_ptr(), &mut m), PresmodStatus::ParseError);
        assert!(last_error().starts_with("line 3"));

        let illegal = CString::new("annmat 1 1 2\nr 1 inf\nc 0 inf\n1\n").unwrap();
        assert_eq!(presmod_matrix_parse(illegal.as_ptr(), &mut m), PresmodStatus::InvalidInput);

        let bytes = [0xffu8, 0];
        assert_eq!(presmod_matrix_parse(bytes.as_ptr().cast(), &mut m), PresmodStatus::InvalidUtf8);

        let mut out = ptr::null_mut();
        assert_eq!(
            presmod_sheaf_cohomology(data("triangle.sheaf").as_ptr(), 6, 1, 1, false, &mut out),
            PresmodStatus::OutOfRange
        );

        let tiny_limit = presmod_poset_cohomology(data("vee.poset").as_ptr(), 2, 0, PresmodRoute::OrderComplex, 1, false, &mut out);
        assert_eq!(tiny_limit, PresmodStatus::InvalidInput);
        assert!(out.is_null());

        assert_eq!(presmod_barcode_len(ptr::null()), 0);
        assert!(presmod_barcode_to_string(ptr::null()).is_null());
        presmod_barcode_free(ptr::null_mut());
        presmod_matrix_free(ptr::null_mut());
        presmod_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/presmod.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["presmod_matrix_parse", "presmod_pair_homology", "presmod_poset_cohomology", "presmod_last_error"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let probe = dir.path().join("probe.c");
    std::fs::write(
        &probe,
        format!(
            "#include \"{}\"\nint main(void) {{ PresmodBarcode *b = 0; return (int)presmod_barcode_len(b) + PRESMOD_STATUS_OK; }}\n",
            header.display()
        ),
    )
    .unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&probe).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
}
