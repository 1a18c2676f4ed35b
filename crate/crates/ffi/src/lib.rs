//! C interface to `presmod`.
//!
//! Inputs are passed as text in the same formats the command line reads.
//! Results come back through opaque handles that the caller releases with
//! the matching `*_free` function. Every entry point returns a
//! [`PresmodStatus`]; on failure [`presmod_last_error`] describes the
//! problem until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use presmod::cosheaf_tower::cosheaf_tower_homology;
use presmod::field::Field;
use presmod::graded::AnnotatedMatrix;
use presmod::interval::{Barcode, Death};
use presmod::io::{self, InputError};
use presmod::poset::{poset_cohomology, Route};
use presmod::pres_hom::homology_of_pair;
use presmod::sheaf::local_sheaf_cohomology;
use presmod::tower::tower_homology;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresmodStatus {
    Ok = 0,
    /// A required pointer was null.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text does not follow its format.
    ParseError = 3,
    /// Input parses but violates an invariant, or the computation rejected it.
    InvalidInput = 4,
    /// An index or option was out of range.
    OutOfRange = 5,
    /// The library panicked; this is a bug.
    Internal = 6,
}

/// Route choice for [`presmod_poset_cohomology`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresmodRoute {
    Auto = 0,
    OrderComplex = 1,
    Alternating = 2,
}

/// A parsed annotated matrix.
pub struct PresmodMatrix(AnnotatedMatrix);

/// A computed barcode.
pub struct PresmodBarcode(Barcode);

/// One bar. `death` is meaningful only when `infinite` is false.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresmodBar {
    pub degree: usize,
    pub birth: usize,
    pub death: usize,
    pub infinite: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(PresmodStatus, String);

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let status = if e.is_parse() {
            PresmodStatus::ParseError
        } else {
            PresmodStatus::InvalidInput
        };
        Failure(status, e.to_string())
    }
}

impl From<presmod::error::Error> for Failure {
    fn from(e: presmod::error::Error) -> Self {
        Failure(PresmodStatus::InvalidInput, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PresmodStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PresmodStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PresmodStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PresmodStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(PresmodStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(PresmodStatus::NullArgument, format!("{name} is null")))
}

unsafe fn deliver<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(PresmodStatus::NullArgument, "out is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn field(p: u32) -> Result<Field, Failure> {
    Field::new(p as u64).map_err(|e| Failure(PresmodStatus::OutOfRange, e.to_string()))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn presmod_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an annotated matrix in ANNMAT format.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_matrix_parse(source: *const c_char, out: *mut *mut PresmodMatrix) -> PresmodStatus {
    guard(|| {
        let parsed = io::parse_annmat(text(source, "source")?)?;
        parsed.value.validate().map_err(|e| Failure::from(parsed.source.attach(e)))?;
        deliver(out, PresmodMatrix(parsed.value))
    })
}

/// Number of rows and columns of a matrix.
///
/// # Safety
/// `matrix` must come from [`presmod_matrix_parse`]; `rows` and `cols` may
/// be null.
#[no_mangle]
pub unsafe extern "C" fn presmod_matrix_shape(matrix: *const PresmodMatrix, rows: *mut usize, cols: *mut usize) -> PresmodStatus {
    guard(|| {
        let m = &handle(matrix, "matrix")?.0;
        if !rows.is_null() {
            *rows = m.rows();
        }
        if !cols.is_null() {
            *cols = m.cols();
        }
        Ok(())
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `matrix` must be null or come from [`presmod_matrix_parse`] and not have
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn presmod_matrix_free(matrix: *mut PresmodMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Homology of the pair `f0`, `g0` after repairing it into a complex,
/// with bars labelled by `degree`.
///
/// # Safety
/// `f0` and `g0` must be live matrix handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_pair_homology(
    f0: *const PresmodMatrix,
    g0: *const PresmodMatrix,
    degree: usize,
    keep_empty: bool,
    out: *mut *mut PresmodBarcode,
) -> PresmodStatus {
    guard(|| {
        let f = &handle(f0, "f0")?.0;
        let g = &handle(g0, "g0")?.0;
        deliver(out, PresmodBarcode(homology_of_pair(f, g, degree, keep_empty)?))
    })
}

/// Persistent homology in dimension `dim` of a tower in TOWER format, or of
/// a cosheaf over a tower when the text is in COSHEAF format.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_tower_homology(
    source: *const c_char,
    dim: usize,
    keep_empty: bool,
    out: *mut *mut PresmodBarcode,
) -> PresmodStatus {
    guard(|| {
        let src = text(source, "source")?;
        let is_cosheaf = src
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .is_some_and(|l| l.starts_with("cosheaf"));
        let bars = if is_cosheaf {
            let parsed = io::parse_cosheaf(src)?;
            let (script, data) = &parsed.value;
            cosheaf_tower_homology(script, data, &[dim], keep_empty).map_err(|e| parsed.source.attach(e))?
        } else {
            let parsed = io::parse_tower(src)?;
            tower_homology(&parsed.value, &[dim], keep_empty).map_err(|e| parsed.source.attach(e))?
        };
        deliver(out, PresmodBarcode(bars))
    })
}

/// Persistent sheaf cohomology in degree `degree` of a sheaf in SHEAF
/// format. `default_field` applies when the text names no field.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_sheaf_cohomology(
    source: *const c_char,
    default_field: u32,
    degree: usize,
    threads: usize,
    keep_empty: bool,
    out: *mut *mut PresmodBarcode,
) -> PresmodStatus {
    guard(|| {
        let parsed = io::parse_sheaf(text(source, "source")?, field(default_field)?)?;
        let bars = local_sheaf_cohomology(&parsed.value, degree, threads.max(1), keep_empty)
            .map_err(|e| parsed.source.attach(e))?;
        deliver(out, PresmodBarcode(bars))
    })
}

/// Persistent sheaf cohomology over a finite poset in POSET format.
/// `chain_limit` bounds the size of the order complex.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_poset_cohomology(
    source: *const c_char,
    default_field: u32,
    degree: usize,
    route: PresmodRoute,
    chain_limit: u64,
    keep_empty: bool,
    out: *mut *mut PresmodBarcode,
) -> PresmodStatus {
    guard(|| {
        let parsed = io::parse_poset(text(source, "source")?, field(default_field)?)?;
        let route = match route {
            PresmodRoute::Auto => Route::Auto,
            PresmodRoute::OrderComplex => Route::OrderComplex,
            PresmodRoute::Alternating => Route::Alternating,
        };
        let bars = poset_cohomology(&parsed.value, degree, route, chain_limit as u128, keep_empty)
            .map_err(|e| parsed.source.attach(e))?;
        deliver(out, PresmodBarcode(bars))
    })
}

/// Number of bars, counted with multiplicity. Null gives 0.
///
/// # Safety
/// `barcode` must be null or a live barcode handle.
#[no_mangle]
pub unsafe extern "C" fn presmod_barcode_len(barcode: *const PresmodBarcode) -> usize {
    barcode.as_ref().map_or(0, |b| b.0.len())
}

/// Writes bar `index` (bars are sorted by degree, birth, death) to `out`.
///
/// # Safety
/// `barcode` must be a live barcode handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn presmod_barcode_get(barcode: *const PresmodBarcode, index: usize, out: *mut PresmodBar) -> PresmodStatus {
    guard(|| {
        let b = &handle(barcode, "barcode")?.0;
        let bar = b.bars().get(index).ok_or_else(|| {
            Failure(PresmodStatus::OutOfRange, format!("bar {index} of {}", b.len()))
        })?;
        if out.is_null() {
            return Err(Failure(PresmodStatus::NullArgument, "out is null".into()));
        }
        let (death, infinite) = match bar.interval.death {
            Death::Finite(d) => (d, false),
            Death::Infinite => (0, true),
        };
        *out = PresmodBar {
            degree: bar.degree,
            birth: bar.interval.birth,
            death,
            infinite,
        };
        Ok(())
    })
}

/// The barcode as text, one `degree birth death` line per bar. Release the
/// string with [`presmod_string_free`]. Returns null for a null handle.
///
/// # Safety
/// `barcode` must be null or a live barcode handle.
#[no_mangle]
pub unsafe extern "C" fn presmod_barcode_to_string(barcode: *const PresmodBarcode) -> *mut c_char {
    match barcode.as_ref() {
        Some(b) => CString::new(b.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Releases a barcode. Null is ignored.
///
/// # Safety
/// `barcode` must be null or a live barcode handle.
#[no_mangle]
pub unsafe extern "C" fn presmod_barcode_free(barcode: *mut PresmodBarcode) {
    if !barcode.is_null() {
        drop(Box::from_raw(barcode));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or come from [`presmod_barcode_to_string`].
#[no_mangle]
pub unsafe extern "C" fn presmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_internal_errors() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, PresmodStatus::Internal);
        assert!(!presmod_last_error().is_null());
        assert_eq!(guard(|| Ok(())), PresmodStatus::Ok);
        assert!(presmod_last_error().is_null());
    }

    #[test]
    fn composite_fields_are_out_of_range() {
        assert!(matches!(field(4), Err(Failure(PresmodStatus::OutOfRange, _))));
        assert!(field(7).is_ok());
    }
}
