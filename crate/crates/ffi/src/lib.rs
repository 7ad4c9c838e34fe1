//! C ABI over `so3braid`.
//!
//! Words and paths live behind opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns
//! an [`So3bStatus`]; the message of the most recent failure on the calling
//! thread is available from [`so3b_last_error`]. Strings handed out by the
//! library are freed with [`so3b_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use so3braid::certificate::{Certificate, SearchBudget, SearchOutcome};
use so3braid::classify::{classify, ClassificationReport};
use so3braid::extract::braid_of_path;
use so3braid::quotient::{canonical_rep, sphere_class};
use so3braid::{BraidWord, Error, HomotopyClass, RotationPath};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So3bStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Numerical = 4,
    Disagreement = 5,
    Inconclusive = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A braid word on `n` strands.
pub struct So3bWord(BraidWord);

/// A piecewise-geodesic path in SO(3).
pub struct So3bPath(RotationPath);

/// Result of classifying a closed path. Classes are 0 (trivial) or 1.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct So3bReport {
    pub homotopy_class: u8,
    pub lift_class: u8,
    pub agreement: bool,
    pub exponent_sum: i64,
    pub exponent_sum_mod4: u8,
    pub pole: [f64; 3],
    pub samples: usize,
    pub braid_len: usize,
}

/// A class of the three-strand sphere braid quotient: the permutation as
/// images of 1, 2, 3 and the exponent sum mod 4.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct So3bSphereClass {
    pub perm: [u8; 3],
    pub esum_mod4: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(So3bStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Disagreement(_) => So3bStatus::Disagreement,
            Error::NumericalAmbiguity { .. }
            | Error::NoClearPole { .. }
            | Error::PoleCollision { .. }
            | Error::DegenerateCrossing { .. }
            | Error::TripleCrossing { .. }
            | Error::NotPureResult(_) => So3bStatus::Numerical,
            _ => So3bStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(So3bStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> So3bStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => So3bStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            So3bStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(So3bStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn class_code(c: HomotopyClass) -> u8 {
    u8::from(!c.is_trivial())
}

/// Message of the last failed call on this thread, or null if none has
/// failed. Successful calls leave it untouched. The pointer is valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn so3b_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn so3b_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn so3b_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a word from `len` signed generator indices (`k` is `σk`, `-k` its
/// inverse).
///
/// # Safety
/// `letters` must point to `len` readable values (or be null when `len` is
/// 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_new(
    strands: usize,
    letters: *const i32,
    len: usize,
    out: *mut *mut So3bWord,
) -> So3bStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let letters = match (letters.is_null(), len) {
            (_, 0) => &[][..],
            (true, _) => return Err(null("letters")),
            (false, _) => std::slice::from_raw_parts(letters, len),
        };
        let w = BraidWord::new(strands, letters)?;
        *out = Box::into_raw(Box::new(So3bWord(w)));
        Ok(())
    })
}

/// Parses a whitespace-separated word such as `"1 -2 1"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_parse(
    strands: usize,
    text: *const c_char,
    out: *mut *mut So3bWord,
) -> So3bStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let w = BraidWord::parse(strands, str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(So3bWord(w)));
        Ok(())
    })
}

/// # Safety
/// `word` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_free(word: *mut So3bWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_len(word: *const So3bWord) -> usize {
    word.as_ref().map_or(0, |w| w.0.len())
}

/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_strands(word: *const So3bWord) -> usize {
    word.as_ref().map_or(0, |w| w.0.strands())
}

/// Copies the signed letters into `buf`. `out_len` always receives the word
/// length; a short buffer yields `BUFFER_TOO_SMALL` and nothing is copied.
///
/// # Safety
/// `word` must be a live handle, `buf` writable for `cap` values (or null
/// when `cap` is 0), `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_letters(
    word: *const So3bWord,
    buf: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> So3bStatus {
    guard(|| {
        let w = ref_arg(word, "word")?;
        let out_len = out_arg(out_len, "out_len")?;
        let signed = w.0.to_signed();
        *out_len = signed.len();
        if signed.len() > cap {
            return Err(Failure(
                So3bStatus::BufferTooSmall,
                format!("need {} slots, have {cap}", signed.len()),
            ));
        }
        if !signed.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(signed.as_ptr(), buf, signed.len());
        }
        Ok(())
    })
}

/// Word as text, to be freed with `so3b_string_free`.
///
/// # Safety
/// `word` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_to_string(word: *const So3bWord) -> *mut c_char {
    word.as_ref()
        .map_or(ptr::null_mut(), |w| into_c_string(w.0.to_string()))
}

/// Equality in the braid group, decided exactly.
///
/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_equal(
    a: *const So3bWord,
    b: *const So3bWord,
    out: *mut bool,
) -> So3bStatus {
    guard(|| {
        let (a, b) = (ref_arg(a, "a")?, ref_arg(b, "b")?);
        *out_arg(out, "out")? = so3braid::artin::equal_in_group(&a.0, &b.0)?;
        Ok(())
    })
}

/// Class of a three-strand word in the sphere braid quotient.
///
/// # Safety
/// `word` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_sphere_class(
    word: *const So3bWord,
    out: *mut So3bSphereClass,
) -> So3bStatus {
    guard(|| {
        let w = ref_arg(word, "word")?;
        let out = out_arg(out, "out")?;
        let c = sphere_class(&w.0)?;
        let mut perm = [0u8; 3];
        for (slot, &x) in perm.iter_mut().zip(c.perm.images()) {
            *slot = x as u8;
        }
        *out = So3bSphereClass {
            perm,
            esum_mod4: c.esum_mod4,
        };
        Ok(())
    })
}

/// Shortest representative of the word's class in the quotient, as a new
/// handle.
///
/// # Safety
/// `word` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_word_canonical(
    word: *const So3bWord,
    out: *mut *mut So3bWord,
) -> So3bStatus {
    guard(|| {
        let w = ref_arg(word, "word")?;
        let out = out_arg(out, "out")?;
        let c = canonical_rep(&sphere_class(&w.0)?)?;
        *out = Box::into_raw(Box::new(So3bWord(c)));
        Ok(())
    })
}

/// Searches for a rewriting certificate from `a` to `b` and returns it as
/// JSON. A search that gives up yields `INCONCLUSIVE`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_certify_equal(
    a: *const So3bWord,
    b: *const So3bWord,
    out: *mut *mut c_char,
) -> So3bStatus {
    guard(|| {
        let (a, b) = (ref_arg(a, "a")?, ref_arg(b, "b")?);
        let out = out_arg(out, "out")?;
        let outcome =
            so3braid::certificate::certify_equal_mod_r(&a.0, &b.0, SearchBudget::default())?;
        match outcome {
            SearchOutcome::Certified(c) => {
                let json = serde_json::to_string(&c)
                    .map_err(|e| Failure(So3bStatus::Panic, e.to_string()))?;
                *out = into_c_string(json);
                Ok(())
            }
            SearchOutcome::Inconclusive { reason, explored } => Err(Failure(
                So3bStatus::Inconclusive,
                format!("{reason} ({explored} states)"),
            )),
        }
    })
}

/// Replays a JSON certificate and reports whether every step is legal. When
/// it is not, the offending step is described by `so3b_last_error`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_valid` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_certificate_check(
    json: *const c_char,
    out_valid: *mut bool,
) -> So3bStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let valid = out_arg(out_valid, "out_valid")?;
        let cert: Certificate = serde_json::from_str(text)
            .map_err(|e| Failure(So3bStatus::InvalidInput, e.to_string()))?;
        match cert.replay() {
            Ok(_) => *valid = true,
            Err(e) => {
                *valid = false;
                set_error(e.to_string());
            }
        }
        Ok(())
    })
}

/// Builds a path from `count` segments: `axes` holds `3 * count` axis
/// components and `angles` the rotation angles in radians.
///
/// # Safety
/// `axes` and `angles` must be readable for the stated lengths; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_from_segments(
    axes: *const f64,
    angles: *const f64,
    count: usize,
    out: *mut *mut So3bPath,
) -> So3bStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let mut raw = Vec::with_capacity(count);
        if count > 0 {
            if axes.is_null() || angles.is_null() {
                return Err(null("axes or angles"));
            }
            let axes = std::slice::from_raw_parts(axes, 3 * count);
            let angles = std::slice::from_raw_parts(angles, count);
            for (a, &t) in axes.chunks_exact(3).zip(angles) {
                raw.push(([a[0], a[1], a[2]], t));
            }
        }
        *out = Box::into_raw(Box::new(So3bPath(RotationPath::from_segments(&raw)?)));
        Ok(())
    })
}

/// Reads a path from its JSON file format (segments or orientation samples).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_from_json(
    json: *const c_char,
    out: *mut *mut So3bPath,
) -> So3bStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let p = RotationPath::from_json_str(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(So3bPath(p)));
        Ok(())
    })
}

/// # Safety
/// `path` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_free(path: *mut So3bPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Concatenation `a` then `b`, as a new handle.
///
/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_then(
    a: *const So3bPath,
    b: *const So3bPath,
    out: *mut *mut So3bPath,
) -> So3bStatus {
    guard(|| {
        let (a, b) = (ref_arg(a, "a")?, ref_arg(b, "b")?);
        *out_arg(out, "out")? = Box::into_raw(Box::new(So3bPath(a.0.then(&b.0))));
        Ok(())
    })
}

/// Pure braid word traced out by a closed path, as a new handle.
///
/// # Safety
/// `path` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_braid(
    path: *const So3bPath,
    out: *mut *mut So3bWord,
) -> So3bStatus {
    guard(|| {
        let p = ref_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(So3bWord(braid_of_path(&p.0)?)));
        Ok(())
    })
}

fn report_of(r: &ClassificationReport) -> So3bReport {
    So3bReport {
        homotopy_class: class_code(r.class),
        lift_class: class_code(r.lift_class),
        agreement: r.agreement,
        exponent_sum: r.exponent_sum,
        exponent_sum_mod4: r.exponent_sum_mod4,
        pole: r.pole,
        samples: r.samples,
        braid_len: r.braid_word.len(),
    }
}

/// Classifies a closed path in pi_1(SO(3)). On `DISAGREEMENT` the report is
/// still filled in.
///
/// # Safety
/// `path` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_classify(
    path: *const So3bPath,
    out: *mut So3bReport,
) -> So3bStatus {
    guard(|| {
        let p = ref_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        match classify(&p.0) {
            Ok(r) => {
                *out = report_of(&r);
                Ok(())
            }
            Err(Error::Disagreement(r)) => {
                *out = report_of(&r);
                Err(Error::Disagreement(r).into())
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Full classification report as JSON.
///
/// # Safety
/// `path` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so3b_path_classify_json(
    path: *const So3bPath,
    out: *mut *mut c_char,
) -> So3bStatus {
    guard(|| {
        let p = ref_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let r = classify(&p.0)?;
        let json =
            serde_json::to_string(&r).map_err(|e| Failure(So3bStatus::Panic, e.to_string()))?;
        *out = into_c_string(json);
        Ok(())
    })
}
