//! C interface: a translator handle that turns a model (DSL or PNML text)
//! into markdown and JSON.
//!
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`bept_string_free`]. After a failed call,
//! [`bept_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bept::io::{parse_dsl, parse_pnml};
use bept::pipeline::{Config, Pipeline};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeptStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The model or configuration was rejected.
    InvalidInput = 3,
    /// An internal invariant failed.
    Internal = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeptModelFormat {
    Dsl = 0,
    Pnml = 1,
}

/// Opaque translator. Create with [`bept_translator_new`], release with
/// [`bept_translator_free`].
pub struct BeptTranslator {
    pipeline: Pipeline,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &bept::Error) -> BeptStatus {
    set_error(e.to_string());
    if e.is_input_error() {
        BeptStatus::InvalidInput
    } else {
        BeptStatus::Internal
    }
}

fn guarded(f: impl FnOnce() -> BeptStatus) -> BeptStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside bept");
            BeptStatus::Panic
        }
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bept_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn bept_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a translator. `max_paragraph_words` of 0 keeps the default.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bept_translator_new(max_paragraph_words: usize, out: *mut *mut BeptTranslator) -> BeptStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is null");
            return BeptStatus::NullPointer;
        }
        let mut config = Config::default();
        if max_paragraph_words > 0 {
            config.max_paragraph_words = max_paragraph_words;
        }
        match Pipeline::new(config) {
            Ok(pipeline) => {
                *out = Box::into_raw(Box::new(BeptTranslator { pipeline }));
                BeptStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `translator` must come from [`bept_translator_new`] and not be freed
/// twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bept_translator_free(translator: *mut BeptTranslator) {
    if !translator.is_null() {
        drop(Box::from_raw(translator));
    }
}

/// Translates `model`, a NUL-terminated UTF-8 text. Either output pointer
/// may be null when that rendering is not wanted.
///
/// # Safety
/// `translator` must be live, `model` a valid C string, and non-null output
/// pointers writable.
#[no_mangle]
pub unsafe extern "C" fn bept_translate(
    translator: *const BeptTranslator,
    model: *const c_char,
    format: BeptModelFormat,
    out_markdown: *mut *mut c_char,
    out_json: *mut *mut c_char,
) -> BeptStatus {
    guarded(|| {
        if translator.is_null() || model.is_null() {
            set_error("translator or model is null");
            return BeptStatus::NullPointer;
        }
        let text = match CStr::from_ptr(model).to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(e.to_string());
                return BeptStatus::InvalidUtf8;
            }
        };
        let parsed = match format {
            BeptModelFormat::Dsl => parse_dsl(text),
            BeptModelFormat::Pnml => parse_pnml(text.as_bytes()),
        };
        let result = parsed.and_then(|m| (*translator).pipeline.translate(&m));
        let doc = match result {
            Ok(t) => t.document,
            Err(e) => return status_of(&e),
        };
        let json = match doc.to_json() {
            Ok(j) => j,
            Err(e) => return status_of(&e),
        };
        let to_c = |s: String| CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut());
        if !out_markdown.is_null() {
            *out_markdown = to_c(doc.markdown);
        }
        if !out_json.is_null() {
            *out_json = to_c(json);
        }
        BeptStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bept_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NSTAR: &str = include_str!("../../core/corpus/nstar.pnet");

    fn take(s: *mut c_char) -> String {
        let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { bept_string_free(s) };
        out
    }

    fn last_error() -> String {
        let p = bept_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn translate_through_the_c_interface() {
        let mut t = ptr::null_mut();
        assert_eq!(unsafe { bept_translator_new(0, &mut t) }, BeptStatus::Ok);
        let model = CString::new(NSTAR).unwrap();
        let (mut md, mut json) = (ptr::null_mut(), ptr::null_mut());
        let status = unsafe { bept_translate(t, model.as_ptr(), BeptModelFormat::Dsl, &mut md, &mut json) };
        assert_eq!(status, BeptStatus::Ok);
        assert!(bept_last_error().is_null());
        let md = take(md);
        assert!(md.starts_with("- The following main branch is executed:"));
        let json = take(json);
        assert!(json.contains("\"provenance\""));
        unsafe { bept_translator_free(t) };
    }

    #[test]
    fn errors_are_reported() {
        let mut t = ptr::null_mut();
        assert_eq!(unsafe { bept_translator_new(5, &mut t) }, BeptStatus::InvalidInput);
        assert!(last_error().contains("max_paragraph_words"));
        assert_eq!(unsafe { bept_translator_new(0, ptr::null_mut()) }, BeptStatus::NullPointer);

        assert_eq!(unsafe { bept_translator_new(0, &mut t) }, BeptStatus::Ok);
        let bad = CString::new("arc a b c\n").unwrap();
        let mut md = ptr::null_mut();
        let status = unsafe { bept_translate(t, bad.as_ptr(), BeptModelFormat::Dsl, &mut md, ptr::null_mut()) };
        assert_eq!(status, BeptStatus::InvalidInput);
        assert!(md.is_null());
        assert!(last_error().starts_with("parse error at 1:"), "{}", last_error());
        let invalid = [0xffu8, 0];
        let status = unsafe {
            bept_translate(t, invalid.as_ptr().cast(), BeptModelFormat::Pnml, &mut md, ptr::null_mut())
        };
        assert_eq!(status, BeptStatus::InvalidUtf8);
        let status = unsafe { bept_translate(ptr::null(), bad.as_ptr(), BeptModelFormat::Dsl, &mut md, ptr::null_mut()) };
        assert_eq!(status, BeptStatus::NullPointer);
        unsafe {
            bept_translator_free(t);
            bept_translator_free(ptr::null_mut());
            bept_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(bept_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn header_declares_the_interface() {
        let header = include_str!("../include/bept.h");
        for name in [
            "bept_translator_new",
            "bept_translator_free",
            "bept_translate",
            "bept_string_free",
            "bept_last_error",
            "BEPT_STATUS_INVALID_INPUT",
            "typedef struct BeptTranslator BeptTranslator",
        ] {
            assert!(header.contains(name), "{name}");
        }
    }
}
