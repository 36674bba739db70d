//! C ABI over the ladder pipeline.
//!
//! Conventions: objects are opaque handles created and destroyed by this
//! library; every fallible call returns an [`RqelStatus`] and writes its
//! result through an out-pointer; strings returned by the library are
//! UTF-8, NUL-terminated, and must be released with [`rqel_string_free`].
//! On failure the per-thread error message is available via
//! [`rqel_last_error`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use rqe_ladder::error::{Error, ErrorCategory};
use rqe_ladder::export::{eval_report_json, ladder_json};
use rqe_ladder::ingest::{corpus_summary, load_corpus, Corpus, CorpusFormat};
use rqe_ladder::pipeline::{
    analyze_corpus, analyze_sequence, evaluate_analysis, PipelineOptions,
};
use rqe_ladder::synth::{make_synthetic_corpus, SynthSpec};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqelStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Reading or writing a file failed.
    Io = 3,
    /// Input text did not parse.
    Parse = 4,
    /// Parsed input failed validation.
    Validation = 5,
    /// Evaluation had nothing to compare.
    Eval = 6,
}

/// Corpus encodings accepted by [`rqel_corpus_load`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqelFormat {
    Csv = 0,
    Json = 1,
}

/// Opaque validated measurement corpus.
pub struct RqelCorpus {
    inner: Corpus,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> RqelStatus {
    match err.category() {
        ErrorCategory::Io => RqelStatus::Io,
        ErrorCategory::Input => RqelStatus::Parse,
        ErrorCategory::Validation => RqelStatus::Validation,
        ErrorCategory::Eval => RqelStatus::Eval,
    }
}

fn fail(err: Error) -> RqelStatus {
    set_error(&err.to_string());
    status_of(&err)
}

unsafe fn arg_str<'a>(ptr: *const c_char) -> Result<&'a str, RqelStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(RqelStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        RqelStatus::InvalidUtf8
    })
}

fn return_string(out: *mut *mut c_char, text: String) -> RqelStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL");
            return RqelStatus::Parse;
        }
    };
    unsafe { *out = c.into_raw() };
    RqelStatus::Ok
}

fn parse_options(json: *const c_char) -> Result<PipelineOptions, RqelStatus> {
    if json.is_null() {
        return Ok(PipelineOptions::default());
    }
    let text = unsafe { arg_str(json)? };
    if text.trim().is_empty() {
        return Ok(PipelineOptions::default());
    }
    serde_json::from_str(text).map_err(|e| {
        set_error(&format!("pipeline options: {e}"));
        RqelStatus::Parse
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn rqel_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn rqel_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through an `out_json`/string
/// out-parameter of this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn rqel_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load and validate a corpus file. On success writes a new handle to
/// `out_corpus`; release it with [`rqel_corpus_free`].
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out_corpus` to a valid
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_load(
    path: *const c_char,
    format: RqelFormat,
    out_corpus: *mut *mut RqelCorpus,
) -> RqelStatus {
    if out_corpus.is_null() {
        set_error("null out_corpus");
        return RqelStatus::NullArgument;
    }
    *out_corpus = ptr::null_mut();
    let path = match arg_str(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let format = match format {
        RqelFormat::Csv => CorpusFormat::Csv,
        RqelFormat::Json => CorpusFormat::Json,
    };
    match load_corpus(Path::new(path), format) {
        Ok(loaded) => {
            *out_corpus = Box::into_raw(Box::new(RqelCorpus {
                inner: loaded.corpus,
            }));
            RqelStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Generate a corpus from a synthesis spec JSON (pass null or "" for the
/// built-in default spec).
///
/// # Safety
/// `out_corpus` must point to a valid pointer slot; `spec_json`, when
/// non-null, must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_synth(
    spec_json: *const c_char,
    out_corpus: *mut *mut RqelCorpus,
) -> RqelStatus {
    if out_corpus.is_null() {
        set_error("null out_corpus");
        return RqelStatus::NullArgument;
    }
    *out_corpus = ptr::null_mut();
    let spec = if spec_json.is_null() {
        SynthSpec::default()
    } else {
        let text = match arg_str(spec_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if text.trim().is_empty() {
            SynthSpec::default()
        } else {
            match serde_json::from_str(text) {
                Ok(spec) => spec,
                Err(e) => {
                    set_error(&format!("synth spec: {e}"));
                    return RqelStatus::Parse;
                }
            }
        }
    };
    match make_synthetic_corpus(&spec) {
        Ok(corpus) => {
            *out_corpus = Box::into_raw(Box::new(RqelCorpus { inner: corpus }));
            RqelStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Destroy a corpus handle; null is a no-op.
///
/// # Safety
/// `corpus` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_free(corpus: *mut RqelCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of sequences in the corpus; 0 for a null handle.
///
/// # Safety
/// `corpus`, when non-null, must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_sequence_count(corpus: *const RqelCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.sequence_count())
}

/// Write the corpus as CSV to `path`.
///
/// # Safety
/// `corpus` must be a live handle; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_write_csv(
    corpus: *const RqelCorpus,
    path: *const c_char,
) -> RqelStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("null corpus");
        return RqelStatus::NullArgument;
    };
    let path = match arg_str(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match rqe_ladder::export::write_atomic(Path::new(path), corpus.inner.to_csv().as_bytes()) {
        Ok(()) => RqelStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Per-resolution summary statistics as a JSON string.
///
/// # Safety
/// `corpus` must be a live handle; `out_json` must point to a valid slot.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_summary_json(
    corpus: *const RqelCorpus,
    out_json: *mut *mut c_char,
) -> RqelStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("null corpus");
        return RqelStatus::NullArgument;
    };
    if out_json.is_null() {
        set_error("null out_json");
        return RqelStatus::NullArgument;
    }
    match corpus_summary(&corpus.inner) {
        Ok(summary) => return_string(
            out_json,
            serde_json::to_string_pretty(&summary).expect("summary serializes"),
        ),
        Err(e) => fail(e),
    }
}

/// Analyze one sequence and return its four ladders as a JSON object
/// `{"sequence_id": ..., "ladders": [...]}`. `options_json`, when non-null
/// and non-empty, carries `{"step": ..., "ladder": {...}, "jobs": ...}`.
///
/// # Safety
/// `corpus` must be a live handle; `sequence_id` NUL-terminated; `out_json`
/// a valid slot.
#[no_mangle]
pub unsafe extern "C" fn rqel_sequence_ladders_json(
    corpus: *const RqelCorpus,
    sequence_id: *const c_char,
    options_json: *const c_char,
    out_json: *mut *mut c_char,
) -> RqelStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("null corpus");
        return RqelStatus::NullArgument;
    };
    if out_json.is_null() {
        set_error("null out_json");
        return RqelStatus::NullArgument;
    }
    let sequence_id = match arg_str(sequence_id) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let options = match parse_options(options_json) {
        Ok(o) => o,
        Err(s) => return s,
    };
    match analyze_sequence(&corpus.inner, sequence_id, &options) {
        Ok(analysis) => {
            let ladders: Vec<serde_json::Value> = analysis
                .ladders
                .iter()
                .map(|l| serde_json::from_str(&ladder_json(l)).expect("ladder json parses"))
                .collect();
            let payload = serde_json::json!({
                "sequence_id": analysis.sequence_id,
                "ladders": ladders,
            });
            return_string(
                out_json,
                serde_json::to_string_pretty(&payload).expect("payload serializes"),
            )
        }
        Err(e) => fail(e),
    }
}

/// Run the full pipeline over the corpus and return the evaluation report
/// JSON (per-sequence and aggregate relative differences).
///
/// # Safety
/// `corpus` must be a live handle; `out_json` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn rqel_corpus_eval_json(
    corpus: *const RqelCorpus,
    options_json: *const c_char,
    out_json: *mut *mut c_char,
) -> RqelStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("null corpus");
        return RqelStatus::NullArgument;
    };
    if out_json.is_null() {
        set_error("null out_json");
        return RqelStatus::NullArgument;
    }
    let options = match parse_options(options_json) {
        Ok(o) => o,
        Err(s) => return s,
    };
    let analysis = match analyze_corpus(&corpus.inner, &options) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    match evaluate_analysis(&analysis) {
        Ok(eval) => return_string(out_json, eval_report_json(&eval, &options)),
        Err(e) => fail(e),
    }
}
