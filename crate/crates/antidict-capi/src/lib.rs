//! C ABI over the antidict library.
//!
//! Conventions: every function returns an [`AntidictStatus`]; results come
//! back through out-pointers. Periodic words are opaque handles freed with
//! [`antidict_word_free`]; every returned string is heap-allocated JSON (or
//! plain text where documented) and must be released with
//! [`antidict_string_free`]. On any non-OK status a thread-local message is
//! available via [`antidict_last_error_message`] until the next failing call
//! on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};

use serde_json::json;

use antidict::canonical::{Definition, ForbiddenSystem, canonical_system, defines};
use antidict::extremal::verify_extremal;
use antidict::forks::{all_forks, classify, verify_theorem_3_16};
use antidict::sweep::{Check, sweep};
use antidict::systems::verify_theorem_4_15;
use antidict::{Error, PeriodicWord, Word};

/// Outcome of a call. Everything except `ANTIDICT_STATUS_OK` leaves a
/// message readable through `antidict_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AntidictStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The input is not a word over {a, b}, or its period is empty or a
    /// proper power.
    InvalidWord = 2,
    /// A structurally invalid forbidden system or index system.
    InvalidSystem = 3,
    /// The request exceeds a library budget cap.
    Budget = 4,
    /// The computation ran but a verified claim failed.
    CheckFailed = 5,
    /// Invariant breakage inside the library.
    Internal = 6,
}

/// Opaque handle for a primitive periodic word.
pub struct AntidictWord {
    inner: PeriodicWord,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: AntidictStatus, message: &str) -> AntidictStatus {
    let owned = CString::new(message.replace('\0', " ")).expect("nul stripped");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
    status
}

fn fail_error(e: &Error) -> AntidictStatus {
    let status = match e {
        Error::InvalidSymbol(_)
        | Error::EmptyPeriod
        | Error::NonPrimitivePeriod
        | Error::SingleLetterPeriod
        | Error::NotAFactor(_) => AntidictStatus::InvalidWord,
        Error::InvalidSystem(_) | Error::UnclassifiedTable => AntidictStatus::InvalidSystem,
        Error::Budget(_) => AntidictStatus::Budget,
        Error::Falsified(_) => AntidictStatus::Internal,
    };
    fail(status, &e.to_string())
}

fn emit(out: *mut *mut c_char, text: String) -> AntidictStatus {
    let owned = CString::new(text.replace('\0', " ")).expect("nul stripped");
    unsafe { *out = owned.into_raw() };
    AntidictStatus::Ok
}

/// The message for the most recent failure on this thread. Valid until the
/// next failing call; never null.
#[unsafe(no_mangle)]
pub extern "C" fn antidict_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is allowed.
///
/// # Safety
/// `text` must have been returned by this library and not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Parses a period over {a, b} into a word handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_word_parse(
    text: *const c_char,
    out: *mut *mut AntidictWord,
) -> AntidictStatus {
    if text.is_null() || out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return fail(AntidictStatus::InvalidWord, "input is not UTF-8");
    };
    match PeriodicWord::parse(text) {
        Ok(word) => {
            unsafe { *out = Box::into_raw(Box::new(AntidictWord { inner: word })) };
            AntidictStatus::Ok
        }
        Err(e) => fail_error(&e),
    }
}

/// Releases a word handle. Null is allowed.
///
/// # Safety
/// `word` must have come from [`antidict_word_parse`] and not yet be freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_word_free(word: *mut AntidictWord) {
    if !word.is_null() {
        drop(unsafe { Box::from_raw(word) });
    }
}

/// Period length of the word.
///
/// # Safety
/// `word` must be a live handle from [`antidict_word_parse`] or null.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_word_period_len(word: *const AntidictWord) -> usize {
    if word.is_null() {
        return 0;
    }
    unsafe { &*word }.inner.period_len()
}

/// Canonical forbidden system of the word as a JSON array of strings, sorted
/// shortlex.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_canonical_json(
    word: *const AntidictWord,
    out: *mut *mut c_char,
) -> AntidictStatus {
    if word.is_null() || out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let system = canonical_system(&unsafe { &*word }.inner);
    let words: Vec<String> = system.words().map(|w| w.to_string()).collect();
    emit(out, json!(words).to_string())
}

/// Classified fork table of the word as JSON, plus the full verification
/// report of the significance calculus. `ANTIDICT_STATUS_CHECK_FAILED` (with
/// the JSON still written) when any clause fails.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_forks_json(
    word: *const AntidictWord,
    out: *mut *mut c_char,
) -> AntidictStatus {
    if word.is_null() || out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let word = &unsafe { &*word }.inner;
    let table = match all_forks(word).and_then(|t| classify(&t, word)) {
        Ok(table) => table,
        Err(e) => return fail_error(&e),
    };
    let report = match verify_theorem_3_16(&table) {
        Ok(report) => report,
        Err(e) => return fail_error(&e),
    };
    let passed = report.passed;
    let payload = json!({ "table": table, "calculus": report });
    let status = emit(out, payload.to_string());
    if !passed {
        return fail(AntidictStatus::CheckFailed, "a calculus clause failed");
    }
    status
}

/// Decides whether the words (array of `len` C strings) pin down a unique
/// periodic word. JSON: `{"outcome": "defines", "word": "aab"}`,
/// `{"outcome": "no-word"}` or
/// `{"outcome": "multiple", "first": ..., "second": ...}`.
///
/// # Safety
/// `words` must point to `len` valid NUL-terminated strings; `out` must be a
/// valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_defines_json(
    words: *const *const c_char,
    len: usize,
    out: *mut *mut c_char,
) -> AntidictStatus {
    if words.is_null() || out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let mut parsed: Vec<Word> = Vec::with_capacity(len);
    for idx in 0..len {
        let item = unsafe { *words.add(idx) };
        if item.is_null() {
            return fail(AntidictStatus::NullArgument, "null word in the list");
        }
        let Ok(text) = unsafe { CStr::from_ptr(item) }.to_str() else {
            return fail(AntidictStatus::InvalidWord, "word is not UTF-8");
        };
        match text.parse::<Word>() {
            Ok(w) => parsed.push(w),
            Err(e) => return fail_error(&e),
        }
    }
    if parsed.is_empty() {
        return fail(AntidictStatus::InvalidSystem, "empty forbidden system");
    }
    match defines(&ForbiddenSystem::new(parsed)) {
        Ok(Definition::Defines(w)) => emit(
            out,
            json!({ "outcome": "defines", "word": w.period().to_string() }).to_string(),
        ),
        Ok(Definition::NoWord) => emit(out, json!({ "outcome": "no-word" }).to_string()),
        Ok(Definition::MultipleWords(v, w)) => emit(
            out,
            json!({
                "outcome": "multiple",
                "first": v.period().to_string(),
                "second": w.period().to_string(),
            })
            .to_string(),
        ),
        Err(e) => fail_error(&e),
    }
}

/// Verifies generation `i ≥ 1` of the extremal family; JSON report as in the
/// library. `ANTIDICT_STATUS_CHECK_FAILED` if the generation misses the
/// bound (JSON still written).
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_extremal_json(i: usize, out: *mut *mut c_char) -> AntidictStatus {
    if out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    if i == 0 {
        return fail(
            AntidictStatus::InvalidSystem,
            "generation 0 is the single-letter seed pair",
        );
    }
    let report = verify_extremal(i);
    let passed = report.passed;
    let status = emit(out, serde_json::to_string(&report).expect("serializable"));
    if !passed {
        return fail(
            AntidictStatus::CheckFailed,
            "extremal generation missed the bound",
        );
    }
    status
}

/// Enumerates all index systems of size `n` and reports the maximum of the
/// generated sequence against `F(n+1)`; JSON report as in the library.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_systems_json(n: usize, out: *mut *mut c_char) -> AntidictStatus {
    if out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let report = match verify_theorem_4_15(n) {
        Ok(report) => report,
        Err(e) => return fail_error(&e),
    };
    let bound_met = report.bound_met;
    let status = emit(out, serde_json::to_string(&report).expect("serializable"));
    if !bound_met {
        return fail(AntidictStatus::CheckFailed, "a system beat F(n+1)");
    }
    status
}

/// Sweeps every primitive period up to `max_len`. `checks_csv` is a
/// comma-separated list of check names, or null for all checks. JSON report
/// as in the library; `ANTIDICT_STATUS_CHECK_FAILED` when the sweep found
/// violations (JSON still written).
///
/// # Safety
/// `checks_csv` must be a valid NUL-terminated string or null; `out` must be
/// a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn antidict_sweep_json(
    max_len: usize,
    checks_csv: *const c_char,
    out: *mut *mut c_char,
) -> AntidictStatus {
    if out.is_null() {
        return fail(AntidictStatus::NullArgument, "null argument");
    }
    let checks: Vec<Check> = if checks_csv.is_null() {
        Check::ALL.to_vec()
    } else {
        let Ok(text) = unsafe { CStr::from_ptr(checks_csv) }.to_str() else {
            return fail(AntidictStatus::InvalidSystem, "checks list is not UTF-8");
        };
        let parsed: Result<Vec<Check>, String> = text
            .split(',')
            .filter(|t| !t.is_empty())
            .map(|t| t.trim().parse::<Check>())
            .collect();
        match parsed {
            Ok(checks) if !checks.is_empty() => checks,
            Ok(_) => return fail(AntidictStatus::InvalidSystem, "empty checks list"),
            Err(msg) => return fail(AntidictStatus::InvalidSystem, &msg),
        }
    };
    if max_len < 2 {
        return fail(AntidictStatus::InvalidSystem, "sweep needs max_len >= 2");
    }
    let report = match sweep(max_len, &checks) {
        Ok(report) => report,
        Err(e) => return fail_error(&e),
    };
    let clean = report.clean();
    let status = emit(out, serde_json::to_string(&report).expect("serializable"));
    if !clean {
        return fail(AntidictStatus::CheckFailed, "sweep recorded failures");
    }
    status
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn parse(text: &str) -> *mut AntidictWord {
        let c = CString::new(text).unwrap();
        let mut word = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_word_parse(c.as_ptr(), &mut word) },
            AntidictStatus::Ok
        );
        word
    }

    fn take_string(raw: *mut c_char) -> String {
        assert!(!raw.is_null());
        let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap().to_string();
        unsafe { antidict_string_free(raw) };
        text
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let word = parse("aab");
        assert_eq!(unsafe { antidict_word_period_len(word) }, 3);
        unsafe { antidict_word_free(word) };

        let bad = CString::new("abab").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_word_parse(bad.as_ptr(), &mut out) },
            AntidictStatus::InvalidWord
        );
        let msg = unsafe { CStr::from_ptr(antidict_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "period is a proper power");

        assert_eq!(
            unsafe { antidict_word_parse(ptr::null(), &mut out) },
            AntidictStatus::NullArgument
        );
    }

    #[test]
    fn canonical_json_matches_library() {
        let word = parse("aab");
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_canonical_json(word, &mut out) },
            AntidictStatus::Ok
        );
        assert_eq!(take_string(out), r#"["bb","aaa","bab"]"#);
        unsafe { antidict_word_free(word) };
    }

    #[test]
    fn forks_json_reports_calculus() {
        let word = parse("aabab");
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_forks_json(word, &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["calculus"]["passed"], true);
        assert_eq!(payload["table"]["z"].as_array().unwrap().len(), 4);
        unsafe { antidict_word_free(word) };
    }

    #[test]
    fn defines_json_outcomes() {
        let words = [
            CString::new("aaa").unwrap(),
            CString::new("bab").unwrap(),
            CString::new("bb").unwrap(),
        ];
        let ptrs: Vec<*const c_char> = words.iter().map(|w| w.as_ptr()).collect();
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_defines_json(ptrs.as_ptr(), ptrs.len(), &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["outcome"], "defines");
        assert_eq!(payload["word"], "aab");

        let single = [CString::new("bb").unwrap()];
        let ptrs: Vec<*const c_char> = single.iter().map(|w| w.as_ptr()).collect();
        assert_eq!(
            unsafe { antidict_defines_json(ptrs.as_ptr(), 1, &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["outcome"], "multiple");
    }

    #[test]
    fn extremal_and_systems_reports() {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_extremal_json(2, &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["t_system_size"], 4);

        assert_eq!(
            unsafe { antidict_systems_json(5, &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["max_yn"], 13);
        assert_eq!(payload["bound_met"], true);

        assert_eq!(
            unsafe { antidict_systems_json(40, &mut out) },
            AntidictStatus::Budget
        );
    }

    #[test]
    fn sweep_json_clean_run() {
        let checks = CString::new("fib-bound,lemma-2-8").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { antidict_sweep_json(8, checks.as_ptr(), &mut out) },
            AntidictStatus::Ok
        );
        let payload: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(payload["per_n"]["4"]["max_period"], 5);
        assert_eq!(payload["failures"].as_array().unwrap().len(), 0);

        let bad = CString::new("no-such-check").unwrap();
        assert_eq!(
            unsafe { antidict_sweep_json(8, bad.as_ptr(), &mut out) },
            AntidictStatus::InvalidSystem
        );
    }
}
