//! C ABI for the omegalim engine.
//!
//! The surface mirrors the CLI: parse a config document into an opaque
//! handle, run a command against it, and receive the machine-format JSON
//! report as a heap string. Status codes extend the CLI exit codes with
//! FFI-specific conditions. On any non-success status a thread-local error
//! message is available through `omegalim_last_error`, valid until the next
//! call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use omegalim::config::{parse_config, Config, ConfigErrorKind};
use omegalim::report::OutputFormat;
use omegalim::runner::{run, CommandKind, Overrides};

/// Call outcome. `OK` and `CHECK_FAILED` both produce a report; everything
/// else leaves the out-parameters untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegalimStatus {
    Ok = 0,
    /// The command ran and some requested check failed.
    CheckFailed = 1,
    /// Malformed config text.
    ParseError = 2,
    /// Well-formed text describing an invalid object, or a command/config
    /// mismatch.
    SemanticError = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    UnknownCommand = 6,
    InternalPanic = 7,
}

/// Opaque parsed configuration.
pub struct OmegalimConfig {
    inner: Config,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = CString::new(message.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

/// Message for the most recent failing call on this thread. The pointer is
/// owned by the library and valid until the next API call on this thread.
#[no_mangle]
pub extern "C" fn omegalim_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static version string of the underlying engine.
#[no_mangle]
pub extern "C" fn omegalim_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Parses a config document. On success writes a heap handle to `out`;
/// release it with `omegalim_config_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omegalim_config_parse(
    text: *const c_char,
    out: *mut *mut OmegalimConfig,
) -> OmegalimStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return OmegalimStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("config text is not valid UTF-8");
        return OmegalimStatus::InvalidUtf8;
    };
    match catch_unwind(|| parse_config(text)) {
        Ok(Ok(config)) => {
            *out = Box::into_raw(Box::new(OmegalimConfig { inner: config }));
            OmegalimStatus::Ok
        }
        Ok(Err(err)) => {
            set_error(&err.to_string());
            match err.kind {
                ConfigErrorKind::Syntax => OmegalimStatus::ParseError,
                ConfigErrorKind::Semantic => OmegalimStatus::SemanticError,
            }
        }
        Err(_) => {
            set_error("internal panic while parsing");
            OmegalimStatus::InternalPanic
        }
    }
}

/// Releases a handle returned by `omegalim_config_parse`. NULL is a no-op.
///
/// # Safety
/// `config` must be NULL or a handle from `omegalim_config_parse` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn omegalim_config_free(config: *mut OmegalimConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

fn render_report(report: &omegalim::report::Report) -> *mut c_char {
    let json = report.render(OutputFormat::Machine);
    CString::new(json)
        .expect("JSON has no interior NUL")
        .into_raw()
}

/// Runs one command (`validate`, `delta`, `intersect`, `threads`,
/// `build-thread`, `verify`, `examples`) against a parsed config and writes
/// the machine-format JSON report to `out_json`; release it with
/// `omegalim_string_free`. Returns `OK` when all requested checks pass and
/// `CHECK_FAILED` when the report carries a failing check; both produce a
/// report.
///
/// # Safety
/// `config` must be a live handle, `command` a valid NUL-terminated string,
/// and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omegalim_run(
    config: *const OmegalimConfig,
    command: *const c_char,
    out_json: *mut *mut c_char,
) -> OmegalimStatus {
    if config.is_null() || command.is_null() || out_json.is_null() {
        set_error("null argument");
        return OmegalimStatus::NullArgument;
    }
    let Ok(command) = CStr::from_ptr(command).to_str() else {
        set_error("command is not valid UTF-8");
        return OmegalimStatus::InvalidUtf8;
    };
    let Some(kind) = CommandKind::from_name(command) else {
        set_error(&format!("unknown command `{command}`"));
        return OmegalimStatus::UnknownCommand;
    };
    let config = &(*config).inner;
    match catch_unwind(AssertUnwindSafe(|| {
        run(config, kind, &Overrides::default())
    })) {
        Ok(Ok(report)) => {
            *out_json = render_report(&report);
            if report.exit_code == 0 {
                OmegalimStatus::Ok
            } else {
                OmegalimStatus::CheckFailed
            }
        }
        Ok(Err(err)) => {
            set_error(&err.to_string());
            OmegalimStatus::SemanticError
        }
        Err(_) => {
            set_error("internal panic while running");
            OmegalimStatus::InternalPanic
        }
    }
}

/// Runs the built-in worked scenarios without a config; otherwise behaves
/// like `omegalim_run`.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omegalim_examples(out_json: *mut *mut c_char) -> OmegalimStatus {
    if out_json.is_null() {
        set_error("null argument");
        return OmegalimStatus::NullArgument;
    }
    match catch_unwind(|| {
        run(
            &Config::default(),
            CommandKind::Examples,
            &Overrides::default(),
        )
    }) {
        Ok(Ok(report)) => {
            *out_json = render_report(&report);
            if report.exit_code == 0 {
                OmegalimStatus::Ok
            } else {
                OmegalimStatus::CheckFailed
            }
        }
        Ok(Err(err)) => {
            set_error(&err.to_string());
            OmegalimStatus::SemanticError
        }
        Err(_) => {
            set_error("internal panic while running");
            OmegalimStatus::InternalPanic
        }
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn omegalim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
