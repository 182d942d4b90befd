//! C bindings for the pergrid toolkit.
//!
//! Modules are handed out as opaque `PgModule` pointers; every fallible
//! entry point returns a `PgStatus` and leaves a human-readable message
//! for `pg_last_error`. Strings produced by the library are owned by the
//! caller and must be released with `pg_string_free`; handles with
//! `pg_module_free`. All functions may be called from any thread, but a
//! handle must not be used concurrently from two threads.
//!
//! The companion header `include/pergrid.h` is generated from this file by
//! cbindgen during the build.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use pergrid::classify::{rebase, thin_decompose};
use pergrid::intervals::{count_intervals, interval_rep};
use pergrid::{
    all_interval_reps, classify, interval_decomposable, multiplicity, parse_module,
    parse_module_str, s_decomposable, write_module_str, Error, Rep, Staircase,
};

/// Status code returned by every fallible entry point. Where a counterpart
/// exists, the nonzero values match the exit codes of the bundled
/// command-line tool.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PgStatus {
    /// The call succeeded.
    Ok = 0,
    /// The module, staircase, or argument was rejected as invalid.
    InvalidInput = 2,
    /// The operation is not defined for this grid shape or field.
    Unsupported = 3,
    /// An internal cross-check failed; the result cannot be trusted.
    Inconsistent = 4,
    /// A required pointer argument was null.
    NullArgument = 5,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 6,
    /// A panic was caught at the language boundary.
    Internal = 7,
}

/// Opaque handle to a validated module (a representation of a grid quiver).
pub struct PgModule {
    inner: Rep,
}

/// Classification flags filled in by `pg_module_classify`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PgClassification {
    /// Every vertex carries dimension zero or one.
    pub thin: bool,
    /// The support is connected in the underlying graph.
    pub support_connected: bool,
    /// The support is closed under the grid order within its bounding box.
    pub support_convex: bool,
    /// Every structure map between support vertices is nonzero.
    pub nonzero_over_support: bool,
    /// Every structure map between support vertices is the identity.
    pub identity_over_support: bool,
    /// Thin, connected, convex support with nonzero maps over it.
    pub pre_interval: bool,
    /// Pre-interval with identity maps: an interval representation.
    pub interval: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: PgStatus, msg: &str) -> PgStatus {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes were stripped");
    });
    status
}

fn fail_error(e: &Error) -> PgStatus {
    let status = match e {
        Error::Unsupported(_) | Error::BudgetExhausted(_) => PgStatus::Unsupported,
        Error::Inconsistency(_) => PgStatus::Inconsistent,
        _ => PgStatus::InvalidInput,
    };
    fail(status, &e.to_string())
}

fn guarded<F: FnOnce() -> PgStatus>(f: F) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(PgStatus::Internal, "caught a panic at the language boundary"),
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PgStatus> {
    if ptr.is_null() {
        return Err(fail(PgStatus::NullArgument, &format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(PgStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

unsafe fn module_ref<'a>(ptr: *const PgModule) -> Result<&'a Rep, PgStatus> {
    if ptr.is_null() {
        return Err(fail(PgStatus::NullArgument, "module handle is null"));
    }
    Ok(&(*ptr).inner)
}

unsafe fn give_module(out: *mut *mut PgModule, rep: Rep) -> PgStatus {
    *out = Box::into_raw(Box::new(PgModule { inner: rep }));
    PgStatus::Ok
}

unsafe fn give_string(out: *mut *mut c_char, text: String) -> PgStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            PgStatus::Ok
        }
        Err(_) => fail(PgStatus::Internal, "produced text with an interior NUL"),
    }
}

/// Message describing the most recent failure on the calling thread, as a
/// NUL-terminated string. Empty until a call fails.
///
/// The pointer stays valid until the next failing call on the same thread;
/// do not free it.
#[no_mangle]
pub extern "C" fn pg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string; do not free it.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string produced by this library. Null is ignored.
///
/// # Safety
/// `text` must be a pointer previously returned through an out-parameter of
/// this library, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Parses and validates a module from a JSON document.
///
/// On success stores a fresh handle in `out`; release it with
/// `pg_module_free`.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_module_parse(
    json: *const c_char,
    out: *mut *mut PgModule,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let text = match read_str(json, "json argument") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_module_str(text) {
            Ok(rep) => give_module(out, rep),
            Err(e) => fail_error(&e),
        }
    })
}

/// Reads and validates a module from a JSON file.
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_module_read(
    path: *const c_char,
    out: *mut *mut PgModule,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let text = match read_str(path, "path argument") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_module(Path::new(text)) {
            Ok(rep) => give_module(out, rep),
            Err(e) => fail_error(&e),
        }
    })
}

/// Releases a module handle. Null is ignored.
///
/// # Safety
/// `module` must be a handle produced by this library, and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_module_free(module: *mut PgModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Serializes a module back to its JSON document form.
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one
/// pointer. Release the string with `pg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pg_module_to_json(
    module: *const PgModule,
    out: *mut *mut c_char,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        match module_ref(module) {
            Ok(rep) => give_string(out, write_module_str(rep)),
            Err(status) => status,
        }
    })
}

/// Re-checks the commutativity relations of a module.
///
/// Handles from the parse functions are always valid; this is useful after
/// constructing documents by hand.
///
/// # Safety
/// `module` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pg_module_validate(module: *const PgModule) -> PgStatus {
    guarded(|| match module_ref(module) {
        Ok(rep) => match rep.validate() {
            Ok(()) => PgStatus::Ok,
            Err(e) => fail_error(&e),
        },
        Err(status) => status,
    })
}

/// Stores the total dimension (sum over all vertices) in `out`.
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one value.
#[no_mangle]
pub unsafe extern "C" fn pg_module_dim_total(
    module: *const PgModule,
    out: *mut usize,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        match module_ref(module) {
            Ok(rep) => {
                *out = rep.dim_total();
                PgStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Fills `out` with the classification flags of the module.
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one
/// `PgClassification`.
#[no_mangle]
pub unsafe extern "C" fn pg_module_classify(
    module: *const PgModule,
    out: *mut PgClassification,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let rep = match module_ref(module) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        match classify(rep) {
            Ok(report) => {
                *out = PgClassification {
                    thin: report.thin,
                    support_connected: report.support_connected,
                    support_convex: report.support_convex,
                    nonzero_over_support: report.nonzero_over_support,
                    identity_over_support: report.identity_over_support,
                    pre_interval: report.is_pre_interval(),
                    interval: report.is_interval(),
                };
                PgStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Rewrites an interval module into identity form by a diagonal base
/// change, storing the fixed module as a new handle in `out`.
///
/// Fails with `PG_STATUS_INVALID_INPUT` when the module is not an interval
/// module, including when the scalars cannot be made consistent around a
/// cycle of unit squares.
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_module_rebase(
    module: *const PgModule,
    out: *mut *mut PgModule,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let rep = match module_ref(module) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        match rebase(rep) {
            Ok((fixed, _scalars)) => give_module(out, fixed),
            Err(e) => fail_error(&e),
        }
    })
}

/// Splits a thin module on an equioriented two-factor grid into staircase
/// components, storing one staircase per line in `out` (empty string for
/// the zero module).
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one
/// pointer. Release the string with `pg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pg_module_thin_decompose(
    module: *const PgModule,
    out: *mut *mut c_char,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let rep = match module_ref(module) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        match thin_decompose(rep) {
            Ok(stairs) => {
                let lines: Vec<String> = stairs.iter().map(|s| s.to_string()).collect();
                give_string(out, lines.join("\n"))
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Decides whether the module is a direct sum of interval representations,
/// storing the verdict in `out`.
///
/// Uses the staircase catalog on equioriented two-factor grids and falls
/// back to enumerating all interval representations on other grids with at
/// most 16 vertices; anything larger is `PG_STATUS_UNSUPPORTED`.
///
/// # Safety
/// `module` must be a live handle and `out` writable storage for one value.
#[no_mangle]
pub unsafe extern "C" fn pg_module_interval_decomposable(
    module: *const PgModule,
    out: *mut bool,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let rep = match module_ref(module) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        let q = rep.quiver();
        let verdict = if q.shape_2d().is_some() && q.is_equioriented() {
            interval_decomposable(rep)
        } else if q.vertex_count() <= 16 {
            let candidates = all_interval_reps(q, rep.field());
            s_decomposable(rep, &candidates)
        } else {
            Err(Error::Unsupported(
                "interval candidates cannot be enumerated on this grid".into(),
            ))
        };
        match verdict {
            Ok(v) => {
                *out = v.decomposable;
                PgStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Stores in `out` how often the interval with the given staircase (in the
/// text form `"s..t: [b,d];..."`) occurs as a direct summand of the module.
///
/// # Safety
/// `module` must be a live handle, `staircase` a NUL-terminated string, and
/// `out` writable storage for one value.
#[no_mangle]
pub unsafe extern "C" fn pg_module_interval_multiplicity(
    module: *const PgModule,
    staircase: *const c_char,
    out: *mut usize,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        let rep = match module_ref(module) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        let text = match read_str(staircase, "staircase argument") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let run = || -> Result<usize, Error> {
            let stair = Staircase::parse(text)?;
            let ivl = interval_rep(rep.quiver(), &stair, rep.field())?;
            multiplicity(&ivl, rep)
        };
        match run() {
            Ok(count) => {
                *out = count;
                PgStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Stores the number of intervals of the `rows` x `cols` equioriented grid
/// in `out`. Both sides must be at least 1 and `rows + cols` at most 32 so
/// the count fits in 64 bits.
///
/// # Safety
/// `out` must be writable storage for one value.
#[no_mangle]
pub unsafe extern "C" fn pg_count_intervals(
    rows: u64,
    cols: u64,
    out: *mut u64,
) -> PgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PgStatus::NullArgument, "out pointer is null");
        }
        if rows < 1 || cols < 1 {
            return fail(PgStatus::InvalidInput, "grid sides must be at least 1");
        }
        if rows + cols > 32 {
            return fail(
                PgStatus::InvalidInput,
                "grid too large for a 64-bit interval count",
            );
        }
        *out = count_intervals(rows, cols);
        PgStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pergrid::fixtures::cube_cycle;
    use pergrid::{FieldSpec, GridQuiver};
    use std::ptr;

    fn parse(json: &str) -> *mut PgModule {
        let c = CString::new(json).unwrap();
        let mut handle: *mut PgModule = ptr::null_mut();
        let status = unsafe { pg_module_parse(c.as_ptr(), &mut handle) };
        assert_eq!(status, PgStatus::Ok, "{}", last_error());
        assert!(!handle.is_null());
        handle
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(pg_last_error()) }.to_str().unwrap().to_owned()
    }

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
        unsafe { pg_string_free(ptr) };
        text
    }

    // One interval at each far corner of the 2x3 grid, so no arrow joins
    // the two supports and all flags describe honest interval components.
    fn sample_interval_sum() -> String {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f5 = FieldSpec::Prime(5);
        let parts: Vec<Rep> = [
            Staircase::new(1, vec![(1, 1)]).unwrap(),
            Staircase::new(2, vec![(3, 3)]).unwrap(),
        ]
        .iter()
        .map(|st| interval_rep(&q, st, f5).unwrap())
        .collect();
        write_module_str(&Rep::direct_sum_many(&q, f5, &parts))
    }

    #[test]
    fn parse_classify_and_round_trip() {
        let json = sample_interval_sum();
        let handle = parse(&json);
        unsafe {
            assert_eq!(pg_module_validate(handle), PgStatus::Ok);

            let mut dim = 0usize;
            assert_eq!(pg_module_dim_total(handle, &mut dim), PgStatus::Ok);
            assert!(dim > 0);

            let mut flags = PgClassification {
                thin: false,
                support_connected: false,
                support_convex: false,
                nonzero_over_support: false,
                identity_over_support: false,
                pre_interval: false,
                interval: false,
            };
            assert_eq!(pg_module_classify(handle, &mut flags), PgStatus::Ok);
            assert!(flags.identity_over_support);

            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(pg_module_to_json(handle, &mut text), PgStatus::Ok);
            assert_eq!(take_string(text), json);

            pg_module_free(handle);
        }
    }

    #[test]
    fn decomposability_and_multiplicity() {
        let handle = parse(&sample_interval_sum());
        unsafe {
            let mut yes = false;
            assert_eq!(pg_module_interval_decomposable(handle, &mut yes), PgStatus::Ok);
            assert!(yes);

            let mut lines: *mut c_char = ptr::null_mut();
            assert_eq!(pg_module_thin_decompose(handle, &mut lines), PgStatus::Ok);
            let text = take_string(lines);
            assert_eq!(text.lines().count(), 2, "{text}");

            let first = text.lines().next().unwrap().to_owned();
            let c = CString::new(first).unwrap();
            let mut count = 0usize;
            assert_eq!(
                pg_module_interval_multiplicity(handle, c.as_ptr(), &mut count),
                PgStatus::Ok
            );
            assert_eq!(count, 1);

            let absent = CString::new("1..2: [1,3];[1,3]").unwrap();
            assert_eq!(
                pg_module_interval_multiplicity(handle, absent.as_ptr(), &mut count),
                PgStatus::Ok
            );
            assert_eq!(count, 0);

            pg_module_free(handle);
        }
    }

    #[test]
    fn rebase_returns_identity_form() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f7 = FieldSpec::Prime(7);
        let (rep, truth) = pergrid::random_interval_sum(&q, 1, f7, 11).unwrap();
        let handle = parse(&write_module_str(&rep));
        unsafe {
            let mut fixed: *mut PgModule = ptr::null_mut();
            assert_eq!(pg_module_rebase(handle, &mut fixed), PgStatus::Ok);
            let want = interval_rep(&q, &truth[0], f7).unwrap();
            assert_eq!((*fixed).inner, want);
            pg_module_free(fixed);
            pg_module_free(handle);
        }
    }

    #[test]
    fn cube_examples_cross_the_boundary() {
        let twisted = cube_cycle(FieldSpec::Rational, FieldSpec::Rational.from_i64(2));
        let handle = parse(&write_module_str(&twisted));
        unsafe {
            // Thin splitting is a two-factor operation.
            let mut lines: *mut c_char = ptr::null_mut();
            assert_eq!(
                pg_module_thin_decompose(handle, &mut lines),
                PgStatus::Unsupported
            );
            assert!(!last_error().is_empty());

            // The fallback candidate enumeration still settles the verdict.
            let mut yes = true;
            assert_eq!(pg_module_interval_decomposable(handle, &mut yes), PgStatus::Ok);
            assert!(!yes);

            // Twisted cubes are not interval modules.
            let mut fixed: *mut PgModule = ptr::null_mut();
            assert_eq!(pg_module_rebase(handle, &mut fixed), PgStatus::InvalidInput);
            assert!(fixed.is_null());

            pg_module_free(handle);
        }
    }

    #[test]
    fn counting_matches_the_library() {
        unsafe {
            let mut count = 0u64;
            assert_eq!(pg_count_intervals(3, 3, &mut count), PgStatus::Ok);
            assert_eq!(count, 83);

            assert_eq!(pg_count_intervals(0, 3, &mut count), PgStatus::InvalidInput);
            assert_eq!(pg_count_intervals(30, 30, &mut count), PgStatus::InvalidInput);
        }
    }

    #[test]
    fn error_reporting_and_null_handling() {
        unsafe {
            let mut handle: *mut PgModule = ptr::null_mut();
            assert_eq!(
                pg_module_parse(ptr::null(), &mut handle),
                PgStatus::NullArgument
            );

            let bad = CString::new("{ not json").unwrap();
            assert_eq!(pg_module_parse(bad.as_ptr(), &mut handle), PgStatus::InvalidInput);
            assert!(handle.is_null());
            assert!(!last_error().is_empty());

            let invalid_utf8 = [0xffu8, 0];
            assert_eq!(
                pg_module_parse(invalid_utf8.as_ptr() as *const c_char, &mut handle),
                PgStatus::InvalidUtf8
            );

            let missing = CString::new("/no/such/file.json").unwrap();
            assert_eq!(pg_module_read(missing.as_ptr(), &mut handle), PgStatus::InvalidInput);

            let mut dim = 0usize;
            assert_eq!(pg_module_dim_total(ptr::null(), &mut dim), PgStatus::NullArgument);

            // Free functions ignore null.
            pg_module_free(ptr::null_mut());
            pg_string_free(ptr::null_mut());

            assert!(!pg_version().is_null());
        }
    }
}
