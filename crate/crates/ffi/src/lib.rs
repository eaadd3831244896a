//! C ABI over `cloudlab`. Every fallible call returns a [`CloudlabStatus`];
//! the message of the last failure on the calling thread is available from
//! [`cloudlab_last_error`]. Handles come from `cloudlab_cloud_parse` or
//! `cloudlab_cloud_from_dataset` and are released with
//! `cloudlab_cloud_free`. Strings returned by the library are released with
//! `cloudlab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cloudlab::geometry::{verify_representation, Representation};
use cloudlab::states::{
    classify_pair_with, enumerate_states_with, ks_check, Kind, Limits, Relation, StatesError,
};
use cloudlab::{datasets, parse_cloud_file, serialize, Cloud, CloudError};

/// Opaque cloud handle, with the file's vectors if it had any.
pub struct CloudlabCloud {
    cloud: Cloud,
    rep: Option<Representation>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownDataset = 4,
    UnknownVertex = 5,
    LimitExceeded = 6,
    InvalidArgument = 7,
    NoRepresentation = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudlabKind {
    I = 1,
    Ii = 2,
    Iii = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudlabRelation {
    NoStateWithATrue = 0,
    Tifs = 1,
    Tits = 2,
    Equivalent = 3,
    Opposite = 4,
    Independent = 5,
    ValueIndefinite = 6,
}

impl From<Relation> for CloudlabRelation {
    fn from(r: Relation) -> Self {
        match r {
            Relation::NoStateWithATrue => CloudlabRelation::NoStateWithATrue,
            Relation::Tifs => CloudlabRelation::Tifs,
            Relation::Tits => CloudlabRelation::Tits,
            Relation::Equivalent => CloudlabRelation::Equivalent,
            Relation::Opposite => CloudlabRelation::Opposite,
            Relation::Independent => CloudlabRelation::Independent,
            Relation::ValueIndefinite => CloudlabRelation::ValueIndefinite,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(CloudlabStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CloudlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CloudlabStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CloudlabStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(CloudlabStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(CloudlabStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a>(h: *const CloudlabCloud) -> Result<&'a CloudlabCloud, Fail> {
    h.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn states_fail(e: StatesError) -> Fail {
    let status = match &e {
        StatesError::TooManyVertices { .. } | StatesError::TooManyStates { .. } => {
            CloudlabStatus::LimitExceeded
        }
        StatesError::Cloud(CloudError::UnknownVertex(_)) => CloudlabStatus::UnknownVertex,
        _ => CloudlabStatus::InvalidArgument,
    };
    Fail(status, e.to_string())
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cloudlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cloudlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses cloud-format text into a new handle.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_parse(
    source: *const c_char,
    out: *mut *mut CloudlabCloud,
) -> CloudlabStatus {
    guard(|| {
        let t = text(source)?;
        let file = parse_cloud_file(t).map_err(|e| Fail(CloudlabStatus::Parse, e.to_string()))?;
        let h = Box::new(CloudlabCloud {
            cloud: file.cloud,
            rep: file.representation,
        });
        put(out, Box::into_raw(h))
    })
}

/// Loads a built-in cloud, e.g. `"firefly"` or `"hh10(x=1/4)"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_from_dataset(
    spec: *const c_char,
    out: *mut *mut CloudlabCloud,
) -> CloudlabStatus {
    guard(|| {
        let s = text(spec)?;
        let d = datasets::load(s).map_err(|e| {
            let status = match e {
                datasets::DatasetError::Unknown(_) => CloudlabStatus::UnknownDataset,
                _ => CloudlabStatus::InvalidArgument,
            };
            Fail(status, e.to_string())
        })?;
        let h = Box::new(CloudlabCloud {
            cloud: d.cloud,
            rep: d.representation,
        });
        put(out, Box::into_raw(h))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_free(h: *mut CloudlabCloud) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_vertex_count(h: *const CloudlabCloud) -> usize {
    h.as_ref().map_or(0, |h| h.cloud.vertex_count())
}

/// Context count, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_context_count(h: *const CloudlabCloud) -> usize {
    h.as_ref().map_or(0, |h| h.cloud.context_count())
}

/// Number of type-II states. The state cap is read from
/// `CLOUDLAB_STATE_CAP`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_count_states(
    h: *const CloudlabCloud,
    out: *mut u64,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        let s = enumerate_states_with(&h.cloud, &Limits::from_env()).map_err(states_fail)?;
        put(out, s.len() as u64)
    })
}

/// Relation between vertices `a` and `b`.
///
/// # Safety
/// `h` must be a live handle; `a`, `b` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_classify_pair(
    h: *const CloudlabCloud,
    a: *const c_char,
    b: *const c_char,
    kind: CloudlabKind,
    out: *mut CloudlabRelation,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        let (a, b) = (text(a)?, text(b)?);
        let kind = match kind {
            CloudlabKind::I => Kind::I,
            CloudlabKind::Ii => Kind::II,
            CloudlabKind::Iii => Kind::III,
        };
        let r =
            classify_pair_with(&h.cloud, a, b, kind, &Limits::from_env()).map_err(states_fail)?;
        put(out, r.into())
    })
}

/// Writes true iff the cloud has no type-II state.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_ks_check(
    h: *const CloudlabCloud,
    out: *mut bool,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        put(out, ks_check(&h.cloud).kochen_specker)
    })
}

/// Chromatic number of the skeleton.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_chromatic_number(
    h: *const CloudlabCloud,
    out: *mut usize,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        put(
            out,
            cloudlab::coloring::chromatic_number(&h.cloud.skeleton()).0,
        )
    })
}

/// Number of violations of the handle's vectors against its orthogonality.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_verify_representation(
    h: *const CloudlabCloud,
    out: *mut usize,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        let rep = h
            .rep
            .as_ref()
            .ok_or_else(|| Fail(CloudlabStatus::NoRepresentation, "no vectors".into()))?;
        let r = verify_representation(&h.cloud, rep)
            .map_err(|e| Fail(CloudlabStatus::InvalidArgument, e.to_string()))?;
        put(out, r.violations.len())
    })
}

/// The cloud (and vectors) in the file format. Release with
/// `cloudlab_string_free`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_cloud_serialize(
    h: *const CloudlabCloud,
    out: *mut *mut c_char,
) -> CloudlabStatus {
    guard(|| {
        let h = handle(h)?;
        let s = CString::new(serialize(&h.cloud, h.rep.as_ref()))
            .map_err(|e| Fail(CloudlabStatus::InvalidArgument, e.to_string()))?;
        put(out, s.into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cloudlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
