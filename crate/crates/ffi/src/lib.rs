//! C interface to `dicksonlab`.
//!
//! Fields are opaque `DlField` handles from [`dl_field_new`], released with
//! [`dl_field_free`]. Field elements cross the boundary as enumeration
//! indices: for `F_{p^e}` the element `sum c_i t^i` has index `sum c_i p^i`.
//!
//! Every fallible call returns a [`DlStatus`]; on anything but `DL_STATUS_OK`
//! a message is available from [`dl_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dicksonlab::dickson::{
    eval_direct, eval_e1_functional, eval_e1_recursive, eval_e1_via_f, EvalRequest,
};
use dicksonlab::ff::FieldOptions;
use dicksonlab::filters::filter_report;
use dicksonlab::pp::{check_two_to_one, is_pp_exhaustive, is_pp_power_sum};
use dicksonlab::sums::{sum_table_bruteforce, sum_table_recurrence};
use dicksonlab::{Error, FieldElement, FieldSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    FieldTooLarge = 3,
    CharacteristicTwo = 4,
    IndexTooLarge = 5,
    BufferTooSmall = 6,
    Inconsistent = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlEvalMethod {
    Direct = 0,
    Recursive = 1,
    Functional = 2,
    ViaF = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlPpMethod {
    Exhaustive = 0,
    PowerSum = 1,
    TwoToOne = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlSumMethod {
    Recurrence = 0,
    BruteForce = 1,
}

/// Opaque field handle.
pub struct DlField {
    spec: FieldSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> DlStatus {
    match err {
        Error::FieldTooLarge { .. } => DlStatus::FieldTooLarge,
        Error::CharacteristicTwo(_) => DlStatus::CharacteristicTwo,
        Error::IndexTooLarge { .. } => DlStatus::IndexTooLarge,
        Error::Inconsistent(_) => DlStatus::Inconsistent,
        _ => DlStatus::InvalidArgument,
    }
}

struct Fail(DlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guarded(body: impl FnOnce() -> Result<(), Fail>) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DlStatus::Panic
        }
    }
}

unsafe fn field_ref<'a>(field: *const DlField) -> Result<&'a FieldSpec, Fail> {
    field
        .as_ref()
        .map(|f| &f.spec)
        .ok_or_else(|| Fail(DlStatus::NullPointer, "null field handle".into()))
}

fn element(field: &FieldSpec, index: u64) -> Result<FieldElement<'_>, Fail> {
    field.from_index(index).ok_or_else(|| {
        Fail(
            DlStatus::InvalidArgument,
            format!("element index {index} not below q = {}", field.order()),
        )
    })
}

fn null(what: &str) -> Fail {
    Fail(DlStatus::NullPointer, format!("null {what} pointer"))
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn dl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds `F_{p^e}` with the default modulus. `force` lifts the size limit.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dl_field_new(
    p: u64,
    e: u32,
    force: bool,
    out: *mut *mut DlField,
) -> DlStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = FieldSpec::with_options(
            p,
            e,
            FieldOptions {
                modulus: None,
                force,
            },
        )?;
        *out = Box::into_raw(Box::new(DlField { spec }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`dl_field_new`] and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn dl_field_free(field: *mut DlField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// `q`, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_field_order(field: *const DlField) -> u64 {
    field.as_ref().map_or(0, |f| f.spec.order())
}

/// `p`, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_field_characteristic(field: *const DlField) -> u64 {
    field.as_ref().map_or(0, |f| f.spec.characteristic())
}

/// `E_n(a, x)` by the explicit sum.
///
/// # Safety
/// `field` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dl_eval(
    field: *const DlField,
    n: u64,
    a: u64,
    x: u64,
    out: *mut u64,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = eval_direct(&EvalRequest::reversed(n, element(f, a)?, element(f, x)?))?;
        *out = v.index();
        Ok(())
    })
}

/// `E_n(1, x)` by the chosen method.
///
/// # Safety
/// `field` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dl_eval_e1(
    field: *const DlField,
    n: u64,
    x: u64,
    method: DlEvalMethod,
    out: *mut u64,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = element(f, x)?;
        let v = match method {
            DlEvalMethod::Direct => eval_direct(&EvalRequest::reversed(n, f.one(), x))?,
            DlEvalMethod::Recursive => eval_e1_recursive(n, x)?,
            DlEvalMethod::Functional => eval_e1_functional(n, x)?,
            DlEvalMethod::ViaF => eval_e1_via_f(n, x)?,
        };
        *out = v.index();
        Ok(())
    })
}

/// Whether `x -> E_n(1, x)` permutes the field.
///
/// # Safety
/// `field` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dl_is_pp(
    field: *const DlField,
    n: u64,
    method: DlPpMethod,
    out: *mut bool,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let images = f
            .elements()
            .map(|x| eval_e1_functional(n, x).or_else(|_| eval_e1_recursive(n, x)))
            .collect::<Result<Vec<_>, _>>()?;
        let lookup = |x: FieldElement<'_>| images[x.index() as usize];
        *out = match method {
            DlPpMethod::Exhaustive => is_pp_exhaustive(f, lookup).is_pp,
            DlPpMethod::PowerSum => is_pp_power_sum(f, lookup).is_pp,
            DlPpMethod::TwoToOne => check_two_to_one(n, f)?.is_pp,
        };
        Ok(())
    })
}

/// Whether `n` passes every applicable necessary condition for `E_n(1, x)`
/// to permute the field.
///
/// # Safety
/// `field` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dl_filters_pass(
    field: *const DlField,
    n: u64,
    out: *mut bool,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = filter_report(n, f.order(), f.characteristic()).overall();
        Ok(())
    })
}

/// Writes `S_1 ..= S_{q^2-1}` (element indices) into `buf`. `len` must be at
/// least `q^2 - 1`; `written` receives the count either way.
///
/// # Safety
/// `field` must be a live handle, `buf` valid for `len` writes and `written`
/// for one.
#[no_mangle]
pub unsafe extern "C" fn dl_sum_table(
    field: *const DlField,
    method: DlSumMethod,
    buf: *mut u64,
    len: usize,
    written: *mut usize,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if written.is_null() {
            return Err(null("written"));
        }
        let need = (f.order() * f.order() - 1) as usize;
        *written = need;
        if len < need {
            return Err(Fail(
                DlStatus::BufferTooSmall,
                format!("need {need} slots, got {len}"),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let table = match method {
            DlSumMethod::Recurrence => sum_table_recurrence(f)?,
            DlSumMethod::BruteForce => sum_table_bruteforce(f),
        };
        let out = std::slice::from_raw_parts_mut(buf, need);
        for (slot, v) in out.iter_mut().zip(&table.values) {
            *slot = v.index();
        }
        Ok(())
    })
}

/// Canonical rendering `c0.c1...` of an element; free with
/// [`dl_string_free`]. Null on error.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_element_string(field: *const DlField, index: u64) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = guarded(|| {
        let f = field_ref(field)?;
        let s = element(f, index)?.to_string();
        result = CString::new(s).expect("no nul").into_raw();
        Ok(())
    });
    if status == DlStatus::Ok {
        result
    } else {
        ptr::null_mut()
    }
}

/// Parses `c0.c1...`.
///
/// # Safety
/// `field` must be a live handle, `text` a nul-terminated string and `out`
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dl_element_parse(
    field: *const DlField,
    text: *const c_char,
    out: *mut u64,
) -> DlStatus {
    guarded(|| {
        let f = field_ref(field)?;
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(DlStatus::InvalidArgument, "text is not UTF-8".into()))?;
        *out = f.parse_element(s)?.index();
        Ok(())
    })
}

/// JSON with `p`, `e`, `q`, `modulus` and `nu`; free with [`dl_string_free`].
/// Null for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_field_info_json(field: *const DlField) -> *mut c_char {
    let Some(f) = field.as_ref().map(|f| &f.spec) else {
        set_error("null field handle");
        return ptr::null_mut();
    };
    let doc = serde_json::json!({
        "p": f.characteristic(),
        "e": f.degree(),
        "q": f.order(),
        "modulus": f.modulus(),
        "nu": f.quad_nonresidue().map(|v| v.to_string()),
    });
    CString::new(doc.to_string()).expect("no nul").into_raw()
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
