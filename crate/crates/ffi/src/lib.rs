//! C ABI over `cubic-torsion`.
//!
//! Every function returns a [`CtStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`ct_last_error_message`]. Handles are opaque and owned by the caller,
//! who releases them with the matching `*_free` function.
//!
//! Safety contract for every `unsafe` function here: pointer arguments are
//! null or valid for the access their name implies (handles come from this
//! library and are not yet freed; `out_*` pointers are writable; strings are
//! NUL-terminated). Null is reported as `CtStatus::NullPointer`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cubic_torsion::enumeration::{canonical, classes_with_disc, count_classes, ClassFilter, Sign};
use cubic_torsion::local_mass::{mass, FamilySpec};
use cubic_torsion::{CubicForm, Error};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BoundExceeded = 3,
    Degenerate = 4,
    Overflow = 5,
    Internal = 6,
    Io = 7,
    Panic = 8,
}

/// Discriminant sign selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtSign {
    Negative = 0,
    Positive = 1,
}

impl From<CtSign> for Sign {
    fn from(s: CtSign) -> Sign {
        match s {
            CtSign::Negative => Sign::Neg,
            CtSign::Positive => Sign::Pos,
        }
    }
}

/// An integer-matrix binary cubic form ax³ + 3bx²y + 3cxy² + dy³.
pub struct CtForm(CubicForm);

/// The canonical class representatives of one discriminant.
pub struct CtClassList(Vec<CubicForm>);

/// A family of quadratic orders given by local conditions.
pub struct CtFamily(FamilySpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CtStatus {
    match e {
        Error::BoundExceeded(_) => CtStatus::BoundExceeded,
        Error::Degenerate => CtStatus::Degenerate,
        Error::Overflow(_) => CtStatus::Overflow,
        Error::Internal(_) => CtStatus::Internal,
        Error::Io(_) => CtStatus::Io,
        _ => CtStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CtStatus, String)>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cubic-torsion".into());
            CtStatus::Panic
        }
    }
}

fn lift<T>(r: cubic_torsion::Result<T>) -> Result<T, (CtStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<'a, T>(p: *const T, name: &str) -> Result<&'a T, (CtStatus, String)> {
    // SAFETY: callers pass either null or a pointer obtained from this library
    unsafe { p.as_ref() }.ok_or((CtStatus::NullPointer, format!("{name} is null")))
}

fn out<T>(p: *mut T, name: &str, v: T) -> Result<(), (CtStatus, String)> {
    if p.is_null() {
        return Err((CtStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: non-null and supplied by the caller for writing
    unsafe { p.write(v) };
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a form handle.
#[no_mangle]
pub unsafe extern "C" fn ct_form_new(a: i64, b: i64, c: i64, d: i64, out_form: *mut *mut CtForm) -> CtStatus {
    guard(|| out(out_form, "out_form", Box::into_raw(Box::new(CtForm(CubicForm::new(a, b, c, d))))))
}

/// Releases a form handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ct_form_free(form: *mut CtForm) {
    if !form.is_null() {
        // SAFETY: produced by Box::into_raw in this library
        drop(unsafe { Box::from_raw(form) });
    }
}

/// Writes (a, b, c, d) to `out_coeffs[0..4]`.
#[no_mangle]
pub unsafe extern "C" fn ct_form_coefficients(form: *const CtForm, out_coeffs: *mut i64) -> CtStatus {
    guard(|| {
        let f = non_null(form, "form")?.0;
        if out_coeffs.is_null() {
            return Err((CtStatus::NullPointer, "out_coeffs is null".into()));
        }
        for (i, v) in [f.a, f.b, f.c, f.d].into_iter().enumerate() {
            // SAFETY: the caller provides room for four values
            unsafe { out_coeffs.add(i).write(v) };
        }
        Ok(())
    })
}

/// Reduced discriminant.
#[no_mangle]
pub unsafe extern "C" fn ct_form_discriminant(form: *const CtForm, out_disc: *mut i64) -> CtStatus {
    guard(|| {
        let f = non_null(form, "form")?;
        let d = lift(f.0.reduced_disc())?;
        let d = i64::try_from(d).map_err(|_| (CtStatus::Overflow, "discriminant exceeds 64 bits".into()))?;
        out(out_disc, "out_disc", d)
    })
}

/// Canonical SL₂(Z) representative, as a new handle.
#[no_mangle]
pub unsafe extern "C" fn ct_form_canonical(form: *const CtForm, out_form: *mut *mut CtForm) -> CtStatus {
    guard(|| {
        let f = non_null(form, "form")?;
        let c = lift(canonical(&f.0))?;
        out(out_form, "out_form", Box::into_raw(Box::new(CtForm(c))))
    })
}

/// Whether the form has a rational linear factor.
#[no_mangle]
pub unsafe extern "C" fn ct_form_is_reducible(form: *const CtForm, out_flag: *mut bool) -> CtStatus {
    guard(|| {
        let f = non_null(form, "form")?;
        out(out_flag, "out_flag", f.0.is_reducible())
    })
}

/// Whether the Hessian covariant is primitive.
#[no_mangle]
pub unsafe extern "C" fn ct_form_is_projective(form: *const CtForm, out_flag: *mut bool) -> CtStatus {
    guard(|| {
        let f = non_null(form, "form")?;
        out(out_flag, "out_flag", lift(f.0.is_projective())?)
    })
}

/// All classes of reduced discriminant `disc` (|disc| ≤ 3000).
#[no_mangle]
pub unsafe extern "C" fn ct_classes_with_disc(disc: i64, out_list: *mut *mut CtClassList) -> CtStatus {
    guard(|| {
        let (forms, _) = lift(classes_with_disc(disc))?;
        out(out_list, "out_list", Box::into_raw(Box::new(CtClassList(forms))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_class_list_len(list: *const CtClassList, out_len: *mut usize) -> CtStatus {
    guard(|| {
        let l = non_null(list, "list")?;
        out(out_len, "out_len", l.0.len())
    })
}

/// The form at `index`, as a new handle.
#[no_mangle]
pub unsafe extern "C" fn ct_class_list_get(
    list: *const CtClassList,
    index: usize,
    out_form: *mut *mut CtForm,
) -> CtStatus {
    guard(|| {
        let l = non_null(list, "list")?;
        let f = *l.0.get(index).ok_or((CtStatus::InvalidArgument, format!("index {index} out of range")))?;
        out(out_form, "out_form", Box::into_raw(Box::new(CtForm(f))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_class_list_free(list: *mut CtClassList) {
    if !list.is_null() {
        // SAFETY: produced by Box::into_raw in this library
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Number of classes with 0 < ±disc < x (x ≤ 10⁶).
#[no_mangle]
pub unsafe extern "C" fn ct_count_classes(
    x: u64,
    sign: CtSign,
    irreducible_only: bool,
    out_count: *mut u64,
) -> CtStatus {
    guard(|| {
        let filter = if irreducible_only { ClassFilter::irreducible() } else { ClassFilter::all() };
        out(out_count, "out_count", lift(count_classes(x, sign.into(), &filter))?)
    })
}

/// |Cl₃(O)| for the order of discriminant `disc`.
#[no_mangle]
pub unsafe extern "C" fn ct_cl3_count(disc: i64, out_count: *mut u64) -> CtStatus {
    guard(|| out(out_count, "out_count", lift(cubic_torsion::quad::cl3_count(disc))?))
}

/// |I₃(O)| for the order of discriminant `disc`.
#[no_mangle]
pub unsafe extern "C" fn ct_ideal3_count(disc: i64, out_count: *mut u64) -> CtStatus {
    guard(|| out(out_count, "out_count", lift(cubic_torsion::quad::ideal3_count(disc))?))
}

/// Number of cubic fields of squarefree discriminant `disc`.
#[no_mangle]
pub unsafe extern "C" fn ct_cubic_census(disc: i64, out_count: *mut u64) -> CtStatus {
    guard(|| out(out_count, "out_count", lift(cubic_torsion::enumeration::cubic_census_squarefree(disc))?))
}

/// Parses a family from its JSON text.
#[no_mangle]
pub unsafe extern "C" fn ct_family_parse(json: *const c_char, out_family: *mut *mut CtFamily) -> CtStatus {
    guard(|| {
        if json.is_null() {
            return Err((CtStatus::NullPointer, "json is null".into()));
        }
        // SAFETY: NUL-terminated string supplied by the caller
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| (CtStatus::InvalidArgument, "json is not UTF-8".into()))?;
        let spec = lift(FamilySpec::parse(text))?;
        out(out_family, "out_family", Box::into_raw(Box::new(CtFamily(spec))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_family_free(family: *mut CtFamily) {
    if !family.is_null() {
        // SAFETY: produced by Box::into_raw in this library
        drop(unsafe { Box::from_raw(family) });
    }
}

/// Whether the order of discriminant `disc` belongs to the family.
#[no_mangle]
pub unsafe extern "C" fn ct_family_contains(family: *const CtFamily, disc: i64, out_flag: *mut bool) -> CtStatus {
    guard(|| {
        let fam = non_null(family, "family")?;
        out(out_flag, "out_flag", lift(cubic_torsion::harness::family_contains(&fam.0, disc))?)
    })
}

/// Certified enclosure [lo, hi] of the family's mass, using primes up to
/// `cutoff` exactly.
#[no_mangle]
pub unsafe extern "C" fn ct_family_mass(
    family: *const CtFamily,
    cutoff: u64,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> CtStatus {
    guard(|| {
        let fam = non_null(family, "family")?;
        let m = lift(mass(&fam.0, cutoff))?;
        out(out_lo, "out_lo", m.lo)?;
        out(out_hi, "out_hi", m.hi)
    })
}
