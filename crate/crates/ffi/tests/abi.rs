use std::ffi::{CStr, CString};
use std::ptr;

use cubic_torsion_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ct_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn form_roundtrip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ct_form_new(1, 0, 0, 2, &mut f), CtStatus::Ok);
        let mut coeffs = [0i64; 4];
        assert_eq!(ct_form_coefficients(f, coeffs.as_mut_ptr()), CtStatus::Ok);
        assert_eq!(coeffs, [1, 0, 0, 2]);
        let mut disc = 0;
        assert_eq!(ct_form_discriminant(f, &mut disc), CtStatus::Ok);
        assert_eq!(disc, 4);
        let mut red = true;
        assert_eq!(ct_form_is_reducible(f, &mut red), CtStatus::Ok);
        assert!(!red);

        let mut g = ptr::null_mut();
        assert_eq!(ct_form_canonical(f, &mut g), CtStatus::Ok);
        let mut d2 = 0;
        assert_eq!(ct_form_discriminant(g, &mut d2), CtStatus::Ok);
        assert_eq!(d2, disc);
        ct_form_free(g);
        ct_form_free(f);
        ct_form_free(ptr::null_mut());
    }
}

#[test]
fn null_and_bad_arguments() {
    unsafe {
        let mut disc = 0;
        assert_eq!(ct_form_discriminant(ptr::null(), &mut disc), CtStatus::NullPointer);
        assert!(last_error().contains("form"));
        assert_eq!(ct_form_new(1, 0, 0, 0, ptr::null_mut()), CtStatus::NullPointer);

        let mut f = ptr::null_mut();
        assert_eq!(ct_form_new(1, 0, 0, 0, &mut f), CtStatus::Ok);
        let mut g = ptr::null_mut();
        assert_ne!(ct_form_canonical(f, &mut g), CtStatus::Ok);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
        ct_form_free(f);

        let mut n = 0u64;
        assert_eq!(ct_cl3_count(2, &mut n), CtStatus::InvalidArgument);
        assert_eq!(ct_cubic_census(-44, &mut n), CtStatus::InvalidArgument);
    }
}

#[test]
fn class_lists() {
    unsafe {
        let mut list = ptr::null_mut();
        assert_eq!(ct_classes_with_disc(-3, &mut list), CtStatus::Ok);
        let mut len = 0usize;
        assert_eq!(ct_class_list_len(list, &mut len), CtStatus::Ok);
        assert_eq!(len, 3);
        for i in 0..len {
            let mut f = ptr::null_mut();
            assert_eq!(ct_class_list_get(list, i, &mut f), CtStatus::Ok);
            let mut d = 0;
            assert_eq!(ct_form_discriminant(f, &mut d), CtStatus::Ok);
            assert_eq!(d, -3);
            ct_form_free(f);
        }
        let mut f = ptr::null_mut();
        assert_eq!(ct_class_list_get(list, len, &mut f), CtStatus::InvalidArgument);
        ct_class_list_free(list);

        assert_eq!(ct_classes_with_disc(-1_000_003, &mut list), CtStatus::BoundExceeded);
    }
}

#[test]
fn scalar_queries() {
    unsafe {
        let mut n = 0u64;
        assert_eq!(ct_cl3_count(-23, &mut n), CtStatus::Ok);
        assert_eq!(n, 3);
        assert_eq!(ct_ideal3_count(-23, &mut n), CtStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(ct_cubic_census(-23, &mut n), CtStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(ct_count_classes(2000, CtSign::Negative, false, &mut n), CtStatus::Ok);
        let all = n;
        assert_eq!(ct_count_classes(2000, CtSign::Negative, true, &mut n), CtStatus::Ok);
        assert!(0 < n && n < all);
        let v = CStr::from_ptr(ct_version());
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn families() {
    unsafe {
        let json = CString::new(r#"{"default": "maximal"}"#).unwrap();
        let mut fam = ptr::null_mut();
        assert_eq!(ct_family_parse(json.as_ptr(), &mut fam), CtStatus::Ok);
        let mut inside = false;
        assert_eq!(ct_family_contains(fam, -23, &mut inside), CtStatus::Ok);
        assert!(inside);
        assert_eq!(ct_family_contains(fam, -92, &mut inside), CtStatus::Ok);
        assert!(!inside);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(ct_family_mass(fam, 50, &mut lo, &mut hi), CtStatus::Ok);
        assert_eq!((lo, hi), (1.0, 1.0));
        ct_family_free(fam);

        let bad = CString::new("{not json").unwrap();
        assert_eq!(ct_family_parse(bad.as_ptr(), &mut fam), CtStatus::InvalidArgument);
        assert_eq!(ct_family_parse(ptr::null(), &mut fam), CtStatus::NullPointer);
    }
}
