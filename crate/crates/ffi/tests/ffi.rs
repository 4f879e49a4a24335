use std::ffi::CStr;
use std::ptr;

use sumfree_ffi::*;

unsafe fn set(bound: u32, v: &[u32]) -> *mut SfIntSet {
    let mut h = ptr::null_mut();
    assert_eq!(sf_intset_new(bound, v.as_ptr(), v.len(), &mut h), SfStatus::Ok);
    h
}

unsafe fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    sf_last_error(buf.as_mut_ptr(), buf.len());
    CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
}

unsafe fn count_string(c: *const SfBigCount) -> String {
    let mut buf = [0 as std::ffi::c_char; 64];
    let mut needed = 0;
    assert_eq!(sf_bigcount_to_string(c, buf.as_mut_ptr(), buf.len(), &mut needed), SfStatus::Ok);
    CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
}

#[test]
fn sets_round_trip() {
    unsafe {
        let s = set(10, &[8, 2, 4, 2]);
        assert_eq!(sf_intset_len(s), 3);
        let mut buf = [0u32; 3];
        let mut len = 0;
        assert_eq!(sf_intset_members(s, buf.as_mut_ptr(), 3, &mut len), SfStatus::Ok);
        assert_eq!(buf, [2, 4, 8]);
        assert_eq!(sf_intset_members(s, buf.as_mut_ptr(), 2, &mut len), SfStatus::BufferTooSmall);
        assert_eq!(len, 3);
        sf_intset_free(s);
    }
}

#[test]
fn out_of_universe_reports_message() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sf_intset_new(5, [6u32].as_ptr(), 1, &mut h), SfStatus::OutOfUniverse);
        assert!(h.is_null());
        assert!(last_error().contains("outside universe"));
    }
}

#[test]
fn sum_free_and_statistics() {
    unsafe {
        let s = set(7, &[1, 3, 5, 7]);
        let mut free = false;
        assert_eq!(sf_is_sum_free(s, SfConvention::EqualSummands, &mut free), SfStatus::Ok);
        assert!(free);
        let mut st = SfStatistics::default();
        assert_eq!(sf_statistics(s, 7, &mut st), SfStatus::Ok);
        // lower half of [7] is {1, 2, 3}: k = (3.5 − 1) + (3.5 − 3) = 3
        assert_eq!((st.m, st.ell, st.k_twice, st.a_twice, st.odd), (4, 2, 6, 5, true));
        sf_intset_free(s);

        let s = set(4, &[2, 4]);
        sf_is_sum_free(s, SfConvention::EqualSummands, &mut free);
        assert!(!free);
        sf_is_sum_free(s, SfConvention::DistinctSummands, &mut free);
        assert!(free);
        sf_intset_free(s);
    }
}

#[test]
fn sumset_span_doubling() {
    unsafe {
        let s = set(16, &[1, 2, 4, 8, 16]);
        let mut ss = ptr::null_mut();
        assert_eq!(sf_sumset(s, s, &mut ss), SfStatus::Ok);
        assert_eq!(sf_intset_len(ss), 15);
        let mut w = 0;
        sf_span(ss, &mut w);
        assert_eq!(w, 30);
        let (mut num, mut den) = (0, 0);
        sf_doubling(s, &mut num, &mut den);
        assert_eq!((num, den), (3, 1));
        let e = set(3, &[]);
        assert_eq!(sf_span(e, &mut w), SfStatus::UndefinedSpan);
        for h in [s, ss, e] {
            sf_intset_free(h);
        }
    }
}

#[test]
fn counts() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(sf_count_sum_free(4, -1, SfConvention::EqualSummands, 1, 0, &mut c), SfStatus::Ok);
        let mut v = 0;
        sf_bigcount_to_u64(c, &mut v);
        assert_eq!(v, 9);
        sf_bigcount_free(c);

        assert_eq!(sf_count_sum_free(24, 6, SfConvention::EqualSummands, 0, 0, &mut c), SfStatus::Ok);
        assert_eq!(count_string(c), "13181");
        sf_bigcount_free(c);

        assert_eq!(sf_partitions(8, 3, &mut c), SfStatus::Ok);
        assert_eq!(count_string(c), "2");
        sf_bigcount_free(c);
        assert_eq!(sf_partitions(100, 0, &mut c), SfStatus::Ok);
        assert_eq!(count_string(c), "190569292");
        sf_bigcount_free(c);

        assert_eq!(sf_count_in_window(20, 2, 4, SfConvention::EqualSummands, 1, 0, &mut c), SfStatus::Ok);
        assert_eq!(count_string(c), "505");
        sf_bigcount_free(c);
    }
}

#[test]
fn budget_and_null_errors() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(
            sf_count_sum_free(80, -1, SfConvention::EqualSummands, 1, 1000, &mut c),
            SfStatus::BudgetExceeded
        );
        assert!(last_error().contains("budget"));
        let mut free = false;
        assert_eq!(sf_is_sum_free(ptr::null(), SfConvention::EqualSummands, &mut free), SfStatus::NullPointer);

        assert_eq!(sf_partitions(500, 0, &mut c), SfStatus::Ok);
        let mut v = 0;
        assert_eq!(sf_bigcount_to_u64(c, &mut v), SfStatus::Overflow);
        let mut needed = 0;
        let mut small = [0 as std::ffi::c_char; 4];
        assert_eq!(sf_bigcount_to_string(c, small.as_mut_ptr(), 4, &mut needed), SfStatus::BufferTooSmall);
        assert!(needed > 4);
        sf_bigcount_free(c);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sumfree.h")).unwrap();
    for name in ["sf_count_sum_free", "SfIntSet", "SF_STATUS_BUDGET_EXCEEDED", "sf_last_error"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(sf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
