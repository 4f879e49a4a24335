//! C ABI for the `sumfree` crate.
//!
//! Sets and big counts cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Every fallible call returns
//! an [`SfStatus`]; on failure `sf_last_error` holds a message for the calling
//! thread. Panics are caught and reported as `SF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sumfree::enumeration::{count_in_window, count_sum_free, CountQuery, SearchConfig};
use sumfree::partitions::{p, p_star};
use sumfree::sets::{is_sum_free, statistics_of, Convention};
use sumfree::sumsets::{doubling, span, sumset};
use sumfree::{BigCount, Error, IntSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfUniverse = 3,
    UndefinedSpan = 4,
    TooSmall = 5,
    BudgetExceeded = 6,
    InstanceTooLarge = 7,
    OracleTooLarge = 8,
    SamplingInfeasible = 9,
    UnknownFormula = 10,
    Io = 11,
    BufferTooSmall = 12,
    Overflow = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfConvention {
    /// x + x = z also counts as a violation.
    EqualSummands = 0,
    /// Only x + y = z with x ≠ y.
    DistinctSummands = 1,
}

impl From<SfConvention> for Convention {
    fn from(c: SfConvention) -> Self {
        match c {
            SfConvention::EqualSummands => Convention::EQUAL_SUMMANDS,
            SfConvention::DistinctSummands => Convention::DISTINCT_SUMMANDS,
        }
    }
}

/// Statistics of a set relative to `[n]`. Half-integers are stored doubled.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SfStatistics {
    pub m: usize,
    pub ell: usize,
    pub k_twice: u64,
    /// `-1` when no element lies in the lower half.
    pub a_twice: i64,
    pub odd: bool,
}

/// Opaque set of positive integers.
pub struct SfIntSet(IntSet);

/// Opaque arbitrary-precision count.
pub struct SfBigCount(BigCount);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SfStatus {
    match err {
        Error::OutOfUniverse { .. } => SfStatus::OutOfUniverse,
        Error::UndefinedSpan => SfStatus::UndefinedSpan,
        Error::TooSmallForFreiman(_) => SfStatus::TooSmall,
        Error::InstanceTooLarge { .. } => SfStatus::InstanceTooLarge,
        Error::BudgetExceeded { .. } => SfStatus::BudgetExceeded,
        Error::OracleUniverseTooLarge { .. } => SfStatus::OracleTooLarge,
        Error::SamplingInfeasible { .. } => SfStatus::SamplingInfeasible,
        Error::UnknownFormula(_) => SfStatus::UnknownFormula,
        Error::InvalidArgument(_) => SfStatus::InvalidArgument,
        Error::Io(_) => SfStatus::Io,
    }
}

fn guard<F>(f: F) -> SfStatus
where
    F: FnOnce() -> Result<(), SfStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SfStatus::Panic
        }
    }
}

fn check<T>(r: sumfree::Result<T>) -> Result<T, SfStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SfStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument".into());
        SfStatus::NullPointer
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SfStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(SfStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn search_config(threads: usize, budget: u64) -> SearchConfig {
    let cfg = SearchConfig::default().with_threads(threads);
    if budget == 0 {
        cfg
    } else {
        cfg.with_budget(budget)
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sf_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version"),
    };
    VERSION.as_ptr()
}

/// Builds a set inside `[1, bound]` from `len` members (duplicates allowed).
///
/// # Safety
/// `members` must point to `len` values (or be null with `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_intset_new(
    bound: u32,
    members: *const u32,
    len: usize,
    out: *mut *mut SfIntSet,
) -> SfStatus {
    guard(|| {
        let slice = if len == 0 {
            &[][..]
        } else {
            if members.is_null() {
                set_error("null members with nonzero length".into());
                return Err(SfStatus::NullPointer);
            }
            std::slice::from_raw_parts(members, len)
        };
        let set = check(IntSet::from_members(bound, slice.iter().map(|&x| x as u64)))?;
        write_out(out, Box::into_raw(Box::new(SfIntSet(set))))
    })
}

/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_intset_free(set: *mut SfIntSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn sf_intset_len(set: *const SfIntSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Writes the members ascending into `buf`. `*len` receives the member count;
/// fails with `SF_STATUS_BUFFER_TOO_SMALL` when `cap` is short.
///
/// # Safety
/// `buf` must point to `cap` writable values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_intset_members(
    set: *const SfIntSet,
    buf: *mut u32,
    cap: usize,
    len: *mut usize,
) -> SfStatus {
    guard(|| {
        let set = deref(set)?;
        let v = set.0.to_vec();
        write_out(len, v.len())?;
        if v.len() > cap {
            set_error(format!("buffer holds {cap}, need {}", v.len()));
            return Err(SfStatus::BufferTooSmall);
        }
        if !v.is_empty() {
            if buf.is_null() {
                return Err(SfStatus::NullPointer);
            }
            ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        }
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_is_sum_free(set: *const SfIntSet, conv: SfConvention, out: *mut bool) -> SfStatus {
    guard(|| {
        let set = deref(set)?;
        write_out(out, is_sum_free(&set.0, conv.into()))
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_statistics(set: *const SfIntSet, n: u32, out: *mut SfStatistics) -> SfStatus {
    guard(|| {
        let set = deref(set)?;
        if set.0.max().is_some_and(|x| x > n) {
            set_error(format!("set is not inside [1, {n}]"));
            return Err(SfStatus::OutOfUniverse);
        }
        let st = statistics_of(&set.0, n);
        write_out(
            out,
            SfStatistics {
                m: st.m,
                ell: st.ell,
                k_twice: st.k.twice(),
                a_twice: st.a.map_or(-1, |a| a.twice() as i64),
                odd: st.odd_flag,
            },
        )
    })
}

/// `A + B` as a new handle.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_sumset(a: *const SfIntSet, b: *const SfIntSet, out: *mut *mut SfIntSet) -> SfStatus {
    guard(|| {
        let (a, b) = (deref(a)?, deref(b)?);
        write_out(out, Box::into_raw(Box::new(SfIntSet(sumset(&a.0, &b.0)))))
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_span(set: *const SfIntSet, out: *mut u32) -> SfStatus {
    guard(|| {
        let set = deref(set)?;
        write_out(out, check(span(&set.0))?)
    })
}

/// `|S + S| / |S|` in lowest terms.
///
/// # Safety
/// `set` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_doubling(set: *const SfIntSet, num: *mut u64, den: *mut u64) -> SfStatus {
    guard(|| {
        let set = deref(set)?;
        let r = check(doubling(&set.0))?;
        write_out(num, *r.numer())?;
        write_out(den, *r.denom())
    })
}

/// Number of sum-free subsets of `[n]` of size `m`, or of any size when `m < 0`.
/// `threads == 0` uses every core; `budget == 0` keeps the default node budget.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_count_sum_free(
    n: u32,
    m: i64,
    conv: SfConvention,
    threads: usize,
    budget: u64,
    out: *mut *mut SfBigCount,
) -> SfStatus {
    guard(|| {
        let mut q = CountQuery::new(n).convention(conv.into());
        if m >= 0 {
            q = q.size(m as usize);
        }
        let res = check(count_sum_free(&q, &search_config(threads, budget)))?;
        write_out(out, Box::into_raw(Box::new(SfBigCount(res.total))))
    })
}

/// Sum-free `m`-subsets of `{⌈n/2⌉ − a, ..., n}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_count_in_window(
    n: u32,
    a: u32,
    m: usize,
    conv: SfConvention,
    threads: usize,
    budget: u64,
    out: *mut *mut SfBigCount,
) -> SfStatus {
    guard(|| {
        let w = check(count_in_window(n, a, m, conv.into(), &search_config(threads, budget)))?;
        write_out(out, Box::into_raw(Box::new(SfBigCount(w.count))))
    })
}

/// `p(k)`, or the number of partitions of `k` into `ell` distinct parts when `ell > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_partitions(k: u32, ell: usize, out: *mut *mut SfBigCount) -> SfStatus {
    guard(|| {
        let c = if ell == 0 { p(k) } else { p_star(k, ell) };
        write_out(out, Box::into_raw(Box::new(SfBigCount(c))))
    })
}

/// # Safety
/// `count` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_bigcount_free(count: *mut SfBigCount) {
    if !count.is_null() {
        drop(Box::from_raw(count));
    }
}

/// # Safety
/// `count` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_bigcount_to_u64(count: *const SfBigCount, out: *mut u64) -> SfStatus {
    guard(|| {
        let c = deref(count)?;
        let v = u64::try_from(&c.0).map_err(|_| {
            set_error(format!("{} does not fit in 64 bits", c.0));
            SfStatus::Overflow
        })?;
        write_out(out, v)
    })
}

/// Decimal digits, NUL-terminated. `*needed` receives the digit count; fails
/// with `SF_STATUS_BUFFER_TOO_SMALL` unless `cap > digits`.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_bigcount_to_string(
    count: *const SfBigCount,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SfStatus {
    guard(|| {
        let c = deref(count)?;
        let s = c.0.to_string();
        write_out(needed, s.len())?;
        if cap <= s.len() || buf.is_null() {
            set_error(format!("buffer holds {cap} bytes, need {}", s.len() + 1));
            return Err(SfStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
        *buf.add(s.len()) = 0;
        Ok(())
    })
}
