//! Sum-free subsets of `[n] = {1, ..., n}`: exact counting, enumeration,
//! sampling, and the arithmetic-combinatorics machinery around them
//! (sumsets, Freiman covers, restricted partitions, counting bounds).
//!
//! ```
//! use sumfree::{count_sum_free, CountQuery, SearchConfig};
//!
//! let res = count_sum_free(&CountQuery::new(4), &SearchConfig::default()).unwrap();
//! assert_eq!(res.total, 9u32.into());
//! ```

pub mod bounds;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod intset;
pub mod oracle;
pub mod partitions;
pub mod sampling;
pub mod schur;
pub mod sets;
pub mod sumsets;
pub mod verify;

/// Exact count; sum-free families grow like `2^{n/2}`.
pub type BigCount = num_bigint::BigUint;

pub use enumeration::{
    count_in_window, count_oracle, count_sum_free, enumerate_sum_free, stratified_counts, CountQuery,
    CountResult, SearchConfig, StrataKey, Stratify,
};
pub use error::{Error, Result};
pub use intset::IntSet;
pub use sets::{is_sum_free, statistics_of, Convention, HalfInt, Statistics};
