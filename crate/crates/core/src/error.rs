use thiserror::Error;

/// Failures shared by every cache policy in this crate.
///
/// The messages of the three dictionary-operation errors are fixed strings so
/// callers can match on them textually as well as by variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacheError {
    #[error("capacity must be at least 1")]
    InvalidCapacity,
    #[error("Key already exists")]
    DuplicateKey,
    #[error("No such key")]
    NotFound,
    #[error("The set is empty")]
    Empty,
}

/// Rejected [`CacheKey`](crate::CacheKey) construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("key must not be empty")]
    Empty,
    #[error("key is {0} bytes, longer than the 4096-byte limit")]
    TooLong(usize),
}
