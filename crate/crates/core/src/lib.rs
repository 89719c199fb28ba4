//! LFU cache eviction with constant-time insert, access and evict.
//!
//! [`LfuCache`] keeps a circular doubly linked list of frequency nodes, each
//! holding the keys used exactly that many times in arrival order, so every
//! operation touches a bounded number of links. Alongside it:
//!
//! - [`baselines`]: the binary-heap LFU, an LRU, and a brute-force LFU oracle.
//! - [`trace`] and [`replay`]: trace parsing, synthetic workloads, and replay
//!   reports comparing policies.
//! - [`differential`]: seeded random operation sequences checked across
//!   implementations.
//! - [`complexity`]: per-operation step counts as the cache grows.
//!
//! The `parallel` feature (default) lets [`replay::compare`] and
//! [`differential::sweep`] spread independent runs over rayon.

pub mod baselines;
pub mod complexity;
pub mod differential;
mod error;
mod key;
pub mod lfu;
pub mod par;
mod policy;
pub mod replay;
mod steps;
pub mod trace;

pub use crate::baselines::{HeapLfuCache, LruCache, OracleLfu};
pub use crate::error::{CacheError, KeyError};
pub use crate::key::{CacheKey, CacheValue, MAX_KEY_LEN};
pub use crate::lfu::{LfuCache, Violation};
pub use crate::par::Execution;
pub use crate::policy::{CachePolicy, TieBreak};
pub use crate::replay::{compare, replay, PolicyKind, ReplayReport};
pub use crate::steps::{StepCounter, StepStats};
pub use crate::trace::{gen_round_robin, gen_zipf, parse_trace, TraceEvent};
