//! Trace replay against a chosen policy, and side-by-side comparison.
//!
//! Replay semantics:
//! - `GET` on a cached key is a hit and goes through the policy's access path.
//! - `GET` on a missing key is a miss; the key is then inserted with an empty
//!   value, evicting first if the cache is full.
//! - `PUT` on a missing key inserts it.
//! - `PUT` on a cached key counts as an access and replaces the stored value.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{HeapLfuCache, LruCache, OracleLfu};
use crate::error::CacheError;
use crate::key::{CacheKey, CacheValue};
use crate::lfu::LfuCache;
use crate::par::{map_ordered, Execution};
use crate::policy::{CachePolicy, TieBreak};
use crate::steps::StepStats;
use crate::trace::TraceEvent;

/// Replayable policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Lfu,
    LfuHeap,
    Lru,
    /// The brute-force LFU reference. O(n) evictions; meant for small runs.
    Oracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Lfu,
        PolicyKind::LfuHeap,
        PolicyKind::Lru,
        PolicyKind::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Lfu => "lfu",
            PolicyKind::LfuHeap => "lfu-heap",
            PolicyKind::Lru => "lru",
            PolicyKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown policy `{s}` (expected lfu|lfu-heap|lru|oracle)"))
    }
}

/// Aggregated outcome of one replay.
///
/// Only the fields without `serde(skip)` appear in the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    pub policy: PolicyKind,
    pub capacity: usize,
    pub gets: u64,
    pub puts: u64,
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
    pub hit_rate: f64,
    /// Hit rate over GETs that are not a key's first reference.
    pub post_warmup_hit_rate: f64,
    pub steps_max: u64,
    pub steps_mean: f64,
    pub elapsed_ms: f64,
    #[serde(skip)]
    pub post_warmup_gets: u64,
    #[serde(skip)]
    pub post_warmup_hits: u64,
    #[serde(skip)]
    pub get_steps: StepStats,
    #[serde(skip)]
    pub put_steps: StepStats,
}

impl ReplayReport {
    /// Copy with the wall-clock field zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        ReplayReport {
            elapsed_ms: 0.0,
            ..self.clone()
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// What serving one request did to the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Served {
    pub hit: bool,
    pub evicted: bool,
    pub steps: u64,
}

/// Serves a GET (`put = None`) or PUT against `cache` under the replay
/// semantics in the module docs.
pub(crate) fn serve<K, V, P>(cache: &mut P, key: &K, put: Option<V>, fill: impl FnOnce() -> V) -> Served
where
    K: Clone,
    P: CachePolicy<K, V>,
{
    let found = match cache.access_mut(key) {
        Ok(slot) => {
            if let Some(v) = put {
                *slot = v;
            }
            return Served {
                hit: true,
                evicted: false,
                steps: cache.last_steps(),
            };
        }
        Err(_) => put,
    };
    let mut steps = cache.last_steps();
    let value = found.unwrap_or_else(fill);
    let evicted = cache
        .insert(key.clone(), value)
        .expect("key was just found missing")
        .is_some();
    steps += cache.last_steps();
    Served {
        hit: false,
        evicted,
        steps,
    }
}

fn replay_with<P>(policy: PolicyKind, mut cache: P, events: &[TraceEvent]) -> ReplayReport
where
    P: CachePolicy<CacheKey, CacheValue>,
{
    let start = Instant::now();
    let mut seen: HashSet<&CacheKey> = HashSet::new();
    let (mut gets, mut puts, mut hits, mut evictions) = (0u64, 0u64, 0u64, 0u64);
    let (mut pw_gets, mut pw_hits) = (0u64, 0u64);
    let mut get_steps = StepStats::default();
    let mut put_steps = StepStats::default();

    for ev in events {
        let first_reference = seen.insert(ev.key());
        match ev {
            TraceEvent::Get(key) => {
                gets += 1;
                let s = serve(&mut cache, key, None, CacheValue::empty);
                hits += s.hit as u64;
                evictions += s.evicted as u64;
                get_steps.record(s.steps);
                if !first_reference {
                    pw_gets += 1;
                    pw_hits += s.hit as u64;
                }
            }
            TraceEvent::Put(key, value) => {
                puts += 1;
                let s = serve(&mut cache, key, Some(value.clone()), CacheValue::empty);
                evictions += s.evicted as u64;
                put_steps.record(s.steps);
            }
        }
    }

    let mut all = get_steps;
    all.merge(&put_steps);
    ReplayReport {
        policy,
        capacity: cache.capacity(),
        gets,
        puts,
        hits,
        misses: gets - hits,
        evictions,
        hit_rate: ratio(hits, gets),
        post_warmup_hit_rate: ratio(pw_hits, pw_gets),
        steps_max: all.max,
        steps_mean: all.mean(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        post_warmup_gets: pw_gets,
        post_warmup_hits: pw_hits,
        get_steps,
        put_steps,
    }
}

/// Replays `events` against a fresh cache of the given policy.
pub fn replay(
    policy: PolicyKind,
    capacity: usize,
    tie_break: TieBreak,
    events: &[TraceEvent],
) -> Result<ReplayReport, CacheError> {
    Ok(match policy {
        PolicyKind::Lfu => replay_with(policy, LfuCache::with_tie_break(capacity, tie_break)?, events),
        PolicyKind::LfuHeap => replay_with(
            policy,
            HeapLfuCache::with_tie_break(capacity, tie_break)?,
            events,
        ),
        PolicyKind::Lru => replay_with(policy, LruCache::new(capacity)?, events),
        PolicyKind::Oracle => replay_with(
            policy,
            OracleLfu::with_tie_break(capacity, tie_break)?,
            events,
        ),
    })
}

/// Replays the same events under each policy. Reports come back in the order
/// the policies were given; distinct policies may run concurrently.
pub fn compare(
    policies: &[PolicyKind],
    capacity: usize,
    tie_break: TieBreak,
    events: &[TraceEvent],
    exec: Execution,
) -> Result<Vec<ReplayReport>, CacheError> {
    if capacity == 0 {
        return Err(CacheError::InvalidCapacity);
    }
    map_ordered(policies, exec, |&p| replay(p, capacity, tie_break, events))
        .into_iter()
        .collect()
}
