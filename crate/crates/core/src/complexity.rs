//! Step-count benchmark: constant-time LFU against the heap LFU as the cache
//! grows.
//!
//! For each size `n` both policies get a cache of capacity `n`, preloaded
//! with keys `1..=n`, each inserted and then read once. That leaves every key
//! at count 2, so the first miss afterwards creates a fresh count-1 node and
//! later misses evict it again; the structural worst case of each policy is
//! therefore reachable at every size. The measured phase runs `ops_per_size`
//! requests, 70% GET and 30% PUT, with keys drawn Zipf(1.0) over `2n` ranks
//! and served with replay semantics (cache-on-miss, PUT-on-present is an
//! access).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::HeapLfuCache;
use crate::error::CacheError;
use crate::lfu::LfuCache;
use crate::policy::{CachePolicy, TieBreak};
use crate::replay::{serve, PolicyKind};
use crate::steps::StepStats;
use crate::trace::ZipfSampler;

/// Upper bound on elementary steps of any single constant-time LFU operation
/// (insert with eviction, access, peek, evict, remove), independent of size.
///
/// The costliest path is a missed GET that evicts the last key of the lowest
/// node and then creates a new count-1 node: 1 failed probe, 1 duplicate
/// check, 14 for the eviction with node unlink, 12 for the insert with node
/// splice.
pub const LFU_STEP_BOUND: u64 = 28;

pub const DEFAULT_SIZES: [usize; 4] = [64, 1024, 16384, 262144];
pub const DEFAULT_OPS_PER_SIZE: usize = 100_000;
pub const GET_PERCENT: u32 = 70;
pub const ZIPF_EXPONENT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub ops_per_size: usize,
    pub seed: u64,
    pub tie_break: TieBreak,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: DEFAULT_SIZES.to_vec(),
            ops_per_size: DEFAULT_OPS_PER_SIZE,
            seed: 42,
            tie_break: TieBreak::default(),
        }
    }
}

/// One (size, policy) measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub policy: PolicyKind,
    pub ops: u64,
    pub steps_max: u64,
    pub steps_mean: f64,
    pub get_steps_max: u64,
    pub put_steps_max: u64,
    pub hits: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Request {
    Get(u64),
    Put(u64),
}

fn workload(size: usize, ops: usize, seed: u64) -> Vec<Request> {
    let zipf = ZipfSampler::new(2 * size, ZIPF_EXPONENT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (size as u64).rotate_left(32));
    (0..ops)
        .map(|_| {
            let key = zipf.sample(&mut rng) as u64;
            if rng.gen_range(0..100) < GET_PERCENT {
                Request::Get(key)
            } else {
                Request::Put(key)
            }
        })
        .collect()
}

fn measure<P>(policy: PolicyKind, mut cache: P, size: usize, requests: &[Request]) -> BenchRow
where
    P: CachePolicy<u64, u64>,
{
    for key in 1..=size as u64 {
        cache.insert(key, key).expect("preload keys are distinct");
        cache.access(&key).expect("just inserted");
    }

    let mut gets = StepStats::default();
    let mut puts = StepStats::default();
    let mut hits = 0;
    let start = Instant::now();
    for (i, req) in requests.iter().enumerate() {
        match *req {
            Request::Get(k) => {
                let s = serve(&mut cache, &k, None, || 0);
                hits += s.hit as u64;
                gets.record(s.steps);
            }
            Request::Put(k) => {
                let s = serve(&mut cache, &k, Some(i as u64), || 0);
                puts.record(s.steps);
            }
        }
    }
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut all = gets;
    all.merge(&puts);
    BenchRow {
        size,
        policy,
        ops: all.count,
        steps_max: all.max,
        steps_mean: all.mean(),
        get_steps_max: gets.max,
        put_steps_max: puts.max,
        hits,
        elapsed_ms,
    }
}

/// Runs every size sequentially, LFU then heap LFU for each.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CacheError> {
    let mut rows = Vec::with_capacity(cfg.sizes.len() * 2);
    for &size in &cfg.sizes {
        let requests = workload(size, cfg.ops_per_size, cfg.seed);
        rows.push(measure(
            PolicyKind::Lfu,
            LfuCache::with_tie_break(size, cfg.tie_break)?,
            size,
            &requests,
        ));
        rows.push(measure(
            PolicyKind::LfuHeap,
            HeapLfuCache::with_tie_break(size, cfg.tie_break)?,
            size,
            &requests,
        ));
    }
    Ok(rows)
}

/// Rows for one policy, in size order.
pub fn column(rows: &[BenchRow], policy: PolicyKind) -> Vec<&BenchRow> {
    rows.iter().filter(|r| r.policy == policy).collect()
}
