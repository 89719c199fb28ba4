//! Differential runs: feed identical operation sequences to several policies
//! and compare what they return.

use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::{HeapLfuCache, OracleLfu};
use crate::error::CacheError;
use crate::lfu::LfuCache;
use crate::par::{map_ordered, Execution};
use crate::policy::{CachePolicy, TieBreak};

/// One dictionary operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op<K, V> {
    Insert(K, V),
    Access(K),
    Peek,
    Evict,
    Remove(K),
}

/// The visible result of applying an [`Op`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<K, V> {
    Inserted(Option<(K, V)>),
    Accessed(V),
    Peeked(K, V),
    Evicted(K, V),
    Removed(Option<V>),
    Failed(CacheError),
}

pub fn apply<K, V, P>(cache: &mut P, op: &Op<K, V>) -> Outcome<K, V>
where
    K: Clone,
    V: Clone,
    P: CachePolicy<K, V>,
{
    let res = match op {
        Op::Insert(k, v) => cache.insert(k.clone(), v.clone()).map(Outcome::Inserted),
        Op::Access(k) => cache.access(k).map(|v| Outcome::Accessed(v.clone())),
        Op::Peek => cache
            .peek_victim()
            .map(|(k, v)| Outcome::Peeked(k.clone(), v.clone())),
        Op::Evict => cache.evict().map(|(k, v)| Outcome::Evicted(k, v)),
        Op::Remove(k) => Ok(Outcome::Removed(cache.remove(k))),
    };
    res.unwrap_or_else(Outcome::Failed)
}

pub fn transcript<K, V, P>(cache: &mut P, ops: &[Op<K, V>]) -> Vec<Outcome<K, V>>
where
    K: Clone,
    V: Clone,
    P: CachePolicy<K, V>,
{
    ops.iter().map(|op| apply(cache, op)).collect()
}

/// Shape of a random operation sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpMix {
    pub key_pool: u32,
    pub capacity: usize,
    pub len: usize,
    pub tie_break: TieBreak,
}

impl Default for OpMix {
    fn default() -> Self {
        OpMix {
            key_pool: 512,
            capacity: 128,
            len: 10_000,
            tie_break: TieBreak::default(),
        }
    }
}

/// Seeded random operations over keys `0..key_pool`.
///
/// Key choice is skewed towards small ids (minimum of two uniform draws) so
/// some keys build up high counts. Each insert carries a distinct value.
/// Mix: 40% insert, 35% access, 10% evict, 10% remove, 5% peek.
pub fn random_ops(seed: u64, mix: &OpMix) -> Vec<Op<u32, u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = mix.key_pool.max(1);
    let key = |rng: &mut ChaCha8Rng| rng.gen_range(0..pool).min(rng.gen_range(0..pool));
    (0..mix.len as u64)
        .map(|i| match rng.gen_range(0..100u32) {
            0..=39 => Op::Insert(key(&mut rng), i),
            40..=74 => Op::Access(key(&mut rng)),
            75..=84 => Op::Evict,
            85..=94 => Op::Remove(key(&mut rng)),
            _ => Op::Peek,
        })
        .collect()
}

/// First position where two transcripts disagree, if any.
pub fn first_divergence<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .or_else(|| (a.len() != b.len()).then(|| a.len().min(b.len())))
}

/// A disagreement between two implementations on one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub seed: u64,
    pub index: usize,
    pub op: String,
    pub left: (String, String),
    pub right: (String, String),
}

fn diverge<K: Debug, V: Debug>(
    seed: u64,
    ops: &[Op<K, V>],
    (ln, lt): (&str, &[Outcome<K, V>]),
    (rn, rt): (&str, &[Outcome<K, V>]),
    index: usize,
) -> Box<Divergence> {
    let show = |t: &[Outcome<K, V>]| t.get(index).map_or("<end>".into(), |o| format!("{o:?}"));
    Box::new(Divergence {
        seed,
        index,
        op: ops.get(index).map_or("<end>".into(), |o| format!("{o:?}")),
        left: (ln.into(), show(lt)),
        right: (rn.into(), show(rt)),
    })
}

/// Runs `ops` through the constant-time LFU, the heap LFU and the oracle and
/// reports the first disagreement with the oracle.
pub fn check_ops<K, V>(seed: u64, ops: &[Op<K, V>], mix: &OpMix) -> Result<(), Box<Divergence>>
where
    K: Hash + Eq + Clone + Debug,
    V: Clone + PartialEq + Debug,
{
    let fresh_err = |e: CacheError| Box::new(Divergence {
        seed,
        index: 0,
        op: "new".into(),
        left: ("construct".into(), e.to_string()),
        right: (String::new(), String::new()),
    });
    let mut lfu = LfuCache::with_tie_break(mix.capacity, mix.tie_break).map_err(fresh_err)?;
    let mut heap = HeapLfuCache::with_tie_break(mix.capacity, mix.tie_break).map_err(fresh_err)?;
    let mut oracle = OracleLfu::with_tie_break(mix.capacity, mix.tie_break).map_err(fresh_err)?;

    let want = transcript(&mut oracle, ops);
    for (name, got) in [
        ("lfu", transcript(&mut lfu, ops)),
        ("lfu-heap", transcript(&mut heap, ops)),
    ] {
        if let Some(i) = first_divergence(&got, &want) {
            return Err(diverge(seed, ops, (name, &got), ("oracle", &want), i));
        }
    }
    Ok(())
}

/// Per-seed result of a [`sweep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedResult {
    pub seed: u64,
    pub outcome: Result<(), Box<Divergence>>,
}

/// Checks many seeds; seeds are independent so they can run in parallel.
pub fn sweep(seeds: &[u64], mix: &OpMix, exec: Execution) -> Vec<SeedResult> {
    map_ordered(seeds, exec, |&seed| SeedResult {
        seed,
        outcome: check_ops(seed, &random_ops(seed, mix), mix),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_ops_are_seeded() {
        let mix = OpMix {
            len: 500,
            ..OpMix::default()
        };
        assert_eq!(random_ops(3, &mix), random_ops(3, &mix));
        assert_ne!(random_ops(3, &mix), random_ops(4, &mix));
    }

    #[test]
    fn divergence_position() {
        assert_eq!(first_divergence(&[1, 2, 3], &[1, 2, 3]), None);
        assert_eq!(first_divergence(&[1, 2, 3], &[1, 9, 3]), Some(1));
        assert_eq!(first_divergence(&[1, 2], &[1, 2, 3]), Some(2));
    }

    #[test]
    fn single_ops_on_empty_caches_agree() {
        let mix = OpMix::default();
        for op in [Op::Insert(1u32, 1u64), Op::Access(1), Op::Peek, Op::Evict, Op::Remove(1)] {
            check_ops(0, &[op], &mix).unwrap();
        }
    }

    #[test]
    fn small_sweep_agrees_in_both_modes() {
        let mix = OpMix {
            len: 2000,
            capacity: 16,
            key_pool: 64,
            tie_break: TieBreak::Oldest,
        };
        let seeds: Vec<u64> = (0..8).collect();
        let par = sweep(&seeds, &mix, Execution::Parallel);
        let seq = sweep(&seeds, &mix, Execution::Sequential);
        assert_eq!(par, seq);
        assert!(par.iter().all(|r| r.outcome.is_ok()), "{par:?}");
    }

    #[test]
    fn detects_a_planted_difference() {
        // LRU is not an LFU; the differential harness must notice.
        let mix = OpMix {
            len: 2000,
            capacity: 8,
            key_pool: 32,
            ..OpMix::default()
        };
        let ops = random_ops(1, &mix);
        let mut lru = crate::baselines::LruCache::new(8).unwrap();
        let mut oracle = OracleLfu::new(8).unwrap();
        let a = transcript(&mut lru, &ops);
        let b = transcript(&mut oracle, &ops);
        assert!(first_divergence(&a, &b).is_some());
    }
}
