//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the verdict lines are always printed; exits non-zero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use lfu_cache::complexity::{column, run_bench, BenchConfig, DEFAULT_SIZES, LFU_STEP_BOUND};
use lfu_cache::differential::{sweep, Op, OpMix};
use lfu_cache::{
    gen_round_robin, replay, CacheError, CachePolicy, Execution, HeapLfuCache, LfuCache,
    OracleLfu, PolicyKind, TieBreak,
};

type Verdict = Result<String, String>;
/// (id, name, runtime budget, check)
type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Verdict);

/// x,y at 1; z,a at 2; b,c at 5; inserted in the order x,y,z,a,b,c.
fn ac1_reference_layout() -> Verdict {
    let mut c = LfuCache::new(8).map_err(|e| e.to_string())?;
    for k in ["x", "y", "z", "a", "b", "c"] {
        c.insert(k, k.to_uppercase()).map_err(|e| e.to_string())?;
    }
    for (k, n) in [("z", 1), ("a", 1), ("b", 4), ("c", 4)] {
        for _ in 0..n {
            c.access(&k).map_err(|e| e.to_string())?;
        }
    }
    let layout = vec![(1, vec!["x", "y"]), (2, vec!["z", "a"]), (5, vec!["b", "c"])];
    if c.frequency_list() != layout {
        return Err(format!("fixture is {:?}", c.frequency_list()));
    }
    if !c.validate().is_empty() {
        return Err(format!("fixture violations {:?}", c.validate()));
    }
    let got = c.access(&"z").map_err(|e| e.to_string())?.clone();
    if got != "Z" {
        return Err(format!("access returned {got}"));
    }
    let after_access = vec![
        (1, vec!["x", "y"]),
        (2, vec!["a"]),
        (3, vec!["z"]),
        (5, vec!["b", "c"]),
    ];
    if c.frequency_list() != after_access {
        return Err(format!("after access: {:?}", c.frequency_list()));
    }
    if !c.validate().is_empty() {
        return Err(format!("violations after access {:?}", c.validate()));
    }
    Ok("{1:[x,y], 2:[a], 3:[z], 5:[b,c]}, validate clean".into())
}

fn ac2_oracle_equivalence() -> Verdict {
    let seeds: Vec<u64> = (0..100).collect();
    let mut checked = 0;
    for tie_break in [TieBreak::Newest, TieBreak::Oldest] {
        let mix = OpMix {
            key_pool: 512,
            capacity: 128,
            len: 10_000,
            tie_break,
        };
        for r in sweep(&seeds, &mix, Execution::Parallel) {
            if let Err(d) = r.outcome {
                return Err(format!("{tie_break}: {d:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} runs x 10^4 ops: lfu == lfu-heap == oracle"
    ))
}

fn ac3_round_robin() -> Verdict {
    let events = gen_round_robin(11, 100);
    let run = |p| replay(p, 10, TieBreak::default(), &events).map_err(|e| e.to_string());
    let lru = run(PolicyKind::Lru)?;
    let lfu = run(PolicyKind::Lfu)?;
    let oracle = run(PolicyKind::Oracle)?;
    let post_gets = 11 * 99;
    if lru.post_warmup_gets != post_gets || lfu.post_warmup_gets != post_gets {
        return Err(format!(
            "post-warmup GETs lru {} lfu {}, expected {post_gets}",
            lru.post_warmup_gets, lfu.post_warmup_gets
        ));
    }
    if lru.post_warmup_hits != 0 || lru.post_warmup_hit_rate != 0.0 {
        return Err(format!("lru post-warmup hits {}", lru.post_warmup_hits));
    }
    // 9 of every 11 requests hit after the first round.
    if oracle.post_warmup_hits != 9 * 99 {
        return Err(format!("oracle post-warmup hits {}", oracle.post_warmup_hits));
    }
    if lfu.post_warmup_hits != oracle.post_warmup_hits
        || lfu.post_warmup_hit_rate != 9.0 / 11.0
    {
        return Err(format!(
            "lfu post-warmup {} / {} = {}",
            lfu.post_warmup_hits, lfu.post_warmup_gets, lfu.post_warmup_hit_rate
        ));
    }
    Ok(format!(
        "lru {} / lfu {:.6} (= 9/11, oracle agrees)",
        lru.post_warmup_hit_rate, lfu.post_warmup_hit_rate
    ))
}

fn ac4_complexity() -> Verdict {
    let rows = run_bench(&BenchConfig::default()).map_err(|e| e.to_string())?;
    let lfu: Vec<u64> = column(&rows, PolicyKind::Lfu).iter().map(|r| r.steps_max).collect();
    let heap: Vec<u64> = column(&rows, PolicyKind::LfuHeap).iter().map(|r| r.steps_max).collect();
    if lfu.len() != DEFAULT_SIZES.len() || heap.len() != DEFAULT_SIZES.len() {
        return Err("missing bench rows".into());
    }
    let (lo, hi) = (*lfu.iter().min().unwrap(), *lfu.iter().max().unwrap());
    let spread = (hi - lo) as f64 / lo as f64;
    if spread >= 0.10 {
        return Err(format!("lfu steps_max {lfu:?} spread {:.1}%", spread * 100.0));
    }
    if hi > LFU_STEP_BOUND {
        return Err(format!("lfu steps_max {lfu:?} above bound {LFU_STEP_BOUND}"));
    }
    let (first, last) = (heap[0], heap[heap.len() - 1]);
    if last < 2 * first {
        return Err(format!("heap steps_max {heap:?}: {last} < 2 x {first}"));
    }
    Ok(format!(
        "lfu steps_max {lfu:?} (B = {LFU_STEP_BOUND}), lfu-heap {heap:?} ({:.2}x)",
        last as f64 / first as f64
    ))
}

fn op_strategy() -> impl Strategy<Value = Op<u32, u64>> {
    prop_oneof![
        4 => (0..512u32, any::<u64>()).prop_map(|(k, v)| Op::Insert(k, v)),
        4 => (0..512u32).prop_map(|k| Op::Access(k % 160)),
        1 => Just(Op::Evict),
        1 => (0..512u32).prop_map(Op::Remove),
        1 => Just(Op::Peek),
    ]
}

fn ac5_invariants() -> Verdict {
    let mut runner = TestRunner::new(Config {
        cases: 32,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        prop_oneof![Just(TieBreak::Newest), Just(TieBreak::Oldest)],
        1usize..=128,
        prop::collection::vec(op_strategy(), 10_000),
    );
    runner
        .run(&strategy, |(tb, capacity, ops)| {
            let mut c = LfuCache::with_tie_break(capacity, tb).unwrap();
            let mut o = OracleLfu::with_tie_break(capacity, tb).unwrap();
            for (i, op) in ops.iter().enumerate() {
                common::step_checked(&mut c, &mut o, op)
                    .map_err(|e| TestCaseError::fail(format!("op {i} {op:?}: {e}")))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("32 cases x 10^4 ops: structure, conservation, increment, minimality, ordering".into())
}

fn unchanged<K, V>(before: &[(u64, Vec<K>)], c: &LfuCache<K, V>) -> Result<(), String>
where
    K: std::hash::Hash + Eq + Clone + std::fmt::Debug,
{
    if c.frequency_list() != before || !c.validate().is_empty() {
        return Err(format!("state changed: {:?} -> {:?}", before, c.frequency_list()));
    }
    Ok(())
}

fn expect_err<T: std::fmt::Debug>(
    got: Result<T, CacheError>,
    want: CacheError,
    msg: &str,
) -> Result<(), String> {
    match got {
        Err(e) if e == want && e.to_string() == msg => Ok(()),
        other => Err(format!("expected {msg:?}, got {other:?}")),
    }
}

fn ac6_error_contract() -> Verdict {
    let mut c = LfuCache::new(2).map_err(|e| e.to_string())?;
    let empty = c.frequency_list();
    expect_err(c.peek_lfu(), CacheError::Empty, "The set is empty")?;
    unchanged(&empty, &c)?;
    expect_err(c.evict_lfu(), CacheError::Empty, "The set is empty")?;
    unchanged(&empty, &c)?;
    expect_err(c.access(&"nope"), CacheError::NotFound, "No such key")?;
    unchanged(&empty, &c)?;

    c.insert("a", 1).map_err(|e| e.to_string())?;
    c.insert("b", 2).map_err(|e| e.to_string())?;
    c.access(&"a").map_err(|e| e.to_string())?;
    let full = c.frequency_list();
    expect_err(c.insert("a", 9), CacheError::DuplicateKey, "Key already exists")?;
    unchanged(&full, &c)?;
    if c.access(&"a").copied() != Ok(1) {
        return Err("duplicate insert overwrote the value".into());
    }
    let after = c.frequency_list();
    expect_err(c.access(&"zz"), CacheError::NotFound, "No such key")?;
    unchanged(&after, &c)?;

    // Baselines share the taxonomy.
    let mut h: HeapLfuCache<&str, i32> = HeapLfuCache::new(1).map_err(|e| e.to_string())?;
    expect_err(CachePolicy::evict(&mut h), CacheError::Empty, "The set is empty")?;
    CachePolicy::insert(&mut h, "a", 1).map_err(|e| e.to_string())?;
    expect_err(CachePolicy::insert(&mut h, "a", 1), CacheError::DuplicateKey, "Key already exists")?;
    expect_err(CachePolicy::access(&mut h, &"b"), CacheError::NotFound, "No such key")?;
    if h.len() != 1 || h.check_heap().is_err() {
        return Err("heap changed on error".into());
    }
    Ok("duplicate / missing / empty errors raised, state untouched".into())
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 6] = [
        ("AC1", "reference layout", None, ac1_reference_layout),
        ("AC2", "oracle equivalence", secs(30), ac2_oracle_equivalence),
        ("AC3", "round-robin separation", secs(1), ac3_round_robin),
        ("AC4", "complexity separation", secs(60), ac4_complexity),
        ("AC5", "invariant suite", None, ac5_invariants),
        ("AC6", "error contract", None, ac6_error_contract),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if budget.is_some_and(|b| elapsed > b) => Err(format!(
                "{detail}; took {:.2}s, budget {:.0}s",
                elapsed.as_secs_f64(),
                budget.unwrap().as_secs_f64()
            )),
            v => v,
        };
        match verdict {
            Ok(detail) => println!("{id} PASS {name}: {detail} [{:.2}s]", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
