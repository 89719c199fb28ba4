#![allow(dead_code)]

use std::collections::HashMap;

use lfu_cache::differential::Op;
use lfu_cache::{CacheError, LfuCache, OracleLfu, CachePolicy};

pub type Cache = LfuCache<u32, u64>;

pub fn counts(c: &Cache) -> HashMap<u32, u64> {
    c.frequency_list()
        .into_iter()
        .flat_map(|(f, keys)| keys.into_iter().map(move |k| (k, f)))
        .collect()
}

/// Applies `op` to both the cache and the oracle and checks every structural
/// and behavioral invariant around it. Returns a description of the first
/// failure.
pub fn step_checked(c: &mut Cache, oracle: &mut OracleLfu<u32, u64>, op: &Op<u32, u64>) -> Result<(), String> {
    let before = counts(c);
    match op {
        Op::Insert(k, v) => {
            let got = c.insert(*k, *v);
            let want = CachePolicy::insert(oracle, *k, *v);
            if got != want {
                return Err(format!("insert {k}: {got:?} vs oracle {want:?}"));
            }
            match got {
                Ok(evicted) => {
                    if c.frequency(k) != Some(1) {
                        return Err(format!("inserted {k} not at count 1"));
                    }
                    if let Some((ek, _)) = evicted {
                        check_minimal(&before, ek)?;
                    }
                }
                Err(_) => {
                    if counts(c) != before {
                        return Err(format!("failed insert {k} changed the cache"));
                    }
                }
            }
        }
        Op::Access(k) => {
            let got = c.access(k).copied();
            let want = CachePolicy::access(oracle, k).copied();
            if got != want {
                return Err(format!("access {k}: {got:?} vs oracle {want:?}"));
            }
            let after = counts(c);
            if got.is_ok() {
                for (key, f) in &before {
                    let expect = if key == k { f + 1 } else { *f };
                    if after.get(key) != Some(&expect) {
                        return Err(format!("access {k}: key {key} count {:?}, expected {expect}", after.get(key)));
                    }
                }
            } else if after != before {
                return Err(format!("failed access {k} changed the cache"));
            }
        }
        Op::Peek => {
            let got = c.peek_lfu().map(|(k, v, f)| (*k, *v, f));
            let want = oracle.peek_lfu().map(|(k, v, f)| (*k, *v, f));
            if got != want {
                return Err(format!("peek: {got:?} vs oracle {want:?}"));
            }
            if counts(c) != before {
                return Err("peek changed the cache".into());
            }
        }
        Op::Evict => {
            let got = c.evict_lfu();
            let want = CachePolicy::evict(oracle);
            if got != want {
                return Err(format!("evict: {got:?} vs oracle {want:?}"));
            }
            if let Ok((k, _)) = got {
                check_minimal(&before, k)?;
            } else if got != Err(CacheError::Empty) {
                return Err(format!("evict error {got:?}"));
            }
        }
        Op::Remove(k) => {
            let got = c.remove(k);
            let want = CachePolicy::remove(oracle, k);
            if got != want {
                return Err(format!("remove {k}: {got:?} vs oracle {want:?}"));
            }
        }
    }
    check_structure(c)
}

fn check_minimal(before: &HashMap<u32, u64>, evicted: u32) -> Result<(), String> {
    let f = before[&evicted];
    match before.values().min() {
        Some(&m) if m < f => Err(format!("evicted {evicted} at count {f} while a key had {m}")),
        _ => Ok(()),
    }
}

pub fn check_structure(c: &Cache) -> Result<(), String> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(format!("violations: {violations:?}"));
    }
    let list = c.frequency_list();
    if list.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err("frequency list not strictly increasing".into());
    }
    if list.iter().any(|(_, keys)| keys.is_empty()) {
        return Err("empty frequency node survived".into());
    }
    let listed: usize = list.iter().map(|(_, keys)| keys.len()).sum();
    if listed != c.len() || c.len() > c.capacity() {
        return Err(format!("len {} vs listed {listed} (capacity {})", c.len(), c.capacity()));
    }
    Ok(())
}
