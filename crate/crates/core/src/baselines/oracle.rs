use std::collections::HashMap;
use std::hash::Hash;

use crate::error::CacheError;
use crate::policy::{CachePolicy, TieBreak};

#[derive(Debug, Clone)]
struct Entry<V> {
    value: V,
    count: u64,
    arrival: u64,
}

/// Brute-force LFU: a flat map scanned linearly on every eviction.
///
/// Deliberately shares no code with [`LfuCache`](crate::LfuCache) so it can
/// serve as an independent reference in differential tests.
#[derive(Debug, Clone)]
pub struct OracleLfu<K, V> {
    entries: HashMap<K, Entry<V>>,
    capacity: usize,
    tie_break: TieBreak,
    clock: u64,
}

impl<K, V> OracleLfu<K, V>
where
    K: Hash + Eq + Clone,
{
    pub fn new(capacity: usize) -> Result<Self, CacheError> {
        Self::with_tie_break(capacity, TieBreak::default())
    }

    pub fn with_tie_break(capacity: usize, tie_break: TieBreak) -> Result<Self, CacheError> {
        if capacity == 0 {
            return Err(CacheError::InvalidCapacity);
        }
        Ok(OracleLfu {
            entries: HashMap::new(),
            capacity,
            tie_break,
            clock: 0,
        })
    }

    pub fn frequency(&self, key: &K) -> Option<u64> {
        self.entries.get(key).map(|e| e.count)
    }

    /// Every cached key with its usage count.
    pub fn frequencies(&self) -> Vec<(K, u64)> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.count))
            .collect()
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    fn victim(&self) -> Option<&K> {
        let rank = |e: &Entry<V>| match self.tie_break {
            TieBreak::Oldest => (e.count, e.arrival),
            TieBreak::Newest => (e.count, u64::MAX - e.arrival),
        };
        self.entries
            .iter()
            .min_by_key(|(_, e)| rank(e))
            .map(|(k, _)| k)
    }

    /// The least frequently used entry with its count.
    pub fn peek_lfu(&self) -> Result<(&K, &V, u64), CacheError> {
        let key = self.victim().ok_or(CacheError::Empty)?;
        let e = &self.entries[key];
        Ok((key, &e.value, e.count))
    }
}

impl<K, V> CachePolicy<K, V> for OracleLfu<K, V>
where
    K: Hash + Eq + Clone,
{
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn contains(&self, key: &K) -> bool {
        self.entries.contains_key(key)
    }

    fn access(&mut self, key: &K) -> Result<&V, CacheError> {
        self.access_mut(key).map(|v| &*v)
    }

    fn access_mut(&mut self, key: &K) -> Result<&mut V, CacheError> {
        let now = self.tick();
        let e = self.entries.get_mut(key).ok_or(CacheError::NotFound)?;
        e.count += 1;
        e.arrival = now;
        Ok(&mut e.value)
    }

    fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError> {
        if self.entries.contains_key(&key) {
            return Err(CacheError::DuplicateKey);
        }
        let evicted = if self.entries.len() >= self.capacity {
            Some(self.evict()?)
        } else {
            None
        };
        let arrival = self.tick();
        self.entries.insert(
            key,
            Entry {
                value,
                count: 1,
                arrival,
            },
        );
        Ok(evicted)
    }

    fn peek_victim(&self) -> Result<(&K, &V), CacheError> {
        self.peek_lfu().map(|(k, v, _)| (k, v))
    }

    fn evict(&mut self) -> Result<(K, V), CacheError> {
        let key = self.victim().ok_or(CacheError::Empty)?.clone();
        let e = self.entries.remove(&key).expect("victim is present");
        Ok((key, e.value))
    }

    fn remove(&mut self, key: &K) -> Option<V> {
        self.entries.remove(key).map(|e| e.value)
    }

    fn last_steps(&self) -> u64 {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evicts_least_count_then_tie_break() {
        let mut o = OracleLfu::with_tie_break(3, TieBreak::Oldest).unwrap();
        for k in ["a", "b", "c"] {
            o.insert(k, ()).unwrap();
        }
        o.access(&"a").unwrap();
        assert_eq!(o.evict().unwrap().0, "b");

        let mut o = OracleLfu::with_tie_break(3, TieBreak::Newest).unwrap();
        for k in ["a", "b", "c"] {
            o.insert(k, ()).unwrap();
        }
        o.access(&"a").unwrap();
        assert_eq!(o.evict().unwrap().0, "c");
    }

    #[test]
    fn error_taxonomy() {
        let mut o: OracleLfu<&str, u8> = OracleLfu::new(1).unwrap();
        assert_eq!(o.evict(), Err(CacheError::Empty));
        assert_eq!(o.access(&"x"), Err(CacheError::NotFound));
        o.insert("x", 1).unwrap();
        assert_eq!(o.insert("x", 2), Err(CacheError::DuplicateKey));
        assert_eq!(o.insert("y", 3), Ok(Some(("x", 1))));
        assert!(OracleLfu::<u8, u8>::new(0).is_err());
    }
}
