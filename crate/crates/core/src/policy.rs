use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CacheError;

/// Which of several equally-least-frequent keys is chosen for eviction.
///
/// Keys sharing a usage count are kept in the order they reached that count.
/// `Newest` picks the most recent arrival, `Oldest` the earliest. All three
/// LFU implementations in this crate honor the same rule so their outputs can
/// be compared exactly.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Evict the key that most recently arrived at the lowest count.
    #[default]
    Newest,
    /// Evict the key that arrived at the lowest count first.
    Oldest,
}

impl TieBreak {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::Newest => "newest",
            TieBreak::Oldest => "oldest",
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieBreak {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "newest" | "lifo" => Ok(TieBreak::Newest),
            "oldest" | "fifo" => Ok(TieBreak::Oldest),
            other => Err(format!("unknown tie-break `{other}` (expected newest|oldest)")),
        }
    }
}

/// The dictionary-operation contract every cache in this crate implements.
///
/// `access` is a lookup that also counts as a use (frequency bump for the LFU
/// family, recency bump for LRU). `insert` rejects keys that are already
/// present and evicts first when the cache is full.
pub trait CachePolicy<K, V> {
    fn name(&self) -> &'static str;
    fn len(&self) -> usize;
    fn capacity(&self) -> usize;
    fn contains(&self, key: &K) -> bool;
    fn access(&mut self, key: &K) -> Result<&V, CacheError>;
    fn access_mut(&mut self, key: &K) -> Result<&mut V, CacheError>;
    fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError>;
    /// The entry `evict` would remove next.
    fn peek_victim(&self) -> Result<(&K, &V), CacheError>;
    fn evict(&mut self) -> Result<(K, V), CacheError>;
    fn remove(&mut self, key: &K) -> Option<V>;
    /// Elementary steps spent by the most recent call.
    fn last_steps(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
