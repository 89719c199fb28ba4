use std::collections::HashSet;
use std::fmt::{self, Debug};
use std::hash::Hash;

use super::{LfuCache, HEAD};

/// A broken structural invariant found by [`LfuCache::validate`].
///
/// Keys are rendered with their `Debug` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SentinelValue(u64),
    SentinelHasItems(usize),
    /// `node.next.prev != node` or `node.prev.next != node`.
    BrokenLink { value: u64 },
    /// The walk from the sentinel did not return to it.
    Unterminated,
    NotIncreasing { prev: u64, next: u64 },
    EmptyNode { value: u64 },
    ItemCountMismatch { value: u64, recorded: usize, walked: usize },
    /// Item list links disagree inside one node.
    BrokenItemLink { value: u64 },
    /// The key sits in a node's item set but its parent link points elsewhere.
    WrongParent { key: String },
    ParentIsSentinel { key: String },
    /// Listed in an item set but absent from the lookup table.
    NotIndexed { key: String },
    /// Listed in item sets more than once.
    Duplicate { key: String },
    /// In the lookup table but not in any item set.
    Orphan { key: String },
    CountMismatch { indexed: usize, listed: usize },
    OverCapacity { len: usize, capacity: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SentinelValue(v) => write!(f, "sentinel has value {v}, expected 0"),
            Violation::SentinelHasItems(n) => write!(f, "sentinel holds {n} items"),
            Violation::BrokenLink { value } => write!(f, "inconsistent prev/next at node {value}"),
            Violation::Unterminated => f.write_str("frequency list does not return to the sentinel"),
            Violation::NotIncreasing { prev, next } => {
                write!(f, "frequency {next} follows {prev}")
            }
            Violation::EmptyNode { value } => write!(f, "node {value} has no items"),
            Violation::ItemCountMismatch { value, recorded, walked } => {
                write!(f, "node {value} records {recorded} items but lists {walked}")
            }
            Violation::BrokenItemLink { value } => write!(f, "item links broken in node {value}"),
            Violation::WrongParent { key } => write!(f, "key {key} has a stale parent link"),
            Violation::ParentIsSentinel { key } => write!(f, "key {key} is parented to the sentinel"),
            Violation::NotIndexed { key } => write!(f, "key {key} is listed but not indexed"),
            Violation::Duplicate { key } => write!(f, "key {key} is listed more than once"),
            Violation::Orphan { key } => write!(f, "key {key} is indexed but not listed"),
            Violation::CountMismatch { indexed, listed } => {
                write!(f, "{indexed} keys indexed but {listed} listed")
            }
            Violation::OverCapacity { len, capacity } => {
                write!(f, "{len} entries exceed capacity {capacity}")
            }
        }
    }
}

pub(super) fn check<K, V>(cache: &LfuCache<K, V>) -> Vec<Violation>
where
    K: Hash + Eq + Clone + Debug,
{
    let mut out = Vec::new();
    let nodes = &cache.nodes;
    let head = &nodes[HEAD];
    if head.value != 0 {
        out.push(Violation::SentinelValue(head.value));
    }
    if head.items.len != 0 || head.items.head.is_some() {
        out.push(Violation::SentinelHasItems(head.items.len));
    }

    let mut seen = HashSet::new();
    let mut listed = 0usize;
    let mut prev_value = 0u64;
    let mut node = HEAD;
    let mut hops = 0usize;
    loop {
        let n = &nodes[node];
        if nodes[n.next].prev != node || nodes[n.prev].next != node {
            out.push(Violation::BrokenLink { value: n.value });
        }
        node = n.next;
        if node == HEAD {
            break;
        }
        hops += 1;
        if hops > nodes.len() {
            out.push(Violation::Unterminated);
            break;
        }

        let n = &nodes[node];
        if n.value <= prev_value {
            out.push(Violation::NotIncreasing {
                prev: prev_value,
                next: n.value,
            });
        }
        prev_value = n.value;
        if n.items.len == 0 {
            out.push(Violation::EmptyNode { value: n.value });
        }

        let mut walked = 0usize;
        let mut back = None;
        let mut cur = n.items.head;
        while let Some(slot) = cur {
            if walked > cache.items.len() {
                out.push(Violation::BrokenItemLink { value: n.value });
                break;
            }
            let Some(item) = cache.items.get(slot).and_then(Option::as_ref) else {
                out.push(Violation::BrokenItemLink { value: n.value });
                break;
            };
            walked += 1;
            if item.prev != back {
                out.push(Violation::BrokenItemLink { value: n.value });
            }
            let key = || format!("{:?}", item.key);
            if !seen.insert(slot) {
                out.push(Violation::Duplicate { key: key() });
            }
            match cache.bykey.get(&item.key) {
                Some(&s) if s == slot => {}
                Some(_) => out.push(Violation::Duplicate { key: key() }),
                None => out.push(Violation::NotIndexed { key: key() }),
            }
            if item.parent == HEAD {
                out.push(Violation::ParentIsSentinel { key: key() });
            } else if item.parent != node {
                out.push(Violation::WrongParent { key: key() });
            }
            back = Some(slot);
            cur = item.next;
        }
        if back != n.items.tail {
            out.push(Violation::BrokenItemLink { value: n.value });
        }
        if walked != n.items.len {
            out.push(Violation::ItemCountMismatch {
                value: n.value,
                recorded: n.items.len,
                walked,
            });
        }
        listed += walked;
    }

    for (key, slot) in &cache.bykey {
        let owns_slot = cache
            .items
            .get(*slot)
            .and_then(Option::as_ref)
            .is_some_and(|item| item.key == *key);
        if !seen.contains(slot) || !owns_slot {
            out.push(Violation::Orphan {
                key: format!("{key:?}"),
            });
        }
    }
    if listed != cache.bykey.len() {
        out.push(Violation::CountMismatch {
            indexed: cache.bykey.len(),
            listed,
        });
    }
    if cache.bykey.len() > cache.capacity {
        out.push(Violation::OverCapacity {
            len: cache.bykey.len(),
            capacity: cache.capacity,
        });
    }
    out
}
