//! Constant-time LFU cache.
//!
//! ```text
//!   bykey: HashMap<K, slot>
//!
//!   freq list (circular, sentinel value 0):
//!
//!     ┌──────────────────────────────────────────────────────┐
//!     ▼                                                      │
//!   [ 0 ] ◄──► [ 1 ] ◄──► [ 2 ] ◄──► [ 5 ] ◄─────────────────┘
//!               │          │          │
//!               x ◄─► y    z ◄─► a    b ◄─► c      items, oldest first
//! ```
//!
//! Every item slot links back to the frequency node that owns it. Accessing an
//! item moves it from node `f` to node `f + 1` (created in place when missing)
//! and unlinks `f` if that leaves it empty. Eviction takes an item from the
//! first node after the sentinel. None of these paths depend on the number of
//! cached items; [`LfuCache::last_steps`] exposes the count of elementary steps
//! the last call performed so that claim can be checked.

mod validate;

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

pub use self::validate::Violation;

use crate::error::CacheError;
use crate::policy::{CachePolicy, TieBreak};
use crate::steps::StepCounter;

/// Index of the sentinel frequency node. It is never freed.
const HEAD: usize = 0;

#[derive(Debug, Clone, Copy, Default)]
struct ItemList {
    head: Option<usize>,
    tail: Option<usize>,
    len: usize,
}

#[derive(Debug, Clone)]
struct FreqNode {
    value: u64,
    prev: usize,
    next: usize,
    items: ItemList,
}

impl FreqNode {
    fn sentinel() -> Self {
        FreqNode {
            value: 0,
            prev: HEAD,
            next: HEAD,
            items: ItemList::default(),
        }
    }
}

#[derive(Debug, Clone)]
struct Item<K, V> {
    key: K,
    data: V,
    parent: usize,
    prev: Option<usize>,
    next: Option<usize>,
}

/// LFU cache with O(1) insert, access, peek and evict.
#[derive(Debug, Clone)]
pub struct LfuCache<K, V> {
    bykey: HashMap<K, usize>,
    items: Vec<Option<Item<K, V>>>,
    free_items: Vec<usize>,
    nodes: Vec<FreqNode>,
    free_nodes: Vec<usize>,
    capacity: usize,
    tie_break: TieBreak,
    steps: StepCounter,
}

impl<K, V> LfuCache<K, V>
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
        Ok(LfuCache {
            bykey: HashMap::new(),
            items: Vec::new(),
            free_items: Vec::new(),
            nodes: vec![FreqNode::sentinel()],
            free_nodes: Vec::new(),
            capacity,
            tie_break,
            steps: StepCounter::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.bykey.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bykey.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn last_steps(&self) -> u64 {
        self.steps.get()
    }

    pub fn contains<Q>(&self, key: &Q) -> bool
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        self.bykey.contains_key(key)
    }

    /// Usage count of `key`, without counting as a use.
    pub fn frequency<Q>(&self, key: &Q) -> Option<u64>
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        let slot = *self.bykey.get(key)?;
        Some(self.nodes[self.item(slot).parent].value)
    }

    /// Adds `key` with usage count 1.
    ///
    /// On a full cache the least frequently used entry is evicted first and
    /// returned. A key that is already cached is rejected and nothing changes.
    pub fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError> {
        self.steps.reset();
        self.steps.tick();
        if self.bykey.contains_key(&key) {
            return Err(CacheError::DuplicateKey);
        }

        let evicted = if self.bykey.len() >= self.capacity {
            Some(self.evict_inner()?)
        } else {
            None
        };

        let mut freq = self.next_of(HEAD);
        self.steps.tick();
        if self.nodes[freq].value != 1 {
            freq = self.get_new_node(1, HEAD, freq);
        }

        let slot = self.alloc_item(Item {
            key: key.clone(),
            data: value,
            parent: freq,
            prev: None,
            next: None,
        });
        self.steps.tick();
        self.push_item(freq, slot);
        self.steps.tick();
        self.bykey.insert(key, slot);
        Ok(evicted)
    }

    /// Returns the value for `key` and increments its usage count by one.
    pub fn access<Q>(&mut self, key: &Q) -> Result<&V, CacheError>
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        let slot = self.touch(key)?;
        Ok(&self.item(slot).data)
    }

    /// Like [`access`](Self::access) but hands out the value mutably.
    pub fn access_mut<Q>(&mut self, key: &Q) -> Result<&mut V, CacheError>
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        let slot = self.touch(key)?;
        Ok(&mut self.item_mut(slot).data)
    }

    /// The entry [`evict_lfu`](Self::evict_lfu) would remove, with its usage
    /// count. Does not count as a use.
    pub fn peek_lfu(&self) -> Result<(&K, &V, u64), CacheError> {
        self.steps.reset();
        self.steps.tick();
        if self.bykey.is_empty() {
            return Err(CacheError::Empty);
        }
        let first = self.next_of(HEAD);
        let slot = self.victim_of(first);
        let item = self.item(slot);
        Ok((&item.key, &item.data, self.nodes[first].value))
    }

    /// Removes and returns the least frequently used entry.
    pub fn evict_lfu(&mut self) -> Result<(K, V), CacheError> {
        self.steps.reset();
        self.evict_inner()
    }

    /// Removes `key` wherever it sits in the frequency list.
    pub fn remove<Q>(&mut self, key: &Q) -> Option<V>
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        self.steps.reset();
        self.steps.tick();
        let slot = self.bykey.remove(key)?;
        let (_, data) = self.detach(slot);
        Some(data)
    }

    /// Snapshot of the frequency list: each node's count and its keys in
    /// arrival order, from the least frequent node onwards.
    pub fn frequency_list(&self) -> Vec<(u64, Vec<K>)> {
        let mut out = Vec::new();
        let mut node = self.nodes[HEAD].next;
        while node != HEAD {
            let n = &self.nodes[node];
            let mut keys = Vec::with_capacity(n.items.len);
            let mut cur = n.items.head;
            while let Some(slot) = cur {
                let item = self.item(slot);
                keys.push(item.key.clone());
                cur = item.next;
            }
            out.push((n.value, keys));
            node = n.next;
        }
        out
    }

    /// Walks the whole structure and reports every broken invariant. O(n).
    pub fn validate(&self) -> Vec<Violation>
    where
        K: Debug,
    {
        validate::check(self)
    }

    fn touch<Q>(&mut self, key: &Q) -> Result<usize, CacheError>
    where
        K: Borrow<Q>,
        Q: Hash + Eq + ?Sized,
    {
        self.steps.reset();
        self.steps.tick();
        let slot = *self.bykey.get(key).ok_or(CacheError::NotFound)?;

        self.steps.tick();
        let freq = self.item(slot).parent;
        let mut next_freq = self.next_of(freq);
        let bumped = self.nodes[freq].value + 1;
        self.steps.tick();
        if next_freq == HEAD || self.nodes[next_freq].value != bumped {
            next_freq = self.get_new_node(bumped, freq, next_freq);
        }

        self.unlink_item(freq, slot);
        self.push_item(next_freq, slot);
        self.steps.tick();
        self.item_mut(slot).parent = next_freq;

        self.steps.tick();
        if self.nodes[freq].items.len == 0 {
            self.delete_node(freq);
        }
        Ok(slot)
    }

    fn evict_inner(&mut self) -> Result<(K, V), CacheError> {
        self.steps.tick();
        if self.bykey.is_empty() {
            return Err(CacheError::Empty);
        }
        let first = self.next_of(HEAD);
        let slot = self.victim_of(first);
        let (key, data) = self.detach(slot);
        self.steps.tick();
        self.bykey.remove(&key);
        Ok((key, data))
    }

    /// Unlinks an item slot from its frequency node, drops the node if it
    /// empties, and frees the slot. The caller owns the `bykey` entry.
    fn detach(&mut self, slot: usize) -> (K, V) {
        self.steps.tick();
        let freq = self.item(slot).parent;
        self.unlink_item(freq, slot);
        self.steps.tick();
        if self.nodes[freq].items.len == 0 {
            self.delete_node(freq);
        }
        let item = self.items[slot].take().expect("live item slot");
        self.free_items.push(slot);
        (item.key, item.data)
    }

    fn victim_of(&self, node: usize) -> usize {
        self.steps.tick();
        let items = &self.nodes[node].items;
        match self.tie_break {
            TieBreak::Oldest => items.head,
            TieBreak::Newest => items.tail,
        }
        .expect("non-sentinel frequency node is never empty")
    }

    fn next_of(&self, node: usize) -> usize {
        self.steps.tick();
        self.nodes[node].next
    }

    /// Splices a new frequency node with `value` between adjacent `prev` and
    /// `next`.
    fn get_new_node(&mut self, value: u64, prev: usize, next: usize) -> usize {
        debug_assert_eq!(self.nodes[prev].next, next, "prev and next must be adjacent");
        let node = FreqNode {
            value,
            prev,
            next,
            items: ItemList::default(),
        };
        let idx = match self.free_nodes.pop() {
            Some(idx) => {
                self.nodes[idx] = node;
                idx
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        self.steps.add(4);
        self.nodes[prev].next = idx;
        self.nodes[next].prev = idx;
        idx
    }

    /// Unlinks an empty, non-sentinel frequency node.
    fn delete_node(&mut self, node: usize) {
        debug_assert_ne!(node, HEAD, "the sentinel is never deleted");
        debug_assert_eq!(self.nodes[node].items.len, 0, "only empty nodes are deleted");
        self.steps.add(4);
        let FreqNode { prev, next, .. } = self.nodes[node];
        self.nodes[prev].next = next;
        self.nodes[next].prev = prev;
        self.free_nodes.push(node);
    }

    fn push_item(&mut self, node: usize, slot: usize) {
        self.steps.add(4);
        let tail = self.nodes[node].items.tail;
        {
            let item = self.item_mut(slot);
            item.prev = tail;
            item.next = None;
        }
        match tail {
            Some(t) => self.item_mut(t).next = Some(slot),
            None => self.nodes[node].items.head = Some(slot),
        }
        let list = &mut self.nodes[node].items;
        list.tail = Some(slot);
        list.len += 1;
    }

    fn unlink_item(&mut self, node: usize, slot: usize) {
        self.steps.add(4);
        let (prev, next) = {
            let item = self.item(slot);
            (item.prev, item.next)
        };
        match prev {
            Some(p) => self.item_mut(p).next = next,
            None => self.nodes[node].items.head = next,
        }
        match next {
            Some(n) => self.item_mut(n).prev = prev,
            None => self.nodes[node].items.tail = prev,
        }
        self.nodes[node].items.len -= 1;
        let item = self.item_mut(slot);
        item.prev = None;
        item.next = None;
    }

    fn alloc_item(&mut self, item: Item<K, V>) -> usize {
        match self.free_items.pop() {
            Some(slot) => {
                self.items[slot] = Some(item);
                slot
            }
            None => {
                self.items.push(Some(item));
                self.items.len() - 1
            }
        }
    }

    fn item(&self, slot: usize) -> &Item<K, V> {
        self.items[slot].as_ref().expect("live item slot")
    }

    fn item_mut(&mut self, slot: usize) -> &mut Item<K, V> {
        self.items[slot].as_mut().expect("live item slot")
    }
}

impl<K, V> CachePolicy<K, V> for LfuCache<K, V>
where
    K: Hash + Eq + Clone,
{
    fn name(&self) -> &'static str {
        "lfu"
    }

    fn len(&self) -> usize {
        LfuCache::len(self)
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn contains(&self, key: &K) -> bool {
        LfuCache::contains(self, key)
    }

    fn access(&mut self, key: &K) -> Result<&V, CacheError> {
        LfuCache::access(self, key)
    }

    fn access_mut(&mut self, key: &K) -> Result<&mut V, CacheError> {
        LfuCache::access_mut(self, key)
    }

    fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError> {
        LfuCache::insert(self, key, value)
    }

    fn peek_victim(&self) -> Result<(&K, &V), CacheError> {
        self.peek_lfu().map(|(k, v, _)| (k, v))
    }

    fn evict(&mut self) -> Result<(K, V), CacheError> {
        self.evict_lfu()
    }

    fn remove(&mut self, key: &K) -> Option<V> {
        LfuCache::remove(self, key)
    }

    fn last_steps(&self) -> u64 {
        self.steps.get()
    }
}
