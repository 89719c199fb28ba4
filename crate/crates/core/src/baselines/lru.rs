use std::collections::HashMap;
use std::hash::Hash;

use crate::error::CacheError;
use crate::policy::CachePolicy;
use crate::steps::StepCounter;

#[derive(Debug, Clone)]
struct Node<K, V> {
    key: K,
    value: V,
    prev: Option<usize>,
    next: Option<usize>,
}

/// Least-recently-used cache: a recency-ordered doubly linked list over an
/// arena, plus a key → slot table.
#[derive(Debug, Clone)]
pub struct LruCache<K, V> {
    map: HashMap<K, usize>,
    nodes: Vec<Option<Node<K, V>>>,
    free: Vec<usize>,
    /// Most recently used.
    head: Option<usize>,
    /// Least recently used.
    tail: Option<usize>,
    capacity: usize,
    steps: StepCounter,
}

impl<K, V> LruCache<K, V>
where
    K: Hash + Eq + Clone,
{
    pub fn new(capacity: usize) -> Result<Self, CacheError> {
        if capacity == 0 {
            return Err(CacheError::InvalidCapacity);
        }
        Ok(LruCache {
            map: HashMap::new(),
            nodes: Vec::new(),
            free: Vec::new(),
            head: None,
            tail: None,
            capacity,
            steps: StepCounter::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Keys from most to least recently used.
    pub fn keys_by_recency(&self) -> Vec<K> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.head;
        while let Some(i) = cur {
            let n = self.node(i);
            out.push(n.key.clone());
            cur = n.next;
        }
        out
    }

    pub fn get(&mut self, key: &K) -> Result<&V, CacheError> {
        self.get_mut(key).map(|v| &*v)
    }

    pub fn get_mut(&mut self, key: &K) -> Result<&mut V, CacheError> {
        self.steps.reset();
        self.steps.tick();
        let idx = *self.map.get(key).ok_or(CacheError::NotFound)?;
        self.unlink(idx);
        self.push_front(idx);
        Ok(&mut self.node_mut(idx).value)
    }

    /// Inserts or updates `key`, making it most recent. Returns the entry
    /// evicted to make room, if any.
    pub fn put(&mut self, key: K, value: V) -> Option<(K, V)> {
        if let Ok(slot) = self.get_mut(&key) {
            *slot = value;
            return None;
        }
        self.admit(key, value)
    }

    /// Removes the least recently used entry.
    pub fn evict_lru(&mut self) -> Result<(K, V), CacheError> {
        self.steps.reset();
        self.evict_inner()
    }

    /// Checks that list order and table membership agree.
    pub fn check_links(&self) -> Result<(), String> {
        let mut count = 0;
        let mut prev = None;
        let mut cur = self.head;
        while let Some(i) = cur {
            count += 1;
            if count > self.map.len() {
                return Err("recency list is longer than the table".into());
            }
            let n = self.node(i);
            if n.prev != prev {
                return Err(format!("slot {i} has a stale prev link"));
            }
            if self.map.get(&n.key) != Some(&i) {
                return Err(format!("slot {i} is not indexed"));
            }
            prev = Some(i);
            cur = n.next;
        }
        if prev != self.tail || count != self.map.len() {
            return Err("recency list and table disagree".into());
        }
        Ok(())
    }

    fn admit(&mut self, key: K, value: V) -> Option<(K, V)> {
        self.steps.reset();
        self.steps.tick();
        let evicted = if self.map.len() >= self.capacity {
            self.evict_inner().ok()
        } else {
            None
        };
        let node = Node {
            key: key.clone(),
            value,
            prev: None,
            next: None,
        };
        let idx = match self.free.pop() {
            Some(i) => {
                self.nodes[i] = Some(node);
                i
            }
            None => {
                self.nodes.push(Some(node));
                self.nodes.len() - 1
            }
        };
        self.push_front(idx);
        self.steps.tick();
        self.map.insert(key, idx);
        evicted
    }

    fn evict_inner(&mut self) -> Result<(K, V), CacheError> {
        let idx = self.tail.ok_or(CacheError::Empty)?;
        Ok(self.take(idx))
    }

    fn take(&mut self, idx: usize) -> (K, V) {
        self.unlink(idx);
        let node = self.nodes[idx].take().expect("live slot");
        self.free.push(idx);
        self.steps.tick();
        self.map.remove(&node.key);
        (node.key, node.value)
    }

    fn push_front(&mut self, idx: usize) {
        self.steps.add(3);
        let old = self.head;
        {
            let n = self.node_mut(idx);
            n.prev = None;
            n.next = old;
        }
        match old {
            Some(h) => self.node_mut(h).prev = Some(idx),
            None => self.tail = Some(idx),
        }
        self.head = Some(idx);
    }

    fn unlink(&mut self, idx: usize) {
        self.steps.add(4);
        let (prev, next) = {
            let n = self.node(idx);
            (n.prev, n.next)
        };
        match prev {
            Some(p) => self.node_mut(p).next = next,
            None => self.head = next,
        }
        match next {
            Some(n) => self.node_mut(n).prev = prev,
            None => self.tail = prev,
        }
    }

    fn node(&self, idx: usize) -> &Node<K, V> {
        self.nodes[idx].as_ref().expect("live slot")
    }

    fn node_mut(&mut self, idx: usize) -> &mut Node<K, V> {
        self.nodes[idx].as_mut().expect("live slot")
    }
}

impl<K, V> CachePolicy<K, V> for LruCache<K, V>
where
    K: Hash + Eq + Clone,
{
    fn name(&self) -> &'static str {
        "lru"
    }

    fn len(&self) -> usize {
        self.map.len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn contains(&self, key: &K) -> bool {
        self.map.contains_key(key)
    }

    fn access(&mut self, key: &K) -> Result<&V, CacheError> {
        self.get(key)
    }

    fn access_mut(&mut self, key: &K) -> Result<&mut V, CacheError> {
        self.get_mut(key)
    }

    fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError> {
        if self.map.contains_key(&key) {
            self.steps.reset();
            self.steps.tick();
            return Err(CacheError::DuplicateKey);
        }
        Ok(self.admit(key, value))
    }

    fn peek_victim(&self) -> Result<(&K, &V), CacheError> {
        let n = self.node(self.tail.ok_or(CacheError::Empty)?);
        Ok((&n.key, &n.value))
    }

    fn evict(&mut self) -> Result<(K, V), CacheError> {
        self.evict_lru()
    }

    fn remove(&mut self, key: &K) -> Option<V> {
        self.steps.reset();
        self.steps.tick();
        let idx = *self.map.get(key)?;
        Some(self.take(idx).1)
    }

    fn last_steps(&self) -> u64 {
        self.steps.get()
    }
}
