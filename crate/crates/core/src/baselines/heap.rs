use std::collections::HashMap;
use std::hash::Hash;

use crate::error::CacheError;
use crate::policy::{CachePolicy, TieBreak};
use crate::steps::StepCounter;

#[derive(Debug, Clone)]
struct HeapEntry<K> {
    count: u64,
    order: u64,
    key: K,
}

impl<K> HeapEntry<K> {
    fn rank(&self) -> (u64, u64) {
        (self.count, self.order)
    }
}

#[derive(Debug, Clone)]
struct Slot<V> {
    pos: usize,
    value: V,
}

/// Classic LFU: a binary min-heap keyed on (usage count, arrival order) plus a
/// hash map from key to heap position. Insert, access and evict are
/// O(log n).
#[derive(Debug, Clone)]
pub struct HeapLfuCache<K, V> {
    heap: Vec<HeapEntry<K>>,
    index: HashMap<K, Slot<V>>,
    capacity: usize,
    tie_break: TieBreak,
    clock: u64,
    steps: StepCounter,
}

impl<K, V> HeapLfuCache<K, V>
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
        Ok(HeapLfuCache {
            heap: Vec::new(),
            index: HashMap::new(),
            capacity,
            tie_break,
            clock: 0,
            steps: StepCounter::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn last_steps(&self) -> u64 {
        self.steps.get()
    }

    pub fn frequency(&self, key: &K) -> Option<u64> {
        self.index.get(key).map(|s| self.heap[s.pos].count)
    }

    /// Usage count of the entry at the root, if any.
    pub fn root_frequency(&self) -> Option<u64> {
        self.heap.first().map(|e| e.count)
    }

    pub fn peek_lfu(&self) -> Result<(&K, &V, u64), CacheError> {
        self.steps.reset();
        let root = self.heap.first().ok_or(CacheError::Empty)?;
        self.steps.tick();
        Ok((&root.key, &self.index[&root.key].value, root.count))
    }

    /// Checks the heap property and that every indexed position matches its
    /// slot. Returns a description of the first problem found.
    pub fn check_heap(&self) -> Result<(), String> {
        if self.heap.len() != self.index.len() {
            return Err(format!(
                "heap holds {} entries, index {}",
                self.heap.len(),
                self.index.len()
            ));
        }
        for (i, e) in self.heap.iter().enumerate() {
            if i > 0 && self.heap[(i - 1) / 2].rank() > e.rank() {
                return Err(format!("slot {i} is smaller than its parent"));
            }
            match self.index.get(&e.key) {
                Some(s) if s.pos == i => {}
                _ => return Err(format!("slot {i} is not indexed at its position")),
            }
        }
        Ok(())
    }

    fn next_order(&mut self) -> u64 {
        self.clock += 1;
        match self.tie_break {
            TieBreak::Oldest => self.clock,
            TieBreak::Newest => u64::MAX - self.clock,
        }
    }

    fn less(&self, a: usize, b: usize) -> bool {
        self.steps.tick();
        self.heap[a].rank() < self.heap[b].rank()
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.steps.add(4);
        self.heap.swap(a, b);
        self.index.get_mut(&self.heap[a].key).expect("indexed").pos = a;
        self.index.get_mut(&self.heap[b].key).expect("indexed").pos = b;
    }

    fn sift_up(&mut self, mut pos: usize) {
        while pos > 0 {
            let parent = (pos - 1) / 2;
            if !self.less(pos, parent) {
                break;
            }
            self.swap(pos, parent);
            pos = parent;
        }
    }

    fn sift_down(&mut self, mut pos: usize) {
        loop {
            let left = 2 * pos + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && self.less(right, left) {
                right
            } else {
                left
            };
            if !self.less(child, pos) {
                break;
            }
            self.swap(pos, child);
            pos = child;
        }
    }

    /// Removes the entry at `pos` by moving the last leaf into its place.
    fn take_at(&mut self, pos: usize) -> (K, V) {
        let last = self.heap.len() - 1;
        if pos != last {
            self.swap(pos, last);
        }
        let entry = self.heap.pop().expect("non-empty heap");
        self.steps.tick();
        let slot = self.index.remove(&entry.key).expect("indexed");
        if pos < self.heap.len() {
            self.sift_down(pos);
            self.sift_up(pos);
        }
        (entry.key, slot.value)
    }

    fn evict_inner(&mut self) -> Result<(K, V), CacheError> {
        if self.heap.is_empty() {
            return Err(CacheError::Empty);
        }
        Ok(self.take_at(0))
    }

    fn touch(&mut self, key: &K) -> Result<usize, CacheError> {
        self.steps.reset();
        self.steps.tick();
        let pos = self.index.get(key).ok_or(CacheError::NotFound)?.pos;
        let order = self.next_order();
        let e = &mut self.heap[pos];
        e.count += 1;
        e.order = order;
        self.sift_down(pos);
        Ok(self.index[key].pos)
    }
}

impl<K, V> CachePolicy<K, V> for HeapLfuCache<K, V>
where
    K: Hash + Eq + Clone,
{
    fn name(&self) -> &'static str {
        "lfu-heap"
    }

    fn len(&self) -> usize {
        self.heap.len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn contains(&self, key: &K) -> bool {
        self.index.contains_key(key)
    }

    fn access(&mut self, key: &K) -> Result<&V, CacheError> {
        self.access_mut(key).map(|v| &*v)
    }

    fn access_mut(&mut self, key: &K) -> Result<&mut V, CacheError> {
        self.touch(key)?;
        Ok(&mut self.index.get_mut(key).expect("indexed").value)
    }

    fn insert(&mut self, key: K, value: V) -> Result<Option<(K, V)>, CacheError> {
        self.steps.reset();
        self.steps.tick();
        if self.index.contains_key(&key) {
            return Err(CacheError::DuplicateKey);
        }
        let evicted = if self.heap.len() >= self.capacity {
            Some(self.evict_inner()?)
        } else {
            None
        };
        let order = self.next_order();
        let pos = self.heap.len();
        self.heap.push(HeapEntry {
            count: 1,
            order,
            key: key.clone(),
        });
        self.steps.tick();
        self.index.insert(key, Slot { pos, value });
        self.sift_up(pos);
        Ok(evicted)
    }

    fn peek_victim(&self) -> Result<(&K, &V), CacheError> {
        self.peek_lfu().map(|(k, v, _)| (k, v))
    }

    fn evict(&mut self) -> Result<(K, V), CacheError> {
        self.steps.reset();
        self.evict_inner()
    }

    fn remove(&mut self, key: &K) -> Option<V> {
        self.steps.reset();
        self.steps.tick();
        let pos = self.index.get(key)?.pos;
        Some(self.take_at(pos).1)
    }

    fn last_steps(&self) -> u64 {
        self.steps.get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::OracleLfu;

    fn filled(n: u32, tie_break: TieBreak) -> HeapLfuCache<u32, u32> {
        let mut h = HeapLfuCache::with_tie_break(n as usize, tie_break).unwrap();
        for k in 0..n {
            h.insert(k, k * 10).unwrap();
        }
        h
    }

    #[test]
    fn insert_into_empty_lands_at_root() {
        let mut h = HeapLfuCache::new(4).unwrap();
        assert_eq!(h.insert("a", 1), Ok(None));
        assert_eq!(h.peek_lfu(), Ok((&"a", &1, 1)));
        h.check_heap().unwrap();
    }

    #[test]
    fn three_inserts_then_evict_matches_oracle() {
        for tb in [TieBreak::Oldest, TieBreak::Newest] {
            let mut h = filled(3, tb);
            let mut o = OracleLfu::with_tie_break(3, tb).unwrap();
            for k in 0..3u32 {
                o.insert(k, k * 10).unwrap();
            }
            let expected = o.evict().unwrap();
            assert_eq!(h.evict().unwrap(), expected);
        }
        // Oldest: first inserted goes first.
        assert_eq!(filled(3, TieBreak::Oldest).evict().unwrap().0, 0);
        assert_eq!(filled(3, TieBreak::Newest).evict().unwrap().0, 2);
    }

    #[test]
    fn access_sole_item_stays_root() {
        let mut h = HeapLfuCache::new(2).unwrap();
        h.insert("a", 7).unwrap();
        assert_eq!(h.access(&"a"), Ok(&7));
        assert_eq!(h.peek_lfu(), Ok((&"a", &7, 2)));
    }

    #[test]
    fn accessed_root_stops_being_minimal() {
        let mut h = HeapLfuCache::with_tie_break(3, TieBreak::Oldest).unwrap();
        let mut o = OracleLfu::with_tie_break(3, TieBreak::Oldest).unwrap();
        for k in ["r", "s", "t"] {
            h.insert(k, ()).unwrap();
            o.insert(k, ()).unwrap();
        }
        for k in ["s", "t"] {
            for _ in 0..4 {
                h.access(&k).unwrap();
                o.access(&k).unwrap();
            }
        }
        assert_eq!(h.peek_lfu().unwrap().0, &"r");
        for _ in 0..5 {
            h.access(&"r").unwrap();
            o.access(&"r").unwrap();
            h.check_heap().unwrap();
        }
        assert_eq!(h.frequency(&"r"), Some(6));
        assert_ne!(h.peek_lfu().unwrap().0, &"r");
        assert_eq!(h.peek_lfu().unwrap().0, o.peek_lfu().unwrap().0);
    }

    #[test]
    fn evict_examples() {
        let mut h = HeapLfuCache::with_tie_break(3, TieBreak::Oldest).unwrap();
        for k in ["x", "y", "z"] {
            h.insert(k, ()).unwrap();
        }
        h.access(&"z").unwrap();
        assert_eq!(h.evict().unwrap().0, "x");
        assert_eq!(h.frequency(&"y"), Some(1));
        assert_eq!(h.frequency(&"z"), Some(2));

        let mut h = HeapLfuCache::new(1).unwrap();
        h.insert("q", ()).unwrap();
        h.access(&"q").unwrap();
        h.access(&"q").unwrap();
        assert_eq!(h.evict().unwrap().0, "q");
        assert!(h.is_empty());
        assert_eq!(h.evict(), Err(CacheError::Empty));
    }

    #[test]
    fn errors_leave_heap_unchanged() {
        let mut h = filled(4, TieBreak::Newest);
        assert_eq!(h.insert(2, 0), Err(CacheError::DuplicateKey));
        assert_eq!(h.access(&99), Err(CacheError::NotFound));
        assert_eq!(h.len(), 4);
        h.check_heap().unwrap();
    }

    #[test]
    fn remove_from_middle_keeps_heap() {
        let mut h = filled(31, TieBreak::Oldest);
        for k in (0..31).step_by(3) {
            for _ in 0..(k % 5) {
                h.access(&k).unwrap();
            }
        }
        for k in [15, 0, 30, 7] {
            assert_eq!(h.remove(&k), Some(k * 10));
            h.check_heap().unwrap();
        }
        assert_eq!(h.remove(&15), None);
    }

    #[test]
    fn insert_steps_grow_with_depth() {
        // Newest tie-break: each fresh key outranks everything and climbs to
        // the root, so insert cost tracks the tree height.
        let mut prev = 0;
        for k in 2..=12u32 {
            let n = 1u32 << k;
            let mut h = HeapLfuCache::with_tie_break(n as usize + 1, TieBreak::Newest).unwrap();
            for i in 0..n {
                h.insert(i, ()).unwrap();
            }
            let steps = h.last_steps();
            assert!(steps > prev, "n={n}: {steps} <= {prev}");
            prev = steps;
        }
    }
}
