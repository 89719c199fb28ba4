use std::cell::Cell;

/// Elementary-step instrumentation.
///
/// One step is one link read or write, one ordered-set mutation, one lookup
/// table probe, or (for the heap baseline) one key comparison or slot move.
/// Each public cache operation resets the counter on entry, so after the call
/// [`StepCounter::get`] reports the cost of that call alone.
#[derive(Debug, Default, Clone)]
pub struct StepCounter {
    current: Cell<u64>,
}

impl StepCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn reset(&self) {
        self.current.set(0);
    }

    #[inline]
    pub fn tick(&self) {
        self.add(1);
    }

    #[inline]
    pub fn add(&self, n: u64) {
        self.current.set(self.current.get() + n);
    }

    pub fn get(&self) -> u64 {
        self.current.get()
    }
}

/// Running max/mean over a stream of per-operation step counts.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub count: u64,
    pub max: u64,
    pub total: u64,
}

impl StepStats {
    pub fn record(&mut self, steps: u64) {
        self.count += 1;
        self.total += steps;
        self.max = self.max.max(steps);
    }

    pub fn merge(&mut self, other: &StepStats) {
        self.count += other.count;
        self.total += other.total;
        self.max = self.max.max(other.max);
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total as f64 / self.count as f64
        }
    }
}
