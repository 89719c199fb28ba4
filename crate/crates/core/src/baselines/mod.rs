//! Reference policies: the heap-based LFU, LRU, and a brute-force LFU oracle.

mod heap;
mod lru;
mod oracle;

pub use self::heap::HeapLfuCache;
pub use self::lru::LruCache;
pub use self::oracle::OracleLfu;
