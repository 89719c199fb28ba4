//! Trace events, the line-oriented trace format, and synthetic generators.
//!
//! ```text
//! # comment
//! GET <key>
//! PUT <key> <hex-value>
//! ```

use std::fmt;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::key::{CacheKey, CacheValue};

/// One replayable cache request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Get(CacheKey),
    Put(CacheKey, CacheValue),
}

impl TraceEvent {
    pub fn key(&self) -> &CacheKey {
        match self {
            TraceEvent::Get(k) | TraceEvent::Put(k, _) => k,
        }
    }

    pub fn value(&self) -> Option<&CacheValue> {
        match self {
            TraceEvent::Get(_) => None,
            TraceEvent::Put(_, v) => Some(v),
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Get(k) => write!(f, "GET {k}"),
            TraceEvent::Put(k, v) => write!(f, "PUT {k} {}", hex::encode(v.as_bytes())),
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("reading trace: {0}")]
    Io(#[from] std::io::Error),
}

fn parse_line(line: &str) -> Result<Option<TraceEvent>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut fields = trimmed.split_whitespace();
    let op = fields.next().expect("non-blank line has a field");
    let key = fields.next().ok_or_else(|| format!("{op} is missing a key"))?;
    let key = CacheKey::try_from(key).map_err(|e| e.to_string())?;
    let event = match op {
        "GET" => TraceEvent::Get(key),
        "PUT" => {
            let hex_value = fields.next().ok_or("PUT is missing a value")?;
            let bytes =
                hex::decode(hex_value).map_err(|e| format!("bad hex value `{hex_value}`: {e}"))?;
            TraceEvent::Put(key, CacheValue::new(bytes))
        }
        other => return Err(format!("unknown operation `{other}`")),
    };
    if let Some(extra) = fields.next() {
        return Err(format!("unexpected trailing field `{extra}`"));
    }
    Ok(Some(event))
}

/// Parses a whole trace. Errors carry the 1-based line number.
pub fn parse_trace<R: BufRead>(reader: R) -> Result<Vec<TraceEvent>, TraceError> {
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(ev) = parse_line(&line).map_err(|reason| TraceError::Parse {
            line: i + 1,
            reason,
        })? {
            events.push(ev);
        }
    }
    Ok(events)
}

pub fn parse_trace_str(text: &str) -> Result<Vec<TraceEvent>, TraceError> {
    parse_trace(text.as_bytes())
}

/// Renders events in the trace format, one per line.
pub fn format_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&ev.to_string());
        out.push('\n');
    }
    out
}

fn rank_key(rank: usize) -> CacheKey {
    CacheKey::new(format!("k{rank}")).expect("generated keys are short and non-empty")
}

/// `rounds` passes of `GET k1 … GET k{n_keys}`.
pub fn gen_round_robin(n_keys: usize, rounds: usize) -> Vec<TraceEvent> {
    assert!(n_keys >= 1 && rounds >= 1, "n_keys and rounds must be at least 1");
    let keys: Vec<CacheKey> = (1..=n_keys).map(rank_key).collect();
    (0..rounds)
        .flat_map(|_| keys.iter().cloned().map(TraceEvent::Get))
        .collect()
}

/// Zipf-distributed rank sampler over `1..=n` by inverse CDF.
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(n: usize, exponent: f64) -> Self {
        assert!(n >= 1, "need at least one rank");
        assert!(exponent > 0.0, "exponent must be positive");
        let mut cdf = Vec::with_capacity(n);
        let mut acc = 0.0;
        for rank in 1..=n {
            acc += (rank as f64).powf(-exponent);
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        ZipfSampler { cdf }
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// Draws a 1-based rank.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c < u);
        idx.min(self.cdf.len() - 1) + 1
    }
}

/// `n_ops` GETs whose key ranks follow Zipf(`exponent`) over `n_keys` keys.
/// The same seed always produces the same trace.
pub fn gen_zipf(n_keys: usize, n_ops: usize, exponent: f64, seed: u64) -> Vec<TraceEvent> {
    let sampler = ZipfSampler::new(n_keys, exponent);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_ops)
        .map(|_| TraceEvent::Get(rank_key(sampler.sample(&mut rng))))
        .collect()
}
