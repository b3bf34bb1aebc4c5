//! Universe sampling: a two-level predecessor structure.
//!
//! The universe is cut into buckets of `b = 2^k_b` consecutive keys. A
//! bucket is active while it holds a key and stores only the low `k_b` bits
//! of its keys, as a bit vector, an unsorted list, or a hybrid that switches
//! between the two at the thresholds `theta_min` and `theta_max`. A top
//! level over bucket numbers finds the rightmost active bucket at or before
//! a given bucket.

mod bucket;
mod top;

use crate::api::{ConfigError, PredecessorSet, Width};
use bucket::Bucket;
use top::Top;

pub use bucket::StorageKind;
pub use top::TopKind;

/// Bucket representation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BucketKind {
    BitVector,
    List,
    /// A list that becomes a bit vector above `theta_max` keys and reverts
    /// below `theta_min`.
    #[default]
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct USConfig {
    /// Bucket size is `2^k_b`.
    pub k_b: u32,
    pub top: TopKind,
    pub bucket: BucketKind,
    pub theta_min: u32,
    pub theta_max: u32,
}

impl Default for USConfig {
    fn default() -> Self {
        USConfig {
            k_b: 16,
            top: TopKind::Array,
            bucket: BucketKind::Hybrid,
            theta_min: 1 << 9,
            theta_max: 1 << 10,
        }
    }
}

impl USConfig {
    /// Recommended bucket size for a pure representation: `2^24` for bit
    /// vectors, `2^10` for lists.
    pub fn pure(top: TopKind, bucket: BucketKind) -> Self {
        let k_b = match bucket {
            BucketKind::List => 10,
            _ => 24,
        };
        USConfig {
            k_b,
            top,
            bucket,
            ..USConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniverseSampling {
    width: Width,
    config: USConfig,
    slots: Vec<Option<Bucket>>,
    free: Vec<u32>,
    top: Top,
    len: usize,
}

impl UniverseSampling {
    pub fn new(width: Width, config: USConfig) -> Result<Self, ConfigError> {
        if width.bits() == 64 {
            return Err(ConfigError::UnsupportedWidth {
                structure: "universe sampling",
                width,
            });
        }
        if config.k_b == 0 || config.k_b > 32 || config.k_b >= width.bits() {
            return Err(ConfigError::invalid(
                "k_b",
                format!("must lie in [1, min(32, w - 1)], got {}", config.k_b),
            ));
        }
        if config.bucket == BucketKind::Hybrid {
            let b = 1u64 << config.k_b;
            let (lo, hi) = (config.theta_min, config.theta_max);
            if lo == 0 || lo > hi || u64::from(hi) >= b {
                return Err(ConfigError::invalid(
                    "theta",
                    format!("need 0 < theta_min <= theta_max < b, got {lo}, {hi} with b = {b}"),
                ));
            }
        }
        Ok(UniverseSampling {
            width,
            config,
            slots: Vec::new(),
            free: Vec::new(),
            top: Top::new(config.top),
            len: 0,
        })
    }

    pub fn config(&self) -> USConfig {
        self.config
    }

    /// Bucket number and truncated key of `x`.
    #[inline]
    pub fn bucket_of(&self, x: u64) -> (u64, u32) {
        let k = self.config.k_b;
        (x >> k, (x & ((1u64 << k) - 1)) as u32)
    }

    #[inline]
    fn bucket(&self, id: u32) -> &Bucket {
        self.slots[id as usize].as_ref().expect("live bucket")
    }

    #[inline]
    fn bucket_mut(&mut self, id: u32) -> &mut Bucket {
        self.slots[id as usize].as_mut().expect("live bucket")
    }

    /// Number of the rightmost active bucket `<= i`.
    pub fn top_locate(&self, i: u64) -> Option<u64> {
        self.top.locate(i).map(|id| self.bucket(id).index)
    }

    /// Storage of active bucket `i`.
    pub fn bucket_storage(&self, i: u64) -> Option<StorageKind> {
        let id = self.top.locate(i)?;
        let b = self.bucket(id);
        (b.index == i).then(|| b.kind())
    }

    /// Heap bytes of active bucket `i`, its record included.
    pub fn bucket_bytes(&self, i: u64) -> Option<usize> {
        let id = self.top.locate(i)?;
        let b = self.bucket(id);
        (b.index == i).then(|| std::mem::size_of::<Bucket>() + b.heap_bytes())
    }

    pub fn active_buckets(&self) -> usize {
        self.slots.len() - self.free.len()
    }

    fn list_limit(&self) -> usize {
        match self.config.bucket {
            BucketKind::Hybrid => self.config.theta_max as usize,
            _ => usize::MAX,
        }
    }

    fn activate(&mut self, i: u64, xt: u32) {
        let kind = match self.config.bucket {
            BucketKind::BitVector => StorageKind::BitVector,
            BucketKind::List | BucketKind::Hybrid => StorageKind::List,
        };
        let bucket = Bucket::new(i, xt, kind, self.config.k_b);
        let id = match self.free.pop() {
            Some(id) => {
                self.slots[id as usize] = Some(bucket);
                id
            }
            None => {
                self.slots.push(Some(bucket));
                (self.slots.len() - 1) as u32
            }
        };
        let last_bucket = self.width.max_key() >> self.config.k_b;
        self.top.activate(i, id, last_bucket);
    }

    /// Checks every bucket and the top level against a full scan.
    pub fn validate(&self) -> Result<(), String> {
        let mut active: Vec<(u64, u32)> = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(id, b)| b.as_ref().map(|b| (b.index, id as u32)))
            .collect();
        active.sort_unstable();
        let mut total = 0;
        for &(_, id) in &active {
            let b = self.bucket(id);
            let keys = b.keys();
            if keys.is_empty() || keys.len() != b.count as usize {
                return Err(format!("bucket {} count {} with {} keys", b.index, b.count, keys.len()));
            }
            if (keys[0], keys[keys.len() - 1]) != (b.min_t, b.max_t) {
                return Err(format!("bucket {} has stale extremes", b.index));
            }
            if keys.windows(2).any(|p| p[0] == p[1]) {
                return Err(format!("bucket {} holds duplicates", b.index));
            }
            if self.config.bucket == BucketKind::Hybrid {
                let (lo, hi) = (self.config.theta_min, self.config.theta_max);
                let ok = match b.kind() {
                    StorageKind::List => b.count <= hi,
                    StorageKind::BitVector => b.count >= lo,
                };
                if !ok {
                    return Err(format!("bucket {} violates the hybrid thresholds", b.index));
                }
            }
            total += keys.len();
        }
        if total != self.len {
            return Err(format!("{total} keys stored, len {}", self.len));
        }
        self.top.audit(&active)
    }
}

impl PredecessorSet for UniverseSampling {
    fn insert(&mut self, x: u64) -> bool {
        debug_assert!(self.width.contains(x));
        let (i, xt) = self.bucket_of(x);
        let id = match self.top.locate(i) {
            Some(id) if self.bucket(id).index == i => id,
            _ => {
                self.activate(i, xt);
                self.len += 1;
                return true;
            }
        };
        if self.bucket(id).contains(xt) {
            return false;
        }
        let (hybrid, k_b, theta_max) = (
            self.config.bucket == BucketKind::Hybrid,
            self.config.k_b,
            self.config.theta_max,
        );
        let limit = self.list_limit();
        let b = self.bucket_mut(id);
        if hybrid && b.kind() == StorageKind::List && b.count == theta_max {
            b.convert(StorageKind::BitVector, k_b);
        }
        b.add(xt, limit);
        self.len += 1;
        true
    }

    fn remove(&mut self, x: u64) -> bool {
        let (i, xt) = self.bucket_of(x);
        let Some(id) = self.top.locate(i) else {
            return false;
        };
        let (hybrid, k_b, theta_min) = (
            self.config.bucket == BucketKind::Hybrid,
            self.config.k_b,
            self.config.theta_min,
        );
        let b = self.bucket_mut(id);
        if b.index != i || !b.contains(xt) {
            return false;
        }
        b.take(xt);
        if b.count == 0 {
            self.slots[id as usize] = None;
            self.free.push(id);
            let slots = &self.slots;
            self.top
                .deactivate(i, id, |p| slots[p as usize].as_ref().expect("live bucket").index);
            if self.len == 1 {
                self.slots = Vec::new();
                self.free = Vec::new();
            }
        } else if hybrid && b.kind() == StorageKind::BitVector && b.count < theta_min {
            b.convert(StorageKind::List, k_b);
        }
        self.len -= 1;
        true
    }

    fn predecessor(&self, x: u64) -> Option<u64> {
        let (i, xt) = self.bucket_of(x);
        let k = self.config.k_b;
        let id = self.top.locate(i)?;
        let b = self.bucket(id);
        if b.index < i {
            return Some(b.index << k | u64::from(b.max_t));
        }
        if xt >= b.min_t {
            let t = b.pred(xt).expect("a key at or below xt exists");
            return Some(i << k | u64::from(t));
        }
        let p = self.bucket(self.top.locate(i.checked_sub(1)?)?);
        Some(p.index << k | u64::from(p.max_t))
    }

    fn len(&self) -> usize {
        self.len
    }

    fn width(&self) -> Width {
        self.width
    }

    fn to_sorted_vec(&self) -> Vec<u64> {
        let mut buckets: Vec<&Bucket> = self.slots.iter().flatten().collect();
        buckets.sort_unstable_by_key(|b| b.index);
        let k = self.config.k_b;
        buckets
            .iter()
            .flat_map(|b| b.keys().into_iter().map(move |t| b.index << k | u64::from(t)))
            .collect()
    }

    fn heap_bytes(&self) -> usize {
        self.slots.capacity() * std::mem::size_of::<Option<Bucket>>()
            + self.free.capacity() * 4
            + self.slots.iter().flatten().map(Bucket::heap_bytes).sum::<usize>()
            + self.top.heap_bytes()
    }
}
