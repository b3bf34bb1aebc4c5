//! Y-fast tries.
//!
//! Keys live in buckets of size between `γt` and `ct`, linked in key order.
//! Each bucket except the special −∞ bucket has a representative, at most
//! its smallest key, stored in an x-fast trie whose level search is limited
//! to the levels between `l_top` (the deepest complete level) and `l_bot`
//! (one past the deepest branching level). Deleting a representative only
//! marks it dead; it leaves the trie when its bucket is merged away.

mod bucket;
mod lss;

use crate::api::{ConfigError, PredecessorSet, Width};
use bucket::{Buckets, MINUS_INF, NIL};
use lss::Lss;

pub use bucket::BucketOrder;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YFastConfig {
    /// Target bucket size, a power of two.
    pub t: usize,
    /// Split factor: buckets larger than `c * t` are split.
    pub c: usize,
    /// Merge factor: buckets smaller than `gamma * t` are merged.
    pub gamma: f64,
    pub order: BucketOrder,
}

impl Default for YFastConfig {
    fn default() -> Self {
        YFastConfig {
            t: 128,
            c: 2,
            gamma: 0.25,
            order: BucketOrder::Unsorted,
        }
    }
}

/// A bucket as seen from outside, keys ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketView {
    /// `None` for the −∞ bucket.
    pub rep: Option<u64>,
    pub rep_dead: bool,
    pub keys: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct YFastTrie {
    width: Width,
    config: YFastConfig,
    max_size: usize,
    min_size: usize,
    buckets: Buckets,
    lss: Lss,
    len: usize,
}

impl YFastTrie {
    pub fn new(width: Width, config: YFastConfig) -> Result<Self, ConfigError> {
        if !config.t.is_power_of_two() {
            return Err(ConfigError::invalid("t", format!("must be a power of two, got {}", config.t)));
        }
        let max_size = config
            .c
            .checked_mul(config.t)
            .filter(|&m| m < u32::MAX as usize)
            .ok_or_else(|| ConfigError::invalid("c", "c * t overflows"))?;
        if !(config.gamma > 0.0 && config.gamma.is_finite()) {
            return Err(ConfigError::invalid("gamma", format!("must be positive, got {}", config.gamma)));
        }
        let min_size = (config.gamma * config.t as f64).ceil() as usize;
        // Both halves of a bucket that just overflowed must be large enough.
        if max_size.div_ceil(2) < min_size {
            return Err(ConfigError::invalid(
                "c",
                format!("c * t = {max_size} leaves no room above gamma * t = {min_size} after a split"),
            ));
        }
        Ok(YFastTrie {
            width,
            config,
            max_size,
            min_size,
            buckets: Buckets::new(config.order, max_size + 1),
            lss: Lss::new(width.bits()),
            len: 0,
        })
    }

    /// Builds a trie from explicit buckets `(rep, rep_dead, keys)` in
    /// ascending order; keys below the first representative go to the −∞
    /// bucket. Bucket sizes are not checked, so hand-made states such as
    /// small worked examples can be loaded.
    pub fn from_parts(
        width: Width,
        config: YFastConfig,
        minus_infinity: &[u64],
        parts: &[(u64, bool, &[u64])],
    ) -> Result<Self, ConfigError> {
        let mut trie = Self::new(width, config)?;
        let mut all: Vec<u64> = minus_infinity.to_vec();
        let mut last = MINUS_INF;
        for &(rep, dead, keys) in parts {
            let mut sorted = keys.to_vec();
            sorted.sort_unstable();
            if dead == sorted.contains(&rep) || sorted.first().is_some_and(|&k| k < rep) {
                return Err(ConfigError::invalid("parts", format!("bucket with representative {rep} is inconsistent")));
            }
            all.extend_from_slice(&sorted);
            let id = trie.buckets.link_after(last, rep, sorted);
            trie.buckets.get_mut(id).rep_dead = dead;
            trie.lss.insert(id, &trie.buckets);
            last = id;
        }
        trie.buckets.get_mut(MINUS_INF).keys = minus_infinity.to_vec();
        if trie.buckets.order() == BucketOrder::Sorted {
            trie.buckets.get_mut(MINUS_INF).keys.sort_unstable();
        }
        if all.windows(2).any(|p| p[0] >= p[1]) || all.last().is_some_and(|&k| !width.contains(k)) {
            return Err(ConfigError::invalid("parts", "keys must ascend across buckets and fit the width"));
        }
        trie.len = all.len();
        trie.validate().map_err(|e| ConfigError::invalid("parts", e))?;
        Ok(trie)
    }

    pub fn config(&self) -> YFastConfig {
        self.config
    }

    pub fn l_top(&self) -> u32 {
        self.lss.l_top()
    }

    pub fn l_bot(&self) -> u32 {
        self.lss.l_bot()
    }

    /// Number of buckets, including the −∞ bucket.
    pub fn bucket_count(&self) -> usize {
        self.lss.reps() + 1
    }

    fn view(&self, id: u32) -> BucketView {
        let b = self.buckets.get(id);
        let mut keys = b.keys.clone();
        keys.sort_unstable();
        BucketView {
            rep: (id != MINUS_INF).then_some(b.rep),
            rep_dead: b.rep_dead,
            keys,
        }
    }

    /// All buckets in key order, starting with the −∞ bucket.
    pub fn buckets(&self) -> Vec<BucketView> {
        self.buckets.ids().map(|id| self.view(id)).collect()
    }

    /// The bucket `x` belongs to: the one with the largest representative
    /// `<= x`, or the −∞ bucket.
    pub fn locate(&self, x: u64) -> BucketView {
        self.view(self.lss.locate(x, &self.buckets))
    }

    fn split(&mut self, id: u32) {
        let upper = self.buckets.split_upper(id);
        let rep = upper[0];
        let new = self.buckets.link_after(id, rep, upper);
        self.lss.insert(new, &self.buckets);
    }

    /// Dissolves bucket `id` into its predecessor in the list.
    fn dissolve(&mut self, id: u32) -> u32 {
        let prev = self.buckets.prev(id);
        self.lss.remove(id, &self.buckets);
        let keys = self.buckets.unlink(id);
        // Every key of the dissolved bucket exceeds the survivor's keys, so
        // appending keeps sorted buckets sorted.
        self.buckets.get_mut(prev).keys.extend_from_slice(&keys);
        prev
    }

    fn merge(&mut self, id: u32) {
        let next = self.buckets.next(id);
        let survivor = if next != NIL {
            self.dissolve(next)
        } else {
            self.dissolve(id)
        };
        if self.buckets.get(survivor).keys.len() > self.max_size {
            self.split(survivor);
        }
    }

    /// Full structural audit against a from-scratch computation.
    pub fn validate(&self) -> Result<(), String> {
        let mut prev_max: Option<u64> = None;
        let mut total = 0;
        let mut prev_id = NIL;
        for id in self.buckets.ids() {
            let b = self.buckets.get(id);
            if b.prev != prev_id {
                return Err(format!("bucket {id} has a broken back link"));
            }
            prev_id = id;
            total += b.keys.len();
            let mut keys = b.keys.clone();
            keys.sort_unstable();
            if self.config.order == BucketOrder::Sorted && keys != b.keys {
                return Err(format!("bucket {id} is not sorted"));
            }
            if keys.windows(2).any(|p| p[0] == p[1]) {
                return Err(format!("bucket {id} holds duplicates"));
            }
            if id != MINUS_INF {
                if prev_max.is_some_and(|m| m >= b.rep) {
                    return Err(format!("representative {} overlaps the previous bucket", b.rep));
                }
                if keys.first().is_some_and(|&k| k < b.rep) {
                    return Err(format!("bucket {} holds a key below its representative", b.rep));
                }
                if b.rep_dead == keys.binary_search(&b.rep).is_ok() {
                    return Err(format!("representative {} has a wrong dead flag", b.rep));
                }
            }
            if let (Some(&first), Some(m)) = (keys.first(), prev_max) {
                if first <= m {
                    return Err(format!("bucket {id} overlaps its predecessor"));
                }
            }
            if let Some(&last) = keys.last() {
                prev_max = Some(last);
            }
        }
        if total != self.len {
            return Err(format!("{total} keys in buckets, len {}", self.len));
        }
        self.lss.audit(&self.buckets)
    }

    /// Checks the bucket size bounds, which hand-built states may violate.
    pub fn check_sizes(&self) -> Result<(), String> {
        for id in self.buckets.ids() {
            let n = self.buckets.get(id).keys.len();
            if n > self.max_size || (id != MINUS_INF && n < self.min_size) {
                return Err(format!("bucket {id} has {n} keys outside [{}, {}]", self.min_size, self.max_size));
            }
        }
        Ok(())
    }
}

impl PredecessorSet for YFastTrie {
    fn insert(&mut self, x: u64) -> bool {
        debug_assert!(self.width.contains(x));
        let id = self.lss.locate(x, &self.buckets);
        if !self.buckets.insert_key(id, x) {
            return false;
        }
        self.len += 1;
        let b = self.buckets.get_mut(id);
        if id != MINUS_INF && b.rep == x {
            b.rep_dead = false;
        }
        if b.keys.len() > self.max_size {
            self.split(id);
        }
        true
    }

    fn remove(&mut self, x: u64) -> bool {
        let id = self.lss.locate(x, &self.buckets);
        if !self.buckets.remove_key(id, x) {
            return false;
        }
        self.len -= 1;
        if id == MINUS_INF {
            return true;
        }
        let b = self.buckets.get_mut(id);
        if b.rep == x {
            b.rep_dead = true;
        }
        if b.keys.len() < self.min_size {
            self.merge(id);
        }
        true
    }

    fn predecessor(&self, x: u64) -> Option<u64> {
        let mut id = self.lss.locate(x, &self.buckets);
        if let Some(p) = self.buckets.local_pred(id, x) {
            return Some(p);
        }
        // x is below every key of its bucket; only the −∞ bucket can be
        // empty, and it has no predecessor.
        id = self.buckets.prev(id);
        if id == NIL {
            None
        } else {
            self.buckets.max_key(id)
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn width(&self) -> Width {
        self.width
    }

    fn to_sorted_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len);
        for id in self.buckets.ids() {
            let start = out.len();
            out.extend_from_slice(&self.buckets.get(id).keys);
            out[start..].sort_unstable();
        }
        out
    }

    fn heap_bytes(&self) -> usize {
        self.buckets.heap_bytes() + self.lss.heap_bytes()
    }
}

#[cfg(test)]
mod tests;
