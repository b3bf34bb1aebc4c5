use crate::int_map::IntMap;

/// Which top level indexes the active buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TopKind {
    /// One entry per bucket number between the smallest and largest active
    /// bucket, each linking the rightmost active bucket at or before it.
    #[default]
    Array,
    /// A hash table over the active buckets only.
    Hash,
}

const NIL: u32 = u32::MAX;

/// Array top level. `entries[j - lo]` is meaningful for `j` in
/// `[i_min, i_max]`; the allocation may extend beyond that range and only
/// shrinks when the structure empties.
#[derive(Debug, Clone, Default)]
pub(crate) struct TopArray {
    entries: Vec<u32>,
    lo: u64,
    i_min: u64,
    i_max: u64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct TopHash {
    map: IntMap<u32>,
    i_min: u64,
    i_max: u64,
}

#[derive(Debug, Clone)]
pub(crate) enum Top {
    Array(TopArray),
    Hash(TopHash),
}

impl TopArray {
    #[inline]
    fn at(&self, j: u64) -> u32 {
        self.entries[(j - self.lo) as usize]
    }

    #[inline]
    fn set(&mut self, j: u64, id: u32) {
        let lo = self.lo;
        self.entries[(j - lo) as usize] = id;
    }

    fn locate(&self, i: u64) -> Option<u32> {
        if self.entries.is_empty() || i < self.i_min {
            return None;
        }
        Some(self.at(i.min(self.i_max)))
    }

    /// Makes room for bucket number `i`, growing geometrically.
    fn cover(&mut self, i: u64, last_bucket: u64) {
        let hi = self.lo + self.entries.len() as u64 - 1;
        let span = self.entries.len() as u64;
        if i < self.lo {
            let new_lo = i.saturating_sub(span);
            let mut grown = vec![NIL; (self.lo - new_lo) as usize];
            grown.reserve_exact(self.entries.len());
            grown.extend_from_slice(&self.entries);
            self.entries = grown;
            self.lo = new_lo;
        } else if i > hi {
            let new_hi = i.saturating_add(span).min(last_bucket);
            self.entries.resize((new_hi - self.lo + 1) as usize, NIL);
        }
    }

    fn activate(&mut self, i: u64, id: u32, last_bucket: u64) {
        if self.entries.is_empty() {
            self.entries = vec![id];
            self.lo = i;
            self.i_min = i;
            self.i_max = i;
            return;
        }
        self.cover(i, last_bucket);
        if i < self.i_min {
            for j in i..self.i_min {
                self.set(j, id);
            }
            self.i_min = i;
        } else if i > self.i_max {
            let last = self.at(self.i_max);
            for j in self.i_max + 1..i {
                self.set(j, last);
            }
            self.set(i, id);
            self.i_max = i;
        } else {
            let old = self.at(i);
            let mut j = i;
            while j <= self.i_max && self.at(j) == old {
                self.set(j, id);
                j += 1;
            }
        }
    }

    fn deactivate(&mut self, i: u64, id: u32, index_of: impl Fn(u32) -> u64) {
        if self.i_min == self.i_max {
            *self = TopArray::default();
            return;
        }
        if i == self.i_min {
            let mut j = i + 1;
            while self.at(j) == id {
                j += 1;
            }
            self.i_min = j;
        } else {
            let prev = self.at(i - 1);
            if i == self.i_max {
                self.i_max = index_of(prev);
            } else {
                let mut j = i;
                while j <= self.i_max && self.at(j) == id {
                    self.set(j, prev);
                    j += 1;
                }
            }
        }
    }

    /// Checks that every entry links the rightmost active bucket at or
    /// before it.
    fn audit(&self, active: &[(u64, u32)]) -> Result<(), String> {
        let Some((&(first, _), &(last, _))) = active.first().zip(active.last()) else {
            return if self.entries.is_empty() {
                Ok(())
            } else {
                Err("array top not released after emptying".into())
            };
        };
        if (self.i_min, self.i_max) != (first, last) {
            return Err(format!("bounds [{}, {}] but active range [{first}, {last}]", self.i_min, self.i_max));
        }
        let mut k = 0;
        for j in first..=last {
            while k + 1 < active.len() && active[k + 1].0 <= j {
                k += 1;
            }
            if self.at(j) != active[k].1 {
                return Err(format!("entry {j} links {} instead of {}", self.at(j), active[k].1));
            }
        }
        Ok(())
    }
}

impl TopHash {
    fn locate(&self, i: u64) -> Option<u32> {
        if self.map.is_empty() || i < self.i_min {
            return None;
        }
        let mut j = i.min(self.i_max);
        loop {
            if let Some(&id) = self.map.get(j) {
                return Some(id);
            }
            j -= 1;
        }
    }

    fn activate(&mut self, i: u64, id: u32) {
        if self.map.is_empty() {
            self.i_min = i;
            self.i_max = i;
        }
        self.i_min = self.i_min.min(i);
        self.i_max = self.i_max.max(i);
        self.map.insert(i, id);
    }

    fn deactivate(&mut self, i: u64) {
        self.map.remove(i);
        if self.map.is_empty() {
            return;
        }
        if i == self.i_min {
            self.i_min = (i + 1..).find(|&j| self.map.contains_key(j)).expect("non-empty");
        }
        if i == self.i_max {
            self.i_max = (0..i).rev().find(|&j| self.map.contains_key(j)).expect("non-empty");
        }
    }

    fn audit(&self, active: &[(u64, u32)]) -> Result<(), String> {
        if self.map.len() != active.len() {
            return Err(format!("hash top holds {} buckets, {} active", self.map.len(), active.len()));
        }
        for &(i, id) in active {
            if self.map.get(i) != Some(&id) {
                return Err(format!("bucket {i} missing from the hash top"));
            }
        }
        if let Some((&(first, _), &(last, _))) = active.first().zip(active.last()) {
            if (self.i_min, self.i_max) != (first, last) {
                return Err("stale hash top bounds".into());
            }
        }
        Ok(())
    }
}

impl Top {
    pub fn new(kind: TopKind) -> Self {
        match kind {
            TopKind::Array => Top::Array(TopArray::default()),
            TopKind::Hash => Top::Hash(TopHash::default()),
        }
    }

    /// Rightmost active bucket with number `<= i`.
    #[inline]
    pub fn locate(&self, i: u64) -> Option<u32> {
        match self {
            Top::Array(t) => t.locate(i),
            Top::Hash(t) => t.locate(i),
        }
    }

    pub fn activate(&mut self, i: u64, id: u32, last_bucket: u64) {
        match self {
            Top::Array(t) => t.activate(i, id, last_bucket),
            Top::Hash(t) => t.activate(i, id),
        }
    }

    pub fn deactivate(&mut self, i: u64, id: u32, index_of: impl Fn(u32) -> u64) {
        match self {
            Top::Array(t) => t.deactivate(i, id, index_of),
            Top::Hash(t) => t.deactivate(i),
        }
    }

    /// `active` lists (bucket number, id) pairs in ascending order.
    pub fn audit(&self, active: &[(u64, u32)]) -> Result<(), String> {
        match self {
            Top::Array(t) => t.audit(active),
            Top::Hash(t) => t.audit(active),
        }
    }

    pub fn heap_bytes(&self) -> usize {
        match self {
            Top::Array(t) => t.entries.capacity() * 4,
            Top::Hash(t) => t.map.heap_bytes(),
        }
    }
}
