//! The predecessor-set contract shared by every structure, key widths, and
//! the sorted-array reference set used for differential testing.

use std::fmt;

use thiserror::Error;

/// Key width in bits. Keys always live in a `u64`; the width bounds the
/// universe `[0, 2^w)`. The experiments use 32, 40 and 64 bits; any width
/// from 1 to 64 is accepted so small universes can be checked exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Width(u8);

impl Width {
    pub const W32: Width = Width(32);
    pub const W40: Width = Width(40);
    pub const W64: Width = Width(64);
    /// The widths used by the benchmarks.
    pub const ALL: [Width; 3] = [Width::W32, Width::W40, Width::W64];

    /// Any width in `1..=64`.
    pub const fn new(bits: u32) -> Option<Width> {
        if bits >= 1 && bits <= 64 {
            Some(Width(bits as u8))
        } else {
            None
        }
    }

    pub const fn bits(self) -> u32 {
        self.0 as u32
    }

    /// Largest key of the universe.
    pub const fn max_key(self) -> u64 {
        u64::MAX >> (64 - self.0 as u32)
    }

    pub const fn contains(self, key: u64) -> bool {
        key <= self.max_key()
    }

    /// One of the benchmark widths.
    pub fn from_bits(bits: u32) -> Option<Width> {
        Width::ALL.into_iter().find(|w| w.bits() == bits)
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

/// Rejected construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{structure} does not support {width}-bit keys")]
    UnsupportedWidth { structure: &'static str, width: Width },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl ConfigError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// A dynamic set of keys from `[0, 2^w)` answering predecessor queries.
///
/// Insert and remove follow set semantics: they report whether the set
/// changed. Keys outside the universe are a caller error.
pub trait PredecessorSet {
    /// Adds `key`; returns `false` if it was already present.
    fn insert(&mut self, key: u64) -> bool;

    /// Removes `key`; returns `false` if it was absent.
    fn remove(&mut self, key: u64) -> bool;

    /// Largest element `<= key`, or `None` when every element exceeds `key`.
    fn predecessor(&self, key: u64) -> Option<u64>;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn width(&self) -> Width;

    /// All elements in ascending order.
    fn to_sorted_vec(&self) -> Vec<u64>;

    /// Heap bytes owned by the structure, estimated from container
    /// capacities. The benchmark harness measures allocations directly; this
    /// is the structure's own account.
    fn heap_bytes(&self) -> usize;
}

impl<S: PredecessorSet + ?Sized> PredecessorSet for Box<S> {
    fn insert(&mut self, key: u64) -> bool {
        (**self).insert(key)
    }
    fn remove(&mut self, key: u64) -> bool {
        (**self).remove(key)
    }
    fn predecessor(&self, key: u64) -> Option<u64> {
        (**self).predecessor(key)
    }
    fn len(&self) -> usize {
        (**self).len()
    }
    fn width(&self) -> Width {
        (**self).width()
    }
    fn to_sorted_vec(&self) -> Vec<u64> {
        (**self).to_sorted_vec()
    }
    fn heap_bytes(&self) -> usize {
        (**self).heap_bytes()
    }
}

/// Reference implementation: a strictly ascending vector.
#[derive(Debug, Clone)]
pub struct OracleSet {
    width: Width,
    keys: Vec<u64>,
}

impl OracleSet {
    pub fn new(width: Width) -> Self {
        OracleSet {
            width,
            keys: Vec::new(),
        }
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }
}

impl PredecessorSet for OracleSet {
    fn insert(&mut self, key: u64) -> bool {
        debug_assert!(self.width.contains(key));
        match self.keys.binary_search(&key) {
            Ok(_) => false,
            Err(pos) => {
                self.keys.insert(pos, key);
                true
            }
        }
    }

    fn remove(&mut self, key: u64) -> bool {
        match self.keys.binary_search(&key) {
            Ok(pos) => {
                self.keys.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    fn predecessor(&self, key: u64) -> Option<u64> {
        let pos = self.keys.partition_point(|&k| k <= key);
        pos.checked_sub(1).map(|i| self.keys[i])
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn width(&self) -> Width {
        self.width
    }

    fn to_sorted_vec(&self) -> Vec<u64> {
        self.keys.clone()
    }

    fn heap_bytes(&self) -> usize {
        self.keys.capacity() * 8
    }
}
