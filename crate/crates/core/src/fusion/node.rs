use thiserror::Error;

use super::rows::{insert_column, insert_lane, remove_column, remove_lane, RowWord};
use crate::word_ops::{self, msb_nonzero, Word256};

/// How a node ranks a compressed query among its completed rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RankSearch {
    /// One packed greater-than compare over all lanes.
    #[default]
    Packed,
    /// Row-by-row scan.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("keys must be strictly ascending")]
    NotAscending,
    #[error("{given} keys exceed the node capacity of {capacity}")]
    TooManyKeys { given: usize, capacity: usize },
    #[error("node is full")]
    Full,
}

/// A dynamic fusion node over at most k keys.
///
/// The keys are kept sorted. `mask` marks the distinguishing bit positions,
/// those at which the binary trie of the keys branches. Row `i` of the
/// compressed-key matrix describes `keys[i]` at the distinguishing positions,
/// lowest position in column 0. A column is concrete for a row when the
/// trie node on that key's path at that level is a branching node, and a
/// don't care otherwise. `free` flags don't cares; `branch` holds the
/// concrete bits and is zero wherever `free` is set.
///
/// Lanes past the last key are padding: `branch` lanes are all ones and
/// `free` lanes zero, so they always compare greater than any query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionNode<W: RowWord> {
    keys: W::Keys,
    len: u8,
    mask: u64,
    branch: W,
    free: W,
    search: RankSearch,
}

/// Node with k = 8, rows packed in one 64-bit word.
pub type FusionNode8 = FusionNode<u64>;
/// Node with k = 16, rows packed in a simulated 256-bit word.
pub type FusionNode16 = FusionNode<Word256>;

#[inline]
fn low_bits(count: u32) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

impl<W: RowWord> FusionNode<W> {
    pub const CAPACITY: usize = W::LANES;

    pub fn new(search: RankSearch) -> Self {
        FusionNode {
            keys: W::Keys::default(),
            len: 0,
            mask: 0,
            branch: W::ONES,
            free: W::ZERO,
            search,
        }
    }

    /// Builds the canonical state for an ascending key set from scratch.
    pub fn rebuild(keys: &[u64], search: RankSearch) -> Result<Self, FusionError> {
        if keys.len() > W::LANES {
            return Err(FusionError::TooManyKeys {
                given: keys.len(),
                capacity: W::LANES,
            });
        }
        if keys.windows(2).any(|p| p[0] >= p[1]) {
            return Err(FusionError::NotAscending);
        }
        let mut node = Self::new(search);
        node.keys.as_mut()[..keys.len()].copy_from_slice(keys);
        node.len = keys.len() as u8;
        node.mask = keys
            .windows(2)
            .fold(0, |m, p| m | 1 << msb_nonzero(p[0] ^ p[1]));
        let mut branch = W::ZERO;
        let mut free = W::ZERO;
        for (i, &key) in keys.iter().enumerate() {
            // A position is concrete for `key` iff some other key first
            // differs from it there.
            let concrete = keys
                .iter()
                .filter(|&&other| other != key)
                .fold(0, |c, &other| c | 1 << msb_nonzero(key ^ other));
            free.set_lane(i, word_ops::extract_bits(!concrete, node.mask));
            branch.set_lane(i, word_ops::extract_bits(key & concrete, node.mask));
        }
        node.branch = branch;
        node.free = free;
        node.pad();
        Ok(node)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.len() == W::LANES
    }

    #[inline]
    pub fn keys(&self) -> &[u64] {
        &self.keys.as_ref()[..self.len()]
    }

    #[inline]
    pub fn key(&self, i: usize) -> u64 {
        self.keys()[i]
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn branch_rows(&self) -> W {
        self.branch
    }

    pub fn free_rows(&self) -> W {
        self.free
    }

    pub fn search(&self) -> RankSearch {
        self.search
    }

    /// Concrete bits of row `i`.
    pub fn branch_row(&self, i: usize) -> u64 {
        self.branch.lane(i)
    }

    /// Don't-care flags of row `i`.
    pub fn free_row(&self, i: usize) -> u64 {
        self.free.lane(i)
    }

    /// Bits of `x` at the distinguishing positions.
    #[inline]
    pub fn compress(&self, x: u64) -> u64 {
        word_ops::extract_bits(x, self.mask)
    }

    /// Rows completed with the compressed query at their don't-care columns.
    #[inline]
    fn completed(&self, xh: u64) -> W {
        self.branch | (self.free & W::broadcast(xh))
    }

    /// Number of rows whose completion with `x`'s compressed bits is at most
    /// the compressed `x`. For a non-empty node this is the 1-based index of
    /// the unique row that `x` matches, a key sharing the longest common
    /// prefix with `x`.
    #[inline]
    pub fn match_rank(&self, x: u64) -> usize {
        if self.len == 0 {
            return 0;
        }
        let xh = self.compress(x);
        let rows = self.completed(xh);
        match self.search {
            RankSearch::Packed => rows.packed_rank(xh),
            RankSearch::Linear => (0..self.len())
                .take_while(|&i| rows.lane(i) <= xh)
                .count(),
        }
    }

    /// Number of keys `<= x`; `keys()[r - 1]` is the predecessor for a
    /// result `r > 0`.
    #[inline]
    pub fn rank(&self, x: u64) -> usize {
        self.rank_with(x, 1)
    }

    /// [`rank`](Self::rank) where the second match clears or sets the low
    /// `p + extra` bits of `x`, `p` being the highest bit at which `x`
    /// differs from the matched key. Both `extra = 0` and `extra = 1` are
    /// correct.
    #[doc(hidden)]
    pub fn rank_with(&self, x: u64, extra: u32) -> usize {
        if self.len == 0 {
            return 0;
        }
        let i = self.match_rank(x);
        debug_assert!(i >= 1);
        let y = self.key(i - 1);
        if y == x {
            return i;
        }
        let low = low_bits(msb_nonzero(x ^ y) + extra);
        if x < y {
            self.match_rank(x & !low) - 1
        } else {
            self.match_rank(x | low)
        }
    }

    pub fn predecessor(&self, x: u64) -> Option<u64> {
        self.rank(x).checked_sub(1).map(|r| self.key(r))
    }

    pub fn contains(&self, x: u64) -> bool {
        self.predecessor(x) == Some(x)
    }

    fn strip_padding(&mut self) {
        let rows = W::rows_below(self.len());
        self.branch = self.branch & rows;
        self.free = self.free & rows;
    }

    fn pad(&mut self) {
        let rows = W::rows_below(self.len());
        self.branch = (self.branch & rows) | !rows;
        self.free = self.free & rows;
    }

    /// Inserts `x`; `Ok(false)` if present, `Err(Full)` if there is no room.
    pub fn insert(&mut self, x: u64) -> Result<bool, FusionError> {
        let r = self.rank(x);
        if r > 0 && self.key(r - 1) == x {
            return Ok(false);
        }
        if self.is_full() {
            return Err(FusionError::Full);
        }
        let n = self.len();
        if n == 0 {
            self.keys.as_mut()[0] = x;
            self.len = 1;
            self.branch = W::ZERO;
            self.free = W::ZERO;
            self.pad();
            return Ok(true);
        }

        // `x` leaves the existing trie at the deepest node on its path; that
        // node sits at position `p` and shares the longest prefix with the
        // nearer of the two neighbours.
        let left = r.checked_sub(1).map(|i| (i, msb_nonzero(x ^ self.key(i))));
        let right = (r < n).then(|| (r, msb_nonzero(x ^ self.key(r))));
        let (near, p) = match (left, right) {
            (Some(l), Some(rt)) => {
                if l.1 <= rt.1 {
                    l
                } else {
                    rt
                }
            }
            (Some(l), None) => l,
            (None, Some(rt)) => rt,
            (None, None) => unreachable!(),
        };
        // Rows below that node: keys agreeing with `x` above `p`.
        let keys = self.keys();
        let lo = keys[..r]
            .iter()
            .rposition(|&z| (z ^ x) >> p >> 1 != 0)
            .map_or(0, |i| i + 1);
        let hi = keys[r..]
            .iter()
            .position(|&z| (z ^ x) >> p >> 1 != 0)
            .map_or(n, |i| r + i);
        // All of them carry the bit opposite to `x` at `p`.
        let sibling_bit = (!x >> p) & 1;

        self.strip_padding();
        let c = (self.mask & low_bits(p)).count_ones();
        let subtree = W::rows_between(lo, hi) & W::column(c);
        if self.mask >> p & 1 == 1 {
            // Existing column: the node at `p` was unary, so these rows held
            // a don't care there.
            self.free = self.free & !subtree;
        } else {
            self.branch = insert_column(self.branch, c);
            self.free = insert_column(self.free, c);
            self.free = self.free | (W::rows_below(n) & W::column(c) & !subtree);
            self.mask |= 1 << p;
        }
        if sibling_bit == 1 {
            self.branch = self.branch | subtree;
        }

        // The new row shares the concrete columns of its neighbour above
        // `p`, is concrete at `p`, and don't care below.
        let above = !low_bits(c + 1);
        let free_row = (self.free.lane(near) & above) | low_bits(c);
        let branch_row = self.compress(x) & !free_row;
        self.branch = insert_lane(self.branch, r);
        self.free = insert_lane(self.free, r);
        self.branch.set_lane(r, branch_row);
        self.free.set_lane(r, free_row);
        let keys = self.keys.as_mut();
        keys.copy_within(r..n, r + 1);
        keys[r] = x;
        self.len += 1;
        self.pad();
        debug_assert_eq!(*self, Self::rebuild(self.keys(), self.search).unwrap());
        Ok(true)
    }

    /// Removes `x`; returns `false` if absent.
    pub fn remove(&mut self, x: u64) -> bool {
        let r = self.rank(x);
        if r == 0 || self.key(r - 1) != x {
            return false;
        }
        let i = r - 1;
        let n = self.len();
        if n == 1 {
            *self = Self::new(self.search);
            return true;
        }
        // Step 1: the lowest concrete column of row i is the level where x
        // branches off.
        let h = word_ops::count_trailing_ones(self.free.lane(i)) + 1;
        let c = h - 1;
        let j = word_ops::select1_unchecked(self.mask, h);

        // Step 2: drop row i.
        self.strip_padding();
        self.branch = remove_lane(self.branch, i);
        self.free = remove_lane(self.free, i);
        let keys = self.keys.as_mut();
        keys.copy_within(i + 1..n, i);
        keys[n - 1] = 0;
        self.len -= 1;
        let n = n - 1;

        // Step 3: is column c still split anywhere?
        let concrete = W::rows_below(n) & W::column(c) & !self.free;
        let ones = self.branch & concrete;
        let uniform = ones == W::ZERO || ones == concrete;
        if uniform {
            // Step 4: the position is no longer distinguishing.
            self.branch = remove_column(self.branch, c);
            self.free = remove_column(self.free, c);
            self.mask &= !(1 << j);
        } else {
            // Step 5: the former branching node on x's path became unary;
            // its remaining subtree turns column c into a don't care.
            let keys = self.keys();
            let lo = keys[..i]
                .iter()
                .rposition(|&z| (z ^ x) >> j >> 1 != 0)
                .map_or(0, |k| k + 1);
            let hi = keys[i..]
                .iter()
                .position(|&z| (z ^ x) >> j >> 1 != 0)
                .map_or(n, |k| i + k);
            let subtree = W::rows_between(lo, hi) & W::column(c);
            self.free = self.free | subtree;
            self.branch = self.branch & !subtree;
        }
        self.pad();
        debug_assert_eq!(*self, Self::rebuild(self.keys(), self.search).unwrap());
        true
    }

    /// Removes and returns the keys `at..`, rebuilding both halves.
    pub fn split_off(&mut self, at: usize) -> Self {
        let upper = Self::rebuild(&self.keys()[at..], self.search).expect("sorted subset");
        let lower = Self::rebuild(&self.keys()[..at], self.search).expect("sorted subset");
        *self = lower;
        upper
    }
}
