use std::fmt::Debug;
use std::ops::{BitAnd, BitOr, BitXor, Not, Shl, Shr};

use crate::word_ops::{self, Word256};

/// A word holding a k×k bit matrix, one row per lane, row 0 in the least
/// significant lane. Lane `i` bit `c` is column `c` of row `i`.
pub trait RowWord:
    Copy
    + Eq
    + Debug
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + Shl<u32, Output = Self>
    + Shr<u32, Output = Self>
{
    /// Number of rows (and lanes), the node capacity k.
    const LANES: usize;
    const LANE_BITS: u32;
    const ZERO: Self;
    const ONES: Self;
    /// Inline key storage for k keys.
    type Keys: Copy + Eq + Debug + Default + AsRef<[u64]> + AsMut<[u64]>;

    fn broadcast(v: u64) -> Self;
    fn lane(&self, i: usize) -> u64;
    fn set_lane(&mut self, i: usize, v: u64);
    /// Count of lanes `<= y`; lanes must be non-decreasing.
    fn packed_rank(&self, y: u64) -> usize;

    #[inline]
    fn lane_max() -> u64 {
        (1u64 << Self::LANE_BITS) - 1
    }

    /// Mask covering lanes `0..rows`.
    #[inline]
    fn rows_below(rows: usize) -> Self {
        if rows >= Self::LANES {
            Self::ONES
        } else {
            !(Self::ONES << (rows as u32 * Self::LANE_BITS))
        }
    }

    /// Mask covering lanes `lo..hi`.
    #[inline]
    fn rows_between(lo: usize, hi: usize) -> Self {
        Self::rows_below(hi) & !Self::rows_below(lo)
    }

    /// Column `c` in every lane.
    #[inline]
    fn column(c: u32) -> Self {
        Self::broadcast(1 << c)
    }

    /// Columns `0..c` in every lane.
    #[inline]
    fn columns_below(c: u32) -> Self {
        Self::broadcast((1u64 << c) - 1)
    }
}

impl RowWord for u64 {
    const LANES: usize = 8;
    const LANE_BITS: u32 = 8;
    const ZERO: Self = 0;
    const ONES: Self = u64::MAX;
    type Keys = [u64; 8];

    #[inline]
    fn broadcast(v: u64) -> Self {
        debug_assert!(v <= 0xff);
        word_ops::broadcast8(v as u8)
    }

    #[inline]
    fn lane(&self, i: usize) -> u64 {
        (self >> (8 * i)) & 0xff
    }

    #[inline]
    fn set_lane(&mut self, i: usize, v: u64) {
        let shift = 8 * i;
        *self = (*self & !(0xff << shift)) | ((v & 0xff) << shift);
    }

    #[inline]
    fn packed_rank(&self, y: u64) -> usize {
        word_ops::packed_rank(*self, y as u8)
    }
}

impl RowWord for Word256 {
    const LANES: usize = 16;
    const LANE_BITS: u32 = 16;
    const ZERO: Self = Word256::ZERO;
    const ONES: Self = Word256::ONES;
    type Keys = [u64; 16];

    #[inline]
    fn broadcast(v: u64) -> Self {
        debug_assert!(v <= 0xffff);
        Word256::broadcast16(v as u16)
    }

    #[inline]
    fn lane(&self, i: usize) -> u64 {
        u64::from(self.lane16(i))
    }

    #[inline]
    fn set_lane(&mut self, i: usize, v: u64) {
        self.set_lane16(i, v as u16);
    }

    #[inline]
    fn packed_rank(&self, y: u64) -> usize {
        word_ops::packed_rank_wide(self, y as u16)
    }
}

/// Inserts an empty lane at `row`, moving higher lanes up by one. The top
/// lane falls off.
#[inline]
pub(crate) fn insert_lane<W: RowWord>(w: W, row: usize) -> W {
    let below = W::rows_below(row);
    (w & below) | ((w & !below) << W::LANE_BITS)
}

/// Removes lane `row`, moving higher lanes down; the top lane becomes zero.
#[inline]
pub(crate) fn remove_lane<W: RowWord>(w: W, row: usize) -> W {
    let below = W::rows_below(row);
    (w & below) | ((w >> W::LANE_BITS) & !below)
}

/// Inserts a zero column at `c` in every lane. Bit `LANE_BITS - 1` of each
/// lane must be clear.
#[inline]
pub(crate) fn insert_column<W: RowWord>(w: W, c: u32) -> W {
    let low = W::columns_below(c);
    (w & low) | ((w & !low) << 1)
}

/// Removes column `c` from every lane, shifting higher columns down.
#[inline]
pub(crate) fn remove_column<W: RowWord>(w: W, c: u32) -> W {
    let low = W::columns_below(c);
    let upper = !low & !W::column(c);
    let in_lane = W::columns_below(W::LANE_BITS - 1);
    (w & low) | ((w & upper) >> 1 & in_lane)
}
