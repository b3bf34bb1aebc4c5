//! Portable fallbacks. Every function here must agree bit-for-bit with its
//! hardware counterpart.

use super::Word256;

const HIGH8: u64 = 0x8080_8080_8080_8080;
const HIGH16: u64 = 0x8000_8000_8000_8000;
const LANES16: u64 = 0x0001_0001_0001_0001;

/// Most significant set bit by halving search; `None` for zero.
pub fn msb0(mut x: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut pos = 0;
    for shift in [32, 16, 8, 4, 2, 1] {
        if x >> shift != 0 {
            x >>= shift;
            pos += shift;
        }
    }
    Some(pos)
}

pub fn tzcnt(x: u64) -> u32 {
    msb0(x & x.wrapping_neg()).unwrap_or(64)
}

pub fn count_trailing_ones(x: u64) -> u32 {
    tzcnt(!x)
}

/// Byte-skipping select: whole bytes are consumed by population count,
/// then the target byte is scanned bit by bit. `rank` is 1-based and must
/// not exceed the population count.
pub fn select1(x: u64, mut rank: u32) -> u32 {
    debug_assert!(rank >= 1 && rank <= x.count_ones());
    let mut base = 0;
    let mut rest = x;
    loop {
        let byte = (rest & 0xff) as u32;
        let ones = byte.count_ones();
        if rank > ones {
            rank -= ones;
            rest >>= 8;
            base += 8;
            continue;
        }
        let mut b = byte;
        for i in 0..8 {
            if b & 1 == 1 {
                rank -= 1;
                if rank == 0 {
                    return base + i;
                }
            }
            b >>= 1;
        }
        unreachable!("rank exceeds population count");
    }
}

pub fn extract_bits(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if x & bit != 0 {
            out |= 1 << k;
        }
        k += 1;
        m &= m - 1;
    }
    out
}

pub fn deposit_bits(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if x >> k & 1 == 1 {
            out |= bit;
        }
        k += 1;
        m &= m - 1;
    }
    out
}

/// Per-lane unsigned `a >= b` with lanes of width `8 * bytes`; returns the
/// lane high bits where the relation holds. `high` selects the lane MSBs.
#[inline]
fn lanes_ge(a: u64, b: u64, high: u64) -> u64 {
    // Compare the low lane bits with a guard bit that absorbs the borrow.
    let low = (a | high).wrapping_sub(b & !high);
    ((a & !b) | (!(a ^ b) & low)) & high
}

/// Byte lanes greater than `y`, flagged at each lane's high bit.
#[inline]
pub fn lanes_gt8(lanes: u64, y: u8) -> u64 {
    !lanes_ge(super::broadcast8(y), lanes, HIGH8) & HIGH8
}

#[inline]
pub fn lanes_gt16(lanes: u64, y: u16) -> u64 {
    !lanes_ge(u64::from(y).wrapping_mul(LANES16), lanes, HIGH16) & HIGH16
}

pub fn packed_rank(lanes: u64, y: u8) -> usize {
    (lanes_gt8(lanes, y).trailing_zeros() / 8) as usize
}

pub fn packed_rank_wide(lanes: &Word256, y: u16) -> usize {
    for (i, &limb) in lanes.limbs().iter().enumerate() {
        let gt = lanes_gt16(limb, y);
        if gt != 0 {
            return 4 * i + (gt.trailing_zeros() / 16) as usize;
        }
    }
    16
}
