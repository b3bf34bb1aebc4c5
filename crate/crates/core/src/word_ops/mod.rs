//! Word-level primitives shared by every structure in the crate.
//!
//! Each operation that can be backed by a CPU instruction (`pext`, `pdep`,
//! packed byte/word compares) has a portable twin in [`portable`]. The
//! dispatching functions at this level pick the hardware path when the CPU
//! supports it and the process has not opted out through
//! `PREDBENCH_NO_INTRINSICS=1` (or [`force_portable`]). Both paths are
//! required to be bit-identical.
//!
//! Bit positions are counted from the least significant bit (bit 0).

mod hw;
pub mod portable;
mod word256;

use std::sync::atomic::{AtomicU8, Ordering};

use thiserror::Error;

pub use word256::Word256;

/// Name of the environment variable that forces the portable fallbacks.
pub const NO_INTRINSICS_ENV: &str = "PREDBENCH_NO_INTRINSICS";

/// Errors for word operations whose preconditions are violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("most significant bit of zero is undefined")]
    ZeroWord,
    #[error("select rank {rank} out of range for a word with {ones} set bits")]
    SelectOutOfRange { rank: u32, ones: u32 },
}

/// Which implementation family the dispatching functions use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// CPU instructions where available, portable code otherwise.
    Native,
    /// Portable code only.
    Portable,
}

const UNSET: u8 = 0;
const NATIVE: u8 = 1;
const PORTABLE: u8 = 2;

static BACKEND: AtomicU8 = AtomicU8::new(UNSET);

/// Interprets the value of [`NO_INTRINSICS_ENV`].
pub fn backend_from_env(value: Option<&str>) -> Backend {
    match value.map(str::trim) {
        Some("1") | Some("true") | Some("yes") => Backend::Portable,
        _ => Backend::Native,
    }
}

/// Backend currently used by the dispatching functions.
#[inline]
pub fn backend() -> Backend {
    match BACKEND.load(Ordering::Relaxed) {
        NATIVE => Backend::Native,
        PORTABLE => Backend::Portable,
        _ => init_backend(),
    }
}

#[cold]
fn init_backend() -> Backend {
    let chosen = backend_from_env(std::env::var(NO_INTRINSICS_ENV).ok().as_deref());
    let code = match chosen {
        Backend::Native => NATIVE,
        Backend::Portable => PORTABLE,
    };
    // Lose the race gracefully if another thread initialised first.
    let _ = BACKEND.compare_exchange(UNSET, code, Ordering::Relaxed, Ordering::Relaxed);
    backend()
}

/// Overrides the backend for the whole process.
pub fn force_portable(portable: bool) {
    BACKEND.store(if portable { PORTABLE } else { NATIVE }, Ordering::Relaxed);
}

/// Reports which hardware paths the running CPU offers.
pub fn hardware_support() -> HardwareSupport {
    HardwareSupport {
        bmi2: hw::has_bmi2(),
        sse2: hw::has_sse2(),
        avx2: hw::has_avx2(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardwareSupport {
    pub bmi2: bool,
    pub sse2: bool,
    pub avx2: bool,
}

#[inline]
fn native() -> bool {
    backend() == Backend::Native
}

/// Position of the most significant set bit.
#[inline]
pub fn msb0(x: u64) -> Result<u32, WordError> {
    if x == 0 {
        Err(WordError::ZeroWord)
    } else {
        Ok(msb_nonzero(x))
    }
}

/// [`msb0`] for callers that already know `x != 0`.
#[inline]
pub(crate) fn msb_nonzero(x: u64) -> u32 {
    debug_assert!(x != 0);
    63 - x.leading_zeros()
}

/// Number of trailing zero bits, 64 for zero.
#[inline]
pub fn tzcnt(x: u64) -> u32 {
    x.trailing_zeros()
}

/// Length of the run of one bits starting at bit 0.
#[inline]
pub fn count_trailing_ones(x: u64) -> u32 {
    (!x).trailing_zeros()
}

/// Position of the `rank`-th set bit (1-based), counted from bit 0.
#[inline]
pub fn select1(x: u64, rank: u32) -> Result<u32, WordError> {
    let ones = x.count_ones();
    if rank == 0 || rank > ones {
        return Err(WordError::SelectOutOfRange { rank, ones });
    }
    Ok(select1_unchecked(x, rank))
}

#[inline]
pub(crate) fn select1_unchecked(x: u64, rank: u32) -> u32 {
    if native() && hw::has_bmi2() {
        hw::select1(x, rank)
    } else {
        portable::select1(x, rank)
    }
}

/// Parallel bits extract: the bits of `x` at the set positions of `mask`,
/// packed toward bit 0 in order.
#[inline]
pub fn extract_bits(x: u64, mask: u64) -> u64 {
    if native() && hw::has_bmi2() {
        hw::extract_bits(x, mask)
    } else {
        portable::extract_bits(x, mask)
    }
}

/// Parallel bits deposit, the inverse of [`extract_bits`].
#[inline]
pub fn deposit_bits(x: u64, mask: u64) -> u64 {
    if native() && hw::has_bmi2() {
        hw::deposit_bits(x, mask)
    } else {
        portable::deposit_bits(x, mask)
    }
}

/// Lane `i` of `lanes` holds the bits `8i..8i+8`.
pub const BYTE_LANES: u64 = 0x0101_0101_0101_0101;

/// Copies an 8-bit value into every byte lane.
#[inline]
pub fn broadcast8(y: u8) -> u64 {
    u64::from(y).wrapping_mul(BYTE_LANES)
}

/// Number of byte lanes of `lanes` that are `<= y`, i.e. the index of the
/// first lane greater than `y`. The lanes must be non-decreasing.
#[inline]
pub fn packed_rank(lanes: u64, y: u8) -> usize {
    if native() && hw::has_sse2() {
        hw::packed_rank(lanes, y)
    } else {
        portable::packed_rank(lanes, y)
    }
}

/// As [`packed_rank`] over the sixteen 16-bit lanes of a 256-bit word.
#[inline]
pub fn packed_rank_wide(lanes: &Word256, y: u16) -> usize {
    if native() && hw::has_avx2() {
        hw::packed_rank_wide(lanes, y)
    } else {
        portable::packed_rank_wide(lanes, y)
    }
}

/// Hardware implementations, exposed for equivalence testing. Each returns
/// `None` when the running CPU lacks the instruction.
pub mod native {
    use super::{hw, Word256};

    pub fn extract_bits(x: u64, mask: u64) -> Option<u64> {
        hw::has_bmi2().then(|| hw::extract_bits(x, mask))
    }

    pub fn deposit_bits(x: u64, mask: u64) -> Option<u64> {
        hw::has_bmi2().then(|| hw::deposit_bits(x, mask))
    }

    pub fn select1(x: u64, rank: u32) -> Option<u32> {
        (hw::has_bmi2() && rank >= 1 && rank <= x.count_ones()).then(|| hw::select1(x, rank))
    }

    pub fn packed_rank(lanes: u64, y: u8) -> Option<usize> {
        hw::has_sse2().then(|| hw::packed_rank(lanes, y))
    }

    pub fn packed_rank_wide(lanes: &Word256, y: u16) -> Option<usize> {
        hw::has_avx2().then(|| hw::packed_rank_wide(lanes, y))
    }

    pub fn msb0(x: u64) -> Option<u32> {
        (x != 0).then(|| 63 - x.leading_zeros())
    }

    pub fn tzcnt(x: u64) -> u32 {
        x.trailing_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_examples() {
        assert_eq!(msb0(1), Ok(0));
        assert_eq!(msb0(6), Ok(2));
        assert_eq!(msb0(1 << 40), Ok(40));
        assert_eq!(msb0(0), Err(WordError::ZeroWord));
    }

    #[test]
    fn tzcnt_examples() {
        assert_eq!(tzcnt(0), 64);
        assert_eq!(tzcnt(8), 3);
        assert_eq!(tzcnt(25), 0);
    }

    #[test]
    fn trailing_ones_examples() {
        assert_eq!(count_trailing_ones(0), 0);
        assert_eq!(count_trailing_ones(0b0111), 3);
        assert_eq!(count_trailing_ones(u64::MAX), 64);
    }

    #[test]
    fn select_examples() {
        assert_eq!(select1(1, 1), Ok(0));
        assert_eq!(select1(0b11001, 2), Ok(3));
        assert_eq!(select1(0b11001, 3), Ok(4));
        assert_eq!(
            select1(0b11001, 4),
            Err(WordError::SelectOutOfRange { rank: 4, ones: 3 })
        );
        assert!(select1(0b11001, 0).is_err());
    }

    #[test]
    fn extract_examples() {
        assert_eq!(extract_bits(0b11011, 0b11001), 0b111);
        assert_eq!(extract_bits(0b01100, 0b11001), 0b010);
        assert_eq!(extract_bits(0xdead_beef, 0), 0);
        assert_eq!(deposit_bits(0b111, 0b11001), 0b11001);
    }

    fn lanes(bytes: [u8; 8]) -> u64 {
        u64::from_le_bytes(bytes)
    }

    #[test]
    fn packed_rank_examples() {
        assert_eq!(packed_rank(lanes([0, 1, 2, 7, 9, 11, 200, 255]), 5), 3);
        assert_eq!(packed_rank(lanes([3, 4, 5, 6, 7, 8, 9, 10]), 0), 0);
        assert_eq!(packed_rank(0, 255), 8);
        assert_eq!(packed_rank(u64::MAX, 254), 0);
    }

    #[test]
    fn packed_rank_wide_examples() {
        let mut w = Word256::ZERO;
        for i in 0..16 {
            w.set_lane16(i, i as u16);
        }
        assert_eq!(packed_rank_wide(&w, 7), 8);
        let mut high = Word256::ZERO;
        for i in 0..16 {
            high.set_lane16(i, 100 + i as u16);
        }
        assert_eq!(packed_rank_wide(&high, 3), 0);
        assert_eq!(packed_rank_wide(&w, u16::MAX), 16);
    }

    #[test]
    fn env_parsing() {
        assert_eq!(backend_from_env(Some("1")), Backend::Portable);
        assert_eq!(backend_from_env(Some("0")), Backend::Native);
        assert_eq!(backend_from_env(None), Backend::Native);
    }
}
