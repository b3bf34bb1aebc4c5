//! Hardware paths. Callers check the `has_*` predicates first.

use super::Word256;

#[cfg(target_arch = "x86_64")]
mod imp {
    use super::Word256;
    use std::arch::x86_64::*;

    #[inline]
    pub fn has_bmi2() -> bool {
        is_x86_feature_detected!("bmi2")
    }

    #[inline]
    pub fn has_sse2() -> bool {
        is_x86_feature_detected!("sse2")
    }

    #[inline]
    pub fn has_avx2() -> bool {
        is_x86_feature_detected!("avx2")
    }

    #[target_feature(enable = "bmi2")]
    unsafe fn pext(x: u64, mask: u64) -> u64 {
        _pext_u64(x, mask)
    }

    #[target_feature(enable = "bmi2")]
    unsafe fn pdep(x: u64, mask: u64) -> u64 {
        _pdep_u64(x, mask)
    }

    #[inline]
    pub fn extract_bits(x: u64, mask: u64) -> u64 {
        debug_assert!(has_bmi2());
        // SAFETY: only reached after `has_bmi2` returned true.
        unsafe { pext(x, mask) }
    }

    #[inline]
    pub fn deposit_bits(x: u64, mask: u64) -> u64 {
        debug_assert!(has_bmi2());
        // SAFETY: only reached after `has_bmi2` returned true.
        unsafe { pdep(x, mask) }
    }

    #[inline]
    pub fn select1(x: u64, rank: u32) -> u32 {
        deposit_bits(1 << (rank - 1), x).trailing_zeros()
    }

    #[inline]
    pub fn packed_rank(lanes: u64, y: u8) -> usize {
        // pcmpgtb compares signed bytes; flipping the sign bit of both
        // operands turns it into an unsigned compare.
        // SAFETY: SSE2 is part of the x86_64 baseline.
        let mask = unsafe {
            let a = _mm_cvtsi64_si128((lanes ^ 0x8080_8080_8080_8080) as i64);
            let b = _mm_set1_epi8((y ^ 0x80) as i8);
            _mm_movemask_epi8(_mm_cmpgt_epi8(a, b)) as u32
        };
        ((mask & 0xff) | 0x100).trailing_zeros() as usize
    }

    #[target_feature(enable = "avx2")]
    unsafe fn cmpgt16_mask(lanes: &Word256, y: u16) -> u32 {
        let bias = _mm256_set1_epi16(i16::MIN);
        let a = _mm256_loadu_si256(lanes.limbs().as_ptr() as *const __m256i);
        let a = _mm256_xor_si256(a, bias);
        let b = _mm256_set1_epi16((y ^ 0x8000) as i16);
        _mm256_movemask_epi8(_mm256_cmpgt_epi16(a, b)) as u32
    }

    #[inline]
    pub fn packed_rank_wide(lanes: &Word256, y: u16) -> usize {
        debug_assert!(has_avx2());
        // SAFETY: only reached after `has_avx2` returned true.
        let mask = unsafe { cmpgt16_mask(lanes, y) };
        if mask == 0 {
            16
        } else {
            (mask.trailing_zeros() / 2) as usize
        }
    }
}

#[cfg(not(target_arch = "x86_64"))]
mod imp {
    use super::Word256;
    use crate::word_ops::portable;

    pub fn has_bmi2() -> bool {
        false
    }
    pub fn has_sse2() -> bool {
        false
    }
    pub fn has_avx2() -> bool {
        false
    }
    pub fn extract_bits(x: u64, mask: u64) -> u64 {
        portable::extract_bits(x, mask)
    }
    pub fn deposit_bits(x: u64, mask: u64) -> u64 {
        portable::deposit_bits(x, mask)
    }
    pub fn select1(x: u64, rank: u32) -> u32 {
        portable::select1(x, rank)
    }
    pub fn packed_rank(lanes: u64, y: u8) -> usize {
        portable::packed_rank(lanes, y)
    }
    pub fn packed_rank_wide(lanes: &Word256, y: u16) -> usize {
        portable::packed_rank_wide(lanes, y)
    }
}

pub use imp::*;
