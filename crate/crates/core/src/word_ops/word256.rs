use std::cmp::Ordering;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, Not, Shl, Shr};

/// A 256-bit word simulated with four 64-bit limbs, least significant limb
/// first. Only the operations dynamic fusion nodes need are provided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word256([u64; 4]);

impl Word256 {
    pub const ZERO: Self = Word256([0; 4]);
    pub const ONES: Self = Word256([u64::MAX; 4]);

    pub const fn from_limbs(limbs: [u64; 4]) -> Self {
        Word256(limbs)
    }

    pub const fn from_u64(x: u64) -> Self {
        Word256([x, 0, 0, 0])
    }

    #[inline]
    pub fn limbs(&self) -> &[u64; 4] {
        &self.0
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Copies `y` into all sixteen 16-bit lanes.
    #[inline]
    pub fn broadcast16(y: u16) -> Self {
        Word256([u64::from(y) * 0x0001_0001_0001_0001; 4])
    }

    #[inline]
    pub fn lane16(&self, i: usize) -> u16 {
        (self.0[i / 4] >> (16 * (i % 4))) as u16
    }

    #[inline]
    pub fn set_lane16(&mut self, i: usize, v: u16) {
        let shift = 16 * (i % 4);
        let limb = &mut self.0[i / 4];
        *limb = (*limb & !(0xffff << shift)) | (u64::from(v) << shift);
    }

    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|l| l.count_ones()).sum()
    }
}

impl Ord for Word256 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Word256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! limbwise {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for Word256 {
            type Output = Word256;
            #[inline]
            fn $f(self, rhs: Word256) -> Word256 {
                Word256([
                    self.0[0] $op rhs.0[0],
                    self.0[1] $op rhs.0[1],
                    self.0[2] $op rhs.0[2],
                    self.0[3] $op rhs.0[3],
                ])
            }
        }
    };
}

limbwise!(BitAnd, bitand, &);
limbwise!(BitOr, bitor, |);
limbwise!(BitXor, bitxor, ^);

impl BitAndAssign for Word256 {
    fn bitand_assign(&mut self, rhs: Word256) {
        *self = *self & rhs;
    }
}

impl BitOrAssign for Word256 {
    fn bitor_assign(&mut self, rhs: Word256) {
        *self = *self | rhs;
    }
}

impl Not for Word256 {
    type Output = Word256;
    #[inline]
    fn not(self) -> Word256 {
        Word256(self.0.map(|l| !l))
    }
}

impl Shl<u32> for Word256 {
    type Output = Word256;
    /// Shifts toward the most significant end; shifts of 256 or more yield zero.
    fn shl(self, s: u32) -> Word256 {
        if s >= 256 {
            return Word256::ZERO;
        }
        let limbs = (s / 64) as usize;
        let bits = s % 64;
        let mut out = [0u64; 4];
        for i in (limbs..4).rev() {
            let src = i - limbs;
            out[i] = self.0[src] << bits;
            if bits > 0 && src > 0 {
                out[i] |= self.0[src - 1] >> (64 - bits);
            }
        }
        Word256(out)
    }
}

impl Shr<u32> for Word256 {
    type Output = Word256;
    fn shr(self, s: u32) -> Word256 {
        if s >= 256 {
            return Word256::ZERO;
        }
        let limbs = (s / 64) as usize;
        let bits = s % 64;
        let mut out = [0u64; 4];
        for i in 0..4 - limbs {
            let src = i + limbs;
            out[i] = self.0[src] >> bits;
            if bits > 0 && src + 1 < 4 {
                out[i] |= self.0[src + 1] << (64 - bits);
            }
        }
        Word256(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(w: &Word256) -> BigUint {
        let mut bytes = Vec::with_capacity(32);
        for l in w.limbs() {
            bytes.extend_from_slice(&l.to_le_bytes());
        }
        BigUint::from_bytes_le(&bytes)
    }

    fn mask256() -> BigUint {
        (BigUint::from(1u8) << 256u32) - 1u8
    }

    #[test]
    fn agrees_with_big_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(256);
        for _ in 0..10_000 {
            let a = Word256::from_limbs(rng.gen());
            let b = Word256::from_limbs(rng.gen());
            let s = rng.gen_range(0..300u32);
            let (ba, bb) = (big(&a), big(&b));
            assert_eq!(big(&(a & b)), &ba & &bb);
            assert_eq!(big(&(a | b)), &ba | &bb);
            assert_eq!(big(&(a ^ b)), &ba ^ &bb);
            assert_eq!(big(&!a), &ba ^ mask256());
            assert_eq!(big(&(a << s)), (&ba << s) & mask256());
            assert_eq!(big(&(a >> s)), &ba >> s);
            assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }
    }

    #[test]
    fn lanes_round_trip() {
        let mut w = Word256::ZERO;
        for i in 0..16 {
            w.set_lane16(i, (i as u16) * 1000 + 7);
        }
        for i in 0..16 {
            assert_eq!(w.lane16(i), (i as u16) * 1000 + 7);
        }
        assert_eq!(Word256::broadcast16(0xabcd).lane16(13), 0xabcd);
    }
}
