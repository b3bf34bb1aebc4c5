//! Word-level primitives: bit extract/deposit, select and packed rank,
//! with the backend chosen at startup.
//!
//! cargo run --example word_ops
//! PREDBENCH_NO_INTRINSICS=1 cargo run --example word_ops

use dynpred::word_ops::{self, Word256};

fn main() {
    println!("backend: {:?}, cpu: {:?}", word_ops::backend(), word_ops::hardware_support());

    let x = 0b1101_0110u64;
    let mask = 0b1111_0000u64;
    println!("extract_bits({x:#b}, {mask:#b}) = {:#b}", word_ops::extract_bits(x, mask));
    println!("deposit_bits(0b1011, {mask:#b}) = {:#b}", word_ops::deposit_bits(0b1011, mask));
    println!("select1({x:#b}, 3) = {:?}", word_ops::select1(x, 3));
    println!("msb0(1000) = {:?}", word_ops::msb0(1000));

    // Eight sorted byte lanes; the rank of y is the number of lanes <= y.
    let lanes = u64::from_le_bytes([3, 9, 9, 40, 41, 100, 200, 255]);
    for y in [0u8, 9, 50, 255] {
        println!("packed_rank(lanes, {y}) = {}", word_ops::packed_rank(lanes, y));
    }

    let mut wide = Word256::ZERO;
    for i in 0..16 {
        wide.set_lane16(i, (i as u16) * 1000);
    }
    println!("packed_rank_wide(0, 1000, .., 15000; 4321) = {}", word_ops::packed_rank_wide(&wide, 4321));
}
