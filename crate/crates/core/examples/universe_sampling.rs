//! Universe sampling: keys split into a bucket number and a truncated key,
//! with array or hash top levels and bit-vector, list or hybrid buckets.
//!
//! cargo run --release --example universe_sampling

use dynpred::api::{PredecessorSet, Width};
use dynpred::sampling::{BucketKind, TopKind, USConfig, UniverseSampling};

fn main() {
    let config = USConfig { k_b: 8, theta_min: 16, theta_max: 32, ..USConfig::default() };
    let mut us = UniverseSampling::new(Width::W32, config).unwrap();
    println!("bucket_of(0x1234) = {:?}", us.bucket_of(0x1234));

    // A dense bucket outgrows its list and becomes a bit vector.
    for k in 0..40u64 {
        us.insert(0x1200 + 3 * k);
        if k % 10 == 9 {
            println!("{:>2} keys in bucket 0x12: {:?}", k + 1, us.bucket_storage(0x12));
        }
    }
    // Deleting back below theta_min reverts it.
    for k in 0..30u64 {
        us.remove(0x1200 + 3 * k);
    }
    println!("10 keys left: {:?}", us.bucket_storage(0x12));
    us.insert(7);
    println!("predecessor(0x11ff) = {:?}", us.predecessor(0x11ff));

    for top in [TopKind::Array, TopKind::Hash] {
        for bucket in [BucketKind::BitVector, BucketKind::List, BucketKind::Hybrid] {
            let config = match bucket {
                BucketKind::Hybrid => USConfig { top, ..USConfig::default() },
                _ => USConfig { k_b: 16, ..USConfig::pure(top, bucket) },
            };
            let mut us = UniverseSampling::new(Width::W32, config).unwrap();
            for i in 0..1_000_000u64 {
                us.insert(i.wrapping_mul(0x9e37_79b9) & 0xffff_ffff);
            }
            println!(
                "{top:?}/{bucket:?} b=2^{}: {} active buckets, {:.1} bits/key",
                config.k_b,
                us.active_buckets(),
                8.0 * us.heap_bytes() as f64 / us.len() as f64
            );
        }
    }
}
