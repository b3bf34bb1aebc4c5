//! Fusion trees with 8- and 16-key nodes as ordinary predecessor sets.
//!
//! cargo run --release --example fusion_tree

use dynpred::api::{PredecessorSet, Width};
use dynpred::fusion::{FusionTree16, FusionTree8, RankSearch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fill(set: &mut dyn PredecessorSet, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let keys: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=set.width().max_key())).collect();
    for &k in &keys {
        set.insert(k);
    }
    keys
}

fn main() {
    let mut narrow = FusionTree8::new(Width::W64, RankSearch::Packed).unwrap();
    let mut wide = FusionTree16::new(Width::W64, RankSearch::Packed).unwrap();
    let keys = fill(&mut narrow, 100_000);
    fill(&mut wide, 100_000);
    println!("k=8: {} keys, height {}", narrow.len(), narrow.height());
    println!("k=16: {} keys, height {}", wide.len(), wide.height());

    let probe = keys[17] + 1;
    assert_eq!(narrow.predecessor(probe), wide.predecessor(probe));
    println!("predecessor({probe}) = {:?}", narrow.predecessor(probe));
    for &k in &keys {
        narrow.remove(k);
    }
    println!("after deleting every key: {} left", narrow.len());
}
