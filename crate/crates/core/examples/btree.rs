//! B-trees with linear or binary in-node search, and how the node degree
//! trades height for space.
//!
//! cargo run --release --example btree

use dynpred::api::{PredecessorSet, Width};
use dynpred::btree::{BTree, BTreeConfig, NodeSearch};

fn main() {
    for degree in [8, 16, 64, 256] {
        for search in [NodeSearch::Linear, NodeSearch::Binary] {
            let mut tree = BTree::new(Width::W40, BTreeConfig { degree, search }).unwrap();
            for i in 0..200_000u64 {
                tree.insert(i.wrapping_mul(0x9e37_79b9) & Width::W40.max_key());
            }
            tree.check_invariants().unwrap();
            let bits = 8.0 * tree.heap_bytes() as f64 / tree.len() as f64;
            println!(
                "B={degree:<3} {search:?}: height {}, {bits:.1} bits/key, predecessor(2^39) = {:?}",
                tree.height(),
                tree.predecessor(1 << 39)
            );
        }
    }
}
