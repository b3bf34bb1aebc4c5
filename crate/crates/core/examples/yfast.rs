//! Y-fast trie: the worked example with buckets of target size two, then
//! a larger trie with the benchmark defaults.
//!
//! cargo run --example yfast

use dynpred::api::{PredecessorSet, Width};
use dynpred::yfast::{BucketOrder, YFastConfig, YFastTrie};

fn show(t: &YFastTrie) {
    println!("  levels: top {} bottom {}", t.l_top(), t.l_bot());
    for b in t.buckets() {
        let rep = match b.rep {
            None => "-inf".to_string(),
            Some(r) if b.rep_dead => format!("{r} (deleted)"),
            Some(r) => r.to_string(),
        };
        println!("  bucket rep {rep:<12} keys {:?}", b.keys);
    }
}

fn main() {
    let config = YFastConfig { t: 2, c: 2, gamma: 1.0, order: BucketOrder::Sorted };
    let state: [(u64, bool, &[u64]); 3] = [(0, true, &[3, 6, 7, 9]), (17, false, &[17, 18, 19]), (20, true, &[21, 23])];
    let w5 = Width::new(5).unwrap();

    let mut t = YFastTrie::from_parts(w5, config, &[], &state).unwrap();
    println!("initial state, predecessor(22) = {:?}", t.predecessor(22));
    show(&t);
    t.insert(8);
    println!("after inserting 8 (the full bucket splits):");
    show(&t);

    let mut t = YFastTrie::from_parts(w5, config, &[], &state).unwrap();
    t.remove(21);
    println!("after deleting 21 (the small bucket merges):");
    show(&t);

    let mut big = YFastTrie::new(Width::W64, YFastConfig::default()).unwrap();
    for i in 0..1_000_000u64 {
        big.insert(i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    println!(
        "1e6 keys at w=64, t=128: {} buckets, levels {}..{}, {:.1} bits/key",
        big.bucket_count(),
        big.l_top(),
        big.l_bot(),
        8.0 * big.heap_bytes() as f64 / big.len() as f64
    );
}
