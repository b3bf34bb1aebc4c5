//! A single fusion node: the sketch of {2, 3, 12, 27} over 5-bit keys,
//! its branching mask and matrix rows, queries and a delete.
//!
//! cargo run --example fusion_node

use dynpred::fusion::{FusionNode8, RankSearch};

fn show(node: &FusionNode8) {
    let cols = node.mask().count_ones() as usize;
    println!("keys {:?}, branching mask {:05b}", node.keys(), node.mask());
    for i in 0..node.len() {
        // Print column 0 rightmost; free positions print as '*'.
        let row: String = (0..cols)
            .rev()
            .map(|c| match (node.free_row(i) >> c & 1, node.branch_row(i) >> c & 1) {
                (1, _) => '*',
                (_, b) => char::from(b'0' + b as u8),
            })
            .collect();
        println!("  row {i}: {row}");
    }
}

fn main() {
    let mut node = FusionNode8::rebuild(&[2, 3, 12, 27], RankSearch::Packed).expect("at most 8 keys");
    show(&node);
    for x in [25, 4, 1, 31] {
        println!("match({x:05b}) = {}, predecessor({x}) = {:?}", node.match_rank(x), node.predecessor(x));
    }
    node.remove(12);
    println!("after deleting 12:");
    show(&node);
    node.insert(17).unwrap();
    println!("after inserting 17:");
    show(&node);
}
