//! Dynamic fusion nodes and the fusion trees built from them.
//!
//! A [`FusionNode`] stores up to k keys (k = 8 or 16) together with a
//! compressed matrix whose rows carry don't-care bits, so predecessor
//! search, insertion and deletion each take a constant number of word
//! operations. [`FusionTree`] embeds the nodes in a B-tree of degree k.

mod node;
mod rows;

pub use node::{FusionError, FusionNode, FusionNode16, FusionNode8, RankSearch};
pub use rows::RowWord;

use crate::api::{ConfigError, Width};
use crate::btree::{NodeKeys, Tree};
use crate::word_ops::Word256;

impl<W: RowWord> NodeKeys for FusionNode<W> {
    type Params = RankSearch;

    fn empty(search: RankSearch, _capacity: usize) -> Self {
        FusionNode::new(search)
    }

    #[inline]
    fn len(&self) -> usize {
        FusionNode::len(self)
    }

    #[inline]
    fn keys(&self) -> &[u64] {
        FusionNode::keys(self)
    }

    #[inline]
    fn rank(&self, x: u64) -> usize {
        FusionNode::rank(self, x)
    }

    fn insert_at(&mut self, i: usize, key: u64) {
        debug_assert_eq!(FusionNode::rank(self, key), i);
        let inserted = self.insert(key).expect("tree splits before a node fills");
        debug_assert!(inserted);
    }

    fn remove_at(&mut self, i: usize) -> u64 {
        let key = self.key(i);
        let removed = self.remove(key);
        debug_assert!(removed);
        key
    }

    fn split_off(&mut self, at: usize) -> Self {
        FusionNode::split_off(self, at)
    }

    fn extend_sorted(&mut self, keys: &[u64]) {
        let mut all = self.keys().to_vec();
        all.extend_from_slice(keys);
        *self = FusionNode::rebuild(&all, self.search()).expect("merged node fits");
    }

    fn heap_bytes(&self) -> usize {
        0
    }
}

/// Fusion tree over nodes with rows packed in `W`.
pub type FusionTree<W> = Tree<FusionNode<W>>;
/// Fusion tree with k = 8.
pub type FusionTree8 = FusionTree<u64>;
/// Fusion tree with k = 16.
pub type FusionTree16 = FusionTree<Word256>;

impl<W: RowWord> Tree<FusionNode<W>> {
    /// A fusion tree of degree k; every width up to 64 bits is supported.
    pub fn new(width: Width, search: RankSearch) -> Result<Self, ConfigError> {
        Self::with_params(width, W::LANES, search)
    }
}

#[cfg(test)]
mod tests;
