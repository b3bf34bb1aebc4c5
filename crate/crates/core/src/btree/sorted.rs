use super::NodeKeys;

/// How a B-tree node locates a key among its splitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NodeSearch {
    #[default]
    Linear,
    Binary,
}

/// Node keys as an ascending array allocated once at full capacity.
#[derive(Debug, Clone)]
pub struct SortedNode {
    keys: Vec<u64>,
    search: NodeSearch,
}

impl SortedNode {
    /// Number of keys `<= x` under the given strategy.
    #[inline]
    pub fn rank_in(keys: &[u64], x: u64, search: NodeSearch) -> usize {
        match search {
            NodeSearch::Linear => keys.iter().take_while(|&&k| k <= x).count(),
            NodeSearch::Binary => keys.partition_point(|&k| k <= x),
        }
    }
}

impl NodeKeys for SortedNode {
    type Params = NodeSearch;

    fn empty(search: NodeSearch, capacity: usize) -> Self {
        SortedNode {
            keys: Vec::with_capacity(capacity),
            search,
        }
    }

    #[inline]
    fn len(&self) -> usize {
        self.keys.len()
    }

    #[inline]
    fn keys(&self) -> &[u64] {
        &self.keys
    }

    #[inline]
    fn rank(&self, x: u64) -> usize {
        Self::rank_in(&self.keys, x, self.search)
    }

    #[inline]
    fn insert_at(&mut self, i: usize, key: u64) {
        self.keys.insert(i, key);
    }

    #[inline]
    fn remove_at(&mut self, i: usize) -> u64 {
        self.keys.remove(i)
    }

    fn split_off(&mut self, at: usize) -> Self {
        let mut keys = Vec::with_capacity(self.keys.capacity());
        keys.extend_from_slice(&self.keys[at..]);
        self.keys.truncate(at);
        SortedNode {
            keys,
            search: self.search,
        }
    }

    fn extend_sorted(&mut self, keys: &[u64]) {
        debug_assert!(self.keys.last().zip(keys.first()).is_none_or(|(a, b)| a < b));
        self.keys.extend_from_slice(keys);
    }

    fn heap_bytes(&self) -> usize {
        self.keys.capacity() * 8
    }
}
