//! Open-addressing hash map from `u64` keys to small `Copy` values, using
//! Robin Hood displacement with backward-shift deletion. The table grows at
//! a load factor of 0.8 and shrinks when it falls below 1/8.

const MIN_CAPACITY: usize = 8;
const MAX_PROBE: u8 = u8::MAX - 1;

#[derive(Clone, Debug)]
pub struct IntMap<V> {
    keys: Vec<u64>,
    values: Vec<V>,
    /// 0 marks an empty slot, otherwise probe distance + 1.
    probe: Vec<u8>,
    len: usize,
    shift: u32,
}

impl<V: Copy + Default> Default for IntMap<V> {
    fn default() -> Self {
        Self::new()
    }
}

#[inline]
fn mix(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^ (x >> 33)
}

impl<V: Copy + Default> IntMap<V> {
    /// An empty map; no memory is allocated until the first insert.
    pub fn new() -> Self {
        IntMap {
            keys: Vec::new(),
            values: Vec::new(),
            probe: Vec::new(),
            len: 0,
            shift: 64,
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        let mut map = Self::new();
        if n > 0 {
            map.rehash(Self::capacity_for(n));
        }
        map
    }

    fn capacity_for(n: usize) -> usize {
        let mut cap = MIN_CAPACITY;
        while n * 5 > cap * 4 {
            cap *= 2;
        }
        cap
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.probe.len()
    }

    #[inline]
    fn home(&self, key: u64) -> usize {
        (mix(key) >> self.shift) as usize
    }

    #[inline]
    fn find(&self, key: u64) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        let mask = self.capacity() - 1;
        let mut i = self.home(key);
        let mut dist = 1u8;
        loop {
            let p = self.probe[i];
            if p < dist {
                return None;
            }
            if p == dist && self.keys[i] == key {
                return Some(i);
            }
            i = (i + 1) & mask;
            dist += 1;
        }
    }

    #[inline]
    pub fn get(&self, key: u64) -> Option<&V> {
        self.find(key).map(|i| &self.values[i])
    }

    #[inline]
    pub fn get_mut(&mut self, key: u64) -> Option<&mut V> {
        self.find(key).map(move |i| &mut self.values[i])
    }

    #[inline]
    pub fn contains_key(&self, key: u64) -> bool {
        self.find(key).is_some()
    }

    /// Inserts or replaces; returns the previous value.
    pub fn insert(&mut self, key: u64, value: V) -> Option<V> {
        if let Some(i) = self.find(key) {
            return Some(std::mem::replace(&mut self.values[i], value));
        }
        if (self.len + 1) * 5 > self.capacity() * 4 {
            self.rehash((self.capacity() * 2).max(MIN_CAPACITY));
        }
        self.place(key, value);
        self.len += 1;
        None
    }

    fn place(&mut self, mut key: u64, mut value: V) {
        loop {
            let mask = self.capacity() - 1;
            let mut i = self.home(key);
            let mut dist = 1u8;
            loop {
                let p = self.probe[i];
                if p == 0 {
                    self.keys[i] = key;
                    self.values[i] = value;
                    self.probe[i] = dist;
                    return;
                }
                if p < dist {
                    std::mem::swap(&mut self.keys[i], &mut key);
                    std::mem::swap(&mut self.values[i], &mut value);
                    self.probe[i] = dist;
                    dist = p;
                }
                i = (i + 1) & mask;
                dist += 1;
                if dist > MAX_PROBE {
                    break;
                }
            }
            // Pathological clustering: grow and place the displaced entry.
            self.rehash(self.capacity() * 2);
        }
    }

    pub fn remove(&mut self, key: u64) -> Option<V> {
        let mut i = self.find(key)?;
        let removed = self.values[i];
        let mask = self.capacity() - 1;
        loop {
            let next = (i + 1) & mask;
            if self.probe[next] <= 1 {
                break;
            }
            self.keys[i] = self.keys[next];
            self.values[i] = self.values[next];
            self.probe[i] = self.probe[next] - 1;
            i = next;
        }
        self.probe[i] = 0;
        self.len -= 1;
        if self.len == 0 {
            *self = Self::new();
        } else if self.len * 8 < self.capacity() && self.capacity() > MIN_CAPACITY {
            self.rehash(self.capacity() / 2);
        }
        Some(removed)
    }

    /// Drops every entry and releases the table.
    pub fn clear(&mut self) {
        *self = Self::new();
    }

    fn rehash(&mut self, capacity: usize) {
        debug_assert!(capacity.is_power_of_two());
        let keys = std::mem::replace(&mut self.keys, vec![0; capacity]);
        let values = std::mem::replace(&mut self.values, vec![V::default(); capacity]);
        let probe = std::mem::replace(&mut self.probe, vec![0; capacity]);
        self.shift = 64 - capacity.trailing_zeros();
        for i in 0..probe.len() {
            if probe[i] != 0 {
                self.place(keys[i], values[i]);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &V)> + '_ {
        self.probe
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .map(move |(i, _)| (self.keys[i], &self.values[i]))
    }

    pub fn heap_bytes(&self) -> usize {
        self.capacity() * (8 + std::mem::size_of::<V>() + 1)
    }
}
