//! Bounded memo tables for the engine, the world and the checker.
//!
//! The first `CACHE_CAP` entries are kept for the lifetime of the table;
//! later ones go to a scratch tier that is dropped whenever it fills up.
//! Batch runs tend to meet small formulas first, so the permanent tier ends
//! up holding the subresults that are reused most.

use std::cell::RefCell;
use std::hash::Hash;

use rustc_hash::FxHashMap as HashMap;

pub(super) const CACHE_CAP: usize = 200_000;

pub(super) struct Memo<K, V> {
    tiers: RefCell<[HashMap<K, V>; 2]>,
}

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo {
            tiers: RefCell::new([HashMap::default(), HashMap::default()]),
        }
    }
}

impl<K: Hash + Eq, V: Clone> Memo<K, V> {
    pub fn get(&self, k: &K) -> Option<V> {
        let t = self.tiers.borrow();
        t[0].get(k).or_else(|| t[1].get(k)).cloned()
    }

    pub fn contains(&self, k: &K) -> bool {
        let t = self.tiers.borrow();
        t[0].contains_key(k) || t[1].contains_key(k)
    }

    pub fn put(&self, k: K, v: V) {
        let mut t = self.tiers.borrow_mut();
        if t[0].len() < CACHE_CAP {
            t[0].insert(k, v);
            return;
        }
        if t[1].len() >= CACHE_CAP {
            t[1].clear();
        }
        t[1].insert(k, v);
    }
}
