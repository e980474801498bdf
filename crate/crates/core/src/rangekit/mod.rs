//! One-dimensional building blocks: priority search tree, range-sum tree,
//! and their combination, plus the per-facility store built from them.

mod pst;
mod range_sum;
mod rspst;
pub(crate) mod wbt;

pub use pst::{Pst, PstPoint};
pub use range_sum::RangeSumTree;
pub use rspst::{FacilityIndex, RangeSumPst, Store};
pub use wbt::{ItemId, Key, TopKStats, ALPHA_PERCENT};

/// Dense item storage with index reuse.
#[derive(Clone, Debug)]
pub(crate) struct Slab<T> {
    entries: Vec<Option<T>>,
    free: Vec<u32>,
}

impl<T> Default for Slab<T> {
    fn default() -> Self {
        Slab {
            entries: Vec::new(),
            free: Vec::new(),
        }
    }
}

impl<T> Slab<T> {
    pub fn insert(&mut self, value: T) -> ItemId {
        match self.free.pop() {
            Some(i) => {
                self.entries[i as usize] = Some(value);
                ItemId(i)
            }
            None => {
                self.entries.push(Some(value));
                ItemId((self.entries.len() - 1) as u32)
            }
        }
    }

    pub fn remove(&mut self, id: ItemId) -> Option<T> {
        let v = self.entries.get_mut(id.0 as usize)?.take()?;
        self.free.push(id.0);
        Some(v)
    }

    pub fn get(&self, id: ItemId) -> Option<&T> {
        self.entries.get(id.0 as usize)?.as_ref()
    }

    #[inline]
    pub fn at(&self, id: ItemId) -> &T {
        self.entries[id.0 as usize].as_ref().expect("live item")
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.len() - self.free.len()
    }
}
