use std::collections::BTreeMap;

use super::wbt::{key_hi, key_lo, ItemId, Items, Key, TopKStats, WbTree};
use super::Slab;
use crate::error::{Error, Result};
use crate::graph::Dist;
use crate::semigroup::Semigroup;
use crate::FacilityId;

/// A stored `(radius, facility, weight)` triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple<W> {
    pub r: Dist,
    pub f: FacilityId,
    pub w: W,
}

#[derive(Clone, Debug)]
struct Triples<W>(Slab<Triple<W>>);

impl<W: Semigroup + Ord> Items for Triples<W> {
    type Sum = W;
    const RANKED: bool = true;

    fn key(&self, item: ItemId, _level: usize) -> Key {
        let t = self.0.at(item);
        (t.r, t.f.0)
    }

    fn summary(&self, item: ItemId) -> W {
        self.0.at(item).w.clone()
    }

    fn combine(a: &W, b: &W) -> W {
        a.plus(b)
    }

    fn outranks(&self, a: ItemId, b: ItemId) -> bool {
        let (a, b) = (self.0.at(a), self.0.at(b));
        a.w > b.w || (a.w == b.w && a.f < b.f)
    }
}

/// Priority search tree on radii whose nodes also carry subtree weight
/// totals, so one structure answers both range sums and range top-k.
#[derive(Clone, Debug)]
pub struct RangeSumPst<W> {
    triples: Triples<W>,
    tree: WbTree<W, ()>,
}

impl<W: Semigroup + Ord> Default for RangeSumPst<W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<W: Semigroup + Ord> RangeSumPst<W> {
    pub fn new() -> Self {
        RangeSumPst {
            triples: Triples(Slab::default()),
            tree: WbTree::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn height(&self) -> usize {
        self.tree.height()
    }

    pub fn insert(&mut self, r: Dist, f: FacilityId, w: W) -> ItemId {
        let id = self.triples.0.insert(Triple { r, f, w });
        let path = self.tree.insert(&self.triples, id);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.triples, s);
        }
        id
    }

    pub fn remove(&mut self, handle: ItemId) -> Option<Triple<W>> {
        self.triples.0.get(handle)?;
        let path = self.tree.delete(&self.triples, handle);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.triples, s);
        }
        self.triples.0.remove(handle)
    }

    pub fn get(&self, handle: ItemId) -> Option<&Triple<W>> {
        self.triples.0.get(handle)
    }

    pub fn range_sum(&self, x1: Dist, x2: Dist) -> Option<W> {
        self.tree.fold_range::<Triples<W>>(key_lo(x1), key_hi(x2))
    }

    /// Total weight of triples with `r >= q`.
    pub fn suffix_sum(&self, q: Dist) -> Option<W> {
        self.range_sum(q, Dist::MAX)
    }

    pub fn range_top_k(&self, x1: Dist, x2: Dist, k: usize) -> (Vec<(FacilityId, W)>, TopKStats) {
        let (ids, stats) = self.tree.top_k_range(&self.triples, key_lo(x1), key_hi(x2), k);
        let out = ids
            .into_iter()
            .map(|i| {
                let t = self.triples.0.at(i);
                (t.f, t.w.clone())
            })
            .collect();
        (out, stats)
    }

    /// The `k` heaviest triples with `r >= q`, heaviest first.
    pub fn suffix_top_k(&self, q: Dist, k: usize) -> Vec<(FacilityId, W)> {
        self.range_top_k(q, Dist::MAX, k).0
    }

    /// Facilities of every triple with `r >= q`, by ascending radius.
    pub fn report_suffix(&self, q: Dist) -> Vec<FacilityId> {
        let mut ids = Vec::new();
        self.tree.report_range(key_lo(q), key_hi(Dist::MAX), &mut ids);
        ids.into_iter().map(|i| self.triples.0.at(i).f).collect()
    }

    #[cfg(test)]
    pub(crate) fn check(&self) -> Result<(), String>
    where
        W: PartialEq,
    {
        self.tree.check(&self.triples, |a, b| a == b)
    }
}

/// Search tree from facility id to the facility's entry in a companion
/// range structure.
#[derive(Clone, Debug, Default)]
pub struct FacilityIndex {
    map: BTreeMap<FacilityId, ItemId>,
}

impl FacilityIndex {
    pub fn get(&self, f: FacilityId) -> Option<ItemId> {
        self.map.get(&f).copied()
    }

    pub fn contains(&self, f: FacilityId) -> bool {
        self.map.contains_key(&f)
    }

    pub fn insert(&mut self, f: FacilityId, handle: ItemId) -> Result<()> {
        if self.map.contains_key(&f) {
            return Err(Error::DuplicateFacility(f));
        }
        self.map.insert(f, handle);
        Ok(())
    }

    pub fn remove(&mut self, f: FacilityId) -> Result<ItemId> {
        self.map.remove(&f).ok_or(Error::MissingFacility(f))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn facilities(&self) -> impl Iterator<Item = FacilityId> + '_ {
        self.map.keys().copied()
    }
}

/// One facility store: a [`RangeSumPst`] cross-linked with a
/// [`FacilityIndex`].
#[derive(Clone, Debug)]
pub struct Store<W> {
    pst: RangeSumPst<W>,
    index: FacilityIndex,
}

impl<W: Semigroup + Ord> Default for Store<W> {
    fn default() -> Self {
        Store {
            pst: RangeSumPst::new(),
            index: FacilityIndex::default(),
        }
    }
}

impl<W: Semigroup + Ord> Store<W> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn insert(&mut self, r: Dist, f: FacilityId, w: W) -> Result<()> {
        if self.index.contains(f) {
            return Err(Error::DuplicateFacility(f));
        }
        let h = self.pst.insert(r, f, w);
        self.index.insert(f, h)
    }

    pub fn remove(&mut self, f: FacilityId) -> Result<Triple<W>> {
        let h = self.index.remove(f)?;
        Ok(self.pst.remove(h).expect("index and tree agree"))
    }

    pub fn get(&self, f: FacilityId) -> Option<&Triple<W>> {
        self.pst.get(self.index.get(f)?)
    }

    pub fn facilities(&self) -> impl Iterator<Item = FacilityId> + '_ {
        self.index.facilities()
    }

    pub fn suffix_sum(&self, q: Dist) -> Option<W> {
        self.pst.suffix_sum(q)
    }

    pub fn suffix_top_k(&self, q: Dist, k: usize) -> Vec<(FacilityId, W)> {
        self.pst.suffix_top_k(q, k)
    }

    pub fn report_suffix(&self, q: Dist) -> Vec<FacilityId> {
        self.pst.report_suffix(q)
    }

    pub fn pst(&self) -> &RangeSumPst<W> {
        &self.pst
    }
}
