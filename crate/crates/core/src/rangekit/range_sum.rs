use super::wbt::{key_hi, key_lo, ItemId, Items, Key, WbTree};
use super::Slab;
use crate::semigroup::Semigroup;

#[derive(Clone, Debug)]
struct Pairs<W>(Slab<(i64, u64, W)>);

impl<W: Semigroup> Items for Pairs<W> {
    type Sum = W;
    const RANKED: bool = false;

    fn key(&self, item: ItemId, _level: usize) -> Key {
        let p = self.0.at(item);
        (p.0, p.1)
    }

    fn summary(&self, item: ItemId) -> W {
        self.0.at(item).2.clone()
    }

    fn combine(a: &W, b: &W) -> W {
        a.plus(b)
    }

    fn outranks(&self, _: ItemId, _: ItemId) -> bool {
        false
    }
}

/// Range sums over `(x, w)` pairs for any semigroup. Equal coordinates are
/// kept in insertion order.
#[derive(Clone, Debug)]
pub struct RangeSumTree<W> {
    pairs: Pairs<W>,
    tree: WbTree<W, ()>,
    next_seq: u64,
}

impl<W: Semigroup> Default for RangeSumTree<W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<W: Semigroup> RangeSumTree<W> {
    pub fn new() -> Self {
        RangeSumTree {
            pairs: Pairs(Slab::default()),
            tree: WbTree::new(0),
            next_seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn insert(&mut self, x: i64, w: W) -> ItemId {
        let seq = self.next_seq;
        self.next_seq += 1;
        let id = self.pairs.0.insert((x, seq, w));
        let path = self.tree.insert(&self.pairs, id);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.pairs, s);
        }
        id
    }

    pub fn remove(&mut self, handle: ItemId) -> Option<(i64, W)> {
        self.pairs.0.get(handle)?;
        let path = self.tree.delete(&self.pairs, handle);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.pairs, s);
        }
        self.pairs.0.remove(handle).map(|(x, _, w)| (x, w))
    }

    /// Fold, in ascending `x`, of the weights with `x1 <= x <= x2`.
    /// `None` when nothing qualifies.
    pub fn range_sum(&self, x1: i64, x2: i64) -> Option<W> {
        self.tree.fold_range::<Pairs<W>>(key_lo(x1), key_hi(x2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{fold, Add, Concat, Min};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_range_is_none() {
        let mut t = RangeSumTree::new();
        assert_eq!(t.range_sum(0, 10), None);
        t.insert(20, Add(1));
        assert_eq!(t.range_sum(0, 10), None);
    }

    #[test]
    fn small_sums() {
        let mut t = RangeSumTree::new();
        t.insert(1, Add(10));
        t.insert(4, Add(7));
        assert_eq!(t.range_sum(0, 5), Some(Add(17)));
        let mut m = RangeSumTree::new();
        m.insert(1, Min(10));
        m.insert(4, Min(7));
        assert_eq!(m.range_sum(0, 5), Some(Min(7)));
        assert_eq!(m.range_sum(2, 5), Some(Min(7)));
        assert_eq!(m.range_sum(1, 1), Some(Min(10)));
    }

    #[test]
    fn concat_folds_in_ascending_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut t = RangeSumTree::new();
        let mut pairs: Vec<(i64, u64, Concat)> = Vec::new();
        let mut handles = Vec::new();
        for seq in 0..400u64 {
            if handles.is_empty() || rng.gen_bool(0.7) {
                let x = rng.gen_range(0..60);
                let s = Concat(((b'a' + rng.gen_range(0..26)) as char).to_string());
                handles.push((t.insert(x, s.clone()), seq));
                pairs.push((x, seq, s));
            } else {
                let (h, seq) = handles.swap_remove(rng.gen_range(0..handles.len()));
                t.remove(h).unwrap();
                pairs.retain(|p| p.1 != seq);
            }
            t.tree
                .check(&t.pairs, |a, b| a == b)
                .unwrap_or_else(|e| panic!("{e}"));
            let a = rng.gen_range(-5..65);
            let b = rng.gen_range(a..70);
            let mut sel: Vec<_> = pairs.iter().filter(|p| a <= p.0 && p.0 <= b).collect();
            sel.sort_by_key(|p| (p.0, p.1));
            let want = fold(sel.iter().map(|p| &p.2));
            assert_eq!(t.range_sum(a, b), want);
        }
    }
}
