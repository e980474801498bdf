use super::wbt::{key_hi, key_lo, ItemId, Items, Key, TopKStats, WbTree};
use super::Slab;

/// A point stored in a [`Pst`]. `seq` is the insertion sequence number,
/// which orders equal coordinates and breaks priority ties (earlier wins).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PstPoint<P, T> {
    pub x: i64,
    pub priority: P,
    pub payload: T,
    pub seq: u64,
}

#[derive(Clone, Debug)]
struct Points<P, T>(Slab<PstPoint<P, T>>);

impl<P: Ord, T> Items for Points<P, T> {
    type Sum = ();
    const RANKED: bool = true;

    fn key(&self, item: ItemId, _level: usize) -> Key {
        let p = self.0.at(item);
        (p.x, p.seq)
    }

    fn summary(&self, _item: ItemId) {}

    fn combine(_: &(), _: &()) {}

    fn outranks(&self, a: ItemId, b: ItemId) -> bool {
        let (a, b) = (self.0.at(a), self.0.at(b));
        a.priority > b.priority || (a.priority == b.priority && a.seq < b.seq)
    }
}

/// Dynamic priority search tree answering range top-k queries.
#[derive(Clone, Debug)]
pub struct Pst<P, T> {
    points: Points<P, T>,
    tree: WbTree<(), ()>,
    next_seq: u64,
}

impl<P: Ord, T> Default for Pst<P, T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P: Ord, T> Pst<P, T> {
    pub fn new() -> Self {
        Pst {
            points: Points(Slab::default()),
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

    pub fn height(&self) -> usize {
        self.tree.height()
    }

    pub fn insert(&mut self, x: i64, payload: T, priority: P) -> ItemId {
        let seq = self.next_seq;
        self.next_seq += 1;
        let id = self.points.0.insert(PstPoint {
            x,
            priority,
            payload,
            seq,
        });
        let path = self.tree.insert(&self.points, id);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.points, s);
        }
        id
    }

    /// Removes the point behind `handle`; `None` if the handle is stale.
    pub fn delete(&mut self, handle: ItemId) -> Option<PstPoint<P, T>> {
        self.points.0.get(handle)?;
        let path = self.tree.delete(&self.points, handle);
        if let Some(s) = self.tree.scapegoat(&path) {
            self.tree.rebuild(&self.points, s);
        }
        self.points.0.remove(handle)
    }

    pub fn get(&self, handle: ItemId) -> Option<&PstPoint<P, T>> {
        self.points.0.get(handle)
    }

    /// The point with the highest priority overall.
    pub fn max(&self) -> Option<&PstPoint<P, T>> {
        if self.tree.is_empty() {
            return None;
        }
        self.tree.node(self.tree.root()).slot.map(|s| self.points.0.at(s))
    }

    /// The `k` highest-priority points with `x1 <= x <= x2`, best first.
    pub fn top_k(&self, x1: i64, x2: i64, k: usize) -> Vec<&PstPoint<P, T>> {
        self.top_k_with_stats(x1, x2, k).0
    }

    pub fn top_k_with_stats(&self, x1: i64, x2: i64, k: usize) -> (Vec<&PstPoint<P, T>>, TopKStats) {
        let (ids, stats) = self.tree.top_k_range(&self.points, key_lo(x1), key_hi(x2), k);
        (ids.into_iter().map(|i| self.points.0.at(i)).collect(), stats)
    }

    #[cfg(test)]
    fn check(&self) -> Result<(), String> {
        self.tree.check(&self.points, |_, _| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn insert_then_delete_is_empty() {
        let mut t = Pst::new();
        let h = t.insert(4, "p", 1);
        assert_eq!(t.len(), 1);
        assert_eq!(t.delete(h).unwrap().payload, "p");
        assert!(t.is_empty());
        assert!(t.delete(h).is_none());
        assert!(t.top_k(i64::MIN, i64::MAX, 3).is_empty());
    }

    #[test]
    fn root_holds_max_priority() {
        let mut t = Pst::new();
        t.insert(1, 'p', 5);
        t.insert(2, 'q', 9);
        t.insert(3, 'r', 1);
        assert_eq!(t.max().unwrap().priority, 9);
        t.check().unwrap();
    }

    #[test]
    fn small_range_top_one() {
        let mut t = Pst::new();
        t.insert(1, (), 5);
        t.insert(2, (), 9);
        t.insert(3, (), 1);
        let got: Vec<_> = t.top_k(1, 2, 1).iter().map(|p| (p.x, p.priority)).collect();
        assert_eq!(got, vec![(2, 9)]);
        assert!(t.top_k(1, 2, 0).is_empty());
    }

    #[test]
    fn invariants_hold_under_random_updates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut t = Pst::new();
        let mut live = Vec::new();
        for step in 0..1000 {
            if live.is_empty() || rng.gen_bool(0.6) {
                let x = rng.gen_range(-50..50);
                live.push(t.insert(x, step, rng.gen_range(0..30)));
            } else {
                let i = rng.gen_range(0..live.len());
                t.delete(live.swap_remove(i)).unwrap();
            }
            t.check().unwrap_or_else(|e| panic!("step {step}: {e}"));
            assert_eq!(t.len(), live.len());
        }
    }

    #[test]
    fn top_k_matches_sort_and_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut t = Pst::new();
        let mut pts = Vec::new();
        for i in 0..500 {
            let (x, p) = (rng.gen_range(0..200), rng.gen_range(0..40));
            t.insert(x, i, p);
            pts.push((x, p, i as u64));
        }
        for _ in 0..100 {
            let a = rng.gen_range(-10..210);
            let b = rng.gen_range(a..=210);
            let k = rng.gen_range(0..30);
            let mut want: Vec<_> = pts.iter().filter(|p| a <= p.0 && p.0 <= b).collect();
            want.sort_by(|l, r| r.1.cmp(&l.1).then(l.2.cmp(&r.2)));
            let want: Vec<(i64, i32, u64)> = want.into_iter().take(k).copied().collect();
            let (got, stats) = t.top_k_with_stats(a, b, k);
            let got: Vec<(i64, i32, u64)> = got.iter().map(|p| (p.x, p.priority, p.seq)).collect();
            assert_eq!(got, want, "range [{a},{b}] k={k}");
            assert!(stats.peak_heap <= k + 2 * t.height() + stats.seeds, "{stats:?}");
        }
    }
}
