//! Multi-dimensional range-sum priority search trees.
//!
//! A store of dimension `t'` is a range tree: the level-0 tree is keyed on
//! the first coordinate, and every internal node of a level-`i` tree owns a
//! level-`i+1` tree over the tuples below it. Every level tree is itself a
//! range-sum priority search tree, so each one can answer one-sided sums and
//! top-k directly.
//!
//! Updates rebuild the highest out-of-balance node on the update path
//! together with all the secondary trees hanging below it, which makes
//! insertions and deletions amortized polylogarithmic.
//!
//! The main query is the orthant complement: all tuples `p` with
//! `p_j >= q_j` for at least one `j`. [`ComplementStrategy::Direct`] walks
//! the level trees once; [`ComplementStrategy::Boxes`] splits the region into
//! `t'` disjoint boxes and runs an ordinary box query for each.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::Dist;
use crate::rangekit::wbt::{key_hi, key_lo, ItemId, Items, Key, WbTree, NIL};
use crate::rangekit::{FacilityIndex, Slab};
use crate::select;
use crate::semigroup::{plus_opt, Semigroup};
use crate::FacilityId;

/// A stored point with its facility and weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tuple<W> {
    pub coords: Vec<Dist>,
    pub f: FacilityId,
    pub w: W,
}

/// Query region `R^t' \ ((-inf, q_1) x ... x (-inf, q_t'))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantComplement {
    pub corner: Vec<Dist>,
}

/// A closed box, one `(low, high)` pair per coordinate.
pub type QueryBox = Vec<(Dist, Dist)>;

impl OrthantComplement {
    pub fn new(corner: Vec<Dist>) -> Self {
        OrthantComplement { corner }
    }

    pub fn contains(&self, p: &[Dist]) -> bool {
        p.iter().zip(&self.corner).any(|(x, q)| x >= q)
    }

    /// Pairwise disjoint closed boxes whose union is the region: box `j`
    /// fixes `x_j >= q_j` and `x_l < q_l` for all `l < j`. Boxes that are
    /// empty over the integers are left out.
    pub fn boxes(&self) -> Vec<QueryBox> {
        let t = self.corner.len();
        let mut out = Vec::with_capacity(t);
        'outer: for j in 0..t {
            let mut b = Vec::with_capacity(t);
            for l in 0..t {
                let q = self.corner[l];
                b.push(match l.cmp(&j) {
                    Ordering::Less => match q.checked_sub(1) {
                        Some(hi) => (Dist::MIN, hi),
                        None => continue 'outer,
                    },
                    Ordering::Equal => (q, Dist::MAX),
                    Ordering::Greater => (Dist::MIN, Dist::MAX),
                });
            }
            out.push(b);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComplementStrategy {
    #[default]
    Direct,
    Boxes,
}

#[derive(Clone, Debug)]
struct Points<W>(Slab<Tuple<W>>);

impl<W: Semigroup + Ord> Items for Points<W> {
    type Sum = W;
    const RANKED: bool = true;

    #[inline]
    fn key(&self, item: ItemId, level: usize) -> Key {
        let t = self.0.at(item);
        (t.coords[level], t.f.0)
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

impl<W: Semigroup + Ord> Points<W> {
    fn rank(&self, a: &ItemId, b: &ItemId) -> Ordering {
        let (x, y) = (self.0.at(*a), self.0.at(*b));
        y.w.cmp(&x.w).then(x.f.cmp(&y.f))
    }

    /// Keeps the `k` best of `cands` (unordered).
    fn best_k(&self, mut cands: Vec<ItemId>, k: usize) -> Vec<ItemId> {
        if cands.len() > k {
            if k == 0 {
                return Vec::new();
            }
            cands.select_nth_unstable_by(k - 1, |a, b| self.rank(a, b));
            cands.truncate(k);
        }
        cands
    }

    fn in_box(&self, it: ItemId, bx: &[(Dist, Dist)], from: usize) -> bool {
        let c = &self.0.at(it).coords;
        (from..bx.len()).all(|j| bx[j].0 <= c[j] && c[j] <= bx[j].1)
    }

    fn in_complement(&self, it: ItemId, q: &[Dist], from: usize) -> bool {
        let c = &self.0.at(it).coords;
        (from..q.len()).any(|j| c[j] >= q[j])
    }
}

type Aux<W> = Option<Box<Level<W>>>;

#[derive(Clone, Debug)]
struct Level<W> {
    tree: WbTree<W, Aux<W>>,
}

impl<W: Semigroup + Ord> Level<W> {
    fn from_sorted(pts: &Points<W>, level: usize, sorted: &[ItemId], dims: usize) -> Self {
        let mut lv = Level {
            tree: WbTree::new(level),
        };
        lv.tree.build(pts, sorted);
        if !sorted.is_empty() {
            let root = lv.tree.root();
            lv.attach_aux(pts, root, dims);
        }
        lv
    }

    fn is_last(&self, dims: usize) -> bool {
        self.tree.level() + 1 == dims
    }

    /// Builds the secondary trees of every internal node under `u`. Returns
    /// the subtree's items sorted by the next coordinate (empty on the last
    /// level, where no secondary trees exist).
    fn attach_aux(&mut self, pts: &Points<W>, u: u32, dims: usize) -> Vec<ItemId> {
        if self.is_last(dims) {
            return Vec::new();
        }
        let next = self.tree.level() + 1;
        let (l, r, leaf, item) = {
            let n = self.tree.node(u);
            (n.left, n.right, n.is_leaf(), n.item)
        };
        if leaf {
            return vec![item];
        }
        let a = self.attach_aux(pts, l, dims);
        let b = self.attach_aux(pts, r, dims);
        let merged = merge_by(&a, &b, |x| pts.key(x, next));
        self.tree.node_mut(u).aux = Some(Box::new(Level::from_sorted(pts, next, &merged, dims)));
        merged
    }

    fn sorted_under(&self, pts: &Points<W>, u: u32) -> Vec<ItemId> {
        let next = self.tree.level() + 1;
        let mut v = self.tree.items_under(u);
        v.sort_by_key(|&x| pts.key(x, next));
        v
    }

    fn insert(&mut self, pts: &Points<W>, it: ItemId, dims: usize) {
        let path = self.tree.insert(pts, it);
        let goat = self.tree.scapegoat(&path);
        if !self.is_last(dims) {
            for &u in &path {
                if Some(u) == goat {
                    break;
                }
                if self.tree.node(u).is_leaf() {
                    continue;
                }
                if self.tree.node(u).aux.is_none() {
                    let sorted = self.sorted_under(pts, u);
                    let lv = Level::from_sorted(pts, self.tree.level() + 1, &sorted, dims);
                    self.tree.node_mut(u).aux = Some(Box::new(lv));
                } else {
                    self.tree.node_mut(u).aux.as_mut().unwrap().insert(pts, it, dims);
                }
            }
        }
        if let Some(s) = goat {
            self.tree.rebuild(pts, s);
            self.attach_aux(pts, s, dims);
        }
    }

    fn delete(&mut self, pts: &Points<W>, it: ItemId, dims: usize) {
        let anc = self.tree.delete(pts, it);
        let goat = self.tree.scapegoat(&anc);
        if !self.is_last(dims) {
            for &u in &anc {
                if Some(u) == goat {
                    break;
                }
                self.tree
                    .node_mut(u)
                    .aux
                    .as_mut()
                    .expect("internal node has a secondary tree")
                    .delete(pts, it, dims);
            }
        }
        if let Some(s) = goat {
            self.tree.rebuild(pts, s);
            self.attach_aux(pts, s, dims);
        }
    }

    fn aux(&self, u: u32) -> &Level<W> {
        self.tree.node(u).aux.as_deref().expect("internal node has a secondary tree")
    }

    fn box_sum(&self, pts: &Points<W>, u: u32, bx: &[(Dist, Dist)], dims: usize) -> Option<W> {
        crate::metrics::visit();
        let lvl = self.tree.level();
        let (lo, hi) = (key_lo(bx[lvl].0), key_hi(bx[lvl].1));
        let n = self.tree.node(u);
        if n.hi < lo || hi < n.lo {
            return None;
        }
        if lo <= n.lo && n.hi <= hi {
            if self.is_last(dims) {
                return Some(n.sum.clone());
            }
            if n.is_leaf() {
                return pts.in_box(n.item, bx, lvl + 1).then(|| n.sum.clone());
            }
            let a = self.aux(u);
            return a.box_sum(pts, a.tree.root(), bx, dims);
        }
        plus_opt(
            self.box_sum(pts, n.left, bx, dims),
            self.box_sum(pts, n.right, bx, dims),
        )
    }

    fn box_top(&self, pts: &Points<W>, bx: &[(Dist, Dist)], k: usize, dims: usize) -> Vec<ItemId> {
        let lvl = self.tree.level();
        let (lo, hi) = (key_lo(bx[lvl].0), key_hi(bx[lvl].1));
        if self.is_last(dims) {
            return self.tree.top_k_range(pts, lo, hi, k).0;
        }
        let mut cands = Vec::new();
        let mut stack = vec![self.tree.root()];
        while let Some(u) = stack.pop() {
            crate::metrics::visit();
            let n = self.tree.node(u);
            if n.hi < lo || hi < n.lo {
                continue;
            }
            if lo <= n.lo && n.hi <= hi {
                if n.is_leaf() {
                    if pts.in_box(n.item, bx, lvl + 1) {
                        cands.push(n.item);
                    }
                } else {
                    cands.extend(self.aux(u).box_top(pts, bx, k, dims));
                }
                continue;
            }
            stack.push(n.right);
            stack.push(n.left);
        }
        pts.best_k(cands, k)
    }

    fn comp_sum(&self, pts: &Points<W>, u: u32, q: &[Dist], dims: usize) -> Option<W> {
        crate::metrics::visit();
        let lvl = self.tree.level();
        let ql = key_lo(q[lvl]);
        let n = self.tree.node(u);
        if n.lo >= ql {
            return Some(n.sum.clone());
        }
        if n.hi < ql {
            if self.is_last(dims) {
                return None;
            }
            if n.is_leaf() {
                return pts.in_complement(n.item, q, lvl + 1).then(|| n.sum.clone());
            }
            let a = self.aux(u);
            return a.comp_sum(pts, a.tree.root(), q, dims);
        }
        plus_opt(
            self.comp_sum(pts, n.left, q, dims),
            self.comp_sum(pts, n.right, q, dims),
        )
    }

    fn comp_top(&self, pts: &Points<W>, q: &[Dist], k: usize, dims: usize) -> Vec<ItemId> {
        let lvl = self.tree.level();
        let ql = key_lo(q[lvl]);
        let mut cands = self.tree.top_k_range(pts, ql, key_hi(Dist::MAX), k).0;
        if !self.is_last(dims) {
            let mut stack = vec![self.tree.root()];
            while let Some(u) = stack.pop() {
                crate::metrics::visit();
                let n = self.tree.node(u);
                if n.lo >= ql {
                    continue;
                }
                if n.hi < ql {
                    if n.is_leaf() {
                        if pts.in_complement(n.item, q, lvl + 1) {
                            cands.push(n.item);
                        }
                    } else {
                        cands.extend(self.aux(u).comp_top(pts, q, k, dims));
                    }
                    continue;
                }
                stack.push(n.right);
                stack.push(n.left);
            }
        }
        pts.best_k(cands, k)
    }

    fn comp_report(&self, pts: &Points<W>, u: u32, q: &[Dist], dims: usize, out: &mut Vec<ItemId>) {
        let lvl = self.tree.level();
        let ql = key_lo(q[lvl]);
        let n = self.tree.node(u);
        if n.lo >= ql {
            out.extend(self.tree.items_under(u));
        } else if n.hi < ql {
            if self.is_last(dims) {
                return;
            }
            if n.is_leaf() {
                if pts.in_complement(n.item, q, lvl + 1) {
                    out.push(n.item);
                }
                return;
            }
            let a = self.aux(u);
            a.comp_report(pts, a.tree.root(), q, dims, out);
        } else {
            self.comp_report(pts, n.left, q, dims, out);
            self.comp_report(pts, n.right, q, dims, out);
        }
    }

    fn node_total(&self) -> usize {
        let mut total = self.tree.node_count();
        if self.tree.root() == NIL {
            return total;
        }
        let mut stack = vec![self.tree.root()];
        while let Some(u) = stack.pop() {
            let n = self.tree.node(u);
            if let Some(a) = &n.aux {
                total += a.node_total();
            }
            if !n.is_leaf() {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
        total
    }

    #[cfg(test)]
    fn check(&self, pts: &Points<W>, dims: usize) -> std::result::Result<(), String> {
        self.tree.check(pts, |a, b| a == b)?;
        if self.tree.root() == NIL || self.is_last(dims) {
            return Ok(());
        }
        let next = self.tree.level() + 1;
        let mut stack = vec![self.tree.root()];
        while let Some(u) = stack.pop() {
            let n = self.tree.node(u);
            if n.is_leaf() {
                if n.aux.is_some() {
                    return Err("leaf carries a secondary tree".into());
                }
                continue;
            }
            let a = n.aux.as_deref().ok_or("internal node without secondary tree")?;
            let mut mine = self.tree.items_under(u);
            mine.sort_by_key(|&x| pts.key(x, next));
            let root = a.tree.root();
            if root == NIL || a.tree.items_under(root) != mine {
                return Err(format!("secondary tree at node {u} holds the wrong tuples"));
            }
            a.check(pts, dims)?;
            stack.push(n.left);
            stack.push(n.right);
        }
        Ok(())
    }
}

fn merge_by(a: &[ItemId], b: &[ItemId], key: impl Fn(ItemId) -> Key) -> Vec<ItemId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if key(a[i]) <= key(b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A `t'`-dimensional range-sum priority search tree with a facility index.
#[derive(Clone, Debug)]
pub struct MultiDimStore<W> {
    dims: usize,
    points: Points<W>,
    index: FacilityIndex,
    top: Level<W>,
}

impl<W: Semigroup + Ord> MultiDimStore<W> {
    pub fn new(dims: usize) -> Self {
        assert!(dims >= 1, "a store needs at least one dimension");
        MultiDimStore {
            dims,
            points: Points(Slab::default()),
            index: FacilityIndex::default(),
            top: Level {
                tree: WbTree::new(0),
            },
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn insert(&mut self, coords: Vec<Dist>, f: FacilityId, w: W) -> Result<()> {
        if coords.len() != self.dims {
            return Err(Error::Dimension {
                expected: self.dims,
                got: coords.len(),
            });
        }
        if self.index.contains(f) {
            return Err(Error::DuplicateFacility(f));
        }
        let it = self.points.0.insert(Tuple { coords, f, w });
        self.index.insert(f, it)?;
        self.top.insert(&self.points, it, self.dims);
        Ok(())
    }

    pub fn delete(&mut self, f: FacilityId) -> Result<Tuple<W>> {
        let it = self.index.remove(f)?;
        self.top.delete(&self.points, it, self.dims);
        Ok(self.points.0.remove(it).expect("index and slab agree"))
    }

    pub fn get(&self, f: FacilityId) -> Option<&Tuple<W>> {
        self.points.0.get(self.index.get(f)?)
    }

    pub fn facilities(&self) -> impl Iterator<Item = FacilityId> + '_ {
        self.index.facilities()
    }

    /// Nodes across every level tree.
    pub fn node_count(&self) -> usize {
        self.top.node_total()
    }

    fn out(&self, ids: Vec<ItemId>, k: usize) -> Vec<(FacilityId, W)> {
        let c = ids
            .into_iter()
            .map(|i| {
                let t = self.points.0.at(i);
                (t.f, t.w.clone())
            })
            .collect();
        select::top_k(c, k)
    }

    fn valid_box(&self, bx: &[(Dist, Dist)]) -> bool {
        assert_eq!(bx.len(), self.dims, "box dimension");
        !self.top.tree.is_empty() && bx.iter().all(|(l, r)| l <= r)
    }

    /// Semigroup sum over tuples in the closed box.
    pub fn box_sum(&self, bx: &[(Dist, Dist)]) -> Option<W> {
        if !self.valid_box(bx) {
            return None;
        }
        self.top.box_sum(&self.points, self.top.tree.root(), bx, self.dims)
    }

    /// The `k` heaviest tuples in the closed box, heaviest first.
    pub fn box_top_k(&self, bx: &[(Dist, Dist)], k: usize) -> Vec<(FacilityId, W)> {
        if k == 0 || !self.valid_box(bx) {
            return Vec::new();
        }
        self.out(self.top.box_top(&self.points, bx, k, self.dims), k)
    }

    fn check_corner(&self, q: &OrthantComplement) {
        assert_eq!(q.corner.len(), self.dims, "corner dimension");
    }

    pub fn complement_sum_direct(&self, q: &OrthantComplement) -> Option<W> {
        self.check_corner(q);
        if self.top.tree.is_empty() {
            return None;
        }
        self.top
            .comp_sum(&self.points, self.top.tree.root(), &q.corner, self.dims)
    }

    pub fn complement_top_k_direct(&self, q: &OrthantComplement, k: usize) -> Vec<(FacilityId, W)> {
        self.check_corner(q);
        if k == 0 || self.top.tree.is_empty() {
            return Vec::new();
        }
        self.out(self.top.comp_top(&self.points, &q.corner, k, self.dims), k)
    }

    pub fn complement_sum_boxes(&self, q: &OrthantComplement) -> Option<W> {
        self.check_corner(q);
        q.boxes()
            .iter()
            .fold(None, |acc, b| plus_opt(acc, self.box_sum(b)))
    }

    pub fn complement_top_k_boxes(&self, q: &OrthantComplement, k: usize) -> Vec<(FacilityId, W)> {
        self.check_corner(q);
        if k == 0 || self.top.tree.is_empty() {
            return Vec::new();
        }
        let mut cands = Vec::new();
        for b in q.boxes() {
            if self.valid_box(&b) {
                cands.extend(self.top.box_top(&self.points, &b, k, self.dims));
            }
        }
        self.out(cands, k)
    }

    pub fn complement_sum(&self, q: &OrthantComplement, strategy: ComplementStrategy) -> Option<W> {
        match strategy {
            ComplementStrategy::Direct => self.complement_sum_direct(q),
            ComplementStrategy::Boxes => self.complement_sum_boxes(q),
        }
    }

    pub fn complement_top_k(
        &self,
        q: &OrthantComplement,
        k: usize,
        strategy: ComplementStrategy,
    ) -> Vec<(FacilityId, W)> {
        match strategy {
            ComplementStrategy::Direct => self.complement_top_k_direct(q, k),
            ComplementStrategy::Boxes => self.complement_top_k_boxes(q, k),
        }
    }

    /// Every facility in the region, one entry per matching tuple.
    pub fn report_complement(&self, q: &OrthantComplement) -> Vec<FacilityId> {
        self.check_corner(q);
        let mut ids = Vec::new();
        if !self.top.tree.is_empty() {
            self.top
                .comp_report(&self.points, self.top.tree.root(), &q.corner, self.dims, &mut ids);
        }
        ids.into_iter().map(|i| self.points.0.at(i).f).collect()
    }

    #[cfg(test)]
    fn check(&self) -> std::result::Result<(), String> {
        self.top.check(&self.points, self.dims)?;
        if self.top.tree.len() != self.index.len() || self.points.0.len() != self.index.len() {
            return Err("index, slab and tree sizes differ".into());
        }
        Ok(())
    }
}
