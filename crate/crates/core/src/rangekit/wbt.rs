//! Leaf-oriented weight-balanced search tree with priority-search slots.
//!
//! Every structure in the crate runs on this engine. Items live in leaves,
//! ordered by a `(coordinate, tie)` key taken from an external item source.
//! Each node keeps the semigroup total of its leaves, and when the item source
//! is ranked each node also holds at most one item in its heap slot: the best
//! item of its subtree that is not already held by an ancestor.
//!
//! Balance is BB[α] with partial rebuilding: after an update the highest node
//! on the update path whose lighter child holds fewer than α of its leaves is
//! rebuilt into a perfectly balanced subtree. The engine reports that node
//! instead of rebuilding it on its own, so owners that hang secondary
//! structures off nodes can keep them in step.

use crate::metrics;

pub(crate) const NIL: u32 = u32::MAX;

/// Balance parameter, as a percentage.
pub const ALPHA_PERCENT: u64 = 29;

/// Search key: coordinate first, then a tie-breaking id.
pub type Key = (i64, u64);

/// Smallest key with coordinate `x`.
pub fn key_lo(x: i64) -> Key {
    (x, 0)
}

/// Largest key with coordinate `x`.
pub fn key_hi(x: i64) -> Key {
    (x, u64::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

const NO_ITEM: ItemId = ItemId(u32::MAX);

/// Source of keys, weights and priorities for the items a tree indexes.
pub trait Items {
    type Sum: Clone;
    /// Whether trees over these items maintain heap slots.
    const RANKED: bool;

    fn key(&self, item: ItemId, level: usize) -> Key;
    fn summary(&self, item: ItemId) -> Self::Sum;
    fn combine(a: &Self::Sum, b: &Self::Sum) -> Self::Sum;
    /// Strict priority order. Only consulted when `RANKED`.
    fn outranks(&self, a: ItemId, b: ItemId) -> bool;
}

#[derive(Clone, Debug)]
pub(crate) struct Node<S, A> {
    pub left: u32,
    pub right: u32,
    pub leaves: u32,
    pub lo: Key,
    pub hi: Key,
    pub item: ItemId,
    pub sum: S,
    pub slot: Option<ItemId>,
    pub aux: A,
}

impl<S, A> Node<S, A> {
    pub fn is_leaf(&self) -> bool {
        self.left == NIL
    }
}

/// Heap-size statistics of one top-k query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TopKStats {
    pub seeds: usize,
    pub peak_heap: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct WbTree<S, A> {
    nodes: Vec<Option<Node<S, A>>>,
    free: Vec<u32>,
    root: u32,
    level: usize,
}

impl<S: Clone, A: Default> WbTree<S, A> {
    pub fn new(level: usize) -> Self {
        WbTree {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            level,
        }
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        if self.root == NIL {
            0
        } else {
            self.node(self.root).leaves as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    #[inline]
    pub fn node(&self, u: u32) -> &Node<S, A> {
        self.nodes[u as usize].as_ref().expect("live node")
    }

    #[inline]
    pub fn node_mut(&mut self, u: u32) -> &mut Node<S, A> {
        self.nodes[u as usize].as_mut().expect("live node")
    }

    /// Number of live nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn height(&self) -> usize {
        fn go<S, A>(t: &[Option<Node<S, A>>], u: u32) -> usize {
            let n = t[u as usize].as_ref().unwrap();
            if n.is_leaf() {
                0
            } else {
                1 + go(t, n.left).max(go(t, n.right))
            }
        }
        if self.root == NIL {
            0
        } else {
            go(&self.nodes, self.root)
        }
    }

    fn alloc(&mut self, node: Node<S, A>) -> u32 {
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = Some(node);
                i
            }
            None => {
                self.nodes.push(Some(node));
                (self.nodes.len() - 1) as u32
            }
        }
    }

    fn release(&mut self, u: u32) -> Node<S, A> {
        self.free.push(u);
        self.nodes[u as usize].take().expect("live node")
    }

    fn leaf_node<I: Items<Sum = S>>(&self, items: &I, it: ItemId) -> Node<S, A> {
        let k = items.key(it, self.level);
        Node {
            left: NIL,
            right: NIL,
            leaves: 1,
            lo: k,
            hi: k,
            item: it,
            sum: items.summary(it),
            slot: None,
            aux: A::default(),
        }
    }

    fn pull<I: Items<Sum = S>>(&mut self, u: u32) {
        let (l, r) = {
            let n = self.node(u);
            (n.left, n.right)
        };
        let (ll, llo, lsum) = {
            let n = self.node(l);
            (n.leaves, n.lo, n.sum.clone())
        };
        let (rl, rhi) = {
            let n = self.node(r);
            (n.leaves, n.hi)
        };
        let sum = I::combine(&lsum, &self.node(r).sum);
        let n = self.node_mut(u);
        n.leaves = ll + rl;
        n.lo = llo;
        n.hi = rhi;
        n.sum = sum;
    }

    #[inline]
    fn toward(&self, u: u32, k: Key) -> u32 {
        let n = self.node(u);
        if k <= self.node(n.left).hi {
            n.left
        } else {
            n.right
        }
    }

    fn balanced(&self, u: u32) -> bool {
        let n = self.node(u);
        if n.is_leaf() {
            return true;
        }
        let lighter = self.node(n.left).leaves.min(self.node(n.right).leaves) as u64;
        100 * lighter >= ALPHA_PERCENT * n.leaves as u64
    }

    /// Highest node of `path` that violates the balance condition.
    pub fn scapegoat(&self, path: &[u32]) -> Option<u32> {
        path.iter().copied().find(|&u| !self.balanced(u))
    }

    /// Inserts a leaf for `it`. Returns the root-to-leaf path; the last entry
    /// is the new leaf and, unless the tree was empty, the one before it is a
    /// freshly created internal node.
    pub fn insert<I: Items<Sum = S>>(&mut self, items: &I, it: ItemId) -> Vec<u32> {
        let key = items.key(it, self.level);
        if self.root == NIL {
            let mut leaf = self.leaf_node(items, it);
            if I::RANKED {
                leaf.slot = Some(it);
            }
            self.root = self.alloc(leaf);
            return vec![self.root];
        }
        let mut path = Vec::new();
        let mut u = self.root;
        loop {
            path.push(u);
            if self.node(u).is_leaf() {
                break;
            }
            u = self.toward(u, key);
        }
        let old = {
            let n = self.node(u);
            Node {
                left: NIL,
                right: NIL,
                leaves: 1,
                lo: n.lo,
                hi: n.hi,
                item: n.item,
                sum: n.sum.clone(),
                slot: None,
                aux: A::default(),
            }
        };
        debug_assert!(key != old.lo, "duplicate key");
        let goes_left = key < old.lo;
        let moved = self.alloc(old);
        let fresh = self.leaf_node(items, it);
        let fresh = self.alloc(fresh);
        {
            let n = self.node_mut(u);
            n.item = NO_ITEM;
            if goes_left {
                n.left = fresh;
                n.right = moved;
            } else {
                n.left = moved;
                n.right = fresh;
            }
        }
        for &p in path.iter().rev() {
            self.pull::<I>(p);
        }
        path.push(fresh);
        if I::RANKED {
            self.sift_in(items, self.root, it);
        }
        path
    }

    /// Removes the leaf of `it`. Returns the internal ancestors whose
    /// subtrees lost the item, root first.
    pub fn delete<I: Items<Sum = S>>(&mut self, items: &I, it: ItemId) -> Vec<u32> {
        let key = items.key(it, self.level);
        assert!(self.root != NIL, "delete from empty tree");
        if I::RANKED {
            let mut u = self.root;
            loop {
                if self.node(u).slot == Some(it) {
                    self.vacate(items, u);
                    break;
                }
                assert!(!self.node(u).is_leaf(), "item missing from heap slots");
                u = self.toward(u, key);
            }
        }
        let mut path = Vec::new();
        let mut u = self.root;
        loop {
            path.push(u);
            if self.node(u).is_leaf() {
                break;
            }
            u = self.toward(u, key);
        }
        assert_eq!(self.node(u).item, it, "item not found");
        if path.len() == 1 {
            self.release(u);
            self.root = NIL;
            return Vec::new();
        }
        let leaf = path.pop().unwrap();
        let parent = path.pop().unwrap();
        let sibling = {
            let n = self.node(parent);
            if n.left == leaf {
                n.right
            } else {
                n.left
            }
        };
        let orphan = self.node_mut(parent).slot.take();
        let sib = self.release(sibling);
        self.release(leaf);
        self.nodes[parent as usize] = Some(sib);
        if let Some(q) = orphan {
            self.sift_in(items, parent, q);
        }
        for &p in path.iter().rev() {
            self.pull::<I>(p);
        }
        path
    }

    /// Pushes `it` into the heap slots starting at `start`, displacing
    /// lower-ranked items downward toward their own leaves.
    fn sift_in<I: Items<Sum = S>>(&mut self, items: &I, start: u32, it: ItemId) {
        let mut carry = it;
        let mut u = start;
        loop {
            match self.node(u).slot {
                None => {
                    self.node_mut(u).slot = Some(carry);
                    return;
                }
                Some(s) => {
                    if items.outranks(carry, s) {
                        self.node_mut(u).slot = Some(carry);
                        carry = s;
                    }
                }
            }
            debug_assert!(!self.node(u).is_leaf());
            u = self.toward(u, items.key(carry, self.level));
        }
    }

    /// Empties the slot at `u`, pulling the better child slot up repeatedly.
    fn vacate<I: Items<Sum = S>>(&mut self, items: &I, mut u: u32) {
        loop {
            let (l, r) = {
                let n = self.node(u);
                (n.left, n.right)
            };
            if l == NIL {
                self.node_mut(u).slot = None;
                return;
            }
            let pick = match (self.node(l).slot, self.node(r).slot) {
                (None, None) => {
                    self.node_mut(u).slot = None;
                    return;
                }
                (Some(_), None) => l,
                (None, Some(_)) => r,
                (Some(a), Some(b)) => {
                    if items.outranks(a, b) {
                        l
                    } else {
                        r
                    }
                }
            };
            let up = self.node(pick).slot;
            self.node_mut(u).slot = up;
            u = pick;
        }
    }

    fn collect(&self, u: u32, leaves: &mut Vec<ItemId>, slotted: &mut Vec<ItemId>, nodes: &mut Vec<u32>) {
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            let n = self.node(x);
            nodes.push(x);
            if let Some(s) = n.slot {
                slotted.push(s);
            }
            if n.is_leaf() {
                leaves.push(n.item);
            } else {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
    }

    /// Items of the subtree at `u`, in key order.
    pub fn items_under(&self, u: u32) -> Vec<ItemId> {
        let mut out = Vec::with_capacity(self.node(u).leaves as usize);
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            let n = self.node(x);
            if n.is_leaf() {
                out.push(n.item);
            } else {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
        out
    }

    /// Builds a tree from items already sorted by key.
    pub fn build<I: Items<Sum = S>>(&mut self, items: &I, sorted: &[ItemId]) {
        assert!(self.root == NIL, "build into non-empty tree");
        if sorted.is_empty() {
            return;
        }
        self.root = self.build_rec(items, sorted, &|_| true);
    }

    /// Rebuilds the subtree at `u` perfectly balanced, keeping `u` as its
    /// root index. Secondary structures on the rebuilt nodes are reset.
    pub fn rebuild<I: Items<Sum = S>>(&mut self, items: &I, u: u32) {
        let mut leaves = Vec::new();
        let mut slotted = Vec::new();
        let mut old = Vec::new();
        self.collect(u, &mut leaves, &mut slotted, &mut old);
        slotted.sort_unstable();
        for &x in old.iter().rev() {
            if x != u {
                self.release(x);
            }
        }
        let r = self.build_rec(items, &leaves, &|it| slotted.binary_search(&it).is_ok());
        let node = self.release(r);
        self.nodes[u as usize] = Some(node);
    }

    fn build_rec<I: Items<Sum = S>>(
        &mut self,
        items: &I,
        sorted: &[ItemId],
        in_heap: &dyn Fn(ItemId) -> bool,
    ) -> u32 {
        metrics::rebuilt(1);
        if sorted.len() == 1 {
            let mut leaf = self.leaf_node(items, sorted[0]);
            if I::RANKED && in_heap(sorted[0]) {
                leaf.slot = Some(sorted[0]);
            }
            return self.alloc(leaf);
        }
        let mid = sorted.len() / 2;
        let l = self.build_rec(items, &sorted[..mid], in_heap);
        let r = self.build_rec(items, &sorted[mid..], in_heap);
        let (lo, lsum) = {
            let n = self.node(l);
            (n.lo, n.sum.clone())
        };
        let (hi, sum) = {
            let n = self.node(r);
            (n.hi, I::combine(&lsum, &n.sum))
        };
        let u = self.alloc(Node {
            left: l,
            right: r,
            leaves: sorted.len() as u32,
            lo,
            hi,
            item: NO_ITEM,
            sum,
            slot: None,
            aux: A::default(),
        });
        if I::RANKED {
            self.vacate(items, u);
        }
        u
    }

    /// Semigroup fold over leaves with keys in `[lo, hi]`, in key order.
    pub fn fold_range<I: Items<Sum = S>>(&self, lo: Key, hi: Key) -> Option<S> {
        if self.root == NIL || lo > hi {
            return None;
        }
        self.fold_rec::<I>(self.root, lo, hi)
    }

    fn fold_rec<I: Items<Sum = S>>(&self, u: u32, lo: Key, hi: Key) -> Option<S> {
        metrics::visit();
        let n = self.node(u);
        if n.hi < lo || hi < n.lo {
            return None;
        }
        if lo <= n.lo && n.hi <= hi {
            return Some(n.sum.clone());
        }
        let a = self.fold_rec::<I>(n.left, lo, hi);
        let b = self.fold_rec::<I>(n.right, lo, hi);
        match (a, b) {
            (Some(a), Some(b)) => Some(I::combine(&a, &b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    /// Every item with key in `[lo, hi]`, in key order.
    pub fn report_range(&self, lo: Key, hi: Key, out: &mut Vec<ItemId>) {
        if self.root == NIL || lo > hi {
            return;
        }
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            metrics::visit();
            let n = self.node(u);
            if n.hi < lo || hi < n.lo {
                continue;
            }
            if n.is_leaf() {
                out.push(n.item);
            } else {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
    }

    /// The `k` highest-ranked items with keys in `[lo, hi]`, best first.
    ///
    /// Seeds a candidate heap with the in-range slots on the two boundary
    /// paths and the slots of the maximal subtrees between them; each
    /// extraction from a subtree seeds the two child slots below it.
    pub fn top_k_range<I: Items<Sum = S>>(
        &self,
        items: &I,
        lo: Key,
        hi: Key,
        k: usize,
    ) -> (Vec<ItemId>, TopKStats) {
        debug_assert!(I::RANKED);
        let mut stats = TopKStats::default();
        if self.root == NIL || k == 0 || lo > hi {
            return (Vec::new(), stats);
        }
        let mut heap = CandHeap::new(items);
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            metrics::visit();
            let n = self.node(u);
            if n.hi < lo || hi < n.lo {
                continue;
            }
            if lo <= n.lo && n.hi <= hi {
                if let Some(s) = n.slot {
                    heap.push(s, u, true);
                }
                continue;
            }
            if let Some(s) = n.slot {
                let ks = items.key(s, self.level);
                if lo <= ks && ks <= hi {
                    heap.push(s, u, false);
                }
            }
            stack.push(n.right);
            stack.push(n.left);
        }
        stats.seeds = heap.len();
        stats.peak_heap = heap.len();
        let mut out = Vec::with_capacity(k.min(16));
        while out.len() < k {
            let Some((it, u, expand)) = heap.pop() else {
                break;
            };
            out.push(it);
            if expand {
                let n = self.node(u);
                if !n.is_leaf() {
                    for c in [n.left, n.right] {
                        metrics::visit();
                        if let Some(s) = self.node(c).slot {
                            heap.push(s, c, true);
                        }
                    }
                }
            }
            stats.peak_heap = stats.peak_heap.max(heap.len());
        }
        (out, stats)
    }

    /// Checks ordering, cached aggregates, balance and heap placement.
    #[cfg(test)]
    pub fn check<I: Items<Sum = S>>(&self, items: &I, eq: impl Fn(&S, &S) -> bool) -> Result<(), String> {
        if self.root == NIL {
            return Ok(());
        }
        let mut seen = 0usize;
        let mut slots = 0usize;
        self.check_rec(items, self.root, None, &eq, &mut seen, &mut slots)?;
        if I::RANKED && slots != seen {
            return Err(format!("{slots} heap slots for {seen} items"));
        }
        Ok(())
    }

    #[cfg(test)]
    fn check_rec<I: Items<Sum = S>>(
        &self,
        items: &I,
        u: u32,
        above: Option<ItemId>,
        eq: &impl Fn(&S, &S) -> bool,
        seen: &mut usize,
        slots: &mut usize,
    ) -> Result<(), String> {
        let n = self.node(u);
        if let Some(s) = n.slot {
            *slots += 1;
            let ks = items.key(s, self.level);
            if ks < n.lo || n.hi < ks {
                return Err(format!("slot item outside subtree at node {u}"));
            }
            if let Some(a) = above {
                if !items.outranks(a, s) {
                    return Err(format!("heap order broken at node {u}"));
                }
            }
        } else if !n.is_leaf() {
            let l = self.node(n.left).slot;
            let r = self.node(n.right).slot;
            if l.is_some() || r.is_some() {
                return Err(format!("empty slot above filled slot at node {u}"));
            }
        }
        let above = n.slot.or(above);
        if n.is_leaf() {
            *seen += 1;
            let k = items.key(n.item, self.level);
            if k != n.lo || k != n.hi || n.leaves != 1 {
                return Err(format!("leaf {u} has stale key bounds"));
            }
            if !eq(&n.sum, &items.summary(n.item)) {
                return Err(format!("leaf {u} has stale sum"));
            }
            return Ok(());
        }
        let (l, r) = (self.node(n.left), self.node(n.right));
        if l.hi >= r.lo {
            return Err(format!("keys out of order at node {u}"));
        }
        if n.lo != l.lo || n.hi != r.hi || n.leaves != l.leaves + r.leaves {
            return Err(format!("stale bounds at node {u}"));
        }
        if !eq(&n.sum, &I::combine(&l.sum, &r.sum)) {
            return Err(format!("stale sum at node {u}"));
        }
        if !self.balanced(u) {
            return Err(format!("node {u} out of balance ({} vs {})", l.leaves, r.leaves));
        }
        self.check_rec(items, n.left, above, eq, seen, slots)?;
        self.check_rec(items, n.right, above, eq, seen, slots)
    }
}

/// Binary max-heap of `(item, node, expandable)` ordered by item rank.
struct CandHeap<'a, I> {
    items: &'a I,
    data: Vec<(ItemId, u32, bool)>,
}

impl<'a, I: Items> CandHeap<'a, I> {
    fn new(items: &'a I) -> Self {
        CandHeap {
            items,
            data: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.data.len()
    }

    fn better(&self, i: usize, j: usize) -> bool {
        self.items.outranks(self.data[i].0, self.data[j].0)
    }

    fn push(&mut self, it: ItemId, u: u32, expand: bool) {
        self.data.push((it, u, expand));
        let mut i = self.data.len() - 1;
        while i > 0 {
            let p = (i - 1) / 2;
            if self.better(i, p) {
                self.data.swap(i, p);
                i = p;
            } else {
                break;
            }
        }
    }

    fn pop(&mut self) -> Option<(ItemId, u32, bool)> {
        if self.data.is_empty() {
            return None;
        }
        let top = self.data.swap_remove(0);
        let n = self.data.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < n && self.better(l, best) {
                best = l;
            }
            if r < n && self.better(r, best) {
                best = r;
            }
            if best == i {
                break;
            }
            self.data.swap(i, best);
            i = best;
        }
        Some(top)
    }
}
