//! SOLE structure for trees.
//!
//! The tree is first made degree-3 by expanding high-degree vertices into
//! zero-length paths, then decomposed into a centroid tree `T`. Every edge of
//! `T` carries a one-dimensional store of `(radius, facility, weight)`
//! triples and every leaf a store of the facilities placed on its vertex.
//!
//! A facility on `v` goes into the leaf store of `v` and, for each node on
//! the path from the root of `T` to `v`, into the store of the child edge
//! *off* that path, with its radius shifted down by the distance from `v` to
//! the far endpoint of the node's tree edge. A query at `v` reads the child
//! edges *on* the path, with the threshold shifted by the distance to the
//! near endpoint. Each facility is then counted in exactly one store: the
//! one below the highest node separating it from the query vertex.

use crate::decomp::{build_centroid_tree, reduce_to_degree3, CentroidTree, CtNode, Degree3Tree};
use crate::error::Result;
use crate::graph::{Dist, Graph};
use crate::rangekit::Store;
use crate::registry::Registry;
use crate::semigroup::{plus_opt, Semigroup};
use crate::{metrics, select, FacilityId, Sole};

/// One node on a root-to-leaf path of `T`.
#[derive(Clone, Copy, Debug)]
struct Step {
    node: usize,
    /// Child of `node` whose subtree holds the vertex.
    side: usize,
    /// Distance from the vertex to the endpoint on its side.
    near: Dist,
    /// Distance from the vertex to the endpoint on the other side.
    far: Dist,
}

/// A store of the structure: the leaf store of a vertex of the degree-3
/// tree, or the store on the edge of `T` above `child`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeStore {
    Leaf(usize),
    Edge { parent: usize, child: usize },
}

#[derive(Clone, Debug)]
pub struct TreeSole<W> {
    d3: Degree3Tree,
    ct: CentroidTree,
    steps: Vec<Vec<Step>>,
    /// Indexed by the lower node of the edge of `T`.
    edge_stores: Vec<Store<W>>,
    leaf_stores: Vec<Store<W>>,
    placed: Registry,
}

impl<W: Semigroup + Ord> TreeSole<W> {
    pub fn new(g: &Graph) -> Result<Self> {
        let d3 = reduce_to_degree3(g)?;
        let t = &d3.tree;
        let n3 = t.n();
        let pairs: Vec<(usize, usize)> = t.edges().iter().map(|e| (e.u, e.v)).collect();
        let ct = build_centroid_tree(n3, &pairs)?;

        // Walk every side of every split once to find distances to the
        // split edge's endpoints. Node ids grow downwards, so visiting them
        // in order appends steps root first.
        let mut steps: Vec<Vec<Step>> = vec![Vec::new(); n3];
        let mut stamp = vec![usize::MAX; n3];
        let mut dist = vec![0; n3];
        for x in 0..ct.len() {
            let CtNode::Internal {
                edge, ends, children, ..
            } = *ct.node(x)
            else {
                continue;
            };
            let len = t.edges()[edge].len;
            for side in 0..2 {
                let members = ct.vertices_under(children[side]);
                let tag = 2 * x + side;
                for &v in &members {
                    stamp[v] = tag;
                }
                dist[ends[side]] = 0;
                let mut stack = vec![ends[side]];
                stamp[ends[side]] = usize::MAX;
                while let Some(u) = stack.pop() {
                    for &(w, e) in t.neighbors(u) {
                        if stamp[w] == tag {
                            stamp[w] = usize::MAX;
                            dist[w] = dist[u] + t.edges()[e].len;
                            stack.push(w);
                        }
                    }
                }
                for &v in &members {
                    steps[v].push(Step {
                        node: x,
                        side,
                        near: dist[v],
                        far: dist[v] + len,
                    });
                }
            }
        }
        let nodes = ct.len();
        Ok(TreeSole {
            steps,
            edge_stores: (0..nodes).map(|_| Store::new()).collect(),
            leaf_stores: (0..n3).map(|_| Store::new()).collect(),
            placed: Registry::new(g.n()),
            d3,
            ct,
        })
    }

    pub fn degree3(&self) -> &Degree3Tree {
        &self.d3
    }

    pub fn centroid_tree(&self) -> &CentroidTree {
        &self.ct
    }

    pub fn height(&self) -> usize {
        self.ct.height()
    }

    /// Number of live facilities.
    pub fn len(&self) -> usize {
        self.placed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placed.len() == 0
    }

    fn child(&self, x: usize, side: usize) -> usize {
        self.ct.children(x).expect("path nodes are internal")[side]
    }

    fn store(&self, s: TreeStore) -> &Store<W> {
        match s {
            TreeStore::Leaf(v) => &self.leaf_stores[v],
            TreeStore::Edge { child, .. } => &self.edge_stores[child],
        }
    }

    /// The stores read by a query at original vertex `v`, with their
    /// thresholds, root first and the leaf store last.
    fn query_plan(&self, v: usize, d: Dist) -> Vec<(TreeStore, Dist)> {
        let x = self.d3.rep[v];
        let mut plan: Vec<_> = self.steps[x]
            .iter()
            .map(|s| {
                let child = self.child(s.node, s.side);
                (TreeStore::Edge { parent: s.node, child }, s.near - d)
            })
            .collect();
        plan.push((TreeStore::Leaf(x), Dist::MIN));
        plan
    }

    /// Every `(store, facility)` match a reporting query at `v` would make.
    /// Each reaching facility appears exactly once.
    pub fn trace(&self, v: usize, d: Dist) -> Result<Vec<(TreeStore, FacilityId)>> {
        self.placed.query(v, d)?;
        let mut out = Vec::new();
        for (s, q) in self.query_plan(v, d) {
            out.extend(self.store(s).report_suffix(q).into_iter().map(|f| (s, f)));
        }
        Ok(out)
    }

    /// Stores holding `f`, with the radius stored in each.
    pub fn stores_holding(&self, f: FacilityId) -> Vec<(TreeStore, Dist)> {
        let Some(v) = self.placed.home(f) else {
            return Vec::new();
        };
        let x = self.d3.rep[v];
        let mut cands = vec![TreeStore::Leaf(x)];
        for s in &self.steps[x] {
            for side in 0..2 {
                let child = self.child(s.node, side);
                cands.push(TreeStore::Edge { parent: s.node, child });
            }
        }
        cands
            .into_iter()
            .filter_map(|s| self.store(s).get(f).map(|t| (s, t.r)))
            .collect()
    }

    /// Triples held across all stores.
    pub fn stored_triples(&self) -> usize {
        self.edge_stores.iter().chain(&self.leaf_stores).map(|s| s.len()).sum()
    }

    /// Readable name of a node of `T`: a vertex, or an edge `(a,b)` of the
    /// degree-3 tree.
    pub fn node_label(&self, x: usize) -> String {
        let t = &self.d3.tree;
        match *self.ct.node(x) {
            CtNode::Leaf { vertex } => t.name(vertex).to_string(),
            CtNode::Internal { ends, .. } => format!("({},{})", t.name(ends[0]), t.name(ends[1])),
        }
    }

    pub fn store_label(&self, s: TreeStore) -> String {
        match s {
            TreeStore::Leaf(v) => format!("W[{}]", self.d3.tree.name(v)),
            TreeStore::Edge { parent, child } => {
                format!("W[{} -> {}]", self.node_label(parent), self.node_label(child))
            }
        }
    }
}

impl<W: Semigroup + Ord> Sole<W> for TreeSole<W> {
    fn add(&mut self, v: usize, f: FacilityId, w: W, d: Dist) -> Result<()> {
        self.placed.check_add(v, f, d)?;
        let x = self.d3.rep[v];
        for i in 0..self.steps[x].len() {
            let s = self.steps[x][i];
            let off = self.child(s.node, 1 - s.side);
            self.edge_stores[off].insert(d - s.far, f, w.clone())?;
        }
        self.leaf_stores[x].insert(d, f, w)?;
        self.placed.place(v, f);
        Ok(())
    }

    fn remove(&mut self, v: usize, f: FacilityId) -> Result<()> {
        self.placed.take(v, f)?;
        let x = self.d3.rep[v];
        for i in 0..self.steps[x].len() {
            let s = self.steps[x][i];
            let off = self.child(s.node, 1 - s.side);
            self.edge_stores[off].remove(f)?;
        }
        self.leaf_stores[x].remove(f)?;
        Ok(())
    }

    fn sum(&self, v: usize, d: Dist) -> Result<Option<W>> {
        self.placed.query(v, d)?;
        let mut acc = None;
        for (s, q) in self.query_plan(v, d) {
            metrics::store_query();
            acc = plus_opt(acc, self.store(s).suffix_sum(q));
        }
        Ok(acc)
    }

    fn top(&self, v: usize, k: usize, d: Dist) -> Result<Vec<(FacilityId, W)>> {
        self.placed.query(v, d)?;
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut cands = Vec::new();
        for (s, q) in self.query_plan(v, d) {
            metrics::store_query();
            cands.extend(self.store(s).suffix_top_k(q, k));
        }
        Ok(select::top_k(cands, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gen;
    use crate::oracle::NaiveSole;
    use crate::semigroup::Add;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path() -> Graph {
        Graph::parse("v a\nv b\nv c\ne a b 2\ne b c 3\n").unwrap()
    }

    #[test]
    fn two_vertex_tree() {
        let g = Graph::parse("v a\nv b\ne a b 3\n").unwrap();
        let mut s: TreeSole<Add> = TreeSole::new(&g).unwrap();
        s.add(0, FacilityId(1), Add(4), 5).unwrap();
        let held = s.stores_holding(FacilityId(1));
        assert_eq!(held.len(), 2);
        assert!(held.contains(&(TreeStore::Leaf(0), 5)));
        assert!(held.iter().any(|&(st, r)| matches!(st, TreeStore::Edge { .. }) && r == 2));
        assert_eq!(s.sum(1, 0).unwrap(), Some(Add(4)));
    }

    #[test]
    fn zero_radius_is_found_at_home() {
        let mut s: TreeSole<Add> = TreeSole::new(&path()).unwrap();
        s.add(1, FacilityId(1), Add(7), 0).unwrap();
        assert_eq!(s.sum(1, 0).unwrap(), Some(Add(7)));
        assert_eq!(s.sum(0, 0).unwrap(), None);
        assert_eq!(s.sum(0, 2).unwrap(), Some(Add(7)));
    }

    #[test]
    fn add_remove_empties_stores() {
        let mut s: TreeSole<Add> = TreeSole::new(&path()).unwrap();
        s.add(0, FacilityId(1), Add(10), 4).unwrap();
        assert_eq!(s.top(1, 2, 0).unwrap(), vec![(FacilityId(1), Add(10))]);
        assert_eq!(s.sum(2, 0).unwrap(), None);
        s.remove(0, FacilityId(1)).unwrap();
        assert_eq!(s.stored_triples(), 0);
        assert_eq!(s.sum(1, 0).unwrap(), None);
    }

    #[test]
    fn errors() {
        let mut s: TreeSole<Add> = TreeSole::new(&path()).unwrap();
        s.add(0, FacilityId(1), Add(1), 1).unwrap();
        assert_eq!(s.add(2, FacilityId(1), Add(1), 1), Err(Error::DuplicateFacility(FacilityId(1))));
        assert_eq!(s.sum(5, 0), Err(Error::UnknownVertex("5".into())));
        assert_eq!(s.sum(0, -1), Err(Error::NegativeRadius(-1)));
        assert!(matches!(s.remove(1, FacilityId(1)), Err(Error::WrongHome { .. })));
        assert_eq!(s.remove(0, FacilityId(2)), Err(Error::MissingFacility(FacilityId(2))));
        assert!(TreeSole::<Add>::new(&Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()).is_err());
    }

    #[test]
    fn matches_oracle_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let n = rng.gen_range(1..80);
            let g = gen::random_tree(&mut rng, n, 8, 10);
            let mut s: TreeSole<Add> = TreeSole::new(&g).unwrap();
            let mut o = NaiveSole::new(g.clone());
            let mut live: Vec<(usize, FacilityId)> = Vec::new();
            for i in 0..300u64 {
                if live.is_empty() || rng.gen_bool(0.65) {
                    let (v, w, d) = (rng.gen_range(0..n), Add(rng.gen_range(0..9)), rng.gen_range(0..25));
                    s.add(v, FacilityId(i), w, d).unwrap();
                    o.add(v, FacilityId(i), w, d).unwrap();
                    live.push((v, FacilityId(i)));
                } else {
                    let (v, f) = live.swap_remove(rng.gen_range(0..live.len()));
                    s.remove(v, f).unwrap();
                    o.remove(v, f).unwrap();
                }
                let (v, d) = (rng.gen_range(0..n), rng.gen_range(0..15));
                assert_eq!(s.sum(v, d).unwrap(), o.sum(v, d).unwrap());
                let k = rng.gen_range(0..5);
                assert_eq!(s.top(v, k, d).unwrap(), o.top(v, k, d).unwrap());
                let mut tr: Vec<FacilityId> = s.trace(v, d).unwrap().into_iter().map(|p| p.1).collect();
                tr.sort();
                assert_eq!(tr, o.reaching(v, d).unwrap());
            }
            for (f, v) in live.iter().map(|&(v, f)| (f, v)) {
                let depth = s.steps[s.d3.rep[v]].len();
                assert_eq!(s.stores_holding(f).len(), depth + 1);
            }
        }
    }
}
