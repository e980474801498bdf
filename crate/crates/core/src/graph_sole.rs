//! SOLE structure for graphs with a t-separator decomposition.
//!
//! The decomposition tree `C` is decomposed into a centroid tree `T`, whose
//! internal nodes are edges of `C`. Each internal node `e` gets a node store
//! and a distance table holding, for every vertex homed below `e`, its
//! distances to the bag `S_e`; each edge of `T` gets an edge store whose
//! dimension is the bag size of its upper node. Stores are
//! multi-dimensional range-sum priority search trees.
//!
//! A facility of radius `d` on `v` becomes the tuple
//! `(d - dist(v, s_1), ..., d - dist(v, s_t'))` at every node on the path to
//! `v`'s home edge, in the node store and the off-path child edge store, and
//! in both child edge stores at the home edge itself. A query at `v` reads
//! the on-path child edge stores and the node store of its home edge with
//! the orthant-complement corner `(dist(v, s_j) - d)_j`.

use std::collections::HashMap;

use crate::decomp::{
    build_centroid_tree, validate_separator_decomposition, CentroidTree, CtNode,
    SeparatorDecomposition, MAX_WIDTH,
};
use crate::error::Result;
use crate::graph::{Dist, Graph};
use crate::multidim::{ComplementStrategy, MultiDimStore, OrthantComplement};
use crate::registry::Registry;
use crate::semigroup::{plus_opt, Semigroup};
use crate::{metrics, select, FacilityId, Sole};

/// Node of `T` named in terms of the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TPart {
    /// Internal node: an edge of `C`, by index.
    CEdge(usize),
    /// Leaf: a node of `C`, by index.
    CNode(usize),
}

/// A store: the node store of a decomposition edge, or the edge store
/// between a decomposition edge and one of its children in `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphStore {
    Node(usize),
    Edge { parent: usize, child: TPart },
}

#[derive(Clone, Copy, Debug)]
struct Step {
    node: usize,
    /// Child of `node` toward the home edge; `None` at the home edge.
    side: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GraphSole<W> {
    g: Graph,
    dec: SeparatorDecomposition,
    ct: CentroidTree,
    home: Vec<usize>,
    paths: Vec<Vec<Step>>,
    /// Distance tables, per node of `T`.
    tables: Vec<HashMap<usize, Vec<Dist>>>,
    node_stores: Vec<Option<MultiDimStore<W>>>,
    /// Indexed by the lower node of the edge of `T`.
    edge_stores: Vec<Option<MultiDimStore<W>>>,
    placed: Registry,
    strategy: ComplementStrategy,
}

impl<W: Semigroup + Ord> GraphSole<W> {
    /// Validates `dec` against `g` (bags of at most [`MAX_WIDTH`]
    /// vertices), builds `T` and fills the distance tables with one
    /// shortest-path search per distinct bag vertex.
    pub fn new(g: &Graph, dec: &SeparatorDecomposition) -> Result<Self> {
        validate_separator_decomposition(g, dec, MAX_WIDTH).into_result()?;
        let pairs: Vec<(usize, usize)> = dec.edges.iter().map(|e| (e.a, e.b)).collect();
        let ct = build_centroid_tree(dec.node_count(), &pairs)?;
        let n = g.n();
        let home: Vec<usize> = dec
            .homes(n)
            .into_iter()
            .map(|h| h.expect("validated decomposition covers every vertex"))
            .collect();

        let mut paths = Vec::with_capacity(n);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); ct.len()];
        for (v, &h) in home.iter().enumerate() {
            let p = ct.path_to(ct.node_of_edge(h));
            let mut steps = Vec::with_capacity(p.len());
            for (i, &x) in p.iter().enumerate() {
                let side = p.get(i + 1).map(|&y| {
                    let ch = ct.children(x).expect("path nodes are internal");
                    usize::from(ch[1] == y)
                });
                steps.push(Step { node: x, side });
                members[x].push(v);
            }
            paths.push(steps);
        }

        let mut tables: Vec<HashMap<usize, Vec<Dist>>> = vec![HashMap::new(); ct.len()];
        let mut uses: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for x in 0..ct.len() {
            if let CtNode::Internal { edge, .. } = *ct.node(x) {
                let bag = &dec.edges[edge].bag;
                for &v in &members[x] {
                    tables[x].insert(v, vec![0; bag.len()]);
                }
                for (j, &s) in bag.iter().enumerate() {
                    uses.entry(s).or_default().push((x, j));
                }
            }
        }
        let mut sources: Vec<usize> = uses.keys().copied().collect();
        sources.sort_unstable();
        for s in sources {
            let row = g.dijkstra(s);
            for &(x, j) in &uses[&s] {
                for (&v, dists) in tables[x].iter_mut() {
                    dists[j] = row[v];
                }
            }
        }

        let mut node_stores: Vec<Option<MultiDimStore<W>>> = (0..ct.len()).map(|_| None).collect();
        let mut edge_stores: Vec<Option<MultiDimStore<W>>> = (0..ct.len()).map(|_| None).collect();
        for x in 0..ct.len() {
            if let CtNode::Internal { edge, children, .. } = *ct.node(x) {
                let t = dec.edges[edge].bag.len();
                if t > 0 {
                    node_stores[x] = Some(MultiDimStore::new(t));
                    for c in children {
                        edge_stores[c] = Some(MultiDimStore::new(t));
                    }
                }
            }
        }
        Ok(GraphSole {
            g: g.clone(),
            dec: dec.clone(),
            ct,
            home,
            paths,
            tables,
            node_stores,
            edge_stores,
            placed: Registry::new(n),
            strategy: ComplementStrategy::default(),
        })
    }

    pub fn with_strategy(mut self, strategy: ComplementStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn set_strategy(&mut self, strategy: ComplementStrategy) {
        self.strategy = strategy;
    }

    pub fn strategy(&self) -> ComplementStrategy {
        self.strategy
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn decomposition(&self) -> &SeparatorDecomposition {
        &self.dec
    }

    pub fn centroid_tree(&self) -> &CentroidTree {
        &self.ct
    }

    pub fn height(&self) -> usize {
        self.ct.height()
    }

    /// Home decomposition edge of vertex `v`.
    pub fn home(&self, v: usize) -> usize {
        self.home[v]
    }

    pub fn len(&self) -> usize {
        self.placed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placed.len() == 0
    }

    /// Entries across all distance tables.
    pub fn distance_entries(&self) -> usize {
        self.tables.iter().flat_map(|t| t.values()).map(|d| d.len()).sum()
    }

    /// Distances from `v` to the bag of decomposition edge `e`, when `v` is
    /// homed below `e`.
    pub fn distances(&self, e: usize, v: usize) -> Option<&[Dist]> {
        self.tables[self.ct.node_of_edge(e)].get(&v).map(|d| d.as_slice())
    }

    /// Tuples held across all stores.
    pub fn stored_tuples(&self) -> usize {
        self.node_stores
            .iter()
            .chain(&self.edge_stores)
            .flatten()
            .map(|s| s.len())
            .sum()
    }

    fn part(&self, x: usize) -> TPart {
        match *self.ct.node(x) {
            CtNode::Internal { edge, .. } => TPart::CEdge(edge),
            CtNode::Leaf { vertex } => TPart::CNode(vertex),
        }
    }

    fn edge_of(&self, x: usize) -> usize {
        match *self.ct.node(x) {
            CtNode::Internal { edge, .. } => edge,
            CtNode::Leaf { .. } => unreachable!("path nodes are internal"),
        }
    }

    fn child(&self, x: usize, side: usize) -> usize {
        self.ct.children(x).expect("path nodes are internal")[side]
    }

    fn name_store(&self, x: usize, child: Option<usize>) -> GraphStore {
        let e = self.edge_of(x);
        match child {
            None => GraphStore::Node(e),
            Some(c) => GraphStore::Edge {
                parent: e,
                child: self.part(c),
            },
        }
    }

    pub fn store_label(&self, s: GraphStore) -> String {
        let part = |p: TPart| match p {
            TPart::CEdge(e) => format!("cedge {e}"),
            TPart::CNode(c) => format!("cnode {}", self.dec.node_names[c]),
        };
        match s {
            GraphStore::Node(e) => format!("W[cedge {e}]"),
            GraphStore::Edge { parent, child } => format!("W[cedge {parent} -> {}]", part(child)),
        }
    }

    /// Stores a query at `v` reads, with their corners, root first.
    fn query_plan(&self, v: usize, d: Dist) -> Vec<(usize, Option<usize>, OrthantComplement)> {
        let mut plan = Vec::with_capacity(self.paths[v].len());
        for s in &self.paths[v] {
            let dists = &self.tables[s.node][&v];
            if dists.is_empty() {
                continue;
            }
            let corner = OrthantComplement::new(dists.iter().map(|x| x - d).collect());
            plan.push((s.node, s.side.map(|side| self.child(s.node, side)), corner));
        }
        plan
    }

    fn target(&self, x: usize, child: Option<usize>) -> Option<&MultiDimStore<W>> {
        match child {
            None => self.node_stores[x].as_ref(),
            Some(c) => self.edge_stores[c].as_ref(),
        }
    }

    /// Every `(store, facility)` match a reporting query at `v` would make.
    pub fn trace(&self, v: usize, d: Dist) -> Result<Vec<(GraphStore, FacilityId)>> {
        self.placed.query(v, d)?;
        let mut out = Vec::new();
        for (x, child, q) in self.query_plan(v, d) {
            if let Some(st) = self.target(x, child) {
                let name = self.name_store(x, child);
                out.extend(st.report_complement(&q).into_iter().map(|f| (name, f)));
            }
        }
        Ok(out)
    }

    /// Corners a query at `v` uses, per store read.
    pub fn query_corners(&self, v: usize, d: Dist) -> Result<Vec<(GraphStore, Vec<Dist>)>> {
        self.placed.query(v, d)?;
        Ok(self
            .query_plan(v, d)
            .into_iter()
            .map(|(x, c, q)| (self.name_store(x, c), q.corner))
            .collect())
    }

    /// Stores holding `f`, with the coordinates stored in each.
    pub fn stores_holding(&self, f: FacilityId) -> Vec<(GraphStore, Vec<Dist>)> {
        let Some(v) = self.placed.home(f) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for s in &self.paths[v] {
            let x = s.node;
            let mut places = vec![None];
            if let Some(ch) = self.ct.children(x) {
                places.extend(ch.map(Some));
            }
            for c in places {
                if let Some(t) = self.target(x, c).and_then(|st| st.get(f)) {
                    out.push((self.name_store(x, c), t.coords.clone()));
                }
            }
        }
        out
    }

    /// Child stores written by an update at `v` for path step `s`.
    fn writes(&self, s: &Step) -> Vec<usize> {
        match s.side {
            Some(side) => vec![self.child(s.node, 1 - side)],
            None => self.ct.children(s.node).expect("home is internal").to_vec(),
        }
    }
}

impl<W: Semigroup + Ord> Sole<W> for GraphSole<W> {
    fn add(&mut self, v: usize, f: FacilityId, w: W, d: Dist) -> Result<()> {
        self.placed.check_add(v, f, d)?;
        for i in 0..self.paths[v].len() {
            let s = self.paths[v][i];
            let r: Vec<Dist> = self.tables[s.node][&v].iter().map(|x| d - x).collect();
            if r.is_empty() {
                continue;
            }
            for c in self.writes(&s) {
                self.edge_stores[c]
                    .as_mut()
                    .expect("store exists for non-empty bag")
                    .insert(r.clone(), f, w.clone())?;
            }
            self.node_stores[s.node]
                .as_mut()
                .expect("store exists for non-empty bag")
                .insert(r, f, w.clone())?;
        }
        self.placed.place(v, f);
        Ok(())
    }

    fn remove(&mut self, v: usize, f: FacilityId) -> Result<()> {
        self.placed.take(v, f)?;
        for i in 0..self.paths[v].len() {
            let s = self.paths[v][i];
            if let Some(st) = self.node_stores[s.node].as_mut() {
                st.delete(f)?;
                for c in self.writes(&s) {
                    self.edge_stores[c].as_mut().unwrap().delete(f)?;
                }
            }
        }
        Ok(())
    }

    fn sum(&self, v: usize, d: Dist) -> Result<Option<W>> {
        self.placed.query(v, d)?;
        let mut acc = None;
        for (x, child, q) in self.query_plan(v, d) {
            if let Some(st) = self.target(x, child) {
                metrics::store_query();
                acc = plus_opt(acc, st.complement_sum(&q, self.strategy));
            }
        }
        Ok(acc)
    }

    fn top(&self, v: usize, k: usize, d: Dist) -> Result<Vec<(FacilityId, W)>> {
        self.placed.query(v, d)?;
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut cands = Vec::new();
        for (x, child, q) in self.query_plan(v, d) {
            if let Some(st) = self.target(x, child) {
                metrics::store_query();
                cands.extend(st.complement_top_k(&q, k, self.strategy));
            }
        }
        Ok(select::top_k(cands, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::decomp::{from_tree, from_tree_decomposition};
    use crate::gen;
    use crate::oracle::NaiveSole;
    use crate::semigroup::Add;
    use crate::tree_sole::TreeSole;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_vertex_graph() {
        let g = Graph::parse("v a\n").unwrap();
        let c = SeparatorDecomposition::parse("cnode x\ncnode y\ncedge x y a\n", &g).unwrap();
        let mut s: GraphSole<Add> = GraphSole::new(&g, &c).unwrap();
        assert_eq!(s.sum(0, 0).unwrap(), None);
        s.add(0, FacilityId(3), Add(2), 0).unwrap();
        assert_eq!(s.sum(0, 0).unwrap(), Some(Add(2)));
        s.remove(0, FacilityId(3)).unwrap();
        assert_eq!(s.stored_tuples(), 0);
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = Graph::parse("v a\nv b\ne a b 1\n").unwrap();
        let c = SeparatorDecomposition::parse("cnode x\ncnode y\ncedge x y a\n", &g).unwrap();
        assert!(matches!(GraphSole::<Add>::new(&g, &c), Err(Error::InvalidDecomposition(_))));
    }

    fn run(g: &Graph, c: &SeparatorDecomposition, rng: &mut ChaCha8Rng, ops: u64) {
        let n = g.n();
        let mut s: GraphSole<Add> = GraphSole::new(g, c).unwrap();
        let mut o = NaiveSole::new(g.clone());
        for x in 0..s.ct.len() {
            if let CtNode::Internal { edge, .. } = *s.ct.node(x) {
                for (&v, ds) in &s.tables[x] {
                    let want: Vec<Dist> = c.edges[edge].bag.iter().map(|&b| o.dist(v, b)).collect();
                    assert_eq!(ds, &want);
                }
            }
        }
        let mut live = Vec::new();
        for i in 0..ops {
            if live.is_empty() || rng.gen_bool(0.65) {
                let (v, w, d) = (rng.gen_range(0..n), Add(rng.gen_range(0..9)), rng.gen_range(0..30));
                s.add(v, FacilityId(i), w, d).unwrap();
                o.add(v, FacilityId(i), w, d).unwrap();
                live.push((v, FacilityId(i)));
            } else {
                let (v, f) = live.swap_remove(rng.gen_range(0..live.len()));
                s.remove(v, f).unwrap();
                o.remove(v, f).unwrap();
            }
            let (v, d) = (rng.gen_range(0..n), rng.gen_range(0..15));
            let want = o.sum(v, d).unwrap();
            let k = rng.gen_range(0..5);
            let want_top = o.top(v, k, d).unwrap();
            for strat in [ComplementStrategy::Direct, ComplementStrategy::Boxes] {
                s.set_strategy(strat);
                assert_eq!(s.sum(v, d).unwrap(), want);
                assert_eq!(s.top(v, k, d).unwrap(), want_top);
            }
            let mut tr: Vec<FacilityId> = s.trace(v, d).unwrap().into_iter().map(|p| p.1).collect();
            tr.sort();
            assert_eq!(tr, o.reaching(v, d).unwrap());
        }
        for (v, f) in live {
            s.remove(v, f).unwrap();
        }
        assert_eq!(s.stored_tuples(), 0);
    }

    #[test]
    fn matches_oracle_on_partial_2trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..8 {
            let n = rng.gen_range(2..40);
            let (g, td) = gen::random_partial_2tree(&mut rng, n, 10);
            let c = from_tree_decomposition(&g, &td).unwrap();
            run(&g, &c, &mut rng, 200);
        }
    }

    #[test]
    fn matches_oracle_on_2trees_from_branch_decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..5 {
            let n = rng.gen_range(2..40);
            let (g, bd) = gen::random_2tree_branch(&mut rng, n, 10);
            let c = crate::decomp::from_branch_decomposition(&g, &bd).unwrap();
            run(&g, &c, &mut rng, 200);
        }
    }

    #[test]
    fn agrees_with_tree_structure_on_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let n = rng.gen_range(1..60);
            let g = gen::random_tree(&mut rng, n, 3, 10);
            let c = from_tree(&g).unwrap();
            let mut gs: GraphSole<Add> = GraphSole::new(&g, &c).unwrap();
            let mut ts: TreeSole<Add> = TreeSole::new(&g).unwrap();
            for i in 0..150 {
                let (v, w, d) = (rng.gen_range(0..n), Add(rng.gen_range(0..9)), rng.gen_range(0..20));
                gs.add(v, FacilityId(i), w, d).unwrap();
                ts.add(v, FacilityId(i), w, d).unwrap();
                let (q, d) = (rng.gen_range(0..n), rng.gen_range(0..10));
                assert_eq!(gs.sum(q, d).unwrap(), ts.sum(q, d).unwrap());
                assert_eq!(gs.top(q, 3, d).unwrap(), ts.top(q, 3, d).unwrap());
            }
        }
    }
}
