use crate::error::{Error, Result};

/// Node of a centroid tree. Leaves stand for vertices of the decomposed
/// tree and internal nodes for its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtNode {
    Leaf {
        vertex: usize,
    },
    Internal {
        /// Index of the decomposed tree's edge.
        edge: usize,
        /// Endpoints of that edge; `children[j]` decomposes the side
        /// holding `ends[j]`.
        ends: [usize; 2],
        children: [usize; 2],
        /// Vertex counts of the two sides.
        sizes: [usize; 2],
    },
}

/// Binary centroid tree of an unrooted tree of maximum degree 3.
#[derive(Clone, Debug)]
pub struct CentroidTree {
    nodes: Vec<CtNode>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    root: usize,
    leaf_of: Vec<usize>,
    node_of_edge: Vec<usize>,
}

impl CentroidTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, x: usize) -> &CtNode {
        &self.nodes[x]
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[x]
    }

    pub fn children(&self, x: usize) -> Option<[usize; 2]> {
        match self.nodes[x] {
            CtNode::Internal { children, .. } => Some(children),
            CtNode::Leaf { .. } => None,
        }
    }

    /// Leaf standing for vertex `v`.
    pub fn leaf(&self, v: usize) -> usize {
        self.leaf_of[v]
    }

    /// Internal node standing for edge `e`.
    pub fn node_of_edge(&self, e: usize) -> usize {
        self.node_of_edge[e]
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Nodes from the root down to `x`, inclusive.
    pub fn path_to(&self, x: usize) -> Vec<usize> {
        let mut p = vec![x];
        let mut cur = x;
        while let Some(up) = self.parent[cur] {
            p.push(up);
            cur = up;
        }
        p.reverse();
        p
    }

    /// Which child of internal node `x` lies above descendant `y`.
    pub fn side_toward(&self, x: usize, y: usize) -> usize {
        let mut cur = y;
        while let Some(up) = self.parent[cur] {
            if up == x {
                let ch = self.children(x).expect("internal node");
                return usize::from(ch[1] == cur);
            }
            cur = up;
        }
        panic!("node {y} is not below {x}");
    }

    /// Vertices at the leaves under `x`.
    pub fn vertices_under(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(u) = stack.pop() {
            match self.nodes[u] {
                CtNode::Leaf { vertex } => out.push(vertex),
                CtNode::Internal { children, .. } => stack.extend(children),
            }
        }
        out
    }
}

/// Builds the centroid tree of the tree on `n` vertices with the given
/// edges. At each step the split edge minimises the larger side; ties go to
/// the smaller edge index.
pub fn build_centroid_tree(n: usize, edges: &[(usize, usize)]) -> Result<CentroidTree> {
    if n == 0 {
        return Err(Error::InvalidDecomposition("empty tree".into()));
    }
    if edges.len() + 1 != n {
        return Err(Error::InvalidDecomposition(format!(
            "{} vertices but {} edges, not a tree",
            n,
            edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= n || b >= n || a == b {
            return Err(Error::InvalidDecomposition(format!("bad edge {i}: ({a}, {b})")));
        }
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() > 3) {
        return Err(Error::InvalidDecomposition(format!(
            "vertex {v} has degree {}, at most 3 allowed",
            adj[v].len()
        )));
    }

    let mut ct = CentroidTree {
        nodes: Vec::with_capacity(2 * n - 1),
        parent: Vec::with_capacity(2 * n - 1),
        depth: Vec::with_capacity(2 * n - 1),
        root: 0,
        leaf_of: vec![usize::MAX; n],
        node_of_edge: vec![usize::MAX; edges.len()],
    };
    let mut cut = vec![false; edges.len()];
    let mut seen = vec![usize::MAX; n];
    let mut sub = vec![0usize; n];
    // (start vertex, parent node and child slot, depth)
    let mut work: Vec<(usize, Option<(usize, usize)>, usize)> = vec![(0, None, 0)];
    let mut round = 0;
    while let Some((start, up, depth)) = work.pop() {
        round += 1;
        // Component in DFS preorder with parent edges.
        let mut order = Vec::new();
        let mut via = Vec::new();
        let mut stack = vec![(start, usize::MAX)];
        seen[start] = round;
        while let Some((v, pe)) = stack.pop() {
            order.push(v);
            via.push(pe);
            for &(w, e) in &adj[v] {
                if !cut[e] && seen[w] != round {
                    seen[w] = round;
                    stack.push((w, e));
                }
            }
        }
        let size = order.len();
        let id = ct.nodes.len();
        ct.parent.push(up.map(|p| p.0));
        ct.depth.push(depth);
        if let Some((p, slot)) = up {
            if let CtNode::Internal { children, .. } = &mut ct.nodes[p] {
                children[slot] = id;
            }
        } else {
            ct.root = id;
        }
        if size == 1 {
            ct.leaf_of[start] = id;
            ct.nodes.push(CtNode::Leaf { vertex: start });
            continue;
        }
        for &v in &order {
            sub[v] = 1;
        }
        let mut best: Option<(usize, usize, usize)> = None; // (larger side, edge, below)
        for i in (1..size).rev() {
            let v = order[i];
            let e = via[i];
            let p = edges[e].0 + edges[e].1 - v;
            sub[p] += sub[v];
            let larger = sub[v].max(size - sub[v]);
            if best.is_none_or(|b| (larger, e) < (b.0, b.1)) {
                best = Some((larger, e, v));
            }
        }
        let (_, e, below) = best.unwrap();
        cut[e] = true;
        let (a, b) = edges[e];
        let below_size = sub[below];
        let sizes = if below == a {
            [below_size, size - below_size]
        } else {
            [size - below_size, below_size]
        };
        ct.node_of_edge[e] = id;
        ct.nodes.push(CtNode::Internal {
            edge: e,
            ends: [a, b],
            children: [usize::MAX; 2],
            sizes,
        });
        work.push((b, Some((id, 1)), depth + 1));
        work.push((a, Some((id, 0)), depth + 1));
    }
    if ct.leaf_of.contains(&usize::MAX) {
        return Err(Error::InvalidDecomposition("tree is disconnected".into()));
    }
    Ok(ct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn check_bounds(ct: &CentroidTree, n: usize) {
        let limit = (n as f64).ln() / 1.5f64.ln() + 1e-9;
        assert!(ct.height() as f64 <= limit, "height {} for n={n}", ct.height());
        for x in 0..ct.len() {
            if let CtNode::Internal { sizes, .. } = ct.node(x) {
                let s = sizes[0] + sizes[1];
                assert!(sizes.iter().all(|&p| p <= (2 * s).div_ceil(3)), "split {sizes:?}");
                assert_eq!(ct.vertices_under(x).len(), s);
            }
        }
    }

    #[test]
    fn single_vertex() {
        let ct = build_centroid_tree(1, &[]).unwrap();
        assert_eq!(ct.len(), 1);
        assert_eq!(ct.node(0), &CtNode::Leaf { vertex: 0 });
        assert_eq!(ct.height(), 0);
    }

    #[test]
    fn single_edge() {
        let ct = build_centroid_tree(2, &[(0, 1)]).unwrap();
        let r = ct.root();
        let ch = ct.children(r).unwrap();
        assert_eq!(ct.node(ch[0]), &CtNode::Leaf { vertex: 0 });
        assert_eq!(ct.node(ch[1]), &CtNode::Leaf { vertex: 1 });
        assert_eq!(ct.node_of_edge(0), r);
    }

    #[test]
    fn path_splits_in_the_middle() {
        let edges: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
        let ct = build_centroid_tree(7, &edges).unwrap();
        match ct.node(ct.root()) {
            CtNode::Internal { edge, sizes, .. } => {
                assert_eq!(*edge, 2);
                assert_eq!(*sizes, [3, 4]);
            }
            _ => panic!(),
        }
        check_bounds(&ct, 7);
    }

    #[test]
    fn rejects_high_degree_and_non_trees() {
        assert!(build_centroid_tree(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).is_err());
        assert!(build_centroid_tree(3, &[(0, 1)]).is_err());
        assert!(build_centroid_tree(4, &[(0, 1), (1, 0), (2, 3)]).is_err());
    }

    fn random_degree3_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
        let mut deg = vec![0; n];
        let mut edges = Vec::new();
        for v in 1..n {
            loop {
                let p = rng.gen_range(0..v);
                if deg[p] < 3 {
                    deg[p] += 1;
                    deg[v] += 1;
                    edges.push((p, v));
                    break;
                }
            }
        }
        edges
    }

    #[test]
    fn random_trees_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..=200);
            let edges = random_degree3_tree(&mut rng, n);
            let ct = build_centroid_tree(n, &edges).unwrap();
            assert_eq!(ct.len(), 2 * n - 1);
            check_bounds(&ct, n);
            for v in 0..n {
                let p = ct.path_to(ct.leaf(v));
                assert_eq!(p[0], ct.root());
                assert_eq!(p.len(), ct.depth(ct.leaf(v)) + 1);
            }
        }
    }
}
