//! Random instance generators for tests and benchmarks.

use rand::Rng;

use crate::decomp::{BranchDecomposition, TreeDecomposition};
use crate::graph::{Dist, Graph};

/// Random tree on `n` vertices with degrees at most `max_degree` (at
/// least 2) and lengths in `0..=max_len`.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_degree: usize, max_len: Dist) -> Graph {
    assert!(n >= 1 && max_degree >= 2);
    let mut deg = vec![0; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let p = loop {
            let p = rng.gen_range(0..v);
            if deg[p] < max_degree {
                break p;
            }
        };
        deg[p] += 1;
        deg[v] += 1;
        edges.push((p, v, rng.gen_range(0..=max_len)));
    }
    Graph::from_edges(n, &edges).expect("generated tree is valid")
}

/// Random partial 2-tree on `n >= 2` vertices with a width-2 tree
/// decomposition whose nodes have degree at most 3. Edge bags of the
/// converted separator decomposition then hold at most 3 vertices.
pub fn random_partial_2tree<R: Rng>(
    rng: &mut R,
    n: usize,
    max_len: Dist,
) -> (Graph, TreeDecomposition) {
    assert!(n >= 2);
    let len = |rng: &mut R| rng.gen_range(1..=max_len.max(1));
    let mut edges = vec![(0, 1, len(rng))];
    // 2-tree edges with the decomposition node holding both ends.
    let mut tri_edges = vec![(0usize, 1usize, 0usize)];
    let mut bags = vec![vec![0, 1]];
    let mut tree = Vec::new();
    for v in 2..n {
        let (a, b, x) = tri_edges[rng.gen_range(0..tri_edges.len())];
        let mid = bags.len();
        bags.push(vec![a, b]);
        tree.push((x, mid));
        let node = bags.len();
        bags.push(vec![a, b, v]);
        tree.push((mid, node));
        edges.push((a, v, len(rng)));
        if rng.gen_bool(0.6) {
            edges.push((b, v, len(rng)));
        }
        tri_edges.push((a, v, node));
        tri_edges.push((b, v, node));
    }
    let g = Graph::from_edges(n, &edges).expect("generated graph is valid");
    let td = limit_degree(TreeDecomposition { bags, edges: tree });
    (g, td)
}

/// Splits every node of degree above 3 into a path of copies carrying the
/// same bag. Width and validity are unchanged.
pub fn limit_degree(td: TreeDecomposition) -> TreeDecomposition {
    let k = td.bags.len();
    let mut inc = vec![Vec::new(); k];
    for (i, &(a, b)) in td.edges.iter().enumerate() {
        inc[a].push(i);
        inc[b].push(i);
    }
    let mut bags = td.bags.clone();
    let mut edges = td.edges.clone();
    for x in 0..k {
        let deg = inc[x].len();
        if deg <= 3 {
            continue;
        }
        let mut copies = vec![x];
        for _ in 1..deg - 2 {
            let c = bags.len();
            bags.push(td.bags[x].clone());
            edges.push((*copies.last().unwrap(), c));
            copies.push(c);
        }
        for (i, &e) in inc[x].iter().enumerate() {
            let slot = if i < 2 { 0 } else { (i - 1).min(copies.len() - 1) };
            let (a, b) = edges[e];
            edges[e] = if a == x { (copies[slot], b) } else { (a, copies[slot]) };
        }
    }
    TreeDecomposition { bags, edges }
}

/// Random 2-tree on `n >= 2` vertices with a width-2 branch decomposition,
/// grown by replacing the leaf of the edge each new vertex attaches to.
pub fn random_2tree_branch<R: Rng>(
    rng: &mut R,
    n: usize,
    max_len: Dist,
) -> (Graph, BranchDecomposition) {
    assert!(n >= 2);
    let len = |rng: &mut R| rng.gen_range(1..=max_len.max(1));
    let mut edges = vec![(0usize, 1usize, len(rng))];
    // Branch tree: parent of each node (usize::MAX at the root).
    let mut parent = vec![usize::MAX];
    let mut leaf_edge = vec![Some(0)];
    let mut leaf_of = vec![0usize];
    for v in 2..n {
        let e = rng.gen_range(0..edges.len());
        let (a, b, _) = edges[e];
        let leaf = leaf_of[e];
        // The leaf becomes an inner node with the old edge and a new pair.
        let keep = parent.len();
        parent.push(leaf);
        leaf_edge.push(Some(e));
        leaf_of[e] = keep;
        let pair = parent.len();
        parent.push(leaf);
        leaf_edge.push(None);
        leaf_edge[leaf] = None;
        for u in [a, b] {
            let id = edges.len();
            edges.push((u, v, len(rng)));
            leaf_of.push(parent.len());
            parent.push(pair);
            leaf_edge.push(Some(id));
        }
    }
    let g = Graph::from_edges(n, &edges).expect("generated graph is valid");
    let tree = (0..parent.len())
        .filter(|&x| parent[x] != usize::MAX)
        .map(|x| (parent[x], x))
        .collect();
    let bd = BranchDecomposition {
        node_count: parent.len(),
        edges: tree,
        leaf_edge,
    };
    (g, bd)
}
