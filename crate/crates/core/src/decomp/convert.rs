use std::collections::BTreeMap;

use super::separator::{CEdge, SeparatorDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A tree decomposition with bags on nodes. Nodes may have degree at most 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

/// A branch decomposition: a tree of degree at most 3 whose leaves are in
/// bijection with the graph's edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    /// Graph edge held by each leaf; `None` for inner nodes.
    pub leaf_edge: Vec<Option<usize>>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDecomposition(msg.into())
}

/// Adjacency of a small tree, checking shape and degree.
fn tree_adjacency(k: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<(usize, usize)>>> {
    if k == 0 || edges.len() + 1 != k {
        return Err(invalid(format!("{k} nodes and {} edges do not form a tree", edges.len())));
    }
    let mut adj = vec![Vec::new(); k];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= k || b >= k || a == b {
            return Err(invalid(format!("bad tree edge ({a}, {b})")));
        }
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    if let Some(x) = (0..k).find(|&x| adj[x].len() > 3) {
        return Err(invalid(format!("node {x} has degree {}", adj[x].len())));
    }
    if side_of(&adj, 0, usize::MAX).iter().any(|s| !s) {
        return Err(invalid("decomposition tree is disconnected"));
    }
    Ok(adj)
}

/// Nodes reachable from `start` without crossing edge `skip`.
fn side_of(adj: &[Vec<(usize, usize)>], start: usize, skip: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &(y, e) in &adj[x] {
            if e != skip && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

fn two_node(bag: Vec<usize>) -> SeparatorDecomposition {
    SeparatorDecomposition {
        node_names: vec!["c0".into(), "c1".into()],
        edges: vec![CEdge { a: 0, b: 1, bag }],
        home: BTreeMap::new(),
    }
}

impl TreeDecomposition {
    /// Checks vertex and edge coverage, connectivity of each vertex's
    /// bags, and the tree shape.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let k = self.bags.len();
        let adj = tree_adjacency(k, &self.edges)?;
        let n = g.n();
        let mut holders = vec![Vec::new(); n];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(invalid(format!("bag {x} names unknown vertex {v}")));
                }
                holders[v].push(x);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            let Some(&first) = hs.first() else {
                return Err(invalid(format!("vertex `{}` is in no bag", g.name(v))));
            };
            let mut inside = vec![false; k];
            for &x in hs {
                inside[x] = true;
            }
            let mut seen = vec![false; k];
            seen[first] = true;
            let mut stack = vec![first];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if inside[y] && !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != hs.len() {
                return Err(invalid(format!("bags holding `{}` are not connected", g.name(v))));
            }
        }
        for e in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)) {
                return Err(invalid(format!(
                    "edge `{}`-`{}` is in no bag",
                    g.name(e.u),
                    g.name(e.v)
                )));
            }
        }
        Ok(())
    }
}

/// Edge bags are unions of the endpoint node bags. A single-node
/// decomposition becomes two nodes joined by an edge carrying its bag.
pub fn from_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<SeparatorDecomposition> {
    td.validate(g)?;
    if td.bags.len() == 1 {
        return Ok(two_node(td.bags[0].clone()));
    }
    let edges = td
        .edges
        .iter()
        .map(|&(a, b)| {
            let mut bag = td.bags[a].clone();
            bag.extend(td.bags[b].iter().filter(|v| !td.bags[a].contains(v)));
            CEdge { a, b, bag }
        })
        .collect();
    Ok(SeparatorDecomposition {
        node_names: (0..td.bags.len()).map(|i| format!("c{i}")).collect(),
        edges,
        home: BTreeMap::new(),
    })
}

/// Edge bags are middle sets: vertices with graph edges on both sides.
/// Edges at a leaf carry both endpoints of the leaf's graph edge, so that
/// vertices of degree one are still covered.
pub fn from_branch_decomposition(
    g: &Graph,
    bd: &BranchDecomposition,
) -> Result<SeparatorDecomposition> {
    let k = bd.node_count;
    if bd.leaf_edge.len() != k {
        return Err(invalid("leaf map length differs from node count"));
    }
    let adj = tree_adjacency(k, &bd.edges)?;
    let m = g.edges().len();
    let mut owner = vec![None; m];
    for (x, le) in bd.leaf_edge.iter().enumerate() {
        match *le {
            Some(e) if e >= m => return Err(invalid(format!("node {x} maps to unknown edge {e}"))),
            Some(e) if adj[x].len() > 1 => {
                return Err(invalid(format!("inner node {x} maps to edge {e}")))
            }
            Some(e) if owner[e].is_some() => {
                return Err(invalid(format!("edge {e} mapped to two leaves")))
            }
            Some(e) => owner[e] = Some(x),
            None if adj[x].len() <= 1 => return Err(invalid(format!("leaf {x} maps to no edge"))),
            None => {}
        }
    }
    if let Some(e) = owner.iter().position(|o| o.is_none()) {
        return Err(invalid(format!("edge {e} has no leaf")));
    }
    let ends = |e: usize| {
        let ed = g.edges()[e];
        let mut v = vec![ed.u.min(ed.v), ed.u.max(ed.v)];
        v.dedup();
        v
    };
    if k == 1 {
        return Ok(two_node(ends(bd.leaf_edge[0].unwrap())));
    }
    let mut edges = Vec::with_capacity(bd.edges.len());
    for (i, &(a, b)) in bd.edges.iter().enumerate() {
        let side = side_of(&adj, a, i);
        let mut flags = vec![0u8; g.n()];
        for (e, o) in owner.iter().enumerate() {
            let bit = if side[o.unwrap()] { 1 } else { 2 };
            let ed = g.edges()[e];
            flags[ed.u] |= bit;
            flags[ed.v] |= bit;
        }
        let mut bag: Vec<usize> = (0..g.n()).filter(|&v| flags[v] == 3).collect();
        for x in [a, b] {
            if adj[x].len() == 1 {
                bag.extend(ends(bd.leaf_edge[x].unwrap()));
            }
        }
        bag.sort_unstable();
        bag.dedup();
        edges.push(CEdge { a, b, bag });
    }
    Ok(SeparatorDecomposition {
        node_names: (0..k).map(|i| format!("c{i}")).collect(),
        edges,
        home: BTreeMap::new(),
    })
}

/// The natural 1-separator decomposition of a tree of maximum degree 3:
/// `C` copies the tree rooted at a vertex of degree at most 2, each edge's
/// bag is its lower endpoint, and an extra node hangs off the root with the
/// root as its bag.
pub fn from_tree(g: &Graph) -> Result<SeparatorDecomposition> {
    if !g.is_tree() {
        return Err(Error::InvalidGraph("expected a tree".into()));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) > 3) {
        return Err(Error::InvalidGraph(format!("vertex `{}` has degree above 3", g.name(v))));
    }
    let n = g.n();
    let root = (0..n).find(|&v| g.degree(v) <= 2).unwrap();
    let mut names: Vec<String> = (0..n).map(|v| g.name(v).to_string()).collect();
    let mut extra = "top".to_string();
    while names.contains(&extra) {
        extra.push('_');
    }
    names.push(extra);
    let mut edges = vec![CEdge {
        a: n,
        b: root,
        bag: vec![root],
    }];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                edges.push(CEdge {
                    a: u,
                    b: w,
                    bag: vec![w],
                });
                stack.push(w);
            }
        }
    }
    Ok(SeparatorDecomposition {
        node_names: names,
        edges,
        home: BTreeMap::new(),
    })
}
