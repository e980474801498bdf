use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

/// A tree whose vertices all have degree at most 3, derived from an
/// arbitrary tree by expanding every high-degree vertex into a path of
/// zero-length edges.
#[derive(Clone, Debug)]
pub struct Degree3Tree {
    pub tree: Graph,
    /// Representative in `tree` of each original vertex.
    pub rep: Vec<usize>,
    /// Original vertex each vertex of `tree` stands for.
    pub origin: Vec<usize>,
}

/// Replaces each vertex `u` of degree `δ > 3` by a caterpillar of `δ - 2`
/// nodes joined by zero-length edges. The first node keeps `u`'s name and
/// its first two edges (in edge order); each middle node takes one edge and
/// the last node takes the final two. Copies are named `u'`, `u''`, ...
///
/// Original edges keep their indices; the chain edges follow them.
pub fn reduce_to_degree3(g: &Graph) -> Result<Degree3Tree> {
    if !g.is_tree() {
        return Err(Error::InvalidGraph("expected a tree".into()));
    }
    let n = g.n();
    let mut b = GraphBuilder::new();
    for v in 0..n {
        b.vertex(g.name(v));
    }
    let mut origin: Vec<usize> = (0..n).collect();
    // Gadget node that each (vertex, edge) incidence is attached to.
    let mut attach: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut chain = Vec::new();
    for u in 0..n {
        let mut inc: Vec<usize> = g.neighbors(u).iter().map(|&(_, e)| e).collect();
        inc.sort_unstable();
        let deg = inc.len();
        if deg <= 3 {
            attach[u] = inc.into_iter().map(|e| (e, u)).collect();
            continue;
        }
        let mut nodes = vec![u];
        let mut name = g.name(u).to_string();
        for _ in 1..deg - 2 {
            loop {
                name.push('\'');
                if b.lookup(&name).is_none() && g.vertex(&name).is_err() {
                    break;
                }
            }
            let id = b.vertex(&name);
            origin.push(u);
            chain.push((*nodes.last().unwrap(), id));
            nodes.push(id);
        }
        for (i, e) in inc.into_iter().enumerate() {
            let slot = if i < 2 { 0 } else { (i - 1).min(nodes.len() - 1) };
            attach[u].push((e, nodes[slot]));
        }
    }
    let at = |v: usize, e: usize| attach[v].iter().find(|p| p.0 == e).unwrap().1;
    for (i, e) in g.edges().iter().enumerate() {
        b.edge(at(e.u, i), at(e.v, i), e.len)?;
    }
    for (x, y) in chain {
        b.edge(x, y, 0)?;
    }
    Ok(Degree3Tree {
        tree: b.build()?,
        rep: (0..n).collect(),
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_tree_is_unchanged() {
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 2), (1, 3, 3)]).unwrap();
        let d = reduce_to_degree3(&g).unwrap();
        assert_eq!(d.tree.n(), 4);
        assert_eq!(d.tree.edges(), g.edges());
        assert_eq!(d.rep, vec![0, 1, 2, 3]);
    }

    #[test]
    fn star_distances_preserved() {
        let edges: Vec<_> = (1..=6).map(|i| (0, i, i as i64)).collect();
        let g = Graph::from_edges(7, &edges).unwrap();
        let d = reduce_to_degree3(&g).unwrap();
        assert_eq!(d.tree.n(), 7 + 3);
        assert!((0..d.tree.n()).all(|v| d.tree.degree(v) <= 3));
        for u in 0..7 {
            let du = d.tree.dijkstra(d.rep[u]);
            let gu = g.dijkstra(u);
            for v in 0..7 {
                assert_eq!(du[d.rep[v]], gu[v]);
            }
        }
    }

    #[test]
    fn rejects_non_tree() {
        let g = Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(reduce_to_degree3(&g).is_err());
    }
}
