//! Undirected graphs with non-negative integer edge lengths.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Exact signed distance. Radii and query thresholds become negative once
/// shifted by distances, so this is signed even though lengths are not.
pub type Dist = i64;

/// A stored edge. Parallel input edges are collapsed to the shortest one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Dist,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected, undirected, edge-weighted graph. Vertices are dense indices
/// `0..n` with an attached name.
#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    by_pair: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a vertex, returning its index. Redeclaring is a no-op.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edge(&mut self, u: usize, v: usize, len: Dist) -> Result<()> {
        let n = self.names.len();
        if u >= n || v >= n {
            return Err(Error::UnknownVertex(u.max(v).to_string()));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at `{}`", self.names[u])));
        }
        if len < 0 {
            return Err(Error::InvalidGraph(format!(
                "negative length {len} on edge `{}`-`{}`",
                self.names[u], self.names[v]
            )));
        }
        let key = (u.min(v), u.max(v));
        match self.by_pair.get(&key) {
            Some(&e) => {
                let slot = &mut self.edges[e];
                slot.len = slot.len.min(len);
            }
            None => {
                self.by_pair.insert(key, self.edges.len());
                self.edges.push(Edge { u, v, len });
            }
        }
        Ok(())
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        let g = Graph {
            names: self.names,
            index: self.index,
            edges: self.edges,
            adj,
        };
        let reached = g.reachable_from(0, |_| true);
        if let Some(v) = reached.iter().position(|r| !r) {
            return Err(Error::InvalidGraph(format!(
                "graph is disconnected (`{}` unreachable from `{}`)",
                g.names[v], g.names[0]
            )));
        }
        Ok(g)
    }
}

impl Graph {
    /// Builds a graph on vertices named `0..n` from `(u, v, len)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Dist)]) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.vertex(&i.to_string());
        }
        for &(u, v, len) in edges {
            b.edge(u, v, len)?;
        }
        b.build()
    }

    /// Parses the line-oriented text format (`v <id>`, `e <id> <id> <len>`,
    /// `#` comments).
    pub fn parse(text: &str) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line, msg };
            match toks.as_slice() {
                [] => {}
                ["v", id] => {
                    b.vertex(id);
                }
                ["e", a, c, len] => {
                    let len: Dist = len
                        .parse()
                        .map_err(|_| perr(format!("bad edge length `{len}`")))?;
                    if len < 0 {
                        return Err(perr(format!("negative edge length {len}")));
                    }
                    let u = b.lookup(a).ok_or_else(|| perr(format!("undeclared vertex `{a}`")))?;
                    let v = b.lookup(c).ok_or_else(|| perr(format!("undeclared vertex `{c}`")))?;
                    b.edge(u, v, len).map_err(|e| perr(e.to_string()))?;
                }
                _ => return Err(perr(format!("unrecognised line `{}`", content.trim()))),
            }
        }
        b.build()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for name in &self.names {
            let _ = writeln!(s, "v {name}");
        }
        for e in &self.edges {
            let _ = writeln!(s, "e {} {} {}", self.names[e.u], self.names[e.v], e.len);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `v` as `(neighbour, edge index)`, in edge input order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n()
    }

    /// Single-source shortest paths (binary-heap Dijkstra).
    pub fn dijkstra(&self, src: usize) -> Vec<Dist> {
        let mut dist = vec![Dist::MAX; self.n()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, e) in &self.adj[u] {
                let nd = d + self.edges[e].len;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    pub fn shortest_distance(&self, u: usize, v: usize) -> Result<Dist> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.dijkstra(u)[v])
    }

    /// Distance rows for every source, keyed by source.
    pub fn all_pairs_from_sources(
        &self,
        sources: impl IntoIterator<Item = usize>,
    ) -> Result<BTreeMap<usize, Vec<Dist>>> {
        let mut table = BTreeMap::new();
        for s in sources {
            self.check_vertex(s)?;
            table.entry(s).or_insert_with(|| self.dijkstra(s));
        }
        Ok(table)
    }

    /// Vertices reachable from `src` through vertices accepted by `allowed`.
    /// `src` itself is always visited.
    pub fn reachable_from(&self, src: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![src];
        seen[src] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] && allowed(v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
