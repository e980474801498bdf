use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest bag size accepted when building graph structures. Store cost
/// grows like `lg^t m`, so wider decompositions are impractical.
pub const MAX_WIDTH: usize = 8;

/// Edge of the decomposition tree with its bag of graph vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEdge {
    pub a: usize,
    pub b: usize,
    pub bag: Vec<usize>,
}

/// An unrooted tree `C` of degree at most 3 whose edge bags separate the
/// graph: removing edge `e` splits `C` into two parts, and every graph path
/// between vertices named in bags on different parts meets `S_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorDecomposition {
    pub node_names: Vec<String>,
    pub edges: Vec<CEdge>,
    /// Explicit home edge per graph vertex; unlisted vertices use the first
    /// edge (by index) whose bag contains them.
    pub home: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree,
    Degree { node: usize, degree: usize },
    BagTooLarge { edge: usize, size: usize, limit: usize },
    BadVertex { edge: usize, vertex: usize },
    Uncovered { vertex: usize },
    NotSeparating { edge: usize, from: usize, to: usize },
    BadHome { vertex: usize, edge: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree => write!(f, "decomposition is not a tree"),
            Violation::Degree { node, degree } => {
                write!(f, "node {node} has degree {degree}, at most 3 allowed")
            }
            Violation::BagTooLarge { edge, size, limit } => {
                write!(f, "bag of edge {edge} has {size} vertices, limit {limit}")
            }
            Violation::BadVertex { edge, vertex } => {
                write!(f, "bag of edge {edge} names unknown or repeated vertex {vertex}")
            }
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::NotSeparating { edge, from, to } => write!(
                f,
                "bag of edge {edge} does not separate vertex {from} from vertex {to}"
            ),
            Violation::BadHome { vertex, edge } => {
                write!(f, "home edge {edge} of vertex {vertex} does not contain it")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
    /// Largest bag size.
    pub width: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::InvalidDecomposition(msgs.join("; ")))
    }
}

impl SeparatorDecomposition {
    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn width(&self) -> usize {
        self.edges.iter().map(|e| e.bag.len()).max().unwrap_or(0)
    }

    /// Home edge of every graph vertex, or `None` for vertices in no bag.
    pub fn homes(&self, n: usize) -> Vec<Option<usize>> {
        let mut h = vec![None; n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in &e.bag {
                if v < n && h[v].is_none() {
                    h[v] = Some(i);
                }
            }
        }
        for (&v, &e) in &self.home {
            if v < n {
                h[v] = Some(e);
            }
        }
        h
    }

    /// Parses `cnode <id>`, `cedge <id> <id> <v,v,...|->` and
    /// `home <vertex> <edge index>` lines; `#` starts a comment. Edge
    /// indices count `cedge` lines from 0.
    pub fn parse(text: &str, g: &Graph) -> Result<Self> {
        let mut names = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut home = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line, msg };
            let vertex = |name: &str| g.vertex(name).map_err(|e| perr(e.to_string()));
            match toks.as_slice() {
                [] => {}
                ["cnode", id] => {
                    if index.contains_key(*id) {
                        return Err(perr(format!("node `{id}` declared twice")));
                    }
                    index.insert(id.to_string(), names.len());
                    names.push(id.to_string());
                }
                ["cedge", a, b, bag] => {
                    let node = |n: &str| {
                        index
                            .get(n)
                            .copied()
                            .ok_or_else(|| perr(format!("undeclared node `{n}`")))
                    };
                    let (a, b) = (node(a)?, node(b)?);
                    let bag = if *bag == "-" {
                        Vec::new()
                    } else {
                        bag.split(',').map(vertex).collect::<Result<Vec<_>>>()?
                    };
                    edges.push(CEdge { a, b, bag });
                }
                ["home", v, e] => {
                    let v = vertex(v)?;
                    let e: usize = e
                        .parse()
                        .map_err(|_| perr(format!("bad edge index `{e}`")))?;
                    if e >= edges.len() {
                        return Err(perr(format!("edge index {e} not declared yet")));
                    }
                    home.insert(v, e);
                }
                _ => return Err(perr(format!("unrecognised line `{}`", content.trim()))),
            }
        }
        Ok(SeparatorDecomposition {
            node_names: names,
            edges,
            home,
        })
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut s = String::new();
        for n in &self.node_names {
            let _ = writeln!(s, "cnode {n}");
        }
        for e in &self.edges {
            let bag = if e.bag.is_empty() {
                "-".to_string()
            } else {
                e.bag.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(",")
            };
            let _ = writeln!(s, "cedge {} {} {bag}", self.node_names[e.a], self.node_names[e.b]);
        }
        for (&v, &e) in &self.home {
            let _ = writeln!(s, "home {} {e}", g.name(v));
        }
        s
    }
}

/// Checks every decomposition requirement against `g`, with bags limited to
/// `t` vertices. The separator property is tested per edge by a search in
/// `g` with the bag removed.
pub fn validate_separator_decomposition(
    g: &Graph,
    c: &SeparatorDecomposition,
    t: usize,
) -> ValidationReport {
    let mut rep = ValidationReport {
        width: c.width(),
        ..Default::default()
    };
    let n = g.n();
    let k = c.node_count();
    let mut adj = vec![Vec::new(); k];
    for (i, e) in c.edges.iter().enumerate() {
        adj[e.a].push((e.b, i));
        adj[e.b].push((e.a, i));
    }
    let connected = k > 0 && {
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    let is_tree = connected && c.edges.len() + 1 == k && c.edges.iter().all(|e| e.a != e.b);
    if !is_tree {
        rep.violations.push(Violation::NotATree);
    }
    for (x, a) in adj.iter().enumerate() {
        if a.len() > 3 {
            rep.violations.push(Violation::Degree {
                node: x,
                degree: a.len(),
            });
        }
    }
    let mut bad_bags = false;
    for (i, e) in c.edges.iter().enumerate() {
        if e.bag.len() > t {
            rep.violations.push(Violation::BagTooLarge {
                edge: i,
                size: e.bag.len(),
                limit: t,
            });
        }
        let mut sorted = e.bag.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2).filter(|w| w[0] == w[1]) {
            rep.violations.push(Violation::BadVertex { edge: i, vertex: w[0] });
            bad_bags = true;
        }
        for &v in e.bag.iter().filter(|&&v| v >= n) {
            rep.violations.push(Violation::BadVertex { edge: i, vertex: v });
            bad_bags = true;
        }
    }
    let homes = c.homes(n);
    for (v, h) in homes.iter().enumerate() {
        if h.is_none() {
            rep.violations.push(Violation::Uncovered { vertex: v });
        }
    }
    for (&v, &e) in &c.home {
        if e >= c.edges.len() || !c.edges[e].bag.contains(&v) {
            rep.violations.push(Violation::BadHome { vertex: v, edge: e });
        }
    }
    if k > 4 * n {
        rep.warnings.push(format!(
            "decomposition has {k} nodes for {n} vertices; structures stay correct but grow"
        ));
    }
    if !is_tree || bad_bags {
        return rep;
    }

    let mut side = vec![false; k];
    let mut in_bag = vec![false; n];
    let mut mark = vec![0u8; n];
    for (i, e) in c.edges.iter().enumerate() {
        // Nodes on `a`'s side.
        side.iter_mut().for_each(|s| *s = false);
        side[e.a] = true;
        let mut stack = vec![e.a];
        while let Some(x) = stack.pop() {
            for &(y, j) in &adj[x] {
                if j != i && !side[y] {
                    side[y] = true;
                    stack.push(y);
                }
            }
        }
        for &v in &e.bag {
            in_bag[v] = true;
        }
        // bit 0: named on a's side, bit 1: named on b's side
        mark.iter_mut().for_each(|m| *m = 0);
        for (j, f) in c.edges.iter().enumerate() {
            if j == i {
                continue;
            }
            let bit = if side[f.a] { 1 } else { 2 };
            for &v in &f.bag {
                if !in_bag[v] {
                    mark[v] |= bit;
                }
            }
        }
        let mut starts = Vec::new();
        for v in 0..n {
            if mark[v] & 1 != 0 {
                starts.push(v);
            }
        }
        let mut seen = vec![usize::MAX; n];
        for &s in &starts {
            if seen[s] != usize::MAX {
                continue;
            }
            seen[s] = s;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(w, _) in g.neighbors(u) {
                    if !in_bag[w] && seen[w] == usize::MAX {
                        seen[w] = seen[u];
                        stack.push(w);
                    }
                }
            }
        }
        if let Some(to) = (0..n).find(|&v| mark[v] & 2 != 0 && seen[v] != usize::MAX) {
            rep.violations.push(Violation::NotSeparating {
                edge: i,
                from: seen[to],
                to,
            });
        }
        for &v in &e.bag {
            in_bag[v] = false;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_ab() -> Graph {
        Graph::parse("v a\nv b\ne a b 1\n").unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let g = path_ab();
        let text = "cnode x\ncnode y\ncnode z\ncedge x y a\ncedge y z a,b\nhome b 1\n";
        let c = SeparatorDecomposition::parse(text, &g).unwrap();
        assert_eq!(c.edges[1].bag, vec![0, 1]);
        assert_eq!(c.homes(2), vec![Some(0), Some(1)]);
        assert_eq!(SeparatorDecomposition::parse(&c.to_text(&g), &g).unwrap(), c);
        assert!(validate_separator_decomposition(&g, &c, 2).is_valid());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let g = path_ab();
        let err = SeparatorDecomposition::parse("cnode x\ncedge x y a\n", &g).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = SeparatorDecomposition::parse("cnode x\ncnode y\ncedge x y q\n", &g).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn empty_bag_is_fine_when_one_side_names_nothing() {
        let g = path_ab();
        let c = SeparatorDecomposition::parse(
            "cnode n0\ncnode n1\ncnode n2\ncedge n0 n1 -\ncedge n1 n2 a,b\n",
            &g,
        )
        .unwrap();
        assert!(validate_separator_decomposition(&g, &c, 2).is_valid());
    }

    #[test]
    fn empty_bag_between_connected_sides_is_reported() {
        let g = path_ab();
        let c = SeparatorDecomposition::parse(
            "cnode n0\ncnode n1\ncnode n2\ncnode n3\ncedge n0 n1 a\ncedge n1 n2 -\ncedge n2 n3 b\n",
            &g,
        )
        .unwrap();
        let rep = validate_separator_decomposition(&g, &c, 2);
        assert_eq!(
            rep.violations,
            vec![Violation::NotSeparating { edge: 1, from: 0, to: 1 }]
        );
        assert!(rep.into_result().is_err());
    }

    #[test]
    fn oversized_bag_is_reported() {
        let g = path_ab();
        let c = SeparatorDecomposition::parse("cnode x\ncnode y\ncedge x y a,b\n", &g).unwrap();
        let rep = validate_separator_decomposition(&g, &c, 1);
        assert_eq!(
            rep.violations,
            vec![Violation::BagTooLarge { edge: 0, size: 2, limit: 1 }]
        );
    }

    #[test]
    fn structural_problems_are_reported() {
        let g = path_ab();
        let c = SeparatorDecomposition::parse("cnode x\ncnode y\ncedge x y a\nhome b 0\n", &g).unwrap();
        let rep = validate_separator_decomposition(&g, &c, 2);
        assert!(rep.violations.contains(&Violation::BadHome { vertex: 1, edge: 0 }));
        let c = SeparatorDecomposition::parse(
            "cnode c\ncnode p\ncnode q\ncnode r\ncnode s\ncedge c p a\ncedge c q a\ncedge c r b\ncedge c s b\n",
            &g,
        )
        .unwrap();
        let rep = validate_separator_decomposition(&g, &c, 2);
        assert!(rep.violations.contains(&Violation::Degree { node: 0, degree: 4 }));
        let c = SeparatorDecomposition::parse("cnode x\ncnode y\ncnode z\ncedge x y a,b\n", &g).unwrap();
        assert!(validate_separator_decomposition(&g, &c, 2)
            .violations
            .contains(&Violation::NotATree));
    }
}
