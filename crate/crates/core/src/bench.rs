//! Doubling experiments measured in counted work rather than time.
//!
//! Work is the number of search-tree nodes touched by queries plus the
//! number of nodes rebuilt by updates (see [`crate::metrics`]). Each row
//! also carries the mean divided by the expected growth term, so a bounded
//! ratio between successive rows is evidence of the polylogarithmic bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::from_branch_decomposition;
use crate::graph::Dist;
use crate::multidim::ComplementStrategy;
use crate::semigroup::Add;
use crate::{gen, metrics, FacilityId, GraphSole, Sole, TreeSole};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub engine: &'static str,
    pub n: usize,
    pub m: usize,
    pub op: &'static str,
    /// Mean counted work per operation.
    pub mean: f64,
    /// `mean` divided by the growth term of the engine's bound.
    pub normalized: f64,
}

/// Sizes `2^6 ..= 2^12` for trees.
pub fn tree_sizes() -> Vec<usize> {
    (6..=12).map(|e| 1 << e).collect()
}

/// Sizes `2^6 ..= 2^11` for width-2 graphs.
pub fn graph_sizes() -> Vec<usize> {
    (6..=11).map(|e| 1 << e).collect()
}

fn lg(x: usize) -> f64 {
    (x.max(2) as f64).log2()
}

fn work() -> f64 {
    let c = metrics::snapshot();
    (c.node_visits + c.rebuild_nodes) as f64
}

/// `m` adds, then `queries` sums and tops (k = 4), on one instance.
fn measure<S: Sole<Add>>(
    s: &mut S,
    n: usize,
    m: usize,
    queries: usize,
    rng: &mut ChaCha8Rng,
) -> [(&'static str, f64); 3] {
    let radius = |rng: &mut ChaCha8Rng| -> Dist { rng.gen_range(0..=30) };
    metrics::reset();
    for i in 0..m {
        let (v, w, d) = (rng.gen_range(0..n), Add(rng.gen_range(1..100)), radius(rng));
        s.add(v, FacilityId(i as u64), w, d).expect("fresh facility");
    }
    let add = work() / m.max(1) as f64;
    metrics::reset();
    for _ in 0..queries {
        let (v, d) = (rng.gen_range(0..n), radius(rng));
        s.sum(v, d).expect("valid query");
    }
    let sum = work() / queries.max(1) as f64;
    metrics::reset();
    for _ in 0..queries {
        let (v, d) = (rng.gen_range(0..n), radius(rng));
        s.top(v, 4, d).expect("valid query");
    }
    let top = work() / queries.max(1) as f64;
    [("add", add), ("sum", sum), ("top", top)]
}

/// Random trees (degrees up to 8, lengths up to 20) with `m = n`.
/// Normalized by `lg n * lg m`.
pub fn bench_tree(sizes: &[usize], seed: u64, queries: usize) -> Vec<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let g = gen::random_tree(&mut rng, n, 8, 20);
        let mut s: TreeSole<Add> = TreeSole::new(&g).expect("generated tree");
        let m = n;
        for (op, mean) in measure(&mut s, n, m, queries, &mut rng) {
            rows.push(BenchRow {
                engine: "tree",
                n,
                m,
                op,
                mean,
                normalized: mean / (lg(n) * lg(m)),
            });
        }
    }
    rows
}

/// Random 2-trees with width-2 decompositions and `m = n`. Normalized by
/// `lg n * lg^2 m`.
pub fn bench_graph(
    sizes: &[usize],
    seed: u64,
    queries: usize,
    strategy: ComplementStrategy,
) -> Vec<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let (g, bd) = gen::random_2tree_branch(&mut rng, n.max(2), 10);
        let c = from_branch_decomposition(&g, &bd).expect("generated decomposition");
        let mut s: GraphSole<Add> = GraphSole::new(&g, &c)
            .expect("generated decomposition")
            .with_strategy(strategy);
        let m = n;
        for (op, mean) in measure(&mut s, g.n(), m, queries, &mut rng) {
            rows.push(BenchRow {
                engine: "graph",
                n,
                m,
                op,
                mean,
                normalized: mean / (lg(n) * lg(m) * lg(m)),
            });
        }
    }
    rows
}

/// Ratios of successive normalized values for one operation.
pub fn growth_ratios(rows: &[BenchRow], op: &str) -> Vec<f64> {
    let vals: Vec<f64> = rows.iter().filter(|r| r.op == op).map(|r| r.normalized).collect();
    vals.windows(2).map(|w| w[1] / w[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = bench_tree(&[64, 128], 9, 50);
        let b = bench_tree(&[64, 128], 9, 50);
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn single_size_gives_one_row_per_op() {
        let rows = bench_graph(&[64], 1, 20, ComplementStrategy::Direct);
        assert_eq!(rows.iter().filter(|r| r.op == "sum").count(), 1);
        assert!(growth_ratios(&rows, "sum").is_empty());
    }
}
