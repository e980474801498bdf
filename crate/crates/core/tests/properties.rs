use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sole::decomp::{from_tree, from_tree_decomposition, validate_separator_decomposition};
use sole::multidim::{MultiDimStore, OrthantComplement};
use sole::semigroup::{Add, Max};
use sole::{gen, ComplementStrategy, Dist, FacilityId, Graph, GraphSole, NaiveSole, Sole, TreeSole};

#[derive(Clone, Debug)]
enum Op {
    Add { v: usize, w: i64, d: Dist },
    Remove { pick: usize },
    Sum { v: usize, d: Dist },
    Top { v: usize, k: usize, d: Dist },
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (any::<usize>(), -20i64..50, 0i64..40).prop_map(|(v, w, d)| Op::Add { v, w, d }),
        1 => any::<usize>().prop_map(|pick| Op::Remove { pick }),
        2 => (any::<usize>(), 0i64..40).prop_map(|(v, d)| Op::Sum { v, d }),
        2 => (any::<usize>(), 1usize..6, 0i64..40).prop_map(|(v, k, d)| Op::Top { v, k, d }),
    ]
}

fn replay<E: Sole<Add>>(engine: &mut E, g: Graph, ops: &[Op]) -> Result<(), TestCaseError> {
    let n = g.n();
    let mut oracle = NaiveSole::new(g);
    let mut live: Vec<(FacilityId, usize)> = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match *op {
            Op::Add { v, w, d } => {
                let (v, f) = (v % n, FacilityId(i as u64));
                engine.add(v, f, Add(w), d).unwrap();
                oracle.add(v, f, Add(w), d).unwrap();
                live.push((f, v));
            }
            Op::Remove { pick } if !live.is_empty() => {
                let (f, v) = live.swap_remove(pick % live.len());
                engine.remove(v, f).unwrap();
                oracle.remove(v, f).unwrap();
            }
            Op::Remove { .. } => {}
            Op::Sum { v, d } => prop_assert_eq!(engine.sum(v % n, d), oracle.sum(v % n, d)),
            Op::Top { v, k, d } => {
                prop_assert_eq!(engine.top(v % n, k, d), oracle.top(v % n, k, d))
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tree_engine_agrees_with_oracle(seed: u64, n in 1usize..40, ops in prop::collection::vec(op(), 1..120)) {
        let g = gen::random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n, 6, 9);
        let mut s: TreeSole<Add> = TreeSole::new(&g).unwrap();
        replay(&mut s, g, &ops)?;
    }

    #[test]
    fn graph_engine_on_trees_agrees_with_oracle(seed: u64, n in 2usize..30, ops in prop::collection::vec(op(), 1..80)) {
        let g = gen::random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n, 3, 9);
        let c = from_tree(&g).unwrap();
        prop_assert!(validate_separator_decomposition(&g, &c, 1).is_valid());
        let mut s: GraphSole<Add> = GraphSole::new(&g, &c).unwrap();
        replay(&mut s, g, &ops)?;
    }

    #[test]
    fn graph_engine_on_partial_2trees_agrees_with_oracle(
        seed: u64,
        n in 2usize..25,
        boxes: bool,
        ops in prop::collection::vec(op(), 1..80),
    ) {
        let (g, td) = gen::random_partial_2tree(&mut ChaCha8Rng::seed_from_u64(seed), n, 9);
        let c = from_tree_decomposition(&g, &td).unwrap();
        let strategy = if boxes { ComplementStrategy::Boxes } else { ComplementStrategy::Direct };
        let mut s: GraphSole<Add> = GraphSole::new(&g, &c).unwrap().with_strategy(strategy);
        replay(&mut s, g, &ops)?;
    }

    #[test]
    fn complement_strategies_match_brute_force(
        pts in prop::collection::vec((prop::collection::vec(-5i64..5, 3), 0i64..100), 1..60),
        corner in prop::collection::vec(-6i64..6, 3),
        k in 1usize..5,
    ) {
        let mut s = MultiDimStore::new(3);
        for (i, (p, w)) in pts.iter().enumerate() {
            s.insert(p.clone(), FacilityId(i as u64), Max(*w)).unwrap();
        }
        let q = OrthantComplement::new(corner);
        let want = pts.iter().filter(|(p, _)| q.contains(p)).map(|(_, w)| *w).max().map(Max);
        prop_assert_eq!(s.complement_sum_direct(&q), want);
        prop_assert_eq!(s.complement_sum_boxes(&q), want);
        prop_assert_eq!(s.complement_top_k_direct(&q, k), s.complement_top_k_boxes(&q, k));
    }
}
