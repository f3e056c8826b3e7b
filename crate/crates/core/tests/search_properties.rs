mod common;

use std::collections::HashSet;

use common::pool_strategy;
use proptest::prelude::*;
use tangles::prelude::*;
use tangles::search::{all_triples_consistent, extend_tangle};

fn path_sides(tree: &TangleSearchTree, id: usize) -> Vec<SideRef<'_>> {
    tree.path_orientation(id)
        .into_iter()
        .enumerate()
        .map(|(pos, d)| tree.pool().get(pos).side(d))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_matches_brute_force(pool in pool_strategy(20, 10), a in 1usize..6) {
        let tree = build_tree(&pool, a, None).unwrap();
        prop_assert_eq!(tree.full_depth_orientations(), brute_force_tangles(&pool, a).unwrap());
    }

    #[test]
    fn core_check_agrees_with_full_check(pool in pool_strategy(20, 10), a in 1usize..6) {
        let tree = build_tree(&pool, a, None).unwrap();
        for node in tree.nodes() {
            prop_assert!(tree.core_is_valid(node.id()));
            prop_assert!(tree.path_fully_consistent(node.id()));
            let pos = node.level();
            if pos >= pool.len() {
                continue;
            }
            for dir in [Direction::A, Direction::Complement] {
                let by_core = extend_tangle(&pool, node.core(), pos, dir, a).is_some();
                let mut sides = path_sides(&tree, node.id());
                sides.push(pool.get(pos).side(dir));
                prop_assert_eq!(by_core, all_triples_consistent(&sides, a));
            }
        }
    }

    #[test]
    fn truncated_paths_are_nodes(pool in pool_strategy(16, 8), a in 1usize..4) {
        let tree = build_tree(&pool, a, None).unwrap();
        let all: HashSet<Vec<Direction>> =
            tree.nodes().iter().map(|n| tree.path_orientation(n.id())).collect();
        for path in &all {
            for j in 0..path.len() {
                prop_assert!(all.contains(&path[..j]));
            }
        }
    }

    #[test]
    fn raising_agreement_never_adds_nodes(pool in pool_strategy(16, 8), a in 1usize..5) {
        let low = build_tree(&pool, a, None).unwrap();
        let high = build_tree(&pool, a + 1, None).unwrap();
        for level in 0..=pool.len() {
            prop_assert!(high.level_nodes(level).len() <= low.level_nodes(level).len());
        }
    }

    #[test]
    fn children_and_maximal_flags(pool in pool_strategy(16, 8), a in 1usize..4) {
        let tree = build_tree(&pool, a, None).unwrap();
        for node in tree.nodes() {
            prop_assert!(node.children().len() <= 2);
            let failed_here = node.level() < pool.len() && node.children().is_empty();
            prop_assert_eq!(node.maximal(), failed_here);
        }
    }

    #[test]
    fn canonical_cut_ignores_complement(bits in prop::collection::vec(any::<bool>(), 2..40)) {
        let u = ObjectUniverse::new(bits.len()).unwrap();
        let m = BitSet::from_bools(&bits);
        match make_cut(u, m.clone(), 0) {
            Ok(c) => prop_assert_eq!(c, make_cut(u, m.complement(), 0).unwrap()),
            Err(e) => prop_assert!(matches!(e, TangleError::EmptySide)),
        }
    }
}

#[test]
fn tree_identical_across_thread_counts() {
    let inst = gen_mindsets(240, 24, 4, 0.1, 11).unwrap();
    let pool = cost_questionnaire(column_cuts(&inst.answers).unwrap(), &inst.answers).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| build_tree(&pool, 20, None).unwrap().to_json().to_string())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

#[test]
fn pool_cost_order_is_total() {
    let inst = gen_sbm(60, 2, 0.3, 0.05, 2, false).unwrap();
    let pool = cost_graph(kl_cuts(&inst.graph, 12, 2, 5).unwrap(), &inst.graph, true).unwrap();
    for w in pool.cuts().windows(2) {
        let key = |c: &Bipartition| (c.cost(), c.id());
        assert!(key(&w[0]) < key(&w[1]));
    }
}
