use palette_core::adversaries::prufer_decode;
use palette_core::online::{audit_fair, run_edges};
use palette_core::opt::{opt_bruteforce, opt_tree};
use palette_core::{FirstFit, Graph, NextFit, OnlineAlgorithm, RandomParity, RngStream};
use proptest::prelude::*;

/// Arbitrary simple graph on up to 8 vertices, edges in arbitrary order.
fn graph_edges() -> impl Strategy<Value = Vec<(usize, usize)>> {
    proptest::collection::vec((0usize..8, 0usize..8), 0..20).prop_map(|pairs| {
        let mut seen = Vec::new();
        for (u, v) in pairs {
            let key = (u.min(v), u.max(v));
            if u != v && !seen.contains(&key) {
                seen.push(key);
            }
        }
        seen
    })
}

fn tree_edges() -> impl Strategy<Value = Vec<(usize, usize)>> {
    (2usize..10)
        .prop_flat_map(|n| proptest::collection::vec(0..n, n - 2).prop_map(move |code| prufer_decode(&code, n)))
        .prop_shuffle()
}

proptest! {
    #[test]
    fn deterministic_rules_stay_proper_and_fair(edges in graph_edges(), k in 1usize..5) {
        let algs: [Box<dyn OnlineAlgorithm>; 2] = [Box::new(FirstFit), Box::new(NextFit::new())];
        for mut alg in algs {
            let t = run_edges(alg.as_mut(), &edges, k, &mut RngStream::new(0)).unwrap();
            prop_assert!(t.coloring.is_proper(&t.graph));
            prop_assert!(t.coloring.cache_coherent(&t.graph));
            prop_assert!(audit_fair(&t));
            prop_assert_eq!(t.colored() + t.rejected(), edges.len());
            let replayed = t.replay().unwrap();
            prop_assert_eq!(replayed.assignments(), t.coloring.assignments());
        }
    }

    #[test]
    fn random_parity_is_fair(edges in graph_edges(), seed in any::<u64>()) {
        let mut alg = RandomParity::new(0.7).unwrap();
        let t = run_edges(&mut alg, &edges, 2, &mut RngStream::new(seed)).unwrap();
        prop_assert!(t.coloring.is_proper(&t.graph));
        prop_assert!(audit_fair(&t));
    }

    #[test]
    fn opt_grows_with_k_and_bounds_online(edges in tree_edges(), k in 1usize..4) {
        let g = Graph::from_edges(edges.iter().copied()).unwrap();
        let low = opt_tree(&g, k).unwrap();
        let high = opt_tree(&g, k + 1).unwrap();
        prop_assert!(low.opt_count <= high.opt_count);
        prop_assert!(low.audit(&g));
        prop_assert_eq!(opt_bruteforce(&g, k).unwrap().opt_count, low.opt_count);
        let t = run_edges(&mut FirstFit, &edges, k, &mut RngStream::new(0)).unwrap();
        prop_assert!(t.colored() <= low.opt_count);
    }
}
