use ecw::decomposition::{tree_decomposition_from_ecw, validate_tree_decomposition};
use ecw::fixtures::{random_csp, random_edp, random_graph, random_lists, random_mincca, random_srti, Seed};
use ecw::graph::{ecw_of_tree, feedback_edge_number, local_feedback_loads};
use ecw::io::{instance_to_json, parse_instance, Instance, TreeFile};
use ecw::width::{ecw_enumerate_oracle, ecw_exact_forest, ecw_heuristic};
use ecw::Graph;
use proptest::prelude::*;

fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_flat_map(move |(n, seed)| {
        (0..=(n * (n - 1) / 2).min(max_m)).prop_map(move |m| random_graph(n, m, Seed(seed)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn width_at_most_feedback_number_plus_one(g in small_graph(9, 14)) {
        let w = ecw_exact_forest(&g, None).unwrap();
        prop_assert!(w.exact);
        prop_assert!(w.width <= feedback_edge_number(&g) + 1);
    }

    #[test]
    fn width_two_or_more_exactly_when_cyclic(g in small_graph(9, 14)) {
        let w = ecw_exact_forest(&g, None).unwrap().width;
        prop_assert_eq!(w >= 2, feedback_edge_number(&g) > 0);
        prop_assert!(w >= 1);
    }

    #[test]
    fn witness_attains_reported_width(g in small_graph(9, 14)) {
        let w = ecw_exact_forest(&g, None).unwrap();
        w.witness.check_spans(&g).unwrap();
        prop_assert_eq!(ecw_of_tree(&g, &w.witness).unwrap(), w.width);
        let loads = local_feedback_loads(&g, &w.witness);
        prop_assert_eq!(1 + loads.iter().copied().max().unwrap_or(0), w.width);
    }

    #[test]
    fn heuristic_never_beats_exact(g in small_graph(8, 12), seed in any::<u64>()) {
        let exact = ecw_exact_forest(&g, None).unwrap().width;
        let h = ecw_heuristic(&g, Seed(seed), 200).unwrap();
        prop_assert!(h.width >= exact);
        prop_assert_eq!(ecw_of_tree(&g, &h.witness).unwrap(), h.width);
    }

    #[test]
    fn exact_agrees_with_enumeration(g in small_graph(7, 11)) {
        prop_assert_eq!(ecw_exact_forest(&g, None).unwrap().width, ecw_enumerate_oracle(&g).unwrap().width);
    }

    #[test]
    fn decomposition_is_valid_and_no_wider(g in small_graph(10, 18), seed in any::<u64>()) {
        let t = ecw_heuristic(&g, Seed(seed), 20).unwrap().witness;
        let td = tree_decomposition_from_ecw(&g, &t);
        prop_assert!(validate_tree_decomposition(&g, &td).is_ok());
        prop_assert!(td.width() <= ecw_of_tree(&g, &t).unwrap());
    }

    #[test]
    fn tree_files_round_trip(g in small_graph(10, 18)) {
        let t = ecw_exact_forest(&g, Some(10_000)).unwrap().witness;
        let file = TreeFile::from_tree(&g, &t);
        let back = file.to_tree(&g).unwrap();
        prop_assert_eq!(ecw_of_tree(&g, &back).unwrap(), ecw_of_tree(&g, &t).unwrap());
        prop_assert_eq!(TreeFile::from_tree(&g, &back).edges.len(), file.edges.len());
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), kind in 0..6usize) {
        let s = Seed(seed);
        let inst = match kind {
            0 => Instance::Graph(random_graph(7, 9, s).unwrap()),
            1 => Instance::Edp(random_edp(7, 9, 3, s).unwrap()),
            2 => Instance::Lcol(random_lists(7, 9, 3, s).unwrap()),
            3 => Instance::Csp(random_csp(6, 4, 3, 0.5, s).unwrap()),
            4 => Instance::Srti(random_srti(6, 8, 0.3, 1, s).unwrap()),
            _ => Instance::Mincca(random_mincca(6, 8, 3, 9, s).unwrap()),
        };
        let text = instance_to_json(&inst);
        let again = parse_instance(&text).unwrap();
        prop_assert_eq!(instance_to_json(&again), text);
    }
}
