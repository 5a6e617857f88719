use ecw::changeover::{oracle_mincca, solve_mincca, solve_mincca_with};
use ecw::coloring::{oracle_list_coloring, solve_list_coloring, solve_list_coloring_with};
use ecw::csp::{incidence_graph, oracle_csp, solve_csp, solve_csp_with};
use ecw::edp::{oracle_edp, solve_edp, solve_edp_with};
use ecw::fixtures::{random_csp, random_edp, random_lists, random_mincca, random_spanning_tree, random_srti, Seed};
use ecw::roommates::{oracle_srti, solve_maxsrti, solve_maxsrti_with};
use rand::Rng;

// (n, m) with a connected graph possible
fn shape(seed: u64, max_n: usize, extra: usize) -> (usize, usize) {
    let mut rng = Seed(seed ^ 0xabc).rng();
    let n = rng.gen_range(2..=max_n);
    let most = n * (n - 1) / 2;
    let m = rng.gen_range(n - 1..=most.min(n - 1 + extra));
    (n, m)
}

#[test]
fn edp_matches_oracle() {
    for s in 0..200 {
        let (n, m) = shape(s, 8, 5);
        let d = Seed(s).rng().gen_range(1..=4usize).min(n * (n - 1) / 2);
        let inst = random_edp(n, m, d, Seed(s)).unwrap();
        assert_eq!(solve_edp(&inst).unwrap(), oracle_edp(&inst).unwrap(), "seed {s}: {inst:?}");
    }
}

#[test]
fn list_coloring_matches_oracle() {
    for s in 0..200 {
        let (n, m) = shape(s, 8, 6);
        let colors = Seed(s).rng().gen_range(1..=4);
        let inst = random_lists(n, m, colors, Seed(s)).unwrap();
        assert_eq!(solve_list_coloring(&inst).unwrap(), oracle_list_coloring(&inst).unwrap(), "seed {s}: {inst:?}");
    }
}

#[test]
fn csp_matches_oracle() {
    for s in 0..200 {
        let mut rng = Seed(s ^ 0x77).rng();
        let vars = rng.gen_range(1..=8);
        let cons = rng.gen_range(0..=6);
        let inst = random_csp(vars, cons, 3, rng.gen_range(0.3..0.9), Seed(s)).unwrap();
        assert_eq!(solve_csp(&inst).unwrap(), oracle_csp(&inst).unwrap(), "seed {s}: {inst:?}");
    }
}

#[test]
fn srti_matches_oracle() {
    for s in 0..100 {
        let mut rng = Seed(s ^ 0x99).rng();
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=n * (n - 1) / 2);
        let inst = random_srti(n, m, 0.3, 1, Seed(s)).unwrap();
        assert_eq!(solve_maxsrti(&inst).unwrap(), oracle_srti(&inst).unwrap(), "seed {s}: {inst:?}");
    }
}

#[test]
fn mincca_matches_oracle() {
    for s in 0..100 {
        let (n, m) = shape(s, 6, 5);
        let colors = Seed(s).rng().gen_range(1..=3);
        let inst = random_mincca(n, m, colors, 9, Seed(s)).unwrap();
        assert_eq!(solve_mincca(&inst).unwrap(), oracle_mincca(&inst).unwrap(), "seed {s}: {inst:?}");
    }
}

#[test]
fn answers_do_not_depend_on_the_tree() {
    for s in 0..20 {
        let (n, m) = shape(s, 7, 4);
        let edp = random_edp(n, m, 2.min(n * (n - 1) / 2), Seed(s)).unwrap();
        let lcol = random_lists(n, m, 3, Seed(s)).unwrap();
        let csp = random_csp(6, 5, 3, 0.6, Seed(s)).unwrap();
        let srti = random_srti(6, 8, 0.3, 1, Seed(s)).unwrap();
        let cca = random_mincca(n.min(6), m.min(n.min(6) * (n.min(6) - 1) / 2).max(n.min(6) - 1), 3, 9, Seed(s)).unwrap();
        let expected = (
            oracle_edp(&edp).unwrap(),
            oracle_list_coloring(&lcol).unwrap(),
            oracle_csp(&csp).unwrap(),
            oracle_srti(&srti).unwrap(),
            oracle_mincca(&cca).unwrap(),
        );
        let (cg, _) = incidence_graph(&csp);
        let sg = srti.acceptability_graph();
        for t in 0..5 {
            let seed = Seed(s * 100 + t);
            let tree = random_spanning_tree(edp.graph(), None, seed).unwrap();
            let root = seed.rng().gen_range(0..n);
            assert_eq!(solve_edp_with(&edp, &tree.reroot(edp.graph(), root).unwrap()).unwrap().answer, expected.0);
            let tree = random_spanning_tree(lcol.graph(), Some(root), seed).unwrap();
            assert_eq!(solve_list_coloring_with(&lcol, &tree).unwrap().answer, expected.1);
            let tree = random_spanning_tree(&cg, None, seed).unwrap();
            assert_eq!(solve_csp_with(&csp, &tree).unwrap().answer, expected.2);
            let tree = random_spanning_tree(&sg, None, seed).unwrap();
            assert_eq!(solve_maxsrti_with(&srti, &tree).unwrap().answer, expected.3);
            let tree = random_spanning_tree(&cca.shadow(), None, seed).unwrap();
            assert_eq!(solve_mincca_with(&cca, &tree).unwrap().answer, expected.4, "seed {s} tree {t}");
        }
    }
}
