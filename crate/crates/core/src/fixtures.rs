//! Deterministic instance generators: the ladder and glued-binary-tree
//! families, seeded random graphs, and random instances for every solver.
//!
//! All randomness goes through [`Seed`]; equal arguments give identical output
//! on every platform (ChaCha8 stream).

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::changeover::MinCcaInstance;
use crate::coloring::ListColoringInstance;
use crate::csp::{Constraint, CspInstance};
use crate::edp::EdpInstance;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, RootedSpanningTree};
use crate::roommates::SrtiInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// The `2 x rungs` grid together with the spanning tree made of the top
/// rail and all rungs, rooted at vertex 0.
///
/// Top rail vertices are `0..rungs`, bottom rail vertices `rungs..2*rungs`;
/// vertex `i` is joined to `rungs + i` by a rung.
pub fn ladder(rungs: usize) -> Result<(Graph, RootedSpanningTree)> {
    if rungs < 2 {
        return Err(Error::InvalidParameter(format!("ladder needs at least 2 rungs, got {rungs}")));
    }
    let mut edges = Vec::with_capacity(3 * rungs - 2);
    edges.extend((1..rungs).map(|i| (i - 1, i)));
    edges.extend((0..rungs).map(|i| (i, rungs + i)));
    edges.extend((1..rungs).map(|i| (rungs + i - 1, rungs + i)));
    let g = Graph::new(2 * rungs, edges)?;
    let parents = (0..2 * rungs)
        .map(|v| match v {
            0 => None,
            v if v < rungs => Some(v - 1),
            v => Some(v - rungs),
        })
        .collect();
    let t = RootedSpanningTree::from_parents(&g, parents)?;
    Ok((g, t))
}

/// Two complete binary trees of depth `depth` whose leaves are identified
/// pairwise.
///
/// The first tree uses heap numbering `0..2^(depth+1)-1` (root 0, children of
/// `i` at `2i+1` and `2i+2`). Internal nodes of the second tree follow, in
/// the same heap order; its leaves are the first tree's leaves.
pub fn glued_binary_trees(depth: usize) -> Result<Graph> {
    if depth == 0 {
        return Err(Error::InvalidParameter("glued binary trees need depth >= 1".into()));
    }
    if depth > 20 {
        return Err(Error::InvalidParameter(format!("depth {depth} is too large")));
    }
    let size = (1usize << (depth + 1)) - 1;
    let internal = (1usize << depth) - 1;
    let n = 2 * size - (1 << depth);
    let second = |pos: usize| if pos < internal { size + pos } else { pos };
    let mut edges = Vec::with_capacity(2 * (size - 1));
    edges.extend((1..size).map(|c| ((c - 1) / 2, c)));
    edges.extend((1..size).map(|c| (second((c - 1) / 2), second(c))));
    Graph::new(n, edges)
}

/// Uniformly random simple graph with exactly `m` edges, listed in
/// lexicographic order.
pub fn random_graph(n: usize, m: usize, seed: Seed) -> Result<Graph> {
    let pairs = all_pairs(n);
    if m > pairs.len() {
        return Err(Error::InvalidParameter(format!(
            "{m} edges do not fit on {n} vertices (max {})",
            pairs.len()
        )));
    }
    let mut rng = seed.rng();
    let mut picked = sample(&mut rng, pairs.len(), m).into_vec();
    picked.sort_unstable();
    Graph::new(n, picked.into_iter().map(|i| pairs[i]))
}

/// Random connected graph with exactly `m` edges: a random labelled tree
/// plus `m - n + 1` uniformly chosen extra edges.
pub fn random_connected_graph(n: usize, m: usize, seed: Seed) -> Result<Graph> {
    let pairs = all_pairs(n);
    let min = n.saturating_sub(1);
    if m < min || m > pairs.len() {
        return Err(Error::InvalidParameter(format!(
            "a connected graph on {n} vertices needs between {min} and {} edges, got {m}",
            pairs.len()
        )));
    }
    let mut rng = seed.rng();
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| {
            let j = rng.gen_range(0..i);
            let (a, b) = (label[i], label[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    let rest: Vec<(usize, usize)> = pairs.into_iter().filter(|p| !edges.contains(p)).collect();
    let extra = sample(&mut rng, rest.len(), m - min).into_vec();
    edges.extend(extra.into_iter().map(|i| rest[i]));
    edges.sort_unstable();
    Graph::new(n, edges)
}

/// A uniformly shuffled Kruskal forest of `g`, rooted at `root` (or the
/// smallest vertex of each component).
pub fn random_spanning_tree(g: &Graph, root: Option<usize>, seed: Seed) -> Result<RootedSpanningTree> {
    let mut rng = seed.rng();
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.shuffle(&mut rng);
    let mut link: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(link: &mut [usize], mut x: usize) -> usize {
        while link[x] != x {
            link[x] = link[link[x]];
            x = link[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for id in order {
        let (u, w) = g.edge(id);
        let (a, b) = (find(&mut link, u), find(&mut link, w));
        if a != b {
            link[a] = b;
            chosen.push(id);
        }
    }
    RootedSpanningTree::from_edges(g, &chosen, root)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect()
}

/// Random edge-disjoint-paths instance on a connected graph with `m` edges
/// and `demands` distinct terminal pairs.
pub fn random_edp(n: usize, m: usize, demands: usize, seed: Seed) -> Result<EdpInstance> {
    let graph = random_connected_graph(n, m, seed)?;
    let pairs = all_pairs(n);
    if demands > pairs.len() {
        return Err(Error::InvalidParameter(format!("{demands} distinct demands do not fit on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x5eed_0001);
    let mut picked = sample(&mut rng, pairs.len(), demands).into_vec();
    picked.sort_unstable();
    EdpInstance::new(graph, picked.into_iter().map(|i| pairs[i]).collect())
}

/// Random list-coloring instance: every list is a nonempty random subset of
/// `0..colors`.
pub fn random_lists(n: usize, m: usize, colors: usize, seed: Seed) -> Result<ListColoringInstance> {
    if colors == 0 && n > 0 {
        return Err(Error::InvalidParameter("lists need at least one color".into()));
    }
    let graph = random_connected_graph(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x5eed_0002);
    let lists = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=colors);
            let mut list: Vec<u32> = sample(&mut rng, colors, size).into_iter().map(|c| c as u32).collect();
            list.sort_unstable();
            list
        })
        .collect();
    ListColoringInstance::new(graph, lists)
}

/// Random Boolean CSP: `constraints` constraints of arity `1..=max_arity`
/// over `variables` variables, each tuple kept with probability `density`.
pub fn random_csp(
    variables: usize,
    constraints: usize,
    max_arity: usize,
    density: f64,
    seed: Seed,
) -> Result<CspInstance> {
    if constraints > 0 && (max_arity == 0 || variables == 0) {
        return Err(Error::InvalidParameter("constraints need at least one variable".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0, 1]")));
    }
    let mut rng = seed.rng();
    let list = (0..constraints)
        .map(|_| {
            let arity = rng.gen_range(1..=max_arity.min(variables));
            let scope: Vec<usize> = sample(&mut rng, variables, arity).into_vec();
            let relation = (0..1u32 << arity)
                .filter(|_| rng.gen_bool(density))
                .map(|bits| (0..arity).map(|i| bits >> i & 1 == 1).collect())
                .collect();
            Constraint { scope, relation }
        })
        .collect();
    CspInstance::new(variables, list)
}

/// Random roommates instance: a random acceptability graph with `m` edges,
/// each agent ranking its neighbours in random order, split into tie groups
/// of geometric size (`tie` is the probability of extending a group).
pub fn random_srti(agents: usize, m: usize, tie: f64, pi: usize, seed: Seed) -> Result<SrtiInstance> {
    if !(0.0..1.0).contains(&tie) {
        return Err(Error::InvalidParameter(format!("tie probability {tie} outside [0, 1)")));
    }
    let graph = random_graph(agents, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x5eed_0003);
    let prefs = (0..agents)
        .map(|v| {
            let mut nbrs: Vec<usize> = graph.neighbors(v).iter().map(|&(w, _)| w).collect();
            nbrs.shuffle(&mut rng);
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for w in nbrs {
                match groups.last_mut() {
                    Some(g) if rng.gen_bool(tie) => g.push(w),
                    _ => groups.push(vec![w]),
                }
            }
            groups
        })
        .collect();
    SrtiInstance::new(agents, prefs, pi)
}

/// Random changeover-cost instance: a connected shadow with `m` edges, each
/// oriented at random, colored from `0..colors`, with a random symmetric
/// zero-diagonal cost table with entries in `0..=max_cost`.
pub fn random_mincca(n: usize, m: usize, colors: usize, max_cost: u64, seed: Seed) -> Result<MinCcaInstance> {
    if colors == 0 && m > 0 {
        return Err(Error::InvalidParameter("arcs need at least one color".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("an arborescence needs a root vertex".into()));
    }
    let shadow = random_connected_graph(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ 0x5eed_0004);
    let arcs = shadow
        .edges()
        .iter()
        .map(|&(u, w)| {
            let color = rng.gen_range(0..colors) as u32;
            if rng.gen_bool(0.5) {
                (u, w, color)
            } else {
                (w, u, color)
            }
        })
        .collect();
    let mut cost = vec![vec![0u64; colors]; colors];
    #[allow(clippy::needless_range_loop)]
    for a in 0..colors {
        for b in a + 1..colors {
            let c = rng.gen_range(0..=max_cost);
            cost[a][b] = c;
            cost[b][a] = c;
        }
    }
    let root = rng.gen_range(0..n);
    MinCcaInstance::new(n, arcs, colors, cost, root)
}
