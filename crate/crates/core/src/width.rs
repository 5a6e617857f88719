//! Computing the edge-cut width of a graph together with a witness forest.
//!
//! [`ecw_exact`] is a branch and bound over in-tree / non-tree decisions,
//! seeded with the [`ecw_heuristic`] local search. [`ecw_enumerate_oracle`]
//! walks every spanning tree by contraction and deletion and is kept apart
//! from the search so that the two can check each other.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fixtures::Seed;
use crate::graph::{ecw_of_tree, local_feedback_loads, maximal_spanning_forest, EdgeId, Graph, RootedSpanningTree};

/// Width found for a graph and the forest that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcwResult {
    pub width: usize,
    pub witness: RootedSpanningTree,
    /// No spanning forest has smaller width.
    pub exact: bool,
    /// Search nodes (or enumerated trees, for the oracle).
    pub nodes_explored: u64,
}

/// Size limits under which the enumeration oracle runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 10,
            max_edges: 16,
        }
    }
}

const HEURISTIC_SEED: Seed = Seed(0x0ec_0ec);
const HEURISTIC_ITERATIONS: usize = 500;

/// Minimum edge-cut width of a connected graph.
///
/// With a `node_budget` the search stops after that many nodes and returns
/// the best forest seen so far with `exact == false`.
pub fn ecw_exact(g: &Graph, node_budget: Option<u64>) -> Result<EcwResult> {
    let components = g.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let start = ecw_heuristic(g, HEURISTIC_SEED, HEURISTIC_ITERATIONS)?;
    let floor = lower_bound(g);
    if start.width <= floor {
        return Ok(EcwResult { exact: true, ..start });
    }
    let mut search = Search::new(g, start.width, node_budget);
    search.run();
    let exact = !search.exhausted;
    let nodes = search.nodes;
    let witness = match search.best_edges {
        Some(edges) => RootedSpanningTree::from_edges(g, &edges, Some(0))?,
        None => start.witness,
    };
    Ok(EcwResult {
        width: ecw_of_tree(g, &witness)?,
        witness,
        exact,
        nodes_explored: nodes,
    })
}

/// [`ecw_exact`] applied to every component; the witness is the union of
/// the per-component witnesses and the width their maximum.
pub fn ecw_exact_forest(g: &Graph, node_budget: Option<u64>) -> Result<EcwResult> {
    let mut edges = Vec::new();
    let mut exact = true;
    let mut nodes = 0;
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp);
        let r = ecw_exact(&sub, node_budget)?;
        exact &= r.exact;
        nodes += r.nodes_explored;
        edges.extend(r.witness.tree_edges().map(|id| {
            let (a, b) = sub.edge(id);
            g.edge_id(comp[a], comp[b]).expect("induced edge exists in host")
        }));
    }
    let witness = RootedSpanningTree::from_edges(g, &edges, None)?;
    Ok(EcwResult {
        width: ecw_of_tree(g, &witness)?,
        witness,
        exact,
        nodes_explored: nodes,
    })
}

// 1 for forests, 2 as soon as there is a cycle.
fn lower_bound(g: &Graph) -> usize {
    if crate::graph::feedback_edge_number(g) == 0 {
        1
    } else {
        2
    }
}

struct Search<'g> {
    g: &'g Graph,
    order: Vec<EdgeId>,
    floor: usize,
    best: usize,
    best_edges: Option<Vec<EdgeId>>,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

#[derive(Clone)]
struct State {
    in_tree: Vec<bool>,
    comp: Vec<usize>,
    forest: Vec<Vec<usize>>,
    load: Vec<usize>,
    max_load: usize,
    // rejected edges whose endpoints are not yet joined by the forest
    pending: Vec<EdgeId>,
}

impl State {
    fn charge(&mut self, v: usize) {
        self.load[v] += 1;
        self.max_load = self.max_load.max(self.load[v]);
    }

    // Inner vertices of the forest path between a and b.
    fn charge_inner_path(&mut self, a: usize, b: usize) {
        let n = self.forest.len();
        let mut prev = vec![usize::MAX; n];
        prev[a] = a;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &self.forest[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut x = prev[b];
        while x != a {
            self.charge(x);
            x = prev[x];
        }
    }

    fn join(&mut self, g: &Graph, id: EdgeId) {
        let (u, w) = g.edge(id);
        self.in_tree[id] = true;
        self.forest[u].push(w);
        self.forest[w].push(u);
        let (from, to) = (self.comp[w], self.comp[u]);
        for c in &mut self.comp {
            if *c == from {
                *c = to;
            }
        }
        let mut still = Vec::with_capacity(self.pending.len());
        for e in std::mem::take(&mut self.pending) {
            let (a, b) = g.edge(e);
            if self.comp[a] == self.comp[b] {
                self.charge_inner_path(a, b);
            } else {
                still.push(e);
            }
        }
        self.pending = still;
    }
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, incumbent: usize, budget: Option<u64>) -> Self {
        let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
        let tri: Vec<usize> = order.iter().map(|&e| g.triangles_through(e)).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(tri[e]), e));
        Search {
            g,
            order,
            floor: lower_bound(g),
            best: incumbent,
            best_edges: None,
            nodes: 0,
            budget,
            exhausted: false,
        }
    }

    fn run(&mut self) {
        let n = self.g.vertex_count();
        let state = State {
            in_tree: vec![false; self.g.edge_count()],
            comp: (0..n).collect(),
            forest: vec![Vec::new(); n],
            load: vec![0; n],
            max_load: 0,
            pending: Vec::new(),
        };
        self.descend(state, 0);
    }

    fn done(&self) -> bool {
        self.exhausted || self.best <= self.floor
    }

    fn descend(&mut self, mut state: State, pos: usize) {
        if self.done() {
            return;
        }
        if let Some(limit) = self.budget {
            if self.nodes >= limit {
                self.exhausted = true;
                return;
            }
        }
        self.nodes += 1;
        if 1 + state.max_load >= self.best {
            return;
        }
        let Some(&id) = self.order.get(pos) else {
            debug_assert!(state.pending.is_empty());
            self.best = 1 + state.max_load;
            self.best_edges = Some((0..self.g.edge_count()).filter(|&e| state.in_tree[e]).collect());
            return;
        };
        let (u, w) = self.g.edge(id);
        if state.comp[u] == state.comp[w] {
            state.charge(u);
            state.charge(w);
            state.charge_inner_path(u, w);
            self.descend(state, pos + 1);
            return;
        }
        let mut joined = state.clone();
        joined.join(self.g, id);
        self.descend(joined, pos + 1);

        if self.done() || !self.bypass_exists(&state, pos, u, w) {
            return;
        }
        state.charge(u);
        state.charge(w);
        state.pending.push(id);
        self.descend(state, pos + 1);
    }

    // Can u still reach w through forest edges and undecided edges other
    // than order[pos]?
    fn bypass_exists(&self, state: &State, pos: usize, u: usize, w: usize) -> bool {
        let n = self.g.vertex_count();
        let mut adj = state.forest.clone();
        for &e in &self.order[pos + 1..] {
            let (a, b) = self.g.edge(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if x == w {
                return true;
            }
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}

/// Calls `visit` with the edge set of every maximal spanning forest of `g`,
/// enumerated by contraction and deletion of the first remaining edge.
pub fn for_each_spanning_forest(g: &Graph, mut visit: impl FnMut(&[EdgeId])) {
    let edges: Vec<(usize, usize, EdgeId)> = g.edges().iter().enumerate().map(|(id, &(u, w))| (u, w, id)).collect();
    let mut chosen = Vec::new();
    contract_delete(&edges, &mut chosen, &mut visit);
}

fn contract_delete(edges: &[(usize, usize, EdgeId)], chosen: &mut Vec<EdgeId>, visit: &mut impl FnMut(&[EdgeId])) {
    let Some((&(a, b, id), rest)) = edges.split_first() else {
        visit(chosen);
        return;
    };
    let contracted: Vec<_> = rest
        .iter()
        .map(|&(x, y, e)| (if x == b { a } else { x }, if y == b { a } else { y }, e))
        .filter(|&(x, y, _)| x != y)
        .collect();
    chosen.push(id);
    contract_delete(&contracted, chosen, visit);
    chosen.pop();
    if still_joined(rest, a, b) {
        contract_delete(rest, chosen, visit);
    }
}

fn still_joined(edges: &[(usize, usize, EdgeId)], a: usize, b: usize) -> bool {
    let mut reached = vec![a];
    let mut frontier = vec![a];
    while let Some(x) = frontier.pop() {
        for &(p, q, _) in edges {
            let next = if p == x {
                q
            } else if q == x {
                p
            } else {
                continue;
            };
            if next == b {
                return true;
            }
            if !reached.contains(&next) {
                reached.push(next);
                frontier.push(next);
            }
        }
    }
    false
}

/// Exact edge-cut width by trying every maximal spanning forest.
/// Refuses graphs beyond the default [`OracleLimits`].
pub fn ecw_enumerate_oracle(g: &Graph) -> Result<EcwResult> {
    ecw_enumerate_oracle_with(g, OracleLimits::default())
}

pub fn ecw_enumerate_oracle_with(g: &Graph, limits: OracleLimits) -> Result<EcwResult> {
    if g.vertex_count() > limits.max_vertices || g.edge_count() > limits.max_edges {
        return Err(Error::Budget(format!(
            "enumeration limited to {} vertices and {} edges, graph has {} and {}",
            limits.max_vertices,
            limits.max_edges,
            g.vertex_count(),
            g.edge_count()
        )));
    }
    let mut best: Option<(usize, Vec<EdgeId>)> = None;
    let mut count = 0u64;
    let mut failure = None;
    for_each_spanning_forest(g, |edges| {
        count += 1;
        let width = RootedSpanningTree::from_edges(g, edges, None).and_then(|t| ecw_of_tree(g, &t));
        match width {
            Ok(w) if best.as_ref().is_none_or(|(b, _)| w < *b) => best = Some((w, edges.to_vec())),
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (width, edges) = best.expect("every graph has a maximal spanning forest");
    Ok(EcwResult {
        width,
        witness: RootedSpanningTree::from_edges(g, &edges, None)?,
        exact: true,
        nodes_explored: count,
    })
}

/// Local search over spanning forests.
///
/// Starts from the depth-first forest. Each step swaps one non-tree edge into
/// the forest and evicts an edge of the cycle it closes, keeping the swap
/// unless the width grows. Half of the steps pick the entering edge among the
/// local feedback edges of a most loaded vertex.
pub fn ecw_heuristic(g: &Graph, seed: Seed, iterations: usize) -> Result<EcwResult> {
    let mut rng = seed.rng();
    let mut current = maximal_spanning_forest(g, None)?;
    let mut loads = local_feedback_loads(g, &current);
    let mut width = 1 + loads.iter().copied().max().unwrap_or(0);
    let mut best = (width, current.clone());
    let floor = lower_bound(g);
    let mut steps = 0u64;
    for _ in 0..iterations {
        if best.0 <= floor {
            break;
        }
        let outside: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !current.is_tree_edge(e)).collect();
        if outside.is_empty() {
            break;
        }
        steps += 1;
        let entering = if rng.gen_bool(0.5) {
            let top = *loads.iter().max().expect("graph has vertices");
            let hot: Vec<usize> = (0..loads.len()).filter(|&v| loads[v] == top).collect();
            let v = *hot.choose(&mut rng).expect("some vertex has max load");
            let local = crate::graph::local_feedback_edges(g, &current, v);
            *local.choose(&mut rng).unwrap_or_else(|| outside.choose(&mut rng).expect("nonempty"))
        } else {
            *outside.choose(&mut rng).expect("nonempty")
        };
        let (a, b) = g.edge(entering);
        let path = current.path(a, b).expect("non-tree edge lies inside one tree");
        let i = rng.gen_range(0..path.len() - 1);
        let leaving = g.edge_id(path[i], path[i + 1]).expect("tree path uses host edges");
        let mut edges: Vec<EdgeId> = current.tree_edges().filter(|&e| e != leaving).collect();
        edges.push(entering);
        let candidate = RootedSpanningTree::from_edges(g, &edges, None)?;
        let cand_loads = local_feedback_loads(g, &candidate);
        let cand_width = 1 + cand_loads.iter().copied().max().unwrap_or(0);
        if cand_width <= width {
            current = candidate;
            loads = cand_loads;
            width = cand_width;
            if width < best.0 {
                best = (width, current.clone());
            }
        }
    }
    Ok(EcwResult {
        width: best.0,
        witness: best.1,
        exact: false,
        nodes_explored: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{glued_binary_trees, ladder, random_graph};

    fn k4() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn trees_have_width_one() {
        let g = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(ecw_exact(&g, None).unwrap().width, 1);
        assert_eq!(ecw_heuristic(&g, Seed(1), 10).unwrap().width, 1);
        assert_eq!(ecw_enumerate_oracle(&g).unwrap().width, 1);
    }

    #[test]
    fn k4_counts_and_width() {
        let mut trees = 0;
        for_each_spanning_forest(&k4(), |_| trees += 1);
        assert_eq!(trees, 16);
        assert_eq!(ecw_enumerate_oracle(&k4()).unwrap().width, 4);
        let r = ecw_exact(&k4(), None).unwrap();
        assert_eq!((r.width, r.exact), (4, true));
    }

    #[test]
    fn cycles_and_ladders() {
        assert_eq!(ecw_enumerate_oracle(&cycle(5)).unwrap().width, 2);
        let (l3, _) = ladder(3).unwrap();
        assert_eq!(ecw_enumerate_oracle(&l3).unwrap().width, 3);
        let (l4, _) = ladder(4).unwrap();
        assert_eq!(ecw_exact(&l4, None).unwrap().width, 3);
    }

    #[test]
    fn heuristic_finds_ladder_witness() {
        let (l9, _) = ladder(9).unwrap();
        let r = ecw_heuristic(&l9, Seed(0), 1000).unwrap();
        assert_eq!(r.width, 3);
        assert!(!r.exact);
        assert_eq!(ecw_of_tree(&l9, &r.witness).unwrap(), 3);
    }

    #[test]
    fn oracle_refuses_large_graphs() {
        let g = glued_binary_trees(3).unwrap();
        assert!(matches!(ecw_enumerate_oracle(&g), Err(Error::Budget(_))));
    }

    #[test]
    fn exact_rejects_disconnected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(ecw_exact(&g, None).unwrap_err(), Error::Disconnected { components: 2 });
        let f = ecw_exact_forest(&Graph::new(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)]).unwrap(), None)
            .unwrap();
        assert_eq!(f.width, 2);
        assert_eq!(f.witness.roots().len(), 2);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = random_graph(9, 20, Seed(2)).unwrap();
        let r = ecw_exact(&g, Some(1)).unwrap();
        assert_eq!(ecw_of_tree(&g, &r.witness).unwrap(), r.width);
        let full = ecw_exact(&g, None).unwrap();
        assert!(full.exact);
        assert!(r.width >= full.width);
    }
}
