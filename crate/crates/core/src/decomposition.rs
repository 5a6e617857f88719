//! Tree decompositions built from a spanning forest, and a validator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{local_feedback_edges, Graph, RootedSpanningTree};

/// A tree decomposition: node `i` has bag `bags[i]` and parent `parent[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; 0 for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }
}

/// First condition a decomposition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `parent` and `bags` disagree in length, or the parent links do not
    /// form a single tree.
    Shape(String),
    VertexOutOfRange { node: usize, vertex: usize },
    VertexNotCovered(usize),
    EdgeNotCovered(usize, usize),
    /// The nodes whose bags contain the vertex are not connected.
    Disconnected(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(why) => write!(f, "not a tree: {why}"),
            Violation::VertexOutOfRange { node, vertex } => write!(f, "bag {node} holds unknown vertex {vertex}"),
            Violation::VertexNotCovered(v) => write!(f, "vertex {v} not covered"),
            Violation::EdgeNotCovered(u, w) => write!(f, "edge not covered: {{{u}, {w}}}"),
            Violation::Disconnected(v) => write!(f, "bags containing vertex {v} are not connected"),
        }
    }
}

impl std::error::Error for Violation {}

/// One node per vertex with bag `{v, parent(v)}` plus the smaller endpoint
/// of every local feedback edge of `v`. Roots of further trees of the forest
/// hang below the first root.
pub fn tree_decomposition_from_ecw(g: &Graph, t: &RootedSpanningTree) -> TreeDecomposition {
    let n = g.vertex_count();
    let first = t.roots().first().copied();
    let parent = (0..n)
        .map(|v| match t.parent(v) {
            Some(p) => Some(p),
            None if Some(v) != first => first,
            None => None,
        })
        .collect();
    let bags = (0..n)
        .map(|v| {
            let mut bag = vec![v];
            bag.extend(t.parent(v));
            bag.extend(local_feedback_edges(g, t, v).into_iter().map(|e| g.edge(e).0));
            bag.sort_unstable();
            bag.dedup();
            bag
        })
        .collect();
    TreeDecomposition { parent, bags }
}

/// Checks the tree shape, vertex cover, edge cover and connectivity
/// conditions in that order.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    let nodes = td.bags.len();
    if td.parent.len() != nodes {
        return Err(Violation::Shape(format!("{} parents for {nodes} bags", td.parent.len())));
    }
    if nodes == 0 {
        return match g.vertex_count() {
            0 => Ok(()),
            _ => Err(Violation::VertexNotCovered(0)),
        };
    }
    let roots = td.parent.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        return Err(Violation::Shape(format!("{roots} roots")));
    }
    for (i, p) in td.parent.iter().enumerate() {
        if let Some(p) = *p {
            if p >= nodes {
                return Err(Violation::Shape(format!("node {i} has unknown parent {p}")));
            }
        }
        // every node must reach the root within `nodes` steps
        let mut x = i;
        let mut steps = 0;
        while let Some(p) = td.parent[x] {
            x = p;
            steps += 1;
            if steps > nodes {
                return Err(Violation::Shape(format!("cycle through node {i}")));
            }
        }
    }

    let n = g.vertex_count();
    let mut holders = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::VertexOutOfRange { node: i, vertex: v });
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = holders.iter().position(Vec::is_empty) {
        return Err(Violation::VertexNotCovered(v));
    }
    for &(u, w) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&w)) {
            return Err(Violation::EdgeNotCovered(u, w));
        }
    }
    // nodes holding v form a subtree iff exactly one of them has a parent
    // that does not hold v
    for (v, hold) in holders.iter().enumerate() {
        let tops = hold
            .iter()
            .filter(|&&i| td.parent[i].is_none_or(|p| !td.bags[p].contains(&v)))
            .count();
        if tops != 1 {
            return Err(Violation::Disconnected(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ladder;
    use crate::graph::{ecw_of_tree, maximal_spanning_forest};

    #[test]
    fn tree_bags_are_edges() {
        let g = Graph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let t = maximal_spanning_forest(&g, Some(0)).unwrap();
        let td = tree_decomposition_from_ecw(&g, &t);
        assert!(td.bags.iter().all(|b| b.len() <= 2));
        assert_eq!(td.width(), 1);
        validate_tree_decomposition(&g, &td).unwrap();
    }

    #[test]
    fn cycle_and_ladder() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let t = maximal_spanning_forest(&c5, Some(0)).unwrap();
        let td = tree_decomposition_from_ecw(&c5, &t);
        validate_tree_decomposition(&c5, &td).unwrap();
        assert!(td.width() <= 2);

        let (g, t) = ladder(9).unwrap();
        let td = tree_decomposition_from_ecw(&g, &t);
        validate_tree_decomposition(&g, &td).unwrap();
        assert!(td.width() <= ecw_of_tree(&g, &t).unwrap());
    }

    #[test]
    fn forests_are_chained() {
        let g = Graph::new(5, [(0, 1), (2, 3), (3, 4), (4, 2)]).unwrap();
        let t = maximal_spanning_forest(&g, None).unwrap();
        let td = tree_decomposition_from_ecw(&g, &t);
        validate_tree_decomposition(&g, &td).unwrap();
    }

    #[test]
    fn violations() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let whole = TreeDecomposition {
            parent: vec![None],
            bags: vec![vec![0, 1, 2]],
        };
        validate_tree_decomposition(&g, &whole).unwrap();
        assert_eq!(whole.width(), 2);

        let missing = TreeDecomposition {
            parent: vec![None, Some(0)],
            bags: vec![vec![0, 1], vec![1, 2]],
        };
        let err = validate_tree_decomposition(&g, &missing).unwrap_err();
        assert_eq!(err, Violation::EdgeNotCovered(0, 2));
        assert!(err.to_string().contains("edge not covered"));

        let split = TreeDecomposition {
            parent: vec![None, Some(0), Some(1)],
            bags: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        };
        assert_eq!(validate_tree_decomposition(&g, &split), Err(Violation::Disconnected(0)));

        let looped = TreeDecomposition {
            parent: vec![None, Some(2), Some(1)],
            bags: vec![vec![0, 1, 2], vec![0], vec![1]],
        };
        assert!(matches!(validate_tree_decomposition(&g, &looped), Err(Violation::Shape(_))));

        let uncovered = TreeDecomposition {
            parent: vec![None],
            bags: vec![vec![0, 1]],
        };
        assert_eq!(validate_tree_decomposition(&g, &uncovered), Err(Violation::VertexNotCovered(2)));
    }
}
