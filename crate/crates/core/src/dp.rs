//! Traversal, boundary and record-table plumbing shared by the solvers.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{boundary, ecw_of_tree, BoundaryView, EdgeId, Graph, RootedSpanningTree};
use crate::width::ecw_exact_forest;

/// Search nodes granted to the width search when a solver picks its own tree.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000;

/// A rooted spanning tree prepared for a bottom-up pass.
#[derive(Clone, Debug)]
pub struct SolverContext {
    pub graph: Graph,
    pub tree: RootedSpanningTree,
    pub root: usize,
    /// Every child before its parent; `root` last. Only the tree holding
    /// `root` is covered.
    pub postorder: Vec<usize>,
    /// Indexed by vertex; empty views outside the covered tree.
    pub boundaries: Vec<BoundaryView>,
    /// Edge-cut width of the whole forest.
    pub width: usize,
}

impl SolverContext {
    /// Edges at `v` except the tree edges to `skip`.
    pub fn ports(&self, v: usize, skip: &[usize]) -> Vec<EdgeId> {
        self.graph
            .neighbors(v)
            .iter()
            .filter(|(w, _)| !skip.contains(w))
            .map(|&(_, e)| e)
            .collect()
    }

    pub fn on_boundary(&self, v: usize, e: EdgeId) -> bool {
        self.boundaries[v].contains_edge(e)
    }
}

/// Roots `t` at `root` and precomputes the postorder and boundaries.
/// Rejects disconnected graphs.
pub fn build_context(g: &Graph, t: &RootedSpanningTree, root: usize) -> Result<SolverContext> {
    let components = g.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    build_component_context(g, t, root)
}

/// Like [`build_context`] but only the component of `root` is traversed.
pub fn build_component_context(g: &Graph, t: &RootedSpanningTree, root: usize) -> Result<SolverContext> {
    t.check_spans(g)?;
    if root >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: root,
            n: g.vertex_count(),
        });
    }
    let tree = if t.parent(root).is_none() {
        t.clone()
    } else {
        t.reroot(g, root)?
    };
    let mut postorder = Vec::with_capacity(tree.subtree_size(root));
    let mut stack = vec![(root, false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            postorder.push(v);
        } else {
            stack.push((v, true));
            stack.extend(tree.children(v).iter().rev().map(|&c| (c, false)));
        }
    }
    let mut boundaries: Vec<BoundaryView> = (0..g.vertex_count())
        .map(|v| BoundaryView {
            node: v,
            ..Default::default()
        })
        .collect();
    for &v in &postorder {
        boundaries[v] = boundary(g, &tree, v);
    }
    Ok(SolverContext {
        graph: g.clone(),
        width: ecw_of_tree(g, &tree)?,
        tree,
        root,
        postorder,
        boundaries,
    })
}

/// Spanning forest used when the caller supplies none: the exact search
/// under [`DEFAULT_NODE_BUDGET`], which falls back to its best incumbent.
pub fn default_tree(g: &Graph) -> Result<RootedSpanningTree> {
    Ok(ecw_exact_forest(g, Some(DEFAULT_NODE_BUDGET))?.witness)
}

/// Children of a node split by whether their subtree touches the rest of
/// the graph only through the edge to the parent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChildSplit {
    pub trivial: Vec<usize>,
    pub heavy: Vec<usize>,
}

pub fn classify_children(ctx: &SolverContext, v: usize) -> ChildSplit {
    let mut split = ChildSplit::default();
    for &u in ctx.tree.children(v) {
        let up = ctx.tree.parent_edge(u).expect("child has a parent edge");
        if ctx.boundaries[u].edges == [up] {
            split.trivial.push(u);
        } else {
            split.heavy.push(u);
        }
    }
    split.trivial.sort_unstable();
    split.heavy.sort_unstable();
    split
}

/// Sorts and deduplicates a record table.
pub fn canonicalize<T: Ord>(table: &mut Vec<T>) {
    table.sort_unstable();
    table.dedup();
}

/// How a product iteration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Product {
    pub visited: u64,
    pub completed: bool,
}

/// Visits every way of picking one element from each set, in odometer
/// order with the last set varying fastest. `visit` may stop the
/// iteration by returning `Break`. An empty set yields no combinations;
/// no sets yield one empty combination.
pub fn for_each_combination<T>(sets: &[Vec<T>], mut visit: impl FnMut(&[&T]) -> ControlFlow<()>) -> Product {
    let mut visited = 0;
    if sets.iter().any(Vec::is_empty) {
        return Product {
            visited,
            completed: true,
        };
    }
    let mut index = vec![0; sets.len()];
    let mut pick: Vec<&T> = sets.iter().map(|s| &s[0]).collect();
    loop {
        visited += 1;
        if visit(&pick).is_break() {
            return Product {
                visited,
                completed: false,
            };
        }
        let mut i = sets.len();
        loop {
            if i == 0 {
                return Product {
                    visited,
                    completed: true,
                };
            }
            i -= 1;
            index[i] += 1;
            if index[i] < sets[i].len() {
                pick[i] = &sets[i][index[i]];
                break;
            }
            index[i] = 0;
            pick[i] = &sets[i][0];
        }
    }
}

/// Record-table sizes seen during one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableStats {
    /// Width of the tree the pass ran on.
    pub width: usize,
    pub max_table: usize,
    pub total_records: usize,
    pub nodes: usize,
}

impl TableStats {
    pub fn observe(&mut self, len: usize) {
        self.max_table = self.max_table.max(len);
        self.total_records += len;
        self.nodes += 1;
    }

    pub fn absorb(&mut self, other: TableStats) {
        self.width = self.width.max(other.width);
        self.max_table = self.max_table.max(other.max_table);
        self.total_records += other.total_records;
        self.nodes += other.nodes;
    }
}

/// A solver answer with the table sizes that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome<T> {
    pub answer: T,
    pub stats: TableStats,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ladder;
    use crate::graph::maximal_spanning_forest;

    #[test]
    fn path_postorder_and_root_boundary() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let t = maximal_spanning_forest(&g, Some(1)).unwrap();
        let ctx = build_context(&g, &t, 0).unwrap();
        assert_eq!(ctx.postorder, vec![2, 1, 0]);
        assert!(ctx.boundaries[0].edges.is_empty());
        assert_eq!(ctx.width, 1);
    }

    #[test]
    fn ladder_boundaries_are_small() {
        let (g, t) = ladder(4).unwrap();
        let ctx = build_context(&g, &t, 0).unwrap();
        assert_eq!(ctx.width, 3);
        assert!(ctx.boundaries.iter().all(|b| b.edges.len() <= 3));
        for v in 0..g.vertex_count() {
            assert_eq!(ctx.boundaries[v], boundary(&g, &ctx.tree, v));
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let t = maximal_spanning_forest(&g, None).unwrap();
        assert!(matches!(build_context(&g, &t, 0), Err(Error::Disconnected { components: 2 })));
        let ctx = build_component_context(&g, &t, 3).unwrap();
        assert_eq!(ctx.postorder, vec![2, 3]);
    }

    #[test]
    fn children_split() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = maximal_spanning_forest(&star, Some(0)).unwrap();
        let ctx = build_context(&star, &t, 0).unwrap();
        assert_eq!(classify_children(&ctx, 0).trivial, vec![1, 2, 3]);

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let t = maximal_spanning_forest(&c4, Some(0)).unwrap();
        let ctx = build_context(&c4, &t, 0).unwrap();
        assert_eq!(classify_children(&ctx, 0).heavy, vec![1]);

        let (g, t) = ladder(9).unwrap();
        let ctx = build_context(&g, &t, 0).unwrap();
        for v in 0..g.vertex_count() {
            let split = classify_children(&ctx, v);
            assert!(split.heavy.len() <= 2 * (ctx.width - 1));
            assert_eq!(split.heavy.len() + split.trivial.len(), ctx.tree.children(v).len());
        }
    }

    #[test]
    fn table_helpers() {
        let mut t = vec![3, 1, 3];
        canonicalize(&mut t);
        assert_eq!(t, vec![1, 3]);

        let sets = vec![vec!['a', 'b'], vec!['x', 'y', 'z']];
        let mut seen = Vec::new();
        let p = for_each_combination(&sets, |c| {
            seen.push((*c[0], *c[1]));
            ControlFlow::Continue(())
        });
        assert_eq!(p, Product { visited: 6, completed: true });
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);

        let p = for_each_combination(&sets, |_| ControlFlow::Break(()));
        assert_eq!(p, Product { visited: 1, completed: false });

        let none: Vec<Vec<u8>> = Vec::new();
        assert_eq!(for_each_combination(&none, |_| ControlFlow::Continue(())).visited, 1);
    }
}
