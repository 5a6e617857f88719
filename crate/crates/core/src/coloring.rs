//! List coloring.
//!
//! Records assign each inside boundary vertex either a concrete color or
//! [`Shade::Free`]: a vertex with more allowed colors than remaining
//! neighbours, which can take whatever color is left once everything else
//! is fixed.

use std::ops::ControlFlow;

use crate::dp::{
    build_context, canonicalize, classify_children, default_tree, for_each_combination, Outcome, SolverContext,
    TableStats,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, RootedSpanningTree};

pub type Color = u32;

/// A graph with a list of allowed colors per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListColoringInstance {
    graph: Graph,
    lists: Vec<Vec<Color>>,
}

impl ListColoringInstance {
    pub fn new(graph: Graph, mut lists: Vec<Vec<Color>>) -> Result<Self> {
        if lists.len() != graph.vertex_count() {
            return Err(Error::InvalidInstance(format!(
                "{} lists for {} vertices",
                lists.len(),
                graph.vertex_count()
            )));
        }
        for list in &mut lists {
            canonicalize(list);
        }
        Ok(ListColoringInstance { graph, lists })
    }

    /// Precoloring extension: each `(vertex, color)` pair replaces the
    /// vertex's list by that single color.
    pub fn with_precoloring(graph: Graph, mut lists: Vec<Vec<Color>>, precolored: &[(usize, Color)]) -> Result<Self> {
        for &(v, c) in precolored {
            let n = lists.len();
            *lists.get_mut(v).ok_or(Error::VertexOutOfRange { vertex: v, n })? = vec![c];
        }
        Self::new(graph, lists)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    /// True if `coloring` picks from every list and no edge is monochromatic.
    pub fn is_proper(&self, coloring: &[Color]) -> bool {
        coloring.len() == self.lists.len()
            && coloring.iter().zip(&self.lists).all(|(c, l)| l.binary_search(c).is_ok())
            && self.graph.edges().iter().all(|&(u, w)| coloring[u] != coloring[w])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shade {
    Fixed(Color),
    /// Colored last, greedily.
    Free,
}

/// Shades of the inside boundary vertices, sorted by vertex.
pub type ColorRecord = Vec<(usize, Shade)>;

/// `r1` is at least as specific as `r2`: per vertex the shades agree or
/// `r2` leaves the vertex free. Errors when the vertex sets differ.
pub fn record_dominates(r1: &ColorRecord, r2: &ColorRecord) -> Result<bool> {
    if r1.len() != r2.len() || r1.iter().zip(r2).any(|(a, b)| a.0 != b.0) {
        return Err(Error::InvalidParameter("records cover different vertices".into()));
    }
    Ok(r1.iter().zip(r2).all(|(a, b)| a.1 == b.1 || b.1 == Shade::Free))
}

pub fn solve_list_coloring(inst: &ListColoringInstance) -> Result<bool> {
    if inst.graph.vertex_count() == 0 {
        return Ok(true);
    }
    let components = inst.graph.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let tree = default_tree(&inst.graph)?;
    Ok(solve_list_coloring_with(inst, &tree)?.answer)
}

pub fn solve_list_coloring_with(inst: &ListColoringInstance, tree: &RootedSpanningTree) -> Result<Outcome<bool>> {
    let Some(&root) = tree.roots().first() else {
        return Ok(Outcome {
            answer: true,
            stats: TableStats::default(),
        });
    };
    let ctx = build_context(&inst.graph, tree, root)?;
    let mut stats = TableStats {
        width: ctx.width,
        ..Default::default()
    };
    let mut tables: Vec<Vec<ColorRecord>> = vec![Vec::new(); inst.graph.vertex_count()];
    for &v in &ctx.postorder {
        let table = node_table(&ctx, inst, v, &mut tables).unwrap_or_default();
        stats.observe(table.len());
        if table.is_empty() {
            return Ok(Outcome { answer: false, stats });
        }
        tables[v] = table;
    }
    Ok(Outcome { answer: true, stats })
}

fn node_table(
    ctx: &SolverContext,
    inst: &ListColoringInstance,
    v: usize,
    tables: &mut [Vec<ColorRecord>],
) -> Option<Vec<ColorRecord>> {
    let split = classify_children(ctx, v);
    let mut list = inst.lists[v].clone();
    for &u in &split.trivial {
        match &std::mem::take(&mut tables[u])[..] {
            [] => return None,
            [only] => {
                if let [(_, Shade::Fixed(c))] = only[..] {
                    list.retain(|&x| x != c);
                }
            }
            _ => {}
        }
    }
    let degree = inst.graph.degree(v) - split.trivial.len();
    let local: Vec<ColorRecord> = if list.len() > degree {
        vec![vec![(v, Shade::Free)]]
    } else {
        list.iter().map(|&c| vec![(v, Shade::Fixed(c))]).collect()
    };

    let mut internal: Vec<EdgeId> = ctx.ports(v, &split.trivial);
    for &c in &split.heavy {
        internal.extend(&ctx.boundaries[c].edges);
    }
    internal.retain(|&e| !ctx.on_boundary(v, e));
    canonicalize(&mut internal);
    let keep = &ctx.boundaries[v].inside;

    let mut parts = vec![local];
    parts.extend(split.heavy.iter().map(|&c| std::mem::take(&mut tables[c])));
    let mut out = Vec::new();
    for_each_combination(&parts, |combo| {
        let shade = |x: usize| {
            combo
                .iter()
                .find_map(|r| r.binary_search_by_key(&x, |p| p.0).ok().map(|i| r[i].1))
                .expect("internal edge endpoints are boundary vertices of some part")
        };
        let clash = internal.iter().any(|&e| {
            let (a, b) = ctx.graph.edge(e);
            matches!((shade(a), shade(b)), (Shade::Fixed(x), Shade::Fixed(y)) if x == y)
        });
        if !clash {
            let mut record: ColorRecord = combo
                .iter()
                .flat_map(|r| r.iter().copied())
                .filter(|p| keep.binary_search(&p.0).is_ok())
                .collect();
            record.sort_unstable();
            out.push(record);
        }
        ControlFlow::Continue(())
    });
    canonicalize(&mut out);
    Some(out)
}

/// Product of list sizes above which [`oracle_list_coloring`] refuses.
pub const ORACLE_MAX_PRODUCT: f64 = 1e7;

/// Plain backtracking over the lists in vertex order.
pub fn oracle_list_coloring(inst: &ListColoringInstance) -> Result<bool> {
    let product: f64 = inst.lists.iter().map(|l| l.len() as f64).product();
    if product > ORACLE_MAX_PRODUCT {
        return Err(Error::Budget(format!("{product:.0} list combinations exceed {ORACLE_MAX_PRODUCT:.0}")));
    }
    let mut coloring = Vec::with_capacity(inst.lists.len());
    Ok(extend(inst, &mut coloring))
}

fn extend(inst: &ListColoringInstance, coloring: &mut Vec<Color>) -> bool {
    let v = coloring.len();
    if v == inst.lists.len() {
        return true;
    }
    for &c in &inst.lists[v] {
        let ok = inst.graph.neighbors(v).iter().all(|&(w, _)| w > v || coloring[w] != c);
        if ok {
            coloring.push(c);
            if extend(inst, coloring) {
                return true;
            }
            coloring.pop();
        }
    }
    false
}
