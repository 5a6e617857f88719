//! Minimum changeover cost arborescences.
//!
//! Every non-root vertex picks one outgoing arc; following the picks from
//! any vertex must reach the root. Where a picked arc `a` enters a vertex
//! whose own pick is `b`, the cost table charges `cost[col(a)][col(b)]`.
//!
//! The dynamic program runs on a spanning tree of the underlying undirected
//! graph. A record at `v` lists which arcs leaving the subtree are picked
//! and, for each vertex of the subtree that an outside arc points to, where
//! its walk leaves the subtree and the color of its own pick.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::dp::{
    build_context, classify_children, default_tree, for_each_combination, Outcome, SolverContext, TableStats,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, RootedSpanningTree};

pub type Color = u32;

/// Arc `(tail, head, color)`.
pub type Arc = (usize, usize, Color);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCcaInstance {
    n: usize,
    arcs: Vec<Arc>,
    colors: usize,
    cost: Vec<Vec<u64>>,
    root: usize,
}

impl MinCcaInstance {
    /// The cost table must be `colors x colors`, symmetric with zero
    /// diagonal; no two arcs may join the same pair of vertices.
    pub fn new(n: usize, arcs: Vec<Arc>, colors: usize, cost: Vec<Vec<u64>>, root: usize) -> Result<Self> {
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        if cost.len() != colors || cost.iter().any(|row| row.len() != colors) {
            return Err(Error::InvalidInstance(format!("cost table is not {colors} x {colors}")));
        }
        #[allow(clippy::needless_range_loop)]
        for a in 0..colors {
            if cost[a][a] != 0 {
                return Err(Error::InvalidInstance(format!("cost of keeping color {a} is not zero")));
            }
            for b in 0..a {
                if cost[a][b] != cost[b][a] {
                    return Err(Error::InvalidInstance(format!("cost between colors {a} and {b} is not symmetric")));
                }
            }
        }
        if let Some(&(_, _, c)) = arcs.iter().find(|a| a.2 as usize >= colors) {
            return Err(Error::InvalidInstance(format!("arc color {c} outside 0..{colors}")));
        }
        Graph::new(n, arcs.iter().map(|&(u, w, _)| (u, w))).map_err(|e| match e {
            Error::VertexOutOfRange { .. } => e,
            other => Error::InvalidInstance(format!("underlying graph must be simple: {other}")),
        })?;
        Ok(MinCcaInstance {
            n,
            arcs,
            colors,
            cost,
            root,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn cost(&self) -> &[Vec<u64>] {
        &self.cost
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Arcs without direction; edge `i` is arc `i`.
    pub fn shadow(&self) -> Graph {
        Graph::new(self.n, self.arcs.iter().map(|&(u, w, _)| (u, w))).expect("validated on construction")
    }

    fn junction(&self, into: usize, out: Option<Color>) -> u64 {
        out.map_or(0, |c| self.cost[self.arcs[into].2 as usize][c as usize])
    }
}

/// The picked outgoing arc of each vertex; `None` exactly at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arborescence {
    pub out_arc: Vec<Option<usize>>,
}

/// Sum of junction costs, after checking that `arb` is an arborescence
/// towards the instance root.
pub fn total_changeover_cost(inst: &MinCcaInstance, arb: &Arborescence) -> Result<u64> {
    let bad = |why: String| Err(Error::InvalidParameter(format!("not an arborescence: {why}")));
    if arb.out_arc.len() != inst.n {
        return bad(format!("{} picks for {} vertices", arb.out_arc.len(), inst.n));
    }
    for (v, pick) in arb.out_arc.iter().enumerate() {
        match *pick {
            None if v == inst.root => {}
            None => return bad(format!("vertex {v} has no outgoing arc")),
            Some(_) if v == inst.root => return bad("the root has an outgoing arc".into()),
            Some(a) if a >= inst.arcs.len() || inst.arcs[a].0 != v => {
                return bad(format!("arc {a} does not leave vertex {v}"))
            }
            Some(_) => {}
        }
    }
    for v in 0..inst.n {
        let mut x = v;
        for _ in 0..inst.n {
            match arb.out_arc[x] {
                Some(a) => x = inst.arcs[a].1,
                None => break,
            }
        }
        if x != inst.root {
            return bad(format!("vertex {v} does not reach the root"));
        }
    }
    Ok(arb
        .out_arc
        .iter()
        .flatten()
        .map(|&a| {
            let head = inst.arcs[a].1;
            inst.junction(a, arb.out_arc[head].map(|b| inst.arcs[b].2))
        })
        .sum())
}

/// Where the walk from a vertex leaves the part it lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exit {
    /// Reaches the instance root inside.
    Root,
    /// Leaves through this arc.
    Arc(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChangeoverRecord {
    /// Picked arcs leaving the subtree, sorted.
    pub leaving: Vec<usize>,
    /// `(vertex, exit, color of its pick)` for inside vertices entered by
    /// an outside arc, sorted; the color is `None` at the instance root.
    pub entries: Vec<(usize, Exit, Option<Color>)>,
}

impl ChangeoverRecord {
    fn entry(&self, x: usize) -> Option<(Exit, Option<Color>)> {
        self.entries
            .binary_search_by_key(&x, |e| e.0)
            .ok()
            .map(|i| (self.entries[i].1, self.entries[i].2))
    }
}

/// Cheapest cost per record.
pub type ChangeoverTable = BTreeMap<ChangeoverRecord, u64>;

/// Cheapest arborescence cost, or `None` if some vertex cannot reach the
/// root.
pub fn solve_mincca(inst: &MinCcaInstance) -> Result<Option<u64>> {
    let shadow = inst.shadow();
    if shadow.component_count() > 1 {
        return Ok(None);
    }
    let tree = default_tree(&shadow)?;
    Ok(solve_mincca_with(inst, &tree)?.answer)
}

/// Runs the dynamic program over `tree`, a spanning tree of the shadow
/// rooted anywhere.
pub fn solve_mincca_with(inst: &MinCcaInstance, tree: &RootedSpanningTree) -> Result<Outcome<Option<u64>>> {
    let shadow = inst.shadow();
    let root = *tree.roots().first().expect("instance has a root vertex");
    let ctx = match build_context(&shadow, tree, root) {
        Err(Error::Disconnected { .. }) => {
            return Ok(Outcome {
                answer: None,
                stats: TableStats::default(),
            })
        }
        other => other?,
    };
    let mut run = Run {
        ctx: &ctx,
        inst,
        tables: vec![ChangeoverTable::new(); inst.n],
        stats: TableStats {
            width: ctx.width,
            ..Default::default()
        },
    };
    let answer = run.execute();
    Ok(Outcome {
        answer,
        stats: run.stats,
    })
}

struct Run<'c> {
    ctx: &'c SolverContext,
    inst: &'c MinCcaInstance,
    tables: Vec<ChangeoverTable>,
    stats: TableStats,
}

impl Run<'_> {
    fn execute(&mut self) -> Option<u64> {
        for i in 0..self.ctx.postorder.len() {
            let v = self.ctx.postorder[i];
            let table = self.node(v);
            self.stats.observe(table.len());
            if table.is_empty() {
                return None;
            }
            self.tables[v] = table;
        }
        self.tables[self.ctx.root].values().min().copied()
    }

    fn tail(&self, a: usize) -> usize {
        self.inst.arcs[a].0
    }

    fn head(&self, a: usize) -> usize {
        self.inst.arcs[a].1
    }

    fn color(&self, a: usize) -> Color {
        self.inst.arcs[a].2
    }

    fn node(&mut self, v: usize) -> ChangeoverTable {
        let split = classify_children(self.ctx, v);
        let trivial: Vec<(usize, ChangeoverTable)> = split
            .trivial
            .iter()
            .map(|&u| (u, std::mem::take(&mut self.tables[u])))
            .collect();
        let ports: Vec<EdgeId> = self.ctx.ports(v, &split.trivial);
        let entered = ports.iter().any(|&a| self.head(a) == v);
        let picks: Vec<Option<usize>> = if v == self.inst.root {
            vec![None]
        } else {
            self.ctx
                .graph
                .neighbors(v)
                .iter()
                .map(|&(_, a)| a)
                .filter(|&a| self.tail(a) == v)
                .map(Some)
                .collect()
        };

        let mut local = ChangeoverTable::new();
        'pick: for pick in picks {
            let out = pick.map(|a| self.color(a));
            let mut exit = pick.map_or(Exit::Root, Exit::Arc);
            let mut leaving: Vec<usize> = pick.into_iter().collect();
            let mut cost = 0;
            for (u, table) in &trivial {
                let a = self.ctx.tree.parent_edge(*u).expect("child has a parent edge");
                let best = if self.tail(a) == *u {
                    // u may or may not send its walk through a into v
                    table
                        .iter()
                        .map(|(r, f)| if r.leaving.is_empty() { *f } else { f + self.inst.junction(a, out) })
                        .min()
                } else if pick == Some(a) {
                    exit = Exit::Root;
                    leaving.clear();
                    table.iter().map(|(r, f)| f + self.inst.junction(a, r.entries[0].2)).min()
                } else {
                    table.values().min().copied()
                };
                match best {
                    Some(c) => cost += c,
                    None => continue 'pick,
                }
            }
            let record = ChangeoverRecord {
                leaving,
                entries: if entered { vec![(v, exit, out)] } else { Vec::new() },
            };
            keep_cheapest(&mut local, record, cost);
        }

        let mut parts: Vec<Vec<(ChangeoverRecord, u64)>> = vec![local.into_iter().collect()];
        parts.extend(
            split
                .heavy
                .iter()
                .map(|&c| std::mem::take(&mut self.tables[c]).into_iter().collect()),
        );
        let mut out = ChangeoverTable::new();
        for_each_combination(&parts, |combo| {
            if let Some((record, cost)) = self.merge(v, combo) {
                keep_cheapest(&mut out, record, cost);
            }
            ControlFlow::Continue(())
        });
        out
    }

    fn merge(&self, v: usize, combo: &[&(ChangeoverRecord, u64)]) -> Option<(ChangeoverRecord, u64)> {
        let lookup = |x: usize| combo.iter().find_map(|(r, _)| r.entry(x));
        let inside = |x: usize| self.ctx.tree.is_ancestor(v, x);
        let mut cost: u64 = combo.iter().map(|(_, f)| f).sum();
        let mut leaving = Vec::new();
        let mut internal = Vec::new();
        for (r, _) in combo {
            for &a in &r.leaving {
                if inside(self.head(a)) {
                    internal.push(a);
                } else {
                    leaving.push(a);
                }
            }
        }
        // follow a walk from x through internal arcs until it leaves or
        // reaches the root; a walk longer than the arc count is a cycle
        let trace = |x: usize| -> Option<(Exit, Option<Color>)> {
            let (mut exit, out) = lookup(x)?;
            for _ in 0..=internal.len() {
                match exit {
                    Exit::Arc(a) if inside(self.head(a)) => exit = lookup(self.head(a))?.0,
                    done => return Some((done, out)),
                }
            }
            None
        };
        for &a in &internal {
            let (_, out) = trace(self.head(a))?;
            cost += self.inst.junction(a, out);
        }
        let b = &self.ctx.boundaries[v];
        let mut entries = Vec::new();
        for &e in &b.edges {
            let x = self.head(e);
            if inside(x) && !inside(self.tail(e)) {
                let (exit, out) = trace(x)?;
                entries.push((x, exit, out));
            }
        }
        entries.sort_unstable();
        entries.dedup();
        leaving.sort_unstable();
        Some((ChangeoverRecord { leaving, entries }, cost))
    }
}

fn keep_cheapest(table: &mut ChangeoverTable, record: ChangeoverRecord, cost: u64) {
    let slot = table.entry(record).or_insert(cost);
    *slot = (*slot).min(cost);
}

/// Limit on the number of pick combinations for [`oracle_mincca`].
pub const ORACLE_MAX_PICKS: f64 = 1e6;

/// Tries every choice of one outgoing arc per non-root vertex.
pub fn oracle_mincca(inst: &MinCcaInstance) -> Result<Option<u64>> {
    let options: Vec<Vec<Option<usize>>> = (0..inst.n)
        .map(|v| {
            if v == inst.root {
                vec![None]
            } else {
                (0..inst.arcs.len()).filter(|&a| inst.arcs[a].0 == v).map(Some).collect()
            }
        })
        .collect();
    let combos: f64 = options.iter().map(|o| o.len() as f64).product();
    if combos > ORACLE_MAX_PICKS {
        return Err(Error::Budget(format!("{combos:.0} arc choices exceed {ORACLE_MAX_PICKS:.0}")));
    }
    let mut best: Option<u64> = None;
    for_each_combination(&options, |pick| {
        let arb = Arborescence {
            out_arc: pick.iter().map(|p| **p).collect(),
        };
        if let Ok(c) = total_changeover_cost(inst, &arb) {
            best = Some(best.map_or(c, |b| b.min(c)));
        }
        ControlFlow::Continue(())
    });
    Ok(best)
}
