//! Edge-disjoint paths.
//!
//! A record at `v` describes how a partial routing meets the boundary of the
//! subtree of `v`. Each used boundary edge carries one [`Port`]: the start
//! of a path towards a terminal outside, one end of a detour the subtree
//! offers to the outside, or one end of a connection the subtree needs the
//! outside to provide for a demand whose terminals both lie inside.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::dp::{
    build_context, canonicalize, classify_children, default_tree, for_each_combination, Outcome, SolverContext,
    TableStats,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, RootedSpanningTree};

/// A graph with terminal pairs to be joined by pairwise edge-disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdpInstance {
    graph: Graph,
    demands: Vec<(usize, usize)>,
}

impl EdpInstance {
    /// Pairs are unordered; repeated pairs collapse into one.
    pub fn new(graph: Graph, demands: Vec<(usize, usize)>) -> Result<Self> {
        let n = graph.vertex_count();
        let mut pairs = Vec::with_capacity(demands.len());
        for (s, t) in demands {
            for x in [s, t] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if s == t {
                return Err(Error::InvalidInstance(format!("demand joins vertex {s} to itself")));
            }
            pairs.push((s.min(t), s.max(t)));
        }
        canonicalize(&mut pairs);
        Ok(EdpInstance { graph, demands: pairs })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn demands(&self) -> &[(usize, usize)] {
        &self.demands
    }
}

/// Role of one boundary edge in a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    /// A path leaves the terminal of this demand through the edge; the
    /// other terminal is outside.
    Single(usize),
    /// The subtree routes a path between this edge and the given one.
    Donated(EdgeId),
    /// A demand inside needs a path outside between this edge and the
    /// given one.
    Received(EdgeId),
}

/// Used boundary edges with their roles, sorted by edge.
pub type PathRecord = Vec<(EdgeId, Port)>;

/// Decides the instance on a spanning tree of small edge-cut width.
pub fn solve_edp(inst: &EdpInstance) -> Result<bool> {
    if inst.graph.vertex_count() == 0 {
        return Ok(true);
    }
    let components = inst.graph.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let tree = default_tree(&inst.graph)?;
    Ok(solve_edp_with(inst, &tree)?.answer)
}

/// Runs the dynamic program over `tree`, rooted where `tree` is rooted.
pub fn solve_edp_with(inst: &EdpInstance, tree: &RootedSpanningTree) -> Result<Outcome<bool>> {
    let Some(&root) = tree.roots().first() else {
        return Ok(Outcome {
            answer: true,
            stats: TableStats::default(),
        });
    };
    let ctx = build_context(&inst.graph, tree, root)?;
    let mut run = Run {
        ctx: &ctx,
        demands: inst.demands.iter().map(|&(s, t)| Some([s, t])).collect(),
        tables: vec![Vec::new(); inst.graph.vertex_count()],
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
    // current endpoints; terminals in trivial subtrees move up to the parent
    demands: Vec<Option<[usize; 2]>>,
    tables: Vec<Vec<PathRecord>>,
    stats: TableStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Terminal(usize),
    Edge(EdgeId),
}

impl Run<'_> {
    fn execute(&mut self) -> bool {
        for i in 0..self.ctx.postorder.len() {
            let v = self.ctx.postorder[i];
            let table = match self.node(v) {
                Some(t) => t,
                None => return false,
            };
            self.stats.observe(table.len());
            if table.is_empty() {
                return false;
            }
            self.tables[v] = table;
        }
        true
    }

    fn inside(&self, v: usize, x: usize) -> bool {
        self.ctx.tree.is_ancestor(v, x)
    }

    // None when a trivial child already rules the instance out.
    fn node(&mut self, v: usize) -> Option<Vec<PathRecord>> {
        let split = classify_children(self.ctx, v);
        for &u in &split.trivial {
            if std::mem::take(&mut self.tables[u]).is_empty() {
                return None;
            }
            let crossing: Vec<usize> = (0..self.demands.len())
                .filter(|&d| {
                    self.demands[d].is_some_and(|[s, t]| self.inside(u, s) != self.inside(u, t))
                })
                .collect();
            match crossing[..] {
                [] => {}
                [d] => {
                    let [s, t] = self.demands[d].expect("crossing demand is live");
                    let moved = if self.inside(u, s) { [v, t] } else { [s, v] };
                    self.demands[d] = (moved[0] != moved[1]).then_some(moved);
                }
                _ => return None,
            }
        }

        let ports = self.ctx.ports(v, &split.trivial);
        let terminals: Vec<usize> = (0..self.demands.len())
            .filter(|&d| self.demands[d].is_some_and(|p| p.contains(&v)))
            .collect();
        let local = local_records(&ports, &terminals);

        let mut parts = vec![local];
        for &c in &split.heavy {
            parts.push(std::mem::take(&mut self.tables[c]));
        }
        let mut out = Vec::new();
        for_each_combination(&parts, |combo| {
            if let Some(r) = self.merge(v, combo) {
                out.push(r);
            }
            ControlFlow::Continue(())
        });
        canonicalize(&mut out);
        Some(out)
    }

    fn merge(&self, v: usize, combo: &[&PathRecord]) -> Option<PathRecord> {
        // one slot per (part, used edge)
        let mut slots: Vec<(usize, EdgeId, Port)> = Vec::new();
        for (part, record) in combo.iter().enumerate() {
            slots.extend(record.iter().map(|&(e, p)| (part, e, p)));
        }
        let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
        let mut by_part_edge: HashMap<(usize, EdgeId), usize> = HashMap::new();
        for (i, &(part, e, _)) in slots.iter().enumerate() {
            by_edge.entry(e).or_default().push(i);
            by_part_edge.insert((part, e), i);
        }
        for (&e, users) in &by_edge {
            let wanted = if self.ctx.on_boundary(v, e) { 1 } else { 2 };
            if users.len() != wanted {
                return None;
            }
        }
        let across = |i: usize| -> Option<usize> {
            let e = slots[i].1;
            by_edge[&e].iter().copied().find(|&j| j != i)
        };
        let along = |i: usize, to: EdgeId| by_part_edge[&(slots[i].0, to)];

        let mut seen = vec![false; slots.len()];
        let mut chains: Vec<(End, End, usize)> = Vec::new();
        for start in 0..slots.len() {
            if seen[start] {
                continue;
            }
            let (part_end, edge_open) = match slots[start].2 {
                Port::Single(d) => (Some(End::Terminal(d)), across(start).is_none()),
                _ => (None, across(start).is_none()),
            };
            // start only at chain ends
            let (first, mut cross_next) = match (part_end, edge_open) {
                (Some(end), _) => (end, true),
                (None, true) => (End::Edge(slots[start].1), false),
                (None, false) => continue,
            };
            let (last, received) = walk(&slots, start, &mut cross_next, &mut seen, &across, &along)?;
            chains.push((first, last, received));
        }
        for start in 0..slots.len() {
            if !seen[start] {
                let mut received = 0;
                let mut i = start;
                loop {
                    seen[i] = true;
                    let to = match slots[i].2 {
                        Port::Donated(to) => to,
                        Port::Received(to) => {
                            received += 1;
                            to
                        }
                        Port::Single(_) => unreachable!("single ports end chains"),
                    };
                    let j = along(i, to);
                    seen[j] = true;
                    i = across(j).expect("cycles use internal edges only");
                    if i == start {
                        break;
                    }
                }
                if received > 1 {
                    return None;
                }
            }
        }

        let mut record = PathRecord::new();
        let mut halves: HashMap<usize, Vec<EdgeId>> = HashMap::new();
        for (a, b, received) in chains {
            match (a, b) {
                (End::Terminal(d1), End::Terminal(d2)) => {
                    if d1 != d2 || received > 0 {
                        return None;
                    }
                }
                (End::Terminal(d), End::Edge(f)) | (End::Edge(f), End::Terminal(d)) => {
                    if received > 0 {
                        return None;
                    }
                    let [s, t] = self.demands[d].expect("ports name live demands");
                    if self.inside(v, s) && self.inside(v, t) {
                        halves.entry(d).or_default().push(f);
                    } else {
                        record.push((f, Port::Single(d)));
                    }
                }
                (End::Edge(f1), End::Edge(f2)) => {
                    let port = match received {
                        0 => Port::Donated,
                        1 => Port::Received,
                        _ => return None,
                    };
                    record.push((f1, port(f2)));
                    record.push((f2, port(f1)));
                }
            }
        }
        for (_, ends) in halves {
            let [f1, f2] = ends[..] else { return None };
            record.push((f1, Port::Received(f2)));
            record.push((f2, Port::Received(f1)));
        }
        record.sort_unstable();
        Some(record)
    }
}

// Follows a chain from `start` until it ends; returns the far end and the
// number of received links passed. `cross_next` says whether the next step
// crosses an edge or moves inside a part.
fn walk(
    slots: &[(usize, EdgeId, Port)],
    start: usize,
    cross_next: &mut bool,
    seen: &mut [bool],
    across: &impl Fn(usize) -> Option<usize>,
    along: &impl Fn(usize, EdgeId) -> usize,
) -> Option<(End, usize)> {
    let mut i = start;
    let mut received = 0;
    seen[i] = true;
    loop {
        if *cross_next {
            match across(i) {
                None => return Some((End::Edge(slots[i].1), received)),
                Some(j) => i = j,
            }
        } else {
            let to = match slots[i].2 {
                Port::Single(d) => return Some((End::Terminal(d), received)),
                Port::Donated(to) => to,
                Port::Received(to) => {
                    received += 1;
                    to
                }
            };
            i = along(i, to);
        }
        seen[i] = true;
        *cross_next = !*cross_next;
    }
}

// Every way for the single vertex to send its terminals out through distinct
// ports and to pass paths through pairs of the remaining ports.
fn local_records(ports: &[EdgeId], terminals: &[usize]) -> Vec<PathRecord> {
    let mut out = Vec::new();
    let mut used = vec![false; ports.len()];
    let mut current = PathRecord::new();
    assign_terminals(ports, terminals, &mut used, &mut current, &mut out);
    canonicalize(&mut out);
    out
}

fn assign_terminals(
    ports: &[EdgeId],
    terminals: &[usize],
    used: &mut [bool],
    current: &mut PathRecord,
    out: &mut Vec<PathRecord>,
) {
    let Some((&d, rest)) = terminals.split_first() else {
        pair_ports(ports, 0, used, current, out);
        return;
    };
    for i in 0..ports.len() {
        if !used[i] {
            used[i] = true;
            current.push((ports[i], Port::Single(d)));
            assign_terminals(ports, rest, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
}

fn pair_ports(ports: &[EdgeId], from: usize, used: &mut [bool], current: &mut PathRecord, out: &mut Vec<PathRecord>) {
    let Some(i) = (from..ports.len()).find(|&i| !used[i]) else {
        let mut r = current.clone();
        r.sort_unstable();
        out.push(r);
        return;
    };
    // port i unused
    pair_ports(ports, i + 1, used, current, out);
    used[i] = true;
    for j in i + 1..ports.len() {
        if !used[j] {
            used[j] = true;
            current.push((ports[i], Port::Donated(ports[j])));
            current.push((ports[j], Port::Donated(ports[i])));
            pair_ports(ports, i + 1, used, current, out);
            current.truncate(current.len() - 2);
            used[j] = false;
        }
    }
    used[i] = false;
}

/// Instance limits for [`oracle_edp`].
pub const ORACLE_MAX_VERTICES: usize = 10;
pub const ORACLE_MAX_DEMANDS: usize = 4;

/// Backtracking over simple paths, one demand at a time.
pub fn oracle_edp(inst: &EdpInstance) -> Result<bool> {
    if inst.graph.vertex_count() > ORACLE_MAX_VERTICES || inst.demands.len() > ORACLE_MAX_DEMANDS {
        return Err(Error::Budget(format!(
            "path oracle handles at most {ORACLE_MAX_VERTICES} vertices and {ORACLE_MAX_DEMANDS} demands"
        )));
    }
    let mut free = vec![true; inst.graph.edge_count()];
    Ok(route(&inst.graph, &inst.demands, &mut free))
}

fn route(g: &Graph, demands: &[(usize, usize)], free: &mut [bool]) -> bool {
    let Some((&(s, t), rest)) = demands.split_first() else {
        return true;
    };
    let mut on_path = vec![false; g.vertex_count()];
    on_path[s] = true;
    extend_path(g, s, t, rest, free, &mut on_path)
}

fn extend_path(g: &Graph, at: usize, t: usize, rest: &[(usize, usize)], free: &mut [bool], on_path: &mut [bool]) -> bool {
    if at == t {
        return route(g, rest, free);
    }
    for &(w, e) in g.neighbors(at) {
        if free[e] && !on_path[w] {
            free[e] = false;
            on_path[w] = true;
            let found = extend_path(g, w, t, rest, free, on_path);
            on_path[w] = false;
            free[e] = true;
            if found {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::maximal_spanning_forest;

    fn c4() -> Graph {
        Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn crossing_demands_on_a_square() {
        let both = EdpInstance::new(c4(), vec![(0, 2), (1, 3)]).unwrap();
        assert!(!oracle_edp(&both).unwrap());
        assert!(!solve_edp(&both).unwrap());
        let one = EdpInstance::new(c4(), vec![(2, 0)]).unwrap();
        assert!(oracle_edp(&one).unwrap());
        assert!(solve_edp(&one).unwrap());
    }

    #[test]
    fn shared_bridge() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = EdpInstance::new(g.clone(), vec![(0, 2), (1, 3)]).unwrap();
        assert!(!oracle_edp(&inst).unwrap());
        assert!(!solve_edp(&inst).unwrap());
        let single = EdpInstance::new(g, vec![(0, 3)]).unwrap();
        assert!(solve_edp(&single).unwrap());
    }

    #[test]
    fn empty_demands_and_validation() {
        let inst = EdpInstance::new(c4(), vec![]).unwrap();
        assert!(oracle_edp(&inst).unwrap());
        assert!(solve_edp(&inst).unwrap());
        assert!(EdpInstance::new(c4(), vec![(1, 1)]).is_err());
        assert!(EdpInstance::new(c4(), vec![(1, 4)]).is_err());
        assert_eq!(EdpInstance::new(c4(), vec![(2, 0), (0, 2)]).unwrap().demands(), &[(0, 2)]);
        let split = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let inst = EdpInstance::new(split, vec![(0, 1)]).unwrap();
        assert!(matches!(solve_edp(&inst), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn star_center_with_many_terminals() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let ok = EdpInstance::new(star.clone(), vec![(0, 1), (0, 2), (3, 0)]).unwrap();
        assert!(solve_edp(&ok).unwrap());
        let too_many = EdpInstance::new(star, vec![(1, 2), (1, 3)]).unwrap();
        assert!(!solve_edp(&too_many).unwrap());
    }

    #[test]
    fn every_root_agrees_on_k4() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let inst = EdpInstance::new(k4.clone(), vec![(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let expected = oracle_edp(&inst).unwrap();
        let t = maximal_spanning_forest(&k4, None).unwrap();
        for r in 0..4 {
            let t = t.reroot(&k4, r).unwrap();
            assert_eq!(solve_edp_with(&inst, &t).unwrap().answer, expected);
        }
    }

    #[test]
    fn local_records_count() {
        // two ports, no terminals: unused or one pass-through
        assert_eq!(local_records(&[0, 1], &[]).len(), 2);
        // three ports, one terminal: 3 choices, each leaving 2 ports
        assert_eq!(local_records(&[0, 1, 2], &[7]).len(), 6);
        assert!(local_records(&[0], &[1, 2]).is_empty());
    }
}
