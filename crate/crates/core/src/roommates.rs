//! Maximum stable matchings for roommates preferences with ties and
//! incomplete lists.
//!
//! A signature tells, for each boundary edge, whether it is matched and,
//! if not, whether the inside endpoint is content with its own partner
//! ([`EdgeState::Safe`]) or would rather take the edge
//! ([`EdgeState::Unsafe`]). An unmatched edge blocks exactly when both
//! endpoints see it as unsafe.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::dp::{
    build_component_context, classify_children, default_tree, for_each_combination, Outcome, SolverContext, TableStats,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, RootedSpanningTree};

/// Agents with preference lists split into tie groups, best group first,
/// and a target matching size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrtiInstance {
    agents: usize,
    prefs: Vec<Vec<Vec<usize>>>,
    pi: usize,
    // rank[v][w] = tie group of w in v's list
    rank: Vec<BTreeMap<usize, usize>>,
}

impl SrtiInstance {
    pub fn new(agents: usize, prefs: Vec<Vec<Vec<usize>>>, pi: usize) -> Result<Self> {
        if prefs.len() != agents {
            return Err(Error::InvalidInstance(format!("{} preference lists for {agents} agents", prefs.len())));
        }
        let mut rank = vec![BTreeMap::new(); agents];
        for (v, groups) in prefs.iter().enumerate() {
            for (g, group) in groups.iter().enumerate() {
                if group.is_empty() {
                    return Err(Error::InvalidInstance(format!("agent {v} has an empty tie group")));
                }
                for &w in group {
                    if w >= agents {
                        return Err(Error::VertexOutOfRange { vertex: w, n: agents });
                    }
                    if w == v {
                        return Err(Error::InvalidInstance(format!("agent {v} lists itself")));
                    }
                    if rank[v].insert(w, g).is_some() {
                        return Err(Error::InvalidInstance(format!("agent {v} lists {w} twice")));
                    }
                }
            }
        }
        Ok(SrtiInstance {
            agents,
            prefs,
            pi,
            rank,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.agents
    }

    pub fn preferences(&self) -> &[Vec<Vec<usize>>] {
        &self.prefs
    }

    pub fn target(&self) -> usize {
        self.pi
    }

    /// Tie group of `w` in the list of `v`.
    pub fn rank(&self, v: usize, w: usize) -> Option<usize> {
        self.rank[v].get(&w).copied()
    }

    /// `v` strictly prefers `w` to `current`; being unmatched is worst.
    pub fn prefers(&self, v: usize, w: usize, current: Option<usize>) -> bool {
        let Some(rw) = self.rank(v, w) else { return false };
        current.is_none_or(|c| self.rank(v, c).is_none_or(|rc| rw < rc))
    }

    /// Mutually acceptable pairs.
    pub fn acceptability_graph(&self) -> Graph {
        let edges = (0..self.agents).flat_map(|v| {
            self.rank[v]
                .keys()
                .copied()
                .filter(move |&w| v < w && self.rank[w].contains_key(&v))
                .map(move |w| (v, w))
        });
        Graph::new(self.agents, edges).expect("pairs are distinct and in range")
    }

    /// Whether the acceptable pair `{v, w}` blocks `partner`, a matching
    /// given as each agent's partner.
    pub fn is_blocking(&self, partner: &[Option<usize>], v: usize, w: usize) -> Result<bool> {
        if self.rank(v, w).is_none() || self.rank(w, v).is_none() {
            return Err(Error::NotAnEdge(v, w));
        }
        if partner[v] == Some(w) {
            return Ok(false);
        }
        Ok(self.prefers(v, w, partner[v]) && self.prefers(w, v, partner[w]))
    }

    pub fn is_stable(&self, partner: &[Option<usize>]) -> bool {
        self.acceptability_graph()
            .edges()
            .iter()
            .all(|&(v, w)| !self.is_blocking(partner, v, w).expect("acceptable pair"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeState {
    Matched,
    /// The inside endpoint weakly prefers its partner to the other end.
    Safe,
    Unsafe,
}

/// Boundary edge states, sorted by edge.
pub type Signature = Vec<(EdgeId, EdgeState)>;
/// Best matching size per signature; missing signatures are unrealizable.
pub type SignatureTable = BTreeMap<Signature, usize>;

/// Size of a largest stable matching, or `None` if there is no stable
/// matching at all.
pub fn solve_maxsrti(inst: &SrtiInstance) -> Result<Option<usize>> {
    let graph = inst.acceptability_graph();
    let tree = default_tree(&graph)?;
    Ok(solve_maxsrti_with(inst, &tree)?.answer)
}

/// Whether some stable matching reaches the target size.
pub fn decide_maxsrti(inst: &SrtiInstance) -> Result<bool> {
    Ok(solve_maxsrti(inst)?.is_some_and(|size| size >= inst.pi))
}

/// Runs the dynamic program on every tree of `tree`, a spanning forest of
/// the acceptability graph, and adds up the component optima.
pub fn solve_maxsrti_with(inst: &SrtiInstance, tree: &RootedSpanningTree) -> Result<Outcome<Option<usize>>> {
    let graph = inst.acceptability_graph();
    let mut stats = TableStats::default();
    let mut total = 0;
    for &root in tree.roots() {
        let ctx = build_component_context(&graph, tree, root)?;
        let mut run = Run {
            ctx: &ctx,
            inst,
            tables: vec![SignatureTable::new(); graph.vertex_count()],
            stats: TableStats {
                width: ctx.width,
                ..Default::default()
            },
        };
        let best = run.execute();
        stats.absorb(run.stats);
        match best {
            Some(size) => total += size,
            None => return Ok(Outcome { answer: None, stats }),
        }
    }
    Ok(Outcome {
        answer: Some(total),
        stats,
    })
}

struct Run<'c> {
    ctx: &'c SolverContext,
    inst: &'c SrtiInstance,
    tables: Vec<SignatureTable>,
    stats: TableStats,
}

impl Run<'_> {
    fn execute(&mut self) -> Option<usize> {
        for i in 0..self.ctx.postorder.len() {
            let v = self.ctx.postorder[i];
            let table = self.node(v);
            self.stats.observe(table.len());
            if table.is_empty() {
                return None;
            }
            self.tables[v] = table;
        }
        self.tables[self.ctx.root].get(&Vec::new()).copied()
    }

    fn node(&mut self, v: usize) -> SignatureTable {
        let split = classify_children(self.ctx, v);
        let trivial: Vec<(usize, SignatureTable)> = split
            .trivial
            .iter()
            .map(|&u| (u, std::mem::take(&mut self.tables[u])))
            .collect();
        let ports = self.ctx.ports(v, &split.trivial);
        let g = &self.ctx.graph;

        let mut local = SignatureTable::new();
        let choices = std::iter::once(None).chain(g.neighbors(v).iter().map(|&(w, _)| Some(w)));
        'choice: for partner in choices {
            let content = |w: usize| match partner {
                Some(p) => self.inst.rank(v, p) <= self.inst.rank(v, w),
                None => false,
            };
            let mut size = partner.is_some() as usize;
            for (u, table) in &trivial {
                let up = g.edge_id(v, *u).expect("tree edge");
                let state = |s: EdgeState| table.get(&vec![(up, s)]).copied();
                let gain = if partner == Some(*u) {
                    state(EdgeState::Matched).map(|x| x - 1)
                } else if content(*u) {
                    state(EdgeState::Safe).max(state(EdgeState::Unsafe))
                } else {
                    state(EdgeState::Safe)
                };
                match gain {
                    Some(x) => size += x,
                    None => continue 'choice,
                }
            }
            let signature: Signature = ports
                .iter()
                .map(|&e| {
                    let w = g.opposite(e, v);
                    let s = if partner == Some(w) {
                        EdgeState::Matched
                    } else if content(w) {
                        EdgeState::Safe
                    } else {
                        EdgeState::Unsafe
                    };
                    (e, s)
                })
                .collect();
            keep_best(&mut local, signature, size);
        }

        let mut parts: Vec<Vec<(Signature, usize)>> = vec![local.into_iter().collect()];
        parts.extend(
            split
                .heavy
                .iter()
                .map(|&c| std::mem::take(&mut self.tables[c]).into_iter().collect()),
        );
        let mut out = SignatureTable::new();
        for_each_combination(&parts, |combo| {
            if let Some((sig, size)) = self.merge(v, combo) {
                keep_best(&mut out, sig, size);
            }
            ControlFlow::Continue(())
        });
        out
    }

    fn merge(&self, v: usize, combo: &[&(Signature, usize)]) -> Option<(Signature, usize)> {
        let mut entries: Vec<(EdgeId, EdgeState)> = combo.iter().flat_map(|(s, _)| s.iter().copied()).collect();
        entries.sort_unstable();
        let mut size: usize = combo.iter().map(|(_, x)| x).sum();
        let mut signature = Signature::new();
        let mut i = 0;
        while i < entries.len() {
            let (e, a) = entries[i];
            if self.ctx.on_boundary(v, e) {
                signature.push((e, a));
                i += 1;
                continue;
            }
            let (e2, b) = entries[i + 1];
            debug_assert_eq!(e, e2);
            match (a, b) {
                (EdgeState::Matched, EdgeState::Matched) => size -= 1,
                (EdgeState::Matched, _) | (_, EdgeState::Matched) => return None,
                (EdgeState::Unsafe, EdgeState::Unsafe) => return None,
                _ => {}
            }
            i += 2;
        }
        Some((signature, size))
    }
}

fn keep_best(table: &mut SignatureTable, signature: Signature, size: usize) {
    let slot = table.entry(signature).or_insert(size);
    *slot = (*slot).max(size);
}

pub const ORACLE_MAX_EDGES: usize = 16;

/// Tries every matching of the acceptability graph.
pub fn oracle_srti(inst: &SrtiInstance) -> Result<Option<usize>> {
    let g = inst.acceptability_graph();
    let m = g.edge_count();
    if m > ORACLE_MAX_EDGES {
        return Err(Error::Budget(format!("{m} acceptable pairs exceed the limit of {ORACLE_MAX_EDGES}")));
    }
    let mut best = None;
    'subset: for bits in 0..1u32 << m {
        let mut partner = vec![None; inst.agents];
        for (i, &(u, w)) in g.edges().iter().enumerate() {
            if bits >> i & 1 == 1 {
                if partner[u].is_some() || partner[w].is_some() {
                    continue 'subset;
                }
                partner[u] = Some(w);
                partner[w] = Some(u);
            }
        }
        if inst.is_stable(&partner) {
            best = best.max(Some(bits.count_ones() as usize));
        }
    }
    Ok(best)
}
