//! Boolean constraint satisfaction on the variable/constraint incidence graph.
//!
//! Vertices `0..variables` are variables and vertex `variables + i` is
//! constraint `i`. A record at `v` is an assignment to the variables among
//! the endpoints of boundary edges of the subtree, on either side.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::dp::{
    build_component_context, canonicalize, classify_children, default_tree, for_each_combination, Outcome,
    SolverContext, TableStats,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedSpanningTree};

/// Allowed value tuples over a scope of distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub relation: Vec<Vec<bool>>,
}

impl Constraint {
    pub fn allows(&self, assignment: &[bool]) -> bool {
        let tuple: Vec<bool> = self.scope.iter().map(|&x| assignment[x]).collect();
        self.relation.binary_search(&tuple).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    variables: usize,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    /// Relations are sorted and deduplicated.
    pub fn new(variables: usize, mut constraints: Vec<Constraint>) -> Result<Self> {
        for (i, c) in constraints.iter_mut().enumerate() {
            let mut seen = c.scope.clone();
            canonicalize(&mut seen);
            if seen.len() != c.scope.len() {
                return Err(Error::InvalidInstance(format!("constraint {i} repeats a variable")));
            }
            if let Some(&x) = seen.last().filter(|&&x| x >= variables) {
                return Err(Error::VertexOutOfRange { vertex: x, n: variables });
            }
            if let Some(t) = c.relation.iter().find(|t| t.len() != c.scope.len()) {
                return Err(Error::InvalidInstance(format!(
                    "constraint {i} has scope of size {} but a tuple of length {}",
                    c.scope.len(),
                    t.len()
                )));
            }
            canonicalize(&mut c.relation);
        }
        Ok(CspInstance { variables, constraints })
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variables && self.constraints.iter().all(|c| c.allows(assignment))
    }
}

/// What an incidence-graph vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Variable(usize),
    Constraint(usize),
}

/// Bipartite graph joining each constraint to the variables of its scope.
pub fn incidence_graph(inst: &CspInstance) -> (Graph, Vec<Side>) {
    let v = inst.variables;
    let edges: Vec<(usize, usize)> = inst
        .constraints
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.scope.iter().map(move |&x| (x, v + i)))
        .collect();
    let graph = Graph::new(v + inst.constraints.len(), edges).expect("scopes hold distinct in-range variables");
    let sides = (0..v)
        .map(Side::Variable)
        .chain((0..inst.constraints.len()).map(Side::Constraint))
        .collect();
    (graph, sides)
}

/// Removes `variable` from the one constraint that mentions it, keeping
/// the tuples that extend to some value of it.
pub fn eliminate_pendant_variable(inst: &CspInstance, variable: usize) -> Result<CspInstance> {
    let users: Vec<usize> = (0..inst.constraints.len())
        .filter(|&i| inst.constraints[i].scope.contains(&variable))
        .collect();
    let [i] = users[..] else {
        return Err(Error::InvalidParameter(format!(
            "variable {variable} occurs in {} constraints, not 1",
            users.len()
        )));
    };
    let mut constraints = inst.constraints.clone();
    constraints[i] = project_out(&constraints[i], variable);
    CspInstance::new(inst.variables, constraints)
}

fn project_out(c: &Constraint, variable: usize) -> Constraint {
    let pos = c.scope.iter().position(|&x| x == variable).expect("variable in scope");
    let mut scope = c.scope.clone();
    scope.remove(pos);
    let mut relation: Vec<Vec<bool>> = c
        .relation
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.remove(pos);
            t
        })
        .collect();
    canonicalize(&mut relation);
    Constraint { scope, relation }
}

/// Variable values, sorted by variable.
pub type Assignment = Vec<(usize, bool)>;

pub fn solve_csp(inst: &CspInstance) -> Result<bool> {
    let (graph, _) = incidence_graph(inst);
    let tree = default_tree(&graph)?;
    Ok(solve_csp_with(inst, &tree)?.answer)
}

/// Runs the dynamic program on every tree of `tree`, a spanning forest of
/// the incidence graph; satisfiable iff every component is.
pub fn solve_csp_with(inst: &CspInstance, tree: &RootedSpanningTree) -> Result<Outcome<bool>> {
    let (graph, _) = incidence_graph(inst);
    let mut stats = TableStats::default();
    for &root in tree.roots() {
        let ctx = build_component_context(&graph, tree, root)?;
        let mut run = Run {
            ctx: &ctx,
            inst,
            tables: vec![Vec::new(); graph.vertex_count()],
            stats: TableStats {
                width: ctx.width,
                ..Default::default()
            },
        };
        let ok = run.execute();
        stats.absorb(run.stats);
        if !ok {
            return Ok(Outcome { answer: false, stats });
        }
    }
    Ok(Outcome { answer: true, stats })
}

struct Run<'c> {
    ctx: &'c SolverContext,
    inst: &'c CspInstance,
    tables: Vec<Vec<Assignment>>,
    stats: TableStats,
}

impl Run<'_> {
    fn execute(&mut self) -> bool {
        for i in 0..self.ctx.postorder.len() {
            let v = self.ctx.postorder[i];
            let table = self.node(v).unwrap_or_default();
            self.stats.observe(table.len());
            if table.is_empty() {
                return false;
            }
            self.tables[v] = table;
        }
        true
    }

    fn is_variable(&self, v: usize) -> bool {
        v < self.inst.variables
    }

    fn node(&mut self, v: usize) -> Option<Vec<Assignment>> {
        let split = classify_children(self.ctx, v);
        let local: Vec<Assignment> = if self.is_variable(v) {
            let mut allowed = vec![false, true];
            for &u in &split.trivial {
                // a constraint hanging off v: keep the values it can live with
                let table = std::mem::take(&mut self.tables[u]);
                allowed.retain(|&b| table.iter().any(|r| r == &[(v, b)]));
            }
            allowed.into_iter().map(|b| vec![(v, b)]).collect()
        } else {
            let mut c = self.inst.constraints[v - self.inst.variables].clone();
            for &u in &split.trivial {
                // a variable used by no other constraint
                let table = std::mem::take(&mut self.tables[u]);
                let pos = c.scope.iter().position(|&x| x == u).expect("child variable in scope");
                c.relation.retain(|t| table.iter().any(|r| r == &[(u, t[pos])]));
                c = project_out(&c, u);
            }
            c.relation
                .iter()
                .map(|t| {
                    let mut r: Assignment = c.scope.iter().copied().zip(t.iter().copied()).collect();
                    r.sort_unstable();
                    r
                })
                .collect()
        };
        if local.is_empty() {
            return None;
        }

        let b = &self.ctx.boundaries[v];
        let mut keep: Vec<usize> = b.inside.iter().chain(&b.outside).copied().filter(|&x| self.is_variable(x)).collect();
        canonicalize(&mut keep);

        let mut parts = vec![local];
        parts.extend(split.heavy.iter().map(|&c| std::mem::take(&mut self.tables[c])));
        let mut out = Vec::new();
        for_each_combination(&parts, |combo| {
            if let Some(joined) = join(combo) {
                out.push(joined.into_iter().filter(|p| keep.binary_search(&p.0).is_ok()).collect());
            }
            ControlFlow::Continue(())
        });
        canonicalize(&mut out);
        Some(out)
    }
}

fn join(parts: &[&Assignment]) -> Option<Assignment> {
    let mut all: Assignment = parts.iter().flat_map(|r| r.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    if all.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    Some(all)
}

pub const ORACLE_MAX_VARIABLES: usize = 24;

/// Tries all assignments.
pub fn oracle_csp(inst: &CspInstance) -> Result<bool> {
    if inst.variables > ORACLE_MAX_VARIABLES {
        return Err(Error::Budget(format!(
            "{} variables exceed the enumeration limit of {ORACLE_MAX_VARIABLES}",
            inst.variables
        )));
    }
    let n = inst.variables;
    Ok((0..1u64 << n).any(|bits| {
        let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        inst.is_satisfied_by(&a)
    }))
}
