//! JSON instance files, tree files, result reports and a DIMACS importer.

use serde::{Deserialize, Serialize};

use crate::changeover::{Arc, MinCcaInstance};
use crate::coloring::{Color, ListColoringInstance};
use crate::csp::{Constraint, CspInstance};
use crate::dp::TableStats;
use crate::edp::EdpInstance;
use crate::error::Error;
use crate::graph::{Graph, RootedSpanningTree};
use crate::roommates::SrtiInstance;

/// Version of the [`ResultReport`] layout.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed DIMACS input, line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("expected instance kind {expected}, found {found}")]
    Kind { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// On-disk form of every instance type, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceFile {
    Graph {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
    Edp {
        n: usize,
        edges: Vec<(usize, usize)>,
        demands: Vec<(usize, usize)>,
    },
    Lcol {
        n: usize,
        edges: Vec<(usize, usize)>,
        lists: Vec<Vec<Color>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        precolored: Vec<(usize, Color)>,
    },
    Csp {
        n: usize,
        constraints: Vec<Constraint>,
    },
    Srti {
        n: usize,
        prefs: Vec<Vec<Vec<usize>>>,
        pi: usize,
    },
    Mincca {
        n: usize,
        arcs: Vec<Arc>,
        colors: usize,
        cost: Vec<Vec<u64>>,
        root: usize,
    },
}

/// A validated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Edp(EdpInstance),
    Lcol(ListColoringInstance),
    Csp(CspInstance),
    Srti(SrtiInstance),
    Mincca(MinCcaInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Graph(_) => "graph",
            Instance::Edp(_) => "edp",
            Instance::Lcol(_) => "lcol",
            Instance::Csp(_) => "csp",
            Instance::Srti(_) => "srti",
            Instance::Mincca(_) => "mincca",
        }
    }

    /// The graph the width is measured on: the incidence graph for CSP,
    /// the acceptability graph for roommates, the undirected shadow for
    /// arborescences.
    pub fn host_graph(&self) -> Graph {
        match self {
            Instance::Graph(g) => g.clone(),
            Instance::Edp(i) => i.graph().clone(),
            Instance::Lcol(i) => i.graph().clone(),
            Instance::Csp(i) => crate::csp::incidence_graph(i).0,
            Instance::Srti(i) => i.acceptability_graph(),
            Instance::Mincca(i) => i.shadow(),
        }
    }

    /// Any file holding a graph can be read as a plain graph.
    pub fn into_graph(self) -> Result<Graph, IoError> {
        match self {
            Instance::Graph(g) => Ok(g),
            Instance::Edp(i) => Ok(i.graph().clone()),
            Instance::Lcol(i) => Ok(i.graph().clone()),
            other => Err(IoError::Kind {
                expected: "graph",
                found: other.kind(),
            }),
        }
    }
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance, Error> {
        Ok(match self {
            InstanceFile::Graph { n, edges } => Instance::Graph(Graph::new(n, edges)?),
            InstanceFile::Edp { n, edges, demands } => Instance::Edp(EdpInstance::new(Graph::new(n, edges)?, demands)?),
            InstanceFile::Lcol {
                n,
                edges,
                lists,
                precolored,
            } => Instance::Lcol(ListColoringInstance::with_precoloring(Graph::new(n, edges)?, lists, &precolored)?),
            InstanceFile::Csp { n, constraints } => Instance::Csp(CspInstance::new(n, constraints)?),
            InstanceFile::Srti { n, prefs, pi } => Instance::Srti(SrtiInstance::new(n, prefs, pi)?),
            InstanceFile::Mincca {
                n,
                arcs,
                colors,
                cost,
                root,
            } => Instance::Mincca(MinCcaInstance::new(n, arcs, colors, cost, root)?),
        })
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        let plain = |g: &Graph| (g.vertex_count(), g.edges().to_vec());
        match inst {
            Instance::Graph(g) => {
                let (n, edges) = plain(g);
                InstanceFile::Graph { n, edges }
            }
            Instance::Edp(i) => {
                let (n, edges) = plain(i.graph());
                InstanceFile::Edp {
                    n,
                    edges,
                    demands: i.demands().to_vec(),
                }
            }
            Instance::Lcol(i) => {
                let (n, edges) = plain(i.graph());
                InstanceFile::Lcol {
                    n,
                    edges,
                    lists: i.lists().to_vec(),
                    precolored: Vec::new(),
                }
            }
            Instance::Csp(i) => InstanceFile::Csp {
                n: i.variable_count(),
                constraints: i.constraints().to_vec(),
            },
            Instance::Srti(i) => InstanceFile::Srti {
                n: i.agent_count(),
                prefs: i.preferences().to_vec(),
                pi: i.target(),
            },
            Instance::Mincca(i) => InstanceFile::Mincca {
                n: i.vertex_count(),
                arcs: i.arcs().to_vec(),
                colors: i.colors(),
                cost: i.cost().to_vec(),
                root: i.root(),
            },
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    Ok(file.into_instance()?)
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(inst)).expect("instance files always serialize")
}

/// A spanning forest as an edge list. Reports written by the `ecw`
/// command are accepted too: their `witness` field is read as `edges`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    #[serde(default)]
    pub root: Option<usize>,
    #[serde(alias = "witness")]
    pub edges: Vec<(usize, usize)>,
}

impl TreeFile {
    pub fn from_tree(g: &Graph, t: &RootedSpanningTree) -> Self {
        TreeFile {
            root: t.roots().first().copied(),
            edges: t.tree_edges().map(|e| g.edge(e)).collect(),
        }
    }

    /// Resolves the pairs against `g` and checks that they form a maximal
    /// spanning forest.
    pub fn to_tree(&self, g: &Graph) -> Result<RootedSpanningTree, Error> {
        let ids = self
            .edges
            .iter()
            .map(|&(u, w)| g.edge_id(u, w).ok_or(Error::NotAnEdge(u, w)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(r) = self.root.filter(|&r| r >= g.vertex_count()) {
            return Err(Error::VertexOutOfRange {
                vertex: r,
                n: g.vertex_count(),
            });
        }
        let t = RootedSpanningTree::from_edges(g, &ids, self.root)?;
        t.check_spans(g)?;
        Ok(t)
    }
}

pub fn parse_tree(text: &str) -> Result<TreeFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_decomposition(text: &str) -> Result<crate::decomposition::TreeDecomposition, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads a DIMACS edge list (`p edge n m`, then `e u w` lines with 1-based
/// vertices). Repeated edges are merged; the declared edge count is not
/// enforced.
pub fn parse_dimacs(text: &str) -> Result<Graph, IoError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| IoError::Dimacs { line: line_no, message };
        let mut words = line.split_whitespace();
        match words.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = words.next().ok_or_else(|| err("missing format".into()))?;
                let count = words.next().and_then(|w| w.parse::<usize>().ok());
                n = Some(count.ok_or_else(|| err("missing vertex count".into()))?);
            }
            Some("e") => {
                let n = n.ok_or_else(|| err("edge before problem line".into()))?;
                let mut end = || -> Result<usize, IoError> {
                    let v: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err("expected two vertex numbers".into()))?;
                    if v == 0 || v > n {
                        return Err(err(format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let (u, w) = (end()?, end()?);
                edges.push((u.min(w), u.max(w)));
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or(IoError::Dimacs {
        line: 0,
        message: "no problem line".into(),
    })?;
    let mut seen = std::collections::HashSet::new();
    edges.retain(|e| seen.insert(*e));
    Ok(Graph::new(n, edges)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Value(u64),
    /// The optimization problem has no feasible solution.
    None,
}

/// Machine-readable outcome of a CLI command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultReport {
    pub version: u32,
    pub tool: String,
    pub command: String,
    pub verdict: Verdict,
    /// Optimum behind a yes/no verdict, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    /// Edge-cut width of the tree that was used.
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub root: Option<usize>,
    pub witness: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TableStats>,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ResultReport {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        ResultReport {
            version: REPORT_VERSION,
            tool: concat!("ecw ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.to_string(),
            verdict,
            value: None,
            width: None,
            exact: None,
            root: None,
            witness: Vec::new(),
            tables: None,
            wall_ms: 0,
            seed: None,
        }
    }

    pub fn with_tree(mut self, g: &Graph, t: &RootedSpanningTree) -> Self {
        let file = TreeFile::from_tree(g, t);
        self.root = file.root;
        self.witness = file.edges;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_csp, random_edp, random_lists, random_mincca, random_srti, Seed};

    #[test]
    fn round_trips() {
        let all = [
            Instance::Graph(crate::fixtures::random_graph(6, 7, Seed(1)).unwrap()),
            Instance::Edp(random_edp(6, 8, 2, Seed(1)).unwrap()),
            Instance::Lcol(random_lists(6, 8, 3, Seed(1)).unwrap()),
            Instance::Csp(random_csp(5, 3, 3, 0.5, Seed(1)).unwrap()),
            Instance::Srti(random_srti(5, 6, 0.3, 2, Seed(1)).unwrap()),
            Instance::Mincca(random_mincca(5, 6, 2, 4, Seed(1)).unwrap()),
        ];
        for inst in all {
            let text = instance_to_json(&inst);
            assert_eq!(parse_instance(&text).unwrap(), inst, "{text}");
        }
    }

    #[test]
    fn field_names() {
        let g = parse_instance(r#"{"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(g.host_graph().edge_count(), 2);
        let l = parse_instance(r#"{"kind": "lcol", "n": 2, "edges": [[0, 1]], "lists": [[0, 1], [0, 1]], "precolored": [[1, 0]]}"#)
            .unwrap();
        let Instance::Lcol(l) = l else { panic!() };
        assert_eq!(l.lists()[1], vec![0]);
        let c = parse_instance(r#"{"kind": "csp", "n": 1, "constraints": [{"scope": [0], "relation": [[true]]}]}"#);
        assert!(c.is_ok());
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_instance("{"), Err(IoError::Json(_))));
        assert!(matches!(parse_instance(r#"{"kind": "graph", "n": 2, "edges": [[0, 2]]}"#), Err(IoError::Invalid(_))));
        assert!(matches!(parse_instance(r#"{"kind": "tree", "n": 2}"#), Err(IoError::Json(_))));
        assert!(matches!(parse_instance(r#"{"kind": "graph", "n": 2, "edges": [], "extra": 1}"#), Err(IoError::Json(_))));
    }

    #[test]
    fn trees_and_reports() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = crate::graph::maximal_spanning_forest(&g, Some(2)).unwrap();
        let file = TreeFile::from_tree(&g, &t);
        assert_eq!(file.to_tree(&g).unwrap(), t);

        let report = ResultReport::new("ecw", Verdict::Value(2)).with_tree(&g, &t);
        let text = serde_json::to_string(&report).unwrap();
        let back = parse_tree(&text).unwrap();
        assert_eq!(back.to_tree(&g).unwrap(), t);
        assert!(text.contains(r#""verdict":{"value":2}"#));

        let not_spanning = TreeFile { root: None, edges: vec![(0, 1)] };
        assert!(not_spanning.to_tree(&g).is_err());
        let foreign = TreeFile { root: None, edges: vec![(0, 1), (1, 3)] };
        assert!(foreign.to_tree(&g).is_err());
    }

    #[test]
    fn dimacs() {
        let g = parse_dimacs("c triangle\np edge 3 4\ne 1 2\ne 2 3\ne 3 1\ne 2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 1\n").is_err());
        assert!(parse_dimacs("p edge 2 1\nx\n").is_err());
    }
}
