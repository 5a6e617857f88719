//! Simple undirected graphs, rooted maximal spanning forests and the
//! quantities edge-cut width is built from: fundamental cycles, local
//! feedback edge sets and subtree boundaries.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of an edge in input order.
pub type EdgeId = usize;

/// An undirected simple graph on the vertices `0..n`.
///
/// Edges keep the order they were given in; that order defines their
/// [`EdgeId`]s. Each edge is stored with its smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, EdgeId)>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and endpoints
    /// outside `0..n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, w) in edges {
            g.push_edge(u, w)?;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            index: HashMap::new(),
        }
    }

    fn push_edge(&mut self, u: usize, w: usize) -> Result<EdgeId> {
        for x in [u, w] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == w {
            return Err(Error::SelfLoop(u));
        }
        let key = (u.min(w), u.max(w));
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        let id = self.edges.len();
        self.edges.push(key);
        self.index.insert(key, id);
        self.adj[u].push((w, id));
        self.adj[w].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id]
    }

    /// Neighbours of `v` paired with the connecting edge, sorted by neighbour.
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_id(&self, u: usize, w: usize) -> Option<EdgeId> {
        self.index.get(&(u.min(w), u.max(w))).copied()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.edge_id(u, w).is_some()
    }

    /// The endpoint of edge `id` that is not `v`.
    pub fn opposite(&self, id: EdgeId, v: usize) -> usize {
        let (a, b) = self.edges[id];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// True for graphs with at most one component (the empty graph included).
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Copy of the graph with edge `id` removed. Later edge ids shift down by one.
    pub fn without_edge(&self, id: EdgeId) -> Graph {
        let kept = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != id)
            .map(|(_, &e)| e);
        Graph::new(self.n, kept).expect("subgraph of a simple graph is simple")
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    /// Edges keep their relative order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, w)| local[u] != usize::MAX && local[w] != usize::MAX)
            .map(|&(u, w)| (local[u], local[w]));
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Number of triangles that contain edge `id`.
    pub fn triangles_through(&self, id: EdgeId) -> usize {
        let (u, w) = self.edges[id];
        self.adj[u]
            .iter()
            .filter(|&&(x, _)| x != w && self.has_edge(x, w))
            .count()
    }
}

/// A maximal spanning forest of a host graph, rooted once per component.
///
/// The forest does not borrow its host; functions that need both take the
/// graph alongside. Every constructor checks the forest against the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedSpanningTree {
    parent: Vec<Option<usize>>,
    parent_edge: Vec<Option<EdgeId>>,
    roots: Vec<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    // `preorder[enter[v]..exit[v]]` is the subtree of v.
    preorder: Vec<usize>,
    enter: Vec<usize>,
    exit: Vec<usize>,
    tree_edge: Vec<bool>,
}

impl RootedSpanningTree {
    /// Builds the forest from a parent mapping. Exactly the roots map to `None`.
    pub fn from_parents(g: &Graph, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = g.vertex_count();
        if parent.len() != n {
            return Err(Error::NotSpanning(format!(
                "parent mapping covers {} vertices, graph has {n}",
                parent.len()
            )));
        }
        let mut parent_edge = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None => roots.push(v),
                Some(p) => {
                    if p >= n {
                        return Err(Error::VertexOutOfRange { vertex: p, n });
                    }
                    let id = g.edge_id(v, p).ok_or(Error::NotAnEdge(v, p))?;
                    parent_edge[v] = Some(id);
                    children[p].push(v);
                }
            }
        }
        Self::assemble(g, parent, parent_edge, roots, children)
    }

    /// Builds the forest spanned by the given edges. The component holding
    /// `root_hint` is rooted there; every other component at its smallest vertex.
    pub fn from_edges(g: &Graph, tree_edges: &[EdgeId], root_hint: Option<usize>) -> Result<Self> {
        Self::from_edges_rooted(g, tree_edges, root_order(g.vertex_count(), root_hint)?)
    }

    // `order` lists root candidates by priority; the first candidate met in
    // each component becomes its root.
    fn from_edges_rooted(g: &Graph, tree_edges: &[EdgeId], order: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        let mut adj = vec![Vec::new(); n];
        let mut link: Vec<usize> = (0..n).collect();
        fn find(link: &mut [usize], mut x: usize) -> usize {
            while link[x] != x {
                link[x] = link[link[x]];
                x = link[x];
            }
            x
        }
        for &id in tree_edges {
            if id >= g.edge_count() {
                return Err(Error::NotSpanning(format!("edge id {id} out of range")));
            }
            let (u, w) = g.edge(id);
            let (a, b) = (find(&mut link, u), find(&mut link, w));
            if a == b {
                return Err(Error::NotSpanning("edge set contains a cycle".into()));
            }
            link[a] = b;
            adj[u].push(w);
            adj[w].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        for r in order {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        stack.push(w);
                    }
                }
            }
        }
        Self::from_parents(g, parent)
    }

    fn assemble(
        g: &Graph,
        parent: Vec<Option<usize>>,
        parent_edge: Vec<Option<EdgeId>>,
        roots: Vec<usize>,
        mut children: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = g.vertex_count();
        for list in &mut children {
            list.sort_unstable();
        }
        let mut depth = vec![0; n];
        let mut enter = vec![0; n];
        let mut exit = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        for &r in &roots {
            // (vertex, next child index)
            let mut stack = vec![(r, 0usize)];
            enter[r] = preorder.len();
            preorder.push(r);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&c) = children[v].get(*next) {
                    *next += 1;
                    depth[c] = depth[v] + 1;
                    enter[c] = preorder.len();
                    preorder.push(c);
                    stack.push((c, 0));
                } else {
                    exit[v] = preorder.len();
                    stack.pop();
                }
            }
        }
        if preorder.len() != n {
            return Err(Error::NotSpanning("parent mapping contains a cycle".into()));
        }
        let components = g.component_count();
        if roots.len() != components {
            return Err(Error::NotSpanning(format!(
                "{} trees for {} components",
                roots.len(),
                components
            )));
        }
        let mut tree_edge = vec![false; g.edge_count()];
        for id in parent_edge.iter().flatten() {
            tree_edge[*id] = true;
        }
        Ok(RootedSpanningTree {
            parent,
            parent_edge,
            roots,
            children,
            depth,
            preorder,
            enter,
            exit,
            tree_edge,
        })
    }

    /// Same tree edges, with the component of `root` re-rooted at `root`.
    /// Other components keep their roots.
    pub fn reroot(&self, g: &Graph, root: usize) -> Result<Self> {
        let edges: Vec<EdgeId> = self.tree_edges().collect();
        let mut order = root_order(g.vertex_count(), Some(root))?;
        order.splice(1..1, self.roots.iter().copied());
        Self::from_edges_rooted(g, &edges, order)
    }

    /// Checks that this forest is a maximal spanning forest of `g`.
    pub fn check_spans(&self, g: &Graph) -> Result<()> {
        if self.parent.len() != g.vertex_count() || self.tree_edge.len() != g.edge_count() {
            return Err(Error::NotSpanning("forest built for a different graph".into()));
        }
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if g.edge_id(v, p) != self.parent_edge[v] {
                    return Err(Error::NotSpanning(format!("{{{v}, {p}}} is not a host edge")));
                }
            }
        }
        if self.roots.len() != g.component_count() {
            return Err(Error::NotSpanning("forest is not maximal".into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn parent_edge(&self, v: usize) -> Option<EdgeId> {
        self.parent_edge[v]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn is_tree_edge(&self, id: EdgeId) -> bool {
        self.tree_edge[id]
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.parent_edge.iter().flatten().copied()
    }

    /// Whether `a` is an ancestor of `v` (every vertex is its own ancestor).
    pub fn is_ancestor(&self, a: usize, v: usize) -> bool {
        self.enter[a] <= self.enter[v] && self.enter[v] < self.exit[a]
    }

    pub fn root_of(&self, mut v: usize) -> usize {
        while let Some(p) = self.parent[v] {
            v = p;
        }
        v
    }

    /// Vertices of the subtree rooted at `v`, in preorder, `v` first.
    pub fn descendants(&self, v: usize) -> &[usize] {
        &self.preorder[self.enter[v]..self.exit[v]]
    }

    pub fn subtree_size(&self, v: usize) -> usize {
        self.exit[v] - self.enter[v]
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> Option<usize> {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a]?;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b]?;
        }
        while a != b {
            a = self.parent[a]?;
            b = self.parent[b]?;
        }
        Some(a)
    }

    /// Tree path from `a` to `b`, both included. `None` across components.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let top = self.lca(a, b)?;
        let mut up = vec![a];
        let mut x = a;
        while x != top {
            x = self.parent[x]?;
            up.push(x);
        }
        let mut down = Vec::new();
        let mut y = b;
        while y != top {
            down.push(y);
            y = self.parent[y]?;
        }
        up.extend(down.into_iter().rev());
        Some(up)
    }
}

fn root_order(n: usize, root_hint: Option<usize>) -> Result<Vec<usize>> {
    let mut order = Vec::with_capacity(n + 1);
    if let Some(r) = root_hint {
        if r >= n {
            return Err(Error::VertexOutOfRange { vertex: r, n });
        }
        order.push(r);
    }
    order.extend(0..n);
    Ok(order)
}

/// Depth-first maximal spanning forest. The component of `root_hint` (or
/// vertex 0) is rooted there, the others at their smallest vertex.
/// Neighbours are explored in increasing order, so the result is deterministic.
pub fn maximal_spanning_forest(g: &Graph, root_hint: Option<usize>) -> Result<RootedSpanningTree> {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for r in root_order(n, root_hint)? {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut stack = vec![(r, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            match g.neighbors(v).get(*next) {
                Some(&(w, _)) => {
                    *next += 1;
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        stack.push((w, 0));
                    }
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    RootedSpanningTree::from_parents(g, parent)
}

/// The tree path closing the fundamental cycle of the non-tree edge `{u, w}`,
/// from `u` to `w`.
pub fn fundamental_cycle_path(g: &Graph, t: &RootedSpanningTree, u: usize, w: usize) -> Result<Vec<usize>> {
    let id = g.edge_id(u, w).ok_or(Error::NotAnEdge(u, w))?;
    if t.is_tree_edge(id) {
        return Err(Error::TreeEdge(u, w));
    }
    t.path(u, w)
        .ok_or_else(|| Error::NotSpanning("edge joins two trees of the forest".into()))
}

// v lies on the tree path between a and b.
fn on_path(t: &RootedSpanningTree, a: usize, b: usize, v: usize) -> bool {
    match t.lca(a, b) {
        Some(top) => t.is_ancestor(top, v) && (t.is_ancestor(v, a) || t.is_ancestor(v, b)),
        None => false,
    }
}

/// Non-tree edges whose fundamental cycle passes through `v`, sorted by id.
pub fn local_feedback_edges(g: &Graph, t: &RootedSpanningTree, v: usize) -> Vec<EdgeId> {
    (0..g.edge_count())
        .filter(|&id| !t.is_tree_edge(id))
        .filter(|&id| {
            let (a, b) = g.edge(id);
            on_path(t, a, b, v)
        })
        .collect()
}

/// `|E_loc(v)|` for every vertex at once.
pub fn local_feedback_loads(g: &Graph, t: &RootedSpanningTree) -> Vec<usize> {
    let mut load = vec![0; g.vertex_count()];
    for id in 0..g.edge_count() {
        if t.is_tree_edge(id) {
            continue;
        }
        let (a, b) = g.edge(id);
        if let Some(path) = t.path(a, b) {
            for v in path {
                load[v] += 1;
            }
        }
    }
    load
}

/// Edge-cut width of `g` with respect to the forest `t`.
pub fn ecw_of_tree(g: &Graph, t: &RootedSpanningTree) -> Result<usize> {
    t.check_spans(g)?;
    Ok(1 + local_feedback_loads(g, t).into_iter().max().unwrap_or(0))
}

/// `m - n + c`, the size of every minimum feedback edge set.
pub fn feedback_edge_number(g: &Graph) -> usize {
    g.edge_count() + g.component_count() - g.vertex_count()
}

/// Vertices of the subtree rooted at `v`, `v` included.
pub fn descendants(t: &RootedSpanningTree, v: usize) -> Vec<usize> {
    let mut d = t.descendants(v).to_vec();
    d.sort_unstable();
    d
}

/// The edges leaving the subtree of a node, with their endpoints split by side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryView {
    pub node: usize,
    /// Edges with exactly one endpoint below `node`, by id.
    pub edges: Vec<EdgeId>,
    /// Endpoints of boundary edges inside the subtree, sorted.
    pub inside: Vec<usize>,
    /// Endpoints of boundary edges outside the subtree, sorted.
    pub outside: Vec<usize>,
}

impl BoundaryView {
    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }

    pub fn is_inside(&self, v: usize) -> bool {
        self.inside.binary_search(&v).is_ok()
    }

    /// Number of boundary vertices on both sides.
    pub fn vertex_count(&self) -> usize {
        self.inside.len() + self.outside.len()
    }
}

/// Boundary of the subtree of `v`.
pub fn boundary(g: &Graph, t: &RootedSpanningTree, v: usize) -> BoundaryView {
    let mut edges = Vec::new();
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for &x in t.descendants(v) {
        for &(y, id) in g.neighbors(x) {
            if !t.is_ancestor(v, y) {
                edges.push(id);
                inside.push(x);
                outside.push(y);
            }
        }
    }
    edges.sort_unstable();
    inside.sort_unstable();
    inside.dedup();
    outside.sort_unstable();
    outside.dedup();
    BoundaryView {
        node: v,
        edges,
        inside,
        outside,
    }
}
