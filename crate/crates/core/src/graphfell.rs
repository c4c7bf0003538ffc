//! The Fell criterion for path groupoids of acyclic graphs: every infinite
//! path must eventually reach a vertex `v` with `|vE*w| ≤ 1` for all `w`.
//!
//! Paths run against the arrows: `vE*w` is the set of paths `α` with
//! `r(α) = v` and `s(α) = w`, and an infinite path `x` has
//! `r(x_{i+1}) = s(x_i)`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` listed twice")]
    DuplicateVertex(String),
    #[error("edge `{0}` listed twice")]
    DuplicateEdge(String),
    #[error("graph has a cycle through edges {0:?}")]
    Cyclic(Vec<String>),
    #[error("malformed periodic presentation: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub range: String,
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectedGraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub range: usize,
    pub source: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DirectedGraphJson", into = "DirectedGraphJson")]
pub struct DirectedGraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    /// `vE¹`: edges with range `v`, in edge order.
    into: Vec<Vec<usize>>,
}

impl TryFrom<DirectedGraphJson> for DirectedGraph {
    type Error = GraphError;

    fn try_from(json: DirectedGraphJson) -> Result<Self, GraphError> {
        let edges = json.edges.into_iter().map(|e| (e.id, e.range, e.source)).collect();
        Self::from_named(json.vertices, edges)
    }
}

impl From<DirectedGraph> for DirectedGraphJson {
    fn from(g: DirectedGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .map(|e| EdgeJson {
                id: e.id.clone(),
                range: g.vertices[e.range].clone(),
                source: g.vertices[e.source].clone(),
            })
            .collect();
        DirectedGraphJson { vertices: g.vertices, edges }
    }
}

impl DirectedGraph {
    /// Edges are `(id, range, source)` by vertex index.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut into = vec![Vec::new(); vertices.len()];
        let mut ids = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (k, (id, range, source)) in edges.into_iter().enumerate() {
            for end in [range, source] {
                if end >= vertices.len() {
                    return Err(GraphError::UnknownVertex(format!("#{end}")));
                }
            }
            if !ids.insert(id.clone()) {
                return Err(GraphError::DuplicateEdge(id));
            }
            into[range].push(k);
            out.push(Edge { id, range, source });
        }
        Ok(Self { vertices, index, edges: out, into })
    }

    /// Edges are `(id, range, source)` by vertex name.
    pub fn from_named<S: ToString>(vertices: Vec<S>, edges: Vec<(S, S, S)>) -> Result<Self, GraphError> {
        let vertices: Vec<String> = vertices.into_iter().map(|v| v.to_string()).collect();
        let lookup: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let find = |v: String| lookup.get(v.as_str()).copied().ok_or(GraphError::UnknownVertex(v));
        let edges = edges
            .into_iter()
            .map(|(id, r, s)| Ok((id.to_string(), find(r.to_string())?, find(s.to_string())?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// `vE¹`.
    pub fn edges_into(&self, v: usize) -> &[usize] {
        &self.into[v]
    }

    /// The graph without one edge.
    pub fn without_edge(&self, k: usize) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, e)| (e.id.clone(), e.range, e.source))
            .collect();
        Self::new(self.vertices.clone(), edges).expect("subgraph of a valid graph")
    }

    /// Vertices ordered so that every edge's source precedes its range, or
    /// the edges of a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>, Vec<usize>> {
        // Depth-first from each vertex along v ← s(e); post-order puts
        // sources first. Colour 1 marks the active stack.
        let n = self.len();
        let mut colour = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        let mut via: Vec<Option<usize>> = vec![None; n];
        for start in 0..n {
            if colour[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            colour[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&e) = self.into[v].get(*next) {
                    *next += 1;
                    let w = self.edges[e].source;
                    match colour[w] {
                        0 => {
                            colour[w] = 1;
                            via[w] = Some(e);
                            stack.push((w, 0));
                        }
                        1 => {
                            // Walk back from v to w along the stack.
                            let mut cycle = vec![e];
                            let mut x = v;
                            while x != w {
                                let f = via[x].expect("on stack");
                                cycle.push(f);
                                x = self.edges[f].range;
                            }
                            cycle.reverse();
                            return Err(cycle);
                        }
                        _ => {}
                    }
                } else {
                    colour[v] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// `min(|uE*w|, 2)` for every `w`.
    pub fn path_counts_from(&self, u: usize) -> Vec<u8> {
        // Vertices reachable from u, then counts in reverse post-order.
        let mut order = Vec::new();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![(u, 0usize)];
        seen[u] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&e) = self.into[v].get(*next) {
                *next += 1;
                let w = self.edges[e].source;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
        let mut counts = vec![0u8; self.len()];
        counts[u] = 1;
        for &v in order.iter().rev() {
            let c = counts[v];
            if c == 0 {
                continue;
            }
            for &e in &self.into[v] {
                let w = self.edges[e].source;
                counts[w] = (counts[w] + c).min(2);
            }
        }
        counts
    }

    fn names(&self, edges: &[usize]) -> Vec<String> {
        edges.iter().map(|&e| self.edges[e].id.clone()).collect()
    }

    /// Vertices reachable from `u`, each with the edge path that first
    /// reached it, in breadth-first order.
    fn bfs_paths(&self, u: usize) -> Vec<(usize, Vec<usize>)> {
        let mut paths: HashMap<usize, Vec<usize>> = HashMap::from([(u, vec![])]);
        let mut order = vec![u];
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.into[v] {
                let w = self.edges[e].source;
                if !paths.contains_key(&w) {
                    let mut p = paths[&v].clone();
                    p.push(e);
                    paths.insert(w, p);
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order.into_iter().map(|v| (v, paths[&v].clone())).collect()
    }

    /// Two distinct paths in `uE*w` for some `w`, if any: they share a
    /// prefix up to a vertex `x`, leave it by different edges and then
    /// follow shortest paths to a common vertex.
    pub fn two_paths(&self, u: usize) -> Option<PathPair> {
        for (x, prefix) in self.bfs_paths(u) {
            // (tail length, endpoint, first edge, tails)
            let mut best: Option<(usize, usize, [usize; 2], [Vec<usize>; 2])> = None;
            let into = &self.into[x];
            for (i, &e1) in into.iter().enumerate() {
                let from1: HashMap<usize, Vec<usize>> = self.bfs_paths(self.edges[e1].source).into_iter().collect();
                for &e2 in &into[i + 1..] {
                    let meet = self.bfs_paths(self.edges[e2].source).into_iter().find(|(c, _)| from1.contains_key(c));
                    if let Some((c, tail2)) = meet {
                        let tail1 = from1[&c].clone();
                        let len = tail1.len() + tail2.len();
                        if best.as_ref().is_none_or(|b| len < b.0) {
                            best = Some((len, c, [e1, e2], [tail1, tail2]));
                        }
                    }
                }
            }
            if let Some((_, c, firsts, tails)) = best {
                let path = |k: usize| {
                    let mut p = prefix.clone();
                    p.push(firsts[k]);
                    p.extend(&tails[k]);
                    self.names(&p)
                };
                return Some(PathPair {
                    vertex: self.vertices[u].clone(),
                    endpoint: self.vertices[c].clone(),
                    paths: [path(0), path(1)],
                });
            }
        }
        None
    }

    /// Checks that `paths` are two distinct paths from `vertex` to `endpoint`.
    pub fn check_path_pair(&self, pair: &PathPair) -> bool {
        let (Some(v), Some(w)) = (self.index_of(&pair.vertex), self.index_of(&pair.endpoint)) else {
            return false;
        };
        let walk = |ids: &[String]| -> Option<usize> {
            let mut at = v;
            for id in ids {
                let e = &self.edges[self.edge_index(id)?];
                if e.range != at {
                    return None;
                }
                at = e.source;
            }
            Some(at)
        };
        pair.paths[0] != pair.paths[1] && walk(&pair.paths[0]) == Some(w) && walk(&pair.paths[1]) == Some(w)
    }
}

/// `vertex` with two distinct paths to `endpoint`, as edge-id lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPair {
    pub vertex: String,
    pub endpoint: String,
    pub paths: [Vec<String>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphValidation {
    pub row_finite: bool,
    pub no_sources: bool,
    pub acyclic: bool,
    /// Vertices receiving no edge.
    pub sources: Vec<String>,
    /// Edge ids of a cycle, each edge's source the next one's range.
    pub cycle_witness: Option<Vec<String>>,
}

pub fn validate_graph(g: &DirectedGraph) -> GraphValidation {
    let sources: Vec<String> = (0..g.len()).filter(|&v| g.into[v].is_empty()).map(|v| g.vertices[v].clone()).collect();
    let cycle = g.topological_order().err();
    GraphValidation {
        row_finite: true,
        no_sources: sources.is_empty(),
        acyclic: cycle.is_none(),
        sources,
        cycle_witness: cycle.map(|c| g.names(&c)),
    }
}

/// `v` is single-threaded when `|vE*w| ≤ 1` for every `w`.
pub fn single_threaded_vertices(g: &DirectedGraph) -> Result<Vec<bool>, GraphError> {
    let order = g.topological_order().map_err(|c| GraphError::Cyclic(g.names(&c)))?;
    // counts[v][w] = min(|vE*w|, 2), filled sources first.
    let n = g.len();
    let mut counts = vec![vec![0u8; n]; n];
    for &v in &order {
        let mut row = vec![0u8; n];
        row[v] = 1;
        for &e in &g.into[v] {
            let s = g.edges[e].source;
            for (r, &c) in row.iter_mut().zip(&counts[s]) {
                *r = (*r + c).min(2);
            }
        }
        counts[v] = row;
    }
    Ok(counts.iter().map(|row| row.iter().all(|&c| c <= 1)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Fell,
    NotFell,
    NotPrincipal,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FellVerdict {
    pub verdict: Verdict,
    /// Copies unrolled when the verdict is undecided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undecided_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PathPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    /// One period of an infinite path avoiding single-threaded vertices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_walk: Option<Vec<String>>,
    pub single_threaded: Vec<String>,
    pub not_single_threaded: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unroll_depth: Option<usize>,
}

impl FellVerdict {
    fn new(verdict: Verdict) -> Self {
        Self {
            verdict,
            undecided_depth: None,
            caveat: None,
            witness: None,
            cycle: None,
            infinite_walk: None,
            single_threaded: vec![],
            not_single_threaded: vec![],
            unroll_depth: None,
        }
    }
}

pub const NO_INFINITE_PATHS: &str = "no infinite paths exist";

/// Verdict for a finite graph. Acyclic finite graphs have no infinite paths,
/// so the criterion holds vacuously and the caveat says so.
pub fn fell_verdict(g: &DirectedGraph) -> FellVerdict {
    let labels = match single_threaded_vertices(g) {
        Ok(l) => l,
        Err(GraphError::Cyclic(cycle)) => {
            let mut v = FellVerdict::new(Verdict::NotPrincipal);
            v.cycle = Some(cycle);
            return v;
        }
        Err(e) => unreachable!("{e}"),
    };
    let mut v = FellVerdict::new(Verdict::Fell);
    v.caveat = Some(NO_INFINITE_PATHS.to_string());
    for (i, &st) in labels.iter().enumerate() {
        if st {
            v.single_threaded.push(g.vertices[i].clone());
        } else {
            v.not_single_threaded.push(g.vertices[i].clone());
        }
    }
    v
}

/// An infinite graph: a finite prefix followed by copies `0, 1, 2, …` of a
/// finite block.
///
/// Seams join copy `k` to copy `k+1` (range in `k`, source in `k+1`), links
/// join the prefix to copy 0 (range in the prefix, source in copy 0), and
/// each ray attaches an infinite chain `… → ρ₂ → ρ₁ → v` below a vertex,
/// once per copy for block vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PeriodicGraphJson", into = "PeriodicGraphJson")]
pub struct PeriodicGraph {
    prefix: DirectedGraph,
    block: DirectedGraph,
    /// `(id, prefix range, block source)`.
    links: Vec<(String, usize, usize)>,
    /// `(id, block range, block source)`.
    seams: Vec<(String, usize, usize)>,
    prefix_rays: Vec<usize>,
    block_rays: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicGraphJson {
    #[serde(default)]
    pub prefix: DirectedGraphJson,
    pub block: DirectedGraphJson,
    #[serde(default)]
    pub links: Vec<EdgeJson>,
    pub seams: Vec<EdgeJson>,
    #[serde(default)]
    pub rays: Vec<String>,
}

impl TryFrom<PeriodicGraphJson> for PeriodicGraph {
    type Error = GraphError;

    fn try_from(json: PeriodicGraphJson) -> Result<Self, GraphError> {
        let prefix = DirectedGraph::try_from(json.prefix)?;
        let block = DirectedGraph::try_from(json.block)?;
        let triple = |e: EdgeJson| (e.id, e.range, e.source);
        Self::new(
            prefix,
            block,
            json.links.into_iter().map(triple).collect(),
            json.seams.into_iter().map(triple).collect(),
            json.rays,
        )
    }
}

impl From<PeriodicGraph> for PeriodicGraphJson {
    fn from(p: PeriodicGraph) -> Self {
        let edge = |(id, r, s): &(String, usize, usize), rg: &DirectedGraph, sg: &DirectedGraph| EdgeJson {
            id: id.clone(),
            range: rg.vertices[*r].clone(),
            source: sg.vertices[*s].clone(),
        };
        let rays = p
            .prefix_rays
            .iter()
            .map(|&v| p.prefix.vertices[v].clone())
            .chain(p.block_rays.iter().map(|&v| p.block.vertices[v].clone()))
            .collect();
        PeriodicGraphJson {
            links: p.links.iter().map(|l| edge(l, &p.prefix, &p.block)).collect(),
            seams: p.seams.iter().map(|s| edge(s, &p.block, &p.block)).collect(),
            prefix: p.prefix.into(),
            block: p.block.into(),
            rays,
        }
    }
}

/// Cap on the number of vertices of an unrolling.
pub const MAX_UNROLLED_VERTICES: usize = 200_000;

/// Unrolled copy `k` names block vertex `v` and edge `e` as `v_{k+1}`,
/// `e_{k+1}`; a seam with range in copy `k` is also numbered `k+1`.
pub fn copy_name(name: &str, copy: usize) -> String {
    format!("{name}_{}", copy + 1)
}

#[derive(Debug, Clone)]
pub struct Unrolled {
    pub graph: DirectedGraph,
    pub copies: usize,
    prefix_len: usize,
    block_len: usize,
}

impl Unrolled {
    pub fn vertex(&self, copy: usize, b: usize) -> usize {
        self.prefix_len + copy * self.block_len + b
    }
}

impl PeriodicGraph {
    pub fn new(
        prefix: DirectedGraph,
        block: DirectedGraph,
        links: Vec<(String, String, String)>,
        seams: Vec<(String, String, String)>,
        rays: Vec<String>,
    ) -> Result<Self, GraphError> {
        if let Some(v) = prefix.vertices.iter().find(|v| block.index.contains_key(*v)) {
            return Err(GraphError::Malformed(format!("vertex `{v}` is in both prefix and block")));
        }
        let mut ids: HashSet<String> = prefix.edges.iter().chain(&block.edges).map(|e| e.id.clone()).collect();
        let find = |g: &DirectedGraph, v: &str, what: &str| {
            g.index_of(v).ok_or_else(|| GraphError::Malformed(format!("{what} names unknown vertex `{v}`")))
        };
        let mut resolve = |edges: Vec<(String, String, String)>, rg: &DirectedGraph, what: &str| {
            edges
                .into_iter()
                .map(|(id, r, s)| {
                    if !ids.insert(id.clone()) {
                        return Err(GraphError::DuplicateEdge(id));
                    }
                    Ok((id, find(rg, &r, what)?, find(&block, &s, what)?))
                })
                .collect::<Result<Vec<_>, GraphError>>()
        };
        let links = resolve(links, &prefix, "link")?;
        let seams = resolve(seams, &block, "seam")?;
        let mut prefix_rays = Vec::new();
        let mut block_rays = Vec::new();
        for r in rays {
            match (prefix.index_of(&r), block.index_of(&r)) {
                (Some(v), _) => prefix_rays.push(v),
                (_, Some(v)) => block_rays.push(v),
                _ => return Err(GraphError::Malformed(format!("ray attaches to unknown vertex `{r}`"))),
            }
        }
        Ok(Self { prefix, block, links, seams, prefix_rays, block_rays })
    }

    /// The graph in which each `v_n` receives two parallel edges from `t_n`,
    /// `t_n` receives an edge from `w_n`, `v_n` receives an edge from
    /// `v_{n+1}`, and an infinite chain ends at each `w_n`.
    pub fn doubled_ladder() -> Self {
        let block = DirectedGraph::from_named(
            vec!["v", "t", "w"],
            vec![("f1", "v", "t"), ("f2", "v", "t"), ("g", "t", "w")],
        )
        .expect("valid block");
        let seam = vec![("e".to_string(), "v".to_string(), "v".to_string())];
        Self::new(DirectedGraph::new(vec![], vec![]).expect("empty"), block, vec![], seam, vec!["w".into()])
            .expect("valid presentation")
    }

    pub fn prefix(&self) -> &DirectedGraph {
        &self.prefix
    }

    pub fn block(&self) -> &DirectedGraph {
        &self.block
    }

    pub fn without_block_edge(&self, id: &str) -> Option<Self> {
        let k = self.block.edge_index(id)?;
        Some(Self { block: self.block.without_edge(k), ..self.clone() })
    }

    /// Copies needed for exact labels on copies 0 and 1 and the prefix.
    ///
    /// A vertex fails to be single-threaded iff it reaches a vertex `x` with
    /// two incoming edges whose sources share a descendant. Walking two such
    /// descendant paths together, always advancing the one in the lower copy,
    /// keeps their copy offset within 1, so a meeting is found within as many
    /// steps as there are (vertex, vertex, offset) states.
    pub fn exact_depth(&self) -> usize {
        let m = self.prefix.len() + self.block.len();
        m + 3 * m * m + 2
    }

    pub fn unroll(&self, copies: usize) -> Unrolled {
        let (p, m) = (self.prefix.len(), self.block.len());
        let mut vertices = self.prefix.vertices.clone();
        for k in 0..copies {
            vertices.extend(self.block.vertices.iter().map(|v| copy_name(v, k)));
        }
        let at = |k: usize, b: usize| p + k * m + b;
        let mut edges: Vec<(String, usize, usize)> =
            self.prefix.edges.iter().map(|e| (e.id.clone(), e.range, e.source)).collect();
        if copies > 0 {
            edges.extend(self.links.iter().map(|(id, r, s)| (id.clone(), *r, at(0, *s))));
        }
        for k in 0..copies {
            edges.extend(self.block.edges.iter().map(|e| (copy_name(&e.id, k), at(k, e.range), at(k, e.source))));
            if k + 1 < copies {
                edges.extend(self.seams.iter().map(|(id, r, s)| (copy_name(id, k), at(k, *r), at(k + 1, *s))));
            }
        }
        let graph = DirectedGraph::new(vertices, edges).expect("unrolling of a valid presentation");
        Unrolled { graph, copies, prefix_len: p, block_len: m }
    }

    /// Validation of the infinite graph.
    pub fn validate(&self) -> GraphValidation {
        let mut receives_prefix = vec![false; self.prefix.len()];
        let mut receives_block = vec![false; self.block.len()];
        for e in &self.prefix.edges {
            receives_prefix[e.range] = true;
        }
        for (_, r, _) in &self.links {
            receives_prefix[*r] = true;
        }
        for e in &self.block.edges {
            receives_block[e.range] = true;
        }
        for (_, r, _) in &self.seams {
            receives_block[*r] = true;
        }
        for &v in &self.prefix_rays {
            receives_prefix[v] = true;
        }
        for &v in &self.block_rays {
            receives_block[v] = true;
        }
        let mut sources: Vec<String> =
            (0..self.prefix.len()).filter(|&v| !receives_prefix[v]).map(|v| self.prefix.vertices[v].clone()).collect();
        sources.extend(
            (0..self.block.len()).filter(|&v| !receives_block[v]).map(|v| format!("{} (every copy)", self.block.vertices[v])),
        );
        // Seams move strictly forward, so any cycle lies in the prefix or in
        // one copy of the block.
        let cycle = match self.prefix.topological_order() {
            Err(c) => Some(self.prefix.names(&c)),
            Ok(_) => self.block.topological_order().err().map(|c| self.block.names(&c)),
        };
        GraphValidation {
            row_finite: true,
            no_sources: sources.is_empty(),
            acyclic: cycle.is_none(),
            sources,
            cycle_witness: cycle,
        }
    }
}

/// Labels block vertices from copy-0 path counts in an exact-depth
/// unrolling, then looks for an infinite walk through non-single-threaded
/// block copies, which must cross seams forever and so shows up as a cycle
/// among block vertices joined by block edges and seams.
pub fn periodic_fell_verdict(p: &PeriodicGraph) -> FellVerdict {
    let validation = p.validate();
    if let Some(cycle) = validation.cycle_witness {
        let mut v = FellVerdict::new(Verdict::NotPrincipal);
        v.cycle = Some(cycle);
        return v;
    }
    let copies = p.exact_depth() + 2;
    if p.prefix.len() + copies * p.block.len() > MAX_UNROLLED_VERTICES {
        let mut v = FellVerdict::new(Verdict::Undecided);
        v.undecided_depth = Some(copies);
        return v;
    }
    let unrolled = p.unroll(copies);
    let g = &unrolled.graph;
    let single = |u: usize| g.path_counts_from(u).iter().all(|&c| c <= 1);
    let m = p.block.len();
    let copy0: Vec<bool> = (0..m).map(|b| single(unrolled.vertex(0, b))).collect();
    let copy1: Vec<bool> = (0..m).map(|b| single(unrolled.vertex(1, b))).collect();
    let mut verdict = FellVerdict::new(Verdict::Fell);
    verdict.unroll_depth = Some(copies);
    for (v, name) in p.prefix.vertices.iter().enumerate() {
        if single(v) {
            verdict.single_threaded.push(name.clone());
        } else {
            verdict.not_single_threaded.push(name.clone());
        }
    }
    for (b, name) in p.block.vertices.iter().enumerate() {
        let label = format!("{name} (every copy)");
        if copy0[b] {
            verdict.single_threaded.push(label);
        } else {
            verdict.not_single_threaded.push(label);
        }
    }
    if copy0 != copy1 {
        // Cannot happen at exact depth; reported rather than guessed.
        verdict.verdict = Verdict::Undecided;
        verdict.undecided_depth = Some(copies);
        return verdict;
    }

    // Quotient walk v → s(e) over non-single-threaded block vertices, with a
    // flag for edges that cross into the next copy.
    let mut next: Vec<Vec<(usize, bool, String)>> = vec![Vec::new(); m];
    for e in &p.block.edges {
        if !copy0[e.range] && !copy0[e.source] {
            next[e.range].push((e.source, false, e.id.clone()));
        }
    }
    for (id, r, s) in &p.seams {
        if !copy0[*r] && !copy0[*s] {
            next[*r].push((*s, true, id.clone()));
        }
    }
    let Some(cycle) = find_quotient_cycle(&next) else {
        return verdict;
    };
    // Lift the cycle to copy 0 onwards.
    let (start, _) = cycle[0];
    let mut copy = 0;
    let mut walk = Vec::new();
    for &(from, k) in &cycle {
        let (_, crosses, id) = &next[from][k];
        walk.push(copy_name(id, copy));
        if *crosses {
            copy += 1;
        }
    }
    let (first_to, first_crosses, _) = &next[start][cycle[0].1];
    let witness_vertex = unrolled.vertex(usize::from(*first_crosses), *first_to);
    verdict.verdict = Verdict::NotFell;
    verdict.infinite_walk = Some(walk);
    verdict.witness = g.two_paths(witness_vertex);
    verdict
}

/// A cycle in the quotient walk graph as `(vertex, edge slot)` steps.
fn find_quotient_cycle(next: &[Vec<(usize, bool, String)>]) -> Option<Vec<(usize, usize)>> {
    let m = next.len();
    let mut colour = vec![0u8; m];
    for root in 0..m {
        if colour[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        colour[root] = 1;
        while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
            if *slot < next[v].len() {
                let k = *slot;
                *slot += 1;
                let w = next[v][k].0;
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(x, _)| x == w).expect("on stack");
                        return Some(stack[pos..].iter().map(|&(x, s)| (x, s - 1)).collect());
                    }
                    _ => {}
                }
            } else {
                colour[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Counts `|vE*w|` by listing every path.
    fn brute_force(g: &DirectedGraph) -> Vec<bool> {
        fn walk(g: &DirectedGraph, v: usize, ends: &mut Vec<usize>) {
            ends.push(v);
            for &e in g.edges_into(v) {
                walk(g, g.edges()[e].source, ends);
            }
        }
        (0..g.len())
            .map(|v| {
                let mut ends = Vec::new();
                walk(g, v, &mut ends);
                let unique: HashSet<usize> = ends.iter().copied().collect();
                unique.len() == ends.len()
            })
            .collect()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
        let vertices = (0..n).map(|i| format!("x{i}")).collect();
        let edges = edges.iter().enumerate().map(|(k, &(r, s))| (format!("e{k}"), r, s)).collect();
        DirectedGraph::new(vertices, edges).unwrap()
    }

    #[test]
    fn loop_is_a_cycle() {
        let g = graph(1, &[(0, 0)]);
        let v = validate_graph(&g);
        assert!(!v.acyclic);
        assert_eq!(v.cycle_witness, Some(vec!["e0".to_string()]));
        let verdict = fell_verdict(&g);
        assert_eq!(verdict.verdict, Verdict::NotPrincipal);
    }

    #[test]
    fn parallel_edges() {
        // Two edges w → v, i.e. range v = 1, source w = 0.
        let g = graph(2, &[(1, 0), (1, 0)]);
        let v = validate_graph(&g);
        assert!(v.acyclic && !v.no_sources);
        assert_eq!(v.sources, vec!["x0"]);
        assert_eq!(single_threaded_vertices(&g).unwrap(), vec![true, false]);
        let pair = g.two_paths(1).unwrap();
        assert!(g.check_path_pair(&pair));
        assert_eq!(pair.paths, [vec!["e0".to_string()], vec!["e1".to_string()]]);
    }

    #[test]
    fn trees_and_isolated_vertices() {
        let tree = graph(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]);
        assert!(single_threaded_vertices(&tree).unwrap().iter().all(|&b| b));
        let lone = graph(1, &[]);
        assert_eq!(single_threaded_vertices(&lone).unwrap(), vec![true]);
        let verdict = fell_verdict(&tree);
        assert_eq!(verdict.verdict, Verdict::Fell);
        assert_eq!(verdict.caveat.as_deref(), Some(NO_INFINITE_PATHS));
    }

    #[test]
    fn cyclic_input_is_rejected() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(single_threaded_vertices(&g), Err(GraphError::Cyclic(c)) if c.len() == 3));
    }

    #[test]
    fn doubled_ladder_is_not_fell() {
        let p = PeriodicGraph::doubled_ladder();
        let unrolled = p.unroll(3);
        let v = validate_graph(&unrolled.graph);
        assert!(v.acyclic && v.row_finite);
        let verdict = periodic_fell_verdict(&p);
        assert_eq!(verdict.verdict, Verdict::NotFell);
        assert_eq!(verdict.infinite_walk, Some(vec!["e_1".to_string()]));
        let w = verdict.witness.unwrap();
        assert_eq!(w.vertex, "v_2");
        assert_eq!(w.endpoint, "t_2");
        assert_eq!(w.paths, [vec!["f1_2".to_string()], vec!["f2_2".to_string()]]);
        assert!(unrolled.graph.check_path_pair(&w));
    }

    #[test]
    fn deleting_a_parallel_edge_gives_fell() {
        let p = PeriodicGraph::doubled_ladder().without_block_edge("f2").unwrap();
        let verdict = periodic_fell_verdict(&p);
        assert_eq!(verdict.verdict, Verdict::Fell);
        assert!(verdict.not_single_threaded.is_empty());
        assert!(verdict.caveat.is_none());
    }

    #[test]
    fn pure_tail_is_fell() {
        let block = DirectedGraph::from_named(vec!["a"], vec![]).unwrap();
        let p = PeriodicGraph::new(
            DirectedGraph::new(vec![], vec![]).unwrap(),
            block,
            vec![],
            vec![("c".into(), "a".into(), "a".into())],
            vec![],
        )
        .unwrap();
        assert!(p.validate().no_sources);
        assert_eq!(periodic_fell_verdict(&p).verdict, Verdict::Fell);
    }

    #[test]
    fn branching_that_rejoins_a_copy_later() {
        // a_k receives b_k and c_k; both receive from a_{k+1}. Every a_k then
        // has two paths to a_{k+1}, and the walk along a is infinite.
        let block = DirectedGraph::from_named(
            vec!["a", "b", "c"],
            vec![("p", "a", "b"), ("q", "a", "c")],
        )
        .unwrap();
        let seams = vec![("sb".into(), "b".into(), "a".into()), ("sc".into(), "c".into(), "a".into())];
        let p = PeriodicGraph::new(DirectedGraph::new(vec![], vec![]).unwrap(), block, vec![], seams, vec![]).unwrap();
        let verdict = periodic_fell_verdict(&p);
        assert_eq!(verdict.verdict, Verdict::NotFell);
        let w = verdict.witness.unwrap();
        assert!(p.unroll(4).graph.check_path_pair(&w));
    }

    #[test]
    fn periodic_cycle_is_not_principal() {
        let block = DirectedGraph::from_named(vec!["a"], vec![("l", "a", "a")]).unwrap();
        let p = PeriodicGraph::new(DirectedGraph::new(vec![], vec![]).unwrap(), block, vec![], vec![], vec![]).unwrap();
        assert_eq!(periodic_fell_verdict(&p).verdict, Verdict::NotPrincipal);
    }

    #[test]
    fn malformed_seams() {
        let block = DirectedGraph::from_named(vec!["a"], vec![]).unwrap();
        let err = PeriodicGraph::new(
            DirectedGraph::new(vec![], vec![]).unwrap(),
            block,
            vec![],
            vec![("s".into(), "a".into(), "zz".into())],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::Malformed(_)));
    }

    #[test]
    fn json_round_trip() {
        let p = PeriodicGraph::doubled_ladder();
        let text = serde_json::to_string(&p).unwrap();
        let back: PeriodicGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let g = graph(3, &[(0, 1), (0, 2)]);
        let back: DirectedGraph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    fn dag() -> impl Strategy<Value = DirectedGraph> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..14).prop_map(move |pairs| {
                // Orient every edge from the larger index to the smaller.
                let edges: Vec<(usize, usize)> =
                    pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
                graph(n, &edges)
            })
        })
    }

    proptest! {
        #[test]
        fn matches_path_enumeration(g in dag()) {
            prop_assert_eq!(single_threaded_vertices(&g).unwrap(), brute_force(&g));
        }

        #[test]
        fn deleting_an_edge_never_shrinks_the_set(g in dag(), pick in 0usize..100) {
            prop_assume!(!g.edges().is_empty());
            let before = single_threaded_vertices(&g).unwrap();
            let after = single_threaded_vertices(&g.without_edge(pick % g.edges().len())).unwrap();
            prop_assert!(before.iter().zip(&after).all(|(&b, &a)| !b || a));
        }

        #[test]
        fn witnesses_revalidate(g in dag()) {
            let labels = single_threaded_vertices(&g).unwrap();
            for (v, &st) in labels.iter().enumerate() {
                match g.two_paths(v) {
                    Some(pair) => prop_assert!(!st && g.check_path_pair(&pair)),
                    None => prop_assert!(st),
                }
            }
        }
    }
}
