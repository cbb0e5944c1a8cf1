// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Undirected weighted graphs, edge-list ingestion and bounded traversals.
//!
//! Node identifiers are opaque strings. At build time they are sorted into a
//! canonical order (integer-looking identifiers numerically first, the rest
//! lexicographically) and re-indexed densely, so every iteration over nodes
//! or over a node's neighbors is deterministic.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense node index, valid for the graph that produced it.
pub type NodeIx = usize;

/// Relative slack used when testing `distance <= radius` on weighted paths.
pub(crate) const RADIUS_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: non-positive edge weight {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },
    #[error("line {line}: duplicate edge {u} -- {v}")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("line {line}: self-loop on {node}")]
    SelfLoop { line: usize, node: String },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(NodeIx),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
}

/// Opaque node identifier with the canonical ordering used throughout.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<i128> {
        self.0.parse::<i128>().ok()
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// How path lengths are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMetric {
    /// Every edge has length one.
    Hops,
    /// Sum of edge weights along the path.
    WeightedShortestPath,
}

/// Immutable undirected graph with positive edge weights.
#[derive(Clone, Debug)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, NodeIx>,
    adjacency: Vec<Vec<(NodeIx, f64)>>,
    weighted: bool,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on nodes `0..n` labelled by their decimal index.
    ///
    /// Used by the generators; edges are validated like any other input.
    pub fn from_index_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeIx, NodeIx)>,
    ) -> Result<Graph, GraphError> {
        let ids = (0..n).map(|i| NodeId(i.to_string())).collect();
        Graph::from_ordered(ids, edges.into_iter().map(|(u, v)| (u, v, 1.0)), false)
    }

    /// Builds a graph whose node order is exactly `ids`, bypassing the
    /// canonical sort. Used for derived graphs such as the regularization.
    pub(crate) fn from_ordered(
        ids: Vec<NodeId>,
        edges: impl IntoIterator<Item = (NodeIx, NodeIx, f64)>,
        weighted: bool,
    ) -> Result<Graph, GraphError> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GraphError::Malformed {
                    line: 0,
                    message: format!("duplicate node identifier {id}"),
                });
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        let mut edge_count = 0;
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::IndexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::IndexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, node: ids[u].to_string() });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(GraphError::NonPositiveWeight { line: 0, weight: w });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge {
                    line: 0,
                    u: ids[u].to_string(),
                    v: ids[v].to_string(),
                });
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            edge_count += 1;
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Graph { ids, index, adjacency, weighted, edge_count })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn id(&self, v: NodeIx) -> &NodeId {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<NodeIx, GraphError> {
        self.index
            .get(&NodeId::from(id))
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(id.to_owned()))
    }

    pub(crate) fn check(&self, v: NodeIx) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange(v))
        }
    }

    /// Neighbors of `v` with edge weights, in canonical order.
    pub fn neighbors(&self, v: NodeIx) -> &[(NodeIx, f64)] {
        &self.adjacency[v]
    }

    /// Number of incident edges.
    pub fn degree(&self, v: NodeIx) -> usize {
        self.adjacency[v].len()
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, v: NodeIx) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    /// Degree of `v`, either as a neighbor count or as a weight sum.
    pub fn degree_of(&self, v: NodeIx, weighted: bool) -> Result<f64, GraphError> {
        self.check(v)?;
        Ok(if weighted { self.weighted_degree(v) } else { self.degree(v) as f64 })
    }

    pub fn weight(&self, u: NodeIx, v: NodeIx) -> Option<f64> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: NodeIx, v: NodeIx) -> bool {
        self.weight(u, v).is_some()
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIx, NodeIx, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter().filter(move |&&(v, _)| u < v).map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn max_edge_weight(&self) -> Option<f64> {
        self.edges().map(|(_, _, w)| w).reduce(f64::max)
    }

    pub fn mean_edge_weight(&self) -> Option<f64> {
        if self.edge_count == 0 {
            return None;
        }
        Some(self.edges().map(|(_, _, w)| w).sum::<f64>() / self.edge_count as f64)
    }

    /// Returns a copy with every edge weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Graph {
        let mut g = self.clone();
        for list in &mut g.adjacency {
            for entry in list.iter_mut() {
                entry.1 *= factor;
            }
        }
        g.weighted = true;
        g
    }

    /// Connected-component label per node; labels are assigned in index order.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in self.neighbors(x) {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// Accumulates nodes and edges, then sorts identifiers canonically.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    weighted: bool,
    nodes: Vec<NodeId>,
    known: HashSet<NodeId>,
    edges: Vec<(NodeId, NodeId, f64, usize)>,
    pairs: HashSet<(NodeId, NodeId)>,
}

impl GraphBuilder {
    pub fn new(weighted: bool) -> Self {
        GraphBuilder { weighted, ..Default::default() }
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>) {
        let id = id.into();
        if self.known.insert(id.clone()) {
            self.nodes.push(id);
        }
    }

    /// Adds an undirected edge. `line` is only used in error messages.
    pub fn add_edge(
        &mut self,
        u: impl Into<NodeId>,
        v: impl Into<NodeId>,
        weight: f64,
        line: usize,
    ) -> Result<(), GraphError> {
        let (u, v) = (u.into(), v.into());
        if u == v {
            return Err(GraphError::SelfLoop { line, node: u.to_string() });
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(GraphError::NonPositiveWeight { line, weight });
        }
        let key = if u < v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) };
        if !self.pairs.insert(key) {
            return Err(GraphError::DuplicateEdge { line, u: u.to_string(), v: v.to_string() });
        }
        self.add_node(u.clone());
        self.add_node(v.clone());
        let weight = if self.weighted { weight } else { 1.0 };
        self.edges.push((u, v, weight, line));
        Ok(())
    }

    pub fn build(self) -> Graph {
        let mut ids = self.nodes;
        ids.sort();
        let position: HashMap<&NodeId, NodeIx> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let edges: Vec<_> =
            self.edges.iter().map(|(u, v, w, _)| (position[u], position[v], *w)).collect();
        // Validation already happened edge by edge.
        Graph::from_ordered(ids, edges, self.weighted).expect("builder edges are validated")
    }
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses an edge list: one `u v` or `u v w` per line, whitespace or comma
/// separated, `#` starts a comment. In unweighted mode a third column is
/// validated but every weight becomes 1.
pub fn load_graph(source: &str, weighted: bool) -> Result<Graph, GraphError> {
    load_graph_with_nodes(source, None, weighted)
}

/// Like [`load_graph`], additionally declaring nodes from a node list (one
/// identifier per line). Nodes that only appear there are isolated.
pub fn load_graph_with_nodes(
    source: &str,
    node_list: Option<&str>,
    weighted: bool,
) -> Result<Graph, GraphError> {
    let mut builder = GraphBuilder::new(weighted);
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = tokens(strip_comment(raw)).collect();
        let (u, v, w) = match fields.as_slice() {
            [] => continue,
            [u, v] => (*u, *v, 1.0),
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| GraphError::Malformed {
                    line,
                    message: format!("cannot parse weight {w:?}"),
                })?;
                (*u, *v, w)
            }
            _ => {
                return Err(GraphError::Malformed {
                    line,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                })
            }
        };
        builder.add_edge(u, v, w, line)?;
    }
    if let Some(nodes) = node_list {
        for (i, raw) in nodes.lines().enumerate() {
            let fields: Vec<&str> = tokens(strip_comment(raw)).collect();
            match fields.as_slice() {
                [] => {}
                [id] => builder.add_node(*id),
                _ => {
                    return Err(GraphError::Malformed {
                        line: i + 1,
                        message: "node list expects one identifier per line".into(),
                    })
                }
            }
        }
    }
    Ok(builder.build())
}

/// Writes `u v` or `u v w` lines in index order.
pub fn write_edge_list(g: &Graph, with_weights: bool) -> String {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        if with_weights {
            out.push_str(&format!("{} {} {}\n", g.id(u), g.id(v), w));
        } else {
            out.push_str(&format!("{} {}\n", g.id(u), g.id(v)));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct HeapEntry(f64, NodeIx);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable traversal buffers. One per worker thread; every query resets in
/// time proportional to the nodes it touched.
#[derive(Debug, Clone)]
pub struct Explorer {
    dist: Vec<f64>,
    touched: Vec<NodeIx>,
    queue: VecDeque<NodeIx>,
    heap: BinaryHeap<Reverse<HeapEntry>>,
}

impl Explorer {
    pub fn new(n: usize) -> Self {
        Explorer {
            dist: vec![f64::INFINITY; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            self.dist = vec![f64::INFINITY; n];
            self.touched.clear();
        }
        for &v in &self.touched {
            self.dist[v] = f64::INFINITY;
        }
        self.touched.clear();
        self.queue.clear();
        self.heap.clear();
    }

    fn seed(&mut self, sources: &[NodeIx]) {
        for &s in sources {
            if self.dist[s] != 0.0 {
                self.dist[s] = 0.0;
                self.touched.push(s);
            }
        }
    }

    /// All nodes within `radius` of the source set, sources included, in the
    /// order they were settled. Sources are at distance zero.
    pub fn ball(
        &mut self,
        g: &Graph,
        sources: &[NodeIx],
        radius: f64,
        metric: PathMetric,
    ) -> &[NodeIx] {
        self.reset(g.node_count());
        self.seed(sources);
        match metric {
            PathMetric::Hops => self.bfs(g, Some(radius.floor())),
            PathMetric::WeightedShortestPath => self.dijkstra(g, Some(radius)),
        }
        &self.touched
    }

    /// Distances from the source set to every node (infinity if unreachable).
    pub fn distances(&mut self, g: &Graph, sources: &[NodeIx], metric: PathMetric) -> &[f64] {
        self.reset(g.node_count());
        self.seed(sources);
        match metric {
            PathMetric::Hops => self.bfs(g, None),
            PathMetric::WeightedShortestPath => self.dijkstra(g, None),
        }
        &self.dist
    }

    fn bfs(&mut self, g: &Graph, limit: Option<f64>) {
        self.queue.extend(self.touched.iter().copied());
        while let Some(x) = self.queue.pop_front() {
            let next = self.dist[x] + 1.0;
            if limit.is_some_and(|r| next > r) {
                continue;
            }
            for &(y, _) in g.neighbors(x) {
                if self.dist[y].is_infinite() {
                    self.dist[y] = next;
                    self.touched.push(y);
                    self.queue.push_back(y);
                }
            }
        }
    }

    fn dijkstra(&mut self, g: &Graph, limit: Option<f64>) {
        let bound = limit.map(|r| r * (1.0 + RADIUS_SLACK));
        let sources: Vec<NodeIx> = self.touched.drain(..).collect();
        for &s in &sources {
            self.heap.push(Reverse(HeapEntry(0.0, s)));
            self.touched.push(s);
        }
        let mut order = Vec::with_capacity(self.touched.len());
        while let Some(Reverse(HeapEntry(d, x))) = self.heap.pop() {
            if d > self.dist[x] {
                continue;
            }
            order.push(x);
            for &(y, w) in g.neighbors(x) {
                let nd = d + w;
                if bound.is_some_and(|b| nd > b) {
                    continue;
                }
                if nd < self.dist[y] {
                    if self.dist[y].is_infinite() {
                        self.touched.push(y);
                    }
                    self.dist[y] = nd;
                    self.heap.push(Reverse(HeapEntry(nd, y)));
                }
            }
        }
        debug_assert_eq!(order.len(), self.touched.len());
        self.touched = order;
    }
}

/// All nodes within distance `radius` of `v`, including `v`, sorted by index.
pub fn neighborhood(
    g: &Graph,
    v: NodeIx,
    radius: f64,
    metric: PathMetric,
) -> Result<Vec<NodeIx>, GraphError> {
    g.check(v)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(GraphError::InvalidRadius(radius));
    }
    let mut explorer = Explorer::new(g.node_count());
    let mut ball = explorer.ball(g, &[v], radius, metric).to_vec();
    ball.sort_unstable();
    Ok(ball)
}

/// Shortest-path distance; infinity when `u` and `v` are disconnected.
pub fn path_distance(
    g: &Graph,
    u: NodeIx,
    v: NodeIx,
    metric: PathMetric,
) -> Result<f64, GraphError> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Ok(0.0);
    }
    let mut explorer = Explorer::new(g.node_count());
    Ok(explorer.distances(g, &[u], metric)[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_index_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn parses_unweighted_edge_list() {
        let g = load_graph("a b\nb c", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|(_, _, w)| w == 1.0));
        assert!(!g.is_weighted());
    }

    #[test]
    fn rejects_reversed_duplicate() {
        let err = load_graph("a b 0.5\nb a 0.5", true).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { line: 2, .. }));
    }

    #[test]
    fn rejects_non_positive_weight() {
        let err = load_graph("a b -1", true).unwrap_err();
        assert_eq!(err, GraphError::NonPositiveWeight { line: 1, weight: -1.0 });
        assert!(load_graph("a b 0", false).is_err());
    }

    #[test]
    fn reports_malformed_line_number() {
        let err = load_graph("# header\na b\nc\n", false).unwrap_err();
        assert!(matches!(err, GraphError::Malformed { line: 3, .. }));
        let err = load_graph("a b x", true).unwrap_err();
        assert!(matches!(err, GraphError::Malformed { line: 1, .. }));
        assert!(matches!(load_graph("a a", false), Err(GraphError::SelfLoop { .. })));
    }

    #[test]
    fn comments_commas_and_node_list() {
        let g = load_graph_with_nodes("1,2 # first\n2 , 10\n", Some("lonely\n3\n"), false).unwrap();
        let ids: Vec<&str> = g.ids().iter().map(|i| i.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3", "10", "lonely"]);
        assert_eq!(g.degree(g.index_of("lonely").unwrap()), 0);
    }

    #[test]
    fn neighborhood_examples() {
        let g = load_graph("a b\nb c", false).unwrap();
        let b = g.index_of("b").unwrap();
        assert_eq!(neighborhood(&g, b, 1.0, PathMetric::Hops).unwrap(), vec![0, 1, 2]);

        let c6 = cycle(6);
        for v in 0..6 {
            assert_eq!(neighborhood(&c6, v, 2.0, PathMetric::Hops).unwrap().len(), 5);
        }

        let w = load_graph("a b 2", true).unwrap();
        let a = w.index_of("a").unwrap();
        assert_eq!(neighborhood(&w, a, 1.0, PathMetric::WeightedShortestPath).unwrap(), vec![a]);
        assert!(matches!(
            neighborhood(&w, 7, 1.0, PathMetric::Hops),
            Err(GraphError::IndexOutOfRange(7))
        ));
    }

    #[test]
    fn degree_examples() {
        let k4 = Graph::from_index_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        assert_eq!(k4.degree_of(2, false).unwrap(), 3.0);
        let star = Graph::from_index_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.degree_of(0, false).unwrap(), 4.0);
        let w = load_graph("x a 0.5\nx b 1.5", true).unwrap();
        assert_eq!(w.degree_of(w.index_of("x").unwrap(), true).unwrap(), 2.0);
    }

    #[test]
    fn distance_examples() {
        let c8 = cycle(8);
        assert_eq!(path_distance(&c8, 0, 4, PathMetric::Hops).unwrap(), 4.0);
        assert_eq!(path_distance(&c8, 3, 3, PathMetric::Hops).unwrap(), 0.0);
        let split = Graph::from_index_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(path_distance(&split, 0, 3, PathMetric::Hops).unwrap().is_infinite());
    }

    #[test]
    fn canonical_order_mixes_ints_and_strings() {
        let mut ids: Vec<NodeId> = ["b", "10", "2", "a", "-1"].into_iter().map(NodeId::from).collect();
        ids.sort();
        let got: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
        assert_eq!(got, ["-1", "2", "10", "a", "b"]);
    }
}
