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

//! Quasi-isometric embedding of a graph into a 3-regular graph.
//!
//! Every vertex is replaced by a gadget chosen by its degree:
//!
//! * leaf (degree 1): `v` plus `a0..a3`, internal edges `v-a0, v-a1, a0-a2,
//!   a0-a3, a1-a2, a1-a3, a2-a3`;
//! * chain (degree 2): the edge to the second neighbor `u2` is split through
//!   a triangle `a0, a1, a2` (`v-a0`, `v-a1`, `a2-u2`);
//! * fork (degree 3): unchanged;
//! * star (degree >= 4): `v` becomes a ring `a1..a_d`, ring node `a_i`
//!   carrying the spoke to the i-th neighbor in canonical order.
//!
//! Gadget-internal edges weigh `eps / 4` with `eps` the largest input weight.
//! An original edge of weight `w` is realized by segments summing to exactly
//! `w`: a single joining edge when no endpoint splits it, `w/2 + w/2` when one
//! chain splits it, and `w/4 + w/2 + w/4` when both endpoints split it. Hence
//! `d_G <= d_G3` between vertex images, and the transformation only depends on
//! the frozen input, never on processing order.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Explorer, Graph, GraphError, NodeId, NodeIx, PathMetric};

#[derive(Debug, Error, PartialEq)]
pub enum RegularizeError {
    #[error("cannot regularize an empty graph")]
    Empty,
    #[error("cannot regularize a graph without edges")]
    NoEdges,
    #[error("auxiliary identifier {0:?} collides with an input node")]
    IdCollision(String),
    #[error("node {0:?} has no image in the regularized graph")]
    Unmapped(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Degree class of an input vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexRole {
    Isolated,
    Leaf,
    Chain,
    Fork,
    Star,
}

impl VertexRole {
    pub fn of_degree(d: usize) -> Self {
        match d {
            0 => VertexRole::Isolated,
            1 => VertexRole::Leaf,
            2 => VertexRole::Chain,
            3 => VertexRole::Fork,
            _ => VertexRole::Star,
        }
    }
}

/// Where a node of the regularized graph comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The input vertex itself.
    Original(NodeIx),
    /// Gadget node `gadget` created for input vertex `origin`.
    Auxiliary { origin: NodeIx, gadget: usize },
}

impl Provenance {
    pub fn origin(&self) -> NodeIx {
        match *self {
            Provenance::Original(v) => v,
            Provenance::Auxiliary { origin, .. } => origin,
        }
    }
}

/// The regularized graph edges carrying the weight of one input edge.
#[derive(Clone, Debug)]
pub struct EdgeRealization {
    pub u: NodeIx,
    pub v: NodeIx,
    pub weight: f64,
    /// `(a, b, w)` triples in the regularized graph; weights sum to `weight`.
    pub segments: Vec<(NodeIx, NodeIx, f64)>,
}

#[derive(Clone, Debug)]
pub struct RegularizedGraph {
    /// The 3-regular output graph.
    pub graph: Graph,
    provenance: Vec<Provenance>,
    epsilon: f64,
    roles: Vec<VertexRole>,
    root_size: Vec<usize>,
    images: Vec<Vec<NodeIx>>,
    edges: Vec<EdgeRealization>,
    input_weighted: bool,
}

impl RegularizedGraph {
    pub fn provenance(&self, x: NodeIx) -> Provenance {
        self.provenance[x]
    }

    pub fn provenance_map(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn role(&self, v: NodeIx) -> VertexRole {
        self.roles[v]
    }

    /// `|v|`: the size of the root structure of input vertex `v`.
    pub fn root_size(&self, v: NodeIx) -> usize {
        self.root_size[v]
    }

    /// Nodes of the regularized graph standing for input vertex `v`: `v`
    /// itself, or its whole ring when `v` is a star. Empty for isolated
    /// vertices.
    pub fn image(&self, v: NodeIx) -> &[NodeIx] {
        &self.images[v]
    }

    pub fn original_count(&self) -> usize {
        self.images.len()
    }

    pub fn auxiliary_count(&self) -> usize {
        self.provenance.iter().filter(|p| matches!(p, Provenance::Auxiliary { .. })).count()
    }

    /// Whether `x` is a ring node of a star vertex.
    pub fn is_ring_node(&self, x: NodeIx) -> bool {
        match self.provenance[x] {
            Provenance::Auxiliary { origin, .. } => self.roles[origin] == VertexRole::Star,
            Provenance::Original(_) => false,
        }
    }

    /// Input vertices of degree zero; they have no image.
    pub fn unmapped(&self) -> impl Iterator<Item = NodeIx> + '_ {
        self.images.iter().enumerate().filter(|(_, im)| im.is_empty()).map(|(v, _)| v)
    }

    pub fn edge_realizations(&self) -> &[EdgeRealization] {
        &self.edges
    }

    /// Whether the input graph carried real weights.
    pub fn input_weighted(&self) -> bool {
        self.input_weighted
    }
}

struct Gadget {
    keeps_original: bool,
    aux: Vec<usize>,
    internal: Vec<(usize, usize, f64)>,
    /// Local node per neighbor position.
    ports: Vec<usize>,
    image: Vec<usize>,
}

/// `true` when `v` is a chain that routes its edge to neighbor position `pos`
/// through its triangle gadget.
fn splits(g: &Graph, v: NodeIx, pos: usize) -> bool {
    g.degree(v) == 2 && pos == 1
}

fn splits_toward(g: &Graph, v: NodeIx, u: NodeIx) -> bool {
    g.degree(v) == 2 && g.neighbors(v)[1].0 == u
}

// Local index 0 is the original vertex when it is kept; auxiliaries follow.
fn build_gadget(g: &Graph, v: NodeIx, quarter: f64) -> Gadget {
    let nb = g.neighbors(v);
    match VertexRole::of_degree(nb.len()) {
        VertexRole::Isolated => Gadget {
            keeps_original: false,
            aux: vec![],
            internal: vec![],
            ports: vec![],
            image: vec![],
        },
        VertexRole::Leaf => {
            let (v0, a0, a1, a2, a3) = (0, 1, 2, 3, 4);
            let internal = [(v0, a0), (v0, a1), (a0, a2), (a0, a3), (a1, a2), (a1, a3), (a2, a3)]
                .into_iter()
                .map(|(x, y)| (x, y, quarter))
                .collect();
            Gadget {
                keeps_original: true,
                aux: vec![0, 1, 2, 3],
                internal,
                ports: vec![v0],
                image: vec![v0],
            }
        }
        VertexRole::Chain => {
            let (v0, a0, a1, a2) = (0, 1, 2, 3);
            let (u2, w) = nb[1];
            let half = if splits_toward(g, u2, v) { w / 4.0 } else { w / 2.0 };
            let internal = vec![
                (v0, a0, half),
                (v0, a1, half),
                (a0, a1, quarter),
                (a0, a2, quarter),
                (a1, a2, quarter),
            ];
            Gadget {
                keeps_original: true,
                aux: vec![0, 1, 2],
                internal,
                ports: vec![v0, a2],
                image: vec![v0],
            }
        }
        VertexRole::Fork => Gadget {
            keeps_original: true,
            aux: vec![],
            internal: vec![],
            ports: vec![0, 0, 0],
            image: vec![0],
        },
        VertexRole::Star => {
            let d = nb.len();
            let internal = (0..d).map(|i| (i, (i + 1) % d, quarter)).collect();
            Gadget {
                keeps_original: false,
                aux: (1..=d).collect(),
                internal,
                ports: (0..d).collect(),
                image: (0..d).collect(),
            }
        }
    }
}

/// Maps `g` onto a graph in which every node has degree exactly 3.
pub fn regularize(g: &Graph) -> Result<RegularizedGraph, RegularizeError> {
    if g.node_count() == 0 {
        return Err(RegularizeError::Empty);
    }
    let epsilon = g.max_edge_weight().ok_or(RegularizeError::NoEdges)?;
    let quarter = epsilon / 4.0;

    let gadgets: Vec<Gadget> =
        (0..g.node_count()).into_par_iter().map(|v| build_gadget(g, v, quarter)).collect();

    // Deterministic merge: gadgets are laid out in input vertex order.
    let mut ids = Vec::new();
    let mut provenance = Vec::new();
    let mut offsets = Vec::with_capacity(gadgets.len());
    for (v, gadget) in gadgets.iter().enumerate() {
        offsets.push(ids.len());
        if gadget.keeps_original {
            ids.push(g.id(v).clone());
            provenance.push(Provenance::Original(v));
        }
        for &k in &gadget.aux {
            let id = format!("{}~a{}", g.id(v), k);
            if g.index_of(&id).is_ok() {
                return Err(RegularizeError::IdCollision(id));
            }
            ids.push(NodeId::new(id));
            provenance.push(Provenance::Auxiliary { origin: v, gadget: k });
        }
    }

    let mut g3_edges = Vec::new();
    for (v, gadget) in gadgets.iter().enumerate() {
        let base = offsets[v];
        g3_edges.extend(gadget.internal.iter().map(|&(x, y, w)| (base + x, base + y, w)));
    }

    let mut realizations = Vec::with_capacity(g.edge_count());
    for (u, v, w) in g.edges() {
        let pos_u = g.neighbors(u).iter().position(|&(x, _)| x == v).expect("symmetric");
        let pos_v = g.neighbors(v).iter().position(|&(x, _)| x == u).expect("symmetric");
        let port_u = offsets[u] + gadgets[u].ports[pos_u];
        let port_v = offsets[v] + gadgets[v].ports[pos_v];
        let (su, sv) = (splits(g, u, pos_u), splits(g, v, pos_v));
        let joining = if su || sv { w / 2.0 } else { w };
        g3_edges.push((port_u, port_v, joining));
        let mut segments = vec![(port_u, port_v, joining)];
        let split_weight = if su && sv { w / 4.0 } else { w / 2.0 };
        for (x, flag) in [(u, su), (v, sv)] {
            if flag {
                // v-a0 and v-a1 are parallel routes; one of them lies on any path.
                segments.push((offsets[x], offsets[x] + 1, split_weight));
            }
        }
        realizations.push(EdgeRealization { u, v, weight: w, segments });
    }

    let images: Vec<Vec<NodeIx>> = gadgets
        .iter()
        .enumerate()
        .map(|(v, gd)| gd.image.iter().map(|&x| offsets[v] + x).collect())
        .collect();
    let roles: Vec<VertexRole> =
        (0..g.node_count()).map(|v| VertexRole::of_degree(g.degree(v))).collect();
    let root_size =
        (0..g.node_count()).map(|v| if g.degree(v) >= 4 { g.degree(v) } else { 1 }).collect();

    let graph = Graph::from_ordered(ids, g3_edges, true)?;
    Ok(RegularizedGraph {
        graph,
        provenance,
        epsilon,
        roles,
        root_size,
        images,
        edges: realizations,
        input_weighted: g.is_weighted(),
    })
}

/// Distortion observed over a set of input node pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QuasiIsometryStats {
    pub pairs_checked: usize,
    pub disconnected_pairs: usize,
    /// Pairs with `d_G3 < d_G`.
    pub lower_violations: usize,
    /// Pairs with `d_G3 > (eps + 1) d_G + eps`.
    pub upper_violations: usize,
    /// Largest `d_G3 - d_G`.
    pub max_additive: f64,
    /// Largest `d_G3 / d_G` over pairs with `d_G > 0`.
    pub max_multiplicative: f64,
    /// Smallest `(eps + 1) d_G + eps - d_G3`; negative means a violation.
    pub min_upper_slack: f64,
}

impl QuasiIsometryStats {
    pub fn violations(&self) -> usize {
        self.lower_violations + self.upper_violations
    }

    fn merge(mut self, other: Self) -> Self {
        self.pairs_checked += other.pairs_checked;
        self.disconnected_pairs += other.disconnected_pairs;
        self.lower_violations += other.lower_violations;
        self.upper_violations += other.upper_violations;
        self.max_additive = self.max_additive.max(other.max_additive);
        self.max_multiplicative = self.max_multiplicative.max(other.max_multiplicative);
        self.min_upper_slack = self.min_upper_slack.min(other.min_upper_slack);
        self
    }

    fn empty() -> Self {
        QuasiIsometryStats {
            max_multiplicative: 1.0,
            min_upper_slack: f64::INFINITY,
            ..Default::default()
        }
    }
}

/// Every unordered pair of input vertices that have an image, `u <= v`.
pub fn mapped_pairs(rg: &RegularizedGraph) -> Vec<(NodeIx, NodeIx)> {
    let mapped: Vec<NodeIx> =
        (0..rg.original_count()).filter(|&v| !rg.image(v).is_empty()).collect();
    let mut pairs = Vec::new();
    for (i, &u) in mapped.iter().enumerate() {
        for &v in &mapped[i..] {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Checks `d_G <= d_G3 <= (eps + 1) d_G + eps` on the given input pairs.
///
/// Distances in the regularized graph are measured between vertex images;
/// a star's image is its ring, so the distance is set-to-set.
pub fn verify_quasi_isometry(
    g: &Graph,
    rg: &RegularizedGraph,
    pairs: &[(NodeIx, NodeIx)],
) -> Result<QuasiIsometryStats, RegularizeError> {
    for &(u, v) in pairs {
        for x in [u, v] {
            g.check(x)?;
            if x >= rg.original_count() || rg.image(x).is_empty() {
                return Err(RegularizeError::Unmapped(g.id(x).to_string()));
            }
        }
    }
    let mut by_source: Vec<(NodeIx, Vec<NodeIx>)> = Vec::new();
    let mut sorted: Vec<(NodeIx, NodeIx)> = pairs.to_vec();
    sorted.sort_unstable();
    for (u, v) in sorted {
        match by_source.last_mut() {
            Some((s, targets)) if *s == u => targets.push(v),
            _ => by_source.push((u, vec![v])),
        }
    }

    let eps = rg.epsilon();
    const TOL: f64 = 1e-9;
    let stats = by_source
        .par_iter()
        .map_init(
            || (Explorer::new(g.node_count()), Explorer::new(rg.graph.node_count())),
            |(eg, e3), (source, targets)| {
                let dg = eg.distances(g, &[*source], PathMetric::WeightedShortestPath).to_vec();
                let d3 = e3.distances(&rg.graph, rg.image(*source), PathMetric::WeightedShortestPath);
                let mut stats = QuasiIsometryStats::empty();
                for &t in targets {
                    let dg_t = dg[t];
                    let d3_t = rg.image(t).iter().map(|&x| d3[x]).fold(f64::INFINITY, f64::min);
                    stats.pairs_checked += 1;
                    if dg_t.is_infinite() || d3_t.is_infinite() {
                        stats.disconnected_pairs += 1;
                        if dg_t.is_finite() != d3_t.is_finite() {
                            stats.upper_violations += 1;
                        }
                        continue;
                    }
                    let upper = (eps + 1.0) * dg_t + eps;
                    if d3_t < dg_t - TOL * dg_t.max(1.0) {
                        stats.lower_violations += 1;
                    }
                    if d3_t > upper + TOL * upper.max(1.0) {
                        stats.upper_violations += 1;
                    }
                    stats.max_additive = stats.max_additive.max(d3_t - dg_t);
                    if dg_t > 0.0 {
                        stats.max_multiplicative = stats.max_multiplicative.max(d3_t / dg_t);
                    }
                    stats.min_upper_slack = stats.min_upper_slack.min(upper - d3_t);
                }
                stats
            },
        )
        .reduce(QuasiIsometryStats::empty, QuasiIsometryStats::merge);
    Ok(stats)
}
