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

//! Forman- and Ollivier-Ricci curvature on the unweighted view of a graph.
//!
//! Ollivier curvature uses non-lazy uniform measures on the neighbors of each
//! endpoint and hop distances as ground cost. Masses are scaled by
//! `lcm(deg u, deg v)` so the transport problem is integral and its optimum
//! exact.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeIx};
use crate::transport::{min_cost_transport, TransportError};

#[derive(Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("{0} -- {1} is not an edge")]
    NotAnEdge(String, String),
    #[error("node {0} is isolated")]
    IsolatedNode(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

fn require_edge(g: &Graph, u: NodeIx, v: NodeIx) -> Result<(), CurvatureError> {
    g.check(u)?;
    g.check(v)?;
    if g.has_edge(u, v) {
        Ok(())
    } else {
        Err(CurvatureError::NotAnEdge(g.id(u).to_string(), g.id(v).to_string()))
    }
}

fn require_degree(g: &Graph, v: NodeIx) -> Result<usize, CurvatureError> {
    g.check(v)?;
    match g.degree(v) {
        0 => Err(CurvatureError::IsolatedNode(g.id(v).to_string())),
        d => Ok(d),
    }
}

/// `4 - deg(u) - deg(v)`.
pub fn forman_edge(g: &Graph, u: NodeIx, v: NodeIx) -> Result<f64, CurvatureError> {
    require_edge(g, u, v)?;
    Ok(4.0 - g.degree(u) as f64 - g.degree(v) as f64)
}

/// Mean Forman curvature of the edges at `v`.
pub fn forman_node(g: &Graph, v: NodeIx) -> Result<f64, CurvatureError> {
    let d = require_degree(g, v)?;
    let sum: f64 = g.neighbors(v).iter().map(|&(u, _)| 4.0 - d as f64 - g.degree(u) as f64).sum();
    Ok(sum / d as f64)
}

/// `4 - deg(v) - sum_u deg(u) / deg(v)`, algebraically equal to [`forman_node`].
pub fn forman_node_closed_form(g: &Graph, v: NodeIx) -> Result<f64, CurvatureError> {
    let d = require_degree(g, v)? as f64;
    let sum: f64 = g.neighbors(v).iter().map(|&(u, _)| g.degree(u) as f64).sum();
    Ok(4.0 - d - sum / d)
}

/// Optimal transport cost between the neighbor measures of an edge, as the
/// exact fraction `cost / scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborTransport {
    pub cost: u64,
    pub scale: u64,
}

impl NeighborTransport {
    pub fn w1(&self) -> f64 {
        self.cost as f64 / self.scale as f64
    }

    /// `1 - W1`; exactly zero when `cost == scale`.
    pub fn curvature(&self) -> f64 {
        (self.scale as i64 - self.cost as i64) as f64 / self.scale as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Hop distances from `x`, explored to depth `limit`; longer distances are
/// reported as `limit + 1`.
fn bounded_hops(g: &Graph, x: NodeIx, limit: u64, targets: &[NodeIx]) -> Vec<u64> {
    let mut frontier = vec![x];
    let mut seen = std::collections::HashMap::new();
    seen.insert(x, 0u64);
    for depth in 1..=limit {
        let mut next = Vec::new();
        for &y in &frontier {
            for &(z, _) in g.neighbors(y) {
                seen.entry(z).or_insert_with(|| {
                    next.push(z);
                    depth
                });
            }
        }
        frontier = next;
    }
    targets.iter().map(|t| seen.get(t).copied().unwrap_or(limit + 1)).collect()
}

/// Exact W1 between the uniform measures on the neighbors of `u` and of `v`.
pub fn neighbor_transport(
    g: &Graph,
    u: NodeIx,
    v: NodeIx,
) -> Result<NeighborTransport, CurvatureError> {
    require_edge(g, u, v)?;
    let (du, dv) = (g.degree(u) as u64, g.degree(v) as u64);
    let scale = du / gcd(du, dv) * dv;
    let sources: Vec<NodeIx> = g.neighbors(u).iter().map(|&(x, _)| x).collect();
    let sinks: Vec<NodeIx> = g.neighbors(v).iter().map(|&(y, _)| y).collect();
    // Neighbors of adjacent vertices are at most three hops apart.
    let cost: Vec<Vec<u64>> = sources.iter().map(|&x| bounded_hops(g, x, 3, &sinks)).collect();
    let supply = vec![scale / du; sources.len()];
    let demand = vec![scale / dv; sinks.len()];
    let cost = min_cost_transport(&supply, &demand, &cost)?;
    Ok(NeighborTransport { cost, scale })
}

/// `1 - W1(m_u, m_v)`.
pub fn ollivier_edge(g: &Graph, u: NodeIx, v: NodeIx) -> Result<f64, CurvatureError> {
    Ok(neighbor_transport(g, u, v)?.curvature())
}

/// Mean Ollivier curvature of the edges at `v`.
pub fn ollivier_node(g: &Graph, v: NodeIx) -> Result<f64, CurvatureError> {
    let d = require_degree(g, v)?;
    let mut sum = 0.0;
    for &(u, _) in g.neighbors(v) {
        sum += ollivier_edge(g, v, u)?;
    }
    Ok(sum / d as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JostLiuBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Lower bound `-2 (1 - 1/deg u - 1/deg v)_+`, upper bound
/// `#common neighbors / max(deg u, deg v)`.
pub fn jost_liu_bounds(g: &Graph, u: NodeIx, v: NodeIx) -> Result<JostLiuBounds, CurvatureError> {
    require_edge(g, u, v)?;
    let (du, dv) = (g.degree(u) as i64, g.degree(v) as i64);
    // One rounding from exact integers, so a tight bound compares equal to
    // the curvature value of the same rational.
    let excess = (du * dv - du - dv).max(0);
    let lower = if excess == 0 { 0.0 } else { (-2 * excess) as f64 / (du * dv) as f64 };
    let common = g.neighbors(u).iter().filter(|&&(x, _)| g.has_edge(x, v)).count();
    Ok(JostLiuBounds { lower, upper: common as f64 / du.max(dv) as f64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measures {
    pub forman: bool,
    pub ollivier: bool,
}

impl Default for Measures {
    fn default() -> Self {
        Measures { forman: true, ollivier: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeCurvature {
    pub u: NodeIx,
    pub v: NodeIx,
    pub forman: Option<f64>,
    pub ollivier: Option<f64>,
    pub bounds: JostLiuBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeCurvature {
    pub v: NodeIx,
    pub forman: Option<f64>,
    pub ollivier: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    fn of(values: impl Iterator<Item = f64>) -> Option<Summary> {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for x in values {
            min = min.min(x);
            max = max.max(x);
            sum += x;
            n += 1;
        }
        (n > 0).then(|| Summary { min, mean: sum / n as f64, max })
    }
}

/// Per-edge and per-node curvature tables. Edges are in index order
/// (`u < v`); isolated nodes are omitted from the node table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub measures: Measures,
    pub edges: Vec<EdgeCurvature>,
    pub nodes: Vec<NodeCurvature>,
}

impl CurvatureReport {
    pub fn edge_forman_summary(&self) -> Option<Summary> {
        Summary::of(self.edges.iter().filter_map(|e| e.forman))
    }

    pub fn edge_ollivier_summary(&self) -> Option<Summary> {
        Summary::of(self.edges.iter().filter_map(|e| e.ollivier))
    }

    pub fn node_forman_summary(&self) -> Option<Summary> {
        Summary::of(self.nodes.iter().filter_map(|n| n.forman))
    }

    pub fn node_ollivier_summary(&self) -> Option<Summary> {
        Summary::of(self.nodes.iter().filter_map(|n| n.ollivier))
    }
}

/// Computes the requested measures for every edge in parallel, then averages
/// them per node in canonical neighbor order.
pub fn curvature_report(g: &Graph, measures: Measures) -> Result<CurvatureReport, CurvatureError> {
    let edge_list: Vec<(NodeIx, NodeIx)> = g.edges().map(|(u, v, _)| (u, v)).collect();
    let edges: Vec<EdgeCurvature> = edge_list
        .par_iter()
        .map(|&(u, v)| -> Result<EdgeCurvature, CurvatureError> {
            Ok(EdgeCurvature {
                u,
                v,
                forman: if measures.forman { Some(forman_edge(g, u, v)?) } else { None },
                ollivier: if measures.ollivier { Some(ollivier_edge(g, u, v)?) } else { None },
                bounds: jost_liu_bounds(g, u, v)?,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut slot = std::collections::HashMap::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        slot.insert((e.u, e.v), i);
    }
    let edge_at = |a: NodeIx, b: NodeIx| &edges[slot[&(a.min(b), a.max(b))]];
    let nodes = (0..g.node_count())
        .filter(|&v| g.degree(v) > 0)
        .map(|v| {
            let d = g.degree(v) as f64;
            let mean = |f: &dyn Fn(&EdgeCurvature) -> Option<f64>| -> Option<f64> {
                let mut sum = 0.0;
                for &(u, _) in g.neighbors(v) {
                    sum += f(edge_at(v, u))?;
                }
                Some(sum / d)
            };
            NodeCurvature { v, forman: mean(&|e| e.forman), ollivier: mean(&|e| e.ollivier) }
        })
        .collect();
    Ok(CurvatureReport { measures, edges, nodes })
}
