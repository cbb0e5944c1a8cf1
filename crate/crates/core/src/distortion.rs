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

//! Model-space distances and embedding distortion statistics.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Explorer, Graph, GraphError, NodeId, NodeIx, PathMetric};

/// Tolerance on the manifold constraint of a point.
pub const MANIFOLD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DistortionError {
    #[error("points live in different spaces ({0} vs {1})")]
    SpaceMismatch(ModelSpace, ModelSpace),
    #[error("coordinate vectors have lengths {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("{space} point needs at least {min} coordinates, got {got}")]
    TooFewCoordinates { space: ModelSpace, min: usize, got: usize },
    #[error("{space} point violates its constraint (residual {residual:e})")]
    Constraint { space: ModelSpace, residual: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("curvature magnitude must be positive and finite, got {0}")]
    InvalidCurvature(f64),
    #[error("embedding has no point for node {0}")]
    MissingNode(String),
    #[error("node {0} appears twice in the embedding")]
    DuplicateNode(String),
    #[error("nodes {0} and {1} are disconnected")]
    Disconnected(String, String),
    #[error("node {0} has no neighbors")]
    IsolatedNode(String),
    #[error("embedding line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpace {
    Euclidean,
    Spherical,
    Hyperboloid,
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelSpace::Euclidean => "euclidean",
            ModelSpace::Spherical => "spherical",
            ModelSpace::Hyperboloid => "hyperboloid",
        })
    }
}

impl FromStr for ModelSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" => Ok(ModelSpace::Euclidean),
            "spherical" => Ok(ModelSpace::Spherical),
            "hyperboloid" => Ok(ModelSpace::Hyperboloid),
            other => Err(format!("unknown space {other:?}")),
        }
    }
}

/// A validated point. Spherical points are unit vectors in `R^{d+1}`;
/// hyperboloid points satisfy `-x0^2 + sum x_i^2 = -1` with `x0 > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelPoint {
    space: ModelSpace,
    coords: Vec<f64>,
}

fn minkowski(p: &[f64], q: &[f64]) -> f64 {
    -p[0] * q[0] + p[1..].iter().zip(&q[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn dot(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

impl ModelPoint {
    pub fn new(space: ModelSpace, coords: Vec<f64>) -> Result<Self, DistortionError> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(DistortionError::NonFinite);
        }
        let min = if space == ModelSpace::Euclidean { 1 } else { 2 };
        if coords.len() < min {
            return Err(DistortionError::TooFewCoordinates { space, min, got: coords.len() });
        }
        let residual = match space {
            ModelSpace::Euclidean => 0.0,
            ModelSpace::Spherical => (dot(&coords, &coords) - 1.0).abs(),
            ModelSpace::Hyperboloid if coords[0] <= 0.0 => f64::INFINITY,
            ModelSpace::Hyperboloid => (minkowski(&coords, &coords) + 1.0).abs(),
        };
        if residual > MANIFOLD_TOLERANCE {
            return Err(DistortionError::Constraint { space, residual });
        }
        Ok(ModelPoint { space, coords })
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Intrinsic dimension `d`.
    pub fn dimension(&self) -> usize {
        match self.space {
            ModelSpace::Euclidean => self.coords.len(),
            _ => self.coords.len() - 1,
        }
    }
}

/// Geodesic distance at unit curvature magnitude.
pub fn model_distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64, DistortionError> {
    if p.space != q.space {
        return Err(DistortionError::SpaceMismatch(p.space, q.space));
    }
    if p.coords.len() != q.coords.len() {
        return Err(DistortionError::DimensionMismatch(p.coords.len(), q.coords.len()));
    }
    Ok(unchecked_distance(p.space, &p.coords, &q.coords))
}

/// Geodesic distance in the space of curvature magnitude `kappa`, i.e. the
/// unit-curvature distance times `1 / sqrt(kappa)`.
pub fn model_distance_scaled(p: &ModelPoint, q: &ModelPoint, kappa: f64) -> Result<f64, DistortionError> {
    let scale = curvature_scale(kappa)?;
    Ok(model_distance(p, q)? * scale)
}

fn curvature_scale(kappa: f64) -> Result<f64, DistortionError> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(1.0 / kappa.sqrt())
    } else {
        Err(DistortionError::InvalidCurvature(kappa))
    }
}

fn unchecked_distance(space: ModelSpace, p: &[f64], q: &[f64]) -> f64 {
    match space {
        ModelSpace::Euclidean => p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
        ModelSpace::Spherical => dot(p, q).clamp(-1.0, 1.0).acos(),
        ModelSpace::Hyperboloid => (-minkowski(p, q)).max(1.0).acosh(),
    }
}

/// Assignment of model points to node ids; all points share one space and
/// coordinate length.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    space: ModelSpace,
    points: HashMap<NodeId, ModelPoint>,
}

impl Embedding {
    pub fn new(space: ModelSpace) -> Self {
        Embedding { space, points: HashMap::new() }
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn insert(&mut self, node: impl Into<NodeId>, point: ModelPoint) -> Result<(), DistortionError> {
        if point.space != self.space {
            return Err(DistortionError::SpaceMismatch(self.space, point.space));
        }
        if let Some(existing) = self.points.values().next() {
            if existing.coords.len() != point.coords.len() {
                return Err(DistortionError::DimensionMismatch(existing.coords.len(), point.coords.len()));
            }
        }
        let node = node.into();
        if self.points.contains_key(&node) {
            return Err(DistortionError::DuplicateNode(node.to_string()));
        }
        self.points.insert(node, point);
        Ok(())
    }

    pub fn get(&self, node: &str) -> Option<&ModelPoint> {
        self.points.get(&NodeId::new(node))
    }

    /// Points in graph index order. Extra embedded nodes are ignored.
    pub fn aligned<'a>(&'a self, g: &Graph) -> Result<Vec<&'a ModelPoint>, DistortionError> {
        g.ids()
            .iter()
            .map(|id| self.points.get(id).ok_or_else(|| DistortionError::MissingNode(id.to_string())))
            .collect()
    }
}

/// Parses `node,space,c0,c1,...` CSV. The header row is required.
pub fn parse_embedding(source: &str) -> Result<Embedding, DistortionError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source.as_bytes());
    let header_error = |message: String| DistortionError::Parse { line: 1, message };
    let headers = reader.headers().map_err(|e| header_error(e.to_string()))?.clone();
    if headers.len() < 3 || &headers[0] != "node" || &headers[1] != "space" {
        return Err(header_error("header must be node,space,c0,c1,...".into()));
    }
    for (i, h) in headers.iter().skip(2).enumerate() {
        if h != format!("c{i}") {
            return Err(header_error(format!("expected column c{i}, found {h:?}")));
        }
    }
    let width = headers.len();
    let mut embedding: Option<Embedding> = None;
    for record in reader.records() {
        let record = record.map_err(|e| DistortionError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fail = |message: String| DistortionError::Parse { line, message };
        if record.len() != width {
            return Err(fail(format!("expected {width} fields, found {}", record.len())));
        }
        let space: ModelSpace = record[1].parse().map_err(fail)?;
        let coords = record
            .iter()
            .skip(2)
            .map(|c| c.parse::<f64>().map_err(|_| fail(format!("bad coordinate {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let point = ModelPoint::new(space, coords)?;
        let e = embedding.get_or_insert_with(|| Embedding::new(space));
        e.insert(&record[0], point)?;
    }
    embedding.ok_or_else(|| DistortionError::Parse { line: 2, message: "no points".into() })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by the number of unordered pairs.
    #[default]
    PairAverage,
    /// Plain sum over unordered pairs.
    BareSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionOptions {
    pub normalization: Normalization,
    /// Curvature magnitude of the model space; model distances are scaled by
    /// `1 / sqrt(kappa)`.
    pub kappa: f64,
}

impl Default for DistortionOptions {
    fn default() -> Self {
        DistortionOptions { normalization: Normalization::PairAverage, kappa: 1.0 }
    }
}

fn graph_metric(g: &Graph) -> PathMetric {
    if g.is_weighted() {
        PathMetric::WeightedShortestPath
    } else {
        PathMetric::Hops
    }
}

/// `sum_{i<j} |(d_M / d_G)^2 - 1|`, averaged over pairs by default.
pub fn d_avg(g: &Graph, e: &Embedding, options: DistortionOptions) -> Result<f64, DistortionError> {
    let points = e.aligned(g)?;
    let scale = curvature_scale(options.kappa)?;
    let n = g.node_count();
    let metric = graph_metric(g);
    let per_source: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || Explorer::new(n),
            |ex, i| -> Result<f64, DistortionError> {
                let dist = ex.distances(g, &[i], metric);
                let mut sum = 0.0;
                for j in i + 1..n {
                    if !dist[j].is_finite() {
                        return Err(DistortionError::Disconnected(g.id(i).to_string(), g.id(j).to_string()));
                    }
                    let dm = unchecked_distance(e.space, &points[i].coords, &points[j].coords) * scale;
                    sum += ((dm / dist[j]).powi(2) - 1.0).abs();
                }
                Ok(sum)
            },
        )
        .collect::<Result<_, _>>()?;
    let total: f64 = per_source.iter().sum();
    let pairs = n * n.saturating_sub(1) / 2;
    Ok(match options.normalization {
        Normalization::BareSum => total,
        Normalization::PairAverage if pairs == 0 => 0.0,
        Normalization::PairAverage => total / pairs as f64,
    })
}

/// Average precision of `u`: other nodes are ranked by model distance, ties
/// broken by node index; the i-th closest neighbor at rank `r_i` contributes
/// `i / r_i`.
fn average_precision(g: &Graph, points: &[&ModelPoint], space: ModelSpace, u: NodeIx) -> f64 {
    let mut order: Vec<(f64, NodeIx)> = (0..g.node_count())
        .filter(|&v| v != u)
        .map(|v| (unchecked_distance(space, &points[u].coords, &points[v].coords), v))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let deg = g.degree(u);
    let mut found = 0usize;
    let mut ap = 0.0;
    for (rank, &(_, v)) in order.iter().enumerate() {
        if g.has_edge(u, v) {
            found += 1;
            ap += found as f64 / (rank + 1) as f64;
            if found == deg {
                break;
            }
        }
    }
    ap / deg as f64
}

/// Mean average precision of the embedding's neighbor ranking.
pub fn map_score(g: &Graph, e: &Embedding) -> Result<f64, DistortionError> {
    let points = e.aligned(g)?;
    if let Some(v) = (0..g.node_count()).find(|&v| g.degree(v) == 0) {
        return Err(DistortionError::IsolatedNode(g.id(v).to_string()));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(0.0);
    }
    let per_node: Vec<f64> =
        (0..n).into_par_iter().map(|u| average_precision(g, &points, e.space, u)).collect();
    Ok(per_node.iter().sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pt(space: ModelSpace, c: &[f64]) -> ModelPoint {
        ModelPoint::new(space, c.to_vec()).unwrap()
    }

    fn line_embedding(xs: &[f64]) -> Embedding {
        let mut e = Embedding::new(ModelSpace::Euclidean);
        for (i, &x) in xs.iter().enumerate() {
            e.insert(i.to_string(), pt(ModelSpace::Euclidean, &[x])).unwrap();
        }
        e
    }

    #[test]
    fn distance_examples() {
        let s = ModelSpace::Spherical;
        let d = model_distance(&pt(s, &[1.0, 0.0, 0.0]), &pt(s, &[0.0, 1.0, 0.0])).unwrap();
        assert!((d - FRAC_PI_2).abs() < 1e-15);
        let h = ModelSpace::Hyperboloid;
        assert_eq!(model_distance(&pt(h, &[1.0, 0.0]), &pt(h, &[1.0, 0.0])).unwrap(), 0.0);
        let q = pt(h, &[1f64.cosh(), 1f64.sinh()]);
        assert!((model_distance(&pt(h, &[1.0, 0.0]), &q).unwrap() - 1.0).abs() < 1e-12);
        let e = ModelSpace::Euclidean;
        assert_eq!(model_distance(&pt(e, &[0.0, 0.0]), &pt(e, &[3.0, 4.0])).unwrap(), 5.0);
        let scaled = model_distance_scaled(&pt(e, &[0.0]), &pt(e, &[2.0]), 4.0).unwrap();
        assert_eq!(scaled, 1.0);
    }

    #[test]
    fn constraint_checks() {
        assert!(matches!(
            ModelPoint::new(ModelSpace::Spherical, vec![1.0, 1e-4]),
            Err(DistortionError::Constraint { .. })
        ));
        assert!(ModelPoint::new(ModelSpace::Spherical, vec![1.0 + 1e-12, 0.0]).is_ok());
        assert!(matches!(
            ModelPoint::new(ModelSpace::Hyperboloid, vec![-1.0, 0.0]),
            Err(DistortionError::Constraint { .. })
        ));
        assert!(matches!(
            model_distance(&pt(ModelSpace::Euclidean, &[0.0]), &pt(ModelSpace::Euclidean, &[0.0, 1.0])),
            Err(DistortionError::DimensionMismatch(1, 2))
        ));
        assert!(matches!(
            model_distance(&pt(ModelSpace::Euclidean, &[0.0, 1.0]), &pt(ModelSpace::Spherical, &[0.0, 1.0])),
            Err(DistortionError::SpaceMismatch(..))
        ));
    }

    #[test]
    fn antipodal_spherical_is_pi() {
        let s = ModelSpace::Spherical;
        let d = model_distance(&pt(s, &[1.0, 0.0]), &pt(s, &[-1.0, 0.0])).unwrap();
        assert_eq!(d, PI);
    }

    #[test]
    fn isometric_path() {
        let g = Graph::from_index_edges(3, [(0, 1), (1, 2)]).unwrap();
        let e = line_embedding(&[0.0, 1.0, 2.0]);
        assert_eq!(d_avg(&g, &e, DistortionOptions::default()).unwrap(), 0.0);
        assert_eq!(map_score(&g, &e).unwrap(), 1.0);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_index_edges(2, [(0, 1)]).unwrap();
        let e = line_embedding(&[0.0, 2.0]);
        assert_eq!(d_avg(&g, &e, DistortionOptions::default()).unwrap(), 3.0);
        assert_eq!(map_score(&g, &e).unwrap(), 1.0);
    }

    #[test]
    fn bare_sum_counts_pairs() {
        let g = Graph::from_index_edges(3, [(0, 1), (1, 2)]).unwrap();
        let e = line_embedding(&[0.0, 2.0, 4.0]);
        let opts = DistortionOptions { normalization: Normalization::BareSum, ..Default::default() };
        // Each of the three pairs has ratio 2.
        assert_eq!(d_avg(&g, &e, opts).unwrap(), 9.0);
        assert_eq!(d_avg(&g, &e, DistortionOptions::default()).unwrap(), 3.0);
    }

    #[test]
    fn star_with_center_far_away() {
        let g = Graph::from_index_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let e = line_embedding(&[10.0, 0.0, 0.1, 0.2]);
        // Center: all others are neighbors, AP 1. Each leaf ranks the
        // center third, AP 1/3.
        assert!((map_score(&g, &e).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let g = Graph::from_index_edges(3, [(0, 1)]).unwrap();
        let e = line_embedding(&[0.0, 1.0, 2.0]);
        assert!(matches!(map_score(&g, &e), Err(DistortionError::IsolatedNode(_))));
        assert!(matches!(d_avg(&g, &e, DistortionOptions::default()), Err(DistortionError::Disconnected(..))));
        let short = line_embedding(&[0.0, 1.0]);
        let path = Graph::from_index_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(map_score(&path, &short), Err(DistortionError::MissingNode(id)) if id == "2"));
        let mut dup = line_embedding(&[0.0]);
        assert!(dup.insert("0", pt(ModelSpace::Euclidean, &[1.0])).is_err());
    }

    #[test]
    fn csv_round() {
        let text = "node,space,c0,c1,c2\na,spherical,1,0,0\nb,spherical,0,1,0\n";
        let e = parse_embedding(text).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.get("b").unwrap().dimension(), 2);
        assert!(matches!(parse_embedding("n,s,c0\n"), Err(DistortionError::Parse { line: 1, .. })));
        let mixed = "node,space,c0,c1\na,euclidean,1,0\nb,spherical,0,1\n";
        assert!(matches!(parse_embedding(mixed), Err(DistortionError::SpaceMismatch(..))));
        let bad = "node,space,c0,c1\na,euclidean,1,x\n";
        assert!(matches!(parse_embedding(bad), Err(DistortionError::Parse { line: 2, .. })));
    }
}
