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

//! Neighborhood growth classification and the 3-regular score.
//!
//! A root is either an input vertex, grown from its image in the regularized
//! graph (the whole ring for a star, whose root size is then its degree), or
//! a single auxiliary gadget node with root size one. The ball `N_R(root)` is
//! compared with two reference counts:
//!
//! ```text
//! exponential: |v| + sum_{r=1..R} base * 2^(r-1)
//! linear:      |v| + sum_{r=1..R} base * r
//! ```
//!
//! `base` is 3 in hop mode and the weighted degree of the center otherwise.
//! The score is `A = sum sigma(root) * |N_R(root)|` with sigma = -1, 0, +1
//! for exponential, linear, sublinear growth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Explorer, NodeIx, PathMetric};
use crate::regularize::{Provenance, RegularizedGraph};

#[derive(Debug, Error, PartialEq)]
pub enum GrowthError {
    #[error("hop radius must be an integer >= 3 (for R < 3 the exponential and linear growth laws coincide), got {0}")]
    RadiusTooSmall(f64),
    #[error("weighted radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("tolerance must be non-negative, got {0}")]
    InvalidTolerance(f64),
    #[error("node index {0} out of range")]
    UnknownNode(NodeIx),
    #[error("input vertex {0} has no image in the regularized graph")]
    Unmapped(NodeIx),
    #[error("regularized graph has no edges")]
    NoEdges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Exponential,
    Linear,
    Sublinear,
}

impl GrowthClass {
    /// Contribution sign in the 3-regular score.
    pub fn sigma(self) -> i64 {
        match self {
            GrowthClass::Exponential => -1,
            GrowthClass::Linear => 0,
            GrowthClass::Sublinear => 1,
        }
    }
}

/// Sign of curvature of the suggested model space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    Hyperbolic,
    Euclidean,
    Spherical,
}

impl Prior {
    pub fn sign(self) -> i8 {
        match self {
            Prior::Hyperbolic => -1,
            Prior::Euclidean => 0,
            Prior::Spherical => 1,
        }
    }
}

/// Analysis radius together with the metric it is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radius {
    /// Hop distance on the regularized graph; must be at least 3.
    Hops(u32),
    /// Weighted path distance on the regularized graph.
    Weighted(f64),
}

impl Radius {
    pub fn validate(self) -> Result<Self, GrowthError> {
        match self {
            Radius::Hops(r) if r < 3 => Err(GrowthError::RadiusTooSmall(r as f64)),
            Radius::Weighted(r) if !(r > 0.0 && r.is_finite()) => {
                Err(GrowthError::InvalidRadius(r))
            }
            other => Ok(other),
        }
    }

    /// Hop radius from a real value, rejecting non-integers and values below 3.
    pub fn hops_from(value: f64) -> Result<Self, GrowthError> {
        if value.fract() != 0.0 || value < 3.0 || value > u32::MAX as f64 {
            return Err(GrowthError::RadiusTooSmall(value));
        }
        Ok(Radius::Hops(value as u32))
    }

    pub fn value(self) -> f64 {
        match self {
            Radius::Hops(r) => r as f64,
            Radius::Weighted(r) => r,
        }
    }

    pub fn metric(self) -> PathMetric {
        match self {
            Radius::Hops(_) => PathMetric::Hops,
            Radius::Weighted(_) => PathMetric::WeightedShortestPath,
        }
    }

    /// Number of shells summed in the growth laws.
    pub fn shells(self) -> u32 {
        match self {
            Radius::Hops(r) => r,
            Radius::Weighted(r) => r.floor().min(u32::MAX as f64) as u32,
        }
    }
}

/// Which roots enter the score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// One root per input vertex that has an image.
    #[default]
    OriginalOnly,
    /// Input vertices plus every auxiliary node outside a star ring, so each
    /// node of the regularized graph belongs to exactly one root.
    AllG3Vertices,
}

/// `|v| + sum_{r=1..R} base * 2^(r-1)`.
pub fn gamma_ee(root_size: usize, radius: u32, base: f64) -> f64 {
    let shells: f64 = (1..=radius).map(|r| 2f64.powi(r as i32 - 1)).sum();
    root_size as f64 + base * shells
}

/// `|v| + sum_{r=1..R} base * r`.
pub fn gamma_le(root_size: usize, radius: u32, base: f64) -> f64 {
    let r = radius as f64;
    root_size as f64 + base * r * (r + 1.0) / 2.0
}

/// A center for growth classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Root {
    /// Input vertex, grown from its full image.
    Original(NodeIx),
    /// Single auxiliary node of the regularized graph.
    Auxiliary(NodeIx),
}

/// Classification of one root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootGrowth {
    pub root: Root,
    pub class: GrowthClass,
    pub ball_size: usize,
    pub root_size: usize,
}

impl Root {
    /// The root that owns node `x` of the regularized graph.
    pub fn of_g3_node(rg: &RegularizedGraph, x: NodeIx) -> Result<Root, GrowthError> {
        if x >= rg.graph.node_count() {
            return Err(GrowthError::UnknownNode(x));
        }
        Ok(match rg.provenance(x) {
            Provenance::Original(v) => Root::Original(v),
            Provenance::Auxiliary { origin, .. } if rg.is_ring_node(x) => Root::Original(origin),
            Provenance::Auxiliary { .. } => Root::Auxiliary(x),
        })
    }

    fn sources<'a>(&'a self, rg: &'a RegularizedGraph) -> &'a [NodeIx] {
        match self {
            Root::Original(v) => rg.image(*v),
            Root::Auxiliary(x) => std::slice::from_ref(x),
        }
    }

    fn root_size(&self, rg: &RegularizedGraph) -> usize {
        match self {
            Root::Original(v) => rg.root_size(*v),
            Root::Auxiliary(_) => 1,
        }
    }
}

/// Roots covered by `scope`, in deterministic order.
pub fn roots(rg: &RegularizedGraph, scope: Scope) -> Vec<Root> {
    let mut out: Vec<Root> = (0..rg.original_count())
        .filter(|&v| !rg.image(v).is_empty())
        .map(Root::Original)
        .collect();
    if scope == Scope::AllG3Vertices {
        out.extend(
            (0..rg.graph.node_count())
                .filter(|&x| matches!(rg.provenance(x), Provenance::Auxiliary { .. }))
                .filter(|&x| !rg.is_ring_node(x))
                .map(Root::Auxiliary),
        );
    }
    out
}

fn center_base(rg: &RegularizedGraph, sources: &[NodeIx], radius: Radius) -> f64 {
    match radius {
        Radius::Hops(_) => 3.0,
        Radius::Weighted(_) => {
            let total: f64 = sources.iter().map(|&x| rg.graph.weighted_degree(x)).sum();
            total / sources.len() as f64
        }
    }
}

fn classify_with(
    rg: &RegularizedGraph,
    root: Root,
    radius: Radius,
    explorer: &mut Explorer,
) -> RootGrowth {
    let sources = root.sources(rg);
    let root_size = root.root_size(rg);
    let ball_size = explorer.ball(&rg.graph, sources, radius.value(), radius.metric()).len();
    let base = center_base(rg, sources, radius);
    let n = ball_size as f64;
    let class = if n >= gamma_ee(root_size, radius.shells(), base) {
        GrowthClass::Exponential
    } else if n >= gamma_le(root_size, radius.shells(), base) {
        GrowthClass::Linear
    } else {
        GrowthClass::Sublinear
    };
    RootGrowth { root, class, ball_size, root_size }
}

/// Classifies a single root.
pub fn classify_root(
    rg: &RegularizedGraph,
    root: Root,
    radius: Radius,
) -> Result<RootGrowth, GrowthError> {
    let radius = radius.validate()?;
    match root {
        Root::Original(v) if v >= rg.original_count() => return Err(GrowthError::UnknownNode(v)),
        Root::Original(v) if rg.image(v).is_empty() => return Err(GrowthError::Unmapped(v)),
        Root::Auxiliary(x) if x >= rg.graph.node_count() => {
            return Err(GrowthError::UnknownNode(x))
        }
        _ => {}
    }
    let mut explorer = Explorer::new(rg.graph.node_count());
    Ok(classify_with(rg, root, radius, &mut explorer))
}

/// Classifies the root owning node `x` of the regularized graph.
pub fn classify_growth(
    rg: &RegularizedGraph,
    x: NodeIx,
    radius: Radius,
) -> Result<RootGrowth, GrowthError> {
    classify_root(rg, Root::of_g3_node(rg, x)?, radius)
}

/// Thresholded sign: spherical above `tau`, hyperbolic below `-tau`.
pub fn decide_prior(a_normalized: f64, tau: f64) -> Prior {
    if a_normalized > tau {
        Prior::Spherical
    } else if a_normalized < -tau {
        Prior::Hyperbolic
    } else {
        Prior::Euclidean
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreConfig {
    pub radius: Radius,
    pub tau: f64,
    pub scope: Scope,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig { radius: Radius::Hops(3), tau: 0.1, scope: Scope::OriginalOnly }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassHistogram {
    pub exponential: usize,
    pub linear: usize,
    pub sublinear: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub config: ScoreConfig,
    pub a_raw: i64,
    pub a_normalized: f64,
    pub prior: Prior,
    pub histogram: ClassHistogram,
    pub g3_edges: usize,
    /// Mean edge weight used in the normalization (1 in hop mode).
    pub mean_edge_weight: f64,
    pub per_root: Vec<RootGrowth>,
}

/// `A_raw = sum over roots of sigma * |N_R|`, accumulated in root order.
pub fn score_of(per_root: &[RootGrowth]) -> i64 {
    per_root.iter().map(|r| r.class.sigma() * r.ball_size as i64).sum()
}

/// Classifies every root in scope and aggregates the 3-regular score.
///
/// Classification runs in parallel; the reduction is over a fixed root
/// order, so the result does not depend on the thread count.
pub fn three_regular_score(
    rg: &RegularizedGraph,
    config: ScoreConfig,
) -> Result<ScoreReport, GrowthError> {
    let radius = config.radius.validate()?;
    if config.tau.is_nan() || config.tau < 0.0 {
        return Err(GrowthError::InvalidTolerance(config.tau));
    }
    let g3_edges = rg.graph.edge_count();
    if g3_edges == 0 {
        return Err(GrowthError::NoEdges);
    }
    let mean_edge_weight = match radius {
        Radius::Hops(_) => 1.0,
        Radius::Weighted(_) => rg.graph.mean_edge_weight().unwrap_or(1.0),
    };

    let roots = roots(rg, config.scope);
    let n3 = rg.graph.node_count();
    let per_root: Vec<RootGrowth> = roots
        .par_iter()
        .map_init(|| Explorer::new(n3), |ex, &root| classify_with(rg, root, radius, ex))
        .collect();

    let mut histogram = ClassHistogram::default();
    for r in &per_root {
        match r.class {
            GrowthClass::Exponential => histogram.exponential += 1,
            GrowthClass::Linear => histogram.linear += 1,
            GrowthClass::Sublinear => histogram.sublinear += 1,
        }
    }
    let a_raw = score_of(&per_root);
    let a_normalized = a_raw as f64 / (g3_edges as f64 * mean_edge_weight);
    Ok(ScoreReport {
        config: ScoreConfig { radius, ..config },
        a_raw,
        a_normalized,
        prior: decide_prior(a_normalized, config.tau),
        histogram,
        g3_edges,
        mean_edge_weight,
        per_root,
    })
}
