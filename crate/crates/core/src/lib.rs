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


//! Geometric priors for graph embeddings.
//!
//! A graph is regularized to uniform degree 3 ([`regularize`]), the growth
//! of neighborhoods around every original vertex is classified as
//! exponential, linear or sublinear ([`growth`]), and the signed score
//! decides between hyperbolic, Euclidean and spherical model spaces.
//! Discrete Ricci curvatures ([`curvature`]) and embedding distortion
//! statistics ([`distortion`]) are provided for cross-checks.

pub mod curvature;
pub mod distortion;
pub mod generators;
pub mod graph;
pub mod growth;
pub mod regularize;
pub mod transport;

pub use curvature::{curvature_report, CurvatureError, CurvatureReport, Measures};
pub use distortion::{d_avg, map_score, DistortionError, DistortionOptions, Embedding, ModelPoint, ModelSpace};
pub use generators::{generate, sample_average_score, Family, GeneratorError, GeneratorSpec};
pub use graph::{load_graph, Graph, GraphBuilder, GraphError, NodeId, NodeIx, PathMetric};
pub use growth::{three_regular_score, GrowthClass, GrowthError, Prior, Radius, ScoreConfig, ScoreReport, Scope};
pub use regularize::{regularize, RegularizeError, RegularizedGraph};
