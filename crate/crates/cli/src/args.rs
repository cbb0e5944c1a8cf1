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


//! Command-line arguments. Every flag can also be set through a
//! `GEOPRIOR_*` environment variable; explicit flags win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "geoprior", version, about = "Choose a curvature prior for embedding a graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regularize, classify neighborhood growth and report the 3-regular score.
    Analyze(AnalyzeArgs),
    /// Write a synthetic graph as an edge list.
    Generate(GenerateArgs),
    /// Write the 3-regular graph and its provenance map.
    Regularize(RegularizeArgs),
    /// Forman and Ollivier curvature tables.
    Curvature(CurvatureArgs),
    /// D_avg and MAP of an embedding.
    Distortion(DistortionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Edgelist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    /// One root per input vertex.
    Original,
    /// Input vertices plus every non-ring auxiliary node.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Forman,
    Ollivier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    PairAverage,
    BareSum,
}

#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    /// Edge list: `u v` or `u v w` per line.
    #[arg(long, short, env = "GEOPRIOR_INPUT", conflicts_with = "generator")]
    pub input: Option<PathBuf>,
    /// Synthetic input, e.g. `cycle:1000`, `lattice:32`, `btree:3:6`,
    /// `er:1000:0.01`, `er-2:1000`, `ws:1000:4:0.1`, `ba:1000:2`, or a JSON
    /// generator spec.
    #[arg(long, short, env = "GEOPRIOR_GENERATOR")]
    pub generator: Option<String>,
    /// Optional node list adding isolated nodes.
    #[arg(long, env = "GEOPRIOR_NODES", requires = "input")]
    pub nodes: Option<PathBuf>,
    /// Read the third edge-list column as a weight.
    #[arg(long, env = "GEOPRIOR_WEIGHTED")]
    pub weighted: bool,
    /// Generator seed.
    #[arg(long, env = "GEOPRIOR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Report destination; standard output when absent.
    #[arg(long, short, env = "GEOPRIOR_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Report format.
    #[arg(long, short, env = "GEOPRIOR_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 0 uses every core.
    #[arg(long, short = 'j', env = "GEOPRIOR_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Analysis radius: an integer >= 3 in hop mode, a positive distance
    /// with --weighted.
    #[arg(long, short, env = "GEOPRIOR_RADIUS", default_value_t = 3.0)]
    pub radius: f64,
    /// Decision tolerance on the normalized score.
    #[arg(long, env = "GEOPRIOR_TAU", default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, env = "GEOPRIOR_SCOPE", value_enum, default_value_t = ScopeArg::Original)]
    pub scope: ScopeArg,
    /// Average over this many generated graphs with seeds seed, seed+1, ...
    #[arg(long, env = "GEOPRIOR_TRIALS", default_value_t = 1)]
    pub trials: usize,
    /// Write the per-root classification table as CSV.
    #[arg(long, env = "GEOPRIOR_PER_VERTEX")]
    pub per_vertex: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct RegularizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Write the provenance map as JSON.
    #[arg(long, env = "GEOPRIOR_PROVENANCE")]
    pub provenance: Option<PathBuf>,
    /// Check the distance distortion on every pair of input vertices.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Clone, Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, env = "GEOPRIOR_MEASURES", value_enum, value_delimiter = ',', default_values_t = [MeasureArg::Forman, MeasureArg::Ollivier])]
    pub measures: Vec<MeasureArg>,
    /// Write the per-node table as CSV.
    #[arg(long, env = "GEOPRIOR_NODE_OUTPUT")]
    pub node_output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Embedding CSV with header `node,space,c0,c1,...`.
    #[arg(long, short, env = "GEOPRIOR_EMBEDDING")]
    pub embedding: PathBuf,
    #[arg(long, env = "GEOPRIOR_NORMALIZATION", value_enum, default_value_t = NormalizationArg::PairAverage)]
    pub normalization: NormalizationArg,
    /// Curvature magnitude of the model space.
    #[arg(long, env = "GEOPRIOR_KAPPA", default_value_t = 1.0)]
    pub kappa: f64,
}
