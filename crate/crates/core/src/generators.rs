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

//! Seeded synthetic graph families.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is portable
//! and stable across platforms. Node ids are `"0".."n-1"`. Streaming rules:
//!
//! * Erdős–Rényi draws one `f64` per pair `(i, j)`, `i < j`, in
//!   lexicographic order; the edge exists when the draw is `< p`.
//! * Watts–Strogatz visits ring edges `(i, i + j)` for `j = 1..=k/2` (outer)
//!   and `i = 0..n` (inner). Each draws one `f64`; when it is `< beta` the
//!   far endpoint is resampled uniformly until it is neither `i` nor an
//!   existing neighbor. Nodes already adjacent to every other node are
//!   skipped without a target draw.
//! * Barabási–Albert seeds a clique on nodes `0..=m`. Node `t` draws
//!   uniformly from the endpoint list of all current edges until it has `m`
//!   distinct targets, then its edges are appended to the list.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeIx};
use crate::growth::{three_regular_score, GrowthError, ScoreConfig};
use crate::regularize::{regularize, RegularizeError};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParameter(String),
    #[error("cannot parse generator spec {spec:?}: {message}")]
    Parse { spec: String, message: String },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Regularize(#[from] RegularizeError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
}

/// Connectivity-regime presets for Erdős–Rényi graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErPreset {
    /// `0.5 ln N / N`: below the connectivity threshold.
    Er1,
    /// `1.5 ln N / N`: above the connectivity threshold.
    Er2,
    /// `1.5 / N`: above the giant-component threshold.
    Er3,
    /// `0.5 / N`: below the giant-component threshold.
    Er4,
}

impl ErPreset {
    pub fn probability(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            ErPreset::Er1 => 0.5 * n.ln() / n,
            ErPreset::Er2 => 1.5 * n.ln() / n,
            ErPreset::Er3 => 1.5 / n,
            ErPreset::Er4 => 0.5 / n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Cycle { n: usize },
    Lattice { side: usize },
    BTree { b: usize, depth: usize },
    ErdosRenyi { n: usize, p: f64 },
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    BarabasiAlbert { n: usize, m: usize },
}

impl Family {
    pub fn erdos_renyi_preset(preset: ErPreset, n: usize) -> Family {
        Family::ErdosRenyi { n, p: preset.probability(n) }
    }

    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Family::ErdosRenyi { .. } | Family::WattsStrogatz { .. } | Family::BarabasiAlbert { .. }
        )
    }

    /// Number of nodes the family produces.
    pub fn node_count(&self) -> usize {
        match *self {
            Family::Cycle { n }
            | Family::ErdosRenyi { n, .. }
            | Family::WattsStrogatz { n, .. }
            | Family::BarabasiAlbert { n, .. } => n,
            Family::Lattice { side } => side * side,
            Family::BTree { b, depth } => (0..=depth as u32).map(|l| b.pow(l)).sum(),
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |msg: String| Err(GeneratorError::InvalidParameter(msg));
        match *self {
            Family::Cycle { n } if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            Family::Lattice { side } if side < 2 => bad(format!("lattice needs side >= 2, got {side}")),
            Family::BTree { b, depth } if b < 1 || depth < 1 => {
                bad(format!("tree needs b >= 1 and depth >= 1, got b={b} depth={depth}"))
            }
            Family::BTree { b, depth } if b > 1 && (depth as f64) * (b as f64).log2() > 40.0 => {
                bad(format!("tree b={b} depth={depth} is too large"))
            }
            Family::ErdosRenyi { n, p } if n < 1 || !(0.0..=1.0).contains(&p) => {
                bad(format!("ER needs n >= 1 and p in [0,1], got n={n} p={p}"))
            }
            Family::WattsStrogatz { n, k, beta }
                if k < 2 || k % 2 != 0 || k >= n || !(0.0..=1.0).contains(&beta) =>
            {
                bad(format!("WS needs even k with 2 <= k < n and beta in [0,1], got n={n} k={k} beta={beta}"))
            }
            Family::BarabasiAlbert { n, m } if m < 1 || m >= n => {
                bad(format!("BA needs 1 <= m < n, got n={n} m={m}"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Cycle { n } => write!(f, "cycle:{n}"),
            Family::Lattice { side } => write!(f, "lattice:{side}"),
            Family::BTree { b, depth } => write!(f, "btree:{b}:{depth}"),
            Family::ErdosRenyi { n, p } => write!(f, "er:{n}:{p}"),
            Family::WattsStrogatz { n, k, beta } => write!(f, "ws:{n}:{k}:{beta}"),
            Family::BarabasiAlbert { n, m } => write!(f, "ba:{n}:{m}"),
        }
    }
}

/// Parses `cycle:N`, `lattice:SIDE`, `btree:B:DEPTH`, `er:N:P`,
/// `er-1:N` .. `er-4:N`, `ws:N:K:BETA` and `ba:N:M`.
impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |message: &str| GeneratorError::Parse { spec: s.to_string(), message: message.to_string() };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |i: usize| -> Result<usize, GeneratorError> {
            parts
                .get(i)
                .ok_or_else(|| fail("missing parameter"))?
                .parse()
                .map_err(|_| fail("expected a non-negative integer"))
        };
        let real = |i: usize| -> Result<f64, GeneratorError> {
            parts
                .get(i)
                .ok_or_else(|| fail("missing parameter"))?
                .parse()
                .map_err(|_| fail("expected a number"))
        };
        let arity = |k: usize| if parts.len() == k + 1 { Ok(()) } else { Err(fail("wrong number of parameters")) };
        let family = match parts[0].to_ascii_lowercase().as_str() {
            "cycle" => {
                arity(1)?;
                Family::Cycle { n: int(1)? }
            }
            "lattice" => {
                arity(1)?;
                Family::Lattice { side: int(1)? }
            }
            "btree" | "tree" => {
                arity(2)?;
                Family::BTree { b: int(1)?, depth: int(2)? }
            }
            "er" => {
                arity(2)?;
                Family::ErdosRenyi { n: int(1)?, p: real(2)? }
            }
            preset @ ("er-1" | "er-2" | "er-3" | "er-4") => {
                arity(1)?;
                let preset = match preset {
                    "er-1" => ErPreset::Er1,
                    "er-2" => ErPreset::Er2,
                    "er-3" => ErPreset::Er3,
                    _ => ErPreset::Er4,
                };
                Family::erdos_renyi_preset(preset, int(1)?)
            }
            "ws" => {
                arity(3)?;
                Family::WattsStrogatz { n: int(1)?, k: int(2)?, beta: real(3)? }
            }
            "ba" => {
                arity(2)?;
                Family::BarabasiAlbert { n: int(1)?, m: int(2)? }
            }
            _ => return Err(fail("unknown family")),
        };
        family.validate()?;
        Ok(family)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorSpec { family, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        GeneratorSpec { seed, ..self }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GeneratorError> {
    spec.family.validate()?;
    let n = spec.family.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.family {
        Family::Cycle { n } => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        Family::Lattice { side } => lattice_edges(side),
        Family::BTree { b, .. } => (1..n).map(|c| ((c - 1) / b, c)).collect(),
        Family::ErdosRenyi { n, p } => erdos_renyi_edges(n, p, &mut rng),
        Family::WattsStrogatz { n, k, beta } => watts_strogatz_edges(n, k, beta, &mut rng),
        Family::BarabasiAlbert { n, m } => barabasi_albert_edges(n, m, &mut rng),
    };
    Ok(Graph::from_index_edges(n, edges)?)
}

fn lattice_edges(side: usize) -> Vec<(NodeIx, NodeIx)> {
    let at = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    edges
}

fn erdos_renyi_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(NodeIx, NodeIx)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn watts_strogatz_edges(n: usize, k: usize, beta: f64, rng: &mut ChaCha8Rng) -> Vec<(NodeIx, NodeIx)> {
    let mut adj: Vec<BTreeSet<NodeIx>> = vec![BTreeSet::new(); n];
    for j in 1..=k / 2 {
        for i in 0..n {
            let t = (i + j) % n;
            adj[i].insert(t);
            adj[t].insert(i);
        }
    }
    for j in 1..=k / 2 {
        for i in 0..n {
            let t = (i + j) % n;
            if rng.gen::<f64>() >= beta || !adj[i].contains(&t) || adj[i].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&t);
            adj[t].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    adj.iter()
        .enumerate()
        .flat_map(|(u, set)| set.range(u + 1..).map(move |&v| (u, v)))
        .collect()
}

fn barabasi_albert_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(NodeIx, NodeIx)> {
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for t in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let x = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&x) {
                targets.push(x);
            }
        }
        for &x in &targets {
            edges.push((x, t));
            endpoints.extend([x, t]);
        }
    }
    edges
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleScore {
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub stddev: f64,
    pub scores: Vec<f64>,
}

/// Mean and spread of the normalized 3-regular score over `trials` graphs
/// with seeds `spec.seed + 0 .. spec.seed + trials - 1`.
pub fn sample_average_score(
    spec: &GeneratorSpec,
    trials: usize,
    config: ScoreConfig,
) -> Result<SampleScore, GeneratorError> {
    if trials == 0 {
        return Err(GeneratorError::NoTrials);
    }
    let scores: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<f64, GeneratorError> {
            let g = generate(&spec.with_seed(spec.seed.wrapping_add(i)))?;
            let rg = regularize(&g)?;
            Ok(three_regular_score(&rg, config)?.a_normalized)
        })
        .collect::<Result<_, _>>()?;
    let mean = scores.iter().sum::<f64>() / trials as f64;
    let stddev = if trials > 1 {
        (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(SampleScore { mean, stddev, scores })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(family: Family) -> Graph {
        generate(&GeneratorSpec::new(family, 7)).unwrap()
    }

    #[test]
    fn deterministic_families() {
        let c = gen(Family::Cycle { n: 6 });
        assert_eq!((c.node_count(), c.edge_count()), (6, 6));
        assert!((0..6).all(|v| c.degree(v) == 2));

        let l = gen(Family::Lattice { side: 4 });
        assert_eq!((l.node_count(), l.edge_count()), (16, 24));
        for corner in [0, 3, 12, 15] {
            assert_eq!(l.degree(corner), 2);
        }

        let t = gen(Family::BTree { b: 3, depth: 2 });
        assert_eq!((t.node_count(), t.edge_count()), (13, 12));
        assert_eq!(t.degree(0), 3);
        assert!((1..4).all(|v| t.degree(v) == 4));
        assert!((4..13).all(|v| t.degree(v) == 1));
    }

    #[test]
    fn random_families_repeat() {
        for family in [
            Family::ErdosRenyi { n: 80, p: 0.1 },
            Family::WattsStrogatz { n: 80, k: 4, beta: 0.2 },
            Family::BarabasiAlbert { n: 80, m: 2 },
        ] {
            let a = write(&gen(family));
            let b = write(&gen(family));
            assert_eq!(a, b);
            let c = write(&generate(&GeneratorSpec::new(family, 8)).unwrap());
            assert_ne!(a, c);
        }
    }

    fn write(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().map(|(u, v, _)| (u, v)).collect()
    }

    #[test]
    fn edge_counts() {
        let ws = gen(Family::WattsStrogatz { n: 100, k: 6, beta: 0.3 });
        assert_eq!(ws.edge_count(), 300);
        let ba = gen(Family::BarabasiAlbert { n: 100, m: 3 });
        assert_eq!(ba.edge_count(), 6 + 3 * 96);
        let ba1 = gen(Family::BarabasiAlbert { n: 50, m: 1 });
        assert_eq!(ba1.edge_count(), 49);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["cycle:1000", "lattice:32", "btree:3:6", "er:100:0.05", "ws:1000:4:0.1", "ba:100:2"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        let preset: Family = "er-2:1000".parse().unwrap();
        assert_eq!(preset, Family::erdos_renyi_preset(ErPreset::Er2, 1000));
        assert!("cycle".parse::<Family>().is_err());
        assert!("cycle:2".parse::<Family>().is_err());
        assert!("ws:10:3:0.1".parse::<Family>().is_err());
        assert!("ba:5:5".parse::<Family>().is_err());
        assert!("er:10:1.5".parse::<Family>().is_err());
        assert!("hypercube:3".parse::<Family>().is_err());
    }
}
