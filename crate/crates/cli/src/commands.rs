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


use std::fs;
use std::path::Path;

use geoprior::curvature::{curvature_report, Measures, Summary};
use geoprior::distortion::{parse_embedding, Normalization};
use geoprior::generators::{sample_average_score, SampleScore};
use geoprior::graph::{load_graph_with_nodes, write_edge_list};
use geoprior::growth::{decide_prior, Root};
use geoprior::regularize::{mapped_pairs, verify_quasi_isometry, Provenance, QuasiIsometryStats, VertexRole};
use geoprior::{
    d_avg, generate, map_score, regularize, three_regular_score, DistortionOptions, Family, GeneratorSpec,
    Graph, GrowthClass, Prior, Radius, ScoreConfig, Scope,
};
use serde::Serialize;

use crate::args::{
    AnalyzeArgs, Command, CurvatureArgs, DistortionArgs, Format, GenerateArgs, InputArgs, MeasureArg,
    NormalizationArg, OutputArgs, RegularizeArgs, ScopeArg,
};
use crate::error::CliError;
use crate::report::{sig6, sig6_opt, to_csv, to_json, SCHEMA_VERSION};

/// What a subcommand produced: the report body and a one-line summary
/// printed when the body goes to a file.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub summary: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputInfo {
    File { path: String },
    Generator { spec: String, seed: u64 },
}

fn generator_spec(input: &InputArgs) -> Result<Option<GeneratorSpec>, CliError> {
    let Some(text) = input.generator.as_deref() else { return Ok(None) };
    let text = text.trim();
    if text.starts_with('{') {
        let spec: GeneratorSpec =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("generator spec: {e}")))?;
        spec.family.validate()?;
        Ok(Some(spec))
    } else {
        let family: Family = text.parse()?;
        Ok(Some(GeneratorSpec::new(family, input.seed)))
    }
}

fn load(input: &InputArgs) -> Result<(Graph, InputInfo, Option<GeneratorSpec>), CliError> {
    if let Some(spec) = generator_spec(input)? {
        let g = generate(&spec)?;
        let info = InputInfo::Generator { spec: spec.family.to_string(), seed: spec.seed };
        return Ok((g, info, Some(spec)));
    }
    let Some(path) = input.input.as_deref() else {
        return Err(CliError::Config("one of --input or --generator is required".into()));
    };
    let source = read(path)?;
    let nodes = input.nodes.as_deref().map(read).transpose()?;
    let g = load_graph_with_nodes(&source, nodes.as_deref(), input.weighted)?;
    Ok((g, InputInfo::File { path: path.display().to_string() }, None))
}

fn format_of(output: &OutputArgs, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let format = output.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(CliError::Config(format!("format {format:?} is not supported by this command").to_lowercase()))
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Regularize(a) => regularize_cmd(a),
        Command::Curvature(a) => curvature_cmd(a),
        Command::Distortion(a) => distortion_cmd(a),
    }
}

pub fn threads_of(command: &Command) -> usize {
    match command {
        Command::Analyze(a) => a.output.threads,
        Command::Generate(a) => a.output.threads,
        Command::Regularize(a) => a.output.threads,
        Command::Curvature(a) => a.output.threads,
        Command::Distortion(a) => a.output.threads,
    }
}

// ---- analyze ----

#[derive(Debug, Serialize)]
struct AnalyzeConfig {
    radius: f64,
    radius_mode: &'static str,
    tau: f64,
    scope: Scope,
    weighted: bool,
    trials: usize,
}

#[derive(Debug, Serialize)]
struct GraphSummary {
    nodes: usize,
    edges: usize,
    isolated: usize,
}

#[derive(Debug, Serialize)]
struct RegularizedSummary {
    nodes: usize,
    edges: usize,
    epsilon: f64,
    auxiliary: usize,
    unmapped: usize,
}

#[derive(Debug, Serialize)]
struct Histogram {
    exponential: usize,
    linear: usize,
    sublinear: usize,
}

#[derive(Debug, Serialize)]
struct ScoreSummary {
    roots: usize,
    a_raw: i64,
    a_normalized: f64,
    mean_edge_weight: f64,
    prior: Prior,
    histogram: Histogram,
}

#[derive(Debug, Serialize)]
struct Samples {
    trials: usize,
    first_seed: u64,
    mean: f64,
    stddev: f64,
    scores: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Decision {
    a_normalized: f64,
    prior: Prior,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    schema_version: u32,
    command: &'static str,
    input: InputInfo,
    config: AnalyzeConfig,
    graph: GraphSummary,
    regularized: RegularizedSummary,
    score: ScoreSummary,
    samples: Option<Samples>,
    decision: Decision,
}

#[derive(Debug, Serialize)]
struct AnalyzeRow {
    schema_version: u32,
    input: String,
    radius: f64,
    radius_mode: &'static str,
    tau: f64,
    scope: Scope,
    weighted: bool,
    trials: usize,
    nodes: usize,
    edges: usize,
    g3_nodes: usize,
    g3_edges: usize,
    epsilon: f64,
    a_raw: i64,
    a_normalized: f64,
    sample_mean: Option<f64>,
    sample_stddev: Option<f64>,
    exponential: usize,
    linear: usize,
    sublinear: usize,
    prior: Prior,
}

#[derive(Debug, Serialize)]
struct RootRow {
    root: String,
    kind: &'static str,
    class: GrowthClass,
    ball_size: usize,
    root_size: usize,
}

fn prior_name(p: Prior) -> &'static str {
    match p {
        Prior::Hyperbolic => "hyperbolic",
        Prior::Euclidean => "euclidean",
        Prior::Spherical => "spherical",
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let format = format_of(&args.output, Format::Json, &[Format::Json, Format::Csv])?;
    let radius = if args.input.weighted {
        Radius::Weighted(args.radius).validate()?
    } else {
        Radius::hops_from(args.radius)?
    };
    if !(args.tau >= 0.0 && args.tau.is_finite()) {
        return Err(CliError::Config(format!("tau must be non-negative and finite, got {}", args.tau)));
    }
    if args.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let scope = match args.scope {
        ScopeArg::Original => Scope::OriginalOnly,
        ScopeArg::All => Scope::AllG3Vertices,
    };
    let config = ScoreConfig { radius, tau: args.tau, scope };

    let (g, input, spec) = load(&args.input)?;
    if args.trials > 1 && !spec.is_some_and(|s| s.family.is_random()) {
        return Err(CliError::Config("--trials > 1 needs a random generator input".into()));
    }
    let rg = regularize(&g)?;
    let report = three_regular_score(&rg, config)?;
    let samples: Option<SampleScore> = match spec {
        Some(spec) if args.trials > 1 => Some(sample_average_score(&spec, args.trials, config)?),
        _ => None,
    };
    let decided = samples.as_ref().map_or(report.a_normalized, |s| s.mean);
    let decision = Decision { a_normalized: sig6(decided), prior: decide_prior(decided, args.tau) };

    if let Some(path) = &args.per_vertex {
        let rows = report.per_root.iter().map(|r| match r.root {
            Root::Original(v) => RootRow {
                root: g.id(v).to_string(),
                kind: "original",
                class: r.class,
                ball_size: r.ball_size,
                root_size: r.root_size,
            },
            Root::Auxiliary(x) => RootRow {
                root: rg.graph.id(x).to_string(),
                kind: "auxiliary",
                class: r.class,
                ball_size: r.ball_size,
                root_size: r.root_size,
            },
        });
        write(path, &to_csv(rows)?)?;
    }

    let (radius_mode, radius_value) = match radius {
        Radius::Hops(r) => ("hops", r as f64),
        Radius::Weighted(r) => ("weighted", r),
    };
    let summary = format!("prior: {}  a_normalized: {}", prior_name(decision.prior), decision.a_normalized);
    let isolated = (0..g.node_count()).filter(|&v| g.degree(v) == 0).count();
    let body = match format {
        Format::Csv => to_csv([AnalyzeRow {
            schema_version: SCHEMA_VERSION,
            input: match &input {
                InputInfo::File { path } => path.clone(),
                InputInfo::Generator { spec, seed } => format!("{spec}@{seed}"),
            },
            radius: sig6(radius_value),
            radius_mode,
            tau: sig6(args.tau),
            scope,
            weighted: args.input.weighted,
            trials: args.trials,
            nodes: g.node_count(),
            edges: g.edge_count(),
            g3_nodes: rg.graph.node_count(),
            g3_edges: report.g3_edges,
            epsilon: sig6(rg.epsilon()),
            a_raw: report.a_raw,
            a_normalized: sig6(report.a_normalized),
            sample_mean: samples.as_ref().map(|s| sig6(s.mean)),
            sample_stddev: samples.as_ref().map(|s| sig6(s.stddev)),
            exponential: report.histogram.exponential,
            linear: report.histogram.linear,
            sublinear: report.histogram.sublinear,
            prior: decision.prior,
        }])?,
        _ => to_json(&AnalyzeReport {
            schema_version: SCHEMA_VERSION,
            command: "analyze",
            input,
            config: AnalyzeConfig {
                radius: sig6(radius_value),
                radius_mode,
                tau: sig6(args.tau),
                scope,
                weighted: args.input.weighted,
                trials: args.trials,
            },
            graph: GraphSummary { nodes: g.node_count(), edges: g.edge_count(), isolated },
            regularized: RegularizedSummary {
                nodes: rg.graph.node_count(),
                edges: rg.graph.edge_count(),
                epsilon: sig6(rg.epsilon()),
                auxiliary: rg.auxiliary_count(),
                unmapped: rg.unmapped().count(),
            },
            score: ScoreSummary {
                roots: report.per_root.len(),
                a_raw: report.a_raw,
                a_normalized: sig6(report.a_normalized),
                mean_edge_weight: sig6(report.mean_edge_weight),
                prior: report.prior,
                histogram: Histogram {
                    exponential: report.histogram.exponential,
                    linear: report.histogram.linear,
                    sublinear: report.histogram.sublinear,
                },
            },
            samples: samples.map(|s| Samples {
                trials: args.trials,
                first_seed: spec.map_or(0, |s| s.seed),
                mean: sig6(s.mean),
                stddev: sig6(s.stddev),
                scores: s.scores.iter().copied().map(sig6).collect(),
            }),
            decision,
        })?,
    };
    Ok(Outcome { body, summary })
}

// ---- generate ----

#[derive(Debug, Serialize)]
struct GraphDocument<'a> {
    schema_version: u32,
    spec: &'a GeneratorSpec,
    nodes: usize,
    edges: Vec<(String, String)>,
}

fn generate_cmd(args: &GenerateArgs) -> Result<Outcome, CliError> {
    let format = format_of(&args.output, Format::Edgelist, &[Format::Edgelist, Format::Json])?;
    let Some(spec) = generator_spec(&args.input)? else {
        return Err(CliError::Config("generate needs --generator".into()));
    };
    let g = generate(&spec)?;
    let summary = format!("generated {}: {} nodes, {} edges", spec.family, g.node_count(), g.edge_count());
    let body = match format {
        Format::Json => to_json(&GraphDocument {
            schema_version: SCHEMA_VERSION,
            spec: &spec,
            nodes: g.node_count(),
            edges: g.edges().map(|(u, v, _)| (g.id(u).to_string(), g.id(v).to_string())).collect(),
        })?,
        _ => write_edge_list(&g, false),
    };
    Ok(Outcome { body, summary })
}

// ---- regularize ----

#[derive(Debug, Serialize)]
struct ProvenanceRow {
    node: String,
    kind: &'static str,
    origin: String,
    gadget: Option<usize>,
}

#[derive(Debug, Default, Serialize)]
struct RoleCounts {
    isolated: usize,
    leaf: usize,
    chain: usize,
    fork: usize,
    star: usize,
}

#[derive(Debug, Serialize)]
struct QiSummary {
    pairs_checked: usize,
    disconnected_pairs: usize,
    lower_violations: usize,
    upper_violations: usize,
    max_additive: f64,
    max_multiplicative: f64,
    min_upper_slack: f64,
}

impl From<QuasiIsometryStats> for QiSummary {
    fn from(s: QuasiIsometryStats) -> Self {
        QiSummary {
            pairs_checked: s.pairs_checked,
            disconnected_pairs: s.disconnected_pairs,
            lower_violations: s.lower_violations,
            upper_violations: s.upper_violations,
            max_additive: sig6(s.max_additive),
            max_multiplicative: sig6(s.max_multiplicative),
            min_upper_slack: sig6(s.min_upper_slack),
        }
    }
}

#[derive(Debug, Serialize)]
struct RegularizeReport {
    schema_version: u32,
    command: &'static str,
    input: InputInfo,
    graph: GraphSummary,
    regularized: RegularizedSummary,
    roles: RoleCounts,
    quasi_isometry: Option<QiSummary>,
}

fn regularize_cmd(args: &RegularizeArgs) -> Result<Outcome, CliError> {
    let format = format_of(&args.output, Format::Edgelist, &[Format::Edgelist, Format::Json])?;
    let (g, input, _) = load(&args.input)?;
    let rg = regularize(&g)?;
    if let Some(path) = &args.provenance {
        let rows: Vec<ProvenanceRow> = (0..rg.graph.node_count())
            .map(|x| match rg.provenance(x) {
                Provenance::Original(v) => ProvenanceRow {
                    node: rg.graph.id(x).to_string(),
                    kind: "original",
                    origin: g.id(v).to_string(),
                    gadget: None,
                },
                Provenance::Auxiliary { origin, gadget } => ProvenanceRow {
                    node: rg.graph.id(x).to_string(),
                    kind: "auxiliary",
                    origin: g.id(origin).to_string(),
                    gadget: Some(gadget),
                },
            })
            .collect();
        write(path, &to_json(&rows)?)?;
    }
    let stats = if args.verify { Some(verify_quasi_isometry(&g, &rg, &mapped_pairs(&rg))?) } else { None };
    let mut summary = format!(
        "regularized: {} nodes, {} edges, epsilon {}",
        rg.graph.node_count(),
        rg.graph.edge_count(),
        sig6(rg.epsilon())
    );
    if let Some(s) = &stats {
        summary.push_str(&format!(", {} of {} pairs violate the distortion bound", s.violations(), s.pairs_checked));
    }
    let body = match format {
        Format::Json => {
            let mut roles = RoleCounts::default();
            for v in 0..g.node_count() {
                match rg.role(v) {
                    VertexRole::Isolated => roles.isolated += 1,
                    VertexRole::Leaf => roles.leaf += 1,
                    VertexRole::Chain => roles.chain += 1,
                    VertexRole::Fork => roles.fork += 1,
                    VertexRole::Star => roles.star += 1,
                }
            }
            to_json(&RegularizeReport {
                schema_version: SCHEMA_VERSION,
                command: "regularize",
                input,
                graph: GraphSummary {
                    nodes: g.node_count(),
                    edges: g.edge_count(),
                    isolated: roles.isolated,
                },
                regularized: RegularizedSummary {
                    nodes: rg.graph.node_count(),
                    edges: rg.graph.edge_count(),
                    epsilon: sig6(rg.epsilon()),
                    auxiliary: rg.auxiliary_count(),
                    unmapped: rg.unmapped().count(),
                },
                roles,
                quasi_isometry: stats.map(QiSummary::from),
            })?
        }
        _ => write_edge_list(&rg.graph, true),
    };
    Ok(Outcome { body, summary })
}

// ---- curvature ----

#[derive(Debug, Serialize)]
struct Stats {
    min: f64,
    mean: f64,
    max: f64,
}

fn stats(s: Option<Summary>) -> Option<Stats> {
    s.map(|s| Stats { min: sig6(s.min), mean: sig6(s.mean), max: sig6(s.max) })
}

#[derive(Debug, Serialize)]
struct CurvatureSummary {
    edge_forman: Option<Stats>,
    edge_ollivier: Option<Stats>,
    node_forman: Option<Stats>,
    node_ollivier: Option<Stats>,
}

#[derive(Debug, Serialize)]
struct EdgeRow {
    u: String,
    v: String,
    forman: Option<f64>,
    ollivier: Option<f64>,
    jl_lower: f64,
    jl_upper: f64,
}

#[derive(Debug, Serialize)]
struct NodeRow {
    node: String,
    forman: Option<f64>,
    ollivier: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CurvatureDocument {
    schema_version: u32,
    command: &'static str,
    input: InputInfo,
    measures: Measures,
    summary: CurvatureSummary,
    edges: Vec<EdgeRow>,
    nodes: Vec<NodeRow>,
}

fn curvature_cmd(args: &CurvatureArgs) -> Result<Outcome, CliError> {
    let format = format_of(&args.output, Format::Json, &[Format::Json, Format::Csv])?;
    if args.measures.is_empty() {
        return Err(CliError::Config("no curvature measure selected".into()));
    }
    let measures = Measures {
        forman: args.measures.contains(&MeasureArg::Forman),
        ollivier: args.measures.contains(&MeasureArg::Ollivier),
    };
    let (g, input, _) = load(&args.input)?;
    let report = curvature_report(&g, measures)?;
    let edges: Vec<EdgeRow> = report
        .edges
        .iter()
        .map(|e| EdgeRow {
            u: g.id(e.u).to_string(),
            v: g.id(e.v).to_string(),
            forman: sig6_opt(e.forman),
            ollivier: sig6_opt(e.ollivier),
            jl_lower: sig6(e.bounds.lower),
            jl_upper: sig6(e.bounds.upper),
        })
        .collect();
    let nodes: Vec<NodeRow> = report
        .nodes
        .iter()
        .map(|n| NodeRow { node: g.id(n.v).to_string(), forman: sig6_opt(n.forman), ollivier: sig6_opt(n.ollivier) })
        .collect();
    let summary_block = CurvatureSummary {
        edge_forman: stats(report.edge_forman_summary()),
        edge_ollivier: stats(report.edge_ollivier_summary()),
        node_forman: stats(report.node_forman_summary()),
        node_ollivier: stats(report.node_ollivier_summary()),
    };
    let mut summary = format!("{} edges", edges.len());
    for (name, s) in [("forman", &summary_block.edge_forman), ("ollivier", &summary_block.edge_ollivier)] {
        if let Some(s) = s {
            summary.push_str(&format!("  {name}: min {} mean {} max {}", s.min, s.mean, s.max));
        }
    }
    if let Some(path) = &args.node_output {
        write(path, &to_csv(&nodes)?)?;
    }
    let body = match format {
        Format::Csv => to_csv(&edges)?,
        _ => to_json(&CurvatureDocument {
            schema_version: SCHEMA_VERSION,
            command: "curvature",
            input,
            measures,
            summary: summary_block,
            edges,
            nodes,
        })?,
    };
    Ok(Outcome { body, summary })
}

// ---- distortion ----

#[derive(Debug, Serialize)]
struct DistortionReport {
    schema_version: u32,
    command: &'static str,
    input: InputInfo,
    embedding: String,
    space: geoprior::ModelSpace,
    normalization: Normalization,
    kappa: f64,
    nodes: usize,
    d_avg: f64,
    map: f64,
}

#[derive(Debug, Serialize)]
struct DistortionRow {
    schema_version: u32,
    embedding: String,
    space: geoprior::ModelSpace,
    normalization: Normalization,
    kappa: f64,
    nodes: usize,
    d_avg: f64,
    map: f64,
}

fn distortion_cmd(args: &DistortionArgs) -> Result<Outcome, CliError> {
    let format = format_of(&args.output, Format::Json, &[Format::Json, Format::Csv])?;
    if !(args.kappa > 0.0 && args.kappa.is_finite()) {
        return Err(CliError::Config(format!("kappa must be positive and finite, got {}", args.kappa)));
    }
    let normalization = match args.normalization {
        NormalizationArg::PairAverage => Normalization::PairAverage,
        NormalizationArg::BareSum => Normalization::BareSum,
    };
    let (g, input, _) = load(&args.input)?;
    let embedding = parse_embedding(&read(&args.embedding)?)?;
    let options = DistortionOptions { normalization, kappa: args.kappa };
    let d = sig6(d_avg(&g, &embedding, options)?);
    let m = sig6(map_score(&g, &embedding)?);
    let summary = format!("d_avg: {d}  map: {m}");
    let path = args.embedding.display().to_string();
    let body = match format {
        Format::Csv => to_csv([DistortionRow {
            schema_version: SCHEMA_VERSION,
            embedding: path,
            space: embedding.space(),
            normalization,
            kappa: sig6(args.kappa),
            nodes: g.node_count(),
            d_avg: d,
            map: m,
        }])?,
        _ => to_json(&DistortionReport {
            schema_version: SCHEMA_VERSION,
            command: "distortion",
            input,
            embedding: path,
            space: embedding.space(),
            normalization,
            kappa: sig6(args.kappa),
            nodes: g.node_count(),
            d_avg: d,
            map: m,
        })?,
    };
    Ok(Outcome { body, summary })
}
