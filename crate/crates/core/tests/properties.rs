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


use std::collections::BTreeSet;

use geoprior::curvature::{jost_liu_bounds, neighbor_transport};
use geoprior::distortion::{model_distance, ModelPoint, ModelSpace};
use geoprior::graph::{neighborhood, path_distance, write_edge_list};
use geoprior::{
    d_avg, load_graph, map_score, regularize, three_regular_score, DistortionOptions, Embedding, Graph,
    PathMetric, ScoreConfig,
};
use proptest::prelude::*;

fn edge_set(n: usize, raw: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> =
        raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
    set.into_iter().collect()
}

fn graph() -> impl Strategy<Value = Graph> {
    (2usize..24).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..60)
            .prop_map(move |raw| Graph::from_index_edges(n, edge_set(n, raw)).unwrap())
            .prop_filter("needs an edge", |g| g.edge_count() > 0)
    })
}

fn weighted_graph() -> impl Strategy<Value = Graph> {
    (2usize..16).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..20), 1..40).prop_filter_map("needs an edge", move |raw| {
            let mut seen = BTreeSet::new();
            let mut text = String::new();
            for (a, b, w) in raw {
                let (a, b) = (a.min(b), a.max(b));
                if a != b && seen.insert((a, b)) {
                    text.push_str(&format!("{a} {b} {}\n", w as f64 / 4.0));
                }
            }
            (!seen.is_empty()).then(|| load_graph(&text, true).unwrap())
        })
    })
}

fn connected(g: &Graph) -> bool {
    let c = g.components();
    c.iter().all(|&x| x == c[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_inequality(g in weighted_graph(), a in 0usize..16, b in 0usize..16, c in 0usize..16) {
        let n = g.node_count();
        let (a, b, c) = (a % n, b % n, c % n);
        for metric in [PathMetric::Hops, PathMetric::WeightedShortestPath] {
            let ab = path_distance(&g, a, b, metric).unwrap();
            let bc = path_distance(&g, b, c, metric).unwrap();
            let ac = path_distance(&g, a, c, metric).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert_eq!(ab, path_distance(&g, b, a, metric).unwrap());
        }
    }

    #[test]
    fn neighborhoods_grow_with_radius(g in weighted_graph(), v in 0usize..16, r in 1u32..5) {
        let v = v % g.node_count();
        for metric in [PathMetric::Hops, PathMetric::WeightedShortestPath] {
            let small = neighborhood(&g, v, r as f64, metric).unwrap();
            let large = neighborhood(&g, v, r as f64 + 1.0, metric).unwrap();
            prop_assert!(small.contains(&v));
            prop_assert!(small.iter().all(|x| large.contains(x)));
        }
    }

    #[test]
    fn unit_weights_make_metrics_agree(g in graph(), v in 0usize..24, r in 1u32..6) {
        let v = v % g.node_count();
        let hops = neighborhood(&g, v, r as f64, PathMetric::Hops).unwrap();
        let weighted = neighborhood(&g, v, r as f64, PathMetric::WeightedShortestPath).unwrap();
        prop_assert_eq!(hops, weighted);
    }

    #[test]
    fn regularization_is_cubic(g in graph()) {
        let rg = regularize(&g).unwrap();
        for x in 0..rg.graph.node_count() {
            prop_assert_eq!(rg.graph.degree(x), 3);
        }
        let unmapped = (0..g.node_count()).filter(|&v| g.degree(v) == 0).count();
        prop_assert_eq!(rg.unmapped().count(), unmapped);
    }

    #[test]
    fn weighted_regularization_is_cubic(g in weighted_graph()) {
        let rg = regularize(&g).unwrap();
        prop_assert!((0..rg.graph.node_count()).all(|x| rg.graph.degree(x) == 3));
        prop_assert_eq!(rg.epsilon(), g.max_edge_weight().unwrap());
    }

    #[test]
    fn edge_order_does_not_matter(g in graph(), seed in any::<u64>()) {
        let text = write_edge_list(&g, false);
        let mut lines: Vec<&str> = text.lines().collect();
        // Deterministic shuffle driven by the seed.
        let mut state = seed | 1;
        for i in (1..lines.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            lines.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled = load_graph(&lines.join("\n"), false).unwrap();
        let original = load_graph(&text, false).unwrap();
        let a = three_regular_score(&regularize(&original).unwrap(), ScoreConfig::default()).unwrap();
        let b = three_regular_score(&regularize(&shuffled).unwrap(), ScoreConfig::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ollivier_within_bounds(g in graph()) {
        for (u, v, _) in g.edges() {
            let forward = neighbor_transport(&g, u, v).unwrap();
            let backward = neighbor_transport(&g, v, u).unwrap();
            prop_assert_eq!(forward, backward);
            let k = forward.curvature();
            let b = jost_liu_bounds(&g, u, v).unwrap();
            prop_assert!(k >= b.lower - 1e-12 && k <= b.upper + 1e-12, "{} not in [{}, {}]", k, b.lower, b.upper);
        }
    }
}

fn sphere_point(raw: &[f64]) -> Option<ModelPoint> {
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 1e-3).then(|| ModelPoint::new(ModelSpace::Spherical, raw.iter().map(|x| x / norm).collect()).unwrap())
}

fn hyperboloid_point(raw: &[f64]) -> ModelPoint {
    let x0 = (1.0 + raw.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let mut coords = vec![x0];
    coords.extend_from_slice(raw);
    ModelPoint::new(ModelSpace::Hyperboloid, coords).unwrap()
}

fn check_metric(p: &ModelPoint, q: &ModelPoint, r: &ModelPoint) -> Result<(), TestCaseError> {
    let pq = model_distance(p, q).unwrap();
    let qr = model_distance(q, r).unwrap();
    let pr = model_distance(p, r).unwrap();
    prop_assert!(pq >= 0.0);
    prop_assert!((pq - model_distance(q, p).unwrap()).abs() < 1e-12);
    prop_assert!(pr <= pq + qr + 1e-7);
    prop_assert!(model_distance(p, p).unwrap() < 1e-6);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn euclidean_metric(a in prop::array::uniform3(-5.0f64..5.0), b in prop::array::uniform3(-5.0f64..5.0), c in prop::array::uniform3(-5.0f64..5.0)) {
        let p = |x: [f64; 3]| ModelPoint::new(ModelSpace::Euclidean, x.to_vec()).unwrap();
        check_metric(&p(a), &p(b), &p(c))?;
    }

    #[test]
    fn spherical_metric(a in prop::array::uniform3(-1.0f64..1.0), b in prop::array::uniform3(-1.0f64..1.0), c in prop::array::uniform3(-1.0f64..1.0)) {
        if let (Some(p), Some(q), Some(r)) = (sphere_point(&a), sphere_point(&b), sphere_point(&c)) {
            check_metric(&p, &q, &r)?;
            prop_assert!(model_distance(&p, &q).unwrap() <= std::f64::consts::PI);
        }
    }

    #[test]
    fn hyperboloid_metric(a in prop::array::uniform2(-3.0f64..3.0), b in prop::array::uniform2(-3.0f64..3.0), c in prop::array::uniform2(-3.0f64..3.0)) {
        let (p, q, r) = (hyperboloid_point(&a), hyperboloid_point(&b), hyperboloid_point(&c));
        check_metric(&p, &q, &r)?;
        prop_assert!(model_distance(&p, &q).unwrap().is_finite());
    }

    #[test]
    fn distortion_ranges(g in graph(), coords in prop::collection::vec(-3.0f64..3.0, 48)) {
        prop_assume!(connected(&g));
        let mut e = Embedding::new(ModelSpace::Euclidean);
        for v in 0..g.node_count() {
            let point = ModelPoint::new(ModelSpace::Euclidean, vec![coords[2 * v], coords[2 * v + 1]]).unwrap();
            e.insert(g.id(v).clone(), point).unwrap();
        }
        let d = d_avg(&g, &e, DistortionOptions::default()).unwrap();
        prop_assert!(d >= 0.0);
        let m = map_score(&g, &e).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m));
    }

    #[test]
    fn isometric_cycle_embedding(n in 3usize..40) {
        // Points on a circle with adjacent geodesic distance 1.
        let g = Graph::from_index_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        let step = std::f64::consts::TAU / n as f64;
        let mut e = Embedding::new(ModelSpace::Spherical);
        for v in 0..n {
            let t = step * v as f64;
            e.insert(v.to_string(), ModelPoint::new(ModelSpace::Spherical, vec![t.cos(), t.sin()]).unwrap()).unwrap();
        }
        let opts = DistortionOptions { kappa: step * step, ..Default::default() };
        prop_assert!(d_avg(&g, &e, opts).unwrap() < 1e-9);
        prop_assert_eq!(map_score(&g, &e).unwrap(), 1.0);
    }
}
