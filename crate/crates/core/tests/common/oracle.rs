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


//! Independent reference computations, written without the library's
//! traversal or transport code.

#![allow(dead_code)]

use geoprior::Graph;

pub const UNREACHABLE: u64 = u64::MAX / 4;

/// All-pairs hop distances by Floyd-Warshall.
pub fn hop_matrix(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (u, v, _) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// All-pairs weighted distances by Floyd-Warshall.
pub fn weighted_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (u, v, w) in g.edges() {
        d[u][v] = w;
        d[v][u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn neighbor_list(g: &Graph, v: usize) -> Vec<usize> {
    g.neighbors(v).iter().map(|&(x, _)| x).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// W1 between uniform measures on N(u) and N(v) under hop distance, by
/// maximizing the Kantorovich-Rubinstein dual over integer 1-Lipschitz
/// potentials on the joint support. Integer costs make the dual polytope
/// integral, so integer potentials reach the optimum.
pub fn w1_brute_force(g: &Graph, u: usize, v: usize) -> f64 {
    let d = hop_matrix(g);
    w1_brute_force_with(&d, &neighbor_list(g, u), &neighbor_list(g, v))
}

pub fn w1_brute_force_with(d: &[Vec<u64>], nu: &[usize], nv: &[usize]) -> f64 {
    let (du, dv) = (nu.len() as i64, nv.len() as i64);
    let scale = du / gcd(du, dv) * dv;
    let mut support: Vec<usize> = nu.iter().chain(nv).copied().collect();
    support.sort_unstable();
    support.dedup();
    let mass: Vec<i64> = support
        .iter()
        .map(|z| {
            let a = if nu.contains(z) { scale / du } else { 0 };
            let b = if nv.contains(z) { scale / dv } else { 0 };
            a - b
        })
        .collect();
    let bound = support.iter().map(|&a| support.iter().map(|&b| d[a][b]).max().unwrap()).max().unwrap() as i64;
    let mut f = vec![0i64; support.len()];
    let mut best = i64::MIN;
    search(d, &support, &mass, bound, 1, &mut f, &mut best);
    best as f64 / scale as f64
}

fn search(
    d: &[Vec<u64>],
    support: &[usize],
    mass: &[i64],
    bound: i64,
    k: usize,
    f: &mut Vec<i64>,
    best: &mut i64,
) {
    if k == support.len() {
        let value: i64 = f.iter().zip(mass).map(|(a, b)| a * b).sum();
        *best = (*best).max(value);
        return;
    }
    for candidate in -bound..=bound {
        let lipschitz = (0..k).all(|j| (candidate - f[j]).unsigned_abs() <= d[support[k]][support[j]]);
        if lipschitz {
            f[k] = candidate;
            search(d, support, mass, bound, k + 1, f, best);
        }
    }
}

/// Number of nodes within `radius` hops of the source set.
pub fn ball_size(d: &[Vec<u64>], sources: &[usize], radius: u64) -> usize {
    (0..d.len()).filter(|&y| sources.iter().any(|&s| d[s][y] <= radius)).count()
}
