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

//! Exact balanced transportation with integer supplies and costs.
//!
//! Solved as a min-cost flow by successive shortest augmenting paths with
//! Johnson potentials. Integer data keeps the optimum exact.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("total supply {supply} differs from total demand {demand}")]
    Unbalanced { supply: u64, demand: u64 },
    #[error("cost matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("no feasible transport plan")]
    Infeasible,
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), out: vec![Vec::new(); n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, cost });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0, cost: -cost });
    }

    /// Pushes `target` units from `s` to `t` at minimum cost.
    fn min_cost_flow(&mut self, s: usize, t: usize, target: i64) -> Option<i64> {
        let n = self.out.len();
        let mut potential = vec![0i64; n];
        let mut flow = 0;
        let mut cost = 0;
        while flow < target {
            // Dense Dijkstra on reduced costs; the networks here are tiny.
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut done = vec![false; n];
            dist[s] = 0;
            loop {
                let mut best = None;
                for x in 0..n {
                    if !done[x] && dist[x] != i64::MAX && best.is_none_or(|b| dist[x] < dist[b]) {
                        best = Some(x);
                    }
                }
                let Some(x) = best else { break };
                done[x] = true;
                for &a in &self.out[x] {
                    let arc = self.arcs[a];
                    if arc.cap == 0 {
                        continue;
                    }
                    let reduced = arc.cost + potential[x] - potential[arc.to];
                    let nd = dist[x] + reduced;
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        via[arc.to] = a;
                    }
                }
            }
            if dist[t] == i64::MAX {
                return None;
            }
            for x in 0..n {
                if dist[x] != i64::MAX {
                    potential[x] += dist[x];
                }
            }
            let mut push = target - flow;
            let mut x = t;
            while x != s {
                let a = via[x];
                push = push.min(self.arcs[a].cap);
                x = self.arcs[a ^ 1].to;
            }
            let mut x = t;
            while x != s {
                let a = via[x];
                self.arcs[a].cap -= push;
                self.arcs[a ^ 1].cap += push;
                cost += push * self.arcs[a].cost;
                x = self.arcs[a ^ 1].to;
            }
            flow += push;
        }
        Some(cost)
    }
}

/// Minimum total cost of moving `supply[i]` units out of source `i` into
/// sinks with demand `demand[j]`, at `cost[i][j]` per unit.
pub fn min_cost_transport(
    supply: &[u64],
    demand: &[u64],
    cost: &[Vec<u64>],
) -> Result<u64, TransportError> {
    let (total_s, total_d) = (supply.iter().sum::<u64>(), demand.iter().sum::<u64>());
    if total_s != total_d {
        return Err(TransportError::Unbalanced { supply: total_s, demand: total_d });
    }
    if cost.len() != supply.len() || cost.iter().any(|row| row.len() != demand.len()) {
        return Err(TransportError::Shape {
            rows: cost.len(),
            cols: cost.first().map_or(0, Vec::len),
            expected_rows: supply.len(),
            expected_cols: demand.len(),
        });
    }
    let (m, n) = (supply.len(), demand.len());
    let (source, sink) = (m + n, m + n + 1);
    let mut net = FlowNetwork::new(m + n + 2);
    for (i, &s) in supply.iter().enumerate() {
        net.add(source, i, s as i64, 0);
    }
    for (j, &d) in demand.iter().enumerate() {
        net.add(m + j, sink, d as i64, 0);
    }
    for (i, row) in cost.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            net.add(i, m + j, total_s as i64, c as i64);
        }
    }
    net.min_cost_flow(source, sink, total_s as i64)
        .map(|c| c as u64)
        .ok_or(TransportError::Infeasible)
}
