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


#![allow(dead_code)]

pub mod oracle;

use geoprior::{generate, Family, GeneratorSpec, Graph};

pub fn family(family: Family) -> Graph {
    generate(&GeneratorSpec::new(family, 0)).unwrap()
}

pub fn seeded(family: Family, seed: u64) -> Graph {
    generate(&GeneratorSpec::new(family, seed)).unwrap()
}

/// Small graphs covering every gadget type plus a few random ones.
pub fn zoo() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("cycle_12".to_string(), family(Family::Cycle { n: 12 })),
        ("lattice_5".to_string(), family(Family::Lattice { side: 5 })),
        ("btree_3_3".to_string(), family(Family::BTree { b: 3, depth: 3 })),
        ("btree_2_4".to_string(), family(Family::BTree { b: 2, depth: 4 })),
        ("ws_40_4".to_string(), family(Family::WattsStrogatz { n: 40, k: 4, beta: 0.2 })),
        ("ba_40_2".to_string(), family(Family::BarabasiAlbert { n: 40, m: 2 })),
    ];
    for seed in 0..4 {
        out.push((format!("er_30_{seed}"), seeded(Family::ErdosRenyi { n: 30, p: 0.12 }, seed)));
    }
    out
}
