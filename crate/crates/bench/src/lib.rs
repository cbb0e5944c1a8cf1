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


//! Shared fixtures for the benchmarks.

use geoprior::{generate, regularize, Family, Graph, GeneratorSpec, RegularizedGraph};

/// Graphs at the sizes used throughout the benchmarks, with a fixed seed.
pub fn fixture(family: Family) -> Graph {
    generate(&GeneratorSpec::new(family, 42)).expect("fixture parameters are valid")
}

pub fn regularized_fixture(family: Family) -> RegularizedGraph {
    regularize(&fixture(family)).expect("fixture graphs have edges")
}

pub fn families() -> Vec<(&'static str, Family)> {
    vec![
        ("cycle_1000", Family::Cycle { n: 1000 }),
        ("lattice_32", Family::Lattice { side: 32 }),
        ("btree_3_6", Family::BTree { b: 3, depth: 6 }),
        ("ws_1000_4", Family::WattsStrogatz { n: 1000, k: 4, beta: 0.1 }),
        ("ba_1000_2", Family::BarabasiAlbert { n: 1000, m: 2 }),
    ]
}
