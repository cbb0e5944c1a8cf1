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


use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geoprior::curvature::{curvature_report, Measures};
use geoprior::{regularize, three_regular_score, Family, ScoreConfig};
use geoprior_bench::{families, fixture, regularized_fixture};

fn bench_regularize(c: &mut Criterion) {
    let mut group = c.benchmark_group("regularize");
    for (name, family) in families() {
        let g = fixture(family);
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| regularize(g).unwrap())
        });
    }
    group.finish();
}

fn bench_score(c: &mut Criterion) {
    let mut group = c.benchmark_group("three_regular_score");
    group.sample_size(20);
    for (name, family) in families() {
        let rg = regularized_fixture(family);
        group.bench_with_input(BenchmarkId::from_parameter(name), &rg, |b, rg| {
            b.iter(|| three_regular_score(rg, ScoreConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_ollivier(c: &mut Criterion) {
    let mut group = c.benchmark_group("ollivier");
    group.sample_size(10);
    for (name, family) in [
        ("lattice_32", Family::Lattice { side: 32 }),
        ("ba_1000_2", Family::BarabasiAlbert { n: 1000, m: 2 }),
    ] {
        let g = fixture(family);
        let measures = Measures { forman: false, ollivier: true };
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| curvature_report(g, measures).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_regularize, bench_score, bench_ollivier);
criterion_main!(benches);
