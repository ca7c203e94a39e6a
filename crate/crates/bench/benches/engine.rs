use criterion::{criterion_group, criterion_main, Criterion};

use orefree_core::constructions::sanchez_pair;
use orefree_core::field::{sample_poly, FieldElem};
use orefree_core::freeness::search_relations;
use orefree_core::scenarios;
use orefree_core::series::SkewSeries;
use orefree_core::skewpoly::{SkewPoly, SkewRing};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_skew_poly(ring: &SkewRing, rng: &mut ChaCha8Rng, deg: usize) -> SkewPoly {
    let mut p = ring.zero();
    for d in 0..=deg {
        let c = sample_poly(&ring.field, rng, 2);
        p = p.add(&ring.monomial(d, FieldElem::from_poly(&ring.field, c)));
    }
    p
}

fn bench_skew_mul(c: &mut Criterion) {
    let ring = scenarios::sc_b();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_skew_poly(&ring, &mut rng, 12);
    let g = random_skew_poly(&ring, &mut rng, 12);
    c.bench_function("skew_mul_deg12_sc_b", |b| b.iter(|| f.mul(&g)));
}

fn bench_lclm(c: &mut Criterion) {
    let ring = scenarios::sc_b();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = random_skew_poly(&ring, &mut rng, 6);
    let g = random_skew_poly(&ring, &mut rng, 6);
    c.bench_function("lclm_deg6_sc_b", |b| b.iter(|| f.lclm(&g).unwrap()));
}

fn bench_series(c: &mut Criterion) {
    let ring = scenarios::sc_c();
    let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
    let (u, _) = sanchez_pair(&ring, &t0).unwrap();
    let s = u.to_series(30).unwrap();
    c.bench_function("series_mul_n30_sc_c", |b| b.iter(|| s.mul(&s)));
    let unit = SkewSeries::one(&ring, 30).unwrap().add(&s);
    c.bench_function("series_invert_n30_sc_c", |b| b.iter(|| unit.invert().unwrap()));
}

fn bench_search(c: &mut Criterion) {
    let ring = scenarios::sc_c();
    let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
    let (u, v) = sanchez_pair(&ring, &t0).unwrap();
    c.bench_function("search_l3_n16_sc_c", |b| {
        b.iter(|| search_relations(&u, &v, 3, 16, false, 1).unwrap())
    });
}

criterion_group!(benches, bench_skew_mul, bench_lclm, bench_series, bench_search);
criterion_main!(benches);
