use autqm::automorphisms::random_composite;
use autqm::graphprod::{gp_multiply, join_decompose, normal_form};
use autqm::norms::{acl_upper, bfs_norm, orbit_closure};
use autqm::quasimorphisms::{defect_enumerate, signed_permutation_group};
use autqm::whitehead::{minimize, whitehead_graph};
use autqm::{AclSearch, Quasimorphism, Word};
use autqm_bench::{fixture_gp_word, fixture_graph, fixture_word};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("words");
    for len in [64, 1024] {
        let u = fixture_word(3, len, 1);
        let v = fixture_word(3, len, 2);
        g.bench_with_input(BenchmarkId::new("multiply", len), &len, |b, _| {
            b.iter(|| black_box(&u) * black_box(&v))
        });
        g.bench_with_input(BenchmarkId::new("cyclic_reduce", len), &len, |b, _| {
            b.iter(|| black_box(&u).cyclic_reduce())
        });
    }
    g.finish();
}

fn automorphisms(c: &mut Criterion) {
    let phi = random_composite(&mut ChaCha8Rng::seed_from_u64(3), 3, 6);
    let w = fixture_word(3, 256, 4);
    c.bench_function("automorphisms/apply_depth6_len256", |b| {
        b.iter(|| phi.apply(black_box(&w)).unwrap())
    });
}

fn whitehead(c: &mut Criterion) {
    let phi = random_composite(&mut ChaCha8Rng::seed_from_u64(5), 2, 4);
    let w = phi.apply(&fixture_word(2, 12, 6)).unwrap();
    c.bench_function("whitehead/minimize", |b| b.iter(|| minimize(black_box(&w))));
    c.bench_function("whitehead/graph", |b| {
        b.iter(|| whitehead_graph(black_box(&w.cyclic_reduce().0.to_word())).unwrap())
    });
}

fn quasimorphisms(c: &mut Criterion) {
    let p = fixture_word(2, 3, 7);
    let f = Quasimorphism::brooks(&p).unwrap();
    let h = Quasimorphism::brooks_homogeneous(&p)
        .unwrap()
        .finite_average(&signed_permutation_group(2))
        .unwrap();
    let w = fixture_word(2, 512, 8);
    c.bench_function("quasimorphisms/brooks_len512", |b| {
        b.iter(|| f.evaluate(black_box(&w)).unwrap())
    });
    c.bench_function("quasimorphisms/averaged_len512", |b| {
        b.iter(|| h.evaluate(black_box(&w)).unwrap())
    });
    let mut g = c.benchmark_group("quasimorphisms/defect_enumerate");
    g.sample_size(10);
    g.bench_function("len3_L6", |b| b.iter(|| defect_enumerate(&f, 6).unwrap()));
    g.finish();
}

fn norms(c: &mut Criterion) {
    let s = orbit_closure(
        &[Word::letter(2, 1).unwrap(), fixture_word(2, 2, 9)],
        &signed_permutation_group(2),
    )
    .unwrap();
    let g = fixture_word(2, 8, 10);
    c.bench_function("norms/bfs_cutoff8", |b| {
        b.iter(|| bfs_norm(black_box(&g), &s, 8).unwrap())
    });
    let mut grp = c.benchmark_group("norms/acl_upper");
    grp.sample_size(10);
    let c2 = Word::commutator(&Word::letter(2, 1).unwrap(), &Word::letter(2, 2).unwrap()).unwrap();
    grp.bench_function("commutator_pair", |b| {
        b.iter(|| {
            acl_upper(
                black_box(&(&c2 * &fixture_word(2, 4, 11))),
                &AclSearch::default(),
            )
        })
    });
    grp.finish();
}

fn graph_products(c: &mut Criterion) {
    let graph = fixture_graph();
    let x = fixture_gp_word(&graph, 64, 12);
    let y = fixture_gp_word(&graph, 64, 13);
    let raw: Vec<(usize, i64)> = x.syllables().iter().chain(y.syllables()).copied().collect();
    c.bench_function("graphprod/normal_form_128", |b| {
        b.iter(|| normal_form(&graph, black_box(&raw)).unwrap())
    });
    c.bench_function("graphprod/multiply_64", |b| {
        b.iter(|| gp_multiply(black_box(&x), black_box(&y)).unwrap())
    });
    c.bench_function("graphprod/join_decompose", |b| {
        b.iter(|| join_decompose(black_box(&graph)))
    });
}

criterion_group!(
    benches,
    words,
    automorphisms,
    whitehead,
    quasimorphisms,
    norms,
    graph_products
);
criterion_main!(benches);
