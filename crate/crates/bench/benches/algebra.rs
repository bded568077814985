use criterion::{black_box, criterion_group, criterion_main, Criterion};
use skein_bench::random_words;
use skein_core::freealg::{check_local_confluence, pi_commutative, presentation, PresentationId};

fn reduce(c: &mut Criterion) {
    let sys = presentation(PresentationId::Ry022FourGen);
    let words = random_words(1, 64, 4, 6);
    c.bench_function("reduce ry022-4gen words of length 6", |b| {
        b.iter(|| {
            for w in &words {
                black_box(sys.reduce(w).unwrap());
            }
        })
    });
}

fn confluence(c: &mut Criterion) {
    for id in [PresentationId::Ry022FourGen, PresentationId::Ry022ThreeGen] {
        let sys = presentation(id);
        c.bench_function(&format!("confluence {id}"), |b| b.iter(|| check_local_confluence(black_box(sys)).unwrap()));
    }
}

fn shadow_map(c: &mut Criterion) {
    let sys = presentation(PresentationId::Ry022FourGen);
    let words = random_words(2, 64, 4, 5);
    c.bench_function("pi of 64 reduced words", |b| {
        b.iter(|| {
            for w in &words {
                black_box(pi_commutative(w, sys).unwrap());
            }
        })
    });
}

criterion_group!(benches, reduce, confluence, shadow_map);
criterion_main!(benches);
