use criterion::{black_box, criterion_group, criterion_main, Criterion};
use skein_core::curves::classify;
use skein_core::pts::{discrepancy_oracle, discrepancy_p011, product_oracle, product_to_sum, DiscArg, Recursion};

fn products(c: &mut Criterion) {
    let (u, w) = (classify(3, 2).unwrap(), classify(2, -3).unwrap());
    c.bench_function("product_to_sum (3,2)*(2,-3)", |b| b.iter(|| product_to_sum(black_box(u), black_box(w)).unwrap()));
    c.bench_function("oracle (4,1)*(1,4)", |b| b.iter(|| product_oracle(black_box((4, 1)), black_box((1, 4))).unwrap()));
}

fn discrepancies(c: &mut Criterion) {
    c.bench_function("closed D[[9,0],[1,1]]", |b| b.iter(|| discrepancy_p011(black_box(8)).unwrap()));
    c.bench_function("recursion D[[9,0],[1,1]]", |b| b.iter(|| Recursion::new().discrepancy(black_box(8), 1).unwrap()));
    c.bench_function("oracle D[[9,0],[1,1]]", |b| b.iter(|| discrepancy_oracle(black_box(DiscArg::new(9, 0, 1, 1))).unwrap()));
}

criterion_group!(benches, products, discrepancies);
criterion_main!(benches);
