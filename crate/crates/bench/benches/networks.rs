//! Network benchmarks: float forward passes, the gating-form round trip,
//! and the encoder demonstrator.

use criterion::{criterion_group, criterion_main, Criterion};
use quarkcap_core::netsim::{output_to_synaptic, random_layered_network, synaptic_to_output};
use quarkcap_core::rng::SplitMix64;
use quarkcap_core::transformer::{build_encoder, forward, EncoderConfig};

fn bench_forward(c: &mut Criterion) {
    let net = random_layered_network(11, 3, 2);
    let inputs = [0.3, -0.8, 1.7];
    c.bench_function("netsim_forward", |b| {
        b.iter(|| net.evaluate(&inputs).expect("evaluates"))
    });
}

fn bench_transforms(c: &mut Criterion) {
    let net = random_layered_network(11, 3, 2);
    c.bench_function("gating_form_round_trip", |b| {
        b.iter(|| {
            let synaptic = output_to_synaptic(&net).expect("transforms");
            synaptic_to_output(&synaptic).expect("transforms")
        })
    });
}

fn bench_encoder(c: &mut Criterion) {
    let cfg = EncoderConfig::random(4, 3, 2, 11);
    let encoder = build_encoder(&cfg).expect("builds");
    let mut rng = SplitMix64::new(11);
    let inputs: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..3).map(|_| rng.next_f64_in(-2.0, 2.0)).collect())
        .collect();
    c.bench_function("encoder_forward_n4_m2_din3", |b| {
        b.iter(|| forward(&encoder, &inputs).expect("runs"))
    });
}

criterion_group!(benches, bench_forward, bench_transforms, bench_encoder);
criterion_main!(benches);
