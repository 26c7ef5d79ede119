//! Encoder block: counter law, oracle agreement, and equivariance.

use quarkcap_core::rng::SplitMix64;
use quarkcap_core::transformer::{
    build_encoder, build_encoder_with_offsets, forward, permutation_check, reference_forward,
    EncoderConfig, TransformerError,
};

fn random_inputs(cfg: &EncoderConfig, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::new(seed).fork(0x7e57);
    (0..cfg.n)
        .map(|_| (0..cfg.d_in).map(|_| rng.next_f64_in(-1.0, 1.0)).collect())
        .collect()
}

#[test]
fn gating_op_counters_follow_the_shape_law() {
    for n in 1..=6usize {
        for m in 1..=8usize {
            let cfg = EncoderConfig::random(n, 3, m, 42);
            let enc = build_encoder(&cfg).unwrap();
            let (output_ops, synaptic_ops) = enc.net.gating_op_counts();
            assert_eq!(output_ops, (m * n * n) as u64, "n={n} m={m}");
            assert_eq!(synaptic_ops, (n * n) as u64, "n={n} m={m}");
        }
    }
}

#[test]
fn forward_agrees_with_the_matrix_oracle() {
    let mut checked = 0usize;
    for seed in 0..25u64 {
        for (n, d_in, m) in [(2usize, 2usize, 2usize), (3, 4, 2), (4, 3, 3), (5, 2, 4)] {
            let cfg = EncoderConfig::random(n, d_in, m, seed);
            let enc = build_encoder(&cfg).unwrap();
            let inputs = random_inputs(&cfg, seed * 31 + n as u64);
            let (got, trace) = forward(&enc, &inputs).unwrap();
            let want = reference_forward(&enc, &inputs).unwrap();
            for (grow, wrow) in got.iter().zip(&want) {
                for (g, w) in grow.iter().zip(wrow) {
                    assert!((g - w).abs() <= 1e-9, "seed {seed} n={n}: {g} vs {w}");
                }
            }
            assert_eq!(trace.output_gating_ops, (m * n * n) as u64);
            assert_eq!(trace.synaptic_gating_ops, (n * n) as u64);
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn equivariance_holds_for_every_permutation_up_to_n4() {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for shorter in permutations(n - 1) {
            for slot in 0..n {
                let mut perm = shorter.clone();
                perm.insert(slot, n - 1);
                out.push(perm);
            }
        }
        out
    }
    for n in 2..=4usize {
        let cfg = EncoderConfig::random(n, 3, 2, n as u64);
        let enc = build_encoder(&cfg).unwrap();
        let inputs = random_inputs(&cfg, 9 + n as u64);
        for perm in permutations(n) {
            assert!(
                permutation_check(&enc, &inputs, &perm, 1e-9).unwrap(),
                "n={n} perm={perm:?}"
            );
        }
    }
}

#[test]
fn positional_offsets_break_equivariance() {
    let cfg = EncoderConfig::random(4, 3, 2, 17);
    let inputs = random_inputs(&cfg, 18);
    let offsets = [0.0, 0.7, 1.4, 2.1];
    let enc = build_encoder_with_offsets(&cfg, &offsets).unwrap();
    // The offset encoder still matches its own oracle.
    let (got, _) = forward(&enc, &inputs).unwrap();
    let want = reference_forward(&enc, &inputs).unwrap();
    for (grow, wrow) in got.iter().zip(&want) {
        for (g, w) in grow.iter().zip(wrow) {
            assert!((g - w).abs() <= 1e-9);
        }
    }
    // Any nontrivial rotation is detected.
    assert!(!permutation_check(&enc, &inputs, &[1, 2, 3, 0], 1e-9).unwrap());
    assert!(!permutation_check(&enc, &inputs, &[3, 0, 1, 2], 1e-9).unwrap());
    // The identity permutation trivially passes.
    assert!(permutation_check(&enc, &inputs, &[0, 1, 2, 3], 1e-9).unwrap());
}

#[test]
fn configs_are_validated() {
    assert!(matches!(
        build_encoder(&EncoderConfig {
            n: 0,
            d_in: 1,
            m: 1,
            w_q: vec![],
            w_k: vec![],
            w_v: vec![],
        }),
        Err(TransformerError::EmptyShape)
    ));
    let cfg = EncoderConfig::random(2, 2, 2, 0);
    let enc = build_encoder(&cfg).unwrap();
    assert!(matches!(
        forward(&enc, &[vec![1.0, 2.0]]),
        Err(TransformerError::InputShape { .. })
    ));
    assert!(matches!(
        permutation_check(&enc, &random_inputs(&cfg, 1), &[1, 1], 1e-9),
        Err(TransformerError::BadPermutation { .. })
    ));
    let mut bad = EncoderConfig::random(2, 2, 2, 0);
    bad.w_q[0][1] = f64::NAN;
    assert!(matches!(
        build_encoder(&bad),
        Err(TransformerError::NonFiniteWeight)
    ));
}

#[test]
fn same_seed_reproduces_the_same_network() {
    let a = EncoderConfig::random(3, 3, 3, 5);
    let b = EncoderConfig::random(3, 3, 3, 5);
    assert_eq!(a.w_q, b.w_q);
    assert_eq!(a.w_k, b.w_k);
    assert_eq!(a.w_v, b.w_v);
    let ea = build_encoder(&a).unwrap();
    let eb = build_encoder(&b).unwrap();
    assert_eq!(ea.net.to_json(), eb.net.to_json());
}
