//! Frozen enumeration fixtures and certificate properties.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use quarkcap_core::boolfn::{Encoding, TruthTable};
use quarkcap_core::rational::{rat, Rat};
use quarkcap_core::threshold::{
    capacity, enumerate_class, enumerate_class_with, realize, to_table, PolyWeights,
    Strategy as EnumStrategy, ThresholdKind,
};

#[test]
fn affine_class_sizes_are_frozen() {
    assert_eq!(enumerate_class(1, 1).unwrap().class.len(), 4);
    assert_eq!(enumerate_class(2, 1).unwrap().class.len(), 14);
    assert_eq!(enumerate_class(3, 1).unwrap().class.len(), 104);
}

#[test]
fn quadratic_class_sizes_are_frozen() {
    assert_eq!(enumerate_class(2, 2).unwrap().class.len(), 16);
    assert_eq!(enumerate_class(3, 2).unwrap().class.len(), 254);
}

#[test]
fn four_variable_affine_size_is_frozen() {
    assert_eq!(enumerate_class(4, 1).unwrap().class.len(), 1882);
}

#[test]
fn certificates_realize_members_with_unit_margin() {
    for (n, d) in [(2usize, 1usize), (3, 1), (2, 2)] {
        let enumerated = enumerate_class(n, d).unwrap();
        assert_eq!(enumerated.certificates.len(), enumerated.class.len());
        for (table, weights) in &enumerated.certificates {
            assert_eq!(&to_table(weights, ThresholdKind::Sign).unwrap(), table);
            assert!(
                weights.min_abs_on_cube() >= Rat::one(),
                "margin below 1 at n={n} d={d}"
            );
        }
    }
}

#[test]
fn bounded_weight_strategy_agrees_with_sweep() {
    let sweep = enumerate_class(2, 1).unwrap();
    // On the 0/1 cube, AND needs weights (2,2) with bias -3, so bound 3 is
    // the smallest box that reproduces the full class at n=2.
    let generated =
        enumerate_class_with(2, 1, EnumStrategy::BoundedWeights { bound: 3 }, 64, 0).unwrap();
    assert_eq!(generated.class.len(), sweep.class.len());
    assert!(generated.class.is_subset_of(&sweep.class));
    let check = generated.cross_check.expect("generative runs cross-check");
    assert!(check.all_infeasible);
    assert!(check.samples > 0);
}

#[test]
fn realize_answers_known_feasibility_cases() {
    let xor = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] ^ x[1]).unwrap();
    assert!(realize(&xor, 1).unwrap().is_none());
    let w = realize(&xor, 2).unwrap().expect("xor is quadratic");
    assert_eq!(to_table(&w, ThresholdKind::Sign).unwrap(), xor);

    let majority = TruthTable::tabulate(3, Encoding::PlusMinus, |x| {
        x.iter().filter(|&&b| b).count() >= 2
    })
    .unwrap();
    let w = realize(&majority, 1).unwrap().expect("majority is affine");
    assert_eq!(to_table(&w, ThresholdKind::Sign).unwrap(), majority);
}

#[test]
fn capacity_is_log2_of_the_count() {
    let class = enumerate_class(3, 1).unwrap().class;
    let bits = capacity(&class).unwrap();
    assert!((bits - 104f64.log2()).abs() < 1e-12);
}

fn small_affine() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(-4i64..=4, n + 1),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integer_affine_signs_land_in_the_enumerated_class((n, coeffs) in small_affine()) {
        let linear: Vec<Rat> = coeffs[1..].iter().map(|&c| rat(c)).collect();
        let weights = PolyWeights::affine(n, rat(coeffs[0]), &linear).unwrap();
        prop_assume!(!weights.min_abs_on_cube().is_zero());
        let table = to_table(&weights, ThresholdKind::Sign).unwrap();
        let class = enumerate_class(n, 1).unwrap().class;
        prop_assert!(class.contains(&table));
    }

    #[test]
    fn class_is_closed_under_negation_and_input_flips(index in 0usize..104, flip in 0usize..3) {
        let enumerated = enumerate_class(3, 1).unwrap();
        let member = enumerated.class.iter().nth(index).unwrap().clone();
        prop_assert!(enumerated.class.contains(&member.negated()));
        // Flipping one input of sign(b + sum w_i x_i) stays affine.
        let flipped = TruthTable::tabulate(3, Encoding::PlusMinus, |x| {
            let mut y = x.to_vec();
            y[flip] = !y[flip];
            member.bit(quarkcap_core::boolfn::input_index(&y))
        })
        .unwrap();
        prop_assert!(enumerated.class.contains(&flipped));
    }
}

#[test]
fn zero_weight_vectors_have_no_sign_table() {
    let weights = PolyWeights::new(2, 1);
    assert!(weights.min_abs_on_cube().is_zero());
    assert!(to_table(&weights, ThresholdKind::Sign).is_err());
    // Heaviside resolves 0 to the false side instead.
    let table = to_table(&weights, ThresholdKind::Heaviside).unwrap();
    assert!((0..4).all(|i| !table.bit(i)));
}

#[test]
fn heaviside_and_sign_tables_agree_on_certified_weights() {
    let enumerated = enumerate_class(2, 1).unwrap();
    for weights in enumerated.certificates.values() {
        let s = to_table(weights, ThresholdKind::Sign).unwrap();
        let h = to_table(weights, ThresholdKind::Heaviside).unwrap();
        assert_eq!(s.mask(), h.mask());
        assert_eq!(h.encoding(), Encoding::ZeroOne);
        assert_eq!(s.encoding(), Encoding::PlusMinus);
    }
}

#[test]
fn embedded_weights_ignore_new_variables() {
    let or = PolyWeights::affine(2, -Rat::one() / rat(2), &[Rat::one(), Rat::one()]).unwrap();
    let wide = or.embedded(4, 1).unwrap();
    for index in 0..16usize {
        let inner = (index >> 1) & 3;
        assert_eq!(wide.eval_index(index), or.eval_index(inner));
    }
    assert!(wide.eval_index(0).is_negative());
}
