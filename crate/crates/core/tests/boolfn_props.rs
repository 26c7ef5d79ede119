//! Property tests for truth tables, operators, and function classes.

use proptest::prelude::*;
use quarkcap_core::boolfn::{
    assignment, combine, input_index, BooleanOpK, Encoding, FunctionClass, TruthTable,
};

fn arb_encoding() -> impl Strategy<Value = Encoding> {
    prop_oneof![Just(Encoding::ZeroOne), Just(Encoding::PlusMinus)]
}

fn arb_table() -> impl Strategy<Value = TruthTable> {
    (1usize..=5, any::<u64>(), arb_encoding()).prop_map(|(n, raw, encoding)| {
        let mask = raw & ((1u64 << (1usize << n)) - 1);
        TruthTable::from_mask(n, encoding, mask).unwrap()
    })
}

proptest! {
    #[test]
    fn mask_round_trips(t in arb_table()) {
        let rebuilt = TruthTable::from_mask(t.n(), t.encoding(), t.mask().unwrap()).unwrap();
        prop_assert_eq!(&rebuilt, &t);
    }

    #[test]
    fn negation_is_an_involution(t in arb_table()) {
        prop_assert_eq!(&t.negated().negated(), &t);
        for index in 0..t.points() {
            prop_assert_eq!(t.negated().bit(index), !t.bit(index));
        }
    }

    #[test]
    fn encoding_toggle_preserves_bits(t in arb_table()) {
        let toggled = t.toggled_encoding();
        prop_assert_ne!(toggled.encoding(), t.encoding());
        prop_assert_eq!(toggled.mask(), t.mask());
        prop_assert_eq!(&toggled.toggled_encoding(), &t);
    }

    #[test]
    fn canonical_text_round_trips(t in arb_table()) {
        let text = t.canonical_text();
        let parsed = TruthTable::parse_canonical(&text).unwrap();
        prop_assert_eq!(&parsed, &t);
    }

    #[test]
    fn values_match_encoding(t in arb_table(), index in 0usize..32) {
        let index = index % t.points();
        let value = t.value(index);
        match t.encoding() {
            Encoding::ZeroOne => prop_assert!(value == 0 || value == 1),
            Encoding::PlusMinus => prop_assert!(value == -1 || value == 1),
        }
        prop_assert_eq!(value == 1, t.bit(index));
    }

    #[test]
    fn assignment_round_trips(n in 1usize..=6, index in 0usize..64) {
        let index = index % (1usize << n);
        prop_assert_eq!(input_index(&assignment(n, index)), index);
    }

    #[test]
    fn class_insert_is_idempotent(t in arb_table()) {
        let mut class = FunctionClass::new(t.n(), t.encoding()).unwrap();
        prop_assert!(class.insert(t.clone()).unwrap());
        prop_assert!(!class.insert(t.clone()).unwrap());
        prop_assert_eq!(class.len(), 1);
        prop_assert!(class.contains(&t));
    }

    #[test]
    fn combining_with_projections_returns_arguments(a in arb_table(), raw in any::<u64>()) {
        let mask = raw & ((1u64 << (1usize << a.n())) - 1);
        let b = TruthTable::from_mask(a.n(), a.encoding(), mask).unwrap();
        let p = BooleanOpK::binary_by_name("p").unwrap();
        let q = BooleanOpK::binary_by_name("q").unwrap();
        // Combination always lands in the -/+ encoding.
        prop_assert_eq!(&combine(&p, &[&a, &b]).unwrap(), &a.with_encoding(Encoding::PlusMinus));
        prop_assert_eq!(&combine(&q, &[&a, &b]).unwrap(), &b.with_encoding(Encoding::PlusMinus));
    }

    #[test]
    fn xor_with_itself_is_false(a in arb_table()) {
        let xor = combine(&BooleanOpK::xor2(), &[&a, &a]).unwrap();
        for index in 0..xor.points() {
            prop_assert!(!xor.bit(index));
        }
    }
}

#[test]
fn operator_census_is_fixed() {
    let all = BooleanOpK::all_binary();
    assert_eq!(all.len(), 16);
    let irreducible = BooleanOpK::irreducible_binary();
    assert_eq!(irreducible.len(), 10);
    let symmetric = all.iter().filter(|(_, op)| op.is_symmetric()).count();
    assert_eq!(symmetric, 8);
    for (name, op) in &all {
        assert_eq!(&BooleanOpK::binary_by_name(name).unwrap(), op);
        assert_eq!(op.arity(), 2);
    }
    assert!(BooleanOpK::binary_by_name("nope").is_none());
}

#[test]
fn product_operator_multiplies_in_sign_encoding() {
    let product = BooleanOpK::product(3);
    assert!(product.is_symmetric());
    for code in 0..8usize {
        let args: Vec<bool> = (0..3).map(|i| code >> i & 1 == 1).collect();
        // In -/+ terms the product of signs is +1 iff the number of -1
        // factors is even.
        let negatives = args.iter().filter(|&&b| !b).count();
        assert_eq!(product.apply(&args).unwrap(), negatives % 2 == 0);
    }
}

#[test]
fn class_merge_rejects_shape_mismatch() {
    let mut a = FunctionClass::new(2, Encoding::PlusMinus).unwrap();
    let b = FunctionClass::new(3, Encoding::PlusMinus).unwrap();
    assert!(a.merge(b).is_err());
    let mut c = FunctionClass::new(2, Encoding::PlusMinus).unwrap();
    c.insert(TruthTable::from_mask(2, Encoding::PlusMinus, 0b0110).unwrap())
        .unwrap();
    let mut d = FunctionClass::new(2, Encoding::PlusMinus).unwrap();
    d.insert(TruthTable::from_mask(2, Encoding::PlusMinus, 0b0110).unwrap())
        .unwrap();
    d.insert(TruthTable::from_mask(2, Encoding::PlusMinus, 0b1001).unwrap())
        .unwrap();
    c.merge(d).unwrap();
    assert_eq!(c.len(), 2);
}
