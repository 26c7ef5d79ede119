//! Composition classes, capacity bounds, and gating equivalences.

use quarkcap_core::boolfn::{BooleanOpK, Encoding};
use quarkcap_core::gating::{
    compose_class, full_synaptic_gating_check, intersection_witnesses, layer_output_gating_class,
    layer_output_gating_sampled, product_closure, single_weight_gating_class, table2_report,
    verify_composition_bounds, CompositionSpec, GatingError,
};
use quarkcap_core::threshold::{enumerate_class, ThresholdKind};

#[test]
fn sandwich_bounds_hold_for_all_irreducible_operators() {
    for n in [2usize, 3] {
        for (name, op) in BooleanOpK::irreducible_binary() {
            let spec = CompositionSpec::new(op, vec![1, 1], n, Encoding::PlusMinus).unwrap();
            let report = verify_composition_bounds(&spec).unwrap();
            assert!(report.verdict, "{name} at n={n}: {report:?}");
            assert!(report.lower <= report.exact && report.exact <= report.upper);
        }
    }
}

#[test]
fn composed_counts_at_n3_are_frozen() {
    let cases = [
        ("and", 246u64),
        ("or", 246),
        ("nand", 246),
        ("nor", 246),
        ("p_and_not_q", 246),
        ("not_p_and_q", 246),
        ("p_or_not_q", 246),
        ("not_p_or_q", 246),
        ("xor", 254),
        ("nxor", 254),
    ];
    for (name, expected) in cases {
        let op = BooleanOpK::binary_by_name(name).unwrap();
        let spec = CompositionSpec::new(op, vec![1, 1], 3, Encoding::PlusMinus).unwrap();
        assert_eq!(compose_class(&spec).unwrap().len(), expected as usize, "{name}");
    }
}

#[test]
fn pointwise_product_class_equals_quadratic_class_at_n3() {
    // Multiplying two affine sign gates multiplies their polynomials, so the
    // composed class embeds in the degree-2 class; the counts matching
    // (254 on both sides) makes the containment an equality.
    let spec =
        CompositionSpec::new(BooleanOpK::nxor2(), vec![1, 1], 3, Encoding::PlusMinus).unwrap();
    let composed = compose_class(&spec).unwrap();
    let quadratic = enumerate_class(3, 2).unwrap().class;
    assert_eq!(composed.len(), 254);
    assert!(composed.is_subset_of(&quadratic));
    assert_eq!(quadratic.len(), 254);
}

#[test]
fn strict_capacity_hierarchy_at_n3() {
    let affine = enumerate_class(3, 1).unwrap().class.len();
    let spec =
        CompositionSpec::new(BooleanOpK::nxor2(), vec![1, 1], 3, Encoding::PlusMinus).unwrap();
    let gated = compose_class(&spec).unwrap().len();
    let quadratic = enumerate_class(3, 2).unwrap().class.len();
    let all = 1usize << (1 << 3);
    assert!(affine < gated, "{affine} < {gated}");
    assert!(gated <= quadratic);
    assert!(quadratic < all);
    assert_eq!((affine, gated, quadratic, all), (104, 254, 254, 256));
}

#[test]
fn operator_survey_identities_hold() {
    for n in [2usize, 3] {
        let report = table2_report(n).unwrap();
        let ids = &report.identities;
        assert!(ids.and_or_counts_equal);
        assert!(ids.xor_class_closed_under_negation);
        assert!(ids.projection_classes_equal_base);
        assert_eq!(ids.irreducible_count, 10);
        assert_eq!(ids.symmetric_count, 8);
        assert_eq!(ids.ltg_implementable_count, 14);
        // Constants jointly span exactly one bit.
        let constants = &report.groups[0];
        assert_eq!(constants.union_count, 2);
        assert!((constants.capacity_bits - 1.0).abs() < 1e-12);
    }
    let n2 = table2_report(2).unwrap();
    for row in &n2.rows {
        let expected = match row.name.as_str() {
            "F" | "T" => 1,
            "p" | "q" | "not_p" | "not_q" => 14,
            _ => 16,
        };
        assert_eq!(row.exact_count, expected, "{}", row.name);
    }
    assert!(matches!(
        table2_report(4),
        Err(GatingError::ClosureArityLimit { .. })
    ));
}

#[test]
fn product_closure_saturates() {
    let pc2 = product_closure(2, 1, 4).unwrap();
    let sizes: Vec<usize> = pc2.stages.iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![14, 16]);
    assert_eq!(pc2.saturated_at, Some(2));

    let pc3 = product_closure(3, 1, 4).unwrap();
    let sizes: Vec<usize> = pc3.stages.iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![104, 254, 256]);
    assert_eq!(pc3.saturated_at, Some(3));
    // Stages are nested: padding with the constant-true gate keeps every
    // shorter product reachable.
    for pair in pc3.stages.windows(2) {
        assert!(pair[0].is_subset_of(&pair[1]));
    }
}

#[test]
fn synaptic_gating_identities_hold_at_n2_all_kind_pairs() {
    let kinds = [ThresholdKind::Sign, ThresholdKind::Heaviside];
    for f_kind in kinds {
        for g_kind in kinds {
            let report = full_synaptic_gating_check(2, 1, (f_kind, g_kind)).unwrap();
            assert!(
                report.verdict,
                "{f_kind:?}/{g_kind:?}: {:?}",
                report.counterexamples.first()
            );
            assert_eq!(report.pairs_checked, 14 * 14);
            assert_eq!(report.points_checked, 14 * 14 * 4);
            assert!(report.counterexamples.is_empty());
        }
    }
}

#[test]
fn synaptic_gating_identity_holds_at_n3_sign_sign() {
    let report =
        full_synaptic_gating_check(3, 1, (ThresholdKind::Sign, ThresholdKind::Sign)).unwrap();
    assert!(report.verdict);
    assert_eq!(report.pairs_checked, 104 * 104);
}

#[test]
fn single_weight_gating_stays_between_base_and_pair_bounds() {
    for j in [1usize, 2] {
        let report = single_weight_gating_class(2, j).unwrap();
        assert!(report.verdict);
        assert!(report.contains_base);
        assert_eq!(report.lower, 14);
        assert_eq!(report.upper, 14 * 14);
        let size = report.class.len() as u64;
        assert!(size >= report.lower && size <= report.upper);
        assert!(report.swept_pairs > 0);
    }
    assert!(matches!(
        single_weight_gating_class(2, 3),
        Err(GatingError::GatedIndexOutOfRange { .. })
    ));
}

#[test]
fn layer_gating_exact_count_has_multiplex_witnesses() {
    let report = layer_output_gating_class(2, 2).unwrap();
    assert_eq!(report.exact, 16);
    assert_eq!(report.witness_lower, 16);
    assert_eq!(report.upper, 3584);
    assert!(report.witnesses_all_members);
    assert!(report.contains_ungated);
    assert!(report.verdict);
    assert!(matches!(
        layer_output_gating_class(3, 2),
        Err(GatingError::ExactModeExceeded { .. })
    ));
}

#[test]
fn layer_gating_sampling_is_a_lower_bound() {
    let exact = layer_output_gating_class(2, 2).unwrap();
    let sampled = layer_output_gating_sampled(2, 2, 400, 0).unwrap();
    assert!(sampled.lower_bound_only);
    assert!(sampled.distinct_found <= exact.exact);
    assert!(sampled.distinct_found > 0);
    // Larger arity is allowed only in sampling mode.
    let wide = layer_output_gating_sampled(3, 3, 200, 1).unwrap();
    assert!(wide.distinct_found <= 200);
}

#[test]
fn intersection_witnesses_embed_in_every_composed_class() {
    let report = intersection_witnesses(2, 1, 1).unwrap();
    assert_eq!(report.expected_count, 16);
    assert_eq!(report.witnesses.len(), 16);
    assert!(report.injective);
    assert!(report.embeddings_verified);
    assert_eq!(report.per_operator.len(), 10);
    assert!(report.per_operator.values().all(|&ok| ok));
    assert!(report.verdict);
    assert!(matches!(
        intersection_witnesses(1, 1, 1),
        Err(GatingError::IntersectionArityLimit { .. })
    ));
}

#[test]
fn degenerate_and_invalid_specs_are_rejected() {
    let op = BooleanOpK::and2();
    assert!(matches!(
        CompositionSpec::new(op.clone(), vec![1], 2, Encoding::PlusMinus),
        Err(GatingError::DegreeCountMismatch { .. })
    ));
    let spec = CompositionSpec::new(op, vec![1, 1], 1, Encoding::PlusMinus).unwrap();
    assert!(matches!(
        verify_composition_bounds(&spec),
        Err(GatingError::ArityBelowOperator { .. })
    ));
    let projection = BooleanOpK::binary_by_name("p").unwrap();
    let spec = CompositionSpec::new(projection, vec![1, 1], 2, Encoding::PlusMinus).unwrap();
    assert!(matches!(
        verify_composition_bounds(&spec),
        Err(GatingError::ReducibleOperator)
    ));
}
