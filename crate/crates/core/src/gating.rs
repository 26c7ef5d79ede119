//! Gated composition classes and exact verification of their capacity
//! bounds.
//!
//! For a Boolean operator B and degree bounds d1..dk, the composition class
//! is the set of functions B(f1,...,fk) with each fj a degree-dj threshold
//! function. Everything here is counted over distinct truth tables, computed
//! from enumerated base classes with margin certificates, so the sandwich
//! bounds, set identities, and gating equivalences are checked exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::boolfn::{BoolFnError, BooleanOpK, Encoding, FunctionClass, TruthTable};
use crate::constructs::{composition_embedding, ConstructError};
use crate::rational::{rat, Rat};
use crate::rng::SplitMix64;
use crate::threshold::{enumerate_class, PolyWeights, ThresholdError, ThresholdKind};

#[derive(Debug, Error)]
pub enum GatingError {
    #[error(transparent)]
    Bool(#[from] BoolFnError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("operator takes {k} arguments but {degrees} degree bounds were given")]
    DegreeCountMismatch { k: usize, degrees: usize },
    #[error("the sandwich bounds require an irreducible operator")]
    ReducibleOperator,
    #[error("arity {n} is below the operator arity {k}")]
    ArityBelowOperator { n: usize, k: usize },
    #[error("exhaustive mode is capped at n <= {max_n}, m <= {max_m} (got n={n}, m={m}); use sampling beyond that")]
    ExactModeExceeded {
        n: usize,
        m: usize,
        max_n: usize,
        max_m: usize,
    },
    #[error("exhaustive closure search is capped at n <= {max}, got {n}")]
    ClosureArityLimit { n: usize, max: usize },
    #[error("gated weight index {j} out of range 1..={n}")]
    GatedIndexOutOfRange { j: usize, n: usize },
    #[error("intersection witnesses require 2 <= n <= {max}, got {n}")]
    IntersectionArityLimit { n: usize, max: usize },
}

/// A gated composition class B(f1,...,fk) over degree-bounded threshold
/// functions of n variables.
#[derive(Debug, Clone)]
pub struct CompositionSpec {
    pub b: BooleanOpK,
    pub degrees: Vec<usize>,
    pub n: usize,
    pub encoding: Encoding,
}

impl CompositionSpec {
    pub fn new(
        b: BooleanOpK,
        degrees: Vec<usize>,
        n: usize,
        encoding: Encoding,
    ) -> Result<Self, GatingError> {
        if b.arity() != degrees.len() {
            return Err(GatingError::DegreeCountMismatch {
                k: b.arity(),
                degrees: degrees.len(),
            });
        }
        Ok(Self {
            b,
            degrees,
            n,
            encoding,
        })
    }
}

/// Exact count of a composition class between its product bounds.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub lower: u64,
    pub exact: u64,
    pub upper: u64,
    pub verdict: bool,
}

/// Applies operator `b` pointwise to packed argument tables (n <= 6).
fn compose_masks(b: &BooleanOpK, arg_masks: &[u64], full: u64) -> u64 {
    let mut out = 0u64;
    for (t, &set) in b.table().iter().enumerate() {
        if !set {
            continue;
        }
        let mut term = full;
        for (i, &mask) in arg_masks.iter().enumerate() {
            term &= if t >> i & 1 == 1 { mask } else { !mask };
        }
        out |= term;
    }
    out & full
}

fn full_mask(n: usize) -> u64 {
    let points = 1usize << n;
    if points == 64 {
        u64::MAX
    } else {
        (1u64 << points) - 1
    }
}

fn class_masks(class: &FunctionClass) -> Vec<u64> {
    class
        .iter()
        .map(|t| t.mask().expect("composition classes are capped at n <= 6"))
        .collect()
}

fn class_from_masks(
    n: usize,
    encoding: Encoding,
    masks: &BTreeSet<u64>,
) -> Result<FunctionClass, GatingError> {
    let mut class = FunctionClass::new(n, encoding)?;
    for &mask in masks {
        class.insert(TruthTable::from_mask(n, encoding, mask)?)?;
    }
    Ok(class)
}

/// Deduplicated set {B(f1,...,fk)} over all tuples from the base classes.
pub fn compose_class_from(
    spec: &CompositionSpec,
    bases: &[&FunctionClass],
) -> Result<FunctionClass, GatingError> {
    if bases.len() != spec.b.arity() {
        return Err(GatingError::DegreeCountMismatch {
            k: spec.b.arity(),
            degrees: bases.len(),
        });
    }
    for base in bases {
        if base.n() != spec.n {
            return Err(GatingError::Bool(BoolFnError::ArityMismatch {
                expected: spec.n,
                found: base.n(),
            }));
        }
    }
    let full = full_mask(spec.n);
    let base_masks: Vec<Vec<u64>> = bases.iter().map(|c| class_masks(c)).collect();
    let k = base_masks.len();
    let masks: BTreeSet<u64> = if k == 0 {
        BTreeSet::from([compose_masks(&spec.b, &[], full)])
    } else {
        base_masks[0]
            .par_iter()
            .map(|&first| {
                let mut local = BTreeSet::new();
                let mut arg_masks = vec![0u64; k];
                arg_masks[0] = first;
                let mut odometer = vec![0usize; k];
                loop {
                    for slot in 1..k {
                        arg_masks[slot] = base_masks[slot][odometer[slot]];
                    }
                    local.insert(compose_masks(&spec.b, &arg_masks, full));
                    // Advance positions 1..k; position 0 is the parallel axis.
                    let mut pos = k - 1;
                    loop {
                        if pos == 0 {
                            return local;
                        }
                        odometer[pos] += 1;
                        if odometer[pos] < base_masks[pos].len() {
                            break;
                        }
                        odometer[pos] = 0;
                        pos -= 1;
                    }
                }
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            })
    };
    class_from_masks(spec.n, spec.encoding, &masks)
}

/// Enumerates base classes for `spec` and composes them.
pub fn compose_class(spec: &CompositionSpec) -> Result<FunctionClass, GatingError> {
    let mut enumerated: Vec<FunctionClass> = Vec::with_capacity(spec.degrees.len());
    for &d in &spec.degrees {
        enumerated.push(enumerate_class(spec.n, d)?.class);
    }
    let refs: Vec<&FunctionClass> = enumerated.iter().collect();
    compose_class_from(spec, &refs)
}

/// Verifies the sandwich bounds
/// prod |T(n-k+1;dj)| <= |T_B(n;d1..dk)| <= prod |T(n;dj)|
/// for an irreducible operator, all three quantities computed exactly.
pub fn verify_composition_bounds(spec: &CompositionSpec) -> Result<BoundsReport, GatingError> {
    if !spec.b.is_irreducible() {
        return Err(GatingError::ReducibleOperator);
    }
    let k = spec.b.arity();
    if spec.n < k {
        return Err(GatingError::ArityBelowOperator { n: spec.n, k });
    }
    let reduced_n = spec.n - k + 1;
    let mut lower = 1u64;
    let mut upper = 1u64;
    let mut enumerated: Vec<FunctionClass> = Vec::with_capacity(k);
    for &d in &spec.degrees {
        lower *= enumerate_class(reduced_n, d)?.class.len() as u64;
        let base = enumerate_class(spec.n, d)?.class;
        upper *= base.len() as u64;
        enumerated.push(base);
    }
    let refs: Vec<&FunctionClass> = enumerated.iter().collect();
    let exact = compose_class_from(spec, &refs)?.len() as u64;
    Ok(BoundsReport {
        lower,
        exact,
        upper,
        verdict: lower <= exact && exact <= upper,
    })
}

/// One row of the binary-operator survey.
#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub name: String,
    pub irreducible: bool,
    pub symmetric: bool,
    pub ltg_implementable: bool,
    pub exact_count: u64,
    pub capacity_bits: f64,
}

/// A grouped row: the union of the classes of several operators, matching
/// the usual grouped presentation (the two constants jointly span one bit).
#[derive(Debug, Clone, Serialize)]
pub struct Table2Group {
    pub names: Vec<String>,
    pub union_count: u64,
    pub capacity_bits: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Identities {
    pub and_or_counts_equal: bool,
    pub xor_class_closed_under_negation: bool,
    pub projection_classes_equal_base: bool,
    pub irreducible_count: usize,
    pub symmetric_count: usize,
    pub ltg_implementable_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Report {
    pub n: usize,
    pub rows: Vec<Table2Row>,
    pub groups: Vec<Table2Group>,
    pub identities: Table2Identities,
}

/// Surveys all 16 binary operators at arity n: per-operator properties and
/// exact composed-class counts, the grouped union rows, and the set
/// identities that must hold.
pub fn table2_report(n: usize) -> Result<Table2Report, GatingError> {
    const MAX_N: usize = 3;
    if n > MAX_N {
        return Err(GatingError::ClosureArityLimit { n, max: MAX_N });
    }
    let base = enumerate_class(n, 1)?.class;
    let full = full_mask(n);
    let ops = BooleanOpK::all_binary();
    let mut rows = Vec::with_capacity(ops.len());
    let mut class_masks_by_name: BTreeMap<&'static str, BTreeSet<u64>> = BTreeMap::new();
    for (name, op) in &ops {
        let spec = CompositionSpec::new(op.clone(), vec![1, 1], n, Encoding::PlusMinus)?;
        let class = compose_class_from(&spec, &[&base, &base])?;
        let masks: BTreeSet<u64> = class_masks(&class).into_iter().collect();
        let ltg_implementable =
            crate::threshold::realize(&op.as_truth_table(Encoding::PlusMinus), 1)?.is_some();
        rows.push(Table2Row {
            name: (*name).to_string(),
            irreducible: op.is_irreducible(),
            symmetric: op.is_symmetric(),
            ltg_implementable,
            exact_count: masks.len() as u64,
            capacity_bits: (masks.len() as f64).log2(),
        });
        class_masks_by_name.insert(*name, masks);
    }

    let group_layout: [&[&str]; 6] = [
        &["F", "T"],
        &["p", "q"],
        &["not_p", "not_q"],
        &["and", "nor", "p_and_not_q", "not_p_and_q"],
        &["or", "nand", "p_or_not_q", "not_p_or_q"],
        &["xor", "nxor"],
    ];
    let groups = group_layout
        .iter()
        .map(|names| {
            let mut union: BTreeSet<u64> = BTreeSet::new();
            for name in *names {
                union.extend(class_masks_by_name[name].iter().copied());
            }
            Table2Group {
                names: names.iter().map(|s| s.to_string()).collect(),
                union_count: union.len() as u64,
                capacity_bits: (union.len() as f64).log2(),
            }
        })
        .collect();

    let base_masks: BTreeSet<u64> = class_masks(&base).into_iter().collect();
    let xor_masks = &class_masks_by_name["xor"];
    let xor_negated: BTreeSet<u64> = xor_masks.iter().map(|m| !m & full).collect();
    let identities = Table2Identities {
        and_or_counts_equal: class_masks_by_name["and"].len() == class_masks_by_name["or"].len(),
        xor_class_closed_under_negation: xor_negated == *xor_masks,
        projection_classes_equal_base: class_masks_by_name["p"] == base_masks
            && class_masks_by_name["q"] == base_masks,
        irreducible_count: rows.iter().filter(|r| r.irreducible).count(),
        symmetric_count: rows.iter().filter(|r| r.symmetric).count(),
        ltg_implementable_count: rows.iter().filter(|r| r.ltg_implementable).count(),
    };
    Ok(Table2Report {
        n,
        rows,
        groups,
        identities,
    })
}

/// Classes of pointwise -/+ products of up to 1, 2, ... gates, reported
/// until `max_factors` or until a fixpoint is reached, with the smallest
/// count saturating the full function space (if any).
#[derive(Debug, Clone)]
pub struct ProductClosure {
    pub n: usize,
    pub d: usize,
    pub stages: Vec<FunctionClass>,
    pub saturated_at: Option<usize>,
}

pub fn product_closure(n: usize, d: usize, max_factors: usize) -> Result<ProductClosure, GatingError> {
    const MAX_N: usize = 3;
    if n > MAX_N {
        return Err(GatingError::ClosureArityLimit { n, max: MAX_N });
    }
    let full = full_mask(n);
    let total = (1u64 << (1usize << n)) as usize;
    let base: BTreeSet<u64> = class_masks(&enumerate_class(n, d)?.class).into_iter().collect();
    let mut stages: Vec<BTreeSet<u64>> = vec![base.clone()];
    let mut saturated_at = if base.len() == total { Some(1) } else { None };
    while stages.len() < max_factors {
        let last = stages.last().expect("nonempty");
        let mut next = BTreeSet::new();
        for &a in last {
            for &b in &base {
                // Pointwise -/+ product agrees where signs agree: NXOR.
                next.insert(!(a ^ b) & full);
            }
        }
        let fixpoint = next == *last;
        let m = stages.len() + 1;
        if saturated_at.is_none() && next.len() == total {
            saturated_at = Some(m);
        }
        if fixpoint {
            break;
        }
        stages.push(next);
    }
    let stages = stages
        .iter()
        .map(|masks| class_from_masks(n, Encoding::PlusMinus, masks))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProductClosure {
        n,
        d,
        stages,
        saturated_at,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SynapticCounterexample {
    pub f: String,
    pub g: String,
    pub input_index: usize,
    pub got: i8,
    pub expected: i8,
}

/// Outcome of checking that gating every synaptic weight of f by g computes
/// the product semantics, pair by pair and point by point.
#[derive(Debug, Clone, Serialize)]
pub struct SynapticGatingReport {
    pub f_kind: ThresholdKind,
    pub g_kind: ThresholdKind,
    pub n: usize,
    pub d: usize,
    pub pairs_checked: u64,
    pub points_checked: u64,
    pub counterexamples: Vec<SynapticCounterexample>,
    pub verdict: bool,
}

/// For every pair (f, g) from the enumerated class, evaluates the gated-sum
/// neuron S(x) = g(x) * p_f(x) through f's output rule and compares it with
/// the expected product semantics:
///
/// - Sign/Sign: f_g = f * g on -/+ values.
/// - Heaviside/Heaviside: f_g = f * g on 0/1 values (H(0) = 0 makes the
///   g = 0 case exact).
/// - Heaviside f, Sign g: g = -1 flips the output, f_g = 1 - f.
/// - Sign f, Heaviside g: g = 0 zeroes the sum; with sign(0) read as 0 the
///   output is the three-valued product f * g.
pub fn full_synaptic_gating_check(
    n: usize,
    d: usize,
    kinds: (ThresholdKind, ThresholdKind),
) -> Result<SynapticGatingReport, GatingError> {
    let (f_kind, g_kind) = kinds;
    let enumerated = enumerate_class(n, d)?;
    let members: Vec<(&TruthTable, &PolyWeights)> = enumerated.certificates.iter().collect();
    let points = 1usize << n;
    // p-values of every certificate, precomputed once.
    let p_values: Vec<Vec<Rat>> = members
        .iter()
        .map(|(_, w)| (0..points).map(|i| w.eval_index(i)).collect())
        .collect();

    let mut counterexamples = Vec::new();
    let mut pairs = 0u64;
    for (fi, (f_table, _)) in members.iter().enumerate() {
        for (g_table, _) in &members {
            pairs += 1;
            for x in 0..points {
                let g_val: i8 = match g_kind {
                    ThresholdKind::Sign => {
                        if g_table.bit(x) {
                            1
                        } else {
                            -1
                        }
                    }
                    ThresholdKind::Heaviside => g_table.bit(x) as i8,
                };
                // S(x) = g(x) * p_f(x); only its sign matters and p_f never
                // vanishes, so the sign of S is g_val * sign(p_f).
                let p_sign: i8 = if p_values[fi][x].is_positive() { 1 } else { -1 };
                let s_sign = g_val * p_sign;
                let got: i8 = match f_kind {
                    // sign with the three-valued reading sign(0) = 0.
                    ThresholdKind::Sign => s_sign.signum(),
                    ThresholdKind::Heaviside => (s_sign > 0) as i8,
                };
                let f_val: i8 = match f_kind {
                    ThresholdKind::Sign => {
                        if f_table.bit(x) {
                            1
                        } else {
                            -1
                        }
                    }
                    ThresholdKind::Heaviside => f_table.bit(x) as i8,
                };
                let expected: i8 = match (f_kind, g_kind) {
                    (ThresholdKind::Sign, ThresholdKind::Sign) => f_val * g_val,
                    (ThresholdKind::Heaviside, ThresholdKind::Heaviside) => f_val * g_val,
                    (ThresholdKind::Heaviside, ThresholdKind::Sign) => {
                        if g_val > 0 {
                            f_val
                        } else {
                            1 - f_val
                        }
                    }
                    (ThresholdKind::Sign, ThresholdKind::Heaviside) => f_val * g_val,
                };
                if got != expected && counterexamples.len() < 16 {
                    counterexamples.push(SynapticCounterexample {
                        f: f_table.canonical_text(),
                        g: g_table.canonical_text(),
                        input_index: x,
                        got,
                        expected,
                    });
                }
            }
        }
    }
    Ok(SynapticGatingReport {
        f_kind,
        g_kind,
        n,
        d,
        pairs_checked: pairs,
        points_checked: pairs * points as u64,
        verdict: counterexamples.is_empty(),
        counterexamples,
    })
}

/// Class swept by gating a single weight, with its containment and
/// counting checks.
#[derive(Debug, Clone)]
pub struct SingleWeightGatingReport {
    pub n: usize,
    pub gated_index: usize,
    pub class: FunctionClass,
    pub swept_pairs: u64,
    pub skipped_ties: u64,
    pub contains_base: bool,
    pub lower: u64,
    pub upper: u64,
    pub verdict: bool,
}

/// Sweeps x -> sign(w0 + sum_{i != j} wi xi + g(x) wj xj) over enumerated
/// certificate weights plus all integer weight vectors with entries in
/// [-3, 3], and every gating function g from the base class. Pairs whose
/// gated polynomial hits zero carry no strict certificate and are skipped
/// (counted). The swept class is a certified lower bound; the counting
/// upper bound is |base|^2 (one base function for the weights, one for the
/// gate).
pub fn single_weight_gating_class(
    n: usize,
    gated_index: usize,
) -> Result<SingleWeightGatingReport, GatingError> {
    const MAX_N: usize = 3;
    if n > MAX_N {
        return Err(GatingError::ClosureArityLimit { n, max: MAX_N });
    }
    if gated_index == 0 || gated_index > n {
        return Err(GatingError::GatedIndexOutOfRange { j: gated_index, n });
    }
    let j = gated_index;
    let enumerated = enumerate_class(n, 1)?;
    let base = &enumerated.class;
    let points = 1usize << n;

    // Weight vectors: (bias, w1..wn) as exact rationals.
    let mut weight_vectors: Vec<Vec<Rat>> = Vec::new();
    for w in enumerated.certificates.values() {
        let mut v = Vec::with_capacity(n + 1);
        v.push(w.bias());
        for i in 1..=n {
            v.push(w.coeff(&[i as u32]));
        }
        weight_vectors.push(v);
    }
    const BOUND: i64 = 3;
    let width = (2 * BOUND + 1) as u64;
    let combos = width.pow(n as u32 + 1);
    for code in 0..combos {
        let mut rem = code;
        let mut v = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            v.push(rat((rem % width) as i64 - BOUND));
            rem /= width;
        }
        weight_vectors.push(v);
    }

    let g_values: Vec<Vec<i8>> = base
        .iter()
        .map(|g| (0..points).map(|x| if g.bit(x) { 1 } else { -1 }).collect())
        .collect();

    let mut masks: BTreeSet<u64> = BTreeSet::new();
    let mut swept = 0u64;
    let mut skipped = 0u64;
    for w in &weight_vectors {
        // Ungated polynomial values p(x) and the gated coordinate's
        // contribution wj * xj at each point.
        let p_vals: Vec<Rat> = (0..points)
            .map(|x| {
                let mut acc = w[0].clone();
                for i in 1..=n {
                    if x >> (i - 1) & 1 == 1 {
                        acc += &w[i];
                    }
                }
                acc
            })
            .collect();
        for g in &g_values {
            swept += 1;
            let mut mask = 0u64;
            let mut tied = false;
            for x in 0..points {
                let mut value = p_vals[x].clone();
                if x >> (j - 1) & 1 == 1 && g[x] < 0 {
                    // g = -1 turns +wj xj into -wj xj.
                    value -= &w[j] + &w[j];
                }
                if value.is_positive() {
                    mask |= 1u64 << x;
                } else if !value.is_negative() {
                    tied = true;
                    break;
                }
            }
            if tied {
                skipped += 1;
            } else {
                masks.insert(mask);
            }
        }
    }

    let class = class_from_masks(n, Encoding::PlusMinus, &masks)?;
    let contains_base = base.is_subset_of(&class);
    let lower = base.len() as u64;
    let upper = (base.len() as u64) * (base.len() as u64);
    let exact = class.len() as u64;
    Ok(SingleWeightGatingReport {
        n,
        gated_index,
        swept_pairs: swept,
        skipped_ties: skipped,
        contains_base,
        lower,
        upper,
        verdict: contains_base && lower <= exact && exact <= upper,
        class,
    })
}

/// Exact census of one gated hidden layer: m hidden sign gates, each
/// output-gated by another sign gate, feeding one final sign gate.
#[derive(Debug, Clone)]
pub struct LayerGatingReport {
    pub n: usize,
    pub m: usize,
    pub class: FunctionClass,
    pub exact: u64,
    /// Number of distinct multiplexing witnesses (selector bits address one
    /// of m functions of the remaining inputs; all realized in the class
    /// with mask -1 and an OR readout).
    pub witness_lower: u64,
    /// Counting bound: distinct hidden-layer maps times final gates.
    pub upper: u64,
    pub witnesses_all_members: bool,
    pub contains_ungated: bool,
    pub verdict: bool,
}

const LAYER_MAX_N: usize = 2;
const LAYER_MAX_M: usize = 2;

/// Enumerates the layer-gated class exactly at (n <= 2, m <= 2): hidden
/// value l is h_l(x) * g_l(x) with h_l, g_l sign gates (so the gated pair
/// ranges over the product-composition class), and the output is any sign
/// gate of the m hidden values.
pub fn layer_output_gating_class(n: usize, m: usize) -> Result<LayerGatingReport, GatingError> {
    if n > LAYER_MAX_N || m > LAYER_MAX_M || m == 0 {
        return Err(GatingError::ExactModeExceeded {
            n,
            m,
            max_n: LAYER_MAX_N,
            max_m: LAYER_MAX_M,
        });
    }
    let full = full_mask(n);
    let points = 1usize << n;
    let base = enumerate_class(n, 1)?.class;
    let base_masks = class_masks(&base);

    // Gated-pair values: the products h * g over all base pairs.
    let mut pair_masks: BTreeSet<u64> = BTreeSet::new();
    for &h in &base_masks {
        for &g in &base_masks {
            pair_masks.insert(!(h ^ g) & full);
        }
    }
    let pair_masks: Vec<u64> = pair_masks.into_iter().collect();

    let final_gates = enumerate_class(m, 1)?.class;
    let final_masks = class_masks(&final_gates);

    // Hidden maps are m-tuples of gated-pair tables; compose each with every
    // final gate.
    let mut composed: BTreeSet<u64> = BTreeSet::new();
    let mut hidden_maps = 0u64;
    let mut tuple = vec![0usize; m];
    'tuples: loop {
        hidden_maps += 1;
        for &phi in &final_masks {
            let mut out = 0u64;
            for x in 0..points {
                let mut idx = 0usize;
                for (l, &ti) in tuple.iter().enumerate() {
                    if pair_masks[ti] >> x & 1 == 1 {
                        idx |= 1 << l;
                    }
                }
                if phi >> idx & 1 == 1 {
                    out |= 1u64 << x;
                }
            }
            composed.insert(out);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                break 'tuples;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < pair_masks.len() {
                break;
            }
            tuple[pos] = 0;
        }
    }

    // Multiplexing witnesses: ceil(log2 m) selector bits (the low inputs)
    // address one of m functions of the remaining inputs.
    let selector_bits = (m as f64).log2().ceil() as usize;
    let data_bits = n - selector_bits;
    let data_base = enumerate_class(data_bits.max(1).min(n), 1)?.class;
    let data_masks = if data_bits == 0 {
        vec![0b0u64, 0b1u64]
    } else {
        class_masks(&data_base)
    };
    let mut witness_masks: BTreeSet<u64> = BTreeSet::new();
    let mut choice = vec![0usize; m];
    'witnesses: loop {
        let mut mask = 0u64;
        for x in 0..points {
            let sel = x & ((1 << selector_bits) - 1);
            let data = x >> selector_bits;
            let attended = if sel < m { sel } else { m - 1 };
            if data_masks[choice[attended]] >> data & 1 == 1 {
                mask |= 1u64 << x;
            }
        }
        witness_masks.insert(mask);
        let mut pos = m;
        loop {
            if pos == 0 {
                break 'witnesses;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < data_masks.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
    let witnesses_all_members = witness_masks.iter().all(|w| composed.contains(w));

    // Forcing every gate to the constant +1 recovers the ungated layer.
    let true_mask = full;
    let mut ungated: BTreeSet<u64> = BTreeSet::new();
    let mut tuple = vec![0usize; m];
    'ungated: loop {
        for &phi in &final_masks {
            let mut out = 0u64;
            for x in 0..points {
                let mut idx = 0usize;
                for (l, &ti) in tuple.iter().enumerate() {
                    let hidden = !(base_masks[ti] ^ true_mask) & full;
                    if hidden >> x & 1 == 1 {
                        idx |= 1 << l;
                    }
                }
                if phi >> idx & 1 == 1 {
                    out |= 1u64 << x;
                }
            }
            ungated.insert(out);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                break 'ungated;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < base_masks.len() {
                break;
            }
            tuple[pos] = 0;
        }
    }
    let contains_ungated = ungated.iter().all(|u| composed.contains(u));

    let exact = composed.len() as u64;
    let witness_lower = witness_masks.len() as u64;
    let upper = hidden_maps * final_masks.len() as u64;
    let class = class_from_masks(n, Encoding::PlusMinus, &composed)?;
    Ok(LayerGatingReport {
        n,
        m,
        exact,
        witness_lower,
        upper,
        witnesses_all_members,
        contains_ungated,
        verdict: witness_lower <= exact
            && exact <= upper
            && witnesses_all_members
            && contains_ungated,
        class,
    })
}

/// Sampled lower bound on the layer-gated class beyond exact-mode limits.
#[derive(Debug, Clone, Serialize)]
pub struct LayerGatingSample {
    pub n: usize,
    pub m: usize,
    pub samples: u64,
    pub distinct_found: u64,
    /// Lower bound only: the sampled census never claims exact counts.
    pub lower_bound_only: bool,
}

pub fn layer_output_gating_sampled(
    n: usize,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<LayerGatingSample, GatingError> {
    if n > 6 {
        return Err(GatingError::ClosureArityLimit { n, max: 6 });
    }
    let points = 1usize << n;
    let mut rng = SplitMix64::new(seed).fork(0x1a7e);
    let mut found: BTreeSet<u64> = BTreeSet::new();
    let mut drawn = 0u64;
    let draw_table = |rng: &mut SplitMix64, vars: usize| -> u64 {
        // Random integer-weight sign gate with ties rejected.
        loop {
            let bias = rng.next_signed(8);
            let w: Vec<i64> = (0..vars).map(|_| rng.next_signed(8)).collect();
            let mut mask = 0u64;
            let mut tied = false;
            for x in 0..1usize << vars {
                let mut acc = bias;
                for (i, wi) in w.iter().enumerate() {
                    if x >> i & 1 == 1 {
                        acc += wi;
                    }
                }
                if acc == 0 {
                    tied = true;
                    break;
                }
                if acc > 0 {
                    mask |= 1u64 << x;
                }
            }
            if !tied {
                return mask;
            }
        }
    };
    while drawn < samples {
        drawn += 1;
        let hidden: Vec<u64> = (0..m)
            .map(|_| {
                let h = draw_table(&mut rng, n);
                let g = draw_table(&mut rng, n);
                !(h ^ g) & full_mask(n)
            })
            .collect();
        let phi = draw_table(&mut rng, m);
        let mut out = 0u64;
        for x in 0..points {
            let mut idx = 0usize;
            for (l, hmask) in hidden.iter().enumerate() {
                if hmask >> x & 1 == 1 {
                    idx |= 1 << l;
                }
            }
            if phi >> idx & 1 == 1 {
                out |= 1u64 << x;
            }
        }
        found.insert(out);
    }
    Ok(LayerGatingSample {
        n,
        m,
        samples,
        distinct_found: found.len() as u64,
        lower_bound_only: true,
    })
}

/// Witness family living in every irreducible binary composition class.
#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub n: usize,
    pub d0: usize,
    pub d1: usize,
    pub witnesses: FunctionClass,
    pub expected_count: u64,
    pub injective: bool,
    /// Operator name -> all witnesses found in that composition class by
    /// explicit pair search.
    pub per_operator: BTreeMap<String, bool>,
    /// Constructive route: the embedding pipeline rebuilt each witness and
    /// its defining identity held.
    pub embeddings_verified: bool,
    pub verdict: bool,
}

/// Builds the |T(n-1;d0)| * |T(n-1;d1)| functions whose first-coordinate
/// slices are (f0, f1) and verifies, for all ten irreducible binary
/// operators, both membership routes: explicit pair search over the base
/// classes, and the constructive composition embedding.
pub fn intersection_witnesses(
    n: usize,
    d0: usize,
    d1: usize,
) -> Result<IntersectionReport, GatingError> {
    const MAX_N: usize = 3;
    if !(2..=MAX_N).contains(&n) {
        return Err(GatingError::IntersectionArityLimit { n, max: MAX_N });
    }
    let left = enumerate_class(n - 1, d0)?;
    let right = enumerate_class(n - 1, d1)?;
    let slice_points = 1usize << (n - 1);

    // Composed classes for the membership search, one per operator.
    let base0 = enumerate_class(n, d0)?.class;
    let base1 = enumerate_class(n, d1)?.class;
    let mut composed: BTreeMap<&'static str, BTreeSet<u64>> = BTreeMap::new();
    for (name, op) in BooleanOpK::irreducible_binary() {
        let spec = CompositionSpec::new(op, vec![d0, d1], n, Encoding::PlusMinus)?;
        let class = compose_class_from(&spec, &[&base0, &base1])?;
        composed.insert(name, class_masks(&class).into_iter().collect());
    }

    let mut witnesses = FunctionClass::new(n, Encoding::PlusMinus)?;
    let mut per_operator: BTreeMap<String, bool> =
        composed.keys().map(|k| (k.to_string(), true)).collect();
    let mut embeddings_verified = true;
    for (f0, w0) in &left.certificates {
        for (f1, w1) in &right.certificates {
            // Interleave: index = z + 2 * x with z the first coordinate.
            let mut mask = 0u64;
            for x in 0..slice_points {
                if f0.bit(x) {
                    mask |= 1u64 << (2 * x);
                }
                if f1.bit(x) {
                    mask |= 1u64 << (2 * x + 1);
                }
            }
            let witness = TruthTable::from_mask(n, Encoding::PlusMinus, mask)?;
            witnesses.insert(witness.clone())?;
            for (name, class_masks) in &composed {
                if !class_masks.contains(&mask) {
                    per_operator.insert(name.to_string(), false);
                }
            }
            // Constructive route: each irreducible operator embeds the pair.
            for (_, op) in BooleanOpK::irreducible_binary() {
                let tuple = composition_embedding(&op, &[w0.clone(), w1.clone()])?;
                let rebuilt = tuple.composed_table()?;
                if rebuilt != witness {
                    embeddings_verified = false;
                }
            }
        }
    }

    let expected_count = (left.class.len() * right.class.len()) as u64;
    let injective = witnesses.len() as u64 == expected_count;
    let members_everywhere = per_operator.values().all(|&v| v);
    Ok(IntersectionReport {
        n,
        d0,
        d1,
        expected_count,
        injective,
        embeddings_verified,
        verdict: injective && members_everywhere && embeddings_verified,
        per_operator,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::combine;

    #[test]
    fn nxor_composition_contains_parity() {
        let spec =
            CompositionSpec::new(BooleanOpK::nxor2(), vec![1, 1], 2, Encoding::PlusMinus).unwrap();
        let class = compose_class(&spec).unwrap();
        let xor = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] ^ x[1]).unwrap();
        assert!(class.contains(&xor));
        assert_eq!(class.len(), 16);
    }

    #[test]
    fn projection_composition_equals_base() {
        let projection = BooleanOpK::from_fn(2, |a| a[0]);
        let spec = CompositionSpec::new(projection, vec![1, 1], 2, Encoding::PlusMinus).unwrap();
        let class = compose_class(&spec).unwrap();
        let base = enumerate_class(2, 1).unwrap().class;
        assert_eq!(class, base);
    }

    #[test]
    fn and_composition_bounds_at_n2() {
        let spec =
            CompositionSpec::new(BooleanOpK::and2(), vec![1, 1], 2, Encoding::PlusMinus).unwrap();
        let report = verify_composition_bounds(&spec).unwrap();
        assert_eq!(report.lower, 16);
        assert_eq!(report.upper, 196);
        assert!(report.verdict);
        assert!((16..=196).contains(&report.exact));
    }

    #[test]
    fn reducible_operators_are_rejected() {
        let projection = BooleanOpK::from_fn(2, |a| a[0]);
        let spec = CompositionSpec::new(projection, vec![1, 1], 2, Encoding::PlusMinus).unwrap();
        assert!(matches!(
            verify_composition_bounds(&spec),
            Err(GatingError::ReducibleOperator)
        ));
    }

    #[test]
    fn composition_size_never_exceeds_tuple_count() {
        for (_, op) in BooleanOpK::all_binary() {
            let spec = CompositionSpec::new(op, vec![1, 1], 2, Encoding::PlusMinus).unwrap();
            let class = compose_class(&spec).unwrap();
            assert!(class.len() <= 14 * 14);
        }
    }

    #[test]
    fn table2_identities_hold_at_n2() {
        let report = table2_report(2).unwrap();
        assert_eq!(report.rows.len(), 16);
        assert!(report.identities.and_or_counts_equal);
        assert!(report.identities.xor_class_closed_under_negation);
        assert!(report.identities.projection_classes_equal_base);
        assert_eq!(report.identities.irreducible_count, 10);
        assert_eq!(report.identities.symmetric_count, 8);
        assert_eq!(report.identities.ltg_implementable_count, 14);
        let tf = &report.groups[0];
        assert_eq!(tf.union_count, 2);
        assert!((tf.capacity_bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_closure_saturates_at_two_factors_for_n2() {
        let closure = product_closure(2, 1, 4).unwrap();
        assert_eq!(closure.stages[0].len(), 14);
        assert_eq!(closure.saturated_at, Some(2));
        assert_eq!(closure.stages[1].len(), 16);
    }

    #[test]
    fn synaptic_gating_matched_sign_has_no_counterexamples() {
        let report =
            full_synaptic_gating_check(2, 1, (ThresholdKind::Sign, ThresholdKind::Sign)).unwrap();
        assert!(report.verdict);
        assert_eq!(report.pairs_checked, 14 * 14);
    }

    #[test]
    fn synaptic_gating_mixed_kinds_match_remark_semantics() {
        for kinds in [
            (ThresholdKind::Heaviside, ThresholdKind::Heaviside),
            (ThresholdKind::Heaviside, ThresholdKind::Sign),
            (ThresholdKind::Sign, ThresholdKind::Heaviside),
        ] {
            let report = full_synaptic_gating_check(2, 1, kinds).unwrap();
            assert!(report.verdict, "kinds {kinds:?}");
        }
    }

    #[test]
    fn single_weight_gating_class_bounds_at_n2() {
        let report = single_weight_gating_class(2, 1).unwrap();
        assert!(report.contains_base);
        assert!(report.verdict);
        assert!(report.class.len() >= 14);
        assert!(report.class.len() <= 196);
    }

    #[test]
    fn layer_gating_exact_mode() {
        let report = layer_output_gating_class(2, 2).unwrap();
        assert!(report.verdict);
        assert!(report.witness_lower <= report.exact);
        assert!(report.contains_ungated);
        assert!(matches!(
            layer_output_gating_class(3, 2),
            Err(GatingError::ExactModeExceeded { .. })
        ));
    }

    #[test]
    fn layer_gating_sampling_reports_lower_bound() {
        let sample = layer_output_gating_sampled(3, 2, 50, 0).unwrap();
        assert!(sample.lower_bound_only);
        assert!(sample.distinct_found <= 50);
        assert!(sample.distinct_found > 0);
    }

    #[test]
    fn intersection_witnesses_at_n2_cover_all_functions() {
        let report = intersection_witnesses(2, 1, 1).unwrap();
        assert_eq!(report.expected_count, 16);
        assert!(report.injective);
        assert!(report.embeddings_verified);
        assert!(report.verdict);
        assert_eq!(report.witnesses.len(), 16);
    }

    #[test]
    fn composed_class_matches_pointwise_combine() {
        // The packed composition must agree with the generic pointwise one.
        let base = enumerate_class(2, 1).unwrap().class;
        let members: Vec<&TruthTable> = base.iter().collect();
        let spec =
            CompositionSpec::new(BooleanOpK::or2(), vec![1, 1], 2, Encoding::PlusMinus).unwrap();
        let class = compose_class_from(&spec, &[&base, &base]).unwrap();
        for f in members.iter().take(5) {
            for g in members.iter().take(5) {
                let direct = combine(&BooleanOpK::or2(), &[f, g]).unwrap();
                assert!(class.contains(&direct));
            }
        }
    }
}
