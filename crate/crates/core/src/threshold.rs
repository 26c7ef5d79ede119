//! Linear and polynomial threshold functions on the Boolean cube.
//!
//! A candidate is a degree-bounded multilinear polynomial with exact
//! rational coefficients; its threshold function is `sign(p(x))` or
//! `H(p(x))` with the fixed convention `H(z) = 0 for z <= 0`. Membership in
//! a class is decided by [`realize`], an exact feasibility oracle that
//! produces weights with `p(x) >= 1` on true points and `p(x) <= -1`
//! elsewhere, so every enumerated member carries a strict margin-1
//! certificate and no decision ever rests on a sign of zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfn::{BoolFnError, Encoding, FunctionClass, TruthTable};
use crate::lp::feasible_margin_system;
use crate::rational::{format_rat, parse_rat, rat, Rat};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error(transparent)]
    Bool(#[from] BoolFnError),
    #[error("monomial index {index} out of range 1..={n}")]
    MonomialOutOfRange { index: u32, n: usize },
    #[error("monomial has {size} variables, exceeding degree bound {d}")]
    MonomialTooLarge { size: usize, d: usize },
    #[error("monomial repeats a variable (inputs are 0/1, so x^2 = x)")]
    MonomialRepeated,
    #[error("ambiguous sign: p(x) = 0 at input index {index}")]
    AmbiguousSign { index: usize },
    #[error("assignment has {found} coordinates, expected {expected}")]
    AssignmentArity { expected: usize, found: usize },
    #[error("capacity of an empty class is undefined")]
    EmptyClass,
    #[error("binary-weight enumeration requires odd arity, got tie-prone n = {n}")]
    TieProne { n: usize },
    #[error("arity {n} exceeds the {strategy} strategy limit of {max}")]
    ArityBeyondStrategy {
        n: usize,
        strategy: &'static str,
        max: usize,
    },
    #[error("unknown reference formula `{0}`")]
    UnknownFormula(String),
    #[error("malformed weights payload: {0}")]
    BadWeights(String),
}

/// Output rule applied to the polynomial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    /// -/+ outputs via sign(p); p(x) = 0 is an error (no strict certificate).
    Sign,
    /// 0/1 outputs via H(p) with the fixed convention H(0) = 0.
    Heaviside,
}

impl ThresholdKind {
    pub fn output_encoding(self) -> Encoding {
        match self {
            ThresholdKind::Sign => Encoding::PlusMinus,
            ThresholdKind::Heaviside => Encoding::ZeroOne,
        }
    }
}

/// Coefficients of a multilinear polynomial of degree <= d over n 0/1
/// inputs. Keys are sorted variable-index subsets (empty = bias), kept in
/// lexicographic order, which fixes serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyWeights {
    n: usize,
    d: usize,
    coeffs: BTreeMap<Vec<u32>, Rat>,
}

impl PolyWeights {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            coeffs: BTreeMap::new(),
        }
    }

    /// Affine weights: bias plus one coefficient per variable.
    pub fn affine(n: usize, bias: Rat, linear: &[Rat]) -> Result<Self, ThresholdError> {
        if linear.len() != n {
            return Err(ThresholdError::AssignmentArity {
                expected: n,
                found: linear.len(),
            });
        }
        let mut w = Self::new(n, 1);
        w.set_coeff(&[], bias)?;
        for (i, c) in linear.iter().enumerate() {
            w.set_coeff(&[i as u32 + 1], c.clone())?;
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    fn check_monomial(&self, monomial: &[u32]) -> Result<Vec<u32>, ThresholdError> {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(ThresholdError::MonomialRepeated);
        }
        if key.len() > self.d {
            return Err(ThresholdError::MonomialTooLarge {
                size: key.len(),
                d: self.d,
            });
        }
        if let Some(&bad) = key.iter().find(|&&i| i == 0 || i as usize > self.n) {
            return Err(ThresholdError::MonomialOutOfRange { index: bad, n: self.n });
        }
        Ok(key)
    }

    /// Sets a coefficient; zero values delete the key so storage is
    /// canonical.
    pub fn set_coeff(&mut self, monomial: &[u32], value: Rat) -> Result<(), ThresholdError> {
        let key = self.check_monomial(monomial)?;
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    pub fn coeff(&self, monomial: &[u32]) -> Rat {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn bias(&self) -> Rat {
        self.coeff(&[])
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Evaluates p at a 0/1 assignment.
    pub fn eval(&self, x: &[bool]) -> Result<Rat, ThresholdError> {
        if x.len() != self.n {
            return Err(ThresholdError::AssignmentArity {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut total = Rat::zero();
        for (monomial, coeff) in &self.coeffs {
            if monomial.iter().all(|&i| x[i as usize - 1]) {
                total += coeff;
            }
        }
        Ok(total)
    }

    /// Evaluates p at the assignment encoded by a table index.
    pub fn eval_index(&self, index: usize) -> Rat {
        let mut total = Rat::zero();
        for (monomial, coeff) in &self.coeffs {
            if monomial.iter().all(|&i| index >> (i - 1) & 1 == 1) {
                total += coeff;
            }
        }
        total
    }

    /// Largest |p(x)| over the whole cube.
    pub fn max_abs_on_cube(&self) -> Rat {
        (0..1usize << self.n)
            .map(|i| self.eval_index(i).abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Smallest |p(x)| over the whole cube (the certified margin).
    pub fn min_abs_on_cube(&self) -> Rat {
        (0..1usize << self.n)
            .map(|i| self.eval_index(i).abs())
            .min()
            .unwrap_or_else(Rat::zero)
    }

    /// Re-indexes variables by `offset` into a polynomial over `new_n`
    /// variables (variable i becomes i + offset).
    pub fn embedded(&self, new_n: usize, offset: usize) -> Result<PolyWeights, ThresholdError> {
        if self.n + offset > new_n {
            return Err(ThresholdError::MonomialOutOfRange {
                index: (self.n + offset) as u32,
                n: new_n,
            });
        }
        let mut out = PolyWeights::new(new_n, self.d);
        for (monomial, coeff) in &self.coeffs {
            let shifted: Vec<u32> = monomial.iter().map(|&i| i + offset as u32).collect();
            out.set_coeff(&shifted, coeff.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &Rat) -> PolyWeights {
        let mut out = PolyWeights::new(self.n, self.d);
        if factor.is_zero() {
            return out;
        }
        for (monomial, coeff) in &self.coeffs {
            out.coeffs.insert(monomial.clone(), coeff * factor);
        }
        out
    }

    /// Coefficient-wise sum; the result takes the larger degree bound.
    pub fn plus(&self, other: &PolyWeights) -> Result<PolyWeights, ThresholdError> {
        if self.n != other.n {
            return Err(ThresholdError::AssignmentArity {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = PolyWeights::new(self.n, self.d.max(other.d));
        for (monomial, coeff) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let entry = out.coeffs.entry(monomial.clone()).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn negated(&self) -> PolyWeights {
        self.scaled(&rat(-1))
    }
}

impl Serialize for PolyWeights {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("d", &self.d)?;
        let coeffs: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(monomial, value)| {
                let mut key = String::new();
                for (idx, var) in monomial.iter().enumerate() {
                    if idx > 0 {
                        key.push(',');
                    }
                    let _ = write!(key, "{var}");
                }
                (key, format_rat(value))
            })
            .collect();
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for PolyWeights {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            d: usize,
            coeffs: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut weights = PolyWeights::new(raw.n, raw.d);
        for (key, value) in raw.coeffs {
            let monomial: Vec<u32> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|part| part.trim().parse::<u32>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| serde::de::Error::custom(format!("bad monomial key `{key}`")))?
            };
            let value = parse_rat(&value).map_err(serde::de::Error::custom)?;
            weights
                .set_coeff(&monomial, value)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(weights)
    }
}

/// Applies the output rule to p(x) at a 0/1 assignment.
///
/// Returns -1/+1 for `Sign` and 0/1 for `Heaviside`; a zero polynomial
/// value under `Sign` is an error, because it means the weights carry no
/// strict certificate.
pub fn evaluate(w: &PolyWeights, kind: ThresholdKind, x: &[bool]) -> Result<i8, ThresholdError> {
    let value = w.eval(x)?;
    threshold_output(&value, kind, crate::boolfn::input_index(x))
}

fn threshold_output(value: &Rat, kind: ThresholdKind, index: usize) -> Result<i8, ThresholdError> {
    match kind {
        ThresholdKind::Sign => {
            if value.is_zero() {
                Err(ThresholdError::AmbiguousSign { index })
            } else if value.is_positive() {
                Ok(1)
            } else {
                Ok(-1)
            }
        }
        ThresholdKind::Heaviside => Ok(if value.is_positive() { 1 } else { 0 }),
    }
}

/// Tabulates the threshold function of `w` over the whole cube.
///
/// `Sign` yields a -/+ table (erroring on any zero value); `Heaviside`
/// yields a 0/1 table with H(0) = 0.
pub fn to_table(w: &PolyWeights, kind: ThresholdKind) -> Result<TruthTable, ThresholdError> {
    let mut ambiguous: Option<usize> = None;
    let table = TruthTable::tabulate(w.n(), kind.output_encoding(), |x| {
        let value = w.eval(x).expect("arity fixed by tabulate");
        match threshold_output(&value, kind, crate::boolfn::input_index(x)) {
            Ok(v) => v > 0,
            Err(_) => {
                ambiguous.get_or_insert(crate::boolfn::input_index(x));
                false
            }
        }
    })?;
    if let Some(index) = ambiguous {
        return Err(ThresholdError::AmbiguousSign { index });
    }
    Ok(table)
}

/// All sorted variable subsets of {1..n} of size <= d, lexicographically.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u32>, u32)> = vec![(Vec::new(), 1)];
    while let Some((prefix, next)) = stack.pop() {
        out.push(prefix.clone());
        if prefix.len() == d {
            continue;
        }
        // Push in reverse so lexicographically smaller extensions pop first.
        for first in (next..=n as u32).rev() {
            let mut extended = prefix.clone();
            extended.push(first);
            stack.push((extended, first + 1));
        }
    }
    out.sort();
    out
}

/// Decides whether `t` is a degree-d threshold function; on success returns
/// margin-1 certificate weights (p >= 1 on true points, p <= -1 elsewhere).
///
/// The decision is an exact rational feasibility run over the monomial
/// coefficients with one constraint per cube point.
pub fn realize(t: &TruthTable, d: usize) -> Result<Option<PolyWeights>, ThresholdError> {
    let n = t.n();
    let monoms = monomials(n, d);
    let points = t.points();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(points);
    for index in 0..points {
        let sign = if t.bit(index) { 1 } else { -1 };
        let row: Vec<Rat> = monoms
            .iter()
            .map(|m| {
                if m.iter().all(|&i| index >> (i - 1) & 1 == 1) {
                    rat(sign)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        rows.push(row);
    }
    let Some(solution) = feasible_margin_system(&rows) else {
        return Ok(None);
    };
    let mut weights = PolyWeights::new(n, d);
    for (monomial, value) in monoms.iter().zip(solution) {
        weights.set_coeff(monomial, value)?;
    }
    Ok(Some(weights))
}

/// An enumerated class together with one margin-1 certificate per member.
#[derive(Debug, Clone)]
pub struct EnumeratedClass {
    pub class: FunctionClass,
    pub certificates: BTreeMap<TruthTable, PolyWeights>,
    pub cross_check: Option<CrossCheck>,
}

/// Result of re-verifying sampled non-generated dichotomies as infeasible
/// (completeness spot-check for the bounded-weights strategy).
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub samples: usize,
    pub all_infeasible: bool,
}

/// Enumeration strategy for [`enumerate_class_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaust all 2^(2^n) dichotomies and decide each by the exact oracle
    /// (n <= 4).
    Sweep,
    /// Generate sign patterns of all integer weight vectors with entries and
    /// bias in [-bound, bound], skipping tied patterns (n <= 5, degree 1).
    /// This is generative, so completeness is spot-checked by sampling
    /// non-generated dichotomies and verifying their infeasibility exactly.
    BoundedWeights { bound: i64 },
}

const SWEEP_MAX_N: usize = 4;
const WEIGHTS_MAX_N: usize = 5;

/// Enumerates the class of degree-d threshold functions of n variables with
/// the default strategy (exhaustive sweep, n <= 4).
pub fn enumerate_class(n: usize, d: usize) -> Result<EnumeratedClass, ThresholdError> {
    enumerate_class_with(n, d, Strategy::Sweep, 0, 0)
}

/// Enumerates with an explicit strategy.
///
/// `cross_check_samples` and `seed` only affect the bounded-weights
/// strategy's completeness spot-check.
pub fn enumerate_class_with(
    n: usize,
    d: usize,
    strategy: Strategy,
    cross_check_samples: usize,
    seed: u64,
) -> Result<EnumeratedClass, ThresholdError> {
    match strategy {
        Strategy::Sweep => {
            if n > SWEEP_MAX_N {
                return Err(ThresholdError::ArityBeyondStrategy {
                    n,
                    strategy: "sweep",
                    max: SWEEP_MAX_N,
                });
            }
            sweep_enumerate(n, d)
        }
        Strategy::BoundedWeights { bound } => {
            if n > WEIGHTS_MAX_N {
                return Err(ThresholdError::ArityBeyondStrategy {
                    n,
                    strategy: "weights",
                    max: WEIGHTS_MAX_N,
                });
            }
            bounded_weights_enumerate(n, bound, cross_check_samples, seed)
        }
    }
}

/// Exact rejection filter for degree-1 sweeps: a linear threshold function
/// is unate (monotone or antitone in every coordinate), so any table that
/// both increases and decreases along some coordinate is infeasible without
/// consulting the oracle.
fn is_unate(bits: u64, n: usize) -> bool {
    for i in 0..n {
        let stride = 1usize << i;
        let mut can_increase = true;
        let mut can_decrease = true;
        for low in 0..1usize << n {
            if low & stride != 0 {
                continue;
            }
            let lo = bits >> low & 1;
            let hi = bits >> (low | stride) & 1;
            if lo == 1 && hi == 0 {
                can_increase = false;
            }
            if lo == 0 && hi == 1 {
                can_decrease = false;
            }
        }
        if !can_increase && !can_decrease {
            return false;
        }
    }
    true
}

fn sweep_enumerate(n: usize, d: usize) -> Result<EnumeratedClass, ThresholdError> {
    let total: u64 = 1u64 << (1usize << n);
    let chunk: u64 = 1024;
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let results: Result<Vec<_>, ThresholdError> = chunks
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut class = FunctionClass::new(n, Encoding::PlusMinus)?;
            let mut certificates = BTreeMap::new();
            for bits in lo..hi {
                if d == 1 && !is_unate(bits, n) {
                    continue;
                }
                let table = TruthTable::from_mask(n, Encoding::PlusMinus, bits)?;
                if let Some(weights) = realize(&table, d)? {
                    class.insert(table.clone())?;
                    certificates.insert(table, weights);
                }
            }
            Ok((class, certificates))
        })
        .collect();
    let mut class = FunctionClass::new(n, Encoding::PlusMinus)?;
    let mut certificates = BTreeMap::new();
    for (part_class, part_certs) in results? {
        class.merge(part_class)?;
        certificates.extend(part_certs);
    }
    Ok(EnumeratedClass {
        class,
        certificates,
        cross_check: None,
    })
}

fn bounded_weights_enumerate(
    n: usize,
    bound: i64,
    cross_check_samples: usize,
    seed: u64,
) -> Result<EnumeratedClass, ThresholdError> {
    let points = 1usize << n;
    let width = (2 * bound + 1) as u64;
    let vector_count = width.pow(n as u32);
    let chunk: u64 = 4096;
    let chunks: Vec<u64> = (0..vector_count.div_ceil(chunk)).collect();
    let partials: Vec<BTreeMap<u64, (Vec<i64>, i64)>> = chunks
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(vector_count);
            let mut found: BTreeMap<u64, (Vec<i64>, i64)> = BTreeMap::new();
            let mut dots = vec![0i64; points];
            let mut w = vec![0i64; n];
            for code in lo..hi {
                let mut rem = code;
                for slot in w.iter_mut() {
                    *slot = (rem % width) as i64 - bound;
                    rem /= width;
                }
                for (index, dot) in dots.iter_mut().enumerate() {
                    let mut acc = 0i64;
                    for (i, wi) in w.iter().enumerate() {
                        if index >> i & 1 == 1 {
                            acc += wi;
                        }
                    }
                    *dot = acc;
                }
                'bias: for b in -bound..=bound {
                    let mut mask = 0u64;
                    for (index, dot) in dots.iter().enumerate() {
                        let v = dot + b;
                        if v == 0 {
                            continue 'bias;
                        }
                        if v > 0 {
                            mask |= 1u64 << index;
                        }
                    }
                    found.entry(mask).or_insert_with(|| (w.clone(), b));
                }
            }
            found
        })
        .collect();
    let mut found: BTreeMap<u64, (Vec<i64>, i64)> = BTreeMap::new();
    for partial in partials {
        for (mask, cert) in partial {
            found.entry(mask).or_insert(cert);
        }
    }

    let mut class = FunctionClass::new(n, Encoding::PlusMinus)?;
    let mut certificates = BTreeMap::new();
    for (mask, (w, b)) in &found {
        let table = TruthTable::from_mask(n, Encoding::PlusMinus, *mask)?;
        let linear: Vec<Rat> = w.iter().map(|&v| rat(v)).collect();
        let weights = PolyWeights::affine(n, rat(*b), &linear)?;
        class.insert(table.clone())?;
        certificates.insert(table, weights);
    }

    let cross_check = if cross_check_samples > 0 {
        let mut rng = SplitMix64::new(seed).fork(0x9c);
        let mut checked = 0usize;
        let mut all_infeasible = true;
        let mask_bound: u64 = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
        while checked < cross_check_samples {
            let candidate = rng.next_u64() & mask_bound;
            if found.contains_key(&candidate) {
                continue;
            }
            let table = TruthTable::from_mask(n, Encoding::PlusMinus, candidate)?;
            if realize(&table, 1)?.is_some() {
                all_infeasible = false;
            }
            checked += 1;
        }
        Some(CrossCheck {
            samples: checked,
            all_infeasible,
        })
    } else {
        None
    };

    Ok(EnumeratedClass {
        class,
        certificates,
        cross_check,
    })
}

/// The functions sign(sum eps_i x_i) over -/+ inputs with eps in {-1,+1}^n
/// and zero bias. Odd arity only: an even sum of odd many +/-1 terms cannot
/// vanish, so every pattern carries a strict certificate.
pub fn enumerate_binary_weight_ltfs(n: usize) -> Result<EnumeratedClass, ThresholdError> {
    if n.is_multiple_of(2) {
        return Err(ThresholdError::TieProne { n });
    }
    let mut class = FunctionClass::new(n, Encoding::PlusMinus)?;
    let mut certificates = BTreeMap::new();
    for pattern in 0..1usize << n {
        let eps: Vec<i64> = (0..n).map(|i| if pattern >> i & 1 == 1 { 1 } else { -1 }).collect();
        let table = TruthTable::tabulate(n, Encoding::PlusMinus, |x| {
            let sum: i64 = x
                .iter()
                .zip(&eps)
                .map(|(&b, &e)| e * if b { 1 } else { -1 })
                .sum();
            sum > 0
        })?;
        // Certificate in 0/1 coordinates via x_i = 2 b_i - 1.
        let linear: Vec<Rat> = eps.iter().map(|&e| rat(2 * e)).collect();
        let bias = rat(-eps.iter().sum::<i64>());
        let weights = PolyWeights::affine(n, bias, &linear)?;
        if class.insert(table.clone())? {
            certificates.insert(table, weights);
        }
    }
    Ok(EnumeratedClass {
        class,
        certificates,
        cross_check: None,
    })
}

/// Cardinal capacity log2 |class|.
pub fn capacity(class: &FunctionClass) -> Result<f64, ThresholdError> {
    if class.is_empty() {
        return Err(ThresholdError::EmptyClass);
    }
    Ok((class.len() as f64).log2())
}

/// Asymptotic reference curves for capacities. These are comparison
/// baselines with their correction terms dropped, not exact small-n claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceFormula {
    /// n^2 upper reference for a single linear threshold gate.
    ZuevUpper,
    /// n^2 - n log2 n refined reference for a single linear threshold gate.
    Komlos,
    /// n * sum_{k<=d} C(n,k) main term for degree-d gates.
    PolyMain,
    /// n^(d+1)/d! fixed-degree simplification.
    PolyFixedD,
    /// 2 n^2 for an output-gated pair of linear gates.
    GatedPair,
    /// 2 n^(d+1)/d! for an output-gated pair of degree-d gates.
    GatedPairPoly,
    /// 2 m n^2 for a gated layer of m hidden pairs (aux = m).
    LayerGated,
}

impl std::str::FromStr for ReferenceFormula {
    type Err = ThresholdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zuev_upper" => Ok(Self::ZuevUpper),
            "komlos" => Ok(Self::Komlos),
            "poly_main" => Ok(Self::PolyMain),
            "poly_fixed_d" => Ok(Self::PolyFixedD),
            "gated_pair" => Ok(Self::GatedPair),
            "gated_pair_poly" => Ok(Self::GatedPairPoly),
            "layer_gated" => Ok(Self::LayerGated),
            other => Err(ThresholdError::UnknownFormula(other.to_string())),
        }
    }
}

impl ReferenceFormula {
    pub fn name(self) -> &'static str {
        match self {
            Self::ZuevUpper => "zuev_upper",
            Self::Komlos => "komlos",
            Self::PolyMain => "poly_main",
            Self::PolyFixedD => "poly_fixed_d",
            Self::GatedPair => "gated_pair",
            Self::GatedPairPoly => "gated_pair_poly",
            Self::LayerGated => "layer_gated",
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Evaluates a reference formula. `aux` is the degree d for the polynomial
/// curves and the hidden-layer width m for `layer_gated`; ignored otherwise.
pub fn reference_formula(formula: ReferenceFormula, n: usize, aux: usize) -> f64 {
    let nf = n as f64;
    match formula {
        ReferenceFormula::ZuevUpper => nf * nf,
        ReferenceFormula::Komlos => nf * nf - nf * nf.log2(),
        ReferenceFormula::PolyMain => {
            let sum: f64 = (0..=aux).map(|k| binomial(n, k)).sum();
            nf * sum
        }
        ReferenceFormula::PolyFixedD => nf.powi(aux as i32 + 1) / factorial(aux),
        ReferenceFormula::GatedPair => 2.0 * nf * nf,
        ReferenceFormula::GatedPairPoly => 2.0 * nf.powi(aux as i32 + 1) / factorial(aux),
        ReferenceFormula::LayerGated => 2.0 * aux as f64 * nf * nf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pm_table<F: FnMut(&[bool]) -> bool>(n: usize, f: F) -> TruthTable {
        TruthTable::tabulate(n, Encoding::PlusMinus, f).unwrap()
    }

    #[test]
    fn evaluate_affine_or() {
        let w = PolyWeights::affine(2, ratio(-1, 2), &[rat(1), rat(1)]).unwrap();
        assert_eq!(evaluate(&w, ThresholdKind::Sign, &[false, false]).unwrap(), -1);
        assert_eq!(evaluate(&w, ThresholdKind::Sign, &[true, false]).unwrap(), 1);
        assert_eq!(evaluate(&w, ThresholdKind::Sign, &[false, true]).unwrap(), 1);
        assert_eq!(evaluate(&w, ThresholdKind::Sign, &[true, true]).unwrap(), 1);
    }

    #[test]
    fn zero_polynomial_has_ambiguous_sign() {
        let w = PolyWeights::new(2, 1);
        assert!(matches!(
            evaluate(&w, ThresholdKind::Sign, &[false, true]),
            Err(ThresholdError::AmbiguousSign { .. })
        ));
        // Heaviside is total: H(0) = 0.
        assert_eq!(evaluate(&w, ThresholdKind::Heaviside, &[false, true]).unwrap(), 0);
    }

    #[test]
    fn monomial_validation() {
        let mut w = PolyWeights::new(3, 2);
        assert!(w.set_coeff(&[1, 2], rat(1)).is_ok());
        assert!(matches!(
            w.set_coeff(&[1, 2, 3], rat(1)),
            Err(ThresholdError::MonomialTooLarge { .. })
        ));
        assert!(matches!(
            w.set_coeff(&[4], rat(1)),
            Err(ThresholdError::MonomialOutOfRange { .. })
        ));
        assert!(matches!(
            w.set_coeff(&[2, 2], rat(1)),
            Err(ThresholdError::MonomialRepeated)
        ));
    }

    #[test]
    fn realize_xor_needs_degree_two() {
        let xor = pm_table(2, |x| x[0] ^ x[1]);
        assert!(realize(&xor, 1).unwrap().is_none());
        let w = realize(&xor, 2).unwrap().expect("degree 2 realizes parity");
        assert_eq!(to_table(&w, ThresholdKind::Sign).unwrap(), xor);
        assert!(w.min_abs_on_cube() >= rat(1));
    }

    #[test]
    fn realize_constant_true_with_degree_one() {
        let t = pm_table(2, |_| true);
        let w = realize(&t, 1).unwrap().expect("constants are separable");
        assert_eq!(to_table(&w, ThresholdKind::Sign).unwrap(), t);
    }

    #[test]
    fn known_small_class_sizes() {
        assert_eq!(enumerate_class(1, 1).unwrap().class.len(), 4);
        assert_eq!(enumerate_class(2, 1).unwrap().class.len(), 14);
        assert_eq!(enumerate_class(2, 2).unwrap().class.len(), 16);
    }

    #[test]
    fn sweep_rejects_large_arity() {
        assert!(matches!(
            enumerate_class(5, 1),
            Err(ThresholdError::ArityBeyondStrategy { .. })
        ));
    }

    #[test]
    fn binary_weight_classes() {
        let one = enumerate_binary_weight_ltfs(1).unwrap();
        assert_eq!(one.class.len(), 2);
        let three = enumerate_binary_weight_ltfs(3).unwrap();
        assert_eq!(three.class.len(), 8);
        let majority = pm_table(3, |x| x.iter().filter(|&&b| b).count() >= 2);
        assert!(three.class.contains(&majority));
        assert!(matches!(
            enumerate_binary_weight_ltfs(2),
            Err(ThresholdError::TieProne { n: 2 })
        ));
    }

    #[test]
    fn capacity_of_known_sizes() {
        let class = enumerate_class(2, 1).unwrap().class;
        let bits = capacity(&class).unwrap();
        assert!((bits - 14f64.log2()).abs() < 1e-12);
        let empty = FunctionClass::new(2, Encoding::PlusMinus).unwrap();
        assert!(matches!(capacity(&empty), Err(ThresholdError::EmptyClass)));
    }

    #[test]
    fn reference_formula_values() {
        assert_eq!(reference_formula(ReferenceFormula::Komlos, 4, 0), 8.0);
        assert_eq!(reference_formula(ReferenceFormula::PolyFixedD, 4, 2), 32.0);
        assert_eq!(reference_formula(ReferenceFormula::GatedPair, 3, 0), 18.0);
        assert_eq!(reference_formula(ReferenceFormula::ZuevUpper, 3, 0), 9.0);
        assert_eq!(reference_formula(ReferenceFormula::LayerGated, 2, 3), 24.0);
        assert_eq!(
            reference_formula(ReferenceFormula::PolyMain, 4, 1),
            4.0 * (1.0 + 4.0)
        );
        assert!("zuev_upper".parse::<ReferenceFormula>().is_ok());
        assert!("nope".parse::<ReferenceFormula>().is_err());
    }

    #[test]
    fn monomial_order_is_lexicographic() {
        let m = monomials(3, 2);
        let expected: Vec<Vec<u32>> = vec![
            vec![],
            vec![1],
            vec![1, 2],
            vec![1, 3],
            vec![2],
            vec![2, 3],
            vec![3],
        ];
        assert_eq!(m, expected);
    }

    #[test]
    fn weights_serde_round_trip() {
        let mut w = PolyWeights::new(3, 2);
        w.set_coeff(&[], ratio(-1, 2)).unwrap();
        w.set_coeff(&[1], rat(2)).unwrap();
        w.set_coeff(&[1, 3], ratio(1, 3)).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: PolyWeights = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn unateness_filter_matches_oracle_at_n2() {
        for bits in 0u64..16 {
            let table = TruthTable::from_mask(2, Encoding::PlusMinus, bits).unwrap();
            let separable = realize(&table, 1).unwrap().is_some();
            if !is_unate(bits, 2) {
                assert!(!separable, "non-unate table {bits:#06b} must be infeasible");
            }
        }
    }
}
