//! Constructive procedures: corner separation, multiplexing, product
//! decomposition, the composition-embedding pipeline, and the gated slice
//! approximator.
//!
//! Everything here is built from exact rational affine forms whose margins
//! are computed, not assumed, so every construction can be verified
//! exhaustively on its cube. Network realizations target [`crate::netsim`].

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::boolfn::{assignment, BoolFnError, BooleanOpK, Encoding, TruthTable, MAX_ARITY};
use crate::netsim::{Activation, GatingNetwork, NetError, NetworkBuilder};
use crate::rational::{rat, ratio, Rat};
use crate::threshold::{PolyWeights, ThresholdError, ThresholdKind};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Bool(#[from] BoolFnError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("separator margins require M > 0 and K >= 0")]
    InvalidMargins,
    #[error("corner has {found} coordinates, expected {expected}")]
    CornerArity { expected: usize, found: usize },
    #[error("multiplex needs at least one base function")]
    EmptyMultiplex,
    #[error("base functions must share arity and degree bound")]
    MixedBaseFunctions,
    #[error("mask has {found} entries for {expected} base functions")]
    MaskLength { expected: usize, found: usize },
    #[error("mask entries must all be equal (got a mixed mask)")]
    UniformMaskRequired,
    #[error("mask value {mask} is incompatible with readout {readout}")]
    MaskReadoutIncompatible { mask: i8, readout: &'static str },
    #[error("extended arity {total} exceeds the table limit {max}")]
    ArityOverflow { total: usize, max: usize },
    #[error("this construction requires an irreducible operator")]
    ReducibleOperator,
    #[error("sign assignment must cover exactly the indices 0..=k except j")]
    BadSignKeys,
    #[error("signs must be +1 or -1")]
    BadSignValue,
    #[error("function has no margin certificate: its polynomial vanishes on the cube")]
    MissingCertificate,
    #[error("expected {expected} base functions, got {found}")]
    WrongFunctionCount { expected: usize, found: usize },
    #[error("embedding identity failed at slice {slice}, input {index}: implementation bug")]
    EmbeddingIdentityFailed { slice: usize, index: usize },
    #[error("approximator needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("approximator input {0} lies outside [0, 1]")]
    OutsideDomain(String),
    #[error("network realization requires affine units, got degree bound {0}")]
    NetworkDegree(usize),
    #[error("no restriction of an irreducible operator yields the identity: implementation bug")]
    InternalSearchFailed,
}

/// Affine form with value K at one cube vertex and at most -M at all
/// others.
#[derive(Debug, Clone)]
pub struct CornerSeparator {
    pub n: usize,
    pub corner: Vec<bool>,
    pub margin_m: Rat,
    pub margin_k: Rat,
    pub cube: Encoding,
    pub weights: PolyWeights,
}

impl CornerSeparator {
    /// Separator value at a cube vertex (coordinates as bits; on the -/+
    /// cube a bit denotes the +1 coordinate).
    pub fn eval_vertex(&self, vertex: &[bool]) -> Result<Rat, ConstructError> {
        if vertex.len() != self.n {
            return Err(ConstructError::CornerArity {
                expected: self.n,
                found: vertex.len(),
            });
        }
        match self.cube {
            Encoding::ZeroOne => Ok(self.weights.eval(vertex)?),
            Encoding::PlusMinus => {
                let mut total = self.weights.bias();
                for (i, &bit) in vertex.iter().enumerate() {
                    let w = self.weights.coeff(&[i as u32 + 1]);
                    total += if bit { w } else { -w };
                }
                Ok(total)
            }
        }
    }

    /// Exhaustive check of the defining margins.
    pub fn verify(&self) -> Result<bool, ConstructError> {
        for index in 0..1usize << self.n {
            let vertex = assignment(self.n, index);
            let value = self.eval_vertex(&vertex)?;
            if vertex == self.corner {
                if value != self.margin_k {
                    return Ok(false);
                }
            } else if value > -self.margin_m.clone() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the affine separator p with p(c) = K and p(d) <= -M at every
/// other vertex d: on the 0/1 cube each coordinate contributes +-(M+K)
/// toward the corner, and the -/+ cube version substitutes x -> (x+1)/2.
pub fn corner_separator(
    n: usize,
    corner: &[bool],
    margin_m: Rat,
    margin_k: Rat,
    cube: Encoding,
) -> Result<CornerSeparator, ConstructError> {
    if !margin_m.is_positive() || margin_k.is_negative() {
        return Err(ConstructError::InvalidMargins);
    }
    if corner.len() != n {
        return Err(ConstructError::CornerArity {
            expected: n,
            found: corner.len(),
        });
    }
    let step = &margin_m + &margin_k;
    let ones = corner.iter().filter(|&&b| b).count() as i64;
    let mut bias = &margin_k - &step * rat(ones);
    let mut linear: Vec<Rat> = corner
        .iter()
        .map(|&b| if b { step.clone() } else { -step.clone() })
        .collect();
    if cube == Encoding::PlusMinus {
        // Substitute x -> (x+1)/2 coordinate-wise.
        for w in &mut linear {
            *w /= rat(2);
            bias += w.clone();
        }
    }
    let weights = PolyWeights::affine(n, bias, &linear)?;
    Ok(CornerSeparator {
        n,
        corner: corner.to_vec(),
        margin_m,
        margin_k,
        cube,
        weights,
    })
}

/// How attention codes address the multiplexed functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Addressing {
    /// ceil(log2 m) attention bits; unit j is attended by the binary code
    /// of j.
    Dense,
    /// m-1 one-hot attention bits; unit 0 is attended by the zero pattern.
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Readout {
    Or,
    And,
    Product,
}

impl Readout {
    fn name(self) -> &'static str {
        match self {
            Readout::Or => "OR",
            Readout::And => "AND",
            Readout::Product => "product",
        }
    }
}

/// A bank of threshold units sharing data inputs, each biased by a corner
/// separator over dedicated attention bits so that exactly the attended
/// unit computes its base function while the rest emit the mask constant.
#[derive(Debug, Clone)]
pub struct MultiplexNetwork {
    pub fs: Vec<PolyWeights>,
    pub n: usize,
    pub d: usize,
    pub addressing: Addressing,
    pub attention_bits: usize,
    pub mask: Vec<i8>,
    pub readout: Readout,
    pub hidden_kind: ThresholdKind,
    /// Hidden unit weights over attention bits (low vars) then data vars.
    pub hidden: Vec<PolyWeights>,
    /// Separator margin per unit, strictly above max|p_j|.
    pub margins: Vec<Rat>,
    /// Attention code per unit (bit t = attention bit t+1).
    pub codes: Vec<u64>,
}

impl MultiplexNetwork {
    pub fn m(&self) -> usize {
        self.fs.len()
    }

    pub fn total_arity(&self) -> usize {
        self.attention_bits + self.n
    }

    /// Which unit (if any) a full attention code addresses.
    pub fn attended(&self, code: u64) -> Option<usize> {
        self.codes.iter().position(|&c| c == code)
    }

    /// Hidden unit j's output at a full extended-input index.
    pub fn hidden_value(&self, j: usize, index: usize) -> Result<i8, ConstructError> {
        let value = self.hidden[j].eval_index(index);
        threshold_output(&value, self.hidden_kind, index)
    }

    /// Readout value at a full extended-input index.
    pub fn evaluate(&self, index: usize) -> Result<i8, ConstructError> {
        let mut values = Vec::with_capacity(self.fs.len());
        for j in 0..self.fs.len() {
            values.push(self.hidden_value(j, index)?);
        }
        Ok(match self.readout {
            Readout::Or => {
                if values.contains(&1) {
                    1
                } else {
                    false_value(self.hidden_kind)
                }
            }
            Readout::And => {
                if values.iter().all(|&v| v == 1) {
                    1
                } else {
                    false_value(self.hidden_kind)
                }
            }
            Readout::Product => values.iter().product(),
        })
    }

    /// Truth table over (attention bits, data bits).
    pub fn extended_table(&self) -> Result<TruthTable, ConstructError> {
        let total = self.total_arity();
        let encoding = self.hidden_kind.output_encoding();
        let mut bits = Vec::with_capacity(1 << total);
        for index in 0..1usize << total {
            bits.push(self.evaluate(index)? == 1);
        }
        Ok(TruthTable::tabulate(total, encoding, |x| {
            bits[crate::boolfn::input_index(x)]
        })?)
    }

    /// Exhaustive check of the multiplexing invariants at every valid
    /// attention code.
    pub fn verify(&self) -> Result<bool, ConstructError> {
        let points = 1usize << self.n;
        for (i, &code) in self.codes.iter().enumerate() {
            for x in 0..points {
                let index = code as usize | (x << self.attention_bits);
                for j in 0..self.fs.len() {
                    let got = self.hidden_value(j, index)?;
                    let expected = if j == i {
                        threshold_output(&self.fs[j].eval_index(x), self.hidden_kind, x)?
                    } else {
                        self.mask[j]
                    };
                    if got != expected {
                        return Ok(false);
                    }
                }
                let readout = self.evaluate(index)?;
                let attended = threshold_output(&self.fs[i].eval_index(x), self.hidden_kind, x)?;
                if readout != attended {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn false_value(kind: ThresholdKind) -> i8 {
    match kind {
        ThresholdKind::Sign => -1,
        ThresholdKind::Heaviside => 0,
    }
}

fn threshold_output(
    value: &Rat,
    kind: ThresholdKind,
    index: usize,
) -> Result<i8, ConstructError> {
    match kind {
        ThresholdKind::Sign => {
            if value.is_positive() {
                Ok(1)
            } else if value.is_negative() {
                Ok(-1)
            } else {
                Err(ConstructError::Threshold(ThresholdError::AmbiguousSign {
                    index,
                }))
            }
        }
        ThresholdKind::Heaviside => Ok(if value.is_positive() { 1 } else { 0 }),
    }
}

/// Assembles the multiplexing bank: hidden unit j carries f_j's weights on
/// the data variables plus a corner separator over the attention bits with
/// margin max|p_j| + 1 (negated for the +1 mask so unattended units pin to
/// the mask on the other side).
pub fn build_multiplex(
    fs: &[PolyWeights],
    addressing: Addressing,
    mask: &[i8],
    readout: Readout,
) -> Result<MultiplexNetwork, ConstructError> {
    if fs.is_empty() {
        return Err(ConstructError::EmptyMultiplex);
    }
    let n = fs[0].n();
    let d = fs[0].degree_bound();
    if fs.iter().any(|f| f.n() != n || f.degree_bound() != d) {
        return Err(ConstructError::MixedBaseFunctions);
    }
    let m = fs.len();
    if mask.len() != m {
        return Err(ConstructError::MaskLength {
            expected: m,
            found: mask.len(),
        });
    }
    if mask.iter().any(|&v| v != mask[0]) {
        return Err(ConstructError::UniformMaskRequired);
    }
    let mask_value = mask[0];
    let compatible = match readout {
        Readout::Or => mask_value == 0 || mask_value == -1,
        Readout::And | Readout::Product => mask_value == 1,
    };
    if !compatible {
        return Err(ConstructError::MaskReadoutIncompatible {
            mask: mask_value,
            readout: readout.name(),
        });
    }
    let hidden_kind = if mask_value == 0 {
        ThresholdKind::Heaviside
    } else {
        ThresholdKind::Sign
    };
    let attention_bits = match addressing {
        Addressing::Dense => (m as f64).log2().ceil() as usize,
        Addressing::Sparse => m - 1,
    };
    let total = attention_bits + n;
    if total > MAX_ARITY {
        return Err(ConstructError::ArityOverflow {
            total,
            max: MAX_ARITY,
        });
    }
    let codes: Vec<u64> = (0..m)
        .map(|j| match addressing {
            Addressing::Dense => j as u64,
            Addressing::Sparse => {
                if j == 0 {
                    0
                } else {
                    1u64 << (j - 1)
                }
            }
        })
        .collect();
    let mut hidden = Vec::with_capacity(m);
    let mut margins = Vec::with_capacity(m);
    for (j, f) in fs.iter().enumerate() {
        let margin = f.max_abs_on_cube() + Rat::one();
        let corner: Vec<bool> = (0..attention_bits).map(|t| codes[j] >> t & 1 == 1).collect();
        let separator = corner_separator(
            attention_bits,
            &corner,
            margin.clone(),
            Rat::zero(),
            Encoding::ZeroOne,
        )?;
        let sep_weights = if mask_value == 1 {
            separator.weights.negated()
        } else {
            separator.weights
        };
        let unit = sep_weights.embedded(total, 0)?.plus(&f.embedded(total, attention_bits)?)?;
        hidden.push(unit);
        margins.push(margin);
    }
    Ok(MultiplexNetwork {
        fs: fs.to_vec(),
        n,
        d,
        addressing,
        attention_bits,
        mask: mask.to_vec(),
        readout,
        hidden_kind,
        hidden,
        margins,
        codes,
    })
}

/// Realizes an affine multiplex as a gating network: attention inputs
/// s1..sa (separator contributions ride on tagged attention edges), data
/// inputs x1..xn, one threshold unit per base function, and a threshold or
/// gating-chain readout.
pub fn mux_to_network(mux: &MultiplexNetwork) -> Result<GatingNetwork, ConstructError> {
    if mux.d > 1 {
        return Err(ConstructError::NetworkDegree(mux.d));
    }
    let mut b = NetworkBuilder::new();
    let a = mux.attention_bits;
    for t in 1..=a {
        b.neuron(&format!("s{t}"), Activation::Identity, Rat::zero());
    }
    for i in 1..=mux.n {
        b.neuron(&format!("x{i}"), Activation::Identity, Rat::zero());
    }
    let activation = match mux.hidden_kind {
        ThresholdKind::Sign => Activation::Sign,
        ThresholdKind::Heaviside => Activation::Heaviside,
    };
    let m = mux.fs.len();
    for (j, unit) in mux.hidden.iter().enumerate() {
        let id = format!("h{}", j + 1);
        b.neuron(&id, activation, unit.bias());
        for t in 1..=a {
            let w = unit.coeff(&[t as u32]);
            if !w.is_zero() {
                b.attention_edge(&format!("s{t}"), &id, w);
            }
        }
        for i in 1..=mux.n {
            let w = unit.coeff(&[(a + i) as u32]);
            if !w.is_zero() {
                b.edge(&format!("x{i}"), &id, w);
            }
        }
    }
    match mux.readout {
        Readout::Or | Readout::And => {
            let bias = match (mux.hidden_kind, mux.readout) {
                // 0/1 OR fires once any unit does.
                (ThresholdKind::Heaviside, Readout::Or) => ratio(-1, 2),
                // -/+ OR: sum exceeds -(m-1) - 1 once any unit is +1.
                (ThresholdKind::Sign, Readout::Or) => rat(m as i64) - ratio(3, 2),
                // -/+ AND: sum must reach m.
                (ThresholdKind::Sign, Readout::And) => ratio(3, 2) - rat(m as i64),
                (ThresholdKind::Heaviside, Readout::And) => ratio(1, 2) - rat(m as i64),
                (_, Readout::Product) => unreachable!("handled by the outer match"),
            };
            b.neuron("out", activation, bias);
            for j in 1..=m {
                b.edge(&format!("h{j}"), "out", rat(1));
            }
        }
        Readout::Product => {
            // Chain of output gates: each copy forwards the running product.
            let mut upstream = "h1".to_string();
            for j in 2..=m {
                let copy = format!("prod{j}");
                b.neuron(&copy, Activation::Identity, Rat::zero());
                b.edge(&upstream, &copy, rat(1));
                b.output_gate(&format!("h{j}"), &copy);
                upstream = copy;
            }
            b.neuron("out", Activation::Identity, Rat::zero());
            b.edge(&upstream, "out", rat(1));
        }
    }
    for t in 1..=a {
        b.declare_input(&format!("s{t}"));
    }
    for i in 1..=mux.n {
        b.declare_input(&format!("x{i}"));
    }
    b.declare_output("out");
    Ok(b.build()?)
}

/// Factorization of a truth table into corner-separator threshold gates,
/// one per off-point.
#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    pub n: usize,
    pub encoding: Encoding,
    pub kind: ThresholdKind,
    pub factors: Vec<PolyWeights>,
    pub off_points: Vec<usize>,
    /// True when the factor count exceeds 2^(n-2), the claimed worst case.
    pub exceeds_quarter_bound: bool,
}

/// Decomposes `t` as a pointwise product of affine threshold gates: each
/// factor is a negated corner separator taking the false value at exactly
/// one off-point of `t` and the true value everywhere else. The empty
/// product is the constant-true function.
pub fn product_decomposition(t: &TruthTable) -> Result<ProductDecomposition, ConstructError> {
    let n = t.n();
    let kind = match t.encoding() {
        Encoding::ZeroOne => ThresholdKind::Heaviside,
        Encoding::PlusMinus => ThresholdKind::Sign,
    };
    // Sign factors need value -1 at the off-point (K = 1); Heaviside
    // factors sit exactly at 0 there (K = 0, H(0) = 0).
    let corner_k = match kind {
        ThresholdKind::Sign => Rat::one(),
        ThresholdKind::Heaviside => Rat::zero(),
    };
    let off_points = t.off_set();
    let mut factors = Vec::with_capacity(off_points.len());
    for &point in &off_points {
        let corner = assignment(n, point);
        let separator = corner_separator(
            n,
            &corner,
            Rat::one(),
            corner_k.clone(),
            Encoding::ZeroOne,
        )?;
        factors.push(separator.weights.negated());
    }
    let exceeds = 4 * off_points.len() > 1usize << n;
    Ok(ProductDecomposition {
        n,
        encoding: t.encoding(),
        kind,
        factors,
        off_points,
        exceeds_quarter_bound: exceeds,
    })
}

/// Pointwise product of the decomposition's factor gates, as a table.
pub fn decomposition_product_table(
    dec: &ProductDecomposition,
) -> Result<TruthTable, ConstructError> {
    let points = 1usize << dec.n;
    let mut bits = Vec::with_capacity(points);
    for index in 0..points {
        let mut product: i64 = 1;
        for factor in &dec.factors {
            product *= i64::from(threshold_output(&factor.eval_index(index), dec.kind, index)?);
        }
        bits.push(product == 1);
    }
    Ok(TruthTable::tabulate(dec.n, dec.encoding, |x| {
        bits[crate::boolfn::input_index(x)]
    })?)
}

/// Realizes the decomposition as a network: one threshold neuron per
/// factor, chained through output gates so the declared output carries the
/// pointwise product.
pub fn decomposition_network(dec: &ProductDecomposition) -> Result<GatingNetwork, ConstructError> {
    let mut b = NetworkBuilder::new();
    for i in 1..=dec.n {
        b.neuron(&format!("x{i}"), Activation::Identity, Rat::zero());
    }
    let activation = match dec.kind {
        ThresholdKind::Sign => Activation::Sign,
        ThresholdKind::Heaviside => Activation::Heaviside,
    };
    for (j, factor) in dec.factors.iter().enumerate() {
        let id = format!("t{}", j + 1);
        b.neuron(&id, activation, factor.bias());
        for i in 1..=dec.n {
            let w = factor.coeff(&[i as u32]);
            if !w.is_zero() {
                b.edge(&format!("x{i}"), &id, w);
            }
        }
    }
    if dec.factors.is_empty() {
        b.neuron("out", Activation::Identity, Rat::one());
    } else {
        let mut upstream = "t1".to_string();
        for j in 2..=dec.factors.len() {
            let copy = format!("p{j}");
            b.neuron(&copy, Activation::Identity, Rat::zero());
            b.edge(&upstream, &copy, rat(1));
            b.output_gate(&format!("t{j}"), &copy);
            upstream = copy;
        }
        b.neuron("out", Activation::Identity, Rat::zero());
        b.edge(&upstream, "out", rat(1));
    }
    for i in 1..=dec.n {
        b.declare_input(&format!("x{i}"));
    }
    b.declare_output("out");
    Ok(b.build()?)
}

/// An assignment of the other arguments under which an operator acts as
/// +-identity on one argument.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictionSigns {
    pub var: usize,
    /// +1 when the restricted operator is the identity in the chosen
    /// argument, -1 when it is the negation.
    pub theta: i8,
    /// Fixed -/+ values for the other arguments.
    pub others: BTreeMap<usize, i8>,
}

/// Finds, by exhaustive search in code order, constants for all arguments
/// but `var` making `b` equal to +-(argument `var`).
pub fn restriction_signs(b: &BooleanOpK, var: usize) -> Result<RestrictionSigns, ConstructError> {
    if !b.is_irreducible() {
        return Err(ConstructError::ReducibleOperator);
    }
    let arity = b.arity();
    let others: Vec<usize> = (0..arity).filter(|&j| j != var).collect();
    for code in 0..1usize << others.len() {
        let mut args = vec![false; arity];
        for (pos, &j) in others.iter().enumerate() {
            args[j] = code >> pos & 1 == 1;
        }
        args[var] = false;
        let at_false = b.apply(&args)?;
        args[var] = true;
        let at_true = b.apply(&args)?;
        let theta = match (at_false, at_true) {
            (false, true) => 1,
            (true, false) => -1,
            _ => continue,
        };
        let signs = others
            .iter()
            .enumerate()
            .map(|(pos, &j)| (j, if code >> pos & 1 == 1 { 1 } else { -1 }))
            .collect();
        return Ok(RestrictionSigns {
            var,
            theta,
            others: signs,
        });
    }
    // An irreducible operator depends on every argument, and any
    // dependence witnesses such an assignment.
    Err(ConstructError::InternalSearchFailed)
}

fn check_signs(k: usize, j: usize, signs: &BTreeMap<usize, i8>) -> Result<(), ConstructError> {
    if j > k {
        return Err(ConstructError::BadSignKeys);
    }
    let expected: Vec<usize> = (0..=k).filter(|&i| i != j).collect();
    let found: Vec<usize> = signs.keys().copied().collect();
    if expected != found {
        return Err(ConstructError::BadSignKeys);
    }
    if signs.values().any(|&v| v != 1 && v != -1) {
        return Err(ConstructError::BadSignValue);
    }
    Ok(())
}

/// Affine q over z_1..z_k with q(e_j) = 0 and q(e_i) = theta_i for every
/// other index (e_0 is the origin): for j >= 1,
/// q(z) = theta_0 - theta_0 z_j + sum over i not in {0, j} of
/// (theta_i - theta_0) z_i; for j = 0, q(z) = sum of theta_i z_i.
pub fn fit_affine(
    k: usize,
    j: usize,
    signs: &BTreeMap<usize, i8>,
) -> Result<PolyWeights, ConstructError> {
    check_signs(k, j, signs)?;
    let mut q = PolyWeights::new(k, 1);
    if j == 0 {
        for (&i, &theta) in signs {
            q.set_coeff(&[i as u32], rat(theta as i64))?;
        }
    } else {
        let theta0 = rat(signs[&0] as i64);
        q.set_coeff(&[], theta0.clone())?;
        q.set_coeff(&[j as u32], -theta0.clone())?;
        for (&i, &theta) in signs {
            if i == 0 {
                continue;
            }
            q.set_coeff(&[i as u32], rat(theta as i64) - theta0.clone())?;
        }
    }
    Ok(q)
}

/// Extends f (over the data variables) to F over k + n variables:
/// F = M q(z) + theta p(x) with M = max|p| + 1, so that sign(F) equals
/// theta_i on slice e_i for i != j and theta f(x) on slice e_j.
pub fn extend_function(
    f: &PolyWeights,
    j: usize,
    theta: i8,
    signs: &BTreeMap<usize, i8>,
) -> Result<PolyWeights, ConstructError> {
    if theta != 1 && theta != -1 {
        return Err(ConstructError::BadSignValue);
    }
    let k = signs.len();
    check_signs(k, j, signs)?;
    if f.min_abs_on_cube().is_zero() {
        return Err(ConstructError::MissingCertificate);
    }
    let margin = f.max_abs_on_cube() + Rat::one();
    let total = k + f.n();
    let q = fit_affine(k, j, signs)?.embedded(total, 0)?.scaled(&margin);
    let p = f.embedded(total, k)?.scaled(&rat(theta as i64));
    Ok(q.plus(&p)?)
}

/// The full embedding: operator, per-slice restriction signs, affine fits,
/// margins, and the extended functions F_0..F_k.
#[derive(Debug, Clone)]
pub struct EmbeddingTuple {
    pub b: BooleanOpK,
    pub k: usize,
    pub data_arity: usize,
    /// theta of slice i: the operator restricted for argument i.
    pub thetas: Vec<i8>,
    /// slot_signs[i][j] = fixed value of argument j when slicing for i.
    pub slot_signs: Vec<BTreeMap<usize, i8>>,
    pub fits: Vec<PolyWeights>,
    pub margins: Vec<Rat>,
    pub outputs: Vec<PolyWeights>,
}

impl EmbeddingTuple {
    pub fn n(&self) -> usize {
        self.k + self.data_arity
    }

    /// Index of the unit-vector slice point e_i combined with data index x.
    pub fn slice_index(&self, i: usize, x: usize) -> usize {
        let z = if i == 0 { 0 } else { 1usize << (i - 1) };
        z | (x << self.k)
    }

    /// Table of B(sign F_0, ..., sign F_k) over all k + data variables.
    pub fn composed_table(&self) -> Result<TruthTable, ConstructError> {
        let total = self.n();
        let mut bits = Vec::with_capacity(1 << total);
        for index in 0..1usize << total {
            let mut args = Vec::with_capacity(self.outputs.len());
            for f in &self.outputs {
                args.push(threshold_output(&f.eval_index(index), ThresholdKind::Sign, index)? == 1);
            }
            bits.push(self.b.apply(&args)?);
        }
        Ok(TruthTable::tabulate(total, Encoding::PlusMinus, |x| {
            bits[crate::boolfn::input_index(x)]
        })?)
    }
}

/// Chains restriction_signs, fit_affine, and extend_function to embed the
/// base functions f_0..f_k into a single composition: the returned tuple
/// satisfies B(F_0,...,F_k)(e_i + x) = f_i(x), verified exhaustively
/// before returning.
pub fn composition_embedding(
    b: &BooleanOpK,
    fs: &[PolyWeights],
) -> Result<EmbeddingTuple, ConstructError> {
    let arity = b.arity();
    let k = arity - 1;
    if fs.len() != arity {
        return Err(ConstructError::WrongFunctionCount {
            expected: arity,
            found: fs.len(),
        });
    }
    let data_arity = fs[0].n();
    if fs.iter().any(|f| f.n() != data_arity) {
        return Err(ConstructError::MixedBaseFunctions);
    }
    let mut thetas = Vec::with_capacity(arity);
    let mut slot_signs = Vec::with_capacity(arity);
    for i in 0..arity {
        let rs = restriction_signs(b, i)?;
        thetas.push(rs.theta);
        slot_signs.push(rs.others);
    }
    let mut fits = Vec::with_capacity(arity);
    let mut margins = Vec::with_capacity(arity);
    let mut outputs = Vec::with_capacity(arity);
    for j in 0..arity {
        let signs: BTreeMap<usize, i8> = (0..arity)
            .filter(|&i| i != j)
            .map(|i| (i, slot_signs[i][&j]))
            .collect();
        fits.push(fit_affine(k, j, &signs)?);
        margins.push(fs[j].max_abs_on_cube() + Rat::one());
        outputs.push(extend_function(&fs[j], j, thetas[j], &signs)?);
    }
    let tuple = EmbeddingTuple {
        b: b.clone(),
        k,
        data_arity,
        thetas,
        slot_signs,
        fits,
        margins,
        outputs,
    };
    // The construction is proven; a failure here is an implementation bug.
    for i in 0..arity {
        for x in 0..1usize << data_arity {
            let index = tuple.slice_index(i, x);
            let mut args = Vec::with_capacity(arity);
            for f in &tuple.outputs {
                args.push(threshold_output(&f.eval_index(index), ThresholdKind::Sign, index)? == 1);
            }
            let got = tuple.b.apply(&args)?;
            let expected =
                threshold_output(&fs[i].eval_index(x), ThresholdKind::Sign, x)? == 1;
            if got != expected {
                return Err(ConstructError::EmbeddingIdentityFailed { slice: i, index });
            }
        }
    }
    Ok(tuple)
}

/// Piecewise approximator variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApproxVariant {
    /// Secant interpolation on each slice.
    Linear,
    /// Left-endpoint value on each slice.
    Constant,
}

/// Gated slice approximator of a sampled function on [0, 1]: unit k is
/// attended when x >= (k-1)/n and contributes y_k(x); the attended sum
/// telescopes to the slice interpolant.
#[derive(Debug, Clone)]
pub struct SliceApproximator {
    pub n_slices: usize,
    pub samples: Vec<Rat>,
    pub variant: ApproxVariant,
    /// Attention thresholds (k-1)/n for k = 1..n.
    pub attention_biases: Vec<Rat>,
    /// y_k(x) = slope * x + intercept.
    pub units: Vec<(Rat, Rat)>,
}

/// Builds the approximator from samples f(0), f(1/n), ..., f(1).
pub fn build_slice_approximator(
    samples: &[Rat],
    variant: ApproxVariant,
) -> Result<SliceApproximator, ConstructError> {
    if samples.len() < 2 {
        return Err(ConstructError::TooFewSamples(samples.len()));
    }
    let n = samples.len() - 1;
    let n_rat = rat(n as i64);
    let mut units: Vec<(Rat, Rat)> = Vec::with_capacity(n);
    match variant {
        ApproxVariant::Linear => {
            // Secant on slice k: L_k(x) = f_{k-1} + n (f_k - f_{k-1}) (x - (k-1)/n);
            // unit k carries the difference L_k - L_{k-1}.
            let mut prev: Option<(Rat, Rat)> = None;
            for kth in 1..=n {
                let left = &samples[kth - 1];
                let slope = &n_rat * (&samples[kth] - left);
                let intercept = left - &slope * ratio((kth as i64) - 1, n as i64);
                let secant = (slope, intercept);
                units.push(match &prev {
                    None => secant.clone(),
                    Some((ps, pi)) => (&secant.0 - ps, &secant.1 - pi),
                });
                prev = Some(secant);
            }
        }
        ApproxVariant::Constant => {
            for kth in 1..=n {
                let value = if kth == 1 {
                    samples[0].clone()
                } else {
                    &samples[kth - 1] - &samples[kth - 2]
                };
                units.push((Rat::zero(), value));
            }
        }
    }
    let attention_biases = (0..n).map(|k| ratio(k as i64, n as i64)).collect();
    Ok(SliceApproximator {
        n_slices: n,
        samples: samples.to_vec(),
        variant,
        attention_biases,
        units,
    })
}

/// Exact closed-form evaluation: sum of y_k(x) over attended units
/// (x >= (k-1)/n, slices closed on the left).
pub fn evaluate_approximator(sa: &SliceApproximator, x: &Rat) -> Result<Rat, ConstructError> {
    if x.is_negative() || x > &Rat::one() {
        return Err(ConstructError::OutsideDomain(x.to_string()));
    }
    let mut total = Rat::zero();
    for (k, (slope, intercept)) in sa.units.iter().enumerate() {
        if x >= &sa.attention_biases[k] {
            total += slope * x + intercept;
        }
    }
    Ok(total)
}

/// Materializes the approximator as a gating network: linear y units are
/// output-gated by rescaled sign attention units, and a final unit sums the
/// gated contributions. Exact rational evaluation applies throughout.
pub fn approximator_network(sa: &SliceApproximator) -> GatingNetwork {
    let mut b = NetworkBuilder::new();
    b.neuron("x", Activation::Identity, Rat::zero());
    for (k, (slope, intercept)) in sa.units.iter().enumerate() {
        let att = format!("att{}", k + 1);
        let resc = format!("resc{}", k + 1);
        let y = format!("y{}", k + 1);
        // sign(x - (k-1)/n) with sign(0) = +1 keeps slices closed-left.
        b.neuron(&att, Activation::Sign, -sa.attention_biases[k].clone());
        b.edge("x", &att, rat(1));
        // (s + 1) / 2 turns the -/+ attention value into a 0/1 gate.
        b.neuron(&resc, Activation::Identity, ratio(1, 2));
        b.edge(&att, &resc, ratio(1, 2));
        b.neuron(&y, Activation::Identity, intercept.clone());
        if !slope.is_zero() {
            b.edge("x", &y, slope.clone());
        }
        b.output_gate(&resc, &y);
    }
    b.neuron("out", Activation::Identity, Rat::zero());
    for k in 1..=sa.units.len() {
        b.edge(&format!("y{k}"), "out", rat(1));
    }
    b.declare_input("x");
    b.declare_output("out");
    b.build().expect("approximator network is statically valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_to_f64;

    fn or2_weights() -> PolyWeights {
        PolyWeights::affine(2, ratio(-1, 2), &[rat(1), rat(1)]).unwrap()
    }

    fn and2_weights() -> PolyWeights {
        PolyWeights::affine(2, ratio(-3, 2), &[rat(1), rat(1)]).unwrap()
    }

    fn identity1() -> PolyWeights {
        PolyWeights::affine(1, rat(-1), &[rat(2)]).unwrap()
    }

    fn negation1() -> PolyWeights {
        PolyWeights::affine(1, rat(1), &[rat(-2)]).unwrap()
    }

    #[test]
    fn corner_separator_matches_reference_values() {
        let sep = corner_separator(
            2,
            &[true, true],
            Rat::one(),
            Rat::zero(),
            Encoding::ZeroOne,
        )
        .unwrap();
        assert_eq!(sep.weights.bias(), rat(-2));
        assert_eq!(sep.eval_vertex(&[true, true]).unwrap(), rat(0));
        assert_eq!(sep.eval_vertex(&[false, true]).unwrap(), rat(-1));
        assert_eq!(sep.eval_vertex(&[true, false]).unwrap(), rat(-1));
        assert_eq!(sep.eval_vertex(&[false, false]).unwrap(), rat(-2));
        assert!(sep.verify().unwrap());

        let origin = corner_separator(
            2,
            &[false, false],
            Rat::one(),
            Rat::zero(),
            Encoding::ZeroOne,
        )
        .unwrap();
        assert_eq!(origin.eval_vertex(&[false, false]).unwrap(), rat(0));
        assert!(origin.verify().unwrap());
    }

    #[test]
    fn corner_separator_works_on_both_cubes() {
        for encoding in [Encoding::ZeroOne, Encoding::PlusMinus] {
            for corner_index in 0..8usize {
                let corner = assignment(3, corner_index);
                let sep =
                    corner_separator(3, &corner, rat(10), rat(1), encoding).unwrap();
                assert!(sep.verify().unwrap(), "corner {corner_index} on {encoding:?}");
            }
        }
        assert!(matches!(
            corner_separator(2, &[true, true], rat(0), rat(0), Encoding::ZeroOne),
            Err(ConstructError::InvalidMargins)
        ));
    }

    #[test]
    fn multiplex_dense_heaviside_or_attends_correctly() {
        let mux = build_multiplex(
            &[or2_weights(), and2_weights()],
            Addressing::Dense,
            &[0, 0],
            Readout::Or,
        )
        .unwrap();
        assert_eq!(mux.attention_bits, 1);
        assert!(mux.verify().unwrap());
        // Attention bit 0 selects OR, bit 1 selects AND, on all 4 data
        // points.
        for x in 0..4usize {
            let or_val = i8::from(x != 0);
            let and_val = i8::from(x == 3);
            assert_eq!(mux.evaluate(x << 1).unwrap(), or_val);
            assert_eq!(mux.evaluate(1 | (x << 1)).unwrap(), and_val);
        }
    }

    #[test]
    fn multiplex_product_mask_of_ones_is_transparent() {
        let mux = build_multiplex(
            &[or2_weights(), and2_weights()],
            Addressing::Dense,
            &[1, 1],
            Readout::Product,
        )
        .unwrap();
        assert!(mux.verify().unwrap());
        let sign_mux = build_multiplex(
            &[or2_weights(), and2_weights()],
            Addressing::Sparse,
            &[-1, -1],
            Readout::Or,
        )
        .unwrap();
        assert!(sign_mux.verify().unwrap());
    }

    #[test]
    fn multiplex_rejects_incompatible_mask() {
        let err = build_multiplex(
            &[or2_weights(), and2_weights()],
            Addressing::Dense,
            &[0, 0],
            Readout::And,
        );
        assert!(matches!(
            err,
            Err(ConstructError::MaskReadoutIncompatible { .. })
        ));
        assert!(matches!(
            build_multiplex(
                &[or2_weights(), and2_weights()],
                Addressing::Dense,
                &[0, 1],
                Readout::Or
            ),
            Err(ConstructError::UniformMaskRequired)
        ));
    }

    #[test]
    fn multiplex_network_realization_matches_table() {
        let mux = build_multiplex(
            &[or2_weights(), and2_weights()],
            Addressing::Dense,
            &[-1, -1],
            Readout::Or,
        )
        .unwrap();
        let net = mux_to_network(&mux).unwrap();
        for index in 0..1usize << mux.total_arity() {
            let expected = f64::from(mux.evaluate(index).unwrap());
            let input: Vec<f64> = (0..mux.total_arity())
                .map(|b| f64::from(u8::from(index >> b & 1 == 1)))
                .collect();
            let (out, _) = net.evaluate(&input).unwrap();
            assert_eq!(out[0], expected, "index {index}");
        }
    }

    #[test]
    fn product_decomposition_recovers_xor_both_encodings() {
        let xor01 = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0] ^ x[1]).unwrap();
        let dec = product_decomposition(&xor01).unwrap();
        assert_eq!(dec.factors.len(), 2);
        assert_eq!(decomposition_product_table(&dec).unwrap(), xor01);
        // The two factors are OR (off at the origin) and NAND (off at the
        // top corner). Two factors exceed 2^(n-2) = 1 at n = 2, so the
        // advisory flag must fire.
        assert_eq!(dec.off_points, vec![0, 3]);
        assert!(dec.exceeds_quarter_bound);

        let xorpm = xor01.toggled_encoding();
        let dec_pm = product_decomposition(&xorpm).unwrap();
        assert_eq!(decomposition_product_table(&dec_pm).unwrap(), xorpm);

        let net = decomposition_network(&dec).unwrap();
        let expect = [0.0, 1.0, 1.0, 0.0];
        for (i, e) in expect.iter().enumerate() {
            let input = [f64::from(u8::from(i & 1 == 1)), f64::from(u8::from(i >> 1 & 1 == 1))];
            let (out, _) = net.evaluate(&input).unwrap();
            assert_eq!(out[0], *e);
        }
    }

    #[test]
    fn product_decomposition_edge_cases() {
        let top = TruthTable::tabulate(2, Encoding::ZeroOne, |_| true).unwrap();
        let dec = product_decomposition(&top).unwrap();
        assert!(dec.factors.is_empty());
        assert_eq!(decomposition_product_table(&dec).unwrap(), top);

        let point = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0] && x[1]).unwrap();
        let dec = product_decomposition(&point).unwrap();
        assert_eq!(dec.factors.len(), 3);
        assert!(dec.exceeds_quarter_bound);
        assert_eq!(decomposition_product_table(&dec).unwrap(), point);
    }

    #[test]
    fn restriction_signs_match_reference_cases() {
        let and = restriction_signs(&BooleanOpK::and2(), 0).unwrap();
        assert_eq!(and.theta, 1);
        assert_eq!(and.others[&1], 1);
        let or = restriction_signs(&BooleanOpK::or2(), 1).unwrap();
        assert_eq!(or.theta, 1);
        assert_eq!(or.others[&0], -1);
        let xor = restriction_signs(&BooleanOpK::xor2(), 0).unwrap();
        assert_eq!(xor.theta, 1);
        assert_eq!(xor.others[&1], -1);
        assert!(matches!(
            restriction_signs(&BooleanOpK::from_fn(2, |a| a[0]), 0),
            Err(ConstructError::ReducibleOperator)
        ));
    }

    #[test]
    fn fit_affine_reference_cases() {
        let q = fit_affine(2, 1, &BTreeMap::from([(0, 1), (2, -1)])).unwrap();
        assert_eq!(q.bias(), rat(1));
        assert_eq!(q.coeff(&[1]), rat(-1));
        assert_eq!(q.coeff(&[2]), rat(-2));
        assert_eq!(q.eval_index(0), rat(1));
        assert_eq!(q.eval_index(1), rat(0));
        assert_eq!(q.eval_index(2), rat(-1));

        let q0 = fit_affine(1, 0, &BTreeMap::from([(1, -1)])).unwrap();
        assert_eq!(q0.eval_index(0), rat(0));
        assert_eq!(q0.eval_index(1), rat(-1));

        let q00 = fit_affine(2, 0, &BTreeMap::from([(1, 1), (2, 1)])).unwrap();
        assert_eq!(q00.coeff(&[1]), rat(1));
        assert_eq!(q00.coeff(&[2]), rat(1));
        assert!(q00.bias().is_zero());
    }

    #[test]
    fn extend_function_reference_case() {
        let f = identity1();
        let ext = extend_function(&f, 0, 1, &BTreeMap::from([(1, -1)])).unwrap();
        // F(z, x) = -2z + 2x - 1.
        assert_eq!(ext.coeff(&[1]), rat(-2));
        assert_eq!(ext.coeff(&[2]), rat(2));
        assert_eq!(ext.bias(), rat(-1));
        for x in 0..2usize {
            let attended = ext.eval_index(x << 1);
            assert_eq!(attended.is_positive(), x == 1);
            let off = ext.eval_index(1 | (x << 1));
            assert!(off.is_negative());
        }
    }

    #[test]
    fn composition_embedding_reference_cases() {
        let tuple =
            composition_embedding(&BooleanOpK::and2(), &[identity1(), identity1()]).unwrap();
        assert_eq!(tuple.n(), 2);
        let composed = tuple.composed_table().unwrap();
        // Both slices reproduce the identity.
        assert!(!composed.bit(0));
        assert!(composed.bit(2));
        assert!(!composed.bit(1));
        assert!(composed.bit(3));

        composition_embedding(&BooleanOpK::xor2(), &[identity1(), negation1()]).unwrap();
        for (_, op) in BooleanOpK::irreducible_binary() {
            composition_embedding(&op, &[or2_weights(), and2_weights()]).unwrap();
        }
    }

    #[test]
    fn linear_approximator_reproduces_identity_exactly() {
        let samples: Vec<Rat> = (0..=4).map(|i| ratio(i, 4)).collect();
        let sa = build_slice_approximator(&samples, ApproxVariant::Linear).unwrap();
        for numer in 0..=20 {
            let x = ratio(numer, 20);
            assert_eq!(evaluate_approximator(&sa, &x).unwrap(), x);
        }
        assert!(evaluate_approximator(&sa, &rat(2)).is_err());
        assert!(matches!(
            build_slice_approximator(&[rat(1)], ApproxVariant::Linear),
            Err(ConstructError::TooFewSamples(1))
        ));
    }

    #[test]
    fn approximators_match_square_samples() {
        let samples: Vec<Rat> = (0..=10).map(|i| ratio(i, 10) * ratio(i, 10)).collect();
        let linear = build_slice_approximator(&samples, ApproxVariant::Linear).unwrap();
        // Exact at every sampled boundary.
        for k in 0..=10 {
            let x = ratio(k, 10);
            assert_eq!(evaluate_approximator(&linear, &x).unwrap(), &x * &x);
        }
        // Worst case sits at slice midpoints: error exactly 1/400.
        let mid = ratio(1, 20);
        let err = evaluate_approximator(&linear, &mid).unwrap() - &mid * &mid;
        assert_eq!(err.abs(), ratio(1, 400));

        let constant = build_slice_approximator(&samples, ApproxVariant::Constant).unwrap();
        // Constant variant returns the left sample on each slice.
        assert_eq!(
            evaluate_approximator(&constant, &ratio(95, 100)).unwrap(),
            ratio(81, 100)
        );
        assert_eq!(
            evaluate_approximator(&constant, &Rat::one()).unwrap(),
            ratio(81, 100)
        );
    }

    #[test]
    fn approximator_network_agrees_with_closed_form() {
        let samples: Vec<Rat> = (0..=10).map(|i| ratio(i, 10) * ratio(i, 10)).collect();
        for variant in [ApproxVariant::Linear, ApproxVariant::Constant] {
            let sa = build_slice_approximator(&samples, variant).unwrap();
            let net = approximator_network(&sa);
            for numer in 0..=40 {
                let x = ratio(numer, 40);
                let closed = evaluate_approximator(&sa, &x).unwrap();
                let exact = net.evaluate_exact(std::slice::from_ref(&x)).unwrap();
                assert_eq!(exact.outputs[0], closed, "variant {variant:?} at {numer}/40");
                let (f, _) = net.evaluate(&[rat_to_f64(&x)]).unwrap();
                assert!((f[0] - rat_to_f64(&closed)).abs() < 1e-12);
            }
        }
    }
}
