//! Canonical truth tables and set algebra for Boolean functions.
//!
//! A function of `n` variables is stored as a packed vector of `2^n` output
//! bits indexed by the integer whose binary digits are the 0/1 input
//! coordinates, with `x1` the least significant bit. The same bit vector can
//! be read in two output encodings: `ZeroOne` (bit b means b) and `PlusMinus`
//! (bit b means 2b-1). Re-encoding flips only the interpretation tag, never
//! the bits.
//!
//! The canonical text form used by reports and fixtures is
//! `n:<arity>;enc:<01|pm>;bits:<hex>`, hex little-endian by input index
//! (the first digit holds inputs 0..=3).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on table arity: `2^26` bits is 8 MiB, the largest table the
/// exhaustive tooling is allowed to materialize.
pub const MAX_ARITY: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("arity {n} exceeds the exhaustive-table limit {MAX_ARITY}")]
    ArityTooLarge { n: usize },
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operator takes {k} arguments but {found} were supplied")]
    OperatorArityMismatch { k: usize, found: usize },
    #[error("arguments mix 0/1 and -/+ encodings; re-encode explicitly first")]
    MixedEncodings,
    #[error("expected {expected:?} encoding, found {found:?}")]
    EncodingMismatch { expected: Encoding, found: Encoding },
    #[error("malformed truth-table text `{0}`")]
    BadCanonicalText(String),
    #[error("operator table must have 2^k entries (k={k}, found {found})")]
    BadOperatorTable { k: usize, found: usize },
}

/// Interpretation of a stored output bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Encoding {
    /// Bit b is the output b (false = 0, true = 1).
    #[serde(rename = "01")]
    ZeroOne,
    /// Bit b is the output 2b - 1 (false = -1, true = +1).
    #[serde(rename = "pm")]
    PlusMinus,
}

impl Encoding {
    pub fn tag(self) -> &'static str {
        match self {
            Encoding::ZeroOne => "01",
            Encoding::PlusMinus => "pm",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "01" => Some(Encoding::ZeroOne),
            "pm" => Some(Encoding::PlusMinus),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Encoding::ZeroOne => Encoding::PlusMinus,
            Encoding::PlusMinus => Encoding::ZeroOne,
        }
    }
}

/// Decodes input index `index` into its 0/1 coordinates (x1 first).
pub fn assignment(n: usize, index: usize) -> Vec<bool> {
    (0..n).map(|i| (index >> i) & 1 == 1).collect()
}

/// Encodes 0/1 coordinates (x1 first) into the table index.
pub fn input_index(coords: &[bool]) -> usize {
    coords
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i))
}

/// A Boolean function of `n` variables as a packed `2^n`-bit vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthTable {
    n: usize,
    encoding: Encoding,
    bits: Vec<u64>,
}

impl TruthTable {
    fn word_count(n: usize) -> usize {
        (1usize << n).div_ceil(64)
    }

    fn check_arity(n: usize) -> Result<(), BoolFnError> {
        if n > MAX_ARITY {
            return Err(BoolFnError::ArityTooLarge { n });
        }
        Ok(())
    }

    /// Builds the table of `evaluator` over all `2^n` assignments, in
    /// canonical index order.
    pub fn tabulate<F>(n: usize, encoding: Encoding, mut evaluator: F) -> Result<Self, BoolFnError>
    where
        F: FnMut(&[bool]) -> bool,
    {
        Self::check_arity(n)?;
        let mut bits = vec![0u64; Self::word_count(n)];
        let mut coords = vec![false; n];
        for index in 0..1usize << n {
            for (i, c) in coords.iter_mut().enumerate() {
                *c = (index >> i) & 1 == 1;
            }
            if evaluator(&coords) {
                bits[index / 64] |= 1u64 << (index % 64);
            }
        }
        Ok(Self { n, encoding, bits })
    }

    /// Builds a table of up to 64 inputs' worth of bits from a mask
    /// (bit i of `mask` is the output at input index i). Only for n <= 6.
    pub fn from_mask(n: usize, encoding: Encoding, mask: u64) -> Result<Self, BoolFnError> {
        Self::check_arity(n)?;
        if n > 6 {
            return Err(BoolFnError::ArityTooLarge { n });
        }
        let points = 1usize << n;
        let keep = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
        Ok(Self {
            n,
            encoding,
            bits: vec![mask & keep],
        })
    }

    /// The packed bits as a single word; only defined for n <= 6.
    pub fn mask(&self) -> Option<u64> {
        if self.n <= 6 {
            Some(self.bits[0])
        } else {
            None
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn points(&self) -> usize {
        1usize << self.n
    }

    /// Raw output bit at input index.
    pub fn bit(&self, index: usize) -> bool {
        debug_assert!(index < self.points());
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    /// Output value at input index under the table's encoding: 0/1 for
    /// `ZeroOne`, -1/+1 for `PlusMinus`.
    pub fn value(&self, index: usize) -> i8 {
        match (self.encoding, self.bit(index)) {
            (Encoding::ZeroOne, b) => b as i8,
            (Encoding::PlusMinus, true) => 1,
            (Encoding::PlusMinus, false) => -1,
        }
    }

    /// Same bits under the other interpretation tag (an involution).
    pub fn toggled_encoding(&self) -> Self {
        Self {
            n: self.n,
            encoding: self.encoding.flipped(),
            bits: self.bits.clone(),
        }
    }

    /// Same bits under the requested interpretation tag.
    pub fn with_encoding(&self, encoding: Encoding) -> Self {
        Self {
            n: self.n,
            encoding,
            bits: self.bits.clone(),
        }
    }

    /// Pointwise negation (complements every output bit in either encoding).
    pub fn negated(&self) -> Self {
        let points = self.points();
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        let tail = points % 64;
        if tail != 0 {
            *bits.last_mut().expect("nonempty") &= (1u64 << tail) - 1;
        }
        Self {
            n: self.n,
            encoding: self.encoding,
            bits,
        }
    }

    /// Number of inputs mapped to the "false" output (0 or -1): the off-set.
    pub fn off_set_size(&self) -> usize {
        self.points() - self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    /// Input indices mapped to the "false" output, ascending.
    pub fn off_set(&self) -> Vec<usize> {
        (0..self.points()).filter(|&i| !self.bit(i)).collect()
    }

    /// Canonical text form `n:<arity>;enc:<tag>;bits:<hex>`.
    pub fn canonical_text(&self) -> String {
        let digits = self.points().div_ceil(4);
        let mut hex = String::with_capacity(digits);
        for d in 0..digits {
            let nibble = (self.bits[d / 16] >> (4 * (d % 16))) & 0xF;
            hex.push(char::from_digit(nibble as u32, 16).expect("nibble"));
        }
        format!("n:{};enc:{};bits:{}", self.n, self.encoding.tag(), hex)
    }

    /// Parses the canonical text form.
    pub fn parse_canonical(text: &str) -> Result<Self, BoolFnError> {
        let bad = || BoolFnError::BadCanonicalText(text.to_string());
        let mut parts = text.split(';');
        let n_part = parts.next().ok_or_else(bad)?;
        let enc_part = parts.next().ok_or_else(bad)?;
        let bits_part = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let n: usize = n_part.strip_prefix("n:").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Self::check_arity(n)?;
        let encoding = Encoding::from_tag(enc_part.strip_prefix("enc:").ok_or_else(bad)?).ok_or_else(bad)?;
        let hex = bits_part.strip_prefix("bits:").ok_or_else(bad)?;
        let points = 1usize << n;
        let digits = points.div_ceil(4);
        if hex.len() != digits {
            return Err(bad());
        }
        let mut bits = vec![0u64; Self::word_count(n)];
        for (d, ch) in hex.chars().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(bad)? as u64;
            bits[d / 16] |= nibble << (4 * (d % 16));
        }
        let tail = points % 4;
        if tail != 0 {
            let last = hex.chars().last().expect("nonempty").to_digit(16).expect("hex") as u64;
            if last >> tail != 0 {
                return Err(bad());
            }
        }
        Ok(Self { n, encoding, bits })
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl Serialize for TruthTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical_text())
    }
}

impl<'de> Deserialize<'de> for TruthTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        TruthTable::parse_canonical(&text).map_err(serde::de::Error::custom)
    }
}

/// A Boolean operator of `k` arguments given by its full table over -/+
/// argument tuples; entry index uses z1 as the least significant bit, with
/// bit value 1 meaning argument +1 (or "true").
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BooleanOpK {
    k: usize,
    table: Vec<bool>,
}

impl BooleanOpK {
    pub fn from_table(k: usize, table: Vec<bool>) -> Result<Self, BoolFnError> {
        if table.len() != 1usize << k {
            return Err(BoolFnError::BadOperatorTable { k, found: table.len() });
        }
        Ok(Self { k, table })
    }

    pub fn from_fn<F: FnMut(&[bool]) -> bool>(k: usize, mut f: F) -> Self {
        let table = (0..1usize << k)
            .map(|idx| {
                let args = assignment(k, idx);
                f(&args)
            })
            .collect();
        Self { k, table }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Applies the operator to -/+ arguments given as bools (true = +1).
    pub fn apply(&self, args: &[bool]) -> Result<bool, BoolFnError> {
        if args.len() != self.k {
            return Err(BoolFnError::OperatorArityMismatch {
                k: self.k,
                found: args.len(),
            });
        }
        Ok(self.table[input_index(args)])
    }

    /// True iff flipping argument `i` changes the output for some assignment
    /// of the remaining arguments.
    pub fn depends_on(&self, i: usize) -> bool {
        let stride = 1usize << i;
        (0..self.table.len())
            .filter(|idx| idx & stride == 0)
            .any(|idx| self.table[idx] != self.table[idx | stride])
    }

    /// True iff the operator depends on every one of its arguments.
    pub fn is_irreducible(&self) -> bool {
        (0..self.k).all(|i| self.depends_on(i))
    }

    /// True iff invariant under every permutation of its arguments.
    pub fn is_symmetric(&self) -> bool {
        // A function is symmetric iff its output depends only on the number
        // of +1 arguments.
        let mut by_weight: Vec<Option<bool>> = vec![None; self.k + 1];
        for (idx, &out) in self.table.iter().enumerate() {
            let weight = idx.count_ones() as usize;
            match by_weight[weight] {
                None => by_weight[weight] = Some(out),
                Some(prev) if prev != out => return false,
                Some(_) => {}
            }
        }
        true
    }

    /// The operator's own table as a TruthTable over its arguments.
    pub fn as_truth_table(&self, encoding: Encoding) -> TruthTable {
        TruthTable::tabulate(self.k, encoding, |args| self.table[input_index(args)])
            .expect("operator arity is tiny")
    }

    pub fn not1() -> Self {
        Self::from_fn(1, |a| !a[0])
    }

    pub fn identity1() -> Self {
        Self::from_fn(1, |a| a[0])
    }

    pub fn and2() -> Self {
        Self::from_fn(2, |a| a[0] && a[1])
    }

    pub fn or2() -> Self {
        Self::from_fn(2, |a| a[0] || a[1])
    }

    pub fn xor2() -> Self {
        Self::from_fn(2, |a| a[0] ^ a[1])
    }

    /// NXOR is the pointwise product in the -/+ encoding.
    pub fn nxor2() -> Self {
        Self::from_fn(2, |a| !(a[0] ^ a[1]))
    }

    /// Pointwise -/+ product of `k` arguments (true iff an even number of
    /// arguments are -1).
    pub fn product(k: usize) -> Self {
        Self::from_fn(k, |args| args.iter().filter(|&&b| !b).count() % 2 == 0)
    }

    /// The 16 binary operators with their conventional names.
    pub fn all_binary() -> Vec<(&'static str, Self)> {
        vec![
            ("F", Self::from_fn(2, |_| false)),
            ("T", Self::from_fn(2, |_| true)),
            ("p", Self::from_fn(2, |a| a[0])),
            ("q", Self::from_fn(2, |a| a[1])),
            ("not_p", Self::from_fn(2, |a| !a[0])),
            ("not_q", Self::from_fn(2, |a| !a[1])),
            ("and", Self::and2()),
            ("or", Self::or2()),
            ("nand", Self::from_fn(2, |a| !(a[0] && a[1]))),
            ("nor", Self::from_fn(2, |a| !(a[0] || a[1]))),
            ("xor", Self::xor2()),
            ("nxor", Self::nxor2()),
            ("p_and_not_q", Self::from_fn(2, |a| a[0] && !a[1])),
            ("not_p_and_q", Self::from_fn(2, |a| !a[0] && a[1])),
            ("p_or_not_q", Self::from_fn(2, |a| a[0] || !a[1])),
            ("not_p_or_q", Self::from_fn(2, |a| !a[0] || a[1])),
        ]
    }

    /// Looks up a binary operator by its conventional name
    /// (case-insensitive).
    pub fn binary_by_name(name: &str) -> Option<Self> {
        let lowered = name.to_ascii_lowercase();
        Self::all_binary()
            .into_iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(&lowered))
            .map(|(_, op)| op)
    }

    /// The ten irreducible binary operators, in canonical name order.
    pub fn irreducible_binary() -> Vec<(&'static str, Self)> {
        Self::all_binary()
            .into_iter()
            .filter(|(_, op)| op.is_irreducible())
            .collect()
    }
}

/// Applies operator `b` pointwise to argument tables.
///
/// All arguments must share the arity and the -/+ encoding; a uniform set of
/// 0/1 tables is re-encoded to -/+ first, but mixing the two encodings is an
/// error. The output is in -/+ encoding.
pub fn combine(b: &BooleanOpK, args: &[&TruthTable]) -> Result<TruthTable, BoolFnError> {
    if args.len() != b.arity() {
        return Err(BoolFnError::OperatorArityMismatch {
            k: b.arity(),
            found: args.len(),
        });
    }
    let n = args
        .first()
        .map(|t| t.n())
        .ok_or(BoolFnError::OperatorArityMismatch { k: b.arity(), found: 0 })?;
    if args.iter().any(|t| t.n() != n) {
        return Err(BoolFnError::ArityMismatch {
            expected: n,
            found: args.iter().map(|t| t.n()).find(|&m| m != n).expect("mismatch"),
        });
    }
    let first_encoding = args[0].encoding();
    if args.iter().any(|t| t.encoding() != first_encoding) {
        return Err(BoolFnError::MixedEncodings);
    }
    let mut arg_bits = vec![false; args.len()];
    let mut table = TruthTable::tabulate(n, Encoding::PlusMinus, |_| false)?;
    for index in 0..1usize << n {
        for (slot, t) in arg_bits.iter_mut().zip(args.iter()) {
            *slot = t.bit(index);
        }
        if b.table[input_index(&arg_bits)] {
            table.bits[index / 64] |= 1u64 << (index % 64);
        }
    }
    Ok(table)
}

/// A deduplicated set of truth tables sharing arity and encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionClass {
    n: usize,
    encoding: Encoding,
    members: BTreeSet<TruthTable>,
}

impl FunctionClass {
    pub fn new(n: usize, encoding: Encoding) -> Result<Self, BoolFnError> {
        TruthTable::check_arity(n)?;
        Ok(Self {
            n,
            encoding,
            members: BTreeSet::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    /// Inserts a member; returns whether it was new. Idempotent.
    pub fn insert(&mut self, table: TruthTable) -> Result<bool, BoolFnError> {
        if table.n() != self.n {
            return Err(BoolFnError::ArityMismatch {
                expected: self.n,
                found: table.n(),
            });
        }
        if table.encoding() != self.encoding {
            return Err(BoolFnError::EncodingMismatch {
                expected: self.encoding,
                found: table.encoding(),
            });
        }
        Ok(self.members.insert(table))
    }

    pub fn contains(&self, table: &TruthTable) -> bool {
        self.members.contains(table)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in canonical (bit-vector) order.
    pub fn iter(&self) -> impl Iterator<Item = &TruthTable> {
        self.members.iter()
    }

    /// Associative union for partition-then-merge parallel construction.
    pub fn merge(&mut self, other: FunctionClass) -> Result<(), BoolFnError> {
        if other.n != self.n {
            return Err(BoolFnError::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if other.encoding != self.encoding {
            return Err(BoolFnError::EncodingMismatch {
                expected: self.encoding,
                found: other.encoding,
            });
        }
        self.members.extend(other.members);
        Ok(())
    }

    pub fn is_subset_of(&self, other: &FunctionClass) -> bool {
        self.members.is_subset(&other.members)
    }

    /// The same members re-tagged with the other encoding.
    pub fn toggled_encoding(&self) -> FunctionClass {
        FunctionClass {
            n: self.n,
            encoding: self.encoding.flipped(),
            members: self.members.iter().map(|t| t.toggled_encoding()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_bits(t: &TruthTable) -> Vec<u8> {
        (0..t.points()).map(|i| t.bit(i) as u8).collect()
    }

    #[test]
    fn tabulate_or_nand_identity() {
        let or = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0] || x[1]).unwrap();
        assert_eq!(table_bits(&or), vec![0, 1, 1, 1]);
        let nand = TruthTable::tabulate(2, Encoding::ZeroOne, |x| !(x[0] && x[1])).unwrap();
        assert_eq!(table_bits(&nand), vec![1, 1, 1, 0]);
        let id = TruthTable::tabulate(1, Encoding::ZeroOne, |x| x[0]).unwrap();
        assert_eq!(table_bits(&id), vec![0, 1]);
    }

    #[test]
    fn product_of_or_and_nand_is_xor() {
        let or = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] || x[1]).unwrap();
        let nand = TruthTable::tabulate(2, Encoding::PlusMinus, |x| !(x[0] && x[1])).unwrap();
        let product = combine(&BooleanOpK::nxor2(), &[&or, &nand]).unwrap();
        let xor = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] ^ x[1]).unwrap();
        assert_eq!(product, xor);
        assert_eq!(
            (0..4).map(|i| product.value(i)).collect::<Vec<i8>>(),
            vec![-1, 1, 1, -1]
        );
    }

    #[test]
    fn combine_re_encodes_uniform_zero_one_args() {
        let f01 = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0] && x[1]).unwrap();
        let combined = combine(&BooleanOpK::identity1(), &[&f01]);
        // Arity mismatch with unary op and one arg is fine; encoding becomes -/+.
        let combined = combined.unwrap();
        assert_eq!(combined.encoding(), Encoding::PlusMinus);
        assert_eq!(table_bits(&combined), table_bits(&f01));
    }

    #[test]
    fn combine_rejects_mixed_encodings_and_arity() {
        let a = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0]).unwrap();
        let b = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[1]).unwrap();
        assert_eq!(
            combine(&BooleanOpK::and2(), &[&a, &b]).unwrap_err(),
            BoolFnError::MixedEncodings
        );
        let c = TruthTable::tabulate(1, Encoding::PlusMinus, |x| x[0]).unwrap();
        assert!(matches!(
            combine(&BooleanOpK::and2(), &[&b, &c]).unwrap_err(),
            BoolFnError::ArityMismatch { .. }
        ));
        assert!(matches!(
            combine(&BooleanOpK::and2(), &[&b]).unwrap_err(),
            BoolFnError::OperatorArityMismatch { .. }
        ));
    }

    #[test]
    fn and_is_idempotent_and_xor_has_identity() {
        let f = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] && !x[1]).unwrap();
        assert_eq!(combine(&BooleanOpK::and2(), &[&f, &f]).unwrap(), f);
        let constant_false = TruthTable::tabulate(2, Encoding::PlusMinus, |_| false).unwrap();
        assert_eq!(combine(&BooleanOpK::xor2(), &[&f, &constant_false]).unwrap(), f);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(BooleanOpK::and2().is_irreducible());
        let projection = BooleanOpK::from_fn(2, |a| a[0]);
        assert!(!projection.is_irreducible());
        let constant = BooleanOpK::from_fn(2, |_| true);
        assert!(!constant.is_irreducible());
    }

    #[test]
    fn exactly_ten_irreducible_eight_symmetric_binary_ops() {
        let ops = BooleanOpK::all_binary();
        assert_eq!(ops.len(), 16);
        let irreducible = ops.iter().filter(|(_, op)| op.is_irreducible()).count();
        assert_eq!(irreducible, 10);
        let symmetric = ops.iter().filter(|(_, op)| op.is_symmetric()).count();
        assert_eq!(symmetric, 8);
    }

    #[test]
    fn canonical_text_matches_layout() {
        let or = TruthTable::tabulate(2, Encoding::ZeroOne, |x| x[0] || x[1]).unwrap();
        assert_eq!(or.canonical_text(), "n:2;enc:01;bits:e");
        let parsed = TruthTable::parse_canonical("n:2;enc:01;bits:e").unwrap();
        assert_eq!(parsed, or);
        let id = TruthTable::tabulate(1, Encoding::PlusMinus, |x| x[0]).unwrap();
        assert_eq!(id.canonical_text(), "n:1;enc:pm;bits:2");
    }

    #[test]
    fn parse_rejects_padding_violations() {
        // n=1 has 2 live bits; a digit with bit 2 set is out of range.
        assert!(TruthTable::parse_canonical("n:1;enc:pm;bits:4").is_err());
        assert!(TruthTable::parse_canonical("n:2;enc:xx;bits:e").is_err());
        assert!(TruthTable::parse_canonical("n:2;enc:01;bits:ee").is_err());
        assert!(TruthTable::parse_canonical("garbage").is_err());
    }

    #[test]
    fn class_insert_is_idempotent_and_checked() {
        let mut class = FunctionClass::new(2, Encoding::PlusMinus).unwrap();
        let f = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0]).unwrap();
        assert!(class.insert(f.clone()).unwrap());
        assert!(!class.insert(f.clone()).unwrap());
        assert_eq!(class.len(), 1);
        let wrong_enc = f.toggled_encoding();
        assert!(class.insert(wrong_enc).is_err());
        let wrong_n = TruthTable::tabulate(1, Encoding::PlusMinus, |x| x[0]).unwrap();
        assert!(class.insert(wrong_n).is_err());
    }

    #[test]
    fn off_set_counts_false_outputs() {
        let xor = TruthTable::tabulate(2, Encoding::PlusMinus, |x| x[0] ^ x[1]).unwrap();
        assert_eq!(xor.off_set(), vec![0, 3]);
        assert_eq!(xor.off_set_size(), 2);
        let t = TruthTable::tabulate(2, Encoding::PlusMinus, |_| true).unwrap();
        assert_eq!(t.off_set_size(), 0);
    }

    #[test]
    fn large_arity_is_rejected() {
        assert!(matches!(
            TruthTable::tabulate(27, Encoding::ZeroOne, |_| false),
            Err(BoolFnError::ArityTooLarge { n: 27 })
        ));
    }
}
