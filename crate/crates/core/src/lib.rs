//! Exact, desk-scale laboratory for threshold functions and multiplicative
//! gating.
//!
//! The crate enumerates classes of linear and polynomial threshold functions
//! on the Boolean cube, counts their gated compositions exactly, builds the
//! classical gating constructions (corner separators, multiplexing, product
//! decompositions, composition embeddings, sliced universal approximators),
//! and simulates feedforward networks extended with output gating, synaptic
//! gating, and additive attention, up to a small attention encoder assembled
//! entirely from those operations.
//!
//! All counting is exact: separability decisions are made by a rational
//! feasibility oracle that returns margin-1 weight certificates, and class
//! members are deduplicated as canonical truth tables.

// Index loops over packed cube coordinates and tableau columns read better
// than the iterator rewrites clippy proposes here.
#![allow(clippy::needless_range_loop)]

pub mod boolfn;
pub mod constructs;
pub mod gating;
pub mod lp;
pub mod netsim;
pub mod rational;
pub mod rng;
pub mod threshold;
pub mod transformer;

pub use boolfn::{BooleanOpK, Encoding, FunctionClass, TruthTable};
pub use netsim::{EvalTrace, GatingNetwork};
pub use rational::Rat;
pub use threshold::{PolyWeights, ThresholdKind};
