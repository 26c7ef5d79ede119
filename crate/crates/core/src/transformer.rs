//! A single attention encoder block assembled entirely from gating
//! operations.
//!
//! Token projections are shared linear maps; every query-key score is a
//! gated dot product (one output-gating op per coordinate); score rows pass
//! through an exp/sum/log/exp softmax; and the value mixture applies one
//! synaptic gate group per attention weight, so the whole block runs on the
//! network simulator with its gating ops counted exactly. No scaling,
//! residual connections, feedforward sublayer, or extra heads are included.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::netsim::{Activation, EvalTrace, GatingNetwork, NetError, NetworkBuilder};
use crate::rational::{rat_from_f64, Rat};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum TransformerError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("encoder needs n >= 1 tokens, d_in >= 1 coordinates, m >= 1 projections")]
    EmptyShape,
    #[error("projection {name} has shape {rows}x{cols}, expected {m}x{d_in}")]
    ProjectionShape {
        name: &'static str,
        rows: usize,
        cols: usize,
        m: usize,
        d_in: usize,
    },
    #[error("expected {expected} input rows of width {width}")]
    InputShape { expected: usize, width: usize },
    #[error("offsets cover {found} positions, expected {expected}")]
    OffsetLength { expected: usize, found: usize },
    #[error("not a permutation of 0..{n}")]
    BadPermutation { n: usize },
    #[error("projection weights and offsets must be finite")]
    NonFiniteWeight,
}

fn finite_rat(x: f64) -> Result<Rat, TransformerError> {
    rat_from_f64(x).ok_or(TransformerError::NonFiniteWeight)
}

/// Shape and shared projection weights of the encoder block.
#[derive(Debug, Clone, Serialize)]
pub struct EncoderConfig {
    /// Number of tokens.
    pub n: usize,
    /// Input coordinates per token.
    pub d_in: usize,
    /// Projection rows: queries, keys, and values are m-dimensional.
    pub m: usize,
    pub w_q: Vec<Vec<f64>>,
    pub w_k: Vec<Vec<f64>>,
    pub w_v: Vec<Vec<f64>>,
}

impl EncoderConfig {
    /// Uniform random projections in [-1, 1), reproducible from the seed.
    pub fn random(n: usize, d_in: usize, m: usize, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed).fork(0x7f0e);
        let mut matrix = |_: &str| -> Vec<Vec<f64>> {
            (0..m)
                .map(|_| (0..d_in).map(|_| rng.next_f64_in(-1.0, 1.0)).collect())
                .collect()
        };
        let w_q = matrix("q");
        let w_k = matrix("k");
        let w_v = matrix("v");
        EncoderConfig {
            n,
            d_in,
            m,
            w_q,
            w_k,
            w_v,
        }
    }

    fn validate(&self) -> Result<(), TransformerError> {
        if self.n == 0 || self.d_in == 0 || self.m == 0 {
            return Err(TransformerError::EmptyShape);
        }
        for (name, w) in [("W_Q", &self.w_q), ("W_K", &self.w_k), ("W_V", &self.w_v)] {
            let rows = w.len();
            let cols = w.first().map_or(0, Vec::len);
            if rows != self.m || w.iter().any(|r| r.len() != self.d_in) {
                return Err(TransformerError::ProjectionShape {
                    name,
                    rows,
                    cols,
                    m: self.m,
                    d_in: self.d_in,
                });
            }
        }
        Ok(())
    }
}

/// The assembled block: configuration plus its gating-network realization.
#[derive(Debug, Clone)]
pub struct Encoder {
    pub cfg: EncoderConfig,
    /// Per-position additive offsets (empty when none were requested).
    pub offsets: Vec<f64>,
    pub net: GatingNetwork,
}

/// Builds the position-free encoder network.
pub fn build_encoder(cfg: &EncoderConfig) -> Result<Encoder, TransformerError> {
    build_encoder_inner(cfg, None)
}

/// Same block with a constant offset added to every coordinate of token l;
/// distinct offsets deliberately break permutation equivariance.
pub fn build_encoder_with_offsets(
    cfg: &EncoderConfig,
    offsets: &[f64],
) -> Result<Encoder, TransformerError> {
    if offsets.len() != cfg.n {
        return Err(TransformerError::OffsetLength {
            expected: cfg.n,
            found: offsets.len(),
        });
    }
    build_encoder_inner(cfg, Some(offsets))
}

fn build_encoder_inner(
    cfg: &EncoderConfig,
    offsets: Option<&[f64]>,
) -> Result<Encoder, TransformerError> {
    cfg.validate()?;
    let (n, d_in, m) = (cfg.n, cfg.d_in, cfg.m);
    let mut b = NetworkBuilder::new();
    for l in 0..n {
        for j in 0..d_in {
            b.neuron(&format!("x{l}_{j}"), Activation::Identity, Rat::zero());
        }
    }
    // Token sources: raw inputs, or offset copies when positions are on.
    let source = |l: usize, j: usize| -> String {
        match offsets {
            None => format!("x{l}_{j}"),
            Some(_) => format!("emb{l}_{j}"),
        }
    };
    if let Some(offs) = offsets {
        for l in 0..n {
            for j in 0..d_in {
                let id = format!("emb{l}_{j}");
                b.neuron(&id, Activation::Identity, finite_rat(offs[l])?);
                b.edge(&format!("x{l}_{j}"), &id, Rat::one());
            }
        }
    }
    // Shared linear projections.
    for l in 0..n {
        for (prefix, w) in [("q", &cfg.w_q), ("k", &cfg.w_k), ("v", &cfg.w_v)] {
            for a in 0..m {
                let id = format!("{prefix}{l}_{a}");
                b.neuron(&id, Activation::Identity, Rat::zero());
                for j in 0..d_in {
                    b.edge(&source(l, j), &id, finite_rat(w[a][j])?);
                }
            }
        }
    }
    // Gated dot products: coordinate copies of q_l output-gated by the
    // matching coordinate of k_t, then summed into the score.
    for l in 0..n {
        for t in 0..n {
            for a in 0..m {
                let copy = format!("qk{l}_{t}_{a}");
                b.neuron(&copy, Activation::Identity, Rat::zero());
                b.edge(&format!("q{l}_{a}"), &copy, Rat::one());
                b.output_gate(&format!("k{t}_{a}"), &copy);
            }
            let score = format!("s{l}_{t}");
            b.neuron(&score, Activation::Identity, Rat::zero());
            for a in 0..m {
                b.edge(&format!("qk{l}_{t}_{a}"), &score, Rat::one());
            }
        }
    }
    // Row softmax: alpha = exp(s - log sum exp s).
    for l in 0..n {
        for t in 0..n {
            let e = format!("e{l}_{t}");
            b.neuron(&e, Activation::Exp, Rat::zero());
            b.edge(&format!("s{l}_{t}"), &e, Rat::one());
        }
        let z = format!("z{l}");
        b.neuron(&z, Activation::Identity, Rat::zero());
        for t in 0..n {
            b.edge(&format!("e{l}_{t}"), &z, Rat::one());
        }
        let logz = format!("logz{l}");
        b.neuron(&logz, Activation::Log, Rat::zero());
        b.edge(&z, &logz, Rat::one());
        for t in 0..n {
            let c = format!("c{l}_{t}");
            b.neuron(&c, Activation::Identity, Rat::zero());
            b.edge(&format!("s{l}_{t}"), &c, Rat::one());
            b.edge(&logz, &c, -Rat::one());
            let alpha = format!("a{l}_{t}");
            b.neuron(&alpha, Activation::Exp, Rat::zero());
            b.edge(&c, &alpha, Rat::one());
        }
    }
    // Value mixture: unit-weight edges v_t -> out_l, each row gated as one
    // group by the attention weight alpha_{l,t}.
    for l in 0..n {
        for a in 0..m {
            b.neuron(&format!("out{l}_{a}"), Activation::Identity, Rat::zero());
        }
        for t in 0..n {
            let group = format!("att{l}_{t}");
            let alpha = format!("a{l}_{t}");
            for a in 0..m {
                let from = format!("v{t}_{a}");
                let to = format!("out{l}_{a}");
                b.edge(&from, &to, Rat::one());
                b.grouped_synaptic_gate(&alpha, &from, &to, &group);
            }
        }
    }
    for l in 0..n {
        for j in 0..d_in {
            b.declare_input(&format!("x{l}_{j}"));
        }
    }
    for l in 0..n {
        for a in 0..m {
            b.declare_output(&format!("out{l}_{a}"));
        }
    }
    Ok(Encoder {
        cfg: cfg.clone(),
        offsets: offsets.map(<[f64]>::to_vec).unwrap_or_default(),
        net: b.build()?,
    })
}

fn check_inputs(cfg: &EncoderConfig, inputs: &[Vec<f64>]) -> Result<(), TransformerError> {
    if inputs.len() != cfg.n || inputs.iter().any(|row| row.len() != cfg.d_in) {
        return Err(TransformerError::InputShape {
            expected: cfg.n,
            width: cfg.d_in,
        });
    }
    Ok(())
}

/// Runs the block on n token rows, returning n rows of m mixed values plus
/// the simulator trace (with its gating-op counters).
pub fn forward(
    encoder: &Encoder,
    inputs: &[Vec<f64>],
) -> Result<(Vec<Vec<f64>>, EvalTrace), TransformerError> {
    check_inputs(&encoder.cfg, inputs)?;
    let flat: Vec<f64> = inputs.iter().flatten().copied().collect();
    let (out, trace) = encoder.net.evaluate(&flat)?;
    let rows = out.chunks(encoder.cfg.m).map(<[f64]>::to_vec).collect();
    Ok((rows, trace))
}

/// Independent oracle: softmax(X Wq^T (X Wk^T)^T) X Wv^T by plain matrix
/// arithmetic, no scaling, honoring any positional offsets.
pub fn reference_forward(
    encoder: &Encoder,
    inputs: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>, TransformerError> {
    let cfg = &encoder.cfg;
    check_inputs(cfg, inputs)?;
    let shifted: Vec<Vec<f64>> = inputs
        .iter()
        .enumerate()
        .map(|(l, row)| {
            let off = encoder.offsets.get(l).copied().unwrap_or(0.0);
            row.iter().map(|x| x + off).collect()
        })
        .collect();
    let project = |w: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        shifted
            .iter()
            .map(|row| {
                (0..cfg.m)
                    .map(|a| (0..cfg.d_in).map(|j| w[a][j] * row[j]).sum())
                    .collect()
            })
            .collect()
    };
    let q = project(&cfg.w_q);
    let k = project(&cfg.w_k);
    let v = project(&cfg.w_v);
    let mut out = Vec::with_capacity(cfg.n);
    for l in 0..cfg.n {
        let scores: Vec<f64> = (0..cfg.n)
            .map(|t| (0..cfg.m).map(|a| q[l][a] * k[t][a]).sum())
            .collect();
        let total: f64 = scores.iter().map(|s| s.exp()).sum();
        let alphas: Vec<f64> = scores.iter().map(|s| s.exp() / total).collect();
        out.push(
            (0..cfg.m)
                .map(|a| (0..cfg.n).map(|t| alphas[t] * v[t][a]).sum())
                .collect(),
        );
    }
    Ok(out)
}

/// Checks permutation equivariance: feeding the rows in permuted order must
/// permute the output rows the same way (up to float tolerance). Position
/// offsets are expected to break this.
pub fn permutation_check(
    encoder: &Encoder,
    inputs: &[Vec<f64>],
    perm: &[usize],
    tol: f64,
) -> Result<bool, TransformerError> {
    let n = encoder.cfg.n;
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(TransformerError::BadPermutation { n });
    }
    check_inputs(&encoder.cfg, inputs)?;
    let (base, _) = forward(encoder, inputs)?;
    let permuted: Vec<Vec<f64>> = perm.iter().map(|&p| inputs[p].clone()).collect();
    let (moved, _) = forward(encoder, &permuted)?;
    for i in 0..n {
        for a in 0..encoder.cfg.m {
            if (moved[i][a] - base[perm[i]][a]).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
