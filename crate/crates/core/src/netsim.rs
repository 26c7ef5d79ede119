//! Feedforward network simulator with multiplicative gating.
//!
//! A [`GatingNetwork`] is a plain sum-and-activate network extended with two
//! gate mechanisms: an output gate multiplies a neuron's post-activation
//! value by another neuron's output before it is broadcast downstream, and a
//! synaptic gate multiplies a single edge weight. Networks are immutable
//! after construction, evaluate in one deterministic topological pass, and
//! serialize to a fixed JSON layout with exact rational weights.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rat, parse_rat, rat, rat_to_f64, ratio, ParseRatError, Rat};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("duplicate neuron id `{0}`")]
    DuplicateNeuron(String),
    #[error("unknown neuron id `{id}` referenced by {context}")]
    UnknownNeuron { id: String, context: &'static str },
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: String, to: String },
    #[error("unknown edge {from} -> {to} referenced by a synaptic gate")]
    UnknownEdge { from: String, to: String },
    #[error("edges into declared input `{0}` are not allowed")]
    EdgeIntoInput(String),
    #[error("duplicate declared {role} `{id}`")]
    DuplicateTerminal { role: &'static str, id: String },
    #[error("neuron `{0}` is gated more than once (enable multi_gating to permit this)")]
    OutputGateMultiplicity(String),
    #[error("edge {from} -> {to} is gated more than once (enable multi_gating to permit this)")]
    SynapticGateMultiplicity { from: String, to: String },
    #[error("network contains a cycle through `{0}` (gate arcs count as dependencies)")]
    Cycle(String),
    #[error("expected {expected} input values, got {found}")]
    InputArity { expected: usize, found: usize },
    #[error("log activation at neuron `{neuron}` received non-positive activation {value}")]
    LogDomain { neuron: String, value: f64 },
    #[error("activation `{activation}` at neuron `{neuron}` has no exact rational evaluation")]
    NonExactActivation {
        neuron: String,
        activation: &'static str,
    },
    #[error("output gate on declared output `{0}` cannot be rewritten as synaptic gates")]
    GatedDeclaredOutput(String),
    #[error("id `{0}` collides after prefixing in a disjoint merge")]
    MergeCollision(String),
    #[error("malformed network JSON: {0}")]
    BadJson(String),
    #[error("bad weight: {0}")]
    BadWeight(#[from] ParseRatError),
}

/// Pointwise activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[serde(alias = "linear")]
    Identity,
    Heaviside,
    Sign,
    Relu,
    Logistic,
    Tanh,
    Exp,
    Log,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Identity => "identity",
            Activation::Heaviside => "heaviside",
            Activation::Sign => "sign",
            Activation::Relu => "relu",
            Activation::Logistic => "logistic",
            Activation::Tanh => "tanh",
            Activation::Exp => "exp",
            Activation::Log => "log",
        }
    }

    /// Applies the activation at a sample point; log outside its domain
    /// yields NaN here (the network evaluator turns that into an error).
    pub fn apply_f64(self, s: f64) -> f64 {
        match self {
            Activation::Identity => s,
            Activation::Heaviside => {
                if s > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sign => {
                if s < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            Activation::Relu => s.max(0.0),
            Activation::Logistic => 1.0 / (1.0 + (-s).exp()),
            Activation::Tanh => s.tanh(),
            Activation::Exp => s.exp(),
            Activation::Log => s.ln(),
        }
    }
}

#[derive(Debug, Clone)]
struct Neuron {
    id: String,
    activation: Activation,
    bias: Rat,
}

#[derive(Debug, Clone)]
struct Edge {
    from: usize,
    to: usize,
    weight: Rat,
    attention: bool,
}

#[derive(Debug, Clone)]
struct OutputGate {
    gater: usize,
    gated: usize,
}

#[derive(Debug, Clone)]
struct SynapticGate {
    gater: usize,
    edge: usize,
    group: Option<String>,
}

/// One applied gate multiplier in a forward pass.
#[derive(Debug, Clone, Serialize)]
pub struct GateApplication {
    pub kind: &'static str,
    pub gater: String,
    pub target: String,
    pub multiplier: f64,
}

/// Full record of one forward pass: activations, outputs, broadcast values
/// (after output gating), every applied gate multiplier, and the gating-op
/// counters.
#[derive(Debug, Clone, Serialize, Default)]
pub struct EvalTrace {
    pub s: BTreeMap<String, f64>,
    pub o: BTreeMap<String, f64>,
    pub broadcasts: BTreeMap<String, f64>,
    pub gate_applications: Vec<GateApplication>,
    pub output_gating_ops: u64,
    pub synaptic_gating_ops: u64,
    pub warnings: Vec<String>,
}

/// Exact forward pass result (threshold-style activations only).
#[derive(Debug, Clone)]
pub struct ExactEval {
    pub outputs: Vec<Rat>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    neurons: Vec<(String, Activation, Rat)>,
    edges: Vec<(String, String, Rat, bool)>,
    output_gates: Vec<(String, String)>,
    synaptic_gates: Vec<(String, String, String, Option<String>)>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    multi_gating: bool,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn neuron(&mut self, id: &str, activation: Activation, bias: Rat) -> &mut Self {
        self.neurons.push((id.to_string(), activation, bias));
        self
    }

    pub fn edge(&mut self, from: &str, to: &str, weight: Rat) -> &mut Self {
        self.edges
            .push((from.to_string(), to.to_string(), weight, false));
        self
    }

    /// An ordinary additive edge tagged as carrying an attention signal.
    pub fn attention_edge(&mut self, from: &str, to: &str, weight: Rat) -> &mut Self {
        self.edges
            .push((from.to_string(), to.to_string(), weight, true));
        self
    }

    pub fn output_gate(&mut self, gater: &str, gated: &str) -> &mut Self {
        self.output_gates
            .push((gater.to_string(), gated.to_string()));
        self
    }

    pub fn synaptic_gate(&mut self, gater: &str, from: &str, to: &str) -> &mut Self {
        self.synaptic_gates
            .push((gater.to_string(), from.to_string(), to.to_string(), None));
        self
    }

    /// Synaptic gate carrying a group label: gates sharing (gater, group)
    /// count as one op, modeling a vector-granularity gating operation.
    pub fn grouped_synaptic_gate(
        &mut self,
        gater: &str,
        from: &str,
        to: &str,
        group: &str,
    ) -> &mut Self {
        self.synaptic_gates.push((
            gater.to_string(),
            from.to_string(),
            to.to_string(),
            Some(group.to_string()),
        ));
        self
    }

    pub fn declare_input(&mut self, id: &str) -> &mut Self {
        self.inputs.push(id.to_string());
        self
    }

    pub fn declare_output(&mut self, id: &str) -> &mut Self {
        self.outputs.push(id.to_string());
        self
    }

    pub fn allow_multi_gating(&mut self) -> &mut Self {
        self.multi_gating = true;
        self
    }

    /// Validates and freezes the network: resolves ids, enforces gate
    /// multiplicity, and computes a deterministic topological order where
    /// gate arcs (gater before its target) count as dependencies.
    pub fn build(self) -> Result<GatingNetwork, NetError> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut neurons = Vec::with_capacity(self.neurons.len());
        for (id, activation, bias) in self.neurons {
            if index.insert(id.clone(), neurons.len()).is_some() {
                return Err(NetError::DuplicateNeuron(id));
            }
            neurons.push(Neuron {
                id,
                activation,
                bias,
            });
        }
        let resolve = |id: &str, context: &'static str| -> Result<usize, NetError> {
            index.get(id).copied().ok_or_else(|| NetError::UnknownNeuron {
                id: id.to_string(),
                context,
            })
        };

        let mut inputs = Vec::with_capacity(self.inputs.len());
        let mut input_set = BTreeSet::new();
        for id in &self.inputs {
            let i = resolve(id, "the input list")?;
            if !input_set.insert(i) {
                return Err(NetError::DuplicateTerminal {
                    role: "input",
                    id: id.clone(),
                });
            }
            inputs.push(i);
        }
        let mut outputs = Vec::with_capacity(self.outputs.len());
        let mut output_set = BTreeSet::new();
        for id in &self.outputs {
            let i = resolve(id, "the output list")?;
            if !output_set.insert(i) {
                return Err(NetError::DuplicateTerminal {
                    role: "output",
                    id: id.clone(),
                });
            }
            outputs.push(i);
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (from, to, weight, attention) in self.edges {
            let f = resolve(&from, "an edge")?;
            let t = resolve(&to, "an edge")?;
            if input_set.contains(&t) {
                return Err(NetError::EdgeIntoInput(to));
            }
            if edge_index.insert((f, t), edges.len()).is_some() {
                return Err(NetError::DuplicateEdge { from, to });
            }
            edges.push(Edge {
                from: f,
                to: t,
                weight,
                attention,
            });
        }

        let mut output_gates = Vec::with_capacity(self.output_gates.len());
        let mut gated_once: BTreeSet<usize> = BTreeSet::new();
        for (gater, gated) in self.output_gates {
            let g = resolve(&gater, "an output gate")?;
            let t = resolve(&gated, "an output gate")?;
            if !gated_once.insert(t) && !self.multi_gating {
                return Err(NetError::OutputGateMultiplicity(gated));
            }
            output_gates.push(OutputGate { gater: g, gated: t });
        }

        let mut synaptic_gates = Vec::with_capacity(self.synaptic_gates.len());
        let mut edge_gated_once: BTreeSet<usize> = BTreeSet::new();
        for (gater, from, to, group) in self.synaptic_gates {
            let g = resolve(&gater, "a synaptic gate")?;
            let f = resolve(&from, "a synaptic gate")?;
            let t = resolve(&to, "a synaptic gate")?;
            let e = *edge_index
                .get(&(f, t))
                .ok_or(NetError::UnknownEdge { from, to })?;
            if !edge_gated_once.insert(e) && !self.multi_gating {
                let edge = &edges[e];
                return Err(NetError::SynapticGateMultiplicity {
                    from: neurons[edge.from].id.clone(),
                    to: neurons[edge.to].id.clone(),
                });
            }
            synaptic_gates.push(SynapticGate {
                gater: g,
                edge: e,
                group,
            });
        }

        // Dependency arcs: edge from -> to; output gate gater -> gated;
        // synaptic gate gater -> the gated edge's head.
        let n = neurons.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &edges {
            preds[e.to].push(e.from);
        }
        for g in &output_gates {
            preds[g.gated].push(g.gater);
        }
        for g in &synaptic_gates {
            preds[edges[g.edge].to].push(g.gater);
        }
        let mut indegree: Vec<usize> = preds.iter().map(|p| p.len()).collect();
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (node, plist) in preds.iter().enumerate() {
            for &p in plist {
                succs[p].push(node);
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(&next) = ready.iter().next() {
            ready.remove(&next);
            topo.push(next);
            for &s in &succs[next] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.insert(s);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n)
                .find(|&i| indegree[i] > 0)
                .map(|i| neurons[i].id.clone())
                .unwrap_or_default();
            return Err(NetError::Cycle(stuck));
        }

        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ei, e) in edges.iter().enumerate() {
            incoming[e.to].push(ei);
        }
        let mut out_gaters: Vec<Vec<usize>> = vec![Vec::new(); n];
        for g in &output_gates {
            out_gaters[g.gated].push(g.gater);
        }
        let mut edge_gates: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (gi, g) in synaptic_gates.iter().enumerate() {
            edge_gates[g.edge].push(gi);
        }

        Ok(GatingNetwork {
            neurons,
            edges,
            output_gates,
            synaptic_gates,
            inputs,
            outputs,
            multi_gating: self.multi_gating,
            index,
            topo,
            incoming,
            out_gaters,
            edge_gates,
        })
    }
}

/// An immutable, validated gating network.
#[derive(Debug, Clone)]
pub struct GatingNetwork {
    neurons: Vec<Neuron>,
    edges: Vec<Edge>,
    output_gates: Vec<OutputGate>,
    synaptic_gates: Vec<SynapticGate>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    multi_gating: bool,
    index: BTreeMap<String, usize>,
    topo: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    out_gaters: Vec<Vec<usize>>,
    edge_gates: Vec<Vec<usize>>,
}

impl GatingNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    pub fn neuron_count(&self) -> usize {
        self.neurons.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn output_gate_count(&self) -> usize {
        self.output_gates.len()
    }

    pub fn synaptic_gate_count(&self) -> usize {
        self.synaptic_gates.len()
    }

    pub fn has_gates(&self) -> bool {
        !self.output_gates.is_empty() || !self.synaptic_gates.is_empty()
    }

    pub fn input_ids(&self) -> Vec<&str> {
        self.inputs.iter().map(|&i| self.neurons[i].id.as_str()).collect()
    }

    pub fn output_ids(&self) -> Vec<&str> {
        self.outputs.iter().map(|&i| self.neurons[i].id.as_str()).collect()
    }

    pub fn contains_neuron(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Gating ops per forward pass: each output gate applies once;
    /// synaptic gates sharing (gater, group) count as one vector op,
    /// ungrouped ones count individually.
    pub fn gating_op_counts(&self) -> (u64, u64) {
        let output_ops = self.output_gates.len() as u64;
        let mut grouped: BTreeSet<(usize, &str)> = BTreeSet::new();
        let mut singleton = 0u64;
        for g in &self.synaptic_gates {
            match &g.group {
                Some(label) => {
                    grouped.insert((g.gater, label.as_str()));
                }
                None => singleton += 1,
            }
        }
        (output_ops, grouped.len() as u64 + singleton)
    }

    fn input_position(&self, neuron: usize) -> Option<usize> {
        self.inputs.iter().position(|&i| i == neuron)
    }

    /// One forward pass in f64, with a full trace.
    pub fn evaluate(&self, inputs: &[f64]) -> Result<(Vec<f64>, EvalTrace), NetError> {
        if inputs.len() != self.inputs.len() {
            return Err(NetError::InputArity {
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        let n = self.neurons.len();
        let mut s = vec![0f64; n];
        let mut o = vec![0f64; n];
        let mut broadcast = vec![0f64; n];
        let mut trace = EvalTrace::default();
        for &k in &self.topo {
            if let Some(pos) = self.input_position(k) {
                s[k] = inputs[pos];
                o[k] = inputs[pos];
            } else {
                let neuron = &self.neurons[k];
                let mut acc = rat_to_f64(&neuron.bias);
                for &ei in &self.incoming[k] {
                    let edge = &self.edges[ei];
                    let mut w = rat_to_f64(&edge.weight);
                    for &gi in &self.edge_gates[ei] {
                        let gater = self.synaptic_gates[gi].gater;
                        w *= broadcast[gater];
                        trace.gate_applications.push(GateApplication {
                            kind: "synaptic",
                            gater: self.neurons[gater].id.clone(),
                            target: format!(
                                "{}->{}",
                                self.neurons[edge.from].id, self.neurons[edge.to].id
                            ),
                            multiplier: broadcast[gater],
                        });
                    }
                    acc += w * broadcast[edge.from];
                }
                s[k] = acc;
                if neuron.activation == Activation::Log && acc <= 0.0 {
                    return Err(NetError::LogDomain {
                        neuron: neuron.id.clone(),
                        value: acc,
                    });
                }
                if neuron.activation == Activation::Sign && acc == 0.0 {
                    trace
                        .warnings
                        .push(format!("sign(0) at neuron `{}` resolved to +1", neuron.id));
                }
                o[k] = neuron.activation.apply_f64(acc);
            }
            let mut b = o[k];
            for &g in &self.out_gaters[k] {
                b *= broadcast[g];
                trace.gate_applications.push(GateApplication {
                    kind: "output",
                    gater: self.neurons[g].id.clone(),
                    target: self.neurons[k].id.clone(),
                    multiplier: broadcast[g],
                });
            }
            broadcast[k] = b;
        }
        for (i, neuron) in self.neurons.iter().enumerate() {
            trace.s.insert(neuron.id.clone(), s[i]);
            trace.o.insert(neuron.id.clone(), o[i]);
            trace.broadcasts.insert(neuron.id.clone(), broadcast[i]);
        }
        let (output_ops, synaptic_ops) = self.gating_op_counts();
        trace.output_gating_ops = output_ops;
        trace.synaptic_gating_ops = synaptic_ops;
        let outputs = self.outputs.iter().map(|&i| broadcast[i]).collect();
        Ok((outputs, trace))
    }

    /// Exact forward pass; requires every non-input activation to be
    /// identity, sign, heaviside, or relu.
    pub fn evaluate_exact(&self, inputs: &[Rat]) -> Result<ExactEval, NetError> {
        if inputs.len() != self.inputs.len() {
            return Err(NetError::InputArity {
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        let n = self.neurons.len();
        let mut broadcast: Vec<Rat> = vec![Rat::zero(); n];
        let mut warnings = Vec::new();
        for &k in &self.topo {
            let value = if let Some(pos) = self.input_position(k) {
                inputs[pos].clone()
            } else {
                let neuron = &self.neurons[k];
                let mut acc = neuron.bias.clone();
                for &ei in &self.incoming[k] {
                    let edge = &self.edges[ei];
                    let mut w = edge.weight.clone();
                    for &gi in &self.edge_gates[ei] {
                        w *= &broadcast[self.synaptic_gates[gi].gater];
                    }
                    acc += w * &broadcast[edge.from];
                }
                match neuron.activation {
                    Activation::Identity => acc,
                    Activation::Heaviside => {
                        if acc.is_positive() {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    }
                    Activation::Sign => {
                        if acc.is_negative() {
                            -Rat::one()
                        } else {
                            if acc.is_zero() {
                                warnings.push(format!(
                                    "sign(0) at neuron `{}` resolved to +1",
                                    neuron.id
                                ));
                            }
                            Rat::one()
                        }
                    }
                    Activation::Relu => {
                        if acc.is_positive() {
                            acc
                        } else {
                            Rat::zero()
                        }
                    }
                    other => {
                        return Err(NetError::NonExactActivation {
                            neuron: neuron.id.clone(),
                            activation: other.name(),
                        })
                    }
                }
            };
            let mut b = value;
            for &g in &self.out_gaters[k] {
                b *= &broadcast[g];
            }
            broadcast[k] = b;
        }
        let outputs = self.outputs.iter().map(|&i| broadcast[i].clone()).collect();
        Ok(ExactEval { outputs, warnings })
    }

    fn to_builder(&self) -> NetworkBuilder {
        let mut b = NetworkBuilder::new();
        for neuron in &self.neurons {
            b.neuron(&neuron.id, neuron.activation, neuron.bias.clone());
        }
        for edge in &self.edges {
            let from = &self.neurons[edge.from].id;
            let to = &self.neurons[edge.to].id;
            if edge.attention {
                b.attention_edge(from, to, edge.weight.clone());
            } else {
                b.edge(from, to, edge.weight.clone());
            }
        }
        for g in &self.output_gates {
            b.output_gate(&self.neurons[g.gater].id, &self.neurons[g.gated].id);
        }
        for g in &self.synaptic_gates {
            let edge = &self.edges[g.edge];
            let from = &self.neurons[edge.from].id;
            let to = &self.neurons[edge.to].id;
            match &g.group {
                Some(label) => b.grouped_synaptic_gate(&self.neurons[g.gater].id, from, to, label),
                None => b.synaptic_gate(&self.neurons[g.gater].id, from, to),
            };
        }
        for &i in &self.inputs {
            b.declare_input(&self.neurons[i].id);
        }
        for &i in &self.outputs {
            b.declare_output(&self.neurons[i].id);
        }
        if self.multi_gating {
            b.allow_multi_gating();
        }
        b
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            neurons: self
                .neurons
                .iter()
                .map(|n| NeuronFile {
                    id: n.id.clone(),
                    activation: n.activation,
                    bias: format_rat(&n.bias),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.neurons[e.from].id.clone(),
                    to: self.neurons[e.to].id.clone(),
                    weight: format_rat(&e.weight),
                    attention: e.attention,
                })
                .collect(),
            output_gates: self
                .output_gates
                .iter()
                .map(|g| OutputGateFile {
                    gater: self.neurons[g.gater].id.clone(),
                    gated: self.neurons[g.gated].id.clone(),
                })
                .collect(),
            synaptic_gates: self
                .synaptic_gates
                .iter()
                .map(|g| {
                    let edge = &self.edges[g.edge];
                    SynapticGateFile {
                        gater: self.neurons[g.gater].id.clone(),
                        from: self.neurons[edge.from].id.clone(),
                        to: self.neurons[edge.to].id.clone(),
                        group: g.group.clone(),
                    }
                })
                .collect(),
            inputs: self.input_ids().iter().map(|s| s.to_string()).collect(),
            outputs: self.output_ids().iter().map(|s| s.to_string()).collect(),
            multi_gating: self.multi_gating,
        };
        serde_json::to_string_pretty(&file).expect("network file serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        let file: NetworkFile =
            serde_json::from_str(text).map_err(|e| NetError::BadJson(e.to_string()))?;
        let mut b = NetworkBuilder::new();
        for n in &file.neurons {
            b.neuron(&n.id, n.activation, parse_rat(&n.bias)?);
        }
        for e in &file.edges {
            let weight = parse_rat(&e.weight)?;
            if e.attention {
                b.attention_edge(&e.from, &e.to, weight);
            } else {
                b.edge(&e.from, &e.to, weight);
            }
        }
        for g in &file.output_gates {
            b.output_gate(&g.gater, &g.gated);
        }
        for g in &file.synaptic_gates {
            match &g.group {
                Some(label) => b.grouped_synaptic_gate(&g.gater, &g.from, &g.to, label),
                None => b.synaptic_gate(&g.gater, &g.from, &g.to),
            };
        }
        for id in &file.inputs {
            b.declare_input(id);
        }
        for id in &file.outputs {
            b.declare_output(id);
        }
        if file.multi_gating {
            b.allow_multi_gating();
        }
        b.build()
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize)]
struct NeuronFile {
    id: String,
    activation: Activation,
    bias: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    from: String,
    to: String,
    weight: String,
    #[serde(default, skip_serializing_if = "is_false")]
    attention: bool,
}

#[derive(Serialize, Deserialize)]
struct OutputGateFile {
    gater: String,
    gated: String,
}

#[derive(Serialize, Deserialize)]
struct SynapticGateFile {
    gater: String,
    from: String,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    neurons: Vec<NeuronFile>,
    edges: Vec<EdgeFile>,
    output_gates: Vec<OutputGateFile>,
    synaptic_gates: Vec<SynapticGateFile>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    multi_gating: bool,
}

/// Samples the composite activation f(S) * g(S) of two units sharing the
/// same activation value S: gating a unit by an identically-driven twin
/// reshapes its activation function.
pub fn shape_activation(f_kind: Activation, g_kind: Activation, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| f_kind.apply_f64(x) * g_kind.apply_f64(x))
        .collect()
}

/// Rewrites every output gate as synaptic gates on all outgoing edges of
/// the gated neuron; the transformed network computes the same outputs.
///
/// Because gates may chain (a gated neuron gating another, or acting as a
/// synaptic gater), each removed gate is expanded into its multiset closure:
/// the old broadcast of v is o(v) times o(k) over every gater k reachable
/// from v through output-gate arcs, and that closure lands on each affected
/// edge. Gated neurons that are declared outputs cannot be rewritten (their
/// reported value would lose the gate).
pub fn output_to_synaptic(net: &GatingNetwork) -> Result<GatingNetwork, NetError> {
    for g in &net.output_gates {
        if net.outputs.contains(&g.gated) {
            return Err(NetError::GatedDeclaredOutput(
                net.neurons[g.gated].id.clone(),
            ));
        }
    }
    let mut b = NetworkBuilder::new();
    for neuron in &net.neurons {
        b.neuron(&neuron.id, neuron.activation, neuron.bias.clone());
    }
    for edge in &net.edges {
        let from = &net.neurons[edge.from].id;
        let to = &net.neurons[edge.to].id;
        if edge.attention {
            b.attention_edge(from, to, edge.weight.clone());
        } else {
            b.edge(from, to, edge.weight.clone());
        }
    }
    // closure[v]: gater indices (with multiplicity) whose activations
    // multiply v's old broadcast. Gate arcs are part of the topological
    // order, so gaters are finished before the neurons they gate.
    let mut closure: Vec<Vec<usize>> = vec![Vec::new(); net.neurons.len()];
    for &k in &net.topo {
        let mut acc = Vec::new();
        for &g in &net.out_gaters[k] {
            acc.push(g);
            acc.extend_from_slice(&closure[g]);
        }
        closure[k] = acc;
    }
    // (gater, edge, group) triples of the rewritten network: existing
    // synaptic gates keep their labels and gain their gater's closure; every
    // edge leaving a gated neuron gains that neuron's closure.
    let mut pending: Vec<(usize, usize, Option<String>)> = Vec::new();
    for g in &net.synaptic_gates {
        pending.push((g.gater, g.edge, g.group.clone()));
        for &k in &closure[g.gater] {
            pending.push((k, g.edge, None));
        }
    }
    for (ei, edge) in net.edges.iter().enumerate() {
        for &k in &closure[edge.from] {
            pending.push((k, ei, None));
        }
    }
    let mut multi_needed = false;
    let mut gates_per_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for (gater, ei, group) in pending {
        let count = gates_per_edge.entry(ei).or_insert(0);
        *count += 1;
        if *count > 1 {
            multi_needed = true;
        }
        let edge = &net.edges[ei];
        let from = &net.neurons[edge.from].id;
        let to = &net.neurons[edge.to].id;
        match group {
            Some(label) => b.grouped_synaptic_gate(&net.neurons[gater].id, from, to, &label),
            None => b.synaptic_gate(&net.neurons[gater].id, from, to),
        };
    }
    for &i in &net.inputs {
        b.declare_input(&net.neurons[i].id);
    }
    for &i in &net.outputs {
        b.declare_output(&net.neurons[i].id);
    }
    if net.multi_gating || multi_needed {
        b.allow_multi_gating();
    }
    b.build()
}

/// Rewrites every synaptic gate as an output gate on an inserted identity
/// twin: the gated edge is rerouted through the twin, which carries the
/// gate; the transformed network computes the same outputs.
pub fn synaptic_to_output(net: &GatingNetwork) -> Result<GatingNetwork, NetError> {
    let mut b = NetworkBuilder::new();
    for neuron in &net.neurons {
        b.neuron(&neuron.id, neuron.activation, neuron.bias.clone());
    }
    // Gates per edge, in declaration order, so chained twins stay
    // deterministic under multi-gating.
    let mut per_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (gi, g) in net.synaptic_gates.iter().enumerate() {
        per_edge.entry(g.edge).or_default().push(gi);
    }
    for (ei, edge) in net.edges.iter().enumerate() {
        let from = &net.neurons[edge.from].id;
        let to = &net.neurons[edge.to].id;
        match per_edge.get(&ei) {
            None => {
                if edge.attention {
                    b.attention_edge(from, to, edge.weight.clone());
                } else {
                    b.edge(from, to, edge.weight.clone());
                }
            }
            Some(gates) => {
                // from -> twin1 -> twin2 -> ... -> to, each twin output-gated
                // by one of the edge's gaters; the original weight sits on
                // the final hop.
                let mut upstream = from.clone();
                for (chain_pos, &gi) in gates.iter().enumerate() {
                    let twin = format!("{}__via_{}__{}", from, to, chain_pos);
                    b.neuron(&twin, Activation::Identity, Rat::zero());
                    b.edge(&upstream, &twin, rat(1));
                    b.output_gate(&net.neurons[net.synaptic_gates[gi].gater].id, &twin);
                    upstream = twin;
                }
                b.edge(&upstream, to, edge.weight.clone());
            }
        }
    }
    for g in &net.output_gates {
        b.output_gate(&net.neurons[g.gater].id, &net.neurons[g.gated].id);
    }
    for &i in &net.inputs {
        b.declare_input(&net.neurons[i].id);
    }
    for &i in &net.outputs {
        b.declare_output(&net.neurons[i].id);
    }
    if net.multi_gating {
        b.allow_multi_gating();
    }
    b.build()
}

/// Disjoint union of two networks; every id of `b` is prefixed. Inputs and
/// outputs concatenate, so traces and gating-op counters add.
pub fn merge_disjoint(
    a: &GatingNetwork,
    b: &GatingNetwork,
    prefix_b: &str,
) -> Result<GatingNetwork, NetError> {
    let mut builder = a.to_builder();
    for neuron in &b.neurons {
        let id = format!("{prefix_b}{}", neuron.id);
        if a.index.contains_key(&id) {
            return Err(NetError::MergeCollision(id));
        }
        builder.neuron(&id, neuron.activation, neuron.bias.clone());
    }
    for edge in &b.edges {
        let from = format!("{prefix_b}{}", b.neurons[edge.from].id);
        let to = format!("{prefix_b}{}", b.neurons[edge.to].id);
        if edge.attention {
            builder.attention_edge(&from, &to, edge.weight.clone());
        } else {
            builder.edge(&from, &to, edge.weight.clone());
        }
    }
    for g in &b.output_gates {
        builder.output_gate(
            &format!("{prefix_b}{}", b.neurons[g.gater].id),
            &format!("{prefix_b}{}", b.neurons[g.gated].id),
        );
    }
    for g in &b.synaptic_gates {
        let edge = &b.edges[g.edge];
        let gater = format!("{prefix_b}{}", b.neurons[g.gater].id);
        let from = format!("{prefix_b}{}", b.neurons[edge.from].id);
        let to = format!("{prefix_b}{}", b.neurons[edge.to].id);
        match &g.group {
            Some(label) => {
                builder.grouped_synaptic_gate(&gater, &from, &to, &format!("{prefix_b}{label}"))
            }
            None => builder.synaptic_gate(&gater, &from, &to),
        };
    }
    for &i in &b.inputs {
        builder.declare_input(&format!("{prefix_b}{}", b.neurons[i].id));
    }
    for &i in &b.outputs {
        builder.declare_output(&format!("{prefix_b}{}", b.neurons[i].id));
    }
    if b.multi_gating {
        builder.allow_multi_gating();
    }
    builder.build()
}

/// Depth-4 plain-SM dot product of two strictly positive vectors via the
/// log/exp idiom: per-coordinate log units, pairwise-sum units, exp units
/// (recovering each u_i * v_i), and a final unit-weight sum. No gates.
pub fn build_sm_dot_product(dim: usize) -> GatingNetwork {
    let mut b = NetworkBuilder::new();
    for i in 1..=dim {
        b.neuron(&format!("u{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("v{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("log_u{i}"), Activation::Log, Rat::zero());
        b.neuron(&format!("log_v{i}"), Activation::Log, Rat::zero());
        b.neuron(&format!("pair{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("prod{i}"), Activation::Exp, Rat::zero());
        b.edge(&format!("u{i}"), &format!("log_u{i}"), rat(1));
        b.edge(&format!("v{i}"), &format!("log_v{i}"), rat(1));
        b.edge(&format!("log_u{i}"), &format!("pair{i}"), rat(1));
        b.edge(&format!("log_v{i}"), &format!("pair{i}"), rat(1));
        b.edge(&format!("pair{i}"), &format!("prod{i}"), rat(1));
    }
    b.neuron("dot", Activation::Identity, Rat::zero());
    for i in 1..=dim {
        b.edge(&format!("prod{i}"), "dot", rat(1));
    }
    for i in 1..=dim {
        b.declare_input(&format!("u{i}"));
    }
    for i in 1..=dim {
        b.declare_input(&format!("v{i}"));
    }
    b.declare_output("dot");
    b.build().expect("dot-product network is statically valid")
}

/// Gating flavor for the gated dot product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GatingMode {
    OutputGating,
    SynapticGating,
}

/// Dot product via one gating op per coordinate and a unit-weight sum;
/// works for arbitrary real vectors.
pub fn build_gated_dot_product(dim: usize, mode: GatingMode) -> GatingNetwork {
    let mut b = NetworkBuilder::new();
    for i in 1..=dim {
        b.neuron(&format!("u{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("v{i}"), Activation::Identity, Rat::zero());
    }
    b.neuron("dot", Activation::Identity, Rat::zero());
    match mode {
        GatingMode::OutputGating => {
            for i in 1..=dim {
                let copy = format!("p{i}");
                b.neuron(&copy, Activation::Identity, Rat::zero());
                b.edge(&format!("u{i}"), &copy, rat(1));
                b.output_gate(&format!("v{i}"), &copy);
                b.edge(&copy, "dot", rat(1));
            }
        }
        GatingMode::SynapticGating => {
            for i in 1..=dim {
                b.edge(&format!("u{i}"), "dot", rat(1));
                b.synaptic_gate(&format!("v{i}"), &format!("u{i}"), "dot");
            }
        }
    }
    for i in 1..=dim {
        b.declare_input(&format!("u{i}"));
    }
    for i in 1..=dim {
        b.declare_input(&format!("v{i}"));
    }
    b.declare_output("dot");
    b.build().expect("gated dot-product network is statically valid")
}

/// Plain-SM softmax: exp units, a sum, a log, per-coordinate shifted
/// scores, and exp outputs; all weights fixed.
pub fn build_sm_softmax(dim: usize) -> GatingNetwork {
    let mut b = NetworkBuilder::new();
    for i in 1..=dim {
        b.neuron(&format!("x{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("exp{i}"), Activation::Exp, Rat::zero());
        b.edge(&format!("x{i}"), &format!("exp{i}"), rat(1));
    }
    b.neuron("sum", Activation::Identity, Rat::zero());
    for i in 1..=dim {
        b.edge(&format!("exp{i}"), "sum", rat(1));
    }
    b.neuron("logsum", Activation::Log, Rat::zero());
    b.edge("sum", "logsum", rat(1));
    for i in 1..=dim {
        let shift = format!("shift{i}");
        let out = format!("out{i}");
        b.neuron(&shift, Activation::Identity, Rat::zero());
        b.edge(&format!("x{i}"), &shift, rat(1));
        b.edge("logsum", &shift, rat(-1));
        b.neuron(&out, Activation::Exp, Rat::zero());
        b.edge(&shift, &out, rat(1));
    }
    for i in 1..=dim {
        b.declare_input(&format!("x{i}"));
    }
    for i in 1..=dim {
        b.declare_output(&format!("out{i}"));
    }
    b.build().expect("softmax network is statically valid")
}

/// Plain-SM Euclidean normalization of a strictly positive vector:
/// squares via log/exp doubling, sum, half-log, per-coordinate subtract,
/// exp outputs.
pub fn build_sm_normalization(dim: usize) -> GatingNetwork {
    let mut b = NetworkBuilder::new();
    for i in 1..=dim {
        b.neuron(&format!("x{i}"), Activation::Identity, Rat::zero());
        b.neuron(&format!("log{i}"), Activation::Log, Rat::zero());
        b.neuron(&format!("sq{i}"), Activation::Exp, Rat::zero());
        b.edge(&format!("x{i}"), &format!("log{i}"), rat(1));
        // Doubling the log squares the coordinate.
        b.edge(&format!("log{i}"), &format!("sq{i}"), rat(2));
    }
    b.neuron("sumsq", Activation::Identity, Rat::zero());
    for i in 1..=dim {
        b.edge(&format!("sq{i}"), "sumsq", rat(1));
    }
    b.neuron("logss", Activation::Log, Rat::zero());
    b.edge("sumsq", "logss", rat(1));
    for i in 1..=dim {
        let shift = format!("shift{i}");
        let out = format!("out{i}");
        b.neuron(&shift, Activation::Identity, Rat::zero());
        b.edge(&format!("log{i}"), &shift, rat(1));
        b.edge("logss", &shift, ratio(-1, 2));
        b.neuron(&out, Activation::Exp, Rat::zero());
        b.edge(&shift, &out, rat(1));
    }
    for i in 1..=dim {
        b.declare_input(&format!("x{i}"));
    }
    for i in 1..=dim {
        b.declare_output(&format!("out{i}"));
    }
    b.build().expect("normalization network is statically valid")
}

/// Seeded random layered network with smooth activations, suitable for
/// numerical equivalence sweeps. Requests `output_gates` output gates on
/// distinct interior neurons and `synaptic_gates` synaptic gates on
/// distinct interior edges.
pub fn random_layered_network(
    seed: u64,
    output_gates: usize,
    synaptic_gates: usize,
) -> GatingNetwork {
    let mut rng = SplitMix64::new(seed).fork(0x4e7);
    let layers: [usize; 4] = [3, 4, 4, 2];
    let mut b = NetworkBuilder::new();
    let id = |l: usize, i: usize| format!("n{l}_{i}");
    let acts = [
        Activation::Tanh,
        Activation::Relu,
        Activation::Logistic,
        Activation::Identity,
    ];
    for (l, &width) in layers.iter().enumerate() {
        for i in 0..width {
            let activation = if l == 0 {
                Activation::Identity
            } else {
                acts[(l + i) % acts.len()]
            };
            let bias = if l == 0 {
                Rat::zero()
            } else {
                crate::rational::rat_from_f64(rng.next_f64_in(-1.0, 1.0))
                    .unwrap_or_else(Rat::zero)
            };
            b.neuron(&id(l, i), activation, bias);
        }
    }
    let mut interior_edges: Vec<(String, String)> = Vec::new();
    for l in 0..layers.len() - 1 {
        for i in 0..layers[l] {
            for j in 0..layers[l + 1] {
                let w = crate::rational::rat_from_f64(rng.next_f64_in(-2.0, 2.0))
                    .unwrap_or_else(Rat::zero);
                b.edge(&id(l, i), &id(l + 1, j), w);
                if l + 1 < layers.len() - 1 {
                    interior_edges.push((id(l, i), id(l + 1, j)));
                }
            }
        }
    }
    // Gated neurons come from hidden layers (never declared outputs);
    // gaters sit strictly earlier, so no cycles arise.
    let mut candidates: Vec<(String, usize)> = Vec::new();
    for l in 1..layers.len() - 1 {
        for i in 0..layers[l] {
            candidates.push((id(l, i), l));
        }
    }
    rng.shuffle(&mut candidates);
    for (gated, layer) in candidates.into_iter().take(output_gates) {
        let gater_layer = rng.next_below(layer as u64) as usize;
        let gater_pos = rng.next_below(layers[gater_layer] as u64) as usize;
        b.output_gate(&id(gater_layer, gater_pos), &gated);
    }
    rng.shuffle(&mut interior_edges);
    for (from, to) in interior_edges.into_iter().take(synaptic_gates) {
        let gater_pos = rng.next_below(layers[0] as u64) as usize;
        b.synaptic_gate(&id(0, gater_pos), &from, &to);
    }
    for i in 0..layers[0] {
        b.declare_input(&id(0, i));
    }
    let last = layers.len() - 1;
    for i in 0..layers[last] {
        b.declare_output(&id(last, i));
    }
    b.build().expect("random layered network is statically valid")
}
