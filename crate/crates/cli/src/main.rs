//! quarkcap: exact desk-scale reports over threshold-class enumeration,
//! gated-composition counting, constructive gadgets, gating-network
//! simulation, and the gating-only encoder.
//!
//! Every run prints one JSON report (schema `quarkcap/1`) to stdout or
//! `--out`. Exit codes: 0 when every verdict in the report is true, 2 when
//! any verdict is false, 1 for usage or domain errors.

mod cmd;

use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use quarkcap::error::CliError;
use quarkcap::report::RunReport;
use quarkcap_core::boolfn::{input_index, Encoding, TruthTable};
use quarkcap_core::constructs::{Addressing, ApproxVariant, Readout};
use quarkcap_core::threshold::{Strategy, ThresholdKind};

use crate::cmd::{ApproxTarget, EncoderCheck, Outcome};

#[derive(Parser)]
#[command(
    name = "quarkcap",
    version,
    about = "Exact counting, constructions, and simulation for gated threshold networks"
)]
struct Cli {
    /// Seed for every randomized check in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (falls back to QUARKCAP_JOBS, then all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Add wall-clock duration to the report (breaks byte-for-byte repeatability).
    #[arg(long, global = true)]
    timing: bool,
    /// Print the tabular payload as CSV instead of the JSON report.
    #[arg(long, global = true)]
    csv: bool,
    /// Write the report (for construct: the network file) here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a threshold class exactly, with margin-1 certificates.
    Enumerate {
        /// Number of inputs.
        #[arg(long)]
        n: usize,
        /// Polynomial degree bound.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_enum, default_value = "sweep")]
        strategy: StrategyArg,
        /// Weight box half-width (bounded-weights strategy only).
        #[arg(long, default_value_t = 3)]
        bound: i64,
        /// Infeasibility spot-check draws (bounded-weights strategy only).
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Count a gated-composition class; sandwich bounds when irreducible.
    Compose {
        /// Operator: a binary name (AND, XOR, NXOR, ...) or hex table like 0x16.
        #[arg(long)]
        b: String,
        /// Number of shared inputs.
        #[arg(long)]
        n: usize,
        /// Per-argument degree bounds, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long, value_enum, default_value = "pm")]
        encoding: EncodingArg,
    },
    /// Census of the irreducible binary operators at one arity.
    Table2 {
        #[arg(long)]
        n: usize,
    },
    /// Verification batteries with machine-checked verdicts.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Constructive gadgets, optionally emitted as network files.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Evaluate a network file on one input vector.
    Simulate {
        /// Network JSON file.
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated inputs (rationals with --exact, floats otherwise).
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Exact rational evaluation with saturation warnings.
        #[arg(long)]
        exact: bool,
    },
    /// Build the gating-only encoder and check it.
    Transformer {
        /// Sequence length.
        #[arg(long)]
        n: usize,
        /// Attention heads.
        #[arg(long)]
        m: usize,
        /// Token width.
        #[arg(long = "din")]
        d_in: usize,
        /// Run one check instead of all three.
        #[arg(long, value_enum)]
        check: Option<CheckArg>,
    },
    /// Exact class counts next to asymptotic reference formulas.
    CapacityReport,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Sandwich bounds for one irreducible composition.
    Composition {
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
    },
    /// Weight-gating equals product semantics, pair by pair.
    Synaptic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_enum, default_value = "sign")]
        f_kind: KindArg,
        #[arg(long, value_enum, default_value = "sign")]
        g_kind: KindArg,
    },
    /// Output-gated hidden-layer census (exact for n, m <= 2).
    Layer {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Sampled census instead of the exact one.
        #[arg(long)]
        sampled: bool,
        /// Draws for the sampled census.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Class-intersection witnesses and their embeddings.
    Intersection {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d0: usize,
        #[arg(long, default_value_t = 1)]
        d1: usize,
    },
    /// The full acceptance battery.
    All {
        #[arg(long, default_value = "desk")]
        level: String,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Multiplex m class members behind attention codes.
    Mux {
        /// How many class members to multiplex.
        #[arg(long)]
        m: usize,
        /// Data arity of the base class.
        #[arg(long)]
        n: usize,
        /// Degree bound of the base class.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_enum, default_value = "dense")]
        addressing: AddressingArg,
        /// Value emitted by unattended units (-1, 0, or 1).
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        mask: i8,
        #[arg(long, value_enum, default_value = "or")]
        readout: ReadoutArg,
    },
    /// Product-of-separators decomposition of one truth table.
    Product {
        /// Canonical text (n:2;enc:pm;bits:6) or a hex mask (0x6).
        #[arg(long)]
        table: String,
        /// Arity; required with a hex mask.
        #[arg(long)]
        n: Option<usize>,
        /// Encoding for a hex mask (canonical text carries its own).
        #[arg(long, value_enum, default_value = "pm")]
        encoding: EncodingArg,
    },
    /// XOR as a two-factor product network.
    Xor {
        #[arg(long, value_enum, default_value = "01")]
        encoding: EncodingArg,
    },
    /// Embed a composition into one extended threshold class.
    Embed {
        /// Irreducible operator name or hex table.
        #[arg(long)]
        b: String,
        /// Data arity of the composed functions.
        #[arg(long)]
        n: usize,
        /// Degree bound of the composed functions.
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Class member indices to compose, comma separated.
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
    },
    /// Gated slice approximator on [0, 1].
    Approx {
        /// Built-in target function.
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
        /// Slice count for a built-in target.
        #[arg(long, default_value_t = 10)]
        slices: usize,
        /// Explicit samples f(0), f(1/k), ..., f(1), comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        samples: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "linear")]
        variant: VariantArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Sweep,
    Weights,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    #[value(name = "01")]
    ZeroOne,
    Pm,
}

impl EncodingArg {
    fn to_core(self) -> Encoding {
        match self {
            EncodingArg::ZeroOne => Encoding::ZeroOne,
            EncodingArg::Pm => Encoding::PlusMinus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Sign,
    Heaviside,
}

impl KindArg {
    fn to_core(self) -> ThresholdKind {
        match self {
            KindArg::Sign => ThresholdKind::Sign,
            KindArg::Heaviside => ThresholdKind::Heaviside,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AddressingArg {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadoutArg {
    Or,
    And,
    Product,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    X,
    X2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Linear,
    Constant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Counts,
    Oracle,
    Perm,
}

fn configure_jobs(flag: Option<usize>) {
    let jobs = flag.or_else(|| {
        std::env::var("QUARKCAP_JOBS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
    });
    if let Some(j) = jobs {
        if j > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        }
    }
}

/// Parses `--table`: canonical text as-is, or a hex output mask read lowest
/// input index first, which needs an explicit arity and encoding.
fn parse_table(text: &str, n: Option<usize>, encoding: Encoding) -> Result<TruthTable, CliError> {
    if text.starts_with("n:") {
        return Ok(TruthTable::parse_canonical(text)?);
    }
    let hex = text
        .strip_prefix("0x")
        .or_else(|| text.strip_prefix("0X"))
        .ok_or_else(|| {
            CliError::domain("table must be canonical text (n:...) or a hex mask (0x...)")
        })?;
    let n = n.ok_or_else(|| CliError::domain("--n is required with a hex table mask"))?;
    if n == 0 || n > 6 {
        return Err(CliError::domain(format!("arity {n} out of range 1..=6")));
    }
    let mask = u64::from_str_radix(hex, 16)
        .map_err(|_| CliError::domain(format!("bad table mask `{text}`")))?;
    let entries = 1usize << n;
    if entries < 64 && mask >> entries != 0 {
        return Err(CliError::domain(format!(
            "table mask `{text}` has bits beyond its {entries} entries"
        )));
    }
    Ok(TruthTable::tabulate(n, encoding, |x| {
        mask >> input_index(x) & 1 == 1
    })?)
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Enumerate {
            n,
            d,
            strategy,
            bound,
            samples,
        } => {
            let (label, strat) = match strategy {
                StrategyArg::Sweep => ("sweep", Strategy::Sweep),
                StrategyArg::Weights => ("weights", Strategy::BoundedWeights { bound: *bound }),
            };
            cmd::enumerate_cmd(*n, *d, label, strat, *samples, cli.seed)
        }
        Command::Compose { b, n, d, encoding } => {
            let op = cmd::parse_operator(b, d.len())?;
            cmd::compose_cmd(b, op, *n, d.clone(), encoding.to_core())
        }
        Command::Table2 { n } => cmd::table2_cmd(*n),
        Command::Verify(verify) => match verify {
            VerifyCmd::Composition { b, n, d } => {
                let op = cmd::parse_operator(b, d.len())?;
                cmd::verify_composition_cmd(b, op, *n, d.clone())
            }
            VerifyCmd::Synaptic { n, d, f_kind, g_kind } => {
                cmd::verify_synaptic_cmd(*n, *d, (f_kind.to_core(), g_kind.to_core()))
            }
            VerifyCmd::Layer {
                n,
                m,
                sampled,
                samples,
            } => cmd::verify_layer_cmd(*n, *m, *sampled, *samples, cli.seed),
            VerifyCmd::Intersection { n, d0, d1 } => cmd::verify_intersection_cmd(*n, *d0, *d1),
            VerifyCmd::All { level } => cmd::verify_all_cmd(level, cli.seed),
        },
        Command::Construct(construct) => match construct {
            ConstructCmd::Mux {
                m,
                n,
                d,
                addressing,
                mask,
                readout,
            } => {
                let addressing = match addressing {
                    AddressingArg::Dense => Addressing::Dense,
                    AddressingArg::Sparse => Addressing::Sparse,
                };
                let readout = match readout {
                    ReadoutArg::Or => Readout::Or,
                    ReadoutArg::And => Readout::And,
                    ReadoutArg::Product => Readout::Product,
                };
                cmd::construct_mux_cmd(*m, *n, *d, addressing, *mask, readout, cli.out.as_deref())
            }
            ConstructCmd::Product { table, n, encoding } => {
                let table = parse_table(table, *n, encoding.to_core())?;
                cmd::construct_product_cmd(table, cli.out.as_deref())
            }
            ConstructCmd::Xor { encoding } => {
                cmd::construct_xor_cmd(encoding.to_core(), cli.out.as_deref())
            }
            ConstructCmd::Embed { b, n, d, indices } => {
                let op = cmd::parse_operator(b, 2).or_else(|_| {
                    // Non-binary operators arrive as hex tables; retry at
                    // the arity implied by the index list.
                    let arity = indices.as_ref().map(Vec::len).unwrap_or(2);
                    cmd::parse_operator(b, arity)
                })?;
                cmd::construct_embed_cmd(b, op, *n, *d, indices.clone(), cli.out.as_deref())
            }
            ConstructCmd::Approx {
                target,
                slices,
                samples,
                variant,
            } => {
                let target = target.map(|t| match t {
                    TargetArg::X => ApproxTarget::X,
                    TargetArg::X2 => ApproxTarget::Square,
                });
                let variant = match variant {
                    VariantArg::Linear => ApproxVariant::Linear,
                    VariantArg::Constant => ApproxVariant::Constant,
                };
                cmd::construct_approx_cmd(target, *slices, samples.clone(), variant, cli.out.as_deref())
            }
        },
        Command::Simulate { net, input, exact } => cmd::simulate_cmd(net, input, *exact),
        Command::Transformer { n, m, d_in, check } => {
            let check = check.map(|c| match c {
                CheckArg::Counts => EncoderCheck::Counts,
                CheckArg::Oracle => EncoderCheck::Oracle,
                CheckArg::Perm => EncoderCheck::Perm,
            });
            cmd::transformer_cmd(*n, *m, *d_in, check, cli.seed)
        }
        Command::CapacityReport => cmd::capacity_report_cmd(),
    }
}

/// Renders and routes the report; returns the verdict.
fn emit(cli: &Cli, outcome: &Outcome, started: Instant) -> Result<bool, CliError> {
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let mut report = RunReport::new(command, cli.seed, outcome.results.clone());
    if cli.timing {
        report.duration_ms = Some(started.elapsed().as_millis() as u64);
    }
    let body = if cli.csv {
        outcome
            .csv
            .clone()
            .ok_or_else(|| CliError::domain("this command has no tabular payload; drop --csv"))?
    } else {
        report.to_pretty()
    };
    match (&cli.out, outcome.out_consumed) {
        (Some(path), false) => std::fs::write(path, body)?,
        _ => print!("{body}"),
    }
    Ok(outcome.verdict)
}

fn main() -> std::process::ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                std::process::ExitCode::SUCCESS
            } else {
                std::process::ExitCode::from(1)
            };
        }
    };
    configure_jobs(cli.jobs);
    let started = Instant::now();
    let verdict = dispatch(&cli).and_then(|outcome| emit(&cli, &outcome, started));
    match verdict {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::ExitCode::from(1)
        }
    }
}
