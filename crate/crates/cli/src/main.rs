//! `jtx`: command-line front end for jtx-core.
//!
//! Every command reads one vector file and writes one JSON document (DOT text
//! for `dot`). Exit codes: 0 ok, 2 parse error, 3 precondition violation,
//! 4 limit exceeded, 5 internal invariant failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jtx_core::dot::to_dot;
use jtx_core::extremality::{
    all_isolatable_implies_l2, certify_extreme, equal_sums_report, is_separated_with,
    perturbation_witness_from, PairMode,
};
use jtx_core::greedy::{consistent_with_greedy, greedy_partition_with, TiePolicy};
use jtx_core::rational::{parse_rational, to_wire};
use jtx_core::wire::{self, DEFAULT_DIGITS};
use jtx_core::{
    enumerate_norming, gap, jt_norm_sq, oracle_norm_sq, score, JtError, Node, Partition, Result,
    TreeVector, DEFAULT_MAX_DEPTH, DEFAULT_ORACLE_CAP,
};

const ORACLE_CAP_ENV: &str = "JTX_ORACLE_CAP";

#[derive(Parser)]
#[command(
    name = "jtx",
    version,
    about = "Exact James Tree norms, norming partitions and extremality certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest |ran(x)| the brute-force oracle accepts [env: JTX_ORACLE_CAP; default 13]
    #[arg(long, global = true)]
    oracle_cap: Option<usize>,

    /// Fractional digits of `norm_decimal`
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    digits: usize,

    /// Deepest node accepted from input files and flags
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,

    /// Tie-breaking among heaviest children in `greedy`
    #[arg(long, global = true, value_enum, default_value_t = Tie::LexMin)]
    tie_policy: Tie,

    /// Write the output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    LexMin,
    LexMax,
}

#[derive(Args)]
struct Input {
    /// Vector file (JSON); `-` reads standard input
    input: PathBuf,
}

#[derive(Args)]
struct PairArgs {
    /// Upper node (bit string, "" for the root)
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Lower node
    #[arg(long, allow_hyphen_values = true)]
    v: String,
}

#[derive(Subcommand)]
enum Command {
    /// Norm squared, decimal norm and a witness partition
    Norm {
        #[command(flatten)]
        input: Input,
        /// Cross-check against the brute-force oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Norm squared minus the best score separating --u from --v
    Gap {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Whether every pair of ran(x) is separated by some norming partition
    Separated {
        #[command(flatten)]
        input: Input,
        /// Check every comparable pair rather than parent-child pairs
        #[arg(long)]
        all_pairs: bool,
    },
    /// Extremality certificate, with a perturbation witness when negative
    Extreme {
        #[command(flatten)]
        input: Input,
    },
    /// Greedy partition of a positive vector
    Greedy {
        #[command(flatten)]
        input: Input,
    },
    /// Check a partition against the greedy rule
    Consistent {
        #[command(flatten)]
        input: Input,
        /// Partition file (JSON)
        #[arg(long)]
        partition: PathBuf,
    },
    /// Branch sums and sibling balance of a positive vector
    EqualSums {
        #[command(flatten)]
        input: Input,
    },
    /// Every canonical norming partition (oracle-sized inputs only)
    EnumerateNorming {
        #[command(flatten)]
        input: Input,
    },
    /// Whether every support node can be isolated, and whether norm = l2
    Isolatable {
        #[command(flatten)]
        input: Input,
    },
    /// Perturbation y = eps (e_u - e_v) preserving the norm of x + y and x - y
    Witness {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: PairArgs,
        /// First epsilon to try before halving
        #[arg(long, default_value = "1")]
        epsilon: String,
    },
    /// Graphviz rendering of ran(x) with a partition overlay
    Dot {
        #[command(flatten)]
        input: Input,
        /// Partition to overlay (defaults to the norm witness)
        #[arg(long)]
        partition: Option<PathBuf>,
    },
}

enum Output {
    Json(Value),
    Text(String),
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| JtError::Parse(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| JtError::Parse(format!("{}: {e}", path.display())))
}

fn oracle_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| JtError::Parse(format!("{ORACLE_CAP_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

struct Ctx {
    cap: Option<usize>,
    digits: usize,
    max_depth: usize,
    tie: TiePolicy,
}

impl Ctx {
    fn vector(&self, input: &Input) -> Result<TreeVector> {
        wire::parse_vector(&read_text(&input.input)?, self.max_depth)
    }

    fn partition(&self, path: &Path) -> Result<Partition> {
        wire::parse_partition(&read_text(path)?, self.max_depth)
    }

    fn node(&self, s: &str) -> Result<Node> {
        Node::parse(s, self.max_depth)
    }

    fn cap(&self) -> Result<usize> {
        oracle_cap(self.cap)
    }
}

fn run(cmd: &Command, ctx: &Ctx) -> Result<Output> {
    let out = match cmd {
        Command::Norm { input, oracle } => {
            let x = ctx.vector(input)?;
            let r = jt_norm_sq(&x);
            let mut doc = wire::norm_result(&r, ctx.digits)?;
            if *oracle {
                let o = oracle_norm_sq(&x, ctx.cap()?)?;
                if o != r.norm_sq {
                    return Err(JtError::Internal(format!(
                        "dynamic program gives {} but the oracle gives {}",
                        to_wire(&r.norm_sq),
                        to_wire(&o)
                    )));
                }
                doc["oracle_norm_sq"] = Value::String(to_wire(&o));
            }
            Output::Json(doc)
        }
        Command::Gap { input, pair } => {
            let x = ctx.vector(input)?;
            let (u, v) = (ctx.node(&pair.u)?, ctx.node(&pair.v)?);
            let g = gap(&x, &u, &v)?;
            Output::Json(json!({ "u": pair.u, "v": pair.v, "gap": to_wire(&g) }))
        }
        Command::Separated { input, all_pairs } => {
            let x = ctx.vector(input)?;
            let mode = if *all_pairs {
                PairMode::AllPairs
            } else {
                PairMode::Adjacent
            };
            Output::Json(wire::separation_report(&is_separated_with(&x, mode)))
        }
        Command::Extreme { input } => {
            let x = ctx.vector(input)?;
            Output::Json(wire::certificate(&certify_extreme(&x)?))
        }
        Command::Greedy { input } => {
            let x = ctx.vector(input)?;
            let (p, trace) = greedy_partition_with(&x, ctx.tie)?;
            let mut doc = wire::greedy_trace(&trace);
            doc["partition"] = wire::partition(&p);
            doc["score"] = Value::String(to_wire(&score(&x, &p)));
            Output::Json(doc)
        }
        Command::Consistent { input, partition } => {
            let x = ctx.vector(input)?;
            let p = ctx.partition(partition)?;
            let (ok, violations) = consistent_with_greedy(&x, &p)?;
            Output::Json(json!({
                "consistent": ok,
                "violations": violations.iter().map(wire::violation).collect::<Vec<_>>(),
            }))
        }
        Command::EqualSums { input } => {
            let x = ctx.vector(input)?;
            Output::Json(wire::equal_sums_report(&equal_sums_report(&x)?))
        }
        Command::EnumerateNorming { input } => {
            let x = ctx.vector(input)?;
            let all = enumerate_norming(&x, ctx.cap()?)?;
            Output::Json(json!({
                "norm_sq": to_wire(&jt_norm_sq(&x).norm_sq),
                "count": all.len(),
                "partitions": all.iter().map(wire::partition).collect::<Vec<_>>(),
            }))
        }
        Command::Isolatable { input } => {
            let x = ctx.vector(input)?;
            let (iso, l2) = all_isolatable_implies_l2(&x);
            Output::Json(json!({ "all_isolatable": iso, "l2_equality": l2 }))
        }
        Command::Witness {
            input,
            pair,
            epsilon,
        } => {
            let x = ctx.vector(input)?;
            let (u, v) = (ctx.node(&pair.u)?, ctx.node(&pair.v)?);
            let start = parse_rational(epsilon)?;
            let (y, eps) = perturbation_witness_from(&x, &u, &v, &start)?;
            Output::Json(json!({
                "u": pair.u,
                "v": pair.v,
                "witness_y": wire::vector(&y),
                "epsilon": to_wire(&eps),
                "norm_sq": to_wire(&jt_norm_sq(&x).norm_sq),
                "norm_sq_plus": to_wire(&jt_norm_sq(&x.add(&y)).norm_sq),
                "norm_sq_minus": to_wire(&jt_norm_sq(&x.sub(&y)).norm_sq),
            }))
        }
        Command::Dot { input, partition } => {
            let x = ctx.vector(input)?;
            let p = match partition {
                Some(path) => ctx.partition(path)?,
                None => jt_norm_sq(&x).witness,
            };
            Output::Text(to_dot(&x, Some(&p)))
        }
    };
    Ok(out)
}

fn emit(out: &Output, path: Option<&Path>) -> io::Result<()> {
    let text = match out {
        Output::Json(v) => wire::render(v),
        Output::Text(s) => s.clone(),
    };
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        cap: cli.oracle_cap,
        digits: cli.digits,
        max_depth: cli.max_depth,
        tie: match cli.tie_policy {
            Tie::LexMin => TiePolicy::LexMin,
            Tie::LexMax => TiePolicy::LexMax,
        },
    };
    match run(&cli.command, &ctx) {
        Ok(out) => match emit(&out, cli.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("jtx: cannot write output: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("jtx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
