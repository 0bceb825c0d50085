use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kronlef::cache::{cache_dir_from_env, open_coefficient_cache, CacheStats, CoefficientCache};
use kronlef::cayley::omega_power;
use kronlef::charkron::kronecker_characters;
use kronlef::cube::{enumerate_magic_sets, CubeSet, Dims};
use kronlef::hwv::{hodge_transport, DEFAULT_WEIGHT_BUDGET};
use kronlef::latin::{at_full, at_number, DEFAULT_CELL_BUDGET};
use kronlef::lefschetz::{check_hlp, check_lp, check_lp_full, sl2_check};
use kronlef::partition::PartitionTuple;
use kronlef::seqlab::{build_sequence_prefix, coefficient, Backend, CoefficientOptions, SequenceReport};
use kronlef::Error;

use kronlef_cli::acceptance::Suite;
use kronlef_cli::report::{exit_code, RunReport, Timings, EXIT_VERIFICATION};

#[derive(Parser)]
#[command(name = "kron", version, about = "Kronecker coefficients, Cayley forms and Lefschetz maps, computed exactly")]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the full JSON run report instead of a plain summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shape {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Hwv,
    Characters,
    Both,
    Auto,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Hwv => Backend::Hwv,
            BackendArg::Characters => Backend::Characters,
            BackendArg::Both => Backend::Both,
            BackendArg::Auto => Backend::Auto,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// One Kronecker coefficient g(λ)
    Coeff {
        #[command(flatten)]
        shape: Shape,
        /// Entries separated by ';', parts by ',' (";;" is three empty partitions)
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, value_enum, default_value = "auto")]
        backend: BackendArg,
        /// Largest weight space the hwv backend may enumerate
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
    },
    /// The sequence g(ρ_k^n λ) over its whole range
    Sequence {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, value_enum, default_value = "characters")]
        backend: BackendArg,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
        /// Stop after this many entries
        #[arg(long)]
        len: Option<usize>,
    },
    /// Alon–Tarsi number of a magic set (--type) or of the full cube
    At {
        #[command(flatten)]
        shape: Shape,
        /// Cells such as "111,222" or "{(1,1,1),(2,2,2)}"
        #[arg(long = "type")]
        type_: Option<String>,
        /// Largest number of cells to enumerate
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: usize,
    },
    /// ω_{d,k}^n
    OmegaPower {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: usize,
        /// Number of terms to list
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Lefschetz property checks
    Lefschetz {
        #[command(subcommand)]
        which: LefschetzCommand,
    },
    /// [X,Y]=H, [H,X]=2X, [H,Y]=-2Y on basis vectors of ⋀(ℂ²)^{⊗d}
    Sl2Check {
        #[arg(long)]
        d: usize,
        /// Random basis vectors when the cube is too large for exhaustion
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also check every magic set of magnitude ≤ this (and the dual ones)
        #[arg(long, default_value_t = 1)]
        magic_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// |B_{d,k}(n)| for one n or all n
    MagicCount {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: usize,
    },
    /// Hodge duality between HWV spaces of λ and its box complement
    HodgeCheck {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
    },
    /// Run the acceptance suite; exits 3 if any criterion fails
    VerifyPaper {
        /// Include the full 14-entry (4,2),(2,2,2),(3,2,1) sequence
        #[arg(long)]
        long: bool,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
        /// Run only these criteria
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum LefschetzCommand {
    /// Ranks along the sequence of λ and the injective-then-surjective verdict
    Lp {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
    },
    /// Iterated maps between dimension-matched pairs of a k-complementary sequence
    Hlp {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BUDGET)]
        budget: usize,
    },
    /// L = ω ∧ · on the whole exterior algebra
    LpFull {
        #[command(flatten)]
        shape: Shape,
        /// Largest C(k^d, k^d/2) for exact ranks; larger cubes use witnesses
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

struct Outcome {
    results: Value,
    summary: String,
    verified: bool,
}

fn parse_tuple(s: &str, d: usize) -> kronlef::Result<PartitionTuple> {
    let t: PartitionTuple = s.parse()?;
    if t.d() != d {
        return Err(Error::Dimensions(format!("tuple {s:?} has {} entries, expected {d}", t.d())));
    }
    Ok(t)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run(command: &Command, cache: &CoefficientCache) -> kronlef::Result<Outcome> {
    let ok = |results: Value, summary: String| Ok(Outcome { results, summary, verified: true });
    match command {
        Command::Coeff { shape, tuple, backend, budget } => {
            let dims = Dims::new(shape.d, shape.k)?;
            let t = parse_tuple(tuple, shape.d)?;
            let opts = CoefficientOptions { backend: (*backend).into(), budget: *budget, cache: Some(cache) };
            let (v, used) = coefficient(&t, dims, &opts)?;
            ok(json!({"tuple": t.to_string(), "d": shape.d, "k": shape.k, "value": v.to_string(), "backend": used}), format!("g({t}) = {v}"))
        }
        Command::Sequence { shape, tuple, backend, budget, len } => {
            let dims = Dims::new(shape.d, shape.k)?;
            let t = parse_tuple(tuple, shape.d)?;
            let opts = CoefficientOptions { backend: (*backend).into(), budget: *budget, cache: Some(cache) };
            let seq = build_sequence_prefix(&t, dims, &opts, len.unwrap_or(usize::MAX))?;
            let r = SequenceReport::new(&seq);
            let summary = format!(
                "n = {}..{}: {}\nunimodal {}, symmetric {}",
                r.range.0,
                r.range.1,
                r.values.join(", "),
                r.unimodal,
                r.symmetric
            );
            ok(to_json(&r), summary)
        }
        Command::At { shape, type_, budget } => {
            let dims = Dims::new(shape.d, shape.k)?;
            let (text, count) = match type_ {
                Some(s) => {
                    let t = CubeSet::parse_text(dims, s)?;
                    (t.to_text()?, at_number(&t, *budget)?)
                }
                None => (format!("[{}]^{}", shape.k, shape.d), at_full(shape.d, shape.k, *budget)?),
            };
            let summary = format!("AT({text}) = {} (positive {}, negative {})", count.at, count.positive, count.negative);
            let mut v = to_json(&count);
            v["type"] = json!(text);
            ok(v, summary)
        }
        Command::OmegaPower { shape, n, limit } => {
            let p = omega_power(shape.d, shape.k, *n)?;
            let terms: Vec<Value> = p
                .terms()
                .iter()
                .take(*limit)
                .map(|(x, c)| Ok(json!({"set": x.to_text()?, "coefficient": c.to_string()})))
                .collect::<kronlef::Result<_>>()?;
            let summary = format!("omega_({},{})^{n}: {} terms, zero = {}", shape.d, shape.k, p.len(), p.is_zero());
            ok(json!({"d": shape.d, "k": shape.k, "n": n, "terms": p.len(), "zero": p.is_zero(), "listed": terms}), summary)
        }
        Command::Lefschetz { which } => match which {
            LefschetzCommand::Lp { shape, tuple, budget } => {
                let v = check_lp(&parse_tuple(tuple, shape.d)?, Dims::new(shape.d, shape.k)?, *budget)?;
                let pivot = v.pivot.map_or("none".to_string(), |p| p.to_string());
                let summary = format!("dims {:?} ranks {:?} pivot {pivot} holds {}", v.dims, v.ranks, v.holds);
                ok(to_json(&v), summary)
            }
            LefschetzCommand::Hlp { shape, tuple, budget } => {
                let v = check_hlp(&parse_tuple(tuple, shape.d)?, Dims::new(shape.d, shape.k)?, *budget)?;
                let summary = format!("dims {:?}, {} pairs, holds {}", v.dims, v.pairs.len(), v.holds);
                ok(to_json(&v), summary)
            }
            LefschetzCommand::LpFull { shape, budget } => {
                let v = check_lp_full(shape.d, shape.k, *budget)?;
                let summary = format!("lp_full({},{}) holds {}", shape.d, shape.k, v.holds);
                ok(to_json(&v), summary)
            }
        },
        Command::Sl2Check { d, samples, magic_max, seed } => {
            let r = sl2_check(*d, *samples, *magic_max, *seed)?;
            let summary = format!("{} basis vectors checked, {} failures, holds {}", r.checked, r.failures.len(), r.holds);
            Ok(Outcome { verified: r.holds, results: to_json(&r), summary })
        }
        Command::MagicCount { shape, n, budget } => {
            let dims = Dims::new(shape.d, shape.k)?;
            let ns: Vec<u32> = match n {
                Some(n) => vec![*n],
                None => (0..=dims.slice_size() as u32).collect(),
            };
            let counts: Vec<usize> =
                ns.iter().map(|&n| Ok(enumerate_magic_sets(dims, n, *budget)?.len())).collect::<kronlef::Result<_>>()?;
            let summary = ns.iter().zip(&counts).map(|(n, c)| format!("b({n}) = {c}")).collect::<Vec<_>>().join("\n");
            let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
            ok(json!({"d": shape.d, "k": shape.k, "n": ns, "counts": counts}), summary)
        }
        Command::HodgeCheck { shape, tuple, budget } => {
            let dims = Dims::new(shape.d, shape.k)?;
            let t = parse_tuple(tuple, shape.d)?;
            let r = hodge_transport(&t, dims, *budget)?;
            let g = kronecker_characters(&t)?;
            let g_complement = kronecker_characters(&r.complement)?;
            let holds = g == g_complement && r.dim == r.complement_dim && r.images_highest && r.images_independent;
            let summary = format!(
                "g({t}) = {g}, g({}) = {g_complement}, transported basis highest = {}, independent = {}",
                r.complement, r.images_highest, r.images_independent
            );
            let mut v = to_json(&r);
            v["g"] = json!(g.to_string());
            v["g_complement"] = json!(g_complement.to_string());
            v["holds"] = json!(holds);
            Ok(Outcome { results: v, summary, verified: holds })
        }
        Command::VerifyPaper { long, budget, only } => {
            let suite = Suite { long: *long, budget: *budget, cache: Some(cache) };
            let ids: Vec<u32> = if only.is_empty() { (1..=12).collect() } else { only.clone() };
            let outcomes: Vec<_> = ids
                .iter()
                .map(|&id| {
                    let o = suite.run(id);
                    log::info!("{}", o.line());
                    o
                })
                .collect();
            let verified = outcomes.iter().all(|o| o.passed);
            let summary = outcomes.iter().map(|o| o.line()).collect::<Vec<_>>().join("\n");
            Ok(Outcome { results: json!({"criteria": outcomes, "all_passed": verified}), summary, verified })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Coeff { .. } => "coeff",
        Command::Sequence { .. } => "sequence",
        Command::At { .. } => "at",
        Command::OmegaPower { .. } => "omega-power",
        Command::Lefschetz { which: LefschetzCommand::Lp { .. } } => "lefschetz lp",
        Command::Lefschetz { which: LefschetzCommand::Hlp { .. } } => "lefschetz hlp",
        Command::Lefschetz { which: LefschetzCommand::LpFull { .. } } => "lefschetz lp-full",
        Command::Sl2Check { .. } => "sl2-check",
        Command::MagicCount { .. } => "magic-count",
        Command::HodgeCheck { .. } => "hodge-check",
        Command::VerifyPaper { .. } => "verify-paper",
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            log::warn!("cannot set worker count: {e}");
        }
    }
    let cache = open_coefficient_cache(cache_dir_from_env().as_deref());
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = run(&cli.command, &cache);
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => {
            if cli.json {
                let report = RunReport {
                    command: command_name(&cli.command).to_string(),
                    parameters: json!(argv),
                    results: o.results,
                    timings: Timings { total_seconds: elapsed },
                    cache: cache.stats(),
                };
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            } else {
                println!("{}", o.summary);
                let CacheStats { hits, misses } = cache.stats();
                if hits + misses > 0 {
                    println!("cache: {hits} hits, {misses} misses");
                }
            }
            if o.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION as u8)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"command": command_name(&cli.command), "error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
