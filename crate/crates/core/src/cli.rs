//! `huopm` command line: mine, verify, bench and gen.
//!
//! Exit codes: 0 success, 1 internal error (or a verify mismatch), 2 input
//! error (bad flags, unreadable or malformed data, oracle guard refusal).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::io::{
    generate_synthetic, parse_quantity_profit, parse_spmf_utility, write_quantity_profit,
    write_results, write_spmf_utility, write_stats_csv, GeneratorSpec, StatsRow,
};
use crate::model::{MiningParams, TransactionDatabase};
use crate::oracle::{compare_results, OracleConfig, DEFAULT_ITEM_CAP};
use crate::search::{Miner, MiningOutcome};

/// Tolerance on uo when comparing engine and oracle output.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "huopm", version, about = "Length-constrained high utility-occupancy pattern mining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine patterns and write them to --output (stdout if absent).
    Mine(MineArgs),
    /// Compare the miner against exhaustive enumeration.
    Verify(VerifyArgs),
    /// Sweep one threshold and write a stats row per value.
    Bench(BenchArgs),
    /// Generate a seeded synthetic database.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Spmf,
    Qty,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "spmf")]
    pub format: Format,
    /// Unit utility file (qty format only).
    #[arg(long)]
    pub profit: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub minsup: Option<f64>,
    #[arg(long)]
    pub minuo: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub minlen: usize,
    /// 0 means unconstrained.
    #[arg(long, default_value_t = 0)]
    pub maxlen: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Trim inherited luo lists on joins (experimental).
    #[arg(long)]
    pub trim_luo: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Check this many random (minsup, minuo, minlen, maxlen) settings instead of the flags.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ITEM_CAP)]
    pub item_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Minsup,
    Minuo,
    Maxlen,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Vec<String>,
    /// CSV destination (stdout if absent).
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub items: usize,
    #[arg(long)]
    pub transactions: usize,
    #[arg(long)]
    pub avg_len: usize,
    #[arg(long, default_value_t = 5)]
    pub max_quantity: u32,
    #[arg(long, default_value_t = 10)]
    pub max_utility: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "qty")]
    pub format: Format,
    /// Profit file for qty output; defaults to the output path with a `.prof` extension.
    #[arg(long)]
    pub profit: Option<PathBuf>,
}

/// Failure classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            let (Failure::Input(msg) | Failure::Internal(msg)) = &failure;
            eprintln!("huopm: {msg}");
            ExitCode::from(failure.code())
        }
    }
}

pub fn execute(command: &Command) -> CliResult<u8> {
    match command {
        Command::Mine(args) => run_mine(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    }
}

fn check_input_flags(input: &InputArgs) -> CliResult<()> {
    match (input.format, &input.profit) {
        (Format::Qty, None) => Err(Failure::Input("--profit is required with --format qty".into())),
        (Format::Spmf, Some(_)) => Err(Failure::Input("--profit only applies to --format qty".into())),
        _ => Ok(()),
    }
}

fn params_from(t: &ThresholdArgs, minsup: Option<f64>, minuo: Option<f64>, maxlen: usize) -> CliResult<MiningParams> {
    let alpha = minsup.ok_or_else(|| Failure::Input("--minsup is required".into()))?;
    let beta = minuo.ok_or_else(|| Failure::Input("--minuo is required".into()))?;
    let params = if maxlen == 0 {
        MiningParams::unconstrained(alpha, beta, t.minlen)
    } else {
        MiningParams::new(alpha, beta, t.minlen, maxlen)
    };
    params.map_err(Failure::from)
}

fn check_threads(t: &ThresholdArgs) -> CliResult<()> {
    if t.threads == 0 {
        return Err(Failure::Input("--threads must be at least 1".into()));
    }
    Ok(())
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load_database(input: &InputArgs) -> CliResult<TransactionDatabase> {
    let data = open(&input.input)?;
    let db = match input.format {
        Format::Spmf => parse_spmf_utility(data),
        Format::Qty => {
            let profit = input.profit.as_ref().expect("checked by check_input_flags");
            parse_quantity_profit(data, open(profit)?)
        }
    };
    let db = db.map_err(|e| match e {
        Error::Io(io) => Failure::Input(format!("{}: {io}", input.input.display())),
        other => Failure::Input(other.to_string()),
    })?;
    if db.is_empty() {
        return Err(Failure::Input(format!("{}: no transactions", input.input.display())));
    }
    Ok(db)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn stats_row(dataset: &str, params: &MiningParams, outcome: &MiningOutcome) -> StatsRow {
    StatsRow {
        dataset: dataset.to_string(),
        alpha: params.alpha,
        beta: params.beta,
        minlen: params.minlen,
        maxlen: params.maxlen.unwrap_or(0),
        runtime_ms: outcome.stats.runtime_ms,
        visited_nodes: outcome.stats.visited_nodes,
        constructions: outcome.stats.constructions,
        patterns: outcome.results.len(),
    }
}

fn miner(params: MiningParams, t: &ThresholdArgs) -> Miner {
    Miner::new(params).threads(t.threads).trim_inherited_luo(t.trim_luo)
}

pub fn run_mine(args: &MineArgs) -> CliResult<u8> {
    let t = &args.thresholds;
    check_input_flags(&args.input)?;
    check_threads(t)?;
    let params = params_from(t, t.minsup, t.minuo, t.maxlen)?;
    let db = load_database(&args.input)?;

    let outcome = miner(params, t).mine(&db)?;
    match &args.output {
        Some(path) => write_results(&outcome.results, db.symbols(), create(path)?)?,
        None => write_results(&outcome.results, db.symbols(), io::stdout().lock())?,
    }
    if let Some(path) = &args.stats {
        let row = stats_row(&dataset_name(&args.input.input), &params, &outcome);
        write_stats_csv(&[row], create(path)?)?;
    }
    Ok(0)
}

/// Runs engine and oracle on one setting; returns whether they agree.
fn verify_one(db: &TransactionDatabase, params: MiningParams, args: &VerifyArgs, out: &mut impl Write) -> CliResult<bool> {
    let oracle = OracleConfig::new(params).item_cap(args.item_cap).mine(db)?;
    let engine = miner(params, &args.thresholds).mine(db)?;
    let cmp = compare_results(&engine.results, &oracle, VERIFY_TOLERANCE);
    let symbols = db.symbols();
    let w = |e: io::Error| Failure::Internal(e.to_string());
    if cmp.is_match() {
        writeln!(out, "MATCH: {} patterns", cmp.matched).map_err(w)?;
        return Ok(true);
    }
    writeln!(
        out,
        "MISMATCH: {} matched, {} engine-only, {} oracle-only, {} disagreeing",
        cmp.matched,
        cmp.only_left.len(),
        cmp.only_right.len(),
        cmp.disagreements.len()
    )
    .map_err(w)?;
    for r in &cmp.only_left {
        writeln!(out, "- engine only: {} #SUP: {} #UO: {:.12}", r.pattern.display(symbols), r.sup, r.uo).map_err(w)?;
    }
    for r in &cmp.only_right {
        writeln!(out, "+ oracle only: {} #SUP: {} #UO: {:.12}", r.pattern.display(symbols), r.sup, r.uo).map_err(w)?;
    }
    for (l, r) in &cmp.disagreements {
        writeln!(
            out,
            "~ {}: engine ({}, {:.12}) oracle ({}, {:.12})",
            l.pattern.display(symbols),
            l.sup,
            l.uo,
            r.sup,
            r.uo
        )
        .map_err(w)?;
    }
    Ok(false)
}

/// Random settings drawn from the grids used by the fuzzing harness.
pub fn random_settings(count: usize, seed: u64) -> Vec<MiningParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let alpha = rng.gen_range(1..=5) as f64 / 10.0;
            let beta = rng.gen_range(1..=8) as f64 / 10.0;
            let maxlen = rng.gen_range(1..=5);
            let minlen = rng.gen_range(1..=2usize).min(maxlen);
            MiningParams::new(alpha, beta, minlen, maxlen).expect("grid values are valid")
        })
        .collect()
}

pub fn run_verify(args: &VerifyArgs) -> CliResult<u8> {
    let t = &args.thresholds;
    check_input_flags(&args.input)?;
    check_threads(t)?;
    let settings = match args.random {
        Some(0) => return Err(Failure::Input("--random must be at least 1".into())),
        Some(n) => random_settings(n, args.seed),
        None => vec![params_from(t, t.minsup, t.minuo, t.maxlen)?],
    };
    let db = load_database(&args.input)?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut all_match = true;
    for params in settings {
        if args.random.is_some() {
            write!(
                out,
                "minsup={} minuo={} minlen={} maxlen={}: ",
                params.alpha,
                params.beta,
                params.minlen,
                params.maxlen.unwrap_or(0)
            )
            .map_err(|e| Failure::Internal(e.to_string()))?;
        }
        all_match &= verify_one(&db, params, args, &mut out)?;
    }
    Ok(if all_match { 0 } else { 1 })
}

fn parse_sweep(args: &BenchArgs) -> CliResult<Vec<MiningParams>> {
    let t = &args.thresholds;
    if args.values.is_empty() {
        return Err(Failure::Input("--values must list at least one value".into()));
    }
    let bad = |v: &str| Failure::Input(format!("bad sweep value `{v}`"));
    let mut settings = Vec::with_capacity(args.values.len() + 1);
    for v in &args.values {
        let v = v.trim();
        let params = match args.sweep {
            SweepAxis::Minsup => params_from(t, Some(v.parse().map_err(|_| bad(v))?), t.minuo, t.maxlen)?,
            SweepAxis::Minuo => params_from(t, t.minsup, Some(v.parse().map_err(|_| bad(v))?), t.maxlen)?,
            SweepAxis::Maxlen => params_from(t, t.minsup, t.minuo, v.parse().map_err(|_| bad(v))?)?,
        };
        settings.push(params);
    }
    if args.sweep == SweepAxis::Maxlen && settings.iter().all(|p| p.maxlen.is_some()) {
        settings.push(params_from(t, t.minsup, t.minuo, 0)?);
    }
    Ok(settings)
}

pub fn run_bench(args: &BenchArgs) -> CliResult<u8> {
    check_input_flags(&args.input)?;
    check_threads(&args.thresholds)?;
    let settings = parse_sweep(args)?;
    let db = load_database(&args.input)?;
    let dataset = dataset_name(&args.input.input);

    let mut rows = Vec::with_capacity(settings.len());
    for params in settings {
        let outcome = miner(params, &args.thresholds).mine(&db)?;
        rows.push(stats_row(&dataset, &params, &outcome));
    }
    match &args.stats {
        Some(path) => write_stats_csv(&rows, create(path)?)?,
        None => write_stats_csv(&rows, io::stdout().lock())?,
    }
    Ok(0)
}

pub fn run_gen(args: &GenArgs) -> CliResult<u8> {
    let spec = GeneratorSpec {
        n_items: args.items,
        n_transactions: args.transactions,
        avg_transaction_len: args.avg_len,
        max_quantity: args.max_quantity,
        max_unit_utility: args.max_utility,
        seed: args.seed,
    };
    spec.validate()?;
    if args.format == Format::Spmf && args.profit.is_some() {
        return Err(Failure::Input("--profit only applies to --format qty".into()));
    }
    let db = generate_synthetic(&spec)?;
    match args.format {
        Format::Qty => {
            let profit = args
                .profit
                .clone()
                .unwrap_or_else(|| args.output.with_extension("prof"));
            write_quantity_profit(&db, create(&args.output)?, create(&profit)?)?;
        }
        Format::Spmf => write_spmf_utility(&db, create(&args.output)?)?,
    }
    Ok(0)
}
