//! The `unipred` command-line interface.
//!
//! Exit codes: 0 on success, 1 when an invariant violation (or malformed
//! sequence content) was detected, 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use unipred::config::{AlgProbRoute, ExperimentConfig, ExperimentKind, PoolSource};
use unipred::ingest::{ingest_sequence, IngestError};
use unipred::run::{
    run_algoprob, run_diag, run_experiment, run_lz_compare, run_predict, run_regret, BodyFormat,
    RunOutput,
};
use unipred_core::bits::{Bit, FiniteString};
use unipred_core::monovm::{
    run_machine_traced, AlgProbEngine, InstructionParse, MonotoneProgram, ResourceBound,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Descriptions,
    MixtureForm,
}

impl From<RouteArg> for AlgProbRoute {
    fn from(route: RouteArg) -> AlgProbRoute {
        match route {
            RouteArg::Descriptions => AlgProbRoute::Descriptions,
            RouteArg::MixtureForm => AlgProbRoute::MixtureForm,
        }
    }
}

#[derive(Parser)]
#[command(name = "unipred", version, about = "Exact-arithmetic sequential prediction laboratory")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (0 = library default). Outputs are identical for
    /// any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Report format where a command supports both.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sequential Bayes prediction over an observed sequence.
    Predict {
        /// Pool: `default:<n>` or a pool JSON file.
        #[arg(long)]
        pool: String,
        /// Sequence file (`0`/`1`, whitespace ignored, `^` for empty).
        #[arg(long)]
        input: PathBuf,
        /// Append posterior weight columns to every row.
        #[arg(long)]
        emit_weights: bool,
        /// Write `<out>.csv` and `<out>.json` instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regret-bound rows for every pool member on seeded random strings.
    Regret {
        #[arg(long)]
        pool: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the diagonal adversary against a victim predictor.
    Diag {
        /// Victim token (see `victims` docs): `uniform`, `bernoulli:3/4`,
        /// `markov-sticky`, `lz:12`, `solomonoff:18:500`, `default:8`, or
        /// a pool file path.
        #[arg(long)]
        victim: String,
        #[arg(long)]
        horizon: usize,
        /// Bit chosen on exact ties.
        #[arg(long, default_value_t = 0)]
        tie: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate resource-bounded algorithmic probability.
    Algoprob {
        #[arg(long, default_value_t = 18)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        max_steps: u64,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// `descriptions` (the definition) or `mixture-form` (the
        /// machine-index route; values must agree exactly).
        #[arg(long, value_enum, default_value_t = RouteArg::Descriptions)]
        route: RouteArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest-description length of one string.
    Km {
        #[arg(long)]
        string: String,
        #[arg(long, default_value_t = 18)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        max_steps: u64,
    },
    /// Step-by-step execution of one program.
    Trace {
        /// Program bits (`^` for the empty program).
        #[arg(long)]
        program: String,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// LZ76 parse of one string, or a comparison table for a file of strings.
    Lz {
        #[arg(long, conflicts_with = "compare")]
        string: Option<String>,
        /// File with one string per line.
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long, default_value_t = 18)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        max_steps: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a JSON config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Validate a sequence file.
    IngestCheck {
        #[arg(long)]
        input: PathBuf,
    },
}

fn emit(output: RunOutput, out: Option<&Path>) -> Result<usize> {
    match out {
        None => {
            print!("{}", output.body);
            Ok(output.violations)
        }
        Some(base) => {
            let csv_path = base.with_extension("csv");
            let json_path = base.with_extension("json");
            if let Some(parent) = csv_path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&csv_path, &output.body)
                .with_context(|| format!("cannot write {}", csv_path.display()))?;
            let mut text = serde_json::to_string_pretty(&output.summary)?;
            text.push('\n');
            std::fs::write(&json_path, text)
                .with_context(|| format!("cannot write {}", json_path.display()))?;
            eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(output.violations)
        }
    }
}

fn in_thread_pool<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        f()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("cannot build thread pool")?;
        pool.install(f)
    }
}

fn parse_string_arg(s: &str) -> Result<FiniteString> {
    s.parse::<FiniteString>().map_err(|e| anyhow::anyhow!("bad string argument: {e}"))
}

/// Runs a command; `Ok(n)` is the number of invariant violations found.
fn dispatch(cli: Cli) -> Result<usize> {
    match cli.command {
        Command::Predict { pool, input, emit_weights, out } => {
            let pool = PoolSource::from_token(&pool).load()?;
            let sequence = ingest_sequence(&input)?;
            let output = run_predict(&pool, &sequence, emit_weights)?;
            emit(output, out.as_deref())
        }
        Command::Regret { pool, length, samples, out } => {
            let pool = PoolSource::from_token(&pool).load()?;
            let output =
                in_thread_pool(cli.threads, || run_regret(&pool, length, samples, cli.seed))?;
            emit(output, out.as_deref())
        }
        Command::Diag { victim, horizon, tie, out } => {
            if tie > 1 {
                bail!("--tie must be 0 or 1");
            }
            let tie = if tie == 0 { Bit::Zero } else { Bit::One };
            let output = run_diag(&victim, horizon, tie)?;
            emit(output, out.as_deref())
        }
        Command::Algoprob { max_len, max_steps, depth, route, out } => {
            let format = match cli.format {
                Format::Csv => BodyFormat::Csv,
                Format::Json => BodyFormat::Json,
            };
            let output =
                run_algoprob(ResourceBound::new(max_len, max_steps), depth, format, route.into())?;
            emit(output, out.as_deref())
        }
        Command::Km { string, max_len, max_steps } => {
            let y = parse_string_arg(&string)?;
            let engine = AlgProbEngine::new(ResourceBound::new(max_len, max_steps));
            let descriptions = engine.minimal_descriptions(&y);
            match engine.km(&y) {
                Some(km) => {
                    println!("km({y}) = {km} at {}", engine.bound());
                    println!("descriptions: {}", descriptions.members.len());
                    if let Some(shortest) = descriptions.members.first() {
                        println!("shortest: {shortest}");
                    }
                }
                None => {
                    println!("km({y}) not found at {}", engine.bound());
                }
            }
            Ok(0)
        }
        Command::Trace { program, steps } => {
            let program: MonotoneProgram =
                program.parse().map_err(|e| anyhow::anyhow!("bad program bits: {e}"))?;
            match program.parse() {
                InstructionParse::AwaitingInput => {
                    println!("instruction list incomplete: machine is awaiting input");
                }
                InstructionParse::Complete { ops, consumed_bits } => {
                    let list =
                        ops.iter().map(|op| op.mnemonic()).collect::<Vec<_>>().join(" ");
                    println!("instructions: [{list}] RUN ({consumed_bits} bits)");
                }
            }
            let (result, trace) = run_machine_traced(&program, steps);
            println!("step,pc,op,head,cell,output_len");
            for step in &trace {
                println!(
                    "{},{},{},{},{},{}",
                    step.step,
                    step.pc,
                    step.op.mnemonic(),
                    step.head,
                    u8::from(step.cell_before),
                    step.output_len
                );
            }
            println!(
                "output {} status {} consumed {}",
                result.output, result.status, result.input_bits_consumed
            );
            Ok(0)
        }
        Command::Lz { string, compare, max_len, max_steps, out } => match (string, compare) {
            (Some(string), None) => {
                let x = parse_string_arg(&string)?;
                let parse = unipred_core::lzprior::lz76_parse(&x);
                let phrases =
                    parse.phrases.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                println!("phrases: {phrases}");
                println!("C = {}", parse.phrase_count());
                println!("K = {} bits", unipred_core::lzprior::lz_complexity(&x));
                Ok(0)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                let strings = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(parse_string_arg)
                    .collect::<Result<Vec<_>>>()?;
                let output =
                    run_lz_compare(&strings, ResourceBound::new(max_len, max_steps))?;
                emit(output, out.as_deref())
            }
            _ => bail!("lz needs exactly one of --string or --compare"),
        },
        Command::Experiment { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            if let ExperimentKind::Diagonal { tie, .. } = &config.kind {
                if *tie > 1 {
                    bail!("tie must be 0 or 1");
                }
            }
            let record = run_experiment(&config, cli.threads)?;
            eprintln!(
                "wrote {} ({} rows) and {}",
                record.csv_path.display(),
                record.rows,
                record.summary_path.display()
            );
            Ok(record.violations)
        }
        Command::IngestCheck { input } => match ingest_sequence(&input) {
            Ok(x) => {
                println!("ok: {} bits", x.len());
                Ok(0)
            }
            Err(IngestError::Io(e)) => Err(anyhow::anyhow!(e)),
            Err(e) => {
                println!("invalid: {e}");
                Ok(1)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(violations) => {
            eprintln!("{violations} invariant violation(s) detected");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
