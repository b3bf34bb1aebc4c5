use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynpred::api::Width;
use dynpred::harness::{self, CountingAllocator, StructureSpec, WorkloadSpec};
use dynpred::word_ops;

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

/// Benchmarks and verifies dynamic predecessor structures.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Insert n random keys, run q random predecessor queries, delete the
    /// keys again; report timings and memory as CSV.
    Run(RunArgs),
    /// Compare a structure operation by operation with a sorted array.
    Verify(VerifyArgs),
    /// List structure ids and their default parameters.
    List,
}

#[derive(Args)]
struct StructureArgs {
    /// us-array, us-hash, yfast-ul, yfast-sl, fusion, fusion-wide,
    /// btree-ls, btree-bs or oracle.
    #[arg(long)]
    structure: String,
    /// Structure parameter as key=value, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    structure: StructureArgs,
    /// Key width in bits: 32, 40 or 64.
    #[arg(long, default_value_t = 32)]
    width: u32,
    /// Number of inserted keys.
    #[arg(long, default_value_t = 1 << 20)]
    keys: usize,
    #[arg(long, default_value_t = 1_000_000)]
    queries: usize,
    #[arg(long, default_value_t = 5)]
    iterations: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave out the row with averages over all iterations.
    #[arg(long)]
    no_average: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    structure: StructureArgs,
    /// Key width; every width the structure supports if omitted.
    #[arg(long)]
    width: Option<u32>,
    #[arg(long, default_value_t = 100_000)]
    ops: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Draw all keys from one window of 2^SPAN keys instead of the whole
    /// universe.
    #[arg(long)]
    span: Option<u32>,
}

fn parse_width(bits: u32) -> Result<Width, String> {
    Width::from_bits(bits).ok_or_else(|| format!("unsupported width {bits}; use 32, 40 or 64"))
}

fn structure(args: &StructureArgs) -> Result<StructureSpec, String> {
    StructureSpec::parse(&args.structure, &args.params).map_err(|e| e.to_string())
}

fn run(args: RunArgs) -> Result<(), String> {
    let spec = structure(&args.structure)?;
    let workload = WorkloadSpec {
        width: parse_width(args.width)?,
        n: args.keys,
        q: args.queries,
        iterations: args.iterations,
        seed: args.seed,
    };
    if !harness::meter_available() {
        eprintln!("allocation meter unavailable; memory columns will read NA");
    }
    let result = harness::run_experiment(&workload, &spec).map_err(|e| e.to_string())?;
    for (m, check) in result.measurements.iter().zip(&result.checks) {
        eprintln!(
            "{spec} w={} iteration {}: checksum {:#018x}, {} keys left",
            m.width,
            m.iteration.unwrap_or(0),
            check.checksum,
            check.final_len
        );
    }
    let rows = if args.no_average {
        result.measurements.clone()
    } else {
        result.rows_with_average()
    };
    match &args.out {
        Some(path) => harness::write_csv_file(path, &rows).map_err(|e| e.to_string()),
        None => harness::write_csv(std::io::stdout().lock(), &rows).map_err(|e| e.to_string()),
    }
}

fn verify(args: VerifyArgs) -> Result<bool, String> {
    let spec = structure(&args.structure)?;
    let widths = match args.width {
        Some(bits) => vec![parse_width(bits)?],
        None => Width::ALL.into_iter().filter(|&w| spec.kind.supports(w)).collect(),
    };
    let mut ok = true;
    for width in widths {
        let span = args.span.unwrap_or(width.bits());
        match harness::verify_within(&spec, width, span, args.ops, args.seed).map_err(|e| e.to_string())? {
            Ok(()) => println!("ok {spec} w={width}: {} ops match", args.ops),
            Err(divergence) => {
                println!("FAIL {divergence}");
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if word_ops::backend() == word_ops::Backend::Portable {
        eprintln!("word operations: portable fallbacks");
    }
    let outcome = match cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Verify(args) => verify(args),
        Command::List => {
            for kind in harness::StructureKind::ALL {
                println!("{kind}\t{}", StructureSpec::new(kind).params_string());
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
