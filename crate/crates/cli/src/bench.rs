use std::io::Write;

use clap::{Parser, Subcommand};
use ddl_bench::{encoding, generate, machine_lines, run as run_instance, table, InstanceSpec, Kind, Problem, RunOptions};
use ddl_core::EnumerationLimit;

use crate::{EXIT_OK, EXIT_PARSE};

/// Exit code when an oracle comparison fails.
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ddl bench", about = "Benchmark encodings, instances and timings")]
struct BenchCli {
    #[command(subcommand)]
    command: BenchCommand,
}

#[derive(Debug, Subcommand)]
enum BenchCommand {
    /// Generate, solve and time instances.
    Run {
        kind: String,
        /// Sizes as key=value pairs, e.g. nodes=150,edges=350.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of consecutive seeds to run.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Enumerate all answer sets and compare with brute force.
        #[arg(long)]
        oracle: bool,
        /// Answer sets to look for (0: all), instead of the default.
        #[arg(short = 'n', long)]
        limit: Option<usize>,
    },
    /// Print the facts of an instance.
    Generate {
        kind: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the encoding of a problem.
    Encoding { kind: String },
}

fn spec(kind: &str, params: &str, seed: u64) -> Result<InstanceSpec, ddl_bench::BenchError> {
    let kind: Kind = kind.parse()?;
    Ok(InstanceSpec::new(Problem::parse(kind, params)?, seed))
}

pub fn bench(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match BenchCli::try_parse_from(std::iter::once("ddl bench".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        BenchCommand::Encoding { kind } => kind.parse::<Kind>().map(|k| {
            let _ = write!(out, "{}", encoding(k));
            EXIT_OK
        }),
        BenchCommand::Generate { kind, params, seed } => spec(&kind, &params, seed).and_then(|s| {
            let inst = generate(&s)?;
            let _ = write!(out, "{}{}", inst.facts(), inst.query_rules());
            Ok(EXIT_OK)
        }),
        BenchCommand::Run {
            kind,
            params,
            seed,
            runs,
            oracle,
            limit,
        } => (|| {
            let first = spec(&kind, &params, seed)?;
            let options = RunOptions {
                oracle,
                limit: limit.map(EnumerationLimit::at_most),
            };
            let mut reports = Vec::new();
            for s in seed..seed + runs {
                reports.push(run_instance(&InstanceSpec { seed: s, ..first }, options)?);
            }
            let _ = write!(out, "{}\n{}", table(&reports), machine_lines(&reports));
            Ok(if reports.iter().any(|r| r.oracle == Some(false)) {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            })
        })(),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_PARSE
    })
}
