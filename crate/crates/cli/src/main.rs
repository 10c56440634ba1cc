mod commands;
mod fail;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flagcx_core::rootsys::FlagSpec;

use crate::commands::Selection;
use crate::fail::CliError;
use crate::report::Report;

/// Invariant generalized complex structures on real flag manifolds.
#[derive(Parser, Debug)]
#[command(name = "flagcx", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
}

#[derive(Args, Debug)]
struct FlagArgs {
    /// Family letter (A, B, C, D, G), optionally with the rank (`D4`).
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Θ as `all`, simple indices (`1,3`) or simple roots (`λ1-λ2,2λ3`).
    #[arg(long, default_value = "")]
    theta: String,
}

impl FlagArgs {
    fn flag(&self) -> Result<FlagSpec, CliError> {
        input::flag(&self.ty, self.rank, &self.theta)
    }
}

#[derive(Args, Debug)]
struct StructureArgs {
    /// One block per class: `nc:a:x[:y]` or `c:b:c`.
    #[arg(long)]
    blocks: Option<String>,
    /// Draw a random structure of this combination instead (`c,nc,...`).
    #[arg(long)]
    combination: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl StructureArgs {
    fn build(&self, fs: &FlagSpec) -> Result<flagcx_core::gtangent::InvariantGacs, CliError> {
        let blocks = self.blocks.as_deref().map(input::blocks).transpose()?;
        let combination = self.combination.as_deref().map(input::combination).transpose()?;
        commands::structure(fs, blocks, combination, self.seed)
    }

    fn seed(&self) -> Option<u64> {
        self.combination.as_ref().map(|_| self.seed)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// M-classes and the existence test.
    Classify {
        #[command(flatten)]
        flag: FlagArgs,
    },
    /// Sample structures and certify non-integrability.
    Certify {
        #[command(flatten)]
        flag: FlagArgs,
        #[arg(long, conflicts_with_all = ["all_combinations", "random"])]
        combination: Option<String>,
        #[arg(long, conflicts_with = "random")]
        all_combinations: bool,
        /// A fresh random combination for every sample.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coordinates of the B-transformation orbit.
    Moduli {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// The invariant pure spinor.
    Spinor {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Whether two structures form a generalized Hermitian pair.
    Hermitian {
        #[command(flatten)]
        flag: FlagArgs,
        #[command(flatten)]
        structure: StructureArgs,
        /// Blocks of the second structure; a random matching one when absent.
        #[arg(long)]
        partner: Option<String>,
    },
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FLAGCX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("FLAGCX_THREADS={v:?} is not a thread count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Runs a command; the second value is the exit code for a successful run.
fn run(cli: &Cli) -> Result<(Report, u8), CliError> {
    let mut code = 0;
    let report = match &cli.command {
        Command::Classify { flag } => {
            let fs = flag.flag()?;
            Report { command: "classify", flag: report::flag(&fs), payload: commands::classify(&fs), seed: None }
        }
        Command::Certify { flag, combination, all_combinations, random, samples, seed } => {
            let fs = flag.flag()?;
            let selection = match (combination, all_combinations, random) {
                (Some(c), _, _) => Selection::Fixed(input::combination(c)?),
                (None, true, _) => Selection::All,
                (None, false, true) => Selection::Random,
                _ => {
                    return Err(CliError::Usage(
                        "choose one of --combination, --all-combinations, --random".into(),
                    ))
                }
            };
            let cert = commands::certify(&fs, selection, *samples, *seed, &thread_pool()?)?;
            if cert.contradiction {
                code = 3;
            }
            Report { command: "certify", flag: report::flag(&fs), payload: cert.payload, seed: Some(*seed) }
        }
        Command::Moduli { flag, structure } => {
            let fs = flag.flag()?;
            let j = structure.build(&fs)?;
            Report { command: "moduli", flag: report::flag(&fs), payload: commands::moduli(&j)?, seed: structure.seed() }
        }
        Command::Spinor { flag, structure } => {
            let fs = flag.flag()?;
            let j = structure.build(&fs)?;
            Report { command: "spinor", flag: report::flag(&fs), payload: commands::spinor(&j)?, seed: structure.seed() }
        }
        Command::Hermitian { flag, structure, partner } => {
            let fs = flag.flag()?;
            let j = structure.build(&fs)?;
            let (j2, seed) = match partner {
                Some(p) => (commands::structure(&fs, Some(input::blocks(p)?), None, 0)?, structure.seed()),
                None => (commands::hermitian_partner(&j, structure.seed)?, Some(structure.seed)),
            };
            Report { command: "hermitian", flag: report::flag(&fs), payload: commands::hermitian(&j, &j2)?, seed }
        }
    };
    Ok((report, code))
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let Format::Json = cli.format;
    let mut text = serde_json::to_string_pretty(&report.to_value()).expect("report serializes");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|(report, code)| emit(&cli, &report).map(|_| code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("flagcx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
