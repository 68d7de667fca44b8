//! `hyperlocus`: generate configurations, read off their combinatorics,
//! certify or test the vanishing of the interpolation locus.

mod commands;
mod manifest;
mod sample;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hyperlocus_core::DEFAULT_BUDGET;

use crate::manifest::{Report, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "hyperlocus", version, about = "Unexpected hypersurfaces through point configurations")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Prime used for modular computations; defaults to 2^61 - 1.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Random evaluation trials.
    #[arg(long, global = true, default_value_t = 20)]
    trials: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the JSON document, manifest included, to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a configuration: a4k1, dk, d4, penrose20, fermat or any catalog name.
    Generate {
        name: String,
        /// Polygon parameter for a4k1.
        #[arg(long, default_value_t = 2)]
        k: u64,
        /// Point set for dk: seven or nine.
        #[arg(long, default_value = "seven")]
        variant: String,
        /// Drop the designated point (a30-3, a15-1).
        #[arg(long)]
        minus: bool,
    },
    /// List catalog entries.
    Catalog,
    /// Weak combinatorics of a configuration.
    Incidence { config: String },
    /// Combinatorial certificate that the locus vanishes identically.
    Certify {
        config: String,
        #[arg(short)]
        d: u32,
        #[arg(short)]
        m: u32,
    },
    /// Dimension counts, unexpectedness and the random zero test.
    Analyze {
        config: String,
        #[arg(short)]
        d: u32,
        #[arg(short)]
        m: u32,
    },
    /// Expand the locus polynomial F = det M.
    Locus {
        config: String,
        #[arg(short)]
        d: u32,
        #[arg(short)]
        m: u32,
        /// Cap on column subsets in the Laplace expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Number of real points on the curve to emit (plane, rational input).
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Plane counts of the Penrose configuration after removing points.
    AuditPenrose {
        #[arg(long, default_value_t = 5)]
        remove: usize,
        #[arg(long, default_value = "penrose20")]
        config: String,
        #[arg(short, default_value_t = 4)]
        d: u32,
        #[arg(short, default_value_t = 4)]
        m: u32,
    },
}

/// Settings shared by every command.
pub struct Ctx {
    pub seed: u64,
    pub prime: Option<u64>,
    pub trials: u64,
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let ctx = Ctx {
        seed: cli.seed,
        prime: cli.prime,
        trials: cli.trials,
    };
    let (name, report): (&str, Report) = match cli.command {
        Command::Generate { name, k, variant, minus } => ("generate", commands::generate(&ctx, &name, k, &variant, minus)?),
        Command::Catalog => ("catalog", commands::catalog()),
        Command::Incidence { config } => ("incidence", commands::incidence(&config)?),
        Command::Certify { config, d, m } => ("certify", commands::certify(&config, d, m)?),
        Command::Analyze { config, d, m } => ("analyze", commands::analyze(&ctx, &config, d, m)?),
        Command::Locus { config, d, m, budget, sample } => {
            ("locus", commands::locus(&ctx, &config, d, m, budget, sample)?)
        }
        Command::AuditPenrose { remove, config, d, m } => ("audit-penrose", commands::audit(&config, remove, d, m)?),
    };
    let manifest = RunManifest::new(name, cli.format, &ctx, &report);
    let doc = report.document(&manifest)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{doc}\n"))?;
        eprintln!("wrote {}", path.display());
    }
    match cli.format {
        OutputFormat::Json => println!("{doc}"),
        OutputFormat::Text => print!("{}{}", manifest.header(), report.text),
    }
    Ok(report.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    eprintln!("wall time: {:.3?}", start.elapsed());
    ExitCode::from(code)
}
