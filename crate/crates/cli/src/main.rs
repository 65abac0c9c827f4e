mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use secpoly::Error;

use report::{Outcome, Verdict};

#[derive(Parser)]
#[command(name = "secpoly", version, about = "Regular subdivisions of planar point configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print the machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Largest configuration size to enumerate
    #[arg(long, global = true)]
    limit: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Face census of the secondary polytope
    Census {
        points: PathBuf,
        #[arg(long)]
        apex: Option<usize>,
        /// List the regular subdivisions instead of only counting them
        #[arg(long)]
        regular_only: bool,
        /// List the regular subdivisions of this face dimension
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Subdivision induced by a height file
    Lift { points: PathBuf, heights: PathBuf },
    /// Link signature of a subdivision around an apex
    Signature {
        points: PathBuf,
        subdivision: PathBuf,
        #[arg(long)]
        apex: usize,
    },
    /// Star of the apex, polyline and negative intervals for a signature
    Star {
        points: PathBuf,
        #[arg(long)]
        apex: usize,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Heights whose lift contains the extended star of a signature
    CompleteStar {
        points: PathBuf,
        #[arg(long)]
        apex: usize,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Well-formed subdivision with a given extended signature
    WellFormed {
        points: PathBuf,
        #[arg(long)]
        apex: usize,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, default_value = "")]
        delta: String,
    },
    /// Check the face-number inequalities against the associahedron
    VerifyMain { points: PathBuf },
    /// Per extended signature counts against their lower bounds
    Stratify {
        points: PathBuf,
        #[arg(long)]
        apex: usize,
    },
    /// Face numbers of the associahedron of the (n+2)-gon
    Assoc {
        n: usize,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Catalan product and convolution inequalities for parts m_1,...,m_k
    Catalan {
        parts: String,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// Gale dual of n = d + 4 points and its arc crossings
    Gale {
        points: PathBuf,
        #[arg(long)]
        perturb: bool,
    },
    /// Two-circle drawing of n points and its crossing count
    TwoCircle { n: usize },
    /// Hill number Z(n)
    Hill { n: usize },
    /// Chamber count of the Gale dual against a direct count of regular triangulations
    Duality {
        points: PathBuf,
        #[arg(long)]
        perturb: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeLimit { .. } => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn configure_workers() {
    if let Some(n) = std::env::var("SECPOLY_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers();
    let start = Instant::now();
    match report::run(&cli.command, cli.common.limit) {
        Ok(Outcome { json, text, verdict }) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe downstream is not an error of ours
            let _ = if cli.common.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("reports serialize"))
            } else {
                write!(out, "{text}").and_then(|_| writeln!(out, "time: {:.3}s", start.elapsed().as_secs_f64()))
            };
            match verdict {
                Some(Verdict::Fail) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
