use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leviflat::cli::{self, Command, JobConfig, Tolerances};

#[derive(Parser)]
#[command(name = "leviflat", version, about = "Singularities, webs and hulls of Levi-flat hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Point of interest, e.g. `0,0` or `1+i,0.5`.
    #[arg(long, global = true)]
    point: Option<String>,
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Grid cell size of the value plane.
    #[arg(long, global = true)]
    grid: Option<f64>,
    /// Half side of the value-plane window (hull) or slice window (cr).
    #[arg(long, global = true)]
    window: Option<f64>,
    /// `name=value` with name one of flat, sep, disc, moment.
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
    /// Overrides LEVIFLAT_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Levi-flatness and the type of a point.
    Classify { input: PathBuf },
    /// Segre variety of a point.
    Segre { input: PathBuf },
    /// Implicit web equation at a Segre nondegenerate point (n = 2).
    Web { input: PathBuf },
    /// Check a candidate first integral against the web.
    IntegralVerify {
        input: PathBuf,
        #[arg(long)]
        h: String,
    },
    /// Convexity verdict with certificates.
    Hull {
        input: PathBuf,
        /// First integral for escape paths.
        #[arg(long)]
        h: Option<String>,
        /// Probe point; repeatable.
        #[arg(long)]
        q: Vec<String>,
        /// Number of seeded random probes in B(0, 1/2).
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, value_parser = cli::parse_floats, default_value = "0.3,0.1,0.03")]
        eps: Vec<Vec<f64>>,
    },
    /// Attached disc families.
    Discs {
        input: Option<PathBuf>,
        #[arg(long)]
        w0: Option<String>,
        #[arg(long, value_parser = cli::parse_floats, default_value = "0.3,0.1,0.03")]
        eps: Vec<Vec<f64>>,
        #[arg(long)]
        brunella_wedge: bool,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_parser = cli::parse_floats, default_value = "0.01,0.005")]
        delta: Vec<Vec<f64>>,
    },
    /// Moments and holomorphic extension of boundary data over slices.
    Cr {
        input: PathBuf,
        #[arg(long)]
        function: String,
        /// Base points: `a,b,...` (n = 2) or `;`-separated tuples.
        #[arg(long)]
        bases: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        /// Extension grid per base (0 to skip).
        #[arg(long = "extension-grid", default_value_t = 5)]
        extension_grid: usize,
        /// Side of a grid around the first base for the holomorphy check of mu_0.
        #[arg(long)]
        holomorphy: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        spacing: f64,
    },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (input, command) = match args.command {
        Cmd::Classify { input } => (Some(input), Command::Classify),
        Cmd::Segre { input } => (Some(input), Command::Segre),
        Cmd::Web { input } => (Some(input), Command::Web),
        Cmd::IntegralVerify { input, h } => (Some(input), Command::IntegralVerify { h }),
        Cmd::Hull { input, h, q, random, eps } => (Some(input), Command::Hull { h, q, random, eps: flat(eps) }),
        Cmd::Discs { input, w0, eps, brunella_wedge, c, delta } => {
            (input, Command::Discs { w0, eps: flat(eps), brunella_wedge, c, delta: flat(delta) })
        }
        Cmd::Cr { input, function, bases, k, nodes, extension_grid, holomorphy, spacing } => (
            Some(input),
            Command::Cr { function, bases, k, nodes, grid: extension_grid, holomorphy, spacing },
        ),
    };
    let seed = match cli::resolve_seed(args.common.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::EXIT_PARSE as u8);
        }
    };
    let mut tol = Tolerances::default();
    for t in &args.common.tol {
        if let Err(e) = tol.set(t) {
            eprintln!("error: {e}");
            return ExitCode::from(cli::EXIT_PARSE as u8);
        }
    }
    let cfg = JobConfig {
        input,
        command,
        point: args.common.point,
        seed,
        tol,
        radius: args.common.radius,
        grid: args.common.grid,
        window: args.common.window,
        out_dir: args.common.out_dir.clone(),
    };
    let outcome = cli::run(&cfg);
    // artifacts first so that `--out` may point into the artifact directory
    if let Some(dir) = &args.common.out_dir {
        if let Err(e) = cli::write_artifacts(dir, &outcome.artifacts) {
            eprintln!("error: cannot write artifacts: {e}");
            return ExitCode::from(cli::EXIT_NUMERIC as u8);
        }
    }
    let text = serde_json::to_string_pretty(&outcome.report).expect("json");
    match &args.common.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(cli::EXIT_NUMERIC as u8);
            }
        }
        None => {
            // a closed pipe is not an error of the computation
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    ExitCode::from(outcome.exit as u8)
}

// clap collects one Vec per occurrence of a list-valued flag.
fn flat(v: Vec<Vec<f64>>) -> Vec<f64> {
    v.into_iter().flatten().collect()
}
