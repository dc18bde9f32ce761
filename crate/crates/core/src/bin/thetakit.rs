use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thetakit::cli::{cmd_conjecture, cmd_figures, cmd_verify, exit_code, parse_uv, Format, RunConfig, Spacing};
use thetakit::Error;

#[derive(Parser)]
#[command(name = "thetakit", version, about = "Theta quotient convexity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification check and write a report.
    Verify(Flags),
    /// Regenerate the data behind the six figures as CSV.
    Figures(Flags),
    /// Scan the quotients for complete monotonicity (evidence only).
    Conjecture(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    t_lo: Option<f64>,
    #[arg(long)]
    t_hi: Option<f64>,
    #[arg(long)]
    t_count: Option<usize>,
    /// log or linear
    #[arg(long)]
    t_spacing: Option<String>,
    /// A "u,v" pair; repeat for several.
    #[arg(long)]
    uv: Vec<String>,
    #[arg(long)]
    x_grid: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    order_k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json, or both comma-separated.
    #[arg(long)]
    format: Option<String>,
    /// Record wall-clock time per check.
    #[arg(long)]
    timings: bool,
}

impl Flags {
    fn apply(self, mut cfg: RunConfig) -> Result<RunConfig, Error> {
        if let Some(v) = self.t_lo {
            cfg.t_grid.lo = v;
        }
        if let Some(v) = self.t_hi {
            cfg.t_grid.hi = v;
        }
        if let Some(v) = self.t_count {
            cfg.t_grid.count = v;
        }
        if let Some(v) = self.t_spacing {
            cfg.t_grid.spacing = v.parse::<Spacing>()?;
        }
        if !self.uv.is_empty() {
            cfg.uv_pairs = self.uv.iter().map(|s| parse_uv(s)).collect::<Result<_, _>>()?;
        }
        if let Some(v) = self.x_grid {
            cfg.x_grid_n = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.order_k {
            cfg.order_k = v;
        }
        if let Some(v) = self.out {
            cfg.output_dir = v;
        }
        if let Some(v) = self.format {
            cfg.formats = v.split(',').map(str::parse::<Format>).collect::<Result<_, _>>()?;
        }
        cfg.timings = self.timings;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify(flags) => {
            let cfg = flags.apply(RunConfig::verify_default())?;
            let report = cmd_verify(&cfg)?;
            eprint!("{}", report.summary());
            let json = cfg.formats.contains(&Format::Json);
            let csv = cfg.formats.contains(&Format::Csv);
            for p in report.write(&cfg.output_dir, "verify_report", json, csv)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(report.passed())
        }
        Command::Figures(flags) => {
            let cfg = flags.apply(RunConfig::figures_default())?;
            for p in cmd_figures(&cfg)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Conjecture(flags) => {
            let cfg = flags.apply(RunConfig::conjecture_default())?;
            let report = cmd_conjecture(&cfg)?;
            eprint!("{}", report.summary());
            let json = cfg.formats.contains(&Format::Json);
            let csv = cfg.formats.contains(&Format::Csv);
            for p in report.write(&cfg.output_dir, "conjecture_report", json, csv)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let result = run(Cli::parse());
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result) as u8)
}
