use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tenmoment::driver;
use tenmoment::{CliError, RunConfig};

/// Positivity-preserving WENO solver for the Ten-Moment equations.
///
/// Settings come from an optional `key = value` file and are then overridden
/// by the flags given here.
#[derive(Debug, Parser)]
#[command(name = "tenmoment", version)]
struct Args {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem identifier, e.g. sod, near-vacuum-2d, realistic-2d.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    /// js, z or ao; a comma list is allowed with --convergence.
    #[arg(long)]
    weno: Option<String>,
    /// on, off or adaptive.
    #[arg(long)]
    limiter: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    cfl_safe: Option<String>,
    #[arg(long)]
    tfinal: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// csv or vtk.
    #[arg(long)]
    format: Option<String>,
    /// Snapshot every this many steps.
    #[arg(long)]
    cadence: Option<String>,
    /// Comma-separated mesh sizes for a refinement study.
    #[arg(long)]
    convergence: Option<String>,
    /// Comma-separated mesh sizes for an adaptive-versus-uniform timing run.
    #[arg(long)]
    timing: Option<String>,
    /// Also write the problem's standard 1-D cut.
    #[arg(long)]
    cross_section: bool,
    #[arg(long)]
    eps_tilde: Option<String>,
    #[arg(long)]
    v_t: Option<String>,
    /// Body-force source on or off.
    #[arg(long)]
    source: Option<String>,
}

fn build(args: &Args) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        config.apply_text(&text)?;
    }
    let overrides = [
        ("problem", &args.problem),
        ("nx", &args.nx),
        ("ny", &args.ny),
        ("weno", &args.weno),
        ("limiter", &args.limiter),
        ("cfl", &args.cfl),
        ("cfl_safe", &args.cfl_safe),
        ("tfinal", &args.tfinal),
        ("out", &args.out),
        ("format", &args.format),
        ("cadence", &args.cadence),
        ("convergence", &args.convergence),
        ("timing", &args.timing),
        ("eps_tilde", &args.eps_tilde),
        ("v_t", &args.v_t),
        ("source", &args.source),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    if args.cross_section {
        config.cross_section = true;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = build(&args).and_then(|c| driver::run(&c).map(|m| (c, m)));
    match result {
        Ok((config, manifest)) => {
            for (f, _) in &manifest.files {
                println!("wrote {}", config.out.join(f).display());
            }
            if let Some(s) = manifest.get("steps") {
                println!("steps={s} retries={}", manifest.get("retries").unwrap_or("0"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
