use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use etale_cli::{exit_code, load_json, render, run, Request, Verb};
use etale_core::oracle::DEFAULT_BUDGET;

/// Exact computations with etale subalgebras, ideal systems and Plücker
/// geometry. Input and output are JSON.
#[derive(Parser, Debug)]
#[command(name = "etale", version)]
struct Cli {
    /// minpoly, idempotents, psi, phi, type, is-subfield, ideal-system,
    /// from-ideal-system, plucker, plucker-inv, intersect, pair-to-line,
    /// enumerate, verify-moduli
    verb: String,
    /// Algebra descriptor: a file, `-` for standard input, or inline JSON
    #[arg(long)]
    algebra: Option<String>,
    /// Operands: a file, `-` for standard input, or inline JSON
    #[arg(long)]
    input: Option<String>,
    /// Partition such as `1,1` or `2,1`
    #[arg(long)]
    rho: Option<String>,
    /// Maximum number of candidate subspaces an enumeration may visit
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include wall-clock seconds in enumeration reports
    #[arg(long)]
    timing: bool,
}

fn execute(cli: &Cli) -> etale_core::Result<String> {
    let verb: Verb = cli.verb.parse()?;
    let mut req = Request::new(verb);
    if cli.algebra.as_deref() == Some("-") && cli.input.as_deref() == Some("-") {
        return Err(etale_core::Error::Parse("only one of --algebra and --input can read standard input".into()));
    }
    req.algebra = cli.algebra.as_deref().map(load_json).transpose()?;
    req.input = cli.input.as_deref().map(load_json).transpose()?;
    req.rho = cli.rho.clone();
    req.budget = cli.budget;
    req.timing = cli.timing;
    Ok(render(&run(&req)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
