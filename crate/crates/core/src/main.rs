//! Command-line front end for validated Abelian-integral enclosures.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "abelint",
    version,
    about = "Validated enclosures of Abelian integrals and limit-cycle certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Problem configuration file.
    #[arg(long, global = true, default_value = "problem.cfg")]
    config: PathBuf,
    /// Override the config's subdivision stopping size.
    #[arg(long, global = true)]
    minsize: Option<f64>,
    /// Output directory for tables and certificates.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Significant digits for printed decimal interval endpoints.
    #[arg(long, global = true)]
    digits: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured monomials per family and emit CSV tables.
    Sample {
        /// Also write per-level cover dumps for plotting/debugging.
        #[arg(long)]
        dump_covers: bool,
    },
    /// Solve the [solve] linear system for perturbation coefficients.
    Solve,
    /// Certify sign changes of the combined integral and write the
    /// certificate document. Exits 0 only if every adjacent sample pair is
    /// conclusive and every expected count matches.
    Certify,
    /// Print the trapping box per configured (family, h).
    Trap,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = abelint::runner::RunOptions {
        minsize: cli.minsize,
        digits: cli.digits,
        out_dir: cli.out.clone(),
        dump_covers: matches!(cli.command, Command::Sample { dump_covers: true }),
    };
    let cfg = match abelint::runner::load_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let result = match cli.command {
        Command::Sample { .. } => abelint::runner::cmd_sample(&cfg, &opts).map(|o| {
            print!("{}", o.report);
            true
        }),
        Command::Solve => abelint::runner::cmd_solve(&cfg, &opts).map(|o| {
            print!("{}", o.report);
            true
        }),
        Command::Certify => abelint::runner::cmd_certify(&cfg, &opts).map(|o| {
            print!("{}", o.summary);
            println!("certificate: {}", o.document_path.display());
            o.certified
        }),
        Command::Trap => abelint::runner::cmd_trap(&cfg, &opts).map(|o| {
            print!("{}", o.report);
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
