use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasimoment_cli::{exit, CliError};
use quasimoment_core::invariants::hom_dimension;
use quasimoment_core::liealg::{LieAlgebra, ModuleExpr};
use quasimoment_core::ExecMode;

#[derive(Parser)]
#[command(name = "quasimoment", version, about = "Check quasi-Poisson and moment map identities on linear supermanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenarios of a config file
    Run {
        config: PathBuf,
        /// Truncation order for even coordinates, overriding the config
        #[arg(long)]
        truncation: Option<u32>,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write wall-clock timings as JSON here
        #[arg(long)]
        timing: Option<PathBuf>,
        /// Run scenarios one after another
        #[arg(long)]
        sequential: bool,
        /// Show passing identities and details too
        #[arg(long, short)]
        verbose: bool,
    },
    /// Print dim Hom_g(A, B) for two module expressions
    Invariants {
        algebra: String,
        a: String,
        b: String,
    },
    /// Print a bundled scenario, or list them with `list`
    Show { id: String },
}

fn write_json(path: &PathBuf, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Construction(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Construction(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run {
            config,
            truncation,
            json,
            timing,
            sequential,
            verbose,
        } => {
            let cfg = quasimoment_cli::load_config(&config)?;
            let mode = if sequential { ExecMode::Sequential } else { ExecMode::Parallel };
            let (report, times) = quasimoment_cli::run_config(&cfg, truncation, mode)?;
            print!("{}", quasimoment_cli::render(&report, verbose));
            eprint!("{}", quasimoment_cli::render_timing(&times));
            if let Some(p) = json {
                write_json(&p, &report)?;
            }
            if let Some(p) = timing {
                write_json(&p, &times)?;
            }
            Ok(quasimoment_cli::exit_code(&report))
        }
        Command::Invariants { algebra, a, b } => {
            let g = LieAlgebra::parse(&algebra)?;
            let ea = ModuleExpr::parse(&a)?;
            let eb = ModuleExpr::parse(&b)?;
            let d = hom_dimension(&g, &ea, &eb)?;
            println!("dim Hom_{}({ea}, {eb}) = {d}", g.name());
            Ok(exit::OK)
        }
        Command::Show { id } => {
            if id == "list" {
                for id in quasimoment_cli::bundled_ids() {
                    println!("{id}");
                }
            } else {
                print!("{}", quasimoment_cli::bundled_source(&id)?);
            }
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
