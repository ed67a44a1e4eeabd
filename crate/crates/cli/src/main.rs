use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpair::Error;
use qpair_cli::config::{Format, SecularRule};
use qpair_cli::{exit_code, list_presets, load, presets, run_with_workers, write_bundle};

#[derive(Parser)]
#[command(name = "qpair", version, about = "Master-equation scenarios for two coupled qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a preset.
    Run {
        /// Path to a TOML scenario, or a preset name.
        scenario: String,
        /// Output directory (default: the scenario's, else out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated output formats: csv, json, svg.
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
        /// Drop the Lamb-shift Hamiltonian.
        #[arg(long)]
        no_lamb_shift: bool,
        /// Secular rule for the partial variants: full, paper or threshold:EPS.
        #[arg(long)]
        secular: Option<SecularRule>,
        /// Allow local builds at strong coupling.
        #[arg(long)]
        override_validity_guard: bool,
        /// Worker threads for variants and sweep points.
        #[arg(long, env = "QPAIR_WORKERS")]
        workers: Option<usize>,
    },
    /// List the presets, or print one as TOML.
    Presets { name: Option<String> },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Presets { name: Some(name) } => {
            print!("{}", presets::source(&name)?);
        }
        Command::Presets { name: None } => {
            for p in list_presets()? {
                println!("{:<12} {:<14} {}", p.name, p.mode, p.description);
            }
        }
        Command::Run {
            scenario,
            out,
            format,
            no_lamb_shift,
            secular,
            override_validity_guard,
            workers,
        } => {
            let mut config = load(&scenario)?;
            if no_lamb_shift {
                config.options.lamb_shift = false;
            }
            if let Some(rule) = secular {
                config.options.secular = rule;
            }
            config.options.override_validity_guard |= override_validity_guard;
            if let Some(formats) = format {
                config.output.formats = formats;
            }
            let dir = out
                .or_else(|| config.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(&config.name));
            let bundle = run_with_workers(&config, workers)?;
            for line in &bundle.summary {
                println!("{line}");
            }
            for path in write_bundle(&bundle, &dir, &config.output.formats)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
