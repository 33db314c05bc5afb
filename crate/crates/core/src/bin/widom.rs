use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use widom::cli::{error_record, parse_config, run_file, OutputFormat, Overrides};

#[derive(Parser)]
#[command(name = "widom", version, about = "Chebyshev numbers, Widom factors and potential theory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run {
        config: PathBuf,
        /// Write output here instead of the configured path or stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads for degree sweeps.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Parse and validate a configuration file without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            output,
            format,
            jobs,
        } => {
            let overrides = Overrides {
                output,
                format: format.map(|f| match f {
                    Format::Csv => OutputFormat::Csv,
                    Format::Json => OutputFormat::Json,
                }),
                jobs,
            };
            match run_file(&config, &overrides) {
                Ok(rendered) => match rendered.output {
                    Some(path) => match std::fs::write(&path, rendered.text) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => {
                            eprintln!("{}", error_record("cli", "write_output", &format!("{}: {e}", path.display())));
                            ExitCode::FAILURE
                        }
                    },
                    None => {
                        print!("{}", rendered.text);
                        ExitCode::SUCCESS
                    }
                },
                Err(record) => {
                    eprintln!("{record}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Validate { config } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{}", error_record("cli", "read_config", &format!("{}: {e}", config.display())));
                    return ExitCode::FAILURE;
                }
            };
            match parse_config(&text) {
                Ok(cfg) => {
                    println!("valid: {} experiment on {} component(s)", cfg.kind.name(), cfg.components.len());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}", error_record("cli", "parse_config", &e.to_string()));
                    ExitCode::FAILURE
                }
            }
        }
    }
}
