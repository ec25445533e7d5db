use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use einselect::selfcheck::{InfoConvention, SelfCheckOptions};
use einselect_cli::{CliError, RunOptions, CONFIG_SCHEMA, MANIFEST_FILE};

#[derive(Parser)]
#[command(name = "einselect", version, about = "Decoherence and einselection experiments")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config
    Run {
        config: PathBuf,
        /// Worker threads (overrides the config)
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory (overrides the config and EINSELECT_OUTPUT_ROOT)
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the fast invariant suite
    Selfcheck {
        /// Negative control: evaluate information with the sign flipped
        #[arg(long, hide = true)]
        invert_info_convention: bool,
    },
    /// Print the JSON schema of the config format
    Schema,
}

fn fail(err: CliError) -> ExitCode {
    eprintln!("einselect: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    match Args::parse().command {
        Command::Run {
            config,
            workers,
            output_dir,
        } => match einselect_cli::run(&config, &RunOptions { workers, output_dir }) {
            Ok(summary) => {
                for o in &summary.manifest.outputs {
                    println!("{}  {}", o.sha256, summary.output_dir.join(&o.file).display());
                }
                println!("manifest: {}", summary.output_dir.join(MANIFEST_FILE).display());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Selfcheck {
            invert_info_convention,
        } => {
            let info_convention = if invert_info_convention {
                InfoConvention::Inverted
            } else {
                InfoConvention::Standard
            };
            let (report, status) = einselect_cli::run_selfcheck(SelfCheckOptions { info_convention });
            print!("{report}");
            match status {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Schema => {
            print!("{CONFIG_SCHEMA}");
            ExitCode::SUCCESS
        }
    }
}
