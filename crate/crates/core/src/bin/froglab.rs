use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use froglab::labcli::{self, LabError};

#[derive(Parser)]
#[command(name = "froglab", version, about = "Frog-model passage-time experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant and oracle battery.
    Verify {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the tables of a results directory.
    Show { dir: PathBuf },
}

fn fail(e: LabError) -> ExitCode {
    eprintln!("froglab: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, output } => {
            let mut cfg = match labcli::load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Some(o) = output {
                cfg.output = o;
            }
            match labcli::run(&cfg) {
                Ok(s) => {
                    println!(
                        "{}: {} tasks ({} computed, {} cached), {} censored -> {}",
                        s.kind.name(),
                        s.tasks,
                        s.computed,
                        s.tasks - s.computed,
                        s.censored,
                        s.output.display()
                    );
                    if s.censored > 0 {
                        eprintln!("froglab: horizon cap exhausted on {} replicas; results are partial", s.censored);
                    }
                    ExitCode::from(s.exit_code() as u8)
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify { config, output } => {
            let mut cfg = match labcli::load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Some(o) = output {
                cfg.output = o;
            }
            match labcli::verify(&cfg) {
                Ok(r) => {
                    print!("{}", r.table());
                    for s in &r.suites {
                        for w in &s.witnesses {
                            eprintln!("violation: {w}");
                        }
                    }
                    ExitCode::from(r.exit_code() as u8)
                }
                Err(e) => fail(e),
            }
        }
        Command::Show { dir } => match labcli::show(&dir) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
