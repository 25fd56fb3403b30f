//! Command-line front end: CSV data for decoherence curves, non-Markovianity
//! maps and two-qubit measures, figure presets, and a self-check.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod presets;
pub mod selfcheck;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
pub use error::{CliError, Result};

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decoherence(a) => {
            let out = commands::decoherence(&a)?;
            println!("{}", out.display());
        }
        Command::NmMap(a) => {
            let out = commands::nm_map(&a)?;
            println!("{}", out.display());
        }
        Command::Entanglement(a) => {
            let out = commands::entanglement(&a)?;
            println!("{}", out.display());
            println!("{}", output::sidecar_path(&out).display());
        }
        Command::Selfcheck(a) => selfcheck::run(a.seed, a.perturb_residue, &mut std::io::stdout().lock())?,
        Command::Preset(a) => {
            for f in presets::run(&a.name, &a.out_dir)? {
                println!("{}", f.display());
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
