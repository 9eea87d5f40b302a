//! Command-line front end for `cpa_gmac`.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use clap::Parser;

pub use args::Cli;
pub use error::CliError;

/// Parses `argv`, runs the command and writes its CSV and manifest.
/// Returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli, argv: Vec<String>) -> Result<(), CliError> {
    let exec = || -> Result<(), CliError> {
        let r = commands::execute(&cli.command)?;
        let manifest = output::RunManifest::new(argv.iter().skip(1).cloned().collect(), r.params);
        output::emit(&r.rows, &manifest, r.out.as_deref())
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?
            .install(exec),
        None => exec(),
    }
}
