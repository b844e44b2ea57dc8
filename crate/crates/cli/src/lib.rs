//! Command-line front end for `sgo-core`.

pub mod args;
mod commands;
mod error;
mod input;
mod output;

use std::io::Write;

pub use args::{Cli, Command, Format};
pub use commands::MAX_GRID_ENV;
pub use error::CliError;
pub use input::parse_polynomial;
pub use output::FORMAT_VERSION;

/// Runs one invocation, writing the report to `out`. Verification failures
/// are reported after the full table has been written.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            if n == 0 {
                return Err(CliError::Config("--threads must be >= 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Config(e.to_string()))?
    };
    let (table, failure) = pool.install(|| dispatch(cli))?;
    let default_format = match cli.command {
        Command::StableSet(_) => Format::Json,
        _ => Format::Csv,
    };
    match cli.format.unwrap_or(default_format) {
        Format::Csv => table.write_csv(out)?,
        Format::Json => table.write_json(out)?,
    }
    out.flush()?;
    failure.map_or(Ok(()), Err)
}

fn dispatch(cli: &Cli) -> Result<(output::Table, Option<CliError>), CliError> {
    let table = match &cli.command {
        Command::GridMin(a) => commands::grid(a, false, cli.force)?,
        Command::GridMax(a) => commands::grid(a, true, cli.force)?,
        Command::Expect(a) => commands::expect(a)?,
        Command::Bounds(a) => commands::bounds(a)?,
        Command::Converge(a) => commands::converge(a, cli.force)?,
        Command::Verify(a) => {
            let o = commands::verify(a, cli.force)?;
            eprintln!("verify: {} checks, {} failed", o.checks, o.failures);
            let failure = (o.failures > 0).then(|| {
                CliError::Verification(format!("{} of {} checks failed", o.failures, o.checks))
            });
            return Ok((o.table, failure));
        }
        Command::StableSet(a) => commands::stable_set(a, cli.force)?,
        Command::Enclose(a) => commands::enclose(a, cli.force)?,
    };
    Ok((table, None))
}
