//! The `polybase` command line: argument and config handling, CSV writers,
//! checkpoint files and the thread pool around the `polybase` core crate.

pub mod args;
pub mod checkpoint;
mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

/// Everything a subcommand needs besides its own flags.
pub struct Ctx<'a> {
    pub pool: rayon::ThreadPool,
    pub threads: usize,
    pub dry_run: bool,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 on success, 1 for invalid input, 2 for runtime failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = config::load_and_merge(args).and_then(|args| match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, stdout, stderr),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(stdout, "{}", e.render())?;
            Ok(())
        }
        Err(e) => Err(CliError::invalid(e.render().to_string().trim_start_matches("error: ").trim_end())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if cli.threads == Some(0) {
        return Err(CliError::invalid("--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::runtime(format!("cannot start worker pool: {e}")))?;
    let threads = pool.current_num_threads();

    let mut file = match (&cli.output, cli.dry_run) {
        (Some(path), false) => Some(BufWriter::new(File::create(path).map_err(|e| {
            CliError::runtime(format!("cannot create {}: {e}", path.display()))
        })?)),
        _ => None,
    };
    let out: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => stdout,
    };
    let mut ctx = Ctx {
        pool,
        threads,
        dry_run: cli.dry_run,
        out,
        err: stderr,
    };
    match &cli.command {
        Command::Digits(a) => commands::numbers::digits(&mut ctx, a),
        Command::Search(a) => commands::search::search(&mut ctx, a),
        Command::SequenceS(a) => commands::sequence::sequence_s(&mut ctx, a),
        Command::Slopes(a) => commands::sequence::slopes(&mut ctx, a),
        Command::Graham(a) => commands::numbers::graham(&mut ctx, a),
        Command::Special(a) => commands::numbers::special(&mut ctx, a),
        Command::Budget(a) => commands::budget::budget(&mut ctx, a),
        Command::CheckpointInspect(a) => commands::search::inspect(&mut ctx, a),
    }?;
    ctx.out.flush()?;
    Ok(())
}
