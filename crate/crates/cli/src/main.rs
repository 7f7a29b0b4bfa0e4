// `!(a < b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var("RESP_DDE_THREADS") {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map_err(|_| {
            CliError::Validation(format!(
                "RESP_DDE_THREADS must be a non-negative integer, got `{v}`"
            ))
        }),
        _ => Ok(0),
    }
}

fn real_main() -> Result<String, CliError> {
    let argv = config::merge(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    resp_dde::exec::init_thread_pool(threads_from_env()?).map_err(CliError::Validation)?;
    let exec = if cli.sequential {
        resp_dde::Execution::Sequential
    } else {
        resp_dde::Execution::Parallel
    };
    commands::run(&cli.command, exec)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(summary) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(summary.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
